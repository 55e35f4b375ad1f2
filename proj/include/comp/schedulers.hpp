// SPDX-License-Identifier: Apache-2.0
//
// comp-sched: channel-norm based user scheduling for cooperative downlink
// Copyright (C) 2026 The comp-sched authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef COMP_SCHEDULERS_HPP
#define COMP_SCHEDULERS_HPP

#include "comp/channel.hpp"
#include "comp/rng.hpp"
#include "comp/types.hpp"

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace comp
{

enum class SchedulerKind
{
    NUS,
    LocalNUS,
    LUS,
    SUS,
    GUS,
    RUS
};

std::string to_string(SchedulerKind kind);
SchedulerKind scheduler_from_string(std::string_view name); // case-insensitive

// Per-user information available to the control unit, one struct per
// feedback class.

// Sublink norms ||h_{i,n}|| only.
struct NormView
{
    std::vector<double> norms;
    double sigma2 = 1.0;

    double norm2() const;
};

// Full local sublink plus all sublink norms.
struct LocalView
{
    std::size_t home_cell = 0;
    CRowVec local;
    std::vector<double> norms;
    double sigma2 = 1.0;

    double norm2() const;
};

// Large-scale gains alpha_{i,n} only.
struct LargeScaleView
{
    std::vector<double> alpha;
    double sigma2 = 1.0;

    double total() const;
};

// Entire global channel.
struct FullView
{
    CRowVec h;
    double sigma2 = 1.0;
};

NormView make_norm_view(const GlobalChannel& h, double sigma2);
LocalView make_local_view(const GlobalChannel& h, std::size_t home_cell, double sigma2);
LargeScaleView make_large_scale_view(std::span<const double> alpha_row, double sigma2);
FullView make_full_view(const GlobalChannel& h, double sigma2);

// h (I - H^H (H H^H)^-1 H) h^H. H holds the selected users' channels as
// rows and must have full row rank.
double projected_norm(const CRowVec& h, const CMat& H_selected);

// sum_n ||h_{i,n}|| ||h_{j,n}|| / (||h_i|| ||h_j||), an upper bound on cos theta.
double mu_upper(std::span<const double> norms_i, std::span<const double> norms_j);

// ||h_i||^2 (1 - sum_j mu_j^2). Not clamped at zero.
double nu_lower(double norm2_i, std::span<const double> mus);

// mu_upper with the candidate's home-cell summand replaced by
// |h_{i,m} h_{j,m}^H| when j shares the home cell m.
double mu_bar(const LocalView& candidate, const LocalView& selected);

double mu_lus(std::span<const double> alpha_i, std::span<const double> alpha_j);
double nu_lus(std::span<const double> alpha_i, std::span<const double> mus);

struct ScheduleStep
{
    std::size_t pool_size = 0;  // |T_l| before the selection of this step
    std::size_t chosen = 0;
    double metric = 0.0;        // winning metric (SNR, nu / sigma^2 or sum rate)
    std::vector<std::size_t> candidates;
    std::vector<double> bound;  // per candidate: mu against the latest pick, or its trial metric
    std::vector<double> nu;     // per candidate: nu lower bound or projected norm
};

struct ScheduleResult
{
    std::vector<std::size_t> selected;
    std::vector<ScheduleStep> steps;
};

// Maximum group size, min(M N_t, M K).
struct ScheduleLimits
{
    std::size_t max_users = 1;
};

// All schedulers below take the candidate pool as user indices into the
// view arrays; views of users outside the pool are never read.
ScheduleResult nus_schedule(std::span<const NormView> views, std::span<const std::size_t> pool, double epsilon,
                            const ScheduleLimits& limits);
ScheduleResult localnus_schedule(std::span<const LocalView> views, std::span<const std::size_t> pool,
                                 double epsilon, const ScheduleLimits& limits);
ScheduleResult lus_schedule(std::span<const LargeScaleView> views, std::span<const std::size_t> pool,
                            double epsilon, const ScheduleLimits& limits);
ScheduleResult sus_schedule(std::span<const FullView> views, std::span<const std::size_t> pool, double epsilon,
                            const ScheduleLimits& limits);

// Sum rate of a user set under the caller's precoder; used by GUS.
using RateOracle = std::function<double(std::span<const std::size_t>)>;

ScheduleResult gus_schedule(std::span<const std::size_t> pool, const ScheduleLimits& limits,
                            const RateOracle& sum_rate);
ScheduleResult rus_schedule(std::span<const std::size_t> pool, const ScheduleLimits& limits,
                            SeededRandomStream& rng);

struct RrPeriod
{
    std::vector<std::vector<std::size_t>> groups;
    std::vector<ScheduleResult> results;

    std::size_t Q() const { return groups.size(); }
};

// Schedules the remaining pool at slot `slot`.
using SlotScheduler = std::function<ScheduleResult(std::span<const std::size_t> pool, std::size_t slot)>;
// Picks the single best user of a non-empty pool.
using FallbackPicker = std::function<std::size_t(std::span<const std::size_t> pool)>;

// Serves the whole pool once, removing each slot's selection from the pool.
// An empty selection on a non-empty pool is replaced by `fallback`
// (lowest index when not given).
RrPeriod rr_wrap(const SlotScheduler& scheduler, std::vector<std::size_t> pool,
                 const FallbackPicker& fallback = {});

} // namespace comp

#endif
