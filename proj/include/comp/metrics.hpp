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

#ifndef COMP_METRICS_HPP
#define COMP_METRICS_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace comp
{

// p-quantile with linear interpolation between order statistics at
// h = (n - 1) p.
double percentile(std::span<const double> samples, double p);

struct ThroughputStats
{
    double cell_average = 0.0; // mean over all users
    double cell_edge = 0.0;    // 5th percentile over all users
    std::vector<double> per_cell_average;
    std::vector<double> per_cell_edge;
    std::size_t samples = 0;
};

// Pools every (drop, user) sample; `cell` gives each sample's home cell.
ThroughputStats throughput_stats(std::span<const double> throughput, std::span<const std::size_t> cell,
                                 std::size_t cells);

struct CdfPoint
{
    double x = 0.0;
    double F = 0.0;
};

std::vector<CdfPoint> empirical_cdf(std::span<const double> samples);

// Two-sample Kolmogorov-Smirnov statistic.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

struct PairedTTest
{
    double mean_diff = 0.0; // mean of a - b
    double t = 0.0;
    double p_two_sided = 1.0;
    double p_greater = 1.0; // H1: mean(a - b) > 0
    std::size_t n = 0;
};

PairedTTest paired_t_test(std::span<const double> a, std::span<const double> b);

} // namespace comp

#endif
