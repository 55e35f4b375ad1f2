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

#ifndef COMP_CONFIG_HPP
#define COMP_CONFIG_HPP

#include "comp/netgeom.hpp"
#include "comp/schedulers.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace comp
{

enum class ExperimentKind
{
    AnglePdf,
    Tightness,
    ThresholdSweep,
    CdfCampaign,
    DelayCampaign
};

enum class CsiMode
{
    Perfect,
    Quantized
};

struct CsiConfig
{
    CsiMode mode = CsiMode::Perfect;
    double per_user_bits = 12.0;  // B_u
    double total_bits = 432.0;    // B_t
};

struct MobilityConfig
{
    double speed_kmh = 0.0;
    double carrier_hz = 2e9;
    double slot_s = 5e-3;
    std::size_t delay_slots = 0; // slots between scheduling and transmission
};

// Named threshold presets.
// "standard": NUS 0.4, LocalNUS 0.8, LUS 0.8. "alternate": LocalNUS 0.4, NUS 0.8,
// LUS 0.8. SUS uses 0.5 in both.
std::map<SchedulerKind, double> epsilon_preset(const std::string& name);

struct CampaignConfig
{
    LayoutConfig layout;
    PathlossPreset preset = PathlossPreset::Campaign;
    double shadowing_db = 8.0;
    double angular_spread_deg = 15.0;
    std::size_t drops = 100;
    std::vector<SchedulerKind> schedulers{SchedulerKind::RUS, SchedulerKind::LUS, SchedulerKind::NUS,
                                          SchedulerKind::LocalNUS, SchedulerKind::SUS, SchedulerKind::GUS};
    std::map<SchedulerKind, double> epsilon = epsilon_preset("standard");
    CsiConfig csi;
    MobilityConfig mobility;
    std::size_t threads = 1;

    double epsilon_for(SchedulerKind kind) const;
};

struct AnglePdfConfig
{
    double bs_spacing_m = 500.0; // BSs at -250 m and +250 m
    std::vector<std::pair<double, double>> cases{{0, 0}, {50, 100}, {100, 100}, {-50, 100}, {-100, 100}};
    std::size_t mc_samples = 1000000;
    std::size_t v1_samples = 256;
    std::size_t bins = 50;
    double tolerance = 1e-4; // L1 change between truncation levels
    std::size_t r_start = 4;
    std::size_t r_max = 256;
};

// -200 m .. 200 m in 25 m steps.
std::vector<double> default_tightness_grid();

struct TightnessConfig
{
    double bs_spacing_m = 500.0;
    std::size_t antennas_per_bs = 2;
    double d1 = -50.0;
    std::vector<double> d2_grid = default_tightness_grid();
    std::size_t realizations = 10000;
};

struct SweepConfig
{
    std::vector<SchedulerKind> schedulers{SchedulerKind::NUS, SchedulerKind::LocalNUS, SchedulerKind::LUS};
    std::vector<double> epsilons{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
};

struct ExperimentConfig
{
    ExperimentKind kind = ExperimentKind::CdfCampaign;
    std::uint64_t seed = 1;
    CampaignConfig campaign;
    AnglePdfConfig angle;
    TightnessConfig tightness;
    SweepConfig sweep;
};

std::string to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(const std::string& s);
std::string to_string(CsiMode mode);
CsiMode csi_mode_from_string(const std::string& s);

// Validates ranges; throws InvalidInput naming the offending key.
void validate(const ExperimentConfig& config);

// Every key is optional; absent keys keep the defaults above.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);
nlohmann::json to_json(const ExperimentConfig& config);

} // namespace comp

#endif
