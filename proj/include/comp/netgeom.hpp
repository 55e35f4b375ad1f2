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

#ifndef COMP_NETGEOM_HPP
#define COMP_NETGEOM_HPP

#include "comp/rng.hpp"
#include "comp/types.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace comp
{

enum class LayoutKind
{
    Hexagonal, // coordinated cluster of mutually adjacent hex cells plus an interferer ring
    Linear     // two BSs on a line at -d and +d, users on the segment between them
};

// The two-cell study and the hexagonal campaign use different intercepts
// (35.3 dB vs 36.3 dB at 1 m). Both are kept.
enum class PathlossPreset
{
    TwoCell,
    Campaign
};

struct LayoutConfig
{
    LayoutKind kind = LayoutKind::Hexagonal;
    std::size_t coordinated = 3;  // M
    bool with_interferers = true; // surround the cluster with its ring of neighbour cells
    double bs_spacing_m = 500.0;
    std::size_t antennas_per_bs = 4; // N_t
    std::size_t users_per_cell = 20; // K
    double max_power_w = 40.0;       // P_m, same for every BS
    double bandwidth_hz = 10e6;
    double noise_figure_db = 9.0;
    double min_distance_m = 35.0; // user exclusion radius around every BS
};

struct NetworkLayout
{
    LayoutKind kind = LayoutKind::Hexagonal;
    std::vector<Point> coordinated_bs;
    std::vector<Point> interferer_bs;
    double bs_to_bs_distance = 0.0;
    std::size_t antennas_per_bs = 1;
    std::size_t users_per_cell = 1;
    double max_power_w = 0.0;
    double bandwidth_hz = 0.0;
    double noise_figure_db = 0.0;
    double min_distance_m = 0.0;

    std::size_t cells() const { return coordinated_bs.size(); }
    std::size_t users() const { return cells() * users_per_cell; }
    std::size_t total_antennas() const { return cells() * antennas_per_bs; }

    // True when p lies in the geometric cell of coordinated BS m.
    bool in_cell(std::size_t m, const Point& p) const;
    // True when p keeps the exclusion distance to every BS (coordinated and interfering).
    bool admissible(const Point& p) const;
};

// User i_{km} = K*m + k (0-based). home_cell[i] is the cell it was dropped in.
struct UserDrop
{
    std::vector<Point> positions;
    std::vector<std::size_t> home_cell;

    std::size_t size() const { return positions.size(); }
};

struct LargeScaleGains
{
    RMat alpha;                 // users x M linear power gains to the coordinated BSs
    std::vector<double> sigma2; // receiver noise plus out-of-cluster interference, watts
    double thermal_noise_w = 0.0;
    PathlossPreset preset = PathlossPreset::Campaign;

    std::size_t users() const { return static_cast<std::size_t>(alpha.rows()); }
    std::size_t cells() const { return static_cast<std::size_t>(alpha.cols()); }
};

NetworkLayout build_layout(const LayoutConfig& config);

UserDrop drop_users(const NetworkLayout& layout, SeededRandomStream& rng);

// Places users at caller-chosen positions. home_cell defaults to the cell
// whose BS is nearest. Positions are validated against admissible().
UserDrop place_users(const NetworkLayout& layout, std::vector<Point> positions,
                     std::vector<std::size_t> home_cell = {});

double pathloss_db(double distance_m, PathlossPreset preset);

// kTB with noise figure: -174 dBm/Hz + 10 log10(B) + NF, returned in watts.
double thermal_noise_w(double bandwidth_hz, double noise_figure_db);

// Linear gains for every (user, BS) link with i.i.d. lognormal shadowing.
// Interfering BSs transmit continuously at max_power_w.
LargeScaleGains compute_gains(const NetworkLayout& layout, const UserDrop& drop,
                              double shadowing_sigma_db, PathlossPreset preset,
                              SeededRandomStream& rng);

std::string to_string(LayoutKind kind);
std::string to_string(PathlossPreset preset);
LayoutKind layout_kind_from_string(const std::string& s);
PathlossPreset pathloss_preset_from_string(const std::string& s);

void to_json(nlohmann::json& j, const Point& p);
void from_json(const nlohmann::json& j, Point& p);
void to_json(nlohmann::json& j, const NetworkLayout& layout);
void from_json(const nlohmann::json& j, NetworkLayout& layout);
void to_json(nlohmann::json& j, const UserDrop& drop);
void from_json(const nlohmann::json& j, UserDrop& drop);
void to_json(nlohmann::json& j, const LayoutConfig& config);
void from_json(const nlohmann::json& j, LayoutConfig& config);

} // namespace comp

#endif
