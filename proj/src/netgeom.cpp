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

#include "comp/netgeom.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <set>
#include <utility>

namespace comp
{

namespace
{

using Axial = std::pair<int, int>;

constexpr std::array<Axial, 6> kHexNeighbours{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, -1}, {-1, 1}}};

// Mutually adjacent cells; the first M form the coordinated cluster.
constexpr std::array<Axial, 3> kClusterCells{{{0, 0}, {1, 0}, {0, 1}}};

Point axial_to_point(const Axial& a, double spacing)
{
    const double q = a.first;
    const double r = a.second;
    return {spacing * (q + 0.5 * r), spacing * (std::sqrt(3.0) / 2.0) * r};
}

constexpr int kMaxRejections = 100000;

} // namespace

bool NetworkLayout::in_cell(std::size_t m, const Point& p) const
{
    if (m >= coordinated_bs.size())
        throw InvalidInput("in_cell: cell index out of range");
    const Point& c = coordinated_bs[m];
    const double dx = p.x - c.x;
    const double dy = p.y - c.y;
    const double half = 0.5 * bs_to_bs_distance;
    if (kind == LayoutKind::Linear)
        return std::abs(dy) < 1e-9 && std::abs(dx) <= half;
    // Voronoi cell of a hex lattice point: within half the spacing along
    // each of the three neighbour directions.
    for (int k = 0; k < 3; ++k) {
        const double ang = k * std::numbers::pi / 3.0;
        if (std::abs(dx * std::cos(ang) + dy * std::sin(ang)) > half)
            return false;
    }
    return true;
}

bool NetworkLayout::admissible(const Point& p) const
{
    for (const auto& bs : coordinated_bs)
        if (distance(p, bs) < min_distance_m)
            return false;
    for (const auto& bs : interferer_bs)
        if (distance(p, bs) < min_distance_m)
            return false;
    return true;
}

NetworkLayout build_layout(const LayoutConfig& config)
{
    if (!(config.bs_spacing_m > 0.0))
        throw InvalidInput("build_layout: BS spacing must be positive");
    if (config.coordinated < 1)
        throw InvalidInput("build_layout: need at least one coordinated BS");
    if (config.antennas_per_bs < 1 || config.users_per_cell < 1)
        throw InvalidInput("build_layout: antennas and users per cell must be positive");
    if (!(config.max_power_w > 0.0))
        throw InvalidInput("build_layout: max power must be positive");
    if (config.min_distance_m < 0.0)
        throw InvalidInput("build_layout: negative exclusion distance");

    NetworkLayout layout;
    layout.kind = config.kind;
    layout.bs_to_bs_distance = config.bs_spacing_m;
    layout.antennas_per_bs = config.antennas_per_bs;
    layout.users_per_cell = config.users_per_cell;
    layout.max_power_w = config.max_power_w;
    layout.bandwidth_hz = config.bandwidth_hz;
    layout.noise_figure_db = config.noise_figure_db;
    layout.min_distance_m = config.min_distance_m;

    if (config.kind == LayoutKind::Linear) {
        if (config.coordinated > 2)
            throw InvalidInput("build_layout: linear layout supports at most two BSs");
        if (config.with_interferers)
            throw InvalidInput("build_layout: linear layout has no interferer ring");
        const double d = 0.5 * config.bs_spacing_m;
        if (config.coordinated == 1)
            layout.coordinated_bs = {{0.0, 0.0}};
        else
            layout.coordinated_bs = {{-d, 0.0}, {d, 0.0}};
        return layout;
    }

    if (config.coordinated > kClusterCells.size())
        throw InvalidInput("build_layout: hexagonal cluster supports M in {1,2,3}");

    std::set<Axial> cluster;
    for (std::size_t m = 0; m < config.coordinated; ++m) {
        cluster.insert(kClusterCells[m]);
        layout.coordinated_bs.push_back(axial_to_point(kClusterCells[m], config.bs_spacing_m));
    }

    if (config.with_interferers) {
        std::set<Axial> ring;
        for (const auto& c : cluster)
            for (const auto& [dq, dr] : kHexNeighbours) {
                Axial n{c.first + dq, c.second + dr};
                if (!cluster.contains(n))
                    ring.insert(n);
            }
        Point centroid;
        for (const auto& p : layout.coordinated_bs) {
            centroid.x += p.x / static_cast<double>(config.coordinated);
            centroid.y += p.y / static_cast<double>(config.coordinated);
        }
        for (const auto& a : ring)
            layout.interferer_bs.push_back(axial_to_point(a, config.bs_spacing_m));
        // Counter-clockwise around the cluster centroid, for a stable ordering.
        std::sort(layout.interferer_bs.begin(), layout.interferer_bs.end(), [&](const Point& a, const Point& b) {
            return std::atan2(a.y - centroid.y, a.x - centroid.x) < std::atan2(b.y - centroid.y, b.x - centroid.x);
        });
    }
    return layout;
}

UserDrop drop_users(const NetworkLayout& layout, SeededRandomStream& rng)
{
    UserDrop drop;
    drop.positions.reserve(layout.users());
    drop.home_cell.reserve(layout.users());
    const double half = 0.5 * layout.bs_to_bs_distance;
    const double radius = layout.bs_to_bs_distance / std::sqrt(3.0);

    for (std::size_t m = 0; m < layout.cells(); ++m) {
        const Point& c = layout.coordinated_bs[m];
        for (std::size_t k = 0; k < layout.users_per_cell; ++k) {
            int attempts = 0;
            while (true) {
                if (++attempts > kMaxRejections)
                    throw NumericalError("drop_users: rejection sampling failed, exclusion zone covers the cell");
                Point p;
                if (layout.kind == LayoutKind::Linear) {
                    p = {c.x + rng.uniform(-half, half), 0.0};
                } else {
                    p = {c.x + rng.uniform(-radius, radius), c.y + rng.uniform(-radius, radius)};
                    if (!layout.in_cell(m, p))
                        continue;
                }
                if (!layout.admissible(p))
                    continue;
                drop.positions.push_back(p);
                drop.home_cell.push_back(m);
                break;
            }
        }
    }
    return drop;
}

UserDrop place_users(const NetworkLayout& layout, std::vector<Point> positions, std::vector<std::size_t> home_cell)
{
    if (!home_cell.empty() && home_cell.size() != positions.size())
        throw InvalidInput("place_users: home_cell size mismatch");
    UserDrop drop;
    for (std::size_t i = 0; i < positions.size(); ++i) {
        const Point& p = positions[i];
        if (!layout.admissible(p))
            throw InvalidInput("place_users: user " + std::to_string(i) + " violates the BS exclusion distance");
        std::size_t home = 0;
        if (home_cell.empty()) {
            for (std::size_t m = 1; m < layout.cells(); ++m)
                if (distance(p, layout.coordinated_bs[m]) < distance(p, layout.coordinated_bs[home]))
                    home = m;
        } else {
            home = home_cell[i];
            if (home >= layout.cells())
                throw InvalidInput("place_users: home cell out of range");
        }
        drop.positions.push_back(p);
        drop.home_cell.push_back(home);
    }
    return drop;
}

double pathloss_db(double distance_m, PathlossPreset preset)
{
    if (!(distance_m >= 1.0))
        throw InvalidInput("pathloss_db: distance below the 1 m reference");
    const double intercept = preset == PathlossPreset::TwoCell ? 35.3 : 36.3;
    return -intercept - 37.6 * std::log10(distance_m);
}

double thermal_noise_w(double bandwidth_hz, double noise_figure_db)
{
    if (!(bandwidth_hz > 0.0))
        throw InvalidInput("thermal_noise_w: bandwidth must be positive");
    const double dbm = -174.0 + 10.0 * std::log10(bandwidth_hz) + noise_figure_db;
    return std::pow(10.0, (dbm - 30.0) / 10.0);
}

LargeScaleGains compute_gains(const NetworkLayout& layout, const UserDrop& drop, double shadowing_sigma_db,
                              PathlossPreset preset, SeededRandomStream& rng)
{
    if (shadowing_sigma_db < 0.0)
        throw InvalidInput("compute_gains: negative shadowing deviation");
    const std::size_t users = drop.size();
    const std::size_t cells = layout.cells();

    LargeScaleGains gains;
    gains.preset = preset;
    gains.alpha.resize(static_cast<Eigen::Index>(users), static_cast<Eigen::Index>(cells));
    gains.sigma2.assign(users, 0.0);
    gains.thermal_noise_w = thermal_noise_w(layout.bandwidth_hz, layout.noise_figure_db);

    auto link_gain = [&](const Point& u, const Point& bs) {
        const double shadow = shadowing_sigma_db > 0.0 ? shadowing_sigma_db * rng.normal() : 0.0;
        return std::pow(10.0, (pathloss_db(distance(u, bs), preset) + shadow) / 10.0);
    };

    for (std::size_t i = 0; i < users; ++i) {
        const Point& u = drop.positions[i];
        for (std::size_t n = 0; n < cells; ++n)
            gains.alpha(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(n)) = link_gain(u, layout.coordinated_bs[n]);
        double interference = 0.0;
        for (const auto& bs : layout.interferer_bs)
            interference += layout.max_power_w * link_gain(u, bs);
        gains.sigma2[i] = interference + gains.thermal_noise_w;
    }
    return gains;
}

std::string to_string(LayoutKind kind)
{
    return kind == LayoutKind::Linear ? "linear" : "hexagonal";
}

std::string to_string(PathlossPreset preset)
{
    return preset == PathlossPreset::TwoCell ? "two-cell" : "campaign";
}

LayoutKind layout_kind_from_string(const std::string& s)
{
    if (s == "linear" || s == "two-cell")
        return LayoutKind::Linear;
    if (s == "hexagonal" || s == "hex")
        return LayoutKind::Hexagonal;
    throw InvalidInput("unknown layout kind '" + s + "'");
}

PathlossPreset pathloss_preset_from_string(const std::string& s)
{
    if (s == "two-cell")
        return PathlossPreset::TwoCell;
    if (s == "campaign")
        return PathlossPreset::Campaign;
    throw InvalidInput("unknown pathloss preset '" + s + "'");
}

void to_json(nlohmann::json& j, const Point& p)
{
    j = nlohmann::json::array({p.x, p.y});
}

void from_json(const nlohmann::json& j, Point& p)
{
    p.x = j.at(0).get<double>();
    p.y = j.at(1).get<double>();
}

void to_json(nlohmann::json& j, const NetworkLayout& layout)
{
    j = nlohmann::json{{"kind", to_string(layout.kind)},
                       {"coordinated_bs", layout.coordinated_bs},
                       {"interferer_bs", layout.interferer_bs},
                       {"bs_to_bs_distance_m", layout.bs_to_bs_distance},
                       {"antennas_per_bs", layout.antennas_per_bs},
                       {"users_per_cell", layout.users_per_cell},
                       {"max_power_w", layout.max_power_w},
                       {"bandwidth_hz", layout.bandwidth_hz},
                       {"noise_figure_db", layout.noise_figure_db},
                       {"min_distance_m", layout.min_distance_m}};
}

void from_json(const nlohmann::json& j, NetworkLayout& layout)
{
    layout.kind = layout_kind_from_string(j.at("kind").get<std::string>());
    layout.coordinated_bs = j.at("coordinated_bs").get<std::vector<Point>>();
    layout.interferer_bs = j.at("interferer_bs").get<std::vector<Point>>();
    layout.bs_to_bs_distance = j.at("bs_to_bs_distance_m").get<double>();
    layout.antennas_per_bs = j.at("antennas_per_bs").get<std::size_t>();
    layout.users_per_cell = j.at("users_per_cell").get<std::size_t>();
    layout.max_power_w = j.at("max_power_w").get<double>();
    layout.bandwidth_hz = j.at("bandwidth_hz").get<double>();
    layout.noise_figure_db = j.at("noise_figure_db").get<double>();
    layout.min_distance_m = j.at("min_distance_m").get<double>();
}

void to_json(nlohmann::json& j, const UserDrop& drop)
{
    j = nlohmann::json{{"positions", drop.positions}, {"home_cell", drop.home_cell}};
}

void from_json(const nlohmann::json& j, UserDrop& drop)
{
    drop.positions = j.at("positions").get<std::vector<Point>>();
    drop.home_cell = j.at("home_cell").get<std::vector<std::size_t>>();
    if (drop.positions.size() != drop.home_cell.size())
        throw InvalidInput("UserDrop: positions/home_cell length mismatch");
}

void to_json(nlohmann::json& j, const LayoutConfig& c)
{
    j = nlohmann::json{{"kind", to_string(c.kind)},
                       {"coordinated", c.coordinated},
                       {"with_interferers", c.with_interferers},
                       {"bs_spacing_m", c.bs_spacing_m},
                       {"antennas_per_bs", c.antennas_per_bs},
                       {"users_per_cell", c.users_per_cell},
                       {"max_power_w", c.max_power_w},
                       {"bandwidth_hz", c.bandwidth_hz},
                       {"noise_figure_db", c.noise_figure_db},
                       {"min_distance_m", c.min_distance_m}};
}

void from_json(const nlohmann::json& j, LayoutConfig& c)
{
    LayoutConfig d;
    c.kind = layout_kind_from_string(j.value("kind", to_string(d.kind)));
    c.coordinated = j.value("coordinated", d.coordinated);
    c.with_interferers = j.value("with_interferers", d.with_interferers);
    c.bs_spacing_m = j.value("bs_spacing_m", d.bs_spacing_m);
    c.antennas_per_bs = j.value("antennas_per_bs", d.antennas_per_bs);
    c.users_per_cell = j.value("users_per_cell", d.users_per_cell);
    c.max_power_w = j.value("max_power_w", d.max_power_w);
    c.bandwidth_hz = j.value("bandwidth_hz", d.bandwidth_hz);
    c.noise_figure_db = j.value("noise_figure_db", d.noise_figure_db);
    c.min_distance_m = j.value("min_distance_m", d.min_distance_m);
}

} // namespace comp
