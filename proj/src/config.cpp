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

#include "comp/config.hpp"

#include <fstream>
#include <sstream>

namespace comp
{

using nlohmann::json;

std::map<SchedulerKind, double> epsilon_preset(const std::string& name)
{
    if (name == "standard")
        return {{SchedulerKind::NUS, 0.4}, {SchedulerKind::LocalNUS, 0.8}, {SchedulerKind::LUS, 0.8},
                {SchedulerKind::SUS, 0.5}};
    if (name == "alternate")
        return {{SchedulerKind::NUS, 0.8}, {SchedulerKind::LocalNUS, 0.4}, {SchedulerKind::LUS, 0.8},
                {SchedulerKind::SUS, 0.5}};
    throw InvalidInput("unknown epsilon preset '" + name + "'");
}

double CampaignConfig::epsilon_for(SchedulerKind kind) const
{
    const auto it = epsilon.find(kind);
    if (it == epsilon.end())
        throw InvalidInput("no epsilon configured for " + to_string(kind));
    return it->second;
}

std::string to_string(ExperimentKind kind)
{
    switch (kind) {
    case ExperimentKind::AnglePdf:
        return "angle-pdf";
    case ExperimentKind::Tightness:
        return "tightness";
    case ExperimentKind::ThresholdSweep:
        return "sweep";
    case ExperimentKind::CdfCampaign:
        return "campaign";
    case ExperimentKind::DelayCampaign:
        return "delay";
    }
    return "?";
}

ExperimentKind experiment_kind_from_string(const std::string& s)
{
    if (s == "angle-pdf")
        return ExperimentKind::AnglePdf;
    if (s == "tightness")
        return ExperimentKind::Tightness;
    if (s == "sweep" || s == "threshold-sweep")
        return ExperimentKind::ThresholdSweep;
    if (s == "campaign" || s == "cdf-campaign")
        return ExperimentKind::CdfCampaign;
    if (s == "delay" || s == "delay-campaign")
        return ExperimentKind::DelayCampaign;
    throw InvalidInput("unknown experiment kind '" + s + "'");
}

std::string to_string(CsiMode mode)
{
    return mode == CsiMode::Perfect ? "perfect" : "quantized";
}

CsiMode csi_mode_from_string(const std::string& s)
{
    if (s == "perfect")
        return CsiMode::Perfect;
    if (s == "quantized")
        return CsiMode::Quantized;
    throw InvalidInput("unknown csi mode '" + s + "'");
}

std::vector<double> default_tightness_grid()
{
    std::vector<double> g;
    for (int d = -200; d <= 200; d += 25)
        g.push_back(d);
    return g;
}

namespace
{

std::vector<SchedulerKind> parse_schedulers(const json& j)
{
    std::vector<SchedulerKind> out;
    for (const auto& s : j)
        out.push_back(scheduler_from_string(s.get<std::string>()));
    return out;
}

json schedulers_json(const std::vector<SchedulerKind>& v)
{
    json a = json::array();
    for (SchedulerKind k : v)
        a.push_back(to_string(k));
    return a;
}

void parse_campaign(const json& j, CampaignConfig& c)
{
    if (j.contains("layout"))
        c.layout = j.at("layout").get<LayoutConfig>();
    if (j.contains("pathloss"))
        c.preset = pathloss_preset_from_string(j.at("pathloss").get<std::string>());
    c.shadowing_db = j.value("shadowing_db", c.shadowing_db);
    c.angular_spread_deg = j.value("angular_spread_deg", c.angular_spread_deg);
    c.drops = j.value("drops", c.drops);
    c.threads = j.value("threads", c.threads);
    if (j.contains("schedulers"))
        c.schedulers = parse_schedulers(j.at("schedulers"));
    if (j.contains("epsilon_preset"))
        c.epsilon = epsilon_preset(j.at("epsilon_preset").get<std::string>());
    if (j.contains("epsilon"))
        for (const auto& [name, value] : j.at("epsilon").items())
            c.epsilon[scheduler_from_string(name)] = value.get<double>();
    if (j.contains("csi")) {
        const json& s = j.at("csi");
        if (s.contains("mode"))
            c.csi.mode = csi_mode_from_string(s.at("mode").get<std::string>());
        c.csi.per_user_bits = s.value("per_user_bits", c.csi.per_user_bits);
        c.csi.total_bits = s.value("total_bits", c.csi.total_bits);
    }
    if (j.contains("mobility")) {
        const json& m = j.at("mobility");
        c.mobility.speed_kmh = m.value("speed_kmh", c.mobility.speed_kmh);
        c.mobility.carrier_hz = m.value("carrier_hz", c.mobility.carrier_hz);
        c.mobility.slot_s = m.value("slot_s", c.mobility.slot_s);
        c.mobility.delay_slots = m.value("delay_slots", c.mobility.delay_slots);
    }
}

json campaign_json(const CampaignConfig& c)
{
    json eps = json::object();
    for (const auto& [k, v] : c.epsilon)
        eps[to_string(k)] = v;
    return json{{"layout", c.layout},
                {"pathloss", to_string(c.preset)},
                {"shadowing_db", c.shadowing_db},
                {"angular_spread_deg", c.angular_spread_deg},
                {"drops", c.drops},
                {"threads", c.threads},
                {"schedulers", schedulers_json(c.schedulers)},
                {"epsilon", eps},
                {"csi",
                 {{"mode", to_string(c.csi.mode)},
                  {"per_user_bits", c.csi.per_user_bits},
                  {"total_bits", c.csi.total_bits}}},
                {"mobility",
                 {{"speed_kmh", c.mobility.speed_kmh},
                  {"carrier_hz", c.mobility.carrier_hz},
                  {"slot_s", c.mobility.slot_s},
                  {"delay_slots", c.mobility.delay_slots}}}};
}

} // namespace

void validate(const ExperimentConfig& config)
{
    const CampaignConfig& c = config.campaign;
    if (c.drops < 1)
        throw InvalidInput("config: campaign.drops must be at least 1");
    if (c.threads < 1)
        throw InvalidInput("config: campaign.threads must be at least 1");
    if (c.schedulers.empty())
        throw InvalidInput("config: campaign.schedulers is empty");
    if (!(c.angular_spread_deg > 0.0))
        throw InvalidInput("config: campaign.angular_spread_deg must be positive");
    if (c.shadowing_db < 0.0)
        throw InvalidInput("config: campaign.shadowing_db must be non-negative");
    for (const auto& [k, v] : c.epsilon)
        if (!(v > 0.0 && v <= 1.0))
            throw InvalidInput("config: campaign.epsilon." + to_string(k) + " must lie in (0, 1]");
    for (SchedulerKind k : c.schedulers)
        if (k == SchedulerKind::NUS || k == SchedulerKind::LocalNUS || k == SchedulerKind::LUS ||
            k == SchedulerKind::SUS)
            c.epsilon_for(k);
    if (c.mobility.speed_kmh < 0.0 || !(c.mobility.carrier_hz > 0.0) || !(c.mobility.slot_s > 0.0))
        throw InvalidInput("config: campaign.mobility values out of range");
    if (config.angle.mc_samples < 1 || config.angle.v1_samples < 1 || config.angle.bins < 1)
        throw InvalidInput("config: angle sample counts must be positive");
    if (config.tightness.realizations < 1)
        throw InvalidInput("config: tightness.realizations must be positive");
    for (double e : config.sweep.epsilons)
        if (!(e > 0.0 && e <= 1.0))
            throw InvalidInput("config: sweep.epsilons must lie in (0, 1]");
}

ExperimentConfig parse_config(const json& j)
{
    ExperimentConfig c;
    if (j.contains("experiment"))
        c.kind = experiment_kind_from_string(j.at("experiment").get<std::string>());
    c.seed = j.value("seed", c.seed);
    if (j.contains("campaign"))
        parse_campaign(j.at("campaign"), c.campaign);
    if (j.contains("angle_pdf")) {
        const json& a = j.at("angle_pdf");
        c.angle.bs_spacing_m = a.value("bs_spacing_m", c.angle.bs_spacing_m);
        if (a.contains("cases")) {
            c.angle.cases.clear();
            for (const auto& p : a.at("cases"))
                c.angle.cases.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
        }
        c.angle.mc_samples = a.value("mc_samples", c.angle.mc_samples);
        c.angle.v1_samples = a.value("v1_samples", c.angle.v1_samples);
        c.angle.bins = a.value("bins", c.angle.bins);
        c.angle.tolerance = a.value("tolerance", c.angle.tolerance);
        c.angle.r_start = a.value("r_start", c.angle.r_start);
        c.angle.r_max = a.value("r_max", c.angle.r_max);
    }
    if (j.contains("tightness")) {
        const json& t = j.at("tightness");
        c.tightness.bs_spacing_m = t.value("bs_spacing_m", c.tightness.bs_spacing_m);
        c.tightness.antennas_per_bs = t.value("antennas_per_bs", c.tightness.antennas_per_bs);
        c.tightness.d1 = t.value("d1", c.tightness.d1);
        if (t.contains("d2_grid"))
            c.tightness.d2_grid = t.at("d2_grid").get<std::vector<double>>();
        c.tightness.realizations = t.value("realizations", c.tightness.realizations);
    }
    if (j.contains("sweep")) {
        const json& s = j.at("sweep");
        if (s.contains("schedulers"))
            c.sweep.schedulers = parse_schedulers(s.at("schedulers"));
        if (s.contains("epsilons"))
            c.sweep.epsilons = s.at("epsilons").get<std::vector<double>>();
    }
    validate(c);
    return c;
}

ExperimentConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw InvalidInput("cannot open config file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw InvalidInput("config file '" + path + "': " + e.what());
    }
    return parse_config(j);
}

json to_json(const ExperimentConfig& c)
{
    json cases = json::array();
    for (const auto& [d1, d2] : c.angle.cases)
        cases.push_back({d1, d2});
    return json{{"experiment", to_string(c.kind)},
                {"seed", c.seed},
                {"campaign", campaign_json(c.campaign)},
                {"angle_pdf",
                 {{"bs_spacing_m", c.angle.bs_spacing_m},
                  {"cases", cases},
                  {"mc_samples", c.angle.mc_samples},
                  {"v1_samples", c.angle.v1_samples},
                  {"bins", c.angle.bins},
                  {"tolerance", c.angle.tolerance},
                  {"r_start", c.angle.r_start},
                  {"r_max", c.angle.r_max}}},
                {"tightness",
                 {{"bs_spacing_m", c.tightness.bs_spacing_m},
                  {"antennas_per_bs", c.tightness.antennas_per_bs},
                  {"d1", c.tightness.d1},
                  {"d2_grid", c.tightness.d2_grid},
                  {"realizations", c.tightness.realizations}}},
                {"sweep", {{"schedulers", schedulers_json(c.sweep.schedulers)}, {"epsilons", c.sweep.epsilons}}}};
}

} // namespace comp
