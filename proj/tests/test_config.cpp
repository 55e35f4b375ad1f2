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

#include <doctest.h>

#include <filesystem>
#include <fstream>

using namespace comp;
using nlohmann::json;

TEST_SUITE("config")
{
    TEST_CASE("empty object gives the defaults")
    {
        const ExperimentConfig c = parse_config(json::object());
        CHECK(c.kind == ExperimentKind::CdfCampaign);
        CHECK(c.campaign.drops == 100);
        CHECK(c.campaign.epsilon_for(SchedulerKind::NUS) == 0.4);
        CHECK(c.angle.cases.size() == 5);
        CHECK(c.tightness.d2_grid.front() == -200.0);
        CHECK(c.tightness.d2_grid.size() == 17);
    }

    TEST_CASE("presets and overrides")
    {
        CHECK(epsilon_preset("alternate").at(SchedulerKind::LocalNUS) == 0.4);
        CHECK(epsilon_preset("standard").at(SchedulerKind::LocalNUS) == 0.8);
        CHECK_THROWS_AS(epsilon_preset("other"), InvalidInput);
        const ExperimentConfig c = parse_config(json::parse(R"({
            "experiment": "delay", "seed": 9,
            "campaign": {"epsilon_preset": "alternate", "epsilon": {"nus": 0.9}, "drops": 3,
                         "csi": {"mode": "quantized", "per_user_bits": 6},
                         "mobility": {"speed_kmh": 30, "delay_slots": 1}}
        })"));
        CHECK(c.kind == ExperimentKind::DelayCampaign);
        CHECK(c.seed == 9);
        CHECK(c.campaign.epsilon_for(SchedulerKind::NUS) == 0.9);
        CHECK(c.campaign.epsilon_for(SchedulerKind::LocalNUS) == 0.4);
        CHECK(c.campaign.csi.mode == CsiMode::Quantized);
        CHECK(c.campaign.csi.per_user_bits == 6.0);
        CHECK(c.campaign.csi.total_bits == 432.0);
        CHECK(c.campaign.mobility.speed_kmh == 30.0);
    }

    TEST_CASE("round trip through JSON")
    {
        ExperimentConfig c;
        c.kind = ExperimentKind::Tightness;
        c.seed = 77;
        c.campaign.schedulers = {SchedulerKind::RUS, SchedulerKind::LUS};
        c.campaign.threads = 3;
        c.angle.cases = {{10, 20}};
        c.sweep.epsilons = {0.25, 0.75};
        const ExperimentConfig d = parse_config(to_json(c));
        CHECK(to_json(d) == to_json(c));
        CHECK(d.campaign.schedulers == c.campaign.schedulers);
    }

    TEST_CASE("invalid values are rejected")
    {
        CHECK_THROWS_AS(parse_config(json::parse(R"({"campaign": {"drops": 0}})")), InvalidInput);
        CHECK_THROWS_AS(parse_config(json::parse(R"({"campaign": {"schedulers": ["PF"]}})")), InvalidInput);
        CHECK_THROWS_AS(parse_config(json::parse(R"({"campaign": {"epsilon": {"NUS": 1.5}}})")), InvalidInput);
        CHECK_THROWS_AS(parse_config(json::parse(R"({"campaign": {"csi": {"mode": "partial"}}})")), InvalidInput);
        CHECK_THROWS_AS(parse_config(json::parse(R"({"experiment": "nope"})")), InvalidInput);
        CHECK_THROWS_AS(parse_config(json::parse(R"({"sweep": {"epsilons": [0.0]}})")), InvalidInput);
        CHECK_THROWS_AS(load_config("/nonexistent/config.json"), InvalidInput);
    }

    TEST_CASE("malformed files report the path")
    {
        const auto path = std::filesystem::temp_directory_path() / "comp_bad_config.json";
        std::ofstream(path) << "{ not json";
        try {
            load_config(path.string());
            FAIL("expected InvalidInput");
        } catch (const InvalidInput& e) {
            CHECK(std::string(e.what()).find("comp_bad_config.json") != std::string::npos);
        }
        std::filesystem::remove(path);
    }

    TEST_CASE("experiment names")
    {
        for (ExperimentKind k : {ExperimentKind::AnglePdf, ExperimentKind::Tightness, ExperimentKind::ThresholdSweep,
                                 ExperimentKind::CdfCampaign, ExperimentKind::DelayCampaign})
            CHECK(experiment_kind_from_string(to_string(k)) == k);
        CHECK(experiment_kind_from_string("threshold-sweep") == ExperimentKind::ThresholdSweep);
    }
}
