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

#include "comp/simharness.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

using namespace comp;

namespace
{

CampaignConfig small_campaign()
{
    CampaignConfig c;
    c.layout.antennas_per_bs = 2;
    c.layout.users_per_cell = 4;
    c.drops = 4;
    c.schedulers = {SchedulerKind::RUS, SchedulerKind::NUS, SchedulerKind::LocalNUS, SchedulerKind::LUS,
                    SchedulerKind::SUS, SchedulerKind::GUS};
    return c;
}

std::string campaign_csv(const CampaignRecord& r)
{
    std::ostringstream os;
    for (const SchedulerRun& run : r.runs)
        write_campaign_csv(os, run);
    write_summary_csv(os, r);
    return os.str();
}

std::string first_line(const std::filesystem::path& p)
{
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    return line;
}

} // namespace

TEST_SUITE("simharness")
{
    TEST_CASE("single user in a single cell gets the closed-form rate")
    {
        CampaignConfig c;
        c.layout.coordinated = 1;
        c.layout.with_interferers = false;
        c.layout.users_per_cell = 1;
        c.drops = 3;
        c.schedulers = {SchedulerKind::NUS, SchedulerKind::GUS};
        const CampaignRecord r = run_cdf_campaign(c, 5);
        for (std::size_t d = 0; d < c.drops; ++d) {
            const DropContext ctx = make_drop(c, 5, d);
            ChannelTimeline tl(ctx, 1.0, 5, d);
            const double h2 = tl.at(0).front().norm2();
            const double expected = std::log2(1.0 + c.layout.max_power_w * h2 / ctx.gains.sigma2.front());
            for (const SchedulerRun& run : r.runs) {
                CHECK(run.users[d].Q == 1);
                CHECK(run.users[d].normalized_throughput == doctest::Approx(expected).epsilon(1e-9));
            }
        }
    }

    TEST_CASE("results do not depend on the number of threads")
    {
        CampaignConfig c = small_campaign();
        const std::string one = campaign_csv(run_cdf_campaign(c, 11));
        c.threads = 3;
        CHECK(campaign_csv(run_cdf_campaign(c, 11)) == one);
        CHECK(campaign_csv(run_cdf_campaign(c, 12)) != one);
    }

    TEST_CASE("every user is served exactly once per drop")
    {
        const CampaignConfig c = small_campaign();
        const CampaignRecord r = run_cdf_campaign(c, 3);
        const std::size_t users = c.layout.coordinated * c.layout.users_per_cell;
        for (const SchedulerRun& run : r.runs) {
            CHECK(run.users.size() == users * c.drops);
            CHECK(run.Q.size() == c.drops);
            for (std::size_t d = 0; d < c.drops; ++d) {
                std::multiset<std::size_t> seen;
                for (const SlotDiagnostics& s : run.slots)
                    if (s.drop == d)
                        seen.insert(s.group.begin(), s.group.end());
                CHECK(seen.size() == users);
                CHECK(std::set<std::size_t>(seen.begin(), seen.end()).size() == users);
            }
            for (const UserRecord& u : run.users) {
                CHECK(u.slot_served < u.Q);
                CHECK(u.Q == run.Q[u.drop]);
                CHECK(u.normalized_throughput == doctest::Approx(u.rate / static_cast<double>(u.Q)));
                CHECK(u.cell == u.user / c.layout.users_per_cell);
            }
        }
        CHECK_THROWS_AS(CampaignRecord{}.run(SchedulerKind::NUS), InvalidInput);
    }

    TEST_CASE("precoder invariants hold on every perfect-CSI slot")
    {
        const CampaignRecord r = run_cdf_campaign(small_campaign(), 4);
        for (const SchedulerRun& run : r.runs)
            for (const SlotDiagnostics& s : run.slots) {
                CHECK(s.zf_residual < 1e-9);
                CHECK(s.max_power_excess <= 1e-9);
                CHECK(s.feedback_bits == 0);
            }
    }

    TEST_CASE("quantized feedback bits match the per-slot expressions")
    {
        CampaignConfig c = small_campaign();
        c.csi.mode = CsiMode::Quantized;
        c.csi.per_user_bits = 12.0;
        c.csi.total_bits = 1000.0;
        c.angular_spread_deg = 360.0;
        const CampaignRecord r = run_cdf_campaign(c, 6);
        for (const SchedulerRun& run : r.runs) {
            CHECK(run.codebook_bits > 0);
            const FeedbackClass cls = feedback_class(run.kind);
            std::size_t waiting = 0;
            for (const SlotDiagnostics& s : run.slots) {
                CHECK(s.feedback_bits == s.expected_bits);
                CHECK(s.expected_bits ==
                      slot_feedback_bits(cls, c.layout.coordinated, s.pool_size, s.selected, run.codebook_bits));
                waiting += s.slot == 0 ? 1 : 0;
            }
            CHECK(waiting == c.drops);
        }
    }

    TEST_CASE("a static delay run equals the plain campaign")
    {
        CampaignConfig c = small_campaign();
        c.schedulers = {SchedulerKind::NUS, SchedulerKind::LUS, SchedulerKind::SUS};
        const CampaignRecord plain = run_cdf_campaign(c, 8);
        const DelayRecord delayed = run_delay_campaign(c, 8);
        for (SchedulerKind k : c.schedulers)
            CHECK(delayed.still.run(k).throughput() == plain.run(k).throughput());
        CHECK(delayed.moving.config.mobility.speed_kmh == kDefaultDelaySpeedKmh);
        CHECK(delayed.moving.run(SchedulerKind::NUS).throughput() != plain.run(SchedulerKind::NUS).throughput());
    }

    TEST_CASE("moving channels keep their marginal statistics")
    {
        CampaignConfig c = small_campaign();
        const DropContext ctx = make_drop(c, 2, 0);
        ChannelTimeline tl(ctx, 0.368, 2, 0);
        double first = 0.0, later = 0.0;
        for (std::size_t u = 0; u < ctx.drop.size(); ++u) {
            first += tl.at(0)[u].norm2() / ctx.gains.alpha.row(static_cast<Eigen::Index>(u)).sum();
            later += tl.at(40)[u].norm2() / ctx.gains.alpha.row(static_cast<Eigen::Index>(u)).sum();
        }
        const double n = static_cast<double>(ctx.drop.size() * c.layout.antennas_per_bs);
        CHECK(first / n == doctest::Approx(1.0).epsilon(0.5));
        CHECK(later / n == doctest::Approx(1.0).epsilon(0.5));
        CHECK(&tl.at(0) == &tl.at(0));
    }

    TEST_CASE("threshold sweep grid and best epsilon")
    {
        CampaignConfig c = small_campaign();
        SweepConfig s;
        s.schedulers = {SchedulerKind::NUS, SchedulerKind::LUS};
        s.epsilons = {0.9, 0.2, 0.5};
        const SweepRecord r = run_threshold_sweep(c, s, 9);
        CHECK(r.points.size() == 6);
        const std::vector<SweepPoint> curve = r.curve(SchedulerKind::NUS);
        REQUIRE(curve.size() == 3);
        CHECK(curve[0].epsilon == 0.2);
        CHECK(curve[2].epsilon == 0.9);
        double best = -1.0, arg = 0.0;
        for (const SweepPoint& p : curve)
            if (p.cell_average > best) {
                best = p.cell_average;
                arg = p.epsilon;
            }
        CHECK(r.best_epsilon(SchedulerKind::NUS) == arg);

        std::ostringstream os;
        write_sweep_csv(os, r);
        std::istringstream is(os.str());
        std::string line;
        std::getline(is, line);
        CHECK(line == "scheduler,epsilon,cell_average,cell_edge,mean_Q");
        double csv_best = -1.0, csv_arg = 0.0;
        while (std::getline(is, line)) {
            std::istringstream ls(line);
            std::string name, eps, avg;
            std::getline(ls, name, ',');
            std::getline(ls, eps, ',');
            std::getline(ls, avg, ',');
            if (name == "NUS" && std::stod(avg) > csv_best) {
                csv_best = std::stod(avg);
                csv_arg = std::stod(eps);
            }
        }
        CHECK(csv_arg == arg);
    }

    TEST_CASE("tightness curve basics")
    {
        TightnessConfig t;
        t.realizations = 3000;
        t.d2_grid = {-50.0, 0.0, 150.0};
        const std::vector<TightnessPoint> pts = run_tightness(t, 1);
        REQUIRE(pts.size() == 3);
        for (const TightnessPoint& p : pts) {
            CHECK(p.gap_localnus <= p.gap_nus + 1e-12);
            CHECK(p.gap_nus >= 0.0);
            CHECK(p.gap_nus <= 1.0);
            CHECK(p.se_nus > 0.0);
        }
        CHECK(pts[0].gap_nus > pts[2].gap_nus);
        CHECK(run_tightness(t, 1).front().gap_nus == pts.front().gap_nus);
    }

    TEST_CASE("experiment runner writes CSVs with the published headers")
    {
        const auto dir = std::filesystem::temp_directory_path() / "comp_harness_test";
        std::filesystem::remove_all(dir);
        ExperimentConfig c;
        c.campaign = small_campaign();
        c.campaign.drops = 2;
        c.campaign.schedulers = {SchedulerKind::NUS, SchedulerKind::RUS};

        c.kind = ExperimentKind::CdfCampaign;
        nlohmann::json m = run_experiment(c, dir);
        CHECK(m.at("experiment") == "campaign");
        CHECK(first_line(dir / "campaign_NUS.csv") == "drop,user,cell,slot_served,rate,Q,normalized_throughput");
        CHECK(first_line(dir / "campaign_cdf.csv") == "scheduler,normalized_throughput,cdf");
        CHECK(first_line(dir / "campaign_summary.csv").rfind("scheduler,epsilon,codebook_bits,cell_average", 0) == 0);
        CHECK(std::filesystem::exists(dir / "manifest.json"));

        c.kind = ExperimentKind::Tightness;
        c.tightness.realizations = 100;
        run_experiment(c, dir);
        CHECK(first_line(dir / "tightness.csv") == "d2,gap_nus,gap_localnus,gap_lus,se_nus,se_localnus,se_lus");

        c.kind = ExperimentKind::DelayCampaign;
        m = run_experiment(c, dir);
        CHECK(m.at("files").size() >= 4);

        c.campaign.drops = 0;
        CHECK_THROWS_AS(run_experiment(c, dir), InvalidInput);
        std::filesystem::remove_all(dir);
    }

    TEST_CASE("angle pdf cases report both tables")
    {
        AnglePdfConfig a;
        a.cases = {{0.0, 0.0}};
        a.mc_samples = 100000;
        a.v1_samples = 32;
        a.bins = 20;
        a.r_max = 16;
        const std::vector<AnglePdfCase> r = run_angle_pdf(a, 1);
        REQUIRE(r.size() == 1);
        CHECK(r[0].ks_uniform < 0.01);
        CHECK(r[0].l1 < 0.05);
        CHECK(r[0].mc.size() == 20);
    }
}
