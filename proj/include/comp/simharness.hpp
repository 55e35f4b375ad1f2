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

#ifndef COMP_SIMHARNESS_HPP
#define COMP_SIMHARNESS_HPP

#include "comp/anglestats.hpp"
#include "comp/channel.hpp"
#include "comp/config.hpp"
#include "comp/feedback.hpp"
#include "comp/metrics.hpp"
#include "comp/netgeom.hpp"

#include <json.hpp>

#include <cstdint>
#include <deque>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <vector>

namespace comp
{

// Speed used by the delay experiment when the config leaves it at zero.
inline constexpr double kDefaultDelaySpeedKmh = 30.0;

// One user's outcome in one drop.
struct UserRecord
{
    std::size_t drop = 0;
    std::size_t user = 0;
    std::size_t cell = 0;
    std::size_t slot_served = 0;
    double rate = 0.0; // bit/s/Hz in the served slot
    std::size_t Q = 0; // slots in the drop's round-robin period
    double normalized_throughput = 0.0;
};

struct SlotDiagnostics
{
    std::size_t drop = 0;
    std::size_t slot = 0;
    std::size_t pool_size = 0;
    std::size_t selected = 0;
    double zf_residual = 0.0;      // ||H_used G - I||_F
    double max_power_excess = 0.0; // max_m (per-BS power - P_m)
    double duality_gap = 0.0;
    std::size_t feedback_bits = 0;  // CDI bits metered while running the slot
    std::size_t expected_bits = 0;  // slot_feedback_bits for the same slot
    std::vector<std::size_t> group; // selected users
};

struct SchedulerRun
{
    SchedulerKind kind = SchedulerKind::NUS;
    double epsilon = 0.0;
    unsigned codebook_bits = 0; // 0 with perfect CSI
    std::vector<UserRecord> users;
    std::vector<std::size_t> Q; // per drop
    std::vector<SlotDiagnostics> slots;

    std::vector<double> throughput() const;
    std::vector<std::size_t> cells() const;
    ThroughputStats stats(std::size_t cells) const;
    // Mean normalized throughput of each drop.
    std::vector<double> per_drop_average() const;
};

struct CampaignRecord
{
    CampaignConfig config;
    std::uint64_t seed = 0;
    std::vector<SchedulerRun> runs;

    const SchedulerRun& run(SchedulerKind kind) const;
};

// Geometry, gains and spatial correlation of one drop.
struct DropContext
{
    NetworkLayout layout;
    UserDrop drop;
    LargeScaleGains gains;
    std::vector<std::vector<SpatialCorrelation>> correlation; // [user][bs]
};

DropContext make_drop(const CampaignConfig& config, std::uint64_t seed, std::size_t drop_index);

// Lazily evolved channels of every user of a drop, indexed by slot. All
// (user, BS) sublinks follow independent fading processes.
class ChannelTimeline
{
  public:
    ChannelTimeline(const DropContext& ctx, double rho, std::uint64_t seed, std::size_t drop_index);

    const std::vector<GlobalChannel>& at(std::size_t slot);

  private:
    const DropContext* ctx_;
    std::vector<std::vector<FadingProcess>> processes_;
    std::deque<std::vector<GlobalChannel>> slots_; // stable references while growing
};

// Runs one round-robin period of `kind` on a prepared drop.
void run_drop(SchedulerKind kind, const CampaignConfig& config, std::uint64_t seed, std::size_t drop_index,
              const DropContext& ctx, ChannelTimeline& timeline, SchedulerRun& out);

CampaignRecord run_cdf_campaign(const CampaignConfig& config, std::uint64_t seed);

struct DelayRecord
{
    CampaignRecord still;  // v = 0
    CampaignRecord moving; // v > 0
};

// Both runs schedule on slot-t information and transmit in slot t + 1.
DelayRecord run_delay_campaign(const CampaignConfig& config, std::uint64_t seed);

struct SweepPoint
{
    SchedulerKind kind = SchedulerKind::NUS;
    double epsilon = 0.0;
    double cell_average = 0.0;
    double cell_edge = 0.0;
    double mean_Q = 0.0;
};

struct SweepRecord
{
    std::vector<SweepPoint> points;

    std::vector<SweepPoint> curve(SchedulerKind kind) const;
    // Grid epsilon with the highest cell-average throughput.
    double best_epsilon(SchedulerKind kind) const;
};

SweepRecord run_threshold_sweep(const CampaignConfig& config, const SweepConfig& sweep, std::uint64_t seed);

struct TightnessPoint
{
    double d2 = 0.0;
    double gap_nus = 0.0;
    double gap_localnus = 0.0;
    double gap_lus = 0.0;
    double se_nus = 0.0; // standard errors of the means
    double se_localnus = 0.0;
    double se_lus = 0.0;
};

// Mean normalised gap (nu - bound) / nu between the projected norm of a
// candidate at d2 and each scheduler's lower bound, with one selected user
// at d1. Realizations are shared across the grid.
std::vector<TightnessPoint> run_tightness(const TightnessConfig& config, std::uint64_t seed);

struct AnglePdfCase
{
    double d1 = 0.0;
    double d2 = 0.0;
    PdfTable mc;
    TruncationSearch series;
    double l1 = 0.0;          // between the two tables
    double ks_uniform = 0.0;  // of the Monte-Carlo samples
};

std::vector<AnglePdfCase> run_angle_pdf(const AnglePdfConfig& config, std::uint64_t seed);

// CSV writers. The campaign schema is
// drop,user,cell,slot_served,rate,Q,normalized_throughput.
void write_campaign_csv(std::ostream& os, const SchedulerRun& run);
void write_summary_csv(std::ostream& os, const CampaignRecord& record);
void write_cdf_csv(std::ostream& os, const CampaignRecord& record);
void write_sweep_csv(std::ostream& os, const SweepRecord& record);
void write_tightness_csv(std::ostream& os, const std::vector<TightnessPoint>& points);

nlohmann::json campaign_manifest(const CampaignRecord& record);

// Runs the experiment named in `config` and writes CSVs plus manifest.json
// into `out_dir`. Returns the manifest.
nlohmann::json run_experiment(const ExperimentConfig& config, const std::filesystem::path& out_dir);

} // namespace comp

#endif
