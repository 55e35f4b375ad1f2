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

#include "comp/precoding.hpp"
#include "comp/schedulers.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <mutex>
#include <numbers>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>

namespace comp
{

using nlohmann::json;

namespace
{

std::vector<double> alpha_row(const LargeScaleGains& g, std::size_t user)
{
    std::vector<double> row(g.cells());
    for (std::size_t n = 0; n < g.cells(); ++n)
        row[n] = g.alpha(static_cast<Eigen::Index>(user), static_cast<Eigen::Index>(n));
    return row;
}

double deg_to_rad(double deg)
{
    return deg * std::numbers::pi / 180.0;
}

CMat stack_rows(const std::vector<GlobalChannel>& channels, std::span<const std::size_t> users)
{
    const Eigen::Index n = users.empty() ? 0 : channels[users.front()].composed.size();
    CMat H(static_cast<Eigen::Index>(users.size()), n);
    for (std::size_t k = 0; k < users.size(); ++k)
        H.row(static_cast<Eigen::Index>(k)) = channels[users[k]].composed;
    return H;
}

std::vector<double> pick(const std::vector<double>& v, std::span<const std::size_t> users)
{
    std::vector<double> out;
    out.reserve(users.size());
    for (std::size_t u : users)
        out.push_back(v[u]);
    return out;
}

bool needs_epsilon(SchedulerKind kind)
{
    return kind == SchedulerKind::NUS || kind == SchedulerKind::LocalNUS || kind == SchedulerKind::LUS ||
           kind == SchedulerKind::SUS;
}

std::string format_position(double d)
{
    std::ostringstream os;
    os << (d < 0 ? "m" : "") << std::abs(d);
    return os.str();
}

} // namespace

std::vector<double> SchedulerRun::throughput() const
{
    std::vector<double> out;
    out.reserve(users.size());
    for (const UserRecord& u : users)
        out.push_back(u.normalized_throughput);
    return out;
}

std::vector<std::size_t> SchedulerRun::cells() const
{
    std::vector<std::size_t> out;
    out.reserve(users.size());
    for (const UserRecord& u : users)
        out.push_back(u.cell);
    return out;
}

ThroughputStats SchedulerRun::stats(std::size_t n_cells) const
{
    return throughput_stats(throughput(), cells(), n_cells);
}

std::vector<double> SchedulerRun::per_drop_average() const
{
    std::vector<double> sum(Q.size(), 0.0);
    std::vector<std::size_t> count(Q.size(), 0);
    for (const UserRecord& u : users) {
        sum[u.drop] += u.normalized_throughput;
        ++count[u.drop];
    }
    for (std::size_t d = 0; d < sum.size(); ++d)
        sum[d] = count[d] ? sum[d] / static_cast<double>(count[d]) : 0.0;
    return sum;
}

const SchedulerRun& CampaignRecord::run(SchedulerKind kind) const
{
    for (const SchedulerRun& r : runs)
        if (r.kind == kind)
            return r;
    throw InvalidInput("campaign record has no run for " + to_string(kind));
}

DropContext make_drop(const CampaignConfig& config, std::uint64_t seed, std::size_t drop_index)
{
    DropContext ctx;
    ctx.layout = build_layout(config.layout);
    SeededRandomStream geo(derive_seed(seed, {stream::drop, drop_index, stream::geometry}));
    ctx.drop = drop_users(ctx.layout, geo);
    SeededRandomStream shadow(derive_seed(seed, {stream::drop, drop_index, stream::shadowing}));
    ctx.gains = compute_gains(ctx.layout, ctx.drop, config.shadowing_db, config.preset, shadow);
    const double spread = deg_to_rad(config.angular_spread_deg);
    ctx.correlation.resize(ctx.drop.size());
    for (std::size_t u = 0; u < ctx.drop.size(); ++u)
        for (std::size_t b = 0; b < ctx.layout.cells(); ++b)
            ctx.correlation[u].push_back(single_bounce_correlation(
                array_bearing(ctx.layout.coordinated_bs[b], ctx.drop.positions[u]), spread,
                ctx.layout.antennas_per_bs));
    return ctx;
}

ChannelTimeline::ChannelTimeline(const DropContext& ctx, double rho, std::uint64_t seed, std::size_t drop_index)
    : ctx_(&ctx)
{
    processes_.resize(ctx.drop.size());
    for (std::size_t u = 0; u < ctx.drop.size(); ++u)
        for (std::size_t b = 0; b < ctx.layout.cells(); ++b)
            processes_[u].emplace_back(ctx.correlation[u][b], rho,
                                       derive_seed(seed, {stream::drop, drop_index, stream::fading, u, b}));
}

const std::vector<GlobalChannel>& ChannelTimeline::at(std::size_t slot)
{
    while (slots_.size() <= slot) {
        if (!slots_.empty())
            for (auto& per_user : processes_)
                for (FadingProcess& p : per_user)
                    p.step();
        std::vector<GlobalChannel> channels;
        channels.reserve(processes_.size());
        for (std::size_t u = 0; u < processes_.size(); ++u) {
            std::vector<CRowVec> smalls;
            for (const FadingProcess& p : processes_[u])
                smalls.push_back(p.current());
            const std::vector<double> a = alpha_row(ctx_->gains, u);
            channels.push_back(compose_global(a, smalls));
        }
        slots_.push_back(std::move(channels));
    }
    return slots_[slot];
}

void run_drop(SchedulerKind kind, const CampaignConfig& config, std::uint64_t seed, std::size_t drop_index,
              const DropContext& ctx, ChannelTimeline& timeline, SchedulerRun& out)
{
    const std::size_t n_users = ctx.drop.size();
    const std::size_t M = ctx.layout.cells();
    const std::size_t n_t = ctx.layout.antennas_per_bs;
    const std::size_t delay = config.mobility.delay_slots;
    const bool quantized = config.csi.mode == CsiMode::Quantized;
    const FeedbackClass cls = feedback_class(kind);
    const ScheduleLimits limits{std::min(M * n_t, n_users)};
    const std::vector<double> p_max(M, ctx.layout.max_power_w);
    const std::vector<double>& sigma2 = ctx.gains.sigma2;
    const double epsilon = needs_epsilon(kind) ? config.epsilon_for(kind) : 0.0;

    std::vector<std::vector<Codebook>> codebooks;
    unsigned B = 0;
    if (quantized) {
        B = codebook_bits(kind, M, ctx.layout.users_per_cell, M * n_t, config.csi.per_user_bits,
                          config.csi.total_bits);
        codebooks.resize(n_users);
        for (std::size_t u = 0; u < n_users; ++u)
            for (std::size_t b = 0; b < M; ++b)
                codebooks[u].push_back(gen_codebook(ctx.correlation[u][b], B,
                                                    derive_seed(seed, {stream::drop, drop_index, stream::codebook, u, b})));
    }
    out.codebook_bits = B;

    BitMeter meter;
    // Full-channel CDI of one user, metering M B bits.
    auto full_feedback = [&](const GlobalChannel& h, std::size_t u) -> GlobalChannel {
        if (!quantized)
            return h;
        meter.charge(M * B);
        return reconstruct(quantize_channel(h, codebooks[u]), codebooks[u]);
    };

    std::vector<UserRecord> served;
    std::vector<SlotDiagnostics> diags;

    SlotScheduler slot_scheduler = [&](std::span<const std::size_t> pool, std::size_t slot) {
        meter.begin_slot();
        const std::vector<GlobalChannel>& H_sched = timeline.at(slot);
        const std::vector<GlobalChannel>& H_tx = timeline.at(slot + delay);

        // Phase one: what the control unit learns before scheduling.
        std::vector<GlobalChannel> believed(n_users); // full CSI held for one-phase schedulers
        ScheduleResult res;
        switch (kind) {
        case SchedulerKind::NUS: {
            std::vector<NormView> views(n_users);
            for (std::size_t u : pool)
                views[u] = make_norm_view(H_sched[u], sigma2[u]);
            res = nus_schedule(views, pool, epsilon, limits);
            break;
        }
        case SchedulerKind::LocalNUS: {
            std::vector<LocalView> views(n_users);
            for (std::size_t u : pool) {
                const std::size_t home = ctx.drop.home_cell[u];
                views[u] = make_local_view(H_sched[u], home, sigma2[u]);
                if (quantized) {
                    meter.charge(B);
                    const QuantizedSublink q = quantize_sublink(H_sched[u].sublinks[home], codebooks[u][home]);
                    views[u].local = q.cqi * codebooks[u][home].entries[q.index];
                }
            }
            res = localnus_schedule(views, pool, epsilon, limits);
            break;
        }
        case SchedulerKind::LUS: {
            std::vector<LargeScaleView> views(n_users);
            for (std::size_t u : pool)
                views[u] = make_large_scale_view(alpha_row(ctx.gains, u), sigma2[u]);
            res = lus_schedule(views, pool, epsilon, limits);
            break;
        }
        case SchedulerKind::SUS: {
            std::vector<FullView> views(n_users);
            for (std::size_t u : pool) {
                believed[u] = full_feedback(H_sched[u], u);
                views[u] = make_full_view(believed[u], sigma2[u]);
            }
            res = sus_schedule(views, pool, epsilon, limits);
            break;
        }
        case SchedulerKind::GUS: {
            for (std::size_t u : pool)
                believed[u] = full_feedback(H_sched[u], u);
            RateOracle oracle = [&](std::span<const std::size_t> users) {
                const CMat H = stack_rows(believed, users);
                const std::vector<double> s2 = pick(sigma2, users);
                try {
                    const PrecoderSolution sol = zf_pbpc(H, s2, p_max, n_t);
                    double rate = 0.0;
                    for (std::size_t k = 0; k < users.size(); ++k)
                        rate += std::log2(1.0 + sol.p(static_cast<Eigen::Index>(k)) / s2[k]);
                    return rate;
                } catch (const NumericalError&) {
                    return -std::numeric_limits<double>::infinity();
                }
            };
            res = gus_schedule(pool, limits, oracle);
            break;
        }
        case SchedulerKind::RUS: {
            SeededRandomStream rng(derive_seed(seed, {stream::drop, drop_index, stream::scheduler, slot}));
            res = rus_schedule(pool, limits, rng);
            break;
        }
        }
        if (res.selected.empty()) {
            std::size_t best = pool.front();
            for (std::size_t u : pool)
                if (H_sched[u].norm2() / sigma2[u] > H_sched[best].norm2() / sigma2[best])
                    best = u;
            res.selected = {best};
        }

        // Phase two: CSI used for precoding.
        const std::span<const std::size_t> S(res.selected);
        std::vector<GlobalChannel> used(n_users);
        for (std::size_t u : S)
            used[u] = cls == FeedbackClass::OnePhase ? believed[u] : full_feedback(H_tx[u], u);
        const CMat H_used = stack_rows(used, S);
        const CMat H_true = stack_rows(H_tx, S);
        const std::vector<double> s2 = pick(sigma2, S);
        const PrecoderSolution sol = zf_pbpc(H_used, s2, p_max, n_t);
        const LinkPerformance perf = evaluate_links(H_true, sol.W, s2);

        SlotDiagnostics d;
        d.drop = drop_index;
        d.slot = slot;
        d.pool_size = pool.size();
        d.selected = S.size();
        d.zf_residual = (H_used * sol.G - CMat::Identity(H_used.rows(), H_used.rows())).norm();
        d.max_power_excess = (sol.per_bs_power.array() - ctx.layout.max_power_w).maxCoeff();
        d.duality_gap = sol.duality_gap;
        d.feedback_bits = meter.slot_bits(slot);
        d.expected_bits = quantized ? slot_feedback_bits(cls, M, pool.size(), S.size(), B) : 0;
        d.group.assign(S.begin(), S.end());
        diags.push_back(std::move(d));

        for (std::size_t k = 0; k < S.size(); ++k) {
            UserRecord r;
            r.drop = drop_index;
            r.user = S[k];
            r.cell = ctx.drop.home_cell[S[k]];
            r.slot_served = slot;
            r.rate = perf.rate(static_cast<Eigen::Index>(k));
            served.push_back(r);
        }
        return res;
    };

    std::vector<std::size_t> pool(n_users);
    std::iota(pool.begin(), pool.end(), 0);
    const RrPeriod period = rr_wrap(slot_scheduler, pool);

    std::sort(served.begin(), served.end(), [](const UserRecord& a, const UserRecord& b) { return a.user < b.user; });
    for (UserRecord& r : served) {
        r.Q = period.Q();
        r.normalized_throughput = r.rate / static_cast<double>(period.Q());
        out.users.push_back(r);
    }
    out.Q.push_back(period.Q());
    for (SlotDiagnostics& d : diags)
        out.slots.push_back(std::move(d));
}

namespace
{

// Runs every drop for each entry of `runs` (kind and epsilon preset) and
// appends the results in drop order. Drops are spread over config.threads
// workers; all runs of one drop share its channel timeline.
void run_all_drops(const CampaignConfig& config, std::uint64_t seed, std::vector<SchedulerRun>& runs)
{
    const double rho = jakes_lag_correlation(doppler_hz(config.mobility.speed_kmh, config.mobility.carrier_hz),
                                             config.mobility.slot_s);
    std::vector<std::vector<SchedulerRun>> partial(config.drops);
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr error;

    auto worker = [&] {
        for (std::size_t d = next++; d < config.drops; d = next++) {
            try {
                const DropContext ctx = make_drop(config, seed, d);
                ChannelTimeline timeline(ctx, rho, seed, d);
                for (const SchedulerRun& r : runs) {
                    SchedulerRun part;
                    part.kind = r.kind;
                    part.epsilon = r.epsilon;
                    CampaignConfig cc = config;
                    if (needs_epsilon(r.kind))
                        cc.epsilon[r.kind] = r.epsilon;
                    try {
                        run_drop(r.kind, cc, seed, d, ctx, timeline, part);
                    } catch (const std::exception& e) {
                        throw NumericalError("drop " + std::to_string(d) + ", " + to_string(r.kind) + ": " + e.what());
                    }
                    partial[d].push_back(std::move(part));
                }
            } catch (...) {
                const std::lock_guard lock(error_mutex);
                if (!error)
                    error = std::current_exception();
                next = config.drops;
            }
        }
    };

    const std::size_t n_threads = std::min(std::max<std::size_t>(config.threads, 1), config.drops);
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < n_threads; ++t)
            pool.emplace_back(worker);
        for (std::thread& t : pool)
            t.join();
    }
    if (error)
        std::rethrow_exception(error);

    for (std::size_t d = 0; d < config.drops; ++d)
        for (std::size_t k = 0; k < runs.size(); ++k) {
            SchedulerRun& part = partial[d][k];
            SchedulerRun& r = runs[k];
            r.codebook_bits = part.codebook_bits;
            r.users.insert(r.users.end(), part.users.begin(), part.users.end());
            r.Q.insert(r.Q.end(), part.Q.begin(), part.Q.end());
            r.slots.insert(r.slots.end(), std::make_move_iterator(part.slots.begin()),
                           std::make_move_iterator(part.slots.end()));
        }
}

} // namespace

CampaignRecord run_cdf_campaign(const CampaignConfig& config, std::uint64_t seed)
{
    if (config.drops == 0)
        throw InvalidInput("run_cdf_campaign: need at least one drop");
    CampaignRecord rec;
    rec.config = config;
    rec.seed = seed;
    for (SchedulerKind kind : config.schedulers) {
        SchedulerRun run;
        run.kind = kind;
        run.epsilon = needs_epsilon(kind) ? config.epsilon_for(kind) : 0.0;
        rec.runs.push_back(std::move(run));
    }
    run_all_drops(config, seed, rec.runs);
    return rec;
}

DelayRecord run_delay_campaign(const CampaignConfig& config, std::uint64_t seed)
{
    CampaignConfig still = config;
    still.mobility.speed_kmh = 0.0;
    still.mobility.delay_slots = std::max<std::size_t>(config.mobility.delay_slots, 1);
    CampaignConfig moving = still;
    moving.mobility.speed_kmh = config.mobility.speed_kmh > 0.0 ? config.mobility.speed_kmh : kDefaultDelaySpeedKmh;
    DelayRecord out;
    out.still = run_cdf_campaign(still, seed);
    out.moving = run_cdf_campaign(moving, seed);
    return out;
}

std::vector<SweepPoint> SweepRecord::curve(SchedulerKind kind) const
{
    std::vector<SweepPoint> out;
    for (const SweepPoint& p : points)
        if (p.kind == kind)
            out.push_back(p);
    std::sort(out.begin(), out.end(), [](const SweepPoint& a, const SweepPoint& b) { return a.epsilon < b.epsilon; });
    return out;
}

double SweepRecord::best_epsilon(SchedulerKind kind) const
{
    const std::vector<SweepPoint> c = curve(kind);
    if (c.empty())
        throw InvalidInput("sweep has no points for " + to_string(kind));
    const SweepPoint* best = &c.front();
    for (const SweepPoint& p : c)
        if (p.cell_average > best->cell_average)
            best = &p;
    return best->epsilon;
}

SweepRecord run_threshold_sweep(const CampaignConfig& config, const SweepConfig& sweep, std::uint64_t seed)
{
    if (sweep.epsilons.empty())
        throw InvalidInput("run_threshold_sweep: empty epsilon grid");
    SweepRecord rec;
    CampaignConfig c = config;
    c.schedulers = sweep.schedulers;
    // Every (scheduler, epsilon) pair sees the same drops and channels.
    std::vector<SchedulerRun> runs;
    for (SchedulerKind kind : sweep.schedulers)
        for (double eps : sweep.epsilons) {
            SchedulerRun r;
            r.kind = kind;
            r.epsilon = eps;
            runs.push_back(std::move(r));
        }
    run_all_drops(c, seed, runs);
    const std::size_t cells = build_layout(c.layout).cells();
    for (const SchedulerRun& r : runs) {
        const ThroughputStats st = r.stats(cells);
        SweepPoint p;
        p.kind = r.kind;
        p.epsilon = r.epsilon;
        p.cell_average = st.cell_average;
        p.cell_edge = st.cell_edge;
        p.mean_Q = std::accumulate(r.Q.begin(), r.Q.end(), 0.0) / static_cast<double>(r.Q.size());
        rec.points.push_back(p);
    }
    return rec;
}

std::vector<TightnessPoint> run_tightness(const TightnessConfig& config, std::uint64_t seed)
{
    if (config.d2_grid.empty())
        throw InvalidInput("run_tightness: empty d2 grid");
    LayoutConfig lc;
    lc.kind = LayoutKind::Linear;
    lc.coordinated = 2;
    lc.with_interferers = false;
    lc.bs_spacing_m = config.bs_spacing_m;
    lc.antennas_per_bs = config.antennas_per_bs;
    lc.users_per_cell = 1;
    const NetworkLayout layout = build_layout(lc);
    const auto n_t = static_cast<Eigen::Index>(config.antennas_per_bs);
    const std::size_t R = config.realizations;

    // Small-scale fading per realization: [user][bs], i.i.d. CN(0, I).
    SeededRandomStream rng(derive_seed(seed, {stream::tightness}));
    std::vector<std::array<std::array<CRowVec, 2>, 2>> g(R);
    for (auto& r : g)
        for (auto& user : r)
            for (auto& link : user)
                link = rng.complex_normal(n_t);

    std::vector<TightnessPoint> out;
    for (double d2 : config.d2_grid) {
        const UserDrop drop = place_users(layout, {{config.d1, 0.0}, {d2, 0.0}});
        SeededRandomStream unused(0);
        const LargeScaleGains gains = compute_gains(layout, drop, 0.0, PathlossPreset::TwoCell, unused);
        const std::vector<double> a1 = alpha_row(gains, 0);
        const std::vector<double> a2 = alpha_row(gains, 1);
        const double mu_l = mu_lus(a2, a1);
        const double nu_l = static_cast<double>(n_t) * nu_lus(a2, std::vector<double>{mu_l});

        double s[3] = {0, 0, 0}, ss[3] = {0, 0, 0};
        for (std::size_t k = 0; k < R; ++k) {
            const GlobalChannel h1 = compose_global(a1, {g[k][0][0], g[k][0][1]});
            const GlobalChannel h2 = compose_global(a2, {g[k][1][0], g[k][1][1]});
            const double nu = projected_norm(h2.composed, h1.composed);
            const double n2 = h2.norm2();
            const double mu = mu_upper(h2.sublink_norms(), h1.sublink_norms());
            const double mb = mu_bar(make_local_view(h2, drop.home_cell[1], 1.0),
                                     make_local_view(h1, drop.home_cell[0], 1.0));
            const double gaps[3] = {(nu - n2 * (1.0 - mu * mu)) / nu, (nu - n2 * (1.0 - mb * mb)) / nu,
                                    (nu - nu_l) / nu};
            for (int j = 0; j < 3; ++j) {
                s[j] += gaps[j];
                ss[j] += gaps[j] * gaps[j];
            }
        }
        const double n = static_cast<double>(R);
        double mean[3], se[3];
        for (int j = 0; j < 3; ++j) {
            mean[j] = s[j] / n;
            const double var = R > 1 ? std::max(ss[j] / n - mean[j] * mean[j], 0.0) * n / (n - 1.0) : 0.0;
            se[j] = std::sqrt(var / n);
        }
        out.push_back({d2, mean[0], mean[1], mean[2], se[0], se[1], se[2]});
    }
    return out;
}

std::vector<AnglePdfCase> run_angle_pdf(const AnglePdfConfig& config, std::uint64_t seed)
{
    LayoutConfig lc;
    lc.kind = LayoutKind::Linear;
    lc.coordinated = 2;
    lc.with_interferers = false;
    lc.bs_spacing_m = config.bs_spacing_m;
    lc.antennas_per_bs = 1;
    lc.users_per_cell = 1;
    const NetworkLayout layout = build_layout(lc);

    std::vector<AnglePdfCase> out;
    for (std::size_t c = 0; c < config.cases.size(); ++c) {
        const auto [d1, d2] = config.cases[c];
        const UserDrop drop = place_users(layout, {{d1, 0.0}, {d2, 0.0}});
        SeededRandomStream unused(0);
        const LargeScaleGains gains = compute_gains(layout, drop, 0.0, PathlossPreset::TwoCell, unused);
        CMat R1 = CMat::Zero(2, 2);
        CMat R2 = CMat::Zero(2, 2);
        for (Eigen::Index n = 0; n < 2; ++n) {
            R1(n, n) = gains.alpha(0, n);
            R2(n, n) = gains.alpha(1, n);
        }
        AnglePdfCase res;
        res.d1 = d1;
        res.d2 = d2;
        SeededRandomStream rng(derive_seed(seed, {stream::angle, c, 0}));
        const std::vector<double> samples = cos2_mc(R1, R2, config.mc_samples, rng);
        res.mc = histogram_pdf(samples, config.bins);
        res.ks_uniform = ks_distance(samples, [](double x) { return std::clamp(x, 0.0, 1.0); });
        res.series = converge_truncation(R1, R2, config.v1_samples, derive_seed(seed, {stream::angle, c, 1}),
                                         config.bins, config.tolerance, config.r_start, config.r_max);
        res.l1 = l1_distance(res.mc, res.series.table);
        out.push_back(std::move(res));
    }
    return out;
}

void write_campaign_csv(std::ostream& os, const SchedulerRun& run)
{
    os << "drop,user,cell,slot_served,rate,Q,normalized_throughput\n";
    os.precision(10);
    for (const UserRecord& u : run.users)
        os << u.drop << ',' << u.user << ',' << u.cell << ',' << u.slot_served << ',' << u.rate << ',' << u.Q << ','
           << u.normalized_throughput << '\n';
}

void write_summary_csv(std::ostream& os, const CampaignRecord& record)
{
    const std::size_t cells = build_layout(record.config.layout).cells();
    os << "scheduler,epsilon,codebook_bits,cell_average,cell_edge,mean_Q";
    for (std::size_t m = 0; m < cells; ++m)
        os << ",cell" << m << "_average";
    os << '\n';
    os.precision(10);
    for (const SchedulerRun& r : record.runs) {
        const ThroughputStats st = r.stats(cells);
        const double mean_Q = std::accumulate(r.Q.begin(), r.Q.end(), 0.0) / static_cast<double>(r.Q.size());
        os << to_string(r.kind) << ',' << r.epsilon << ',' << r.codebook_bits << ',' << st.cell_average << ','
           << st.cell_edge << ',' << mean_Q;
        for (double a : st.per_cell_average)
            os << ',' << a;
        os << '\n';
    }
}

void write_cdf_csv(std::ostream& os, const CampaignRecord& record)
{
    os << "scheduler,normalized_throughput,cdf\n";
    os.precision(10);
    for (const SchedulerRun& r : record.runs)
        for (const CdfPoint& p : empirical_cdf(r.throughput()))
            os << to_string(r.kind) << ',' << p.x << ',' << p.F << '\n';
}

void write_sweep_csv(std::ostream& os, const SweepRecord& record)
{
    os << "scheduler,epsilon,cell_average,cell_edge,mean_Q\n";
    os.precision(10);
    for (const SweepPoint& p : record.points)
        os << to_string(p.kind) << ',' << p.epsilon << ',' << p.cell_average << ',' << p.cell_edge << ',' << p.mean_Q
           << '\n';
}

void write_tightness_csv(std::ostream& os, const std::vector<TightnessPoint>& points)
{
    os << "d2,gap_nus,gap_localnus,gap_lus,se_nus,se_localnus,se_lus\n";
    os.precision(10);
    for (const TightnessPoint& p : points)
        os << p.d2 << ',' << p.gap_nus << ',' << p.gap_localnus << ',' << p.gap_lus << ',' << p.se_nus << ','
           << p.se_localnus << ',' << p.se_lus << '\n';
}

json campaign_manifest(const CampaignRecord& record)
{
    const std::size_t cells = build_layout(record.config.layout).cells();
    json runs = json::array();
    for (const SchedulerRun& r : record.runs) {
        const ThroughputStats st = r.stats(cells);
        std::size_t bit_mismatches = 0;
        double max_residual = 0.0, max_excess = -std::numeric_limits<double>::infinity();
        for (const SlotDiagnostics& d : r.slots) {
            bit_mismatches += d.feedback_bits != d.expected_bits;
            max_residual = std::max(max_residual, d.zf_residual);
            max_excess = std::max(max_excess, d.max_power_excess);
        }
        runs.push_back({{"scheduler", to_string(r.kind)},
                        {"epsilon", r.epsilon},
                        {"codebook_bits", r.codebook_bits},
                        {"cell_average", st.cell_average},
                        {"cell_edge", st.cell_edge},
                        {"per_cell_average", st.per_cell_average},
                        {"slots", r.slots.size()},
                        {"max_zf_residual", max_residual},
                        {"max_power_excess_w", max_excess},
                        {"feedback_bit_mismatches", bit_mismatches}});
    }
    return json{{"seed", record.seed},
                {"runs", runs},
                {"conventions",
                 {{"cell_average", "mean normalized throughput over all users of the cluster, pooled over drops"},
                  {"cell_edge", "5th percentile of the pooled per-user normalized throughput"},
                  {"cdf", "pooled over users and drops"},
                  {"normalization", "served-slot rate divided by the drop's round-robin period Q"},
                  {"seed_rule",
                   "derive_seed(seed, {1, drop, tag, ...}) with tags geometry=2, shadowing=3, fading=4 (+user, bs), "
                   "codebook=5 (+user, bs), scheduler=6 (+slot)"}}}};
}

namespace
{

void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body)
{
    std::ofstream os(path);
    if (!os)
        throw InvalidInput("cannot write '" + path.string() + "'");
    body(os);
}

void write_campaign_outputs(const CampaignRecord& rec, const std::filesystem::path& dir, const std::string& prefix)
{
    for (const SchedulerRun& r : rec.runs)
        write_file(dir / (prefix + "_" + to_string(r.kind) + ".csv"), [&](std::ostream& os) { write_campaign_csv(os, r); });
    write_file(dir / (prefix + "_summary.csv"), [&](std::ostream& os) { write_summary_csv(os, rec); });
    write_file(dir / (prefix + "_cdf.csv"), [&](std::ostream& os) { write_cdf_csv(os, rec); });
}

} // namespace

json run_experiment(const ExperimentConfig& config, const std::filesystem::path& out_dir)
{
    validate(config);
    std::filesystem::create_directories(out_dir);
    json manifest{{"experiment", to_string(config.kind)}, {"seed", config.seed}, {"config", to_json(config)}};
    json files = json::array();

    switch (config.kind) {
    case ExperimentKind::AnglePdf: {
        const std::vector<AnglePdfCase> cases = run_angle_pdf(config.angle, config.seed);
        json summary = json::array();
        for (const AnglePdfCase& c : cases) {
            const std::string tag = format_position(c.d1) + "_" + format_position(c.d2);
            const std::string mc = "angle_pdf_mc_" + tag + ".csv";
            const std::string series = "angle_pdf_series_" + tag + ".csv";
            write_file(out_dir / mc, [&](std::ostream& os) { write_pdf_csv(os, c.mc); });
            write_file(out_dir / series, [&](std::ostream& os) { write_pdf_csv(os, c.series.table); });
            files.push_back(mc);
            files.push_back(series);
            summary.push_back({{"d1", c.d1},
                               {"d2", c.d2},
                               {"l1", c.l1},
                               {"ks_uniform", c.ks_uniform},
                               {"truncation_r", c.series.params.truncation_r},
                               {"converged", c.series.converged},
                               {"mass_below_0.1", c.mc.mass_below(0.1)},
                               {"mass_above_0.9", c.mc.mass_above(0.9)}});
        }
        manifest["cases"] = summary;
        break;
    }
    case ExperimentKind::Tightness: {
        const std::vector<TightnessPoint> pts = run_tightness(config.tightness, config.seed);
        write_file(out_dir / "tightness.csv", [&](std::ostream& os) { write_tightness_csv(os, pts); });
        files.push_back("tightness.csv");
        break;
    }
    case ExperimentKind::ThresholdSweep: {
        const SweepRecord rec = run_threshold_sweep(config.campaign, config.sweep, config.seed);
        write_file(out_dir / "sweep.csv", [&](std::ostream& os) { write_sweep_csv(os, rec); });
        files.push_back("sweep.csv");
        json best = json::object();
        for (SchedulerKind k : config.sweep.schedulers)
            best[to_string(k)] = rec.best_epsilon(k);
        manifest["best_epsilon"] = best;
        break;
    }
    case ExperimentKind::CdfCampaign: {
        const CampaignRecord rec = run_cdf_campaign(config.campaign, config.seed);
        write_campaign_outputs(rec, out_dir, "campaign");
        for (const SchedulerRun& r : rec.runs)
            files.push_back("campaign_" + to_string(r.kind) + ".csv");
        files.push_back("campaign_summary.csv");
        files.push_back("campaign_cdf.csv");
        manifest["campaign"] = campaign_manifest(rec);
        break;
    }
    case ExperimentKind::DelayCampaign: {
        const DelayRecord rec = run_delay_campaign(config.campaign, config.seed);
        write_campaign_outputs(rec.still, out_dir, "delay_still");
        write_campaign_outputs(rec.moving, out_dir, "delay_moving");
        for (const char* p : {"delay_still", "delay_moving"}) {
            for (SchedulerKind k : config.campaign.schedulers)
                files.push_back(std::string(p) + "_" + to_string(k) + ".csv");
            files.push_back(std::string(p) + "_summary.csv");
            files.push_back(std::string(p) + "_cdf.csv");
        }
        manifest["still"] = campaign_manifest(rec.still);
        manifest["moving"] = campaign_manifest(rec.moving);
        manifest["moving_speed_kmh"] = rec.moving.config.mobility.speed_kmh;
        break;
    }
    }
    manifest["files"] = files;
    std::ofstream os(out_dir / "manifest.json");
    os << manifest.dump(2) << '\n';
    return manifest;
}

} // namespace comp
