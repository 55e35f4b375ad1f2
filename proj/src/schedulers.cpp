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

#include "comp/schedulers.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <unordered_set>

namespace comp
{

std::string to_string(SchedulerKind kind)
{
    switch (kind) {
    case SchedulerKind::NUS:
        return "NUS";
    case SchedulerKind::LocalNUS:
        return "LocalNUS";
    case SchedulerKind::LUS:
        return "LUS";
    case SchedulerKind::SUS:
        return "SUS";
    case SchedulerKind::GUS:
        return "GUS";
    case SchedulerKind::RUS:
        return "RUS";
    }
    return "?";
}

SchedulerKind scheduler_from_string(std::string_view name)
{
    std::string s(name);
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    if (s == "nus")
        return SchedulerKind::NUS;
    if (s == "localnus")
        return SchedulerKind::LocalNUS;
    if (s == "lus")
        return SchedulerKind::LUS;
    if (s == "sus")
        return SchedulerKind::SUS;
    if (s == "gus")
        return SchedulerKind::GUS;
    if (s == "rus")
        return SchedulerKind::RUS;
    throw InvalidInput("unknown scheduler '" + std::string(name) + "'");
}

namespace
{

double sum_squares(std::span<const double> v)
{
    double s = 0.0;
    for (double x : v)
        s += x * x;
    return s;
}

void check_pool(std::span<const std::size_t> pool, std::size_t n_views)
{
    if (pool.empty())
        throw InvalidInput("scheduler: empty user pool");
    for (std::size_t i : pool)
        if (i >= n_views)
            throw InvalidInput("scheduler: pool index out of range");
}

// Shared iteration of the norm-based schedulers: first pick by SNR, prune
// by mu <= epsilon against the latest pick, then rank survivors by
// nu_lb / sigma^2 = norm2 (1 - sum mu^2) / sigma^2. Ties go to the lowest
// index because candidates are kept in ascending order.
template <typename Snr, typename Norm2, typename Sigma2, typename Mu>
ScheduleResult bound_schedule(std::span<const std::size_t> pool_in, double epsilon, const ScheduleLimits& limits,
                              Snr&& snr, Norm2&& norm2, Sigma2&& sigma2, Mu&& mu)
{
    if (!(epsilon > 0.0 && epsilon <= 1.0))
        throw InvalidInput("scheduler: epsilon must lie in (0, 1]");
    if (limits.max_users == 0)
        throw InvalidInput("scheduler: max_users must be positive");
    std::vector<std::size_t> pool(pool_in.begin(), pool_in.end());
    std::sort(pool.begin(), pool.end());

    ScheduleResult res;
    ScheduleStep first;
    first.pool_size = pool.size();
    first.chosen = pool.front();
    first.metric = snr(pool.front());
    for (std::size_t i : pool) {
        const double v = snr(i);
        first.candidates.push_back(i);
        first.bound.push_back(0.0);
        first.nu.push_back(norm2(i));
        if (v > first.metric) {
            first.metric = v;
            first.chosen = i;
        }
    }
    res.selected.push_back(first.chosen);
    res.steps.push_back(std::move(first));

    std::vector<std::size_t> T = pool;
    std::vector<double> mu2(pool.size(), 0.0); // sum of mu^2, aligned with T
    while (res.selected.size() < limits.max_users) {
        const std::size_t last = res.selected.back();
        std::vector<std::size_t> next_T;
        std::vector<double> next_mu2;
        std::vector<double> last_mu;
        for (std::size_t k = 0; k < T.size(); ++k) {
            const std::size_t i = T[k];
            if (i == last)
                continue;
            const double m = mu(i, last);
            if (m <= epsilon) {
                next_T.push_back(i);
                next_mu2.push_back(mu2[k] + m * m);
                last_mu.push_back(m);
            }
        }
        T = std::move(next_T);
        mu2 = std::move(next_mu2);
        if (T.empty())
            break;
        ScheduleStep step;
        step.pool_size = T.size();
        step.candidates = T;
        step.bound = last_mu;
        step.nu.resize(T.size());
        std::size_t best = 0;
        for (std::size_t k = 0; k < T.size(); ++k) {
            step.nu[k] = norm2(T[k]) * (1.0 - mu2[k]);
            if (step.nu[k] / sigma2(T[k]) > step.nu[best] / sigma2(T[best]))
                best = k;
        }
        step.chosen = T[best];
        step.metric = step.nu[best] / sigma2(T[best]);
        res.selected.push_back(step.chosen);
        res.steps.push_back(std::move(step));
    }
    return res;
}

} // namespace

double NormView::norm2() const
{
    return sum_squares(norms);
}

double LocalView::norm2() const
{
    return sum_squares(norms);
}

double LargeScaleView::total() const
{
    return std::accumulate(alpha.begin(), alpha.end(), 0.0);
}

NormView make_norm_view(const GlobalChannel& h, double sigma2)
{
    return NormView{h.sublink_norms(), sigma2};
}

LocalView make_local_view(const GlobalChannel& h, std::size_t home_cell, double sigma2)
{
    if (home_cell >= h.cells())
        throw InvalidInput("make_local_view: home cell out of range");
    return LocalView{home_cell, h.sublinks[home_cell], h.sublink_norms(), sigma2};
}

LargeScaleView make_large_scale_view(std::span<const double> alpha_row, double sigma2)
{
    return LargeScaleView{std::vector<double>(alpha_row.begin(), alpha_row.end()), sigma2};
}

FullView make_full_view(const GlobalChannel& h, double sigma2)
{
    return FullView{h.composed, sigma2};
}

double projected_norm(const CRowVec& h, const CMat& H_selected)
{
    const double total = h.squaredNorm();
    if (H_selected.rows() == 0)
        return total;
    if (H_selected.cols() != h.size())
        throw InvalidInput("projected_norm: dimension mismatch");
    if (H_selected.rows() > H_selected.cols())
        throw InvalidInput("projected_norm: more selected users than dimensions");
    // Orthonormal basis of the row space via QR of H^H.
    Eigen::ColPivHouseholderQR<CMat> qr(H_selected.adjoint());
    qr.setThreshold(1e-10);
    if (qr.rank() < H_selected.rows())
        throw NumericalError("projected_norm: selected channels are rank deficient");
    const CMat Q = qr.householderQ() * CMat::Identity(h.size(), H_selected.rows());
    const CRowVec coeff = h * Q; // components along the row space
    return std::max(total - coeff.squaredNorm(), 0.0);
}

double mu_upper(std::span<const double> norms_i, std::span<const double> norms_j)
{
    if (norms_i.size() != norms_j.size() || norms_i.empty())
        throw InvalidInput("mu_upper: norm vectors differ in length");
    const double ni = std::sqrt(sum_squares(norms_i));
    const double nj = std::sqrt(sum_squares(norms_j));
    if (!(ni > 0.0) || !(nj > 0.0))
        throw InvalidInput("mu_upper: all-zero norm vector");
    double s = 0.0;
    for (std::size_t n = 0; n < norms_i.size(); ++n)
        s += norms_i[n] * norms_j[n];
    return std::min(s / (ni * nj), 1.0);
}

double nu_lower(double norm2_i, std::span<const double> mus)
{
    return norm2_i * (1.0 - sum_squares(mus));
}

double mu_bar(const LocalView& candidate, const LocalView& selected)
{
    const std::size_t M = candidate.norms.size();
    if (selected.norms.size() != M || M == 0)
        throw InvalidInput("mu_bar: norm vectors differ in length");
    const double ni = std::sqrt(candidate.norm2());
    const double nj = std::sqrt(selected.norm2());
    if (!(ni > 0.0) || !(nj > 0.0))
        throw InvalidInput("mu_bar: all-zero norm vector");
    const std::size_t m = candidate.home_cell;
    double s = 0.0;
    for (std::size_t n = 0; n < M; ++n) {
        // A scalar sublink has no direction, so the refinement is void there.
        if (n == m && selected.home_cell == m && candidate.local.size() > 1)
            s += std::abs(candidate.local.dot(selected.local));
        else
            s += candidate.norms[n] * selected.norms[n];
    }
    return std::min(s / (ni * nj), 1.0);
}

double mu_lus(std::span<const double> alpha_i, std::span<const double> alpha_j)
{
    if (alpha_i.size() != alpha_j.size() || alpha_i.empty())
        throw InvalidInput("mu_lus: gain vectors differ in length");
    double s = 0.0, ti = 0.0, tj = 0.0;
    for (std::size_t n = 0; n < alpha_i.size(); ++n) {
        if (alpha_i[n] < 0.0 || alpha_j[n] < 0.0)
            throw InvalidInput("mu_lus: negative gain");
        s += std::sqrt(alpha_i[n] * alpha_j[n]);
        ti += alpha_i[n];
        tj += alpha_j[n];
    }
    if (!(ti > 0.0) || !(tj > 0.0))
        throw InvalidInput("mu_lus: all-zero gain vector");
    return std::min(s / std::sqrt(ti * tj), 1.0);
}

double nu_lus(std::span<const double> alpha_i, std::span<const double> mus)
{
    return std::accumulate(alpha_i.begin(), alpha_i.end(), 0.0) * (1.0 - sum_squares(mus));
}

ScheduleResult nus_schedule(std::span<const NormView> views, std::span<const std::size_t> pool, double epsilon,
                            const ScheduleLimits& limits)
{
    check_pool(pool, views.size());
    return bound_schedule(
        pool, epsilon, limits, [&](std::size_t i) { return views[i].norm2() / views[i].sigma2; },
        [&](std::size_t i) { return views[i].norm2(); }, [&](std::size_t i) { return views[i].sigma2; },
        [&](std::size_t i, std::size_t j) { return mu_upper(views[i].norms, views[j].norms); });
}

ScheduleResult localnus_schedule(std::span<const LocalView> views, std::span<const std::size_t> pool,
                                 double epsilon, const ScheduleLimits& limits)
{
    check_pool(pool, views.size());
    return bound_schedule(
        pool, epsilon, limits, [&](std::size_t i) { return views[i].norm2() / views[i].sigma2; },
        [&](std::size_t i) { return views[i].norm2(); }, [&](std::size_t i) { return views[i].sigma2; },
        [&](std::size_t i, std::size_t j) { return mu_bar(views[i], views[j]); });
}

ScheduleResult lus_schedule(std::span<const LargeScaleView> views, std::span<const std::size_t> pool,
                            double epsilon, const ScheduleLimits& limits)
{
    check_pool(pool, views.size());
    return bound_schedule(
        pool, epsilon, limits, [&](std::size_t i) { return views[i].total() / views[i].sigma2; },
        [&](std::size_t i) { return views[i].total(); }, [&](std::size_t i) { return views[i].sigma2; },
        [&](std::size_t i, std::size_t j) { return mu_lus(views[i].alpha, views[j].alpha); });
}

ScheduleResult sus_schedule(std::span<const FullView> views, std::span<const std::size_t> pool_in, double epsilon,
                            const ScheduleLimits& limits)
{
    check_pool(pool_in, views.size());
    if (!(epsilon > 0.0 && epsilon <= 1.0))
        throw InvalidInput("sus_schedule: epsilon must lie in (0, 1]");
    if (limits.max_users == 0)
        throw InvalidInput("sus_schedule: max_users must be positive");
    std::vector<std::size_t> T(pool_in.begin(), pool_in.end());
    std::sort(T.begin(), T.end());

    ScheduleResult res;
    ScheduleStep first;
    first.pool_size = T.size();
    first.chosen = T.front();
    first.metric = -1.0;
    for (std::size_t i : T) {
        const double n2 = views[i].h.squaredNorm();
        first.candidates.push_back(i);
        first.bound.push_back(0.0);
        first.nu.push_back(n2);
        if (n2 / views[i].sigma2 > first.metric) {
            first.metric = n2 / views[i].sigma2;
            first.chosen = i;
        }
    }
    std::vector<CRowVec> g{views[first.chosen].h};
    res.selected.push_back(first.chosen);
    res.steps.push_back(std::move(first));

    while (res.selected.size() < limits.max_users) {
        const std::size_t last = res.selected.back();
        const CRowVec& gl = g.back();
        const double gln = gl.norm();
        std::vector<std::size_t> next_T;
        std::vector<double> corr;
        for (std::size_t i : T) {
            if (i == last)
                continue;
            const CRowVec& h = views[i].h;
            const double hn = h.norm();
            const double c = (hn > 0.0 && gln > 0.0) ? std::abs(h.dot(gl)) / (hn * gln) : 1.0;
            if (c <= epsilon) {
                next_T.push_back(i);
                corr.push_back(c);
            }
        }
        T = std::move(next_T);
        if (T.empty())
            break;
        ScheduleStep step;
        step.pool_size = T.size();
        step.candidates = T;
        step.bound = corr;
        step.nu.resize(T.size());
        std::size_t best = 0;
        CRowVec best_g;
        double best_metric = -1.0;
        for (std::size_t k = 0; k < T.size(); ++k) {
            CRowVec gi = views[T[k]].h;
            for (int pass = 0; pass < 2; ++pass)
                for (const CRowVec& gj : g)
                    gi -= (gj.dot(gi) / gj.squaredNorm()) * gj;
            step.nu[k] = gi.squaredNorm();
            const double metric = step.nu[k] / views[T[k]].sigma2;
            if (metric > best_metric) {
                best_metric = metric;
                best = k;
                best_g = gi;
            }
        }
        if (!(step.nu[best] > 1e-20 * views[T[best]].h.squaredNorm()))
            break; // every survivor lies in the span of the selection
        step.chosen = T[best];
        step.metric = best_metric;
        g.push_back(best_g);
        res.selected.push_back(step.chosen);
        res.steps.push_back(std::move(step));
    }
    return res;
}

ScheduleResult gus_schedule(std::span<const std::size_t> pool_in, const ScheduleLimits& limits,
                            const RateOracle& sum_rate)
{
    if (pool_in.empty())
        throw InvalidInput("gus_schedule: empty user pool");
    if (limits.max_users == 0)
        throw InvalidInput("gus_schedule: max_users must be positive");
    std::vector<std::size_t> remaining(pool_in.begin(), pool_in.end());
    std::sort(remaining.begin(), remaining.end());

    ScheduleResult res;
    double current = 0.0;
    while (res.selected.size() < limits.max_users && !remaining.empty()) {
        ScheduleStep step;
        step.pool_size = remaining.size();
        step.candidates = remaining;
        std::size_t best = remaining.size();
        double best_rate = -1.0;
        std::vector<std::size_t> trial = res.selected;
        trial.push_back(0);
        for (std::size_t k = 0; k < remaining.size(); ++k) {
            trial.back() = remaining[k];
            const double r = sum_rate(trial);
            step.bound.push_back(r);
            if (r > best_rate) {
                best_rate = r;
                best = k;
            }
        }
        const bool improves = res.selected.empty() || best_rate > current * (1.0 + 1e-9);
        if (!improves)
            break;
        step.chosen = remaining[best];
        step.metric = best_rate;
        current = best_rate;
        res.selected.push_back(step.chosen);
        res.steps.push_back(std::move(step));
        remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best));
    }
    return res;
}

ScheduleResult rus_schedule(std::span<const std::size_t> pool_in, const ScheduleLimits& limits,
                            SeededRandomStream& rng)
{
    if (pool_in.empty())
        throw InvalidInput("rus_schedule: empty user pool");
    std::vector<std::size_t> pool(pool_in.begin(), pool_in.end());
    std::sort(pool.begin(), pool.end());
    const std::size_t take = std::min(limits.max_users, pool.size());
    // Partial Fisher-Yates.
    for (std::size_t k = 0; k < take; ++k) {
        const std::size_t j = k + rng.uniform_index(pool.size() - k);
        std::swap(pool[k], pool[j]);
    }
    ScheduleResult res;
    res.selected.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(take));
    ScheduleStep step;
    step.pool_size = pool_in.size();
    step.chosen = res.selected.front();
    res.steps.push_back(std::move(step));
    return res;
}

RrPeriod rr_wrap(const SlotScheduler& scheduler, std::vector<std::size_t> pool, const FallbackPicker& fallback)
{
    std::sort(pool.begin(), pool.end());
    if (std::adjacent_find(pool.begin(), pool.end()) != pool.end())
        throw InvalidInput("rr_wrap: duplicate users in pool");
    RrPeriod period;
    while (!pool.empty()) {
        const std::size_t slot = period.groups.size();
        ScheduleResult res = scheduler(pool, slot);
        if (res.selected.empty()) {
            const std::size_t pick = fallback ? fallback(pool) : pool.front();
            res.selected = {pick};
        }
        std::unordered_set<std::size_t> seen;
        for (std::size_t u : res.selected) {
            if (!std::binary_search(pool.begin(), pool.end(), u))
                throw NumericalError("rr_wrap: scheduler selected a user outside the pool");
            if (!seen.insert(u).second)
                throw NumericalError("rr_wrap: scheduler selected a user twice");
        }
        std::erase_if(pool, [&](std::size_t u) { return seen.count(u) > 0; });
        period.groups.push_back(res.selected);
        period.results.push_back(std::move(res));
    }
    return period;
}

} // namespace comp
