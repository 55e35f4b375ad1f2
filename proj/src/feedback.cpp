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

#include "comp/feedback.hpp"

#include <cmath>
#include <numeric>

namespace comp
{

Codebook gen_codebook(const SpatialCorrelation& corr, unsigned bits, std::uint64_t seed)
{
    if (bits < 1)
        throw InvalidInput("gen_codebook: at least one bit is needed for CDI");
    if (bits > 24)
        throw InvalidInput("gen_codebook: codebook too large");
    SeededRandomStream rng(seed);
    Codebook cb;
    cb.bits = bits;
    const std::size_t J = std::size_t{1} << bits;
    cb.entries.reserve(J);
    while (cb.entries.size() < J) {
        const CRowVec e = sample_small_scale(corr, rng);
        const double n = e.norm();
        if (n > 0.0)
            cb.entries.push_back(e / n);
    }
    return cb;
}

std::size_t quantize(const CRowVec& v, const Codebook& codebook)
{
    if (codebook.entries.empty())
        throw InvalidInput("quantize: empty codebook");
    std::size_t best = 0;
    double best_val = -1.0;
    for (std::size_t j = 0; j < codebook.entries.size(); ++j) {
        const double a = std::abs(v.dot(codebook.entries[j]));
        if (a > best_val) {
            best_val = a;
            best = j;
        }
    }
    return best;
}

QuantizedSublink quantize_sublink(const CRowVec& h_n, const Codebook& codebook)
{
    QuantizedSublink q;
    q.cqi = h_n.norm();
    q.index = q.cqi > 0.0 ? quantize(h_n / q.cqi, codebook) : 0;
    return q;
}

std::vector<QuantizedSublink> quantize_channel(const GlobalChannel& h, const std::vector<Codebook>& codebooks)
{
    if (codebooks.size() != h.cells())
        throw InvalidInput("quantize_channel: one codebook per sublink required");
    std::vector<QuantizedSublink> out;
    out.reserve(h.cells());
    for (std::size_t n = 0; n < h.cells(); ++n)
        out.push_back(quantize_sublink(h.sublinks[n], codebooks[n]));
    return out;
}

GlobalChannel reconstruct(const std::vector<QuantizedSublink>& q, const std::vector<Codebook>& codebooks)
{
    if (q.size() != codebooks.size() || q.empty())
        throw InvalidInput("reconstruct: one codebook per sublink required");
    const Eigen::Index n_t = codebooks.front().entries.front().size();
    GlobalChannel h;
    h.composed.resize(n_t * static_cast<Eigen::Index>(q.size()));
    for (std::size_t n = 0; n < q.size(); ++n) {
        if (q[n].index >= codebooks[n].size())
            throw InvalidInput("reconstruct: codebook index out of range");
        h.sublinks.push_back(q[n].cqi * codebooks[n].entries[q[n].index]);
        h.composed.segment(static_cast<Eigen::Index>(n) * n_t, n_t) = h.sublinks.back();
    }
    return h;
}

FeedbackClass feedback_class(SchedulerKind kind)
{
    switch (kind) {
    case SchedulerKind::SUS:
    case SchedulerKind::GUS:
        return FeedbackClass::OnePhase;
    case SchedulerKind::LocalNUS:
        return FeedbackClass::LocalTwoPhase;
    case SchedulerKind::NUS:
    case SchedulerKind::LUS:
    case SchedulerKind::RUS:
        return FeedbackClass::TwoPhase;
    }
    throw InvalidInput("feedback_class: unknown scheduler");
}

unsigned codebook_bits(FeedbackClass cls, std::size_t M, std::size_t K, std::size_t L_budget, double B_u,
                       double B_t)
{
    if (M == 0 || K == 0 || L_budget == 0)
        throw InvalidInput("codebook_bits: M, K and L must be positive");
    if (!(B_u >= 0.0) || !(B_t >= 0.0))
        throw InvalidInput("codebook_bits: budgets must be non-negative");
    const double m = static_cast<double>(M);
    const double k = static_cast<double>(K);
    const double l = static_cast<double>(L_budget);
    double total_share = 0.0;
    switch (cls) {
    case FeedbackClass::OnePhase:
        total_share = B_t / (k * m * m);
        break;
    case FeedbackClass::TwoPhase:
        total_share = B_t / (m * l);
        break;
    case FeedbackClass::LocalTwoPhase:
        total_share = B_t / (m * k + m * l);
        break;
    }
    // Guard the floor against representation error in exact quotients.
    const double b = std::floor(std::min(B_u / m, total_share) + 1e-9);
    if (b < 1.0)
        throw InvalidInput("codebook_bits: budget too small for any CDI");
    return static_cast<unsigned>(b);
}

unsigned codebook_bits(SchedulerKind kind, std::size_t M, std::size_t K, std::size_t L_budget, double B_u,
                       double B_t)
{
    return codebook_bits(feedback_class(kind), M, K, L_budget, B_u, B_t);
}

std::size_t slot_feedback_bits(FeedbackClass cls, std::size_t M, std::size_t U, std::size_t L, unsigned B)
{
    switch (cls) {
    case FeedbackClass::OnePhase:
        return M * U * B;
    case FeedbackClass::TwoPhase:
        return M * L * B;
    case FeedbackClass::LocalTwoPhase:
        return (U + M * L) * B;
    }
    return 0;
}

void BitMeter::charge(std::size_t bits)
{
    if (slots_.empty())
        throw InvalidInput("BitMeter: charge outside a slot");
    slots_.back() += bits;
}

std::size_t BitMeter::total() const
{
    return std::accumulate(slots_.begin(), slots_.end(), std::size_t{0});
}

} // namespace comp
