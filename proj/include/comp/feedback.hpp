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

#ifndef COMP_FEEDBACK_HPP
#define COMP_FEEDBACK_HPP

#include "comp/channel.hpp"
#include "comp/schedulers.hpp"
#include "comp/types.hpp"

#include <cstdint>
#include <vector>

namespace comp
{

// Random codebook of 2^B unit vectors c_j = e_j / ||e_j||, e_j ~ CN(0, R).
// Entries are drawn in order from one seeded stream, so the codebook for
// B bits is a prefix of the codebook for B + 1 bits.
struct Codebook
{
    std::vector<CRowVec> entries;
    unsigned bits = 0;

    std::size_t size() const { return entries.size(); }
};

Codebook gen_codebook(const SpatialCorrelation& corr, unsigned bits, std::uint64_t seed);

// argmax_j |v c_j^H|, the entry at minimum chordal distance. Ties go to the
// lowest index.
std::size_t quantize(const CRowVec& v, const Codebook& codebook);

struct QuantizedSublink
{
    double cqi = 0.0;       // exact sublink norm
    std::size_t index = 0;  // codebook entry
};

// Per-sublink quantization of one user's global channel. `codebooks[n]` is
// the codebook of the (user, BS n) pair. Zero sublinks map to index 0.
std::vector<QuantizedSublink> quantize_channel(const GlobalChannel& h, const std::vector<Codebook>& codebooks);

// Quantization of the single sublink n.
QuantizedSublink quantize_sublink(const CRowVec& h_n, const Codebook& codebook);

// h_hat_n = rho_n c_{n, j_n}, concatenated over BSs.
GlobalChannel reconstruct(const std::vector<QuantizedSublink>& q, const std::vector<Codebook>& codebooks);

// Which CSI a scheduler gathers: all users' full channels before scheduling
// (one phase); scalars from everyone, then full channels from the selected
// users (two phase); or local channels from everyone, then full channels
// from the selected users.
enum class FeedbackClass
{
    OnePhase,
    TwoPhase,
    LocalTwoPhase
};

FeedbackClass feedback_class(SchedulerKind kind);

// Codebook size in bits per sublink under a per-user cap B_u and a total cap
// B_t. Throws when the budget leaves no bit for CDI.
unsigned codebook_bits(FeedbackClass cls, std::size_t M, std::size_t K, std::size_t L_budget, double B_u,
                       double B_t);
unsigned codebook_bits(SchedulerKind kind, std::size_t M, std::size_t K, std::size_t L_budget, double B_u,
                       double B_t);

// CDI bits spent in one slot when U users are still waiting to be served and
// L are selected: M U B, M L B or (U + M L) B. With the full pool U = M K
// these are M^2 K B, M L B and (M K + M L) B.
std::size_t slot_feedback_bits(FeedbackClass cls, std::size_t M, std::size_t U, std::size_t L, unsigned B);

// Counts the CDI bits actually sent, slot by slot.
class BitMeter
{
  public:
    void begin_slot() { slots_.push_back(0); }
    void charge(std::size_t bits);
    std::size_t slot_bits(std::size_t slot) const { return slots_.at(slot); }
    const std::vector<std::size_t>& slots() const { return slots_; }
    std::size_t total() const;

  private:
    std::vector<std::size_t> slots_;
};

} // namespace comp

#endif
