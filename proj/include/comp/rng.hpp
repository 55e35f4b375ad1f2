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

#ifndef COMP_RNG_HPP
#define COMP_RNG_HPP

#include "comp/types.hpp"

#include <cstdint>
#include <initializer_list>
#include <random>

namespace comp
{

// Deterministic seed derivation. Child streams are keyed by a list of
// integer tags folded through splitmix64, so (master, tags) always maps to
// the same 64-bit seed independently of evaluation order.
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> tags);

// Tags used when splitting a campaign master seed.
namespace stream
{
inline constexpr std::uint64_t drop = 1;
inline constexpr std::uint64_t geometry = 2;
inline constexpr std::uint64_t shadowing = 3;
inline constexpr std::uint64_t fading = 4;
inline constexpr std::uint64_t codebook = 5;
inline constexpr std::uint64_t scheduler = 6;
inline constexpr std::uint64_t angle = 7;
inline constexpr std::uint64_t tightness = 8;
} // namespace stream

class SeededRandomStream
{
  public:
    explicit SeededRandomStream(std::uint64_t seed) : engine_(seed), seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    double uniform() { return unit_(engine_); }
    double uniform(double lo, double hi) { return lo + (hi - lo) * unit_(engine_); }
    double normal() { return normal_(engine_); }
    std::size_t uniform_index(std::size_t n);

    // Circularly symmetric CN(0, 1): real and imaginary parts N(0, 1/2).
    cplx complex_normal();
    CRowVec complex_normal(Eigen::Index n);

    std::mt19937_64& engine() { return engine_; }

  private:
    std::mt19937_64 engine_;
    std::uint64_t seed_;
    std::uniform_real_distribution<double> unit_{0.0, 1.0};
    std::normal_distribution<double> normal_{0.0, 1.0};
};

} // namespace comp

#endif
