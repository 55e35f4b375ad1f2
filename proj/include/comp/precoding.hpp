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

#ifndef COMP_PRECODING_HPP
#define COMP_PRECODING_HPP

#include "comp/types.hpp"

#include <span>
#include <vector>

namespace comp
{

// Right pseudo-inverse G = H^H (H H^H)^-1 of the L x (M N_t) channel matrix.
// Singular values below 1e-10 sigma_max count as rank deficiency.
CMat zf_beamformer(const CMat& H);

// C(m, l) = ||g_{m,l}||^2, the power BS m spends per unit of p_l.
RMat bs_power_profile(const CMat& G, std::size_t antennas_per_bs);

struct PowerAllocation
{
    RVec p;               // per-user receive powers
    RVec per_bs_power;    // sum_l p_l C(m, l)
    double objective = 0; // sum_l ln(1 + p_l / sigma_l^2)
    double duality_gap = 0;
    std::size_t sweeps = 0;
};

// max sum_l ln(1 + p_l / sigma_l^2) s.t. C p <= P_max, p >= 0, solved on
// the dual: for multipliers lambda, p_l = [1 / (C^T lambda)_l - sigma_l^2]^+.
// Multipliers are updated one BS at a time to make its constraint tight,
// until the relative gap to a scaled feasible primal is below `gap_tol`.
PowerAllocation pbpc_power_allocation(const RMat& C, std::span<const double> sigma2, std::span<const double> p_max,
                                      double gap_tol = 1e-8);

PowerAllocation pbpc_power_allocation(const CMat& G, std::span<const double> sigma2, std::span<const double> p_max,
                                      std::size_t antennas_per_bs, double gap_tol = 1e-8);

struct PrecoderSolution
{
    CMat G;
    RVec p;
    CMat W; // G diag(sqrt(p))
    RVec per_bs_power;
    double duality_gap = 0;
};

PrecoderSolution zf_pbpc(const CMat& H, std::span<const double> sigma2, std::span<const double> p_max,
                         std::size_t antennas_per_bs);

struct LinkPerformance
{
    RVec sinr;
    RVec rate; // log2(1 + sinr), bit/s/Hz

    double sum_rate() const { return rate.sum(); }
};

// SINR of every row of H_true under beamformer W (columns), with the
// interference of all other columns.
LinkPerformance evaluate_links(const CMat& H_true, const CMat& W, std::span<const double> sigma2);

} // namespace comp

#endif
