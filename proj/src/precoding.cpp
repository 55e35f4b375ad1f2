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

#include "comp/precoding.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace comp
{

CMat zf_beamformer(const CMat& H)
{
    const Eigen::Index L = H.rows();
    if (L == 0)
        throw InvalidInput("zf_beamformer: no users");
    if (L > H.cols())
        throw InvalidInput("zf_beamformer: more users than transmit antennas");
    Eigen::JacobiSVD<CMat> svd(H, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RVec& s = svd.singularValues();
    const double smax = s(0);
    if (!(smax > 0.0) || s(L - 1) < 1e-10 * smax) {
        // Name the rows in the numerical null space of H^H.
        const CMat& U = svd.matrixU();
        std::ostringstream msg;
        msg << "zf_beamformer: channel matrix is rank deficient; dependent rows:";
        for (Eigen::Index r = 0; r < L; ++r) {
            double weight = 0.0;
            for (Eigen::Index k = 0; k < L; ++k)
                if (!(s(k) >= 1e-10 * smax) || !(smax > 0.0))
                    weight += std::norm(U(r, k));
            if (weight > 1e-6)
                msg << ' ' << r;
        }
        throw NumericalError(msg.str());
    }
    // Pseudo-inverse from the SVD, then one step of iterative refinement.
    CMat G = svd.matrixV() * s.cwiseInverse().asDiagonal() * svd.matrixU().adjoint();
    const CMat E = CMat::Identity(L, L) - H * G;
    G += G * E;
    return G;
}

RMat bs_power_profile(const CMat& G, std::size_t antennas_per_bs)
{
    const auto nt = static_cast<Eigen::Index>(antennas_per_bs);
    if (nt == 0 || G.rows() % nt != 0)
        throw InvalidInput("bs_power_profile: rows must split into whole BS arrays");
    const Eigen::Index M = G.rows() / nt;
    RMat C(M, G.cols());
    for (Eigen::Index m = 0; m < M; ++m)
        for (Eigen::Index l = 0; l < G.cols(); ++l)
            C(m, l) = G.block(m * nt, l, nt, 1).squaredNorm();
    return C;
}

namespace
{

struct DualState
{
    const RMat& C;
    std::span<const double> sigma2;
    std::span<const double> p_max;
};

// Power of BS m when lambda_m = x and the other multipliers give the base
// weights b_l = sum_{n != m} lambda_n C(n, l). Returns value and derivative.
std::pair<double, double> bs_usage(const DualState& st, Eigen::Index m, double x, const RVec& base)
{
    double u = 0.0;
    double du = 0.0;
    for (Eigen::Index l = 0; l < st.C.cols(); ++l) {
        const double c = st.C(m, l);
        if (c <= 0.0)
            continue;
        const double w = x * c + base(l);
        if (w <= 0.0)
            return {std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
        const double p = 1.0 / w - st.sigma2[static_cast<std::size_t>(l)];
        if (p > 0.0) {
            u += c * p;
            du -= c * c / (w * w);
        }
    }
    return {u, du};
}

// Smallest x >= 0 with usage(x) <= P_m; usage is convex and decreasing in x,
// so Newton from the left is monotone. Bisection guards the bracket.
double solve_multiplier(const DualState& st, Eigen::Index m, double guess, const RVec& base)
{
    const double target = st.p_max[static_cast<std::size_t>(m)];
    auto excess = [&](double x) { return bs_usage(st, m, x, base).first - target; };
    if (excess(0.0) <= 0.0)
        return 0.0;
    double hi = std::max(guess, 1e-300);
    while (excess(hi) > 0.0)
        hi *= 2.0;
    double lo = 0.5 * hi;
    while (excess(lo) <= 0.0) {
        hi = lo;
        lo *= 0.5;
    }
    double x = lo;
    for (int it = 0; it < 200; ++it) {
        const auto [u, du] = bs_usage(st, m, x, base);
        const double f = u - target;
        if (f > 0.0)
            lo = x;
        else
            hi = x;
        double next = (std::isfinite(f) && du < 0.0) ? x - f / du : 0.5 * (lo + hi);
        if (!(next > lo && next < hi))
            next = 0.5 * (lo + hi);
        if (std::abs(next - x) <= 1e-15 * x || hi - lo <= 1e-15 * hi)
            return next;
        x = next;
    }
    return x;
}

RVec primal_from_dual(const RMat& C, const RVec& lambda, std::span<const double> sigma2)
{
    RVec p(C.cols());
    for (Eigen::Index l = 0; l < C.cols(); ++l) {
        const double w = C.col(l).dot(lambda);
        p(l) = w > 0.0 ? std::max(1.0 / w - sigma2[static_cast<std::size_t>(l)], 0.0)
                       : std::numeric_limits<double>::infinity();
    }
    return p;
}

double objective(const RVec& p, std::span<const double> sigma2)
{
    double s = 0.0;
    for (Eigen::Index l = 0; l < p.size(); ++l)
        s += std::log1p(p(l) / sigma2[static_cast<std::size_t>(l)]);
    return s;
}

} // namespace

PowerAllocation pbpc_power_allocation(const RMat& C, std::span<const double> sigma2, std::span<const double> p_max,
                                      double gap_tol)
{
    const Eigen::Index M = C.rows();
    const Eigen::Index L = C.cols();
    if (static_cast<std::size_t>(L) != sigma2.size() || static_cast<std::size_t>(M) != p_max.size())
        throw InvalidInput("pbpc_power_allocation: dimension mismatch");
    if (L == 0)
        throw InvalidInput("pbpc_power_allocation: no users");
    for (double P : p_max)
        if (P < 0.0)
            throw InvalidInput("pbpc_power_allocation: negative power budget");
    for (double s : sigma2)
        if (!(s > 0.0))
            throw InvalidInput("pbpc_power_allocation: noise variance must be positive");
    for (Eigen::Index l = 0; l < L; ++l)
        if (!(C.col(l).maxCoeff() > 0.0))
            throw InvalidInput("pbpc_power_allocation: a user draws no power from any BS");

    PowerAllocation out;
    if (std::all_of(p_max.begin(), p_max.end(), [](double P) { return P == 0.0; })) {
        out.p = RVec::Zero(L);
        out.per_bs_power = RVec::Zero(M);
        return out;
    }

    const DualState st{C, sigma2, p_max};
    RVec lambda = RVec::Zero(M);
    RVec guess(M);
    for (Eigen::Index m = 0; m < M; ++m) {
        const double cm = C.row(m).sum();
        guess(m) = (p_max[static_cast<std::size_t>(m)] > 0.0 && cm > 0.0)
                       ? static_cast<double>(L) / p_max[static_cast<std::size_t>(m)]
                       : 1.0;
    }

    RVec p_feasible = RVec::Zero(L);
    for (std::size_t sweep = 1; sweep <= 100000; ++sweep) {
        for (Eigen::Index m = 0; m < M; ++m) {
            RVec base = C.transpose() * lambda - C.row(m).transpose() * lambda(m);
            lambda(m) = solve_multiplier(st, m, lambda(m) > 0.0 ? lambda(m) : guess(m), base);
        }
        const RVec p = primal_from_dual(C, lambda, sigma2);
        if (!p.allFinite())
            continue;
        const RVec usage = C * p;
        double scale = std::numeric_limits<double>::infinity();
        for (Eigen::Index m = 0; m < M; ++m)
            if (usage(m) > 0.0)
                scale = std::min(scale, p_max[static_cast<std::size_t>(m)] / usage(m));
        if (!std::isfinite(scale))
            continue;
        p_feasible = scale * p;
        const double primal = objective(p_feasible, sigma2);
        const double dual = objective(p, sigma2) - lambda.dot(usage - Eigen::Map<const RVec>(p_max.data(), M));
        out.duality_gap = std::max(dual - primal, 0.0);
        out.sweeps = sweep;
        if (out.duality_gap <= gap_tol * std::max(std::abs(primal), 1e-12))
            break;
    }
    out.p = p_feasible;
    out.per_bs_power = C * p_feasible;
    out.objective = objective(p_feasible, sigma2);
    return out;
}

PowerAllocation pbpc_power_allocation(const CMat& G, std::span<const double> sigma2, std::span<const double> p_max,
                                      std::size_t antennas_per_bs, double gap_tol)
{
    return pbpc_power_allocation(bs_power_profile(G, antennas_per_bs), sigma2, p_max, gap_tol);
}

PrecoderSolution zf_pbpc(const CMat& H, std::span<const double> sigma2, std::span<const double> p_max,
                         std::size_t antennas_per_bs)
{
    PrecoderSolution sol;
    sol.G = zf_beamformer(H);
    const PowerAllocation pa = pbpc_power_allocation(sol.G, sigma2, p_max, antennas_per_bs);
    sol.p = pa.p;
    sol.per_bs_power = pa.per_bs_power;
    sol.duality_gap = pa.duality_gap;
    sol.W = sol.G * sol.p.cwiseSqrt().cast<cplx>().asDiagonal();
    return sol;
}

LinkPerformance evaluate_links(const CMat& H_true, const CMat& W, std::span<const double> sigma2)
{
    const Eigen::Index L = H_true.rows();
    if (W.rows() != H_true.cols() || W.cols() != L || static_cast<std::size_t>(L) != sigma2.size())
        throw InvalidInput("evaluate_links: dimension mismatch");
    const CMat R = H_true * W; // R(l, j) = h_l w_j
    LinkPerformance out;
    out.sinr.resize(L);
    out.rate.resize(L);
    for (Eigen::Index l = 0; l < L; ++l) {
        const double signal = std::norm(R(l, l));
        const double interference = R.row(l).squaredNorm() - signal;
        out.sinr(l) = signal / (std::max(interference, 0.0) + sigma2[static_cast<std::size_t>(l)]);
        out.rate(l) = std::log2(1.0 + out.sinr(l));
    }
    return out;
}

} // namespace comp
