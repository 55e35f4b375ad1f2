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

#include "comp/channel.hpp"

#include "comp/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <ostream>

namespace comp
{

namespace
{

constexpr double kSpeedOfLight = 299792458.0;

bool is_hermitian(const CMat& R, double tol)
{
    return (R - R.adjoint()).norm() <= tol * std::max(1.0, R.norm());
}

} // namespace

CMat hermitian_sqrt(const CMat& R, double tol)
{
    if (R.rows() != R.cols() || R.rows() == 0)
        throw InvalidInput("hermitian_sqrt: matrix must be square and non-empty");
    if (!is_hermitian(R, 1e-9))
        throw NumericalError("hermitian_sqrt: matrix is not Hermitian");
    Eigen::SelfAdjointEigenSolver<CMat> eig(R);
    if (eig.info() != Eigen::Success)
        throw NumericalError("hermitian_sqrt: eigendecomposition failed");
    RVec lambda = eig.eigenvalues();
    const double scale = std::max(lambda.cwiseAbs().maxCoeff(), 1e-300);
    for (Eigen::Index k = 0; k < lambda.size(); ++k) {
        if (lambda(k) < -1e-9 * scale)
            throw NumericalError("hermitian_sqrt: matrix is not positive semi-definite");
        lambda(k) = lambda(k) <= tol * scale ? 0.0 : std::sqrt(lambda(k));
    }
    const CMat& U = eig.eigenvectors();
    return U * lambda.cast<cplx>().asDiagonal() * U.adjoint();
}

SpatialCorrelation::SpatialCorrelation(CMat R) : R_(std::move(R))
{
    if (R_.rows() != R_.cols() || R_.rows() == 0)
        throw InvalidInput("SpatialCorrelation: matrix must be square and non-empty");
    for (Eigen::Index k = 0; k < R_.rows(); ++k)
        if (std::abs(R_(k, k) - 1.0) > 1e-9)
            throw InvalidInput("SpatialCorrelation: diagonal must be one");
    sqrt_ = hermitian_sqrt(R_);
}

SpatialCorrelation SpatialCorrelation::identity(std::size_t n_t)
{
    const auto n = static_cast<Eigen::Index>(n_t);
    return SpatialCorrelation(CMat::Identity(n, n));
}

SpatialCorrelation single_bounce_correlation(double bearing_rad, double angular_spread_rad, std::size_t n_t,
                                             double spacing_wavelengths)
{
    if (n_t < 1)
        throw InvalidInput("single_bounce_correlation: need at least one antenna");
    if (!(angular_spread_rad > 0.0))
        throw InvalidInput("single_bounce_correlation: angular spread must be positive");
    if (n_t == 1 || angular_spread_rad >= kUncorrelatedSpreadRad)
        return SpatialCorrelation::identity(n_t);

    // Gaussian expectation over theta by composite Gauss-Legendre on +-8 sigma.
    const double sigma = angular_spread_rad;
    const double lo = bearing_rad - 8.0 * sigma;
    const double hi = bearing_rad + 8.0 * sigma;
    const auto panels = static_cast<std::size_t>(std::ceil((hi - lo) / std::min(0.5 * sigma, 0.1)));
    const QuadratureRule rule = composite_gauss_legendre(lo, hi, std::max<std::size_t>(panels, 16), 8);

    const auto n = static_cast<Eigen::Index>(n_t);
    std::vector<cplx> lag(n_t, cplx(0.0, 0.0));
    const double norm = 1.0 / (sigma * std::sqrt(2.0 * std::numbers::pi));
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        const double theta = rule.nodes[k];
        const double z = (theta - bearing_rad) / sigma;
        const double w = rule.weights[k] * norm * std::exp(-0.5 * z * z);
        const double phase = 2.0 * std::numbers::pi * spacing_wavelengths * std::sin(theta);
        for (std::size_t d = 0; d < n_t; ++d)
            lag[d] += w * std::polar(1.0, phase * static_cast<double>(d));
    }

    CMat R(n, n);
    for (Eigen::Index p = 0; p < n; ++p)
        for (Eigen::Index q = 0; q < n; ++q) {
            const auto d = static_cast<std::size_t>(std::abs(p - q));
            const cplx v = lag[d] / lag[0].real();
            R(p, q) = p >= q ? v : std::conj(v);
        }
    for (Eigen::Index p = 0; p < n; ++p)
        R(p, p) = 1.0;
    return SpatialCorrelation(std::move(R));
}

double array_bearing(const Point& bs, const Point& user)
{
    return std::atan2(user.x - bs.x, user.y - bs.y);
}

CRowVec sample_small_scale(const SpatialCorrelation& corr, SeededRandomStream& rng)
{
    return rng.complex_normal(corr.size()) * corr.sqrt();
}

std::vector<double> GlobalChannel::sublink_norms() const
{
    std::vector<double> out(sublinks.size());
    for (std::size_t n = 0; n < sublinks.size(); ++n)
        out[n] = sublinks[n].norm();
    return out;
}

GlobalChannel compose_global(std::span<const double> alpha_row, const std::vector<CRowVec>& small_scales)
{
    if (alpha_row.size() != small_scales.size() || small_scales.empty())
        throw InvalidInput("compose_global: one gain per sublink required");
    const Eigen::Index n_t = small_scales.front().size();
    GlobalChannel h;
    h.sublinks.reserve(small_scales.size());
    h.composed.resize(n_t * static_cast<Eigen::Index>(small_scales.size()));
    for (std::size_t n = 0; n < small_scales.size(); ++n) {
        if (small_scales[n].size() != n_t)
            throw InvalidInput("compose_global: sublinks differ in length");
        if (alpha_row[n] < 0.0)
            throw InvalidInput("compose_global: negative gain");
        h.sublinks.push_back(std::sqrt(alpha_row[n]) * small_scales[n]);
        h.composed.segment(static_cast<Eigen::Index>(n) * n_t, n_t) = h.sublinks.back();
    }
    return h;
}

double doppler_hz(double speed_kmh, double carrier_hz)
{
    if (speed_kmh < 0.0 || !(carrier_hz > 0.0))
        throw InvalidInput("doppler_hz: speed must be non-negative and carrier positive");
    const double wavelength = kSpeedOfLight / carrier_hz;
    return (speed_kmh / 3.6) / wavelength;
}

double jakes_lag_correlation(double doppler, double slot_s)
{
    return std::cyl_bessel_j(0.0, 2.0 * std::numbers::pi * doppler * slot_s);
}

FadingProcess::FadingProcess(SpatialCorrelation corr, double rho, std::uint64_t seed)
    : corr_(std::move(corr)), rho_(rho), rng_(seed)
{
    if (!(rho >= -1.0 && rho <= 1.0))
        throw InvalidInput("FadingProcess: correlation must lie in [-1, 1]");
    white_ = rng_.complex_normal(corr_.size());
    current_ = white_ * corr_.sqrt();
}

void FadingProcess::step()
{
    ++slot_;
    if (rho_ == 1.0)
        return;
    const double innov = std::sqrt(1.0 - rho_ * rho_);
    white_ = rho_ * white_ + innov * rng_.complex_normal(corr_.size());
    current_ = white_ * corr_.sqrt();
}

std::vector<CRowVec> FadingProcess::evolve(std::size_t steps)
{
    std::vector<CRowVec> out;
    out.reserve(steps);
    for (std::size_t t = 0; t < steps; ++t) {
        step();
        out.push_back(current_);
    }
    return out;
}

void write_channels_csv(std::ostream& os, const std::vector<GlobalChannel>& channels)
{
    if (channels.empty())
        return;
    const Eigen::Index n = channels.front().composed.size();
    os << "user";
    for (Eigen::Index a = 0; a < n; ++a)
        os << ",re_" << a << ",im_" << a;
    os << '\n';
    os.precision(17);
    for (std::size_t i = 0; i < channels.size(); ++i) {
        os << i;
        for (Eigen::Index a = 0; a < n; ++a)
            os << ',' << channels[i].composed(a).real() << ',' << channels[i].composed(a).imag();
        os << '\n';
    }
}

} // namespace comp
