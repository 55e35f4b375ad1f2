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

#ifndef COMP_CHANNEL_HPP
#define COMP_CHANNEL_HPP

#include "comp/netgeom.hpp"
#include "comp/rng.hpp"
#include "comp/types.hpp"

#include <iosfwd>
#include <numbers>
#include <span>
#include <vector>

namespace comp
{

// A departure-angle spread of a full turn or more is taken to mean the
// uncorrelated (isotropic) channel, and the correlation is the identity.
inline constexpr double kUncorrelatedSpreadRad = 2.0 * std::numbers::pi;

// Hermitian square root by eigendecomposition. Eigenvalues below
// -tol * max(|lambda|) raise NumericalError; the rest are clamped at zero.
CMat hermitian_sqrt(const CMat& R, double tol = 1e-12);

// Transmit-side correlation of an N_t element ULA seen by a user whose
// scatterers are Gaussian in angle around `bearing_rad` (measured from the
// array broadside). Entry (p, q) is E[exp(j 2 pi s (p - q) sin theta)].
class SpatialCorrelation
{
  public:
    explicit SpatialCorrelation(CMat R);
    static SpatialCorrelation identity(std::size_t n_t);

    const CMat& matrix() const { return R_; }
    const CMat& sqrt() const { return sqrt_; }
    Eigen::Index size() const { return R_.rows(); }

  private:
    CMat R_;
    CMat sqrt_;
};

SpatialCorrelation single_bounce_correlation(double bearing_rad, double angular_spread_rad, std::size_t n_t,
                                             double spacing_wavelengths = 0.5);

// Bearing of `user` from a BS whose array axis is the x axis, measured
// from broadside (+y) towards +x.
double array_bearing(const Point& bs, const Point& user);

// g R^{1/2} with g ~ CN(0, I).
CRowVec sample_small_scale(const SpatialCorrelation& corr, SeededRandomStream& rng);

// Global channel of one user: sublink n is sqrt(alpha_n) * small-scale,
// concatenated in BS order.
struct GlobalChannel
{
    std::vector<CRowVec> sublinks;
    CRowVec composed;

    std::size_t cells() const { return sublinks.size(); }
    Eigen::Index antennas_per_bs() const { return sublinks.empty() ? 0 : sublinks.front().size(); }
    double sublink_norm(std::size_t n) const { return sublinks[n].norm(); }
    std::vector<double> sublink_norms() const;
    double norm2() const { return composed.squaredNorm(); }
};

GlobalChannel compose_global(std::span<const double> alpha_row, const std::vector<CRowVec>& small_scales);

// Maximum Doppler shift f_d = v / lambda.
double doppler_hz(double speed_kmh, double carrier_hz);

// Lag-one correlation of the Jakes spectrum, J0(2 pi f_d dt).
double jakes_lag_correlation(double doppler_hz, double slot_s);

// First-order Gauss-Markov approximation of Jakes fading for one sublink:
// g[t+1] = rho g[t] + sqrt(1 - rho^2) w[t], small-scale h[t] = g[t] R^{1/2}.
// Marginally every slot is CN(0, R). The process owns its random stream.
class FadingProcess
{
  public:
    FadingProcess(SpatialCorrelation corr, double rho, std::uint64_t seed);

    const CRowVec& current() const { return current_; }
    double rho() const { return rho_; }
    std::size_t slot() const { return slot_; }

    void step();
    // Advances `steps` slots and returns the state after each one.
    std::vector<CRowVec> evolve(std::size_t steps);

  private:
    SpatialCorrelation corr_;
    double rho_;
    SeededRandomStream rng_;
    CRowVec white_;
    CRowVec current_;
    std::size_t slot_ = 0;
};

// Debug dump: one row per user, columns re(h_0), im(h_0), re(h_1), ...
// over the composed channel.
void write_channels_csv(std::ostream& os, const std::vector<GlobalChannel>& channels);

} // namespace comp

#endif
