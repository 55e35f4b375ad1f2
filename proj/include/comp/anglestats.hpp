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

#ifndef COMP_ANGLESTATS_HPP
#define COMP_ANGLESTATS_HPP

#include "comp/rng.hpp"
#include "comp/types.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace comp
{

// How the orthonormal completion of v1 is seeded: canonical vectors in
// ascending or descending index order.
enum class BasisOrder
{
    Canonical,
    Reversed
};

// Rows of the returned N x N matrix form an orthonormal basis whose first
// row is v1. Canonical seed vectors that are (nearly, tolerance 1e-8)
// parallel to the running span are skipped.
CMat gram_schmidt_basis(const CRowVec& v1, BasisOrder order = BasisOrder::Canonical);

// Squared cosine of the angle between h1 ~ CN(0, R1) and h2 ~ CN(0, R2).
double cos2_angle(const CRowVec& h1, const CRowVec& h2);

// Monte-Carlo draws of cos^2 theta. Covariances may be singular.
std::vector<double> cos2_mc(const CMat& R1, const CMat& R2, std::size_t samples, SeededRandomStream& rng);

struct SeriesParams
{
    std::size_t truncation_r = 32; // outer series index bound
};

// Laguerre-series joint density of q = (|h2 v_1^H|^2, |h2 v_2^H|^2) given
// v1, for two-dimensional channels. The series coefficients come from the
// Taylor expansion of the determinant of the real representation of the
// normalised V R2 V^H, raised through the (1/2)_r / r! outer series.
// Monomials beta^m map to products of Laguerre polynomials L_m(q_n / a_nn).
class ConditionalQDensity
{
  public:
    struct Term
    {
        std::vector<unsigned> degree; // Laguerre degree per coordinate
        double coeff = 0.0;
    };

    ConditionalQDensity(RVec diag, std::vector<Term> terms, std::vector<std::vector<double>> taylor,
                        std::size_t truncation_r);

    // Joint pdf at q (length N).
    double operator()(std::span<const double> q) const;
    double operator()(double q1, double q2) const;

    // pdf of cos^2 theta = q1 / (q1 + q2) at x in [0, 1], integrating the
    // joint density along the ray q = t (x, 1 - x).
    double cos2_density(double x) const;

    const RVec& diag() const { return diag_; }
    const std::vector<Term>& terms() const { return terms_; }
    // taylor()[n1][n2] = C_{n1 n2} of the normalised determinant, n_i in {0,1,2}.
    const std::vector<std::vector<double>>& taylor() const { return taylor_; }
    std::size_t truncation_r() const { return truncation_r_; }
    unsigned max_degree() const { return max_degree_; }

  private:
    RVec diag_;
    std::vector<Term> terms_;
    std::vector<std::vector<double>> taylor_;
    std::size_t truncation_r_;
    unsigned max_degree_ = 0;
};

ConditionalQDensity conditional_q_pdf(const CRowVec& v1, const CMat& R2, const SeriesParams& params,
                                      BasisOrder order = BasisOrder::Canonical);

// Density table over [0, 1]: x holds bin centres, density the bin-averaged pdf.
struct PdfTable
{
    std::vector<double> x;
    std::vector<double> density;
    double bin_width = 0.0;

    std::size_t size() const { return x.size(); }
    double integral() const;
    double mass_below(double x0) const; // bins entirely below x0
    double mass_above(double x0) const; // bins entirely above x0
};

PdfTable histogram_pdf(std::span<const double> samples, std::size_t bins);

double l1_distance(const PdfTable& a, const PdfTable& b);

// Semi-analytic pdf of cos^2 theta for N = 2: the conditional density is
// marginalised over v1 by averaging over draws of h1 ~ CN(0, R1). Draws come
// from a randomly shifted Halton sequence, so each is marginally CN(0, R1).
PdfTable cos2_pdf_semianalytic(const CMat& R1, const CMat& R2, const SeriesParams& params,
                               std::size_t v1_samples, SeededRandomStream& rng, std::size_t bins = 50,
                               BasisOrder order = BasisOrder::Canonical);

struct TruncationSearch
{
    SeriesParams params;
    PdfTable table;
    std::vector<std::pair<std::size_t, double>> history; // (r, L1 change vs previous r)
    bool converged = false;
};

// Doubles truncation_r from r_start until successive tables differ by less
// than `tol` in L1. Each level reuses the same v1 draws.
TruncationSearch converge_truncation(const CMat& R1, const CMat& R2, std::size_t v1_samples, std::uint64_t seed,
                                     std::size_t bins = 50, double tol = 1e-4, std::size_t r_start = 4,
                                     std::size_t r_max = 256);

// Kolmogorov-Smirnov distance between the empirical CDF of `samples` and a
// reference CDF.
template <typename Cdf>
double ks_distance(std::vector<double> samples, Cdf&& cdf)
{
    if (samples.empty())
        throw InvalidInput("ks_distance: no samples");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max(d, std::max(std::abs((static_cast<double>(i) + 1.0) / n - f),
                                 std::abs(f - static_cast<double>(i) / n)));
    }
    return d;
}

// Beta(1, n - 1) CDF, the scaled-identity law of cos^2 theta in dimension n.
double beta_1_nm1_cdf(double x, std::size_t n);

void write_pdf_csv(std::ostream& os, const PdfTable& table);

} // namespace comp

#endif
