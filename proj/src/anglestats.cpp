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

#include "comp/anglestats.hpp"

#include "comp/channel.hpp"
#include "comp/quadrature.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <ostream>

namespace comp
{

namespace
{

using Exponents = std::vector<unsigned>;

template <typename Real>
using Poly = std::map<Exponents, Real>;

using PolyD = Poly<double>;

unsigned total_degree(const Exponents& e)
{
    return std::accumulate(e.begin(), e.end(), 0u);
}

template <typename Real>
Poly<Real> poly_mul(const Poly<Real>& a, const Poly<Real>& b, unsigned degree_limit)
{
    Poly<Real> out;
    for (const auto& [ea, ca] : a)
        for (const auto& [eb, cb] : b) {
            Exponents e(ea.size());
            for (std::size_t n = 0; n < e.size(); ++n)
                e[n] = ea[n] + eb[n];
            if (total_degree(e) >= degree_limit)
                continue;
            out[e] += ca * cb;
        }
    return out;
}

PolyD poly_add(PolyD a, const PolyD& b, double scale)
{
    for (const auto& [e, c] : b)
        a[e] += scale * c;
    return a;
}

// Determinant of a small polynomial matrix by cofactor expansion along the
// first row.
PolyD poly_det(const std::vector<std::vector<PolyD>>& m)
{
    const std::size_t n = m.size();
    if (n == 1)
        return m[0][0];
    PolyD det;
    for (std::size_t c = 0; c < n; ++c) {
        if (m[0][c].empty())
            continue;
        std::vector<std::vector<PolyD>> minor(n - 1, std::vector<PolyD>(n - 1));
        for (std::size_t r = 1; r < n; ++r)
            for (std::size_t cc = 0, k = 0; cc < n; ++cc)
                if (cc != c)
                    minor[r - 1][k++] = m[r][cc];
        const PolyD sub = poly_mul(m[0][c], poly_det(minor), ~0u);
        det = poly_add(std::move(det), sub, (c % 2 == 0) ? 1.0 : -1.0);
    }
    return det;
}

// sum_{r=0}^{R} (1/2)_r / r! z^r by Horner, dropping monomials of total
// degree >= degree_limit. The z^r coefficients grow geometrically and
// cancel, hence the extended precision.
template <typename Real>
std::vector<ConditionalQDensity::Term> outer_series(const PolyD& z, std::size_t R, unsigned degree_limit)
{
    Poly<Real> zr;
    for (const auto& [e, c] : z)
        zr[e] = Real(c);
    std::vector<Real> coeff(R + 1);
    coeff[0] = Real(1);
    for (std::size_t r = 1; r <= R; ++r)
        coeff[r] = coeff[r - 1] * (Real(r) - Real(0.5)) / Real(r);

    const Exponents zero(z.empty() ? 0 : z.begin()->first.size(), 0u);
    Poly<Real> acc;
    acc[zero] = coeff[R];
    for (std::size_t r = R; r-- > 0;) {
        acc = poly_mul(zr, acc, degree_limit);
        acc[zero] += coeff[r];
    }
    std::vector<ConditionalQDensity::Term> terms;
    terms.reserve(acc.size());
    for (const auto& [e, c] : acc) {
        const double v = static_cast<double>(c);
        if (v != 0.0)
            terms.push_back({e, v});
    }
    return terms;
}

std::vector<ConditionalQDensity::Term> outer_series_dispatch(const PolyD& z, std::size_t R, unsigned degree_limit)
{
    using boost::multiprecision::cpp_bin_float;
    using boost::multiprecision::number;
    if (R <= 64)
        return outer_series<number<cpp_bin_float<50>>>(z, R, degree_limit);
    if (R <= 160)
        return outer_series<number<cpp_bin_float<100>>>(z, R, degree_limit);
    if (R <= 360)
        return outer_series<number<cpp_bin_float<200>>>(z, R, degree_limit);
    throw InvalidInput("conditional_q_pdf: truncation_r above 360 is not supported");
}

constexpr std::array<unsigned, 4> kHaltonBases{2, 3, 5, 7};

// Van der Corput radical inverse of i in the given base.
double radical_inverse(std::size_t i, unsigned base)
{
    double inv = 1.0 / base, f = inv, r = 0.0;
    while (i > 0) {
        r += f * static_cast<double>(i % base);
        i /= base;
        f *= inv;
    }
    return r;
}

// e^{-x/2} L_k(x) for k = 0..kmax, by the three-term recurrence.
void scaled_laguerre(double x, unsigned kmax, std::vector<double>& out)
{
    out.resize(kmax + 1);
    out[0] = std::exp(-0.5 * x);
    if (kmax == 0)
        return;
    out[1] = (1.0 - x) * out[0];
    for (unsigned k = 1; k < kmax; ++k)
        out[k + 1] = ((2.0 * k + 1.0 - x) * out[k] - k * out[k - 1]) / (k + 1.0);
}

} // namespace

CMat gram_schmidt_basis(const CRowVec& v1, BasisOrder order)
{
    const Eigen::Index n = v1.size();
    if (n == 0)
        throw InvalidInput("gram_schmidt_basis: empty vector");
    const double nv = v1.norm();
    if (std::abs(nv - 1.0) > 1e-9)
        throw InvalidInput("gram_schmidt_basis: v1 must have unit norm");
    CMat V = CMat::Zero(n, n);
    V.row(0) = v1 / nv;
    Eigen::Index filled = 1;
    for (Eigen::Index s = 0; s < n && filled < n; ++s) {
        const Eigen::Index idx = order == BasisOrder::Canonical ? s : n - 1 - s;
        CRowVec e = CRowVec::Zero(n);
        e(idx) = 1.0;
        for (int pass = 0; pass < 2; ++pass)
            for (Eigen::Index k = 0; k < filled; ++k)
                e -= V.row(k).dot(e) * V.row(k);
        const double en = e.norm();
        if (en < 1e-8)
            continue;
        V.row(filled++) = e / en;
    }
    if (filled != n)
        throw NumericalError("gram_schmidt_basis: failed to complete the basis");
    return V;
}

double cos2_angle(const CRowVec& h1, const CRowVec& h2)
{
    const double n1 = h1.squaredNorm();
    const double n2 = h2.squaredNorm();
    if (n1 <= 0.0 || n2 <= 0.0)
        throw InvalidInput("cos2_angle: zero vector");
    const double c = std::norm(h2.dot(h1)) / (n1 * n2);
    return std::clamp(c, 0.0, 1.0);
}

std::vector<double> cos2_mc(const CMat& R1, const CMat& R2, std::size_t samples, SeededRandomStream& rng)
{
    if (R1.rows() != R2.rows() || R1.cols() != R2.cols())
        throw InvalidInput("cos2_mc: covariance dimensions differ");
    const CMat S1 = hermitian_sqrt(R1);
    const CMat S2 = hermitian_sqrt(R2);
    const Eigen::Index n = R1.rows();
    std::vector<double> out;
    out.reserve(samples);
    while (out.size() < samples) {
        const CRowVec h1 = rng.complex_normal(n) * S1;
        const CRowVec h2 = rng.complex_normal(n) * S2;
        if (h1.squaredNorm() <= 0.0 || h2.squaredNorm() <= 0.0)
            continue;
        out.push_back(cos2_angle(h1, h2));
    }
    return out;
}

ConditionalQDensity::ConditionalQDensity(RVec diag, std::vector<Term> terms, std::vector<std::vector<double>> taylor,
                                         std::size_t truncation_r)
    : diag_(std::move(diag)), terms_(std::move(terms)), taylor_(std::move(taylor)), truncation_r_(truncation_r)
{
    for (Eigen::Index n = 0; n < diag_.size(); ++n)
        if (!(diag_(n) > 0.0))
            throw InvalidInput("ConditionalQDensity: diagonal entries must be positive");
    for (const Term& t : terms_) {
        if (t.degree.size() != static_cast<std::size_t>(diag_.size()))
            throw InvalidInput("ConditionalQDensity: term dimension mismatch");
        for (unsigned d : t.degree)
            max_degree_ = std::max(max_degree_, d);
    }
}

double ConditionalQDensity::operator()(std::span<const double> q) const
{
    const auto n = static_cast<std::size_t>(diag_.size());
    if (q.size() != n)
        throw InvalidInput("ConditionalQDensity: q has the wrong dimension");
    // Each factor is e^{-u} L_k(u) = e^{-u/2} (e^{-u/2} L_k(u)).
    double norm = 1.0;
    double u_sum = 0.0;
    std::vector<std::vector<double>> lag(n);
    for (std::size_t k = 0; k < n; ++k) {
        if (q[k] < 0.0)
            return 0.0;
        const double u = q[k] / diag_(static_cast<Eigen::Index>(k));
        scaled_laguerre(u, max_degree_, lag[k]);
        norm *= diag_(static_cast<Eigen::Index>(k));
        u_sum += u;
    }
    double s = 0.0;
    for (const Term& t : terms_) {
        double v = t.coeff;
        for (std::size_t k = 0; k < n; ++k)
            v *= lag[k][t.degree[k]];
        s += v;
    }
    return std::exp(-0.5 * u_sum) * s / norm;
}

double ConditionalQDensity::operator()(double q1, double q2) const
{
    const double q[2] = {q1, q2};
    return (*this)(std::span<const double>(q, 2));
}

double ConditionalQDensity::cos2_density(double x) const
{
    if (diag_.size() != 2)
        throw InvalidInput("cos2_density: only two-dimensional channels are supported");
    if (x < 0.0 || x > 1.0)
        return 0.0;
    // With u_n = q_n / a_nn, v = u1 + u2: u1 = alpha v, u2 = beta v, and
    // f(x) = rho / D^2 int v e^{-v/2} S(alpha v, beta v) dv, v = s^2.
    const double rho = diag_(1) / diag_(0);
    const double D = 1.0 - x + x * rho;
    const double alpha = x * rho / D;
    const double beta = (1.0 - x) / D;

    const auto panels = static_cast<std::size_t>(4.0 + std::ceil(1.45 * std::sqrt(static_cast<double>(max_degree_))));
    const QuadratureRule rule = composite_gauss_legendre(0.0, 9.0, panels, 16);
    std::vector<double> l1, l2;
    double integral = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        const double s = rule.nodes[k];
        const double v = s * s;
        scaled_laguerre(alpha * v, max_degree_, l1);
        scaled_laguerre(beta * v, max_degree_, l2);
        double S = 0.0;
        for (const Term& t : terms_)
            S += t.coeff * l1[t.degree[0]] * l2[t.degree[1]];
        integral += rule.weights[k] * 2.0 * s * v * std::exp(-0.5 * v) * S;
    }
    return rho / (D * D) * integral;
}

ConditionalQDensity conditional_q_pdf(const CRowVec& v1, const CMat& R2, const SeriesParams& params,
                                      BasisOrder order)
{
    if (v1.size() != 2 || R2.rows() != 2 || R2.cols() != 2)
        throw InvalidInput("conditional_q_pdf: the series is implemented for dimension 2 only");
    const CMat V = gram_schmidt_basis(v1, order);
    const CMat Sigma = V * R2 * V.adjoint();
    const std::size_t n = 2;
    RVec diag(2);
    for (Eigen::Index k = 0; k < 2; ++k) {
        diag(k) = Sigma(k, k).real();
        if (!(diag(k) > 1e-300))
            throw InvalidInput("conditional_q_pdf: a_nn must be positive");
    }

    // C(beta) has unit diagonal and off-diagonal entries beta_i * s_ij, with
    // s the normalised V R2 V^H; g(beta) is the determinant of its real
    // representation [[Re C, Im C], [-Im C, Re C]].
    std::vector<std::vector<PolyD>> M(2 * n, std::vector<PolyD>(2 * n));
    const Exponents zero(n, 0u);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            PolyD re, im;
            if (i == j) {
                re[zero] = 1.0;
            } else {
                const auto ii = static_cast<Eigen::Index>(i);
                const auto jj = static_cast<Eigen::Index>(j);
                const cplx s = Sigma(ii, jj) / std::sqrt(diag(ii) * diag(jj));
                Exponents e(n, 0u);
                e[i] = 1;
                if (s.real() != 0.0)
                    re[e] = s.real();
                if (s.imag() != 0.0)
                    im[e] = s.imag();
            }
            M[i][j] = re;
            M[i][n + j] = im;
            M[n + i][j] = poly_add({}, im, -1.0);
            M[n + i][n + j] = re;
        }

    const PolyD g = poly_det(M);

    std::vector<std::vector<double>> taylor(3, std::vector<double>(3, 0.0));
    for (const auto& [e, c] : g)
        if (e[0] <= 2 && e[1] <= 2)
            taylor[e[0]][e[1]] = c;

    PolyD z;
    for (const auto& [e, c] : g) {
        const double v = total_degree(e) == 0 ? 1.0 - c : -c;
        if (v != 0.0)
            z[e] = v;
    }
    const std::size_t R = params.truncation_r;
    const auto degree_limit = static_cast<unsigned>(2 * (R + 1));
    std::vector<ConditionalQDensity::Term> terms;
    if (z.empty())
        terms.push_back({zero, 1.0});
    else
        terms = outer_series_dispatch(z, R, degree_limit);
    return ConditionalQDensity(std::move(diag), std::move(terms), std::move(taylor), R);
}

double PdfTable::integral() const
{
    double s = 0.0;
    for (double d : density)
        s += d * bin_width;
    return s;
}

double PdfTable::mass_below(double x0) const
{
    double s = 0.0;
    for (std::size_t b = 0; b < x.size(); ++b)
        if (x[b] + 0.5 * bin_width <= x0 + 1e-12)
            s += density[b] * bin_width;
    return s;
}

double PdfTable::mass_above(double x0) const
{
    double s = 0.0;
    for (std::size_t b = 0; b < x.size(); ++b)
        if (x[b] - 0.5 * bin_width >= x0 - 1e-12)
            s += density[b] * bin_width;
    return s;
}

namespace
{

PdfTable empty_table(std::size_t bins)
{
    if (bins == 0)
        throw InvalidInput("pdf table needs at least one bin");
    PdfTable t;
    t.bin_width = 1.0 / static_cast<double>(bins);
    t.x.resize(bins);
    t.density.assign(bins, 0.0);
    for (std::size_t b = 0; b < bins; ++b)
        t.x[b] = (static_cast<double>(b) + 0.5) * t.bin_width;
    return t;
}

} // namespace

PdfTable histogram_pdf(std::span<const double> samples, std::size_t bins)
{
    PdfTable t = empty_table(bins);
    if (samples.empty())
        throw InvalidInput("histogram_pdf: no samples");
    for (double s : samples) {
        auto b = static_cast<std::size_t>(s * static_cast<double>(bins));
        b = std::min(b, bins - 1);
        t.density[b] += 1.0;
    }
    const double scale = 1.0 / (static_cast<double>(samples.size()) * t.bin_width);
    for (double& d : t.density)
        d *= scale;
    return t;
}

double l1_distance(const PdfTable& a, const PdfTable& b)
{
    if (a.size() != b.size())
        throw InvalidInput("l1_distance: tables have different binning");
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k)
        s += std::abs(a.density[k] - b.density[k]) * a.bin_width;
    return s;
}

PdfTable cos2_pdf_semianalytic(const CMat& R1, const CMat& R2, const SeriesParams& params, std::size_t v1_samples,
                               SeededRandomStream& rng, std::size_t bins, BasisOrder order)
{
    if (R1.rows() != 2 || R2.rows() != 2)
        throw InvalidInput("cos2_pdf_semianalytic: dimension 2 only");
    if (v1_samples == 0)
        throw InvalidInput("cos2_pdf_semianalytic: need at least one v1 sample");
    const CMat S1 = hermitian_sqrt(R1);
    PdfTable table = empty_table(bins);

    // Randomly shifted Halton points in bases 2, 3, 5, 7 map to the two
    // energies |g_n|^2 ~ Exp(1) and the two phases of g.
    std::array<double, 4> shift{};
    for (double& u : shift)
        u = rng.uniform();

    const QuadratureRule per_bin = gauss_legendre(2);
    std::size_t used = 0;
    for (std::size_t s = 0; s < v1_samples; ++s) {
        std::array<double, 4> u{};
        for (std::size_t k = 0; k < 4; ++k) {
            u[k] = radical_inverse(s + 1, kHaltonBases[k]) + shift[k];
            u[k] -= std::floor(u[k]);
        }
        CRowVec g(2);
        for (Eigen::Index k = 0; k < 2; ++k) {
            const double energy = -std::log1p(-std::min(u[static_cast<std::size_t>(k)], 1.0 - 1e-16));
            g(k) = std::polar(std::sqrt(energy), 2.0 * std::numbers::pi * u[static_cast<std::size_t>(k) + 2]);
        }
        const CRowVec h1 = g * S1;
        const double nh = h1.norm();
        if (nh <= 0.0)
            continue;
        const ConditionalQDensity dens = conditional_q_pdf(h1 / nh, R2, params, order);
        for (std::size_t b = 0; b < bins; ++b) {
            double acc = 0.0;
            for (std::size_t k = 0; k < per_bin.nodes.size(); ++k) {
                const double x = table.x[b] + 0.5 * table.bin_width * per_bin.nodes[k];
                acc += 0.5 * per_bin.weights[k] * dens.cos2_density(x);
            }
            table.density[b] += acc;
        }
        ++used;
    }
    if (used == 0)
        throw NumericalError("cos2_pdf_semianalytic: every v1 draw was degenerate");
    for (double& d : table.density)
        d = std::max(d / static_cast<double>(used), 0.0);
    const double mass = table.integral();
    if (!(mass > 0.0))
        throw NumericalError("cos2_pdf_semianalytic: table has zero mass");
    for (double& d : table.density)
        d /= mass;
    return table;
}

TruncationSearch converge_truncation(const CMat& R1, const CMat& R2, std::size_t v1_samples, std::uint64_t seed,
                                     std::size_t bins, double tol, std::size_t r_start, std::size_t r_max)
{
    if (r_start == 0)
        r_start = 1;
    TruncationSearch out;
    PdfTable prev;
    bool have_prev = false;
    for (std::size_t r = r_start; r <= r_max; r *= 2) {
        SeededRandomStream rng(seed);
        const SeriesParams params{r};
        PdfTable table = cos2_pdf_semianalytic(R1, R2, params, v1_samples, rng, bins);
        const double change = have_prev ? l1_distance(prev, table) : std::numeric_limits<double>::infinity();
        out.history.emplace_back(r, change);
        out.params = params;
        out.table = table;
        if (have_prev && change < tol) {
            out.converged = true;
            break;
        }
        prev = std::move(table);
        have_prev = true;
    }
    return out;
}

double beta_1_nm1_cdf(double x, std::size_t n)
{
    if (n < 2)
        throw InvalidInput("beta_1_nm1_cdf: dimension must be at least 2");
    if (x <= 0.0)
        return 0.0;
    if (x >= 1.0)
        return 1.0;
    return 1.0 - std::pow(1.0 - x, static_cast<double>(n - 1));
}

void write_pdf_csv(std::ostream& os, const PdfTable& table)
{
    os << "x,density\n";
    os.precision(10);
    for (std::size_t b = 0; b < table.size(); ++b)
        os << table.x[b] << ',' << table.density[b] << '\n';
}

} // namespace comp
