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

#include <doctest.h>

#include <boost/math/special_functions/bessel.hpp>

#include <cmath>
#include <sstream>

using namespace comp;

namespace
{

// Bivariate exponential law of (|y1|^2, |y2|^2) for y ~ CN(0, Sigma).
double bivariate_exponential(double q1, double q2, double a11, double a22, double kappa)
{
    const double u1 = q1 / a11, u2 = q2 / a22;
    const double c = 1.0 - kappa;
    return std::exp(-(u1 + u2) / c) * boost::math::cyl_bessel_i(0, 2.0 * std::sqrt(kappa * u1 * u2) / c) /
           (a11 * a22 * c);
}

// Density of q1 / (q1 + q2) under the law above, by quadrature along rays.
double ratio_density(double x, double a11, double a22, double kappa)
{
    const QuadratureRule r = composite_gauss_legendre(0.0, 60.0 * std::max(a11, a22), 200, 16);
    double s = 0.0;
    for (std::size_t k = 0; k < r.nodes.size(); ++k) {
        const double t = r.nodes[k];
        s += r.weights[k] * t * bivariate_exponential(x * t, (1.0 - x) * t, a11, a22, kappa);
    }
    return s;
}

CMat random_covariance(SeededRandomStream& rng, Eigen::Index n)
{
    CMat A(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        A.row(i) = rng.complex_normal(n);
    return A.adjoint() * A;
}

} // namespace

TEST_SUITE("anglestats")
{
    TEST_CASE("Gram-Schmidt completion is orthonormal and deterministic")
    {
        SeededRandomStream rng(1);
        for (Eigen::Index n : {2, 3, 4, 8}) {
            CRowVec v = rng.complex_normal(n);
            v /= v.norm();
            const CMat V = gram_schmidt_basis(v);
            CHECK((V * V.adjoint() - CMat::Identity(n, n)).norm() < 1e-12);
            CHECK((V.row(0) - v).norm() < 1e-15);
            CHECK((gram_schmidt_basis(v) - V).norm() == 0.0);
            const CMat W = gram_schmidt_basis(v, BasisOrder::Reversed);
            CHECK((W * W.adjoint() - CMat::Identity(n, n)).norm() < 1e-12);
        }
        CRowVec e1 = CRowVec::Zero(3);
        e1(0) = 1.0;
        CHECK((gram_schmidt_basis(e1) - CMat::Identity(3, 3)).norm() < 1e-15);
        CHECK_THROWS_AS(gram_schmidt_basis(2.0 * e1), InvalidInput);
    }

    TEST_CASE("cos2 is bounded and collinear draws give one")
    {
        CRowVec u(2);
        u << cplx(1, 1), cplx(0, 2);
        const CMat R = u.adjoint() * u;
        SeededRandomStream rng(2);
        for (double c : cos2_mc(R, R, 1000, rng))
            CHECK(c == doctest::Approx(1.0).epsilon(1e-9));
        const std::vector<double> s = cos2_mc(random_covariance(rng, 3), random_covariance(rng, 3), 5000, rng);
        for (double c : s) {
            CHECK(c >= 0.0);
            CHECK(c <= 1.0);
        }
    }

    TEST_CASE("basis choice does not change the angle law")
    {
        // q1 / (q1 + q2) under two different completions of the same v1.
        SeededRandomStream rng(3);
        const CMat R2 = random_covariance(rng, 3);
        const CMat S2 = hermitian_sqrt(R2);
        CRowVec v = rng.complex_normal(3);
        v /= v.norm();
        const CMat A = gram_schmidt_basis(v), B = gram_schmidt_basis(v, BasisOrder::Reversed);
        std::vector<double> ca, cb;
        for (int k = 0; k < 20000; ++k) {
            const CRowVec h = rng.complex_normal(3) * S2;
            const CRowVec ya = h * A.adjoint(), yb = h * B.adjoint();
            ca.push_back(std::norm(ya(0)) / ya.squaredNorm());
            cb.push_back(std::norm(yb(0)) / yb.squaredNorm());
        }
        for (std::size_t k = 0; k < ca.size(); ++k)
            CHECK(ca[k] == doctest::Approx(cb[k]).epsilon(1e-9));
    }

    TEST_CASE("diagonal covariance collapses the series to independent exponentials")
    {
        CRowVec v1(2);
        v1 << 1.0, 0.0;
        CMat R2 = CMat::Zero(2, 2);
        R2(0, 0) = 2.0;
        R2(1, 1) = 0.5;
        const ConditionalQDensity d = conditional_q_pdf(v1, R2, SeriesParams{16});
        CHECK(d.terms().size() == 1);
        for (double q1 : {0.1, 1.0, 4.0})
            for (double q2 : {0.05, 0.7})
                CHECK(d(q1, q2) == doctest::Approx(std::exp(-q1 / 2.0) / 2.0 * std::exp(-q2 / 0.5) / 0.5));
    }

    TEST_CASE("series matches the bivariate exponential pointwise")
    {
        CMat R2(2, 2);
        R2 << 2.0, cplx(0.6, 0.5), cplx(0.6, -0.5), 1.0;
        CRowVec v1(2);
        v1 << 1.0, 0.0;
        const double kappa = std::norm(R2(0, 1)) / 2.0;
        const ConditionalQDensity d = conditional_q_pdf(v1, R2, SeriesParams{32});
        for (double q1 : {0.3, 1.0, 3.0})
            for (double q2 : {0.2, 1.0, 2.5})
                CHECK(d(q1, q2) == doctest::Approx(bivariate_exponential(q1, q2, 2.0, 1.0, kappa)).epsilon(1e-4));
    }

    TEST_CASE("determinant expansion has the expected Taylor coefficients")
    {
        CMat R2(2, 2);
        R2 << 1.0, cplx(0.3, 0.4), cplx(0.3, -0.4), 1.0;
        CRowVec v1(2);
        v1 << 1.0, 0.0;
        const ConditionalQDensity d = conditional_q_pdf(v1, R2, SeriesParams{8});
        const double kappa = 0.25;
        // g(beta) = (1 - kappa beta1 beta2)^2.
        CHECK(d.taylor()[0][0] == doctest::Approx(1.0));
        CHECK(d.taylor()[1][1] == doctest::Approx(-2.0 * kappa));
        CHECK(d.taylor()[2][2] == doctest::Approx(kappa * kappa));
        CHECK(std::abs(d.taylor()[1][0]) < 1e-15);
        CHECK(std::abs(d.taylor()[2][0]) < 1e-15);
        for (const auto& t : d.terms()) {
            CHECK(t.degree[0] == t.degree[1]);
            CHECK(t.coeff == doctest::Approx(std::pow(kappa, t.degree[0])).epsilon(1e-12));
        }
    }

    TEST_CASE("joint density integrates to one")
    {
        SeededRandomStream rng(4);
        const CMat R2 = random_covariance(rng, 2);
        CRowVec v = rng.complex_normal(2);
        v /= v.norm();
        const ConditionalQDensity d = conditional_q_pdf(v, R2, SeriesParams{48});
        const double a11 = d.diag()(0), a22 = d.diag()(1);
        const QuadratureRule r1 = composite_gauss_legendre(0.0, 30.0 * a11, 40, 16);
        const QuadratureRule r2 = composite_gauss_legendre(0.0, 30.0 * a22, 40, 16);
        double s = 0.0;
        for (std::size_t i = 0; i < r1.nodes.size(); ++i)
            for (std::size_t j = 0; j < r2.nodes.size(); ++j)
                s += r1.weights[i] * r2.weights[j] * d(r1.nodes[i], r2.nodes[j]);
        CHECK(s == doctest::Approx(1.0).epsilon(1e-3));
    }

    TEST_CASE("series agrees with a Monte-Carlo estimate of the q density")
    {
        CMat R2(2, 2);
        R2 << 1.5, cplx(0.4, -0.3), cplx(0.4, 0.3), 0.8;
        CRowVec v(2);
        v << cplx(0.6, 0.0), cplx(0.0, 0.8);
        const ConditionalQDensity d = conditional_q_pdf(v, R2, SeriesParams{48});
        const CMat V = gram_schmidt_basis(v);
        const CMat S2 = hermitian_sqrt(R2);
        SeededRandomStream rng(5);
        const double h = 0.25;
        const int nb = 8;
        std::vector<double> counts(nb * nb, 0.0);
        const int n = 1000000;
        for (int k = 0; k < n; ++k) {
            const CRowVec y = (rng.complex_normal(2) * S2) * V.adjoint();
            const int i = static_cast<int>(std::norm(y(0)) / h), j = static_cast<int>(std::norm(y(1)) / h);
            if (i < nb && j < nb)
                counts[i * nb + j] += 1.0;
        }
        const QuadratureRule g = gauss_legendre(4);
        double peak = 0.0, worst = 0.0;
        for (int i = 0; i < nb; ++i)
            for (int j = 0; j < nb; ++j) {
                double avg = 0.0;
                for (std::size_t a = 0; a < 4; ++a)
                    for (std::size_t b = 0; b < 4; ++b)
                        avg += 0.25 * g.weights[a] * g.weights[b] *
                               d(h * (i + 0.5 + 0.5 * g.nodes[a]), h * (j + 0.5 + 0.5 * g.nodes[b]));
                peak = std::max(peak, avg);
                worst = std::max(worst, std::abs(avg - counts[i * nb + j] / (n * h * h)));
            }
        CHECK(worst < 0.02 * peak);
    }

    TEST_CASE("cos2 density along rays matches the ratio oracle")
    {
        CMat R2(2, 2);
        R2 << 3.0, cplx(0.9, 0.6), cplx(0.9, -0.6), 0.7;
        CRowVec v1(2);
        v1 << 1.0, 0.0;
        const double kappa = std::norm(R2(0, 1)) / (3.0 * 0.7);
        const ConditionalQDensity d = conditional_q_pdf(v1, R2, SeriesParams{96});
        for (double x : {0.05, 0.3, 0.5, 0.8, 0.97})
            CHECK(d.cos2_density(x) == doctest::Approx(ratio_density(x, 3.0, 0.7, kappa)).epsilon(2e-3));
        CHECK(d.cos2_density(-0.1) == 0.0);
        CHECK(d.cos2_density(1.1) == 0.0);
    }

    TEST_CASE("dimension and domain checks")
    {
        CRowVec v(3);
        v << 1.0, 0.0, 0.0;
        CHECK_THROWS_AS(conditional_q_pdf(v, CMat::Identity(3, 3), SeriesParams{}), InvalidInput);
        CRowVec w(2);
        w << 1.0, 0.0;
        CMat R = CMat::Zero(2, 2);
        R(0, 0) = 1.0;
        CHECK_THROWS_AS(conditional_q_pdf(w, R, SeriesParams{}), InvalidInput);
    }

    TEST_CASE("scaled identity gives the Beta(1, N-1) law")
    {
        SeededRandomStream rng(6);
        for (Eigen::Index n : {2, 4}) {
            const CMat R = 3.0 * CMat::Identity(n, n);
            const std::vector<double> s = cos2_mc(R, R, 200000, rng);
            CHECK(ks_distance(s, [n](double x) { return beta_1_nm1_cdf(x, static_cast<std::size_t>(n)); }) < 0.01);
        }
        CHECK(beta_1_nm1_cdf(0.5, 2) == doctest::Approx(0.5));
        CHECK(beta_1_nm1_cdf(0.5, 4) == doctest::Approx(0.875));
        CHECK_THROWS_AS(beta_1_nm1_cdf(0.5, 1), InvalidInput);
    }

    TEST_CASE("semi-analytic pdf recovers the uniform law for scaled identity")
    {
        SeededRandomStream rng(7);
        const CMat R = 2.0 * CMat::Identity(2, 2);
        const PdfTable t = cos2_pdf_semianalytic(R, R, SeriesParams{8}, 32, rng, 50);
        PdfTable u = t;
        std::fill(u.density.begin(), u.density.end(), 1.0);
        CHECK(l1_distance(t, u) < 0.02);
        CHECK(t.integral() == doctest::Approx(1.0).epsilon(1e-3));
    }

    TEST_CASE("semi-analytic and Monte-Carlo tables agree for an anisotropic pair")
    {
        CMat R1 = CMat::Zero(2, 2), R2 = CMat::Zero(2, 2);
        R1(0, 0) = 3.0;
        R1(1, 1) = 0.4;
        R2(0, 0) = 0.2;
        R2(1, 1) = 2.0;
        const TruncationSearch s = converge_truncation(R1, R2, 128, 8, 20, 1e-4, 4, 128);
        CHECK(s.converged);
        for (std::size_t k = 1; k < s.history.size(); ++k)
            CHECK(s.history[k].first == 2 * s.history[k - 1].first);
        SeededRandomStream rng(9);
        const PdfTable mc = histogram_pdf(cos2_mc(R1, R2, 400000, rng), 20);
        CHECK(l1_distance(mc, s.table) < 0.02);
        for (double d : s.table.density)
            CHECK(d >= 0.0);
    }

    TEST_CASE("histogram and table helpers")
    {
        const std::vector<double> s{0.05, 0.15, 0.15, 0.95, 1.0};
        const PdfTable t = histogram_pdf(s, 10);
        CHECK(t.integral() == doctest::Approx(1.0));
        CHECK(t.density[1] == doctest::Approx(4.0));
        CHECK(t.density[9] == doctest::Approx(4.0));
        CHECK(t.mass_below(0.1) == doctest::Approx(0.2));
        CHECK(t.mass_above(0.9) == doctest::Approx(0.4));
        CHECK(l1_distance(t, t) == 0.0);
        CHECK_THROWS_AS(l1_distance(t, histogram_pdf(s, 5)), InvalidInput);
        std::ostringstream os;
        write_pdf_csv(os, t);
        CHECK(os.str().rfind("x,density\n0.05,", 0) == 0);
    }

    TEST_CASE("KS distance against a known CDF")
    {
        std::vector<double> s;
        for (int k = 0; k < 1000; ++k)
            s.push_back((k + 0.5) / 1000.0);
        CHECK(ks_distance(s, [](double x) { return x; }) == doctest::Approx(0.0005));
        CHECK(ks_distance(s, [](double x) { return x * x; }) == doctest::Approx(0.25).epsilon(0.01));
    }
}
