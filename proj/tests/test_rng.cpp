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

#include "comp/quadrature.hpp"
#include "comp/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace comp;

TEST_SUITE("rng")
{
    TEST_CASE("derived seeds are deterministic and tag sensitive")
    {
        CHECK(derive_seed(7, {1, 2, 3}) == derive_seed(7, {1, 2, 3}));
        CHECK(derive_seed(7, {1, 2, 3}) != derive_seed(7, {1, 3, 2}));
        CHECK(derive_seed(7, {1, 2}) != derive_seed(8, {1, 2}));
        CHECK(derive_seed(7, {1}) != derive_seed(7, {1, 0}));

        std::set<std::uint64_t> seen;
        for (std::uint64_t d = 0; d < 200; ++d)
            for (std::uint64_t tag = 1; tag <= 8; ++tag)
                seen.insert(derive_seed(42, {stream::drop, d, tag}));
        CHECK(seen.size() == 1600);
    }

    TEST_CASE("same seed replays the same stream")
    {
        SeededRandomStream a(99), b(99);
        for (int k = 0; k < 100; ++k) {
            CHECK(a.uniform() == b.uniform());
            CHECK(a.complex_normal() == b.complex_normal());
        }
    }

    TEST_CASE("complex normal has unit variance split evenly")
    {
        SeededRandomStream rng(3);
        const int n = 200000;
        double re2 = 0, im2 = 0, reim = 0;
        cplx mean = 0;
        for (int k = 0; k < n; ++k) {
            const cplx z = rng.complex_normal();
            mean += z;
            re2 += z.real() * z.real();
            im2 += z.imag() * z.imag();
            reim += z.real() * z.imag();
        }
        CHECK(std::abs(mean / double(n)) < 0.01);
        CHECK(re2 / n == doctest::Approx(0.5).epsilon(0.01));
        CHECK(im2 / n == doctest::Approx(0.5).epsilon(0.01));
        CHECK(std::abs(reim / n) < 0.005);
    }

    TEST_CASE("uniform_index covers its range and rejects empty ranges")
    {
        SeededRandomStream rng(1);
        std::set<std::size_t> seen;
        for (int k = 0; k < 1000; ++k)
            seen.insert(rng.uniform_index(5));
        CHECK(seen == std::set<std::size_t>{0, 1, 2, 3, 4});
        CHECK_THROWS_AS(rng.uniform_index(0), InvalidInput);
    }

    TEST_CASE("Gauss-Legendre rules integrate polynomials exactly")
    {
        for (std::size_t n : {1u, 2u, 5u, 16u}) {
            const QuadratureRule r = gauss_legendre(n);
            REQUIRE(r.nodes.size() == n);
            for (std::size_t deg = 0; deg < 2 * n; ++deg) {
                double s = 0.0;
                for (std::size_t k = 0; k < n; ++k)
                    s += r.weights[k] * std::pow(r.nodes[k], double(deg));
                const double exact = deg % 2 ? 0.0 : 2.0 / double(deg + 1);
                CHECK(s == doctest::Approx(exact).epsilon(1e-12));
            }
        }
    }

    TEST_CASE("composite rule integrates a smooth function")
    {
        const QuadratureRule r = composite_gauss_legendre(0.0, 9.0, 8, 16);
        double s = 0.0;
        for (std::size_t k = 0; k < r.nodes.size(); ++k)
            s += r.weights[k] * std::exp(-r.nodes[k]);
        CHECK(s == doctest::Approx(1.0 - std::exp(-9.0)).epsilon(1e-13));
    }
}
