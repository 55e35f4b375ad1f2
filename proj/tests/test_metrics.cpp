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

#include "comp/metrics.hpp"
#include "comp/rng.hpp"
#include "comp/types.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace comp;

TEST_SUITE("metrics")
{
    TEST_CASE("percentile matches sorted-index interpolation")
    {
        SeededRandomStream rng(1);
        std::vector<double> s(1000);
        for (double& x : s)
            x = rng.normal();
        std::vector<double> sorted = s;
        std::sort(sorted.begin(), sorted.end());
        for (double p : {0.0, 0.05, 0.5, 0.731, 1.0}) {
            const double h = 999.0 * p;
            const auto lo = static_cast<std::size_t>(std::floor(h));
            const std::size_t hi = std::min<std::size_t>(lo + 1, 999);
            const double ref = sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
            CHECK(percentile(s, p) == doctest::Approx(ref).epsilon(1e-14));
        }
        CHECK_THROWS_AS(percentile(std::vector<double>{}, 0.5), InvalidInput);
        CHECK_THROWS_AS(percentile(s, 1.5), InvalidInput);
    }

    TEST_CASE("cell statistics degenerate cases")
    {
        const std::vector<double> same(7, 2.5);
        const std::vector<std::size_t> cells{0, 0, 1, 1, 2, 2, 2};
        const ThroughputStats st = throughput_stats(same, cells, 3);
        CHECK(st.cell_edge == doctest::Approx(st.cell_average));
        CHECK(st.per_cell_average == std::vector<double>{2.5, 2.5, 2.5});

        const ThroughputStats one = throughput_stats(std::vector<double>{0.7}, std::vector<std::size_t>{0}, 1);
        CHECK(one.cell_average == 0.7);
        CHECK(one.cell_edge == 0.7);
        CHECK(one.samples == 1);
        CHECK_THROWS_AS(throughput_stats(same, std::vector<std::size_t>{0}, 1), InvalidInput);
        CHECK_THROWS_AS(throughput_stats(std::vector<double>{1.0}, std::vector<std::size_t>{3}, 2), InvalidInput);
    }

    TEST_CASE("per-cell averages")
    {
        const std::vector<double> t{1.0, 3.0, 10.0};
        const std::vector<std::size_t> c{0, 0, 1};
        const ThroughputStats st = throughput_stats(t, c, 3);
        CHECK(st.cell_average == doctest::Approx(14.0 / 3.0));
        CHECK(st.per_cell_average[0] == doctest::Approx(2.0));
        CHECK(st.per_cell_average[1] == doctest::Approx(10.0));
        CHECK(st.per_cell_average[2] == 0.0);
    }

    TEST_CASE("empirical CDF is nondecreasing and ends at one")
    {
        const std::vector<CdfPoint> F = empirical_cdf(std::vector<double>{3.0, 1.0, 2.0, 2.0});
        REQUIRE(F.size() == 3);
        CHECK(F[0].x == 1.0);
        CHECK(F[0].F == 0.25);
        CHECK(F[1].F == 0.75);
        CHECK(F[2].F == 1.0);
    }

    TEST_CASE("two-sample KS statistic")
    {
        CHECK(ks_two_sample(std::vector<double>{0.1, 0.4, 0.4, 0.9}, std::vector<double>{0.2, 0.3, 0.5}) ==
              doctest::Approx(0.4166666666666667));
        const std::vector<double> a{1.0, 2.0, 3.0};
        CHECK(ks_two_sample(a, a) == 0.0);
        CHECK(ks_two_sample(a, std::vector<double>{4.0, 5.0}) == 1.0);
    }

    TEST_CASE("paired t-test against reference values")
    {
        const std::vector<double> a{1.0, 2.5, 3.1, 4.8, 5.2, 6.9}, b{0.7, 2.0, 3.3, 4.1, 4.6, 6.0};
        const PairedTTest t = paired_t_test(a, b);
        CHECK(t.t == doctest::Approx(2.9848100289785475).epsilon(1e-12));
        CHECK(t.p_two_sided == doctest::Approx(0.0306297615122935).epsilon(1e-9));
        CHECK(t.p_greater == doctest::Approx(0.01531488075614675).epsilon(1e-9));
        CHECK(paired_t_test(b, a).p_greater == doctest::Approx(1.0 - 0.01531488075614675).epsilon(1e-9));
        CHECK_THROWS_AS(paired_t_test(a, std::vector<double>{1.0}), InvalidInput);
        CHECK(paired_t_test(a, a).p_two_sided == 1.0);
    }
}
