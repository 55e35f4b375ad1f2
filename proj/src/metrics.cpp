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

#include "comp/types.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace comp
{

double percentile(std::span<const double> samples, double p)
{
    if (samples.empty())
        throw InvalidInput("percentile: no samples");
    if (!(p >= 0.0 && p <= 1.0))
        throw InvalidInput("percentile: p must lie in [0, 1]");
    std::vector<double> s(samples.begin(), samples.end());
    std::sort(s.begin(), s.end());
    const double h = static_cast<double>(s.size() - 1) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, s.size() - 1);
    return s[lo] + (h - static_cast<double>(lo)) * (s[hi] - s[lo]);
}

ThroughputStats throughput_stats(std::span<const double> throughput, std::span<const std::size_t> cell,
                                 std::size_t cells)
{
    if (throughput.size() != cell.size())
        throw InvalidInput("throughput_stats: one cell label per sample required");
    if (throughput.empty())
        throw InvalidInput("throughput_stats: no samples");
    ThroughputStats st;
    st.samples = throughput.size();
    st.cell_average = std::accumulate(throughput.begin(), throughput.end(), 0.0) / static_cast<double>(st.samples);
    st.cell_edge = percentile(throughput, 0.05);
    std::vector<std::vector<double>> by_cell(cells);
    for (std::size_t k = 0; k < throughput.size(); ++k) {
        if (cell[k] >= cells)
            throw InvalidInput("throughput_stats: cell label out of range");
        by_cell[cell[k]].push_back(throughput[k]);
    }
    for (const auto& v : by_cell) {
        if (v.empty()) {
            st.per_cell_average.push_back(0.0);
            st.per_cell_edge.push_back(0.0);
            continue;
        }
        st.per_cell_average.push_back(std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()));
        st.per_cell_edge.push_back(percentile(v, 0.05));
    }
    return st;
}

std::vector<CdfPoint> empirical_cdf(std::span<const double> samples)
{
    std::vector<double> s(samples.begin(), samples.end());
    std::sort(s.begin(), s.end());
    std::vector<CdfPoint> out;
    out.reserve(s.size());
    const double n = static_cast<double>(s.size());
    for (std::size_t k = 0; k < s.size(); ++k) {
        if (k + 1 < s.size() && s[k + 1] == s[k])
            continue;
        out.push_back({s[k], static_cast<double>(k + 1) / n});
    }
    return out;
}

double ks_two_sample(std::span<const double> a_in, std::span<const double> b_in)
{
    if (a_in.empty() || b_in.empty())
        throw InvalidInput("ks_two_sample: empty sample");
    std::vector<double> a(a_in.begin(), a_in.end());
    std::vector<double> b(b_in.begin(), b_in.end());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == x)
            ++i;
        while (j < b.size() && b[j] == x)
            ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

PairedTTest paired_t_test(std::span<const double> a, std::span<const double> b)
{
    if (a.size() != b.size())
        throw InvalidInput("paired_t_test: samples must be paired");
    if (a.size() < 2)
        throw InvalidInput("paired_t_test: need at least two pairs");
    PairedTTest out;
    out.n = a.size();
    const double n = static_cast<double>(a.size());
    std::vector<double> d(a.size());
    for (std::size_t k = 0; k < a.size(); ++k)
        d[k] = a[k] - b[k];
    out.mean_diff = std::accumulate(d.begin(), d.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : d)
        ss += (x - out.mean_diff) * (x - out.mean_diff);
    const double sd = std::sqrt(ss / (n - 1.0));
    if (!(sd > 0.0)) {
        out.t = out.mean_diff == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), out.mean_diff);
        out.p_two_sided = out.mean_diff == 0.0 ? 1.0 : 0.0;
        out.p_greater = out.mean_diff > 0.0 ? 0.0 : 1.0;
        return out;
    }
    out.t = out.mean_diff / (sd / std::sqrt(n));
    const boost::math::students_t dist(n - 1.0);
    out.p_greater = boost::math::cdf(boost::math::complement(dist, out.t));
    out.p_two_sided = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(out.t)));
    return out;
}

} // namespace comp
