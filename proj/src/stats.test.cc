// Copyright 2026 The qtail Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "qtail/stats.h"

#include <cmath>
#include <vector>

#include "gtest/gtest.h"

#include "qtail/parallel.h"

using namespace qtail;

// Reference values from scipy.stats.
TEST(Stats, normal_quantile) {
    EXPECT_NEAR(normal_quantile(0.975), 1.959963984540054, 1e-13);
    EXPECT_NEAR(normal_quantile(0.5), 0.0, 1e-15);
}

TEST(Stats, clopper_pearson) {
    auto [lo, hi] = clopper_pearson(3, 10, 0.05);
    EXPECT_NEAR(lo, 0.06673951117773447, 1e-12);
    EXPECT_NEAR(hi, 0.6524528500599973, 1e-12);
    auto [lo0, hi0] = clopper_pearson(0, 10, 0.05);
    EXPECT_EQ(lo0, 0.0);
    EXPECT_NEAR(hi0, 0.30849710781876083, 1e-12);
    auto [lon, hin] = clopper_pearson(10, 10, 0.05);
    EXPECT_NEAR(lon, 1 - 0.30849710781876083, 1e-12);
    EXPECT_EQ(hin, 1.0);
}

TEST(Stats, hoeffding) {
    EXPECT_EQ(hoeffding_sample_size(0.1, 0.05), 185);
    EXPECT_LE(hoeffding_half_width(185, 0.05), 0.1);
    EXPECT_GT(hoeffding_half_width(184, 0.05), 0.1);
}

TEST(Stats, moments_and_ratio) {
    Moments m;
    for (double x : {1.0, 2.0, 3.0, 4.0}) {
        m.add(x);
    }
    EXPECT_DOUBLE_EQ(m.mean(), 2.5);
    EXPECT_NEAR(m.variance(), 5.0 / 3, 1e-15);
    RatioMoments r;
    r.add(0.002, 20);
    r.add(0.002, 20);
    EXPECT_NEAR(r.ratio(), 1e-4, 1e-18);
    EXPECT_EQ(r.std_error(), 0.0);
}

TEST(Stats, slope_and_median) {
    std::vector<double> x{1, 10, 100};
    std::vector<double> y{3, 300, 30000};
    EXPECT_NEAR(log_log_slope(x, y), 2.0, 1e-12);
    EXPECT_EQ(median({3, 1, 2}), 2.0);
    EXPECT_EQ(median({4, 1, 2, 3}), 2.5);
    EXPECT_TRUE(intervals_overlap({1, 0.1}, {1.5, 0.1}, 3));
    EXPECT_FALSE(intervals_overlap({1, 0.1}, {1.7, 0.1}, 3));
}

TEST(Parallel, reduce_independent_of_threads) {
    const int64_t n = 100000;
    auto run = [&](int threads) {
        return parallel_reduce(
            n, threads, 0.0, [](double &acc, int64_t i) { acc += 1.0 / (1.0 + static_cast<double>(i)); },
            [](double &a, double b) { a += b; });
    };
    double one = run(1);
    EXPECT_EQ(run(4), one);
    EXPECT_EQ(run(16), one);
    std::vector<int64_t> sq = parallel_map<int64_t>(1000, 8, [](int64_t i) { return i * i; });
    EXPECT_EQ(sq[999], 998001);
}

TEST(Parallel, rethrows_lowest_chunk) {
    auto run = [] {
        parallel_reduce(
            3 * kChunkSize, 4, 0,
            [](int &, int64_t i) {
                if (i == kChunkSize + 5 || i == 2 * kChunkSize + 1) {
                    throw std::runtime_error(std::to_string(i / kChunkSize));
                }
            },
            [](int &, int) {});
    };
    try {
        run();
        FAIL();
    } catch (const std::runtime_error &e) {
        EXPECT_STREQ(e.what(), "1");
    }
}
