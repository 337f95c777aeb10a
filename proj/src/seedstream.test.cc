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


#include "qtail/seedstream.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <set>
#include <string>
#include <vector>

#include "gtest/gtest.h"

#include "qtail/error.h"

using namespace qtail;

#ifndef QTAIL_TEST_DATA_DIR
#define QTAIL_TEST_DATA_DIR "tests/data"
#endif

// Known-answer vectors published with the Random123 reference implementation.
TEST(Philox, known_answers) {
    using A4 = std::array<uint32_t, 4>;
    using A2 = std::array<uint32_t, 2>;
    EXPECT_EQ(philox4x32_10(A4{0, 0, 0, 0}, A2{0, 0}), (A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
    EXPECT_EQ(philox4x32_10(A4{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, A2{0xffffffff, 0xffffffff}),
              (A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
    EXPECT_EQ(philox4x32_10(A4{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, A2{0xa4093822, 0x299f31d0}),
              (A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(SeedStream, deterministic_across_fresh_streams) {
    SeedStream a(7, 0);
    SeedStream b(7, 0);
    for (int j = 0; j < 100; j++) {
        ASSERT_EQ(a.draw_uniform().value, b.draw_uniform().value);
    }
}

TEST(SeedStream, values_in_unit_interval_on_grid) {
    for (int bw : {1, 8, 16, 53}) {
        SeedStream s(3, 9, bw);
        for (int j = 0; j < 10000; j++) {
            UniformDraw u = s.draw_uniform();
            ASSERT_GE(u.value, 0.0);
            ASSERT_LT(u.value, 1.0);
            ASSERT_EQ(u.bit_width, bw);
            double scaled = std::ldexp(u.value, bw);
            ASSERT_EQ(scaled, std::floor(scaled));
        }
    }
    EXPECT_THROW(SeedStream(0, 0, 0), Error);
    EXPECT_THROW(SeedStream(0, 0, 54), Error);
}

TEST(SeedStream, call_index_advances_by_one) {
    SeedStream s = fork_cycle(11, 0);
    EXPECT_EQ(s.call_index(), 0u);
    s.draw_uniform();
    s.draw_uniform();
    EXPECT_EQ(s.call_index(), 2u);
    // raw_at is a pure lookup.
    s.raw_at(1000);
    EXPECT_EQ(s.call_index(), 2u);
}

TEST(SeedStream, fork_path_independence) {
    SeedStream direct(5, 3);
    SeedStream forked = fork_cycle(5, 3);
    SeedStream bits = SeedStream::from_seed_bits(5, 3, 4);
    EXPECT_EQ(direct, forked);
    double u = forked.draw_uniform().value;
    EXPECT_EQ(direct.draw_uniform().value, u);
    EXPECT_EQ(bits.draw_uniform().value, u);
}

TEST(SeedStream, distinct_cycles_differ) {
    for (uint64_t s : {0ull, 1ull, 99ull}) {
        EXPECT_NE(fork_cycle(s, 3).draw_uniform().value, fork_cycle(s, 4).draw_uniform().value);
    }
}

TEST(SeedStream, lanes_are_distinct_and_reset) {
    SeedStream s(1, 2);
    s.draw_uniform();
    SeedStream l0 = s.lane(0);
    SeedStream l1 = s.lane(1);
    EXPECT_EQ(l0.call_index(), 0u);
    EXPECT_EQ(l0.cycle_index(), 2u);
    EXPECT_NE(l0.raw_at(1), l1.raw_at(1));
    EXPECT_NE(l0.raw_at(1), SeedStream(1, 2).raw_at(1));
    EXPECT_EQ(s.lane(0), l0);
}

TEST(SeedStream, enumerates_distinct_streams) {
    const int m = 12;
    std::set<uint64_t> first;
    for (uint64_t omega = 0; omega < (uint64_t{1} << m); omega++) {
        first.insert(SeedStream::from_seed_bits(42, omega, m).raw_at(1));
    }
    EXPECT_EQ(first.size(), size_t{1} << m);
    EXPECT_THROW(SeedStream::from_seed_bits(42, uint64_t{1} << m, m), Error);
}

TEST(SeedStream, uniform_first_moments) {
    SeedStream s(2026, 0);
    const int n = 200000;
    double sum = 0;
    double sum_sq = 0;
    for (int i = 0; i < n; i++) {
        double u = s.draw_uniform().value;
        sum += u;
        sum_sq += u * u;
    }
    // mean 1/2 with sd sqrt(1/12 / n); second moment 1/3.
    EXPECT_NEAR(sum / n, 0.5, 5 * std::sqrt(1.0 / 12 / n));
    EXPECT_NEAR(sum_sq / n, 1.0 / 3, 5 * std::sqrt(4.0 / 45 / n));
}

TEST(SeedStream, matches_frozen_golden_file) {
    std::ifstream in(std::string(QTAIL_TEST_DATA_DIR) + "/seedstream_golden.bin", std::ios::binary);
    ASSERT_TRUE(in.good());
    std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    ASSERT_GE(bytes.size(), 12u);
    ASSERT_EQ(std::string(bytes.data(), 4), "QTSG");
    uint32_t version = 0;
    uint32_t count = 0;
    std::memcpy(&version, bytes.data() + 4, 4);
    std::memcpy(&count, bytes.data() + 8, 4);
    ASSERT_EQ(version, 1u);
    ASSERT_EQ(bytes.size(), 12 + size_t{count} * 40);
    ASSERT_GT(count, 0u);

    const char *p = bytes.data() + 12;
    for (uint32_t r = 0; r < count; r++, p += 40) {
        uint64_t seed, cycle, j, raw;
        double value;
        std::memcpy(&seed, p, 8);
        std::memcpy(&cycle, p + 8, 8);
        std::memcpy(&j, p + 16, 8);
        std::memcpy(&raw, p + 24, 8);
        std::memcpy(&value, p + 32, 8);
        SeedStream s(seed, cycle);
        EXPECT_EQ(s.raw_at(j), raw) << "seed " << seed << " cycle " << cycle << " j " << j;
        for (uint64_t i = 1; i < j; i++) {
            s.draw_uniform();
        }
        EXPECT_EQ(s.draw_uniform().value, value);
    }
}
