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


#include "qtail/maxweight_cycle.h"

#include <vector>

#include "gtest/gtest.h"

using namespace qtail;

namespace {

WirelessParams one_queue_always(int64_t d, int64_t M) {
    WirelessParams p;
    p.arrival_pmfs = {DistSpec::bounded_discrete({0, 1})};
    p.channel_pmfs = {DistSpec::bounded_discrete({0, 1})};
    p.subset_I = {0};
    p.threshold_d = d;
    p.horizon_M = M;
    return p;
}

WirelessParams two_queue(int64_t d, int64_t M) {
    WirelessParams p;
    p.arrival_pmfs = {DistSpec::bounded_discrete({0.6, 0.3, 0.1}), DistSpec::bounded_discrete({0.7, 0.3})};
    p.channel_pmfs = {DistSpec::bounded_discrete({0.2, 0.5, 0.3}), DistSpec::bounded_discrete({0.2, 0.8})};
    p.subset_I = {0};
    p.threshold_d = d;
    p.horizon_M = M;
    return p;
}

// Checks per-slot invariants and tracks per-queue flow.
struct Auditor : SlotObserver {
    std::vector<int64_t> arrived;
    std::vector<int64_t> departed;
    std::vector<int64_t> last_popped;
    int64_t popped_from_I = 0;
    int64_t violations_I = 0;
    const WirelessParams &params;

    explicit Auditor(const WirelessParams &p)
        : arrived(p.K(), 0), departed(p.K(), 0), last_popped(p.K(), -1), params(p) {
    }

    void on_slot(const SlotRecord &r) override {
        for (int i = 0; i < params.K(); i++) {
            int64_t cap = std::min(r.queue_start[i], r.channel[i]);
            if (i == r.scheduled) {
                EXPECT_EQ(r.departures[i], cap);
            } else {
                EXPECT_EQ(r.departures[i], 0);
            }
            arrived[i] += r.arrivals[i];
            departed[i] += r.departures[i];
            EXPECT_GE(arrived[i] - departed[i], 0);
        }
        int64_t best = r.queue_start[r.scheduled] * r.channel[r.scheduled];
        for (int i = 0; i < params.K(); i++) {
            int64_t w = r.queue_start[i] * r.channel[i];
            EXPECT_TRUE(w < best || (w == best && i >= r.scheduled));
        }
    }
    void on_departure(int queue, int64_t arrival_slot, int64_t departure_slot) override {
        EXPECT_GE(arrival_slot, last_popped[queue]);
        EXPECT_GE(departure_slot - arrival_slot, 1);
        last_popped[queue] = arrival_slot;
        if (params.in_subset(queue)) {
            popped_from_I++;
            violations_I += departure_slot - arrival_slot >= params.threshold_d ? 1 : 0;
        }
    }
};

}  // namespace

TEST(MaxWeight, schedule) {
    std::vector<int64_t> q1{3, 2}, m1{1, 2};
    EXPECT_EQ(maxweight_schedule(q1, m1), 1);
    std::vector<int64_t> q2{2, 2}, m2{1, 1};
    EXPECT_EQ(maxweight_schedule(q2, m2), 0);
    std::vector<int64_t> q3{0, 0}, m3{5, 5};
    EXPECT_EQ(maxweight_schedule(q3, m3), 0);
}

TEST(MaxWeight, zero_arrivals_regenerate_at_once) {
    WirelessParams p = two_queue(2, 10);
    p.arrival_pmfs = {DistSpec::bounded_discrete({1}), DistSpec::bounded_discrete({1})};
    WirelessCycleStats s = evaluate_wireless_cycle(fork_cycle(0, 0), p);
    EXPECT_EQ(s.T_M, 1);
    EXPECT_EQ(s.N_M, 0);
    EXPECT_EQ(s.J_M, 0);
    EXPECT_FALSE(s.truncated);
}

TEST(MaxWeight, hand_trace_one_slot_delay) {
    WirelessCycleStats s = evaluate_wireless_cycle(fork_cycle(0, 0), one_queue_always(0, 4));
    EXPECT_TRUE(s.truncated);
    EXPECT_EQ(s.T_M, 4);
    EXPECT_EQ(s.N_M, 4);
    EXPECT_EQ(s.J_M, 3);
    EXPECT_EQ(s.backlog, 1);
    WirelessCycleStats s2 = evaluate_wireless_cycle(fork_cycle(0, 0), one_queue_always(2, 4));
    EXPECT_EQ(s2.J_M, 0);
}

TEST(MaxWeight, buffer_overflow) {
    WirelessParams p = one_queue_always(0, 10);
    p.channel_pmfs = {DistSpec::bounded_discrete({1, 0})};
    p.buffer_capacity = 3;
    try {
        evaluate_wireless_cycle(fork_cycle(0, 0), p);
        FAIL() << "expected BufferOverflow";
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::BufferOverflow);
    }
}

TEST(MaxWeight, invariants_on_random_cycles) {
    WirelessParams p = two_queue(3, 50);
    validate(p);
    for (uint64_t c = 0; c < 500; c++) {
        Auditor audit(p);
        SeedStream s = fork_cycle(21, c);
        WirelessCycleStats st = run_wireless_cycle(s, p, p.horizon_M, p.horizon_M * 2, &audit);
        ASSERT_LE(st.J_M, st.N_M);
        ASSERT_LE(st.T_M, p.horizon_M);
        ASSERT_EQ(st.J_M, audit.violations_I);
        ASSERT_EQ(s.call_index(), static_cast<uint64_t>(2 * p.K() * st.T_M));
        int64_t backlog = 0;
        for (int i = 0; i < p.K(); i++) {
            backlog += audit.arrived[i] - audit.departed[i];
        }
        ASSERT_EQ(backlog, st.backlog);
        ASSERT_EQ(st.truncated, backlog > 0);
        if (!st.truncated) {
            ASSERT_EQ(audit.popped_from_I, st.N_M);
        }
    }
}

TEST(MaxWeight, full_cycle_agrees_below_horizon) {
    WirelessParams p = two_queue(2, 1);
    for (uint64_t c = 0; c < 300; c++) {
        WirelessCycleStats full = evaluate_full_wireless_cycle(fork_cycle(4, c), p, 100000);
        p.horizon_M = full.T_M;
        WirelessCycleStats t = evaluate_wireless_cycle(fork_cycle(4, c), p);
        ASSERT_EQ(t, full);
        p.horizon_M = 1;
    }
}

TEST(MaxWeight, validate) {
    WirelessParams p = two_queue(2, 10);
    p.subset_I = {};
    EXPECT_THROW(validate(p), Error);
    p.subset_I = {2};
    EXPECT_THROW(validate(p), Error);
    p = two_queue(2, 10);
    p.channel_pmfs.pop_back();
    EXPECT_THROW(validate(p), Error);
}
