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


#include "qtail/jsq_cycle.h"

#include <cmath>

#include "gtest/gtest.h"

using namespace qtail;

namespace {

JsqParams k2(int64_t R_A) {
    JsqParams p;
    p.K = 2;
    p.lambda = 0.5;
    p.clip_B = 20;
    p.service_dist = DistSpec::exponential(1);
    p.split_eps = 0.5;
    p.threshold_d = 3;
    p.arrival_cap_R_A = R_A;
    return p;
}

void push_job(JsqState &s, int server, double arrived_at, double residual) {
    s.Q[server]++;
    s.buffer[server].push_back(arrived_at);
    if (s.Q[server] == 1) {
        s.U[server] = residual;
    }
}

}  // namespace

TEST(Minorization, delta) {
    EXPECT_NEAR(minorization_delta(1, 0.5), 0.3032653298563167, 1e-15);
    EXPECT_NEAR(minorization_delta(2, 0.25), 0.3032653298563167, 1e-15);
    EXPECT_LT(minorization_delta(1, 1e-12), 1e-11);
}

TEST(Nummelin, no_test_at_clip_age) {
    JsqParams p = k2(10);
    SeedStream coins(0, 0);
    SplitOutcome out = nummelin_test(p.clip_B, p, coins);
    EXPECT_FALSE(out.tested);
    EXPECT_FALSE(out.regenerated);
    EXPECT_EQ(out.next_interarrival, 0.0);
    EXPECT_EQ(coins.call_index(), 1u);
}

TEST(Nummelin, success_draws_from_uniform_h) {
    JsqParams p = k2(10);
    double delta = minorization_delta(p.lambda, p.split_eps);
    int successes = 0;
    for (uint64_t c = 0; c < 200; c++) {
        SeedStream coins(5, c);
        SeedStream peek = coins;
        double coin = peek.draw_uniform().value;
        double v = peek.draw_uniform().value;
        SplitOutcome out = nummelin_test(1.0, p, coins);
        ASSERT_TRUE(out.tested);
        ASSERT_EQ(out.regenerated, coin < delta);
        if (out.regenerated) {
            successes++;
            ASSERT_EQ(out.next_interarrival, p.split_eps * v);
        } else {
            ASSERT_GE(out.next_interarrival, 0.0);
            ASSERT_LE(out.next_interarrival, p.clip_B - 1.0);
        }
    }
    EXPECT_GT(successes, 0);
}

TEST(Nummelin, mixture_reproduces_clipped_residual_law) {
    JsqParams p = k2(10);
    p.lambda = 1.3;
    p.clip_B = 4;
    p.split_eps = 0.7;
    double delta = minorization_delta(p.lambda, p.split_eps);
    for (double u0 : {0.0, 1.0, 3.2}) {
        double room = p.clip_B - u0;
        for (int i = 0; i < 400; i++) {
            double y = room * i / 400.0;
            double h = y <= p.split_eps ? 1 / p.split_eps : 0;
            double mix = delta * h + (1 - delta) * residual_kernel_density(y, u0, p);
            ASSERT_NEAR(mix, p.lambda * std::exp(-p.lambda * y), 1e-12);
            ASSERT_GE(residual_kernel_density(y, u0, p), 0.0);
            double H = std::min(y / p.split_eps, 1.0);
            double mix_cdf = delta * H + (1 - delta) * residual_kernel_cdf(y, u0, p);
            ASSERT_NEAR(mix_cdf, -std::expm1(-p.lambda * y), 1e-12);
        }
        // atom at the clip boundary
        double below = residual_kernel_cdf(std::nextafter(room, 0.0), u0, p);
        EXPECT_NEAR((1 - below) * (1 - delta), std::exp(-p.lambda * room), 1e-12);
    }
}

TEST(Nummelin, residual_quantile_inverts_cdf) {
    JsqParams p = k2(10);
    for (double u0 : {0.0, 5.0, 19.4}) {
        double prev = 0;
        for (int i = 0; i < 1000; i++) {
            double v = (i + 0.5) / 1000;
            double y = residual_kernel_quantile(v, u0, p);
            ASSERT_GE(y, prev);
            ASSERT_LE(y, p.clip_B - u0);
            if (y < p.clip_B - u0) {
                ASSERT_NEAR(residual_kernel_cdf(y, u0, p), v, 1e-9);
            }
            prev = y;
        }
    }
}

TEST(JsqEvent, departure_is_next_event) {
    JsqParams p = k2(10);
    JsqDraws draws(SeedStream(0, 0), 2);
    JsqState s(2);
    s.U_arr = 0.5;
    push_job(s, 0, 0, 0.3);
    push_job(s, 1, 0, 0.7);
    JsqEvent ev = advance_event(s, p, draws);
    EXPECT_DOUBLE_EQ(ev.dt, 0.3);
    EXPECT_EQ(ev.departures, 1);
    EXPECT_EQ(ev.first_departure, 0);
    EXPECT_FALSE(ev.arrival);
    EXPECT_DOUBLE_EQ(s.T_sys, 0.3);
    EXPECT_DOUBLE_EQ(s.U_arr, 0.2);
    EXPECT_DOUBLE_EQ(s.U[1], 0.4);
    EXPECT_EQ(s.U[0], JsqState::kIdle);
}

TEST(JsqEvent, arrival_joins_shortest_queue) {
    JsqParams p = k2(10);
    {
        JsqDraws draws(SeedStream(0, 0), 2);
        JsqState s(2);
        s.U_arr = 0.1;
        push_job(s, 0, 0, 5);
        push_job(s, 0, 0, 5);
        push_job(s, 1, 0, 5);
        JsqEvent ev = advance_event(s, p, draws);
        EXPECT_TRUE(ev.arrival);
        EXPECT_EQ(ev.routed_to, 1);
        EXPECT_EQ(s.Q[1], 2);
    }
    {
        JsqDraws draws(SeedStream(0, 0), 2);
        JsqState s(2);
        s.U_arr = 0.1;
        push_job(s, 0, 0, 5);
        push_job(s, 1, 0, 5);
        JsqEvent ev = advance_event(s, p, draws);
        EXPECT_EQ(ev.routed_to, 0);
        EXPECT_EQ(s.jobs_in_system(), 3);
        EXPECT_EQ(s.n_arr, 1);
    }
}

TEST(JsqEvent, cap_suppresses_arrivals) {
    JsqParams p = k2(1);
    JsqDraws draws(SeedStream(0, 0), 2);
    JsqState s(2);
    s.U_arr = 0.1;
    advance_event(s, p, draws);
    EXPECT_EQ(s.n_arr, 1);
    EXPECT_EQ(s.U_arr, JsqState::kIdle);
}

TEST(JsqCycle, single_arrival_hand_trace) {
    JsqParams p = k2(1);
    p.service_dist = DistSpec::deterministic(0.1);
    p.threshold_d = 0.05;
    JsqCycleStats s = evaluate_jsq_cycle(SeedStream(0, 0), p);
    EXPECT_EQ(s.J_RA, 1);
    EXPECT_EQ(s.N_A_cycle, 1);
    EXPECT_FALSE(s.regen_completed);
    EXPECT_EQ(s.events_simulated, 2);
}

TEST(JsqCycle, zero_service_never_violates) {
    JsqParams p = k2(50);
    p.service_dist = DistSpec::deterministic(0);
    p.threshold_d = 0.01;
    for (uint64_t c = 0; c < 100; c++) {
        EXPECT_EQ(evaluate_jsq_cycle(SeedStream(1, c), p).J_RA, 0);
    }
}

TEST(JsqCycle, invariants_on_random_cycles) {
    JsqParams p = k2(30);
    validate(p);
    int64_t failed_tests = 0;
    for (uint64_t c = 0; c < 3000; c++) {
        JsqCycleStats s = evaluate_jsq_cycle(SeedStream(2, c), p);
        ASSERT_LE(s.J_RA, s.N_A_cycle);
        ASSERT_LE(s.N_A_cycle, p.arrival_cap_R_A);
        ASSERT_GE(s.N_A_cycle, 1);
        ASSERT_LE(s.events_simulated, 2 * p.arrival_cap_R_A + p.K);
        ASSERT_LE(s.tests_succeeded, 1);
        ASSERT_EQ(s.regen_completed, s.tests_succeeded == 1);
        failed_tests += s.tests_performed - s.tests_succeeded;
        ASSERT_EQ(s, evaluate_jsq_cycle(SeedStream(2, c), p));
    }
    // failed tests continue the cycle
    EXPECT_GT(failed_tests, 0);
}

TEST(JsqCycle, truncated_agrees_with_full_below_cap) {
    JsqParams p = k2(1);
    for (uint64_t c = 0; c < 1000; c++) {
        JsqCycleStats full = evaluate_full_jsq_cycle(SeedStream(3, c), p, 100000);
        ASSERT_TRUE(full.regen_completed);
        p.arrival_cap_R_A = full.N_A_cycle + 1;
        ASSERT_EQ(evaluate_jsq_cycle(SeedStream(3, c), p), full);
        p.arrival_cap_R_A = 1;
    }
}

TEST(JsqCycle, clipping_coupling) {
    JsqParams clipped = k2(1000);
    clipped.clip_B = 2.5;
    clipped.service_dist = DistSpec::exponential(1.2);
    JsqParams raw = clipped;
    raw.clip_enabled = false;
    int engaged = 0;
    for (uint64_t c = 0; c < 2000; c++) {
        JsqCycleStats a = evaluate_jsq_cycle(SeedStream(6, c), clipped);
        JsqCycleStats b = evaluate_jsq_cycle(SeedStream(6, c), raw);
        if (!a.clip_engaged) {
            ASSERT_EQ(a.J_RA, b.J_RA);
            ASSERT_EQ(a.N_A_cycle, b.N_A_cycle);
            ASSERT_EQ(a.events_simulated, b.events_simulated);
        } else {
            engaged++;
        }
    }
    EXPECT_GT(engaged, 0);
}

TEST(JsqCycle, validate_and_load) {
    JsqParams p = k2(10);
    EXPECT_LT(clipped_load(p), 1);
    p.split_eps = p.clip_B;
    EXPECT_THROW(validate(p), Error);
    p = k2(0);
    EXPECT_THROW(validate(p), Error);
}
