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

#ifndef QTAIL_JSQ_CYCLE_H
#define QTAIL_JSQ_CYCLE_H

#include <cstdint>
#include <deque>
#include <limits>
#include <vector>

#include "qtail/distributions.h"
#include "qtail/error.h"
#include "qtail/seedstream.h"

namespace qtail {

/// K identical FIFO servers fed by a clipped Poisson(lambda) stream under join-the-shortest-queue routing.
struct JsqParams {
    int K = 1;
    double lambda = 1;
    /// Clipping level for inter-arrival and service draws. It also gates the splitting test
    /// (tests run only when the arrival age is <= B - eps), even when clipping itself is off.
    double clip_B = 1;
    /// Off simulates the original (unclipped) system on the same draws; used for coupling checks.
    bool clip_enabled = true;
    DistSpec service_dist = DistSpec::exponential(1);
    double split_eps = 0.5;
    double threshold_d = 0;
    int64_t arrival_cap_R_A = 1;
};

void validate(const JsqParams &params);

/// lambda^B / (K mu^B) with lambda^B = 1 / E[A^(B)], mu^B = 1 / E[S^(B)]; stable iff < 1.
double clipped_load(const JsqParams &params);

/// eps * lambda * exp(-lambda * eps), the mass of the Uniform[0, eps] component of the residual law.
double minorization_delta(double lambda, double split_eps);

/// CDF and density of the residual kernel q_A(. | u0) = (P_A(. | u0) - delta * phi) / (1 - delta), defined
/// for u0 <= B - eps. With clipping on, the law has an atom of mass exp(-lambda (B - u0)) / (1 - delta) at B - u0.
double residual_kernel_cdf(double y, double u0, const JsqParams &params);
double residual_kernel_density(double y, double u0, const JsqParams &params);
/// Piecewise inverse of residual_kernel_cdf (bisection on [0, eps], closed form beyond).
double residual_kernel_quantile(double v, double u0, const JsqParams &params);

struct SplitOutcome {
    bool tested = false;
    bool regenerated = false;
    double next_interarrival = 0;
    bool clip_engaged = false;
};

/// Empty-state visit with arrival age u0. If u0 > B - eps, no test: the residual is redrawn from the ordinary
/// residual law P_A(. | u0). Otherwise a Bernoulli(delta) coin decides between a regeneration (residual from
/// Uniform[0, eps]) and a draw from the residual kernel. Coins and values come from `coins`.
SplitOutcome nummelin_test(double u0, const JsqParams &params, SeedStream &coins);

struct JsqState {
    static constexpr double kIdle = std::numeric_limits<double>::infinity();

    double T_sys = 0;
    double U_arr = kIdle;
    std::vector<double> U;                   // residual service, kIdle when the server is idle
    std::vector<int64_t> Q;                  // jobs at each server, including the one in service
    std::vector<std::deque<double>> buffer;  // arrival epochs of those jobs, FIFO
    int64_t n_arr = 0;
    double last_arrival = 0;
    int64_t violations = 0;
    bool clip_engaged = false;

    explicit JsqState(int K) : U(K, kIdle), Q(K, 0), buffer(K) {
    }
    int64_t jobs_in_system() const;
    bool empty() const;
    double arrival_age() const {
        return T_sys - last_arrival;
    }
};

/// Independent draw sources for one JSQ cycle: inter-arrivals, splitting coins, and one lane per server.
struct JsqDraws {
    SeedStream arrivals;
    SeedStream coins;
    std::vector<SeedStream> services;

    JsqDraws(const SeedStream &stream, int K);
};

struct JsqEvent {
    double dt = 0;
    bool arrival = false;
    int routed_to = -1;
    int departures = 0;
    int first_departure = -1;
    int violations = 0;
};

/// Advances to the next event epoch. Simultaneous events resolve as departures by ascending server index,
/// then the arrival. Arrivals route to the server holding the fewest jobs (lowest index on ties).
JsqEvent advance_event(JsqState &state, const JsqParams &params, JsqDraws &draws);

struct JsqCycleStats {
    int64_t J_RA = 0;
    int64_t N_A_cycle = 0;
    bool regen_completed = false;
    int64_t events_simulated = 0;
    int64_t tests_performed = 0;
    int64_t tests_succeeded = 0;
    bool clip_engaged = false;
    double duration = 0;

    bool operator==(const JsqCycleStats &other) const = default;
};

/// One Nummelin cycle, started at a regeneration (empty system, first residual from Uniform[0, eps]).
/// Ends at the next successful splitting test, or, once the R_A-th arrival is injected, after the system
/// drains with further arrivals suppressed.
JsqCycleStats evaluate_jsq_cycle(SeedStream stream, const JsqParams &params);

/// Same cycle with the arrival cap lifted to safety_cap; throws CapExceeded unless the cycle regenerates.
JsqCycleStats evaluate_full_jsq_cycle(SeedStream stream, const JsqParams &params, int64_t safety_cap);

}  // namespace qtail

#endif
