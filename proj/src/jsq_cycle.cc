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

#include <algorithm>
#include <cmath>
#include <string>

using namespace qtail;

namespace {

// Room left before the clip binds for the pending inter-arrival, or +inf when clipping is off.
double residual_room(double u0, const JsqParams &params) {
    return params.clip_enabled ? params.clip_B - u0 : std::numeric_limits<double>::infinity();
}

double exp_quantile(double v, double rate) {
    return -std::log1p(-v) / rate;
}

double draw_interarrival(const JsqParams &params, SeedStream &arrivals, bool &engaged) {
    double raw = exp_quantile(arrivals.draw_uniform().value, params.lambda);
    if (params.clip_enabled && raw > params.clip_B) {
        engaged = true;
        return params.clip_B;
    }
    return raw;
}

double draw_service(const JsqParams &params, SeedStream &lane, bool &engaged) {
    double raw = params.service_dist.quantile(lane.draw_uniform().value);
    if (params.clip_enabled && raw > params.clip_B) {
        engaged = true;
        return params.clip_B;
    }
    return raw;
}

}  // namespace

void qtail::validate(const JsqParams &params) {
    auto fail = [](const std::string &m) { throw Error(ErrorCode::InvalidArgument, m); };
    if (params.K < 1) {
        fail("JSQ model needs K >= 1");
    }
    if (!(params.lambda > 0) || !std::isfinite(params.lambda)) {
        fail("arrival rate lambda must be positive");
    }
    if (!(params.clip_B > 0) || !std::isfinite(params.clip_B)) {
        fail("clip_B must be positive and finite");
    }
    if (!(params.split_eps > 0 && params.split_eps < params.clip_B)) {
        fail("split_eps must lie in (0, clip_B)");
    }
    if (!(params.threshold_d >= 0)) {
        fail("threshold_d must be >= 0");
    }
    if (params.arrival_cap_R_A < 1) {
        fail("arrival_cap_R_A must be >= 1");
    }
}

double qtail::clipped_load(const JsqParams &params) {
    double mean_a = -std::expm1(-params.lambda * params.clip_B) / params.lambda;
    double mean_s = params.service_dist.clipped_mean(params.clip_B);
    return (1.0 / mean_a) / (params.K * (1.0 / mean_s));
}

double qtail::minorization_delta(double lambda, double split_eps) {
    return split_eps * lambda * std::exp(-lambda * split_eps);
}

double qtail::residual_kernel_cdf(double y, double u0, const JsqParams &params) {
    double lambda = params.lambda;
    double eps = params.split_eps;
    double delta = minorization_delta(lambda, eps);
    double room = residual_room(u0, params);
    if (y < 0) {
        return 0;
    }
    if (y >= room) {
        return 1;
    }
    double body = -std::expm1(-lambda * y) - (y <= eps ? delta * y / eps : delta);
    return body / (1 - delta);
}

double qtail::residual_kernel_density(double y, double u0, const JsqParams &params) {
    double lambda = params.lambda;
    double eps = params.split_eps;
    double delta = minorization_delta(lambda, eps);
    if (y < 0 || y >= residual_room(u0, params)) {
        return 0;
    }
    double g = lambda * std::exp(-lambda * y) - (y <= eps ? delta / eps : 0.0);
    return g / (1 - delta);
}

double qtail::residual_kernel_quantile(double v, double u0, const JsqParams &params) {
    double lambda = params.lambda;
    double eps = params.split_eps;
    double delta = minorization_delta(lambda, eps);
    double room = residual_room(u0, params);
    double target = v * (1 - delta);
    if (std::isfinite(room) && target >= -std::expm1(-lambda * room) - delta) {
        return room;
    }
    if (target >= -std::expm1(-lambda * eps) - delta) {
        return -std::log1p(-(delta + target)) / lambda;
    }
    // 1 - exp(-lambda y) - delta y / eps is increasing on [0, eps]; bisect.
    double lo = 0;
    double hi = eps;
    for (int iter = 0; iter < 200 && hi - lo > 0; iter++) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        if (-std::expm1(-lambda * mid) - delta * mid / eps < target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return hi;
}

SplitOutcome qtail::nummelin_test(double u0, const JsqParams &params, SeedStream &coins) {
    SplitOutcome out;
    double room = residual_room(u0, params);
    if (u0 > params.clip_B - params.split_eps) {
        double raw = exp_quantile(coins.draw_uniform().value, params.lambda);
        out.next_interarrival = std::min(raw, room);
        out.clip_engaged = raw > room;
        return out;
    }
    out.tested = true;
    double delta = minorization_delta(params.lambda, params.split_eps);
    double coin = coins.draw_uniform().value;
    double v = coins.draw_uniform().value;
    if (coin < delta) {
        out.regenerated = true;
        out.next_interarrival = params.split_eps * v;
        return out;
    }
    out.next_interarrival = residual_kernel_quantile(v, u0, params);
    if (std::isfinite(room) && out.next_interarrival >= room) {
        out.clip_engaged = true;
    }
    return out;
}

int64_t JsqState::jobs_in_system() const {
    int64_t total = 0;
    for (int64_t q : Q) {
        total += q;
    }
    return total;
}

bool JsqState::empty() const {
    return std::all_of(Q.begin(), Q.end(), [](int64_t q) { return q == 0; });
}

JsqDraws::JsqDraws(const SeedStream &stream, int K) : arrivals(stream.lane(0)), coins(stream.lane(1)) {
    services.reserve(K);
    for (int i = 0; i < K; i++) {
        services.push_back(stream.lane(2 + static_cast<uint64_t>(i)));
    }
}

JsqEvent qtail::advance_event(JsqState &state, const JsqParams &params, JsqDraws &draws) {
    JsqEvent ev;
    const int K = params.K;
    double dt = state.U_arr;
    for (int i = 0; i < K; i++) {
        dt = std::min(dt, state.U[i]);
    }
    ev.dt = dt;
    state.T_sys += dt;
    if (std::isfinite(state.U_arr)) {
        state.U_arr -= dt;
    }
    for (int i = 0; i < K; i++) {
        if (std::isfinite(state.U[i])) {
            state.U[i] -= dt;
        }
    }

    for (int i = 0; i < K; i++) {
        if (!(state.U[i] <= 0)) {
            continue;
        }
        double arrived_at = state.buffer[i].front();
        state.buffer[i].pop_front();
        if (state.T_sys - arrived_at > params.threshold_d) {
            state.violations++;
            ev.violations++;
        }
        state.Q[i]--;
        state.U[i] = state.Q[i] > 0 ? draw_service(params, draws.services[i], state.clip_engaged) : JsqState::kIdle;
        if (ev.departures == 0) {
            ev.first_departure = i;
        }
        ev.departures++;
    }

    if (state.U_arr <= 0) {
        if (state.n_arr < params.arrival_cap_R_A) {
            state.n_arr++;
            int j = static_cast<int>(std::min_element(state.Q.begin(), state.Q.end()) - state.Q.begin());
            state.Q[j]++;
            state.buffer[j].push_back(state.T_sys);
            if (state.Q[j] == 1) {
                state.U[j] = draw_service(params, draws.services[j], state.clip_engaged);
            }
            state.last_arrival = state.T_sys;
            state.U_arr = state.n_arr < params.arrival_cap_R_A
                              ? draw_interarrival(params, draws.arrivals, state.clip_engaged)
                              : JsqState::kIdle;
            ev.arrival = true;
            ev.routed_to = j;
        } else {
            state.U_arr = JsqState::kIdle;
        }
    }
    return ev;
}

JsqCycleStats qtail::evaluate_jsq_cycle(SeedStream stream, const JsqParams &params) {
    JsqDraws draws(stream, params.K);
    JsqState state(params.K);
    JsqCycleStats out;
    // The cycle opens at a successful test: the first residual comes from Uniform[0, eps].
    state.U_arr = params.split_eps * draws.coins.draw_uniform().value;

    while (true) {
        bool any_pending = std::isfinite(state.U_arr) ||
                           std::any_of(state.U.begin(), state.U.end(), [](double u) { return std::isfinite(u); });
        if (!any_pending) {
            break;
        }
        JsqEvent ev = advance_event(state, params, draws);
        out.events_simulated++;
        if (ev.departures == 0 || !state.empty()) {
            continue;
        }
        if (state.n_arr >= params.arrival_cap_R_A) {
            break;  // drain finished
        }
        SplitOutcome split = nummelin_test(state.arrival_age(), params, draws.coins);
        state.clip_engaged |= split.clip_engaged;
        if (split.tested) {
            out.tests_performed++;
        }
        if (split.regenerated) {
            out.tests_succeeded++;
            out.regen_completed = true;
            break;
        }
        state.U_arr = split.next_interarrival;
    }
    out.J_RA = state.violations;
    out.N_A_cycle = state.n_arr;
    out.clip_engaged = state.clip_engaged;
    out.duration = state.T_sys;
    return out;
}

JsqCycleStats qtail::evaluate_full_jsq_cycle(SeedStream stream, const JsqParams &params, int64_t safety_cap) {
    JsqParams full = params;
    full.arrival_cap_R_A = safety_cap;
    JsqCycleStats stats = evaluate_jsq_cycle(stream, full);
    if (!stats.regen_completed) {
        throw Error(
            ErrorCode::CapExceeded,
            "JSQ cycle for cycle_index " + std::to_string(stream.cycle_index()) + " did not regenerate within " +
                std::to_string(safety_cap) + " arrivals");
    }
    return stats;
}
