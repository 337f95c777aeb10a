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

#ifndef QTAIL_GG1_CYCLE_H
#define QTAIL_GG1_CYCLE_H

#include <algorithm>
#include <cstdint>

#include "qtail/distributions.h"
#include "qtail/error.h"
#include "qtail/seedstream.h"

namespace qtail {

enum class DelayMetric { WaitingTime, ResponseTime };

struct Gg1Params {
    DistSpec arrival_dist = DistSpec::deterministic(1);
    DistSpec service_dist = DistSpec::deterministic(0);
    ClipSpec clip;
    double threshold_d = 0;
    int64_t horizon_M = 1;
    DelayMetric metric = DelayMetric::WaitingTime;
};

/// Output of one (possibly truncated) GI/GI/1 regeneration cycle.
struct CycleStats {
    int64_t tau_M = 0;
    int64_t R_M = 0;
    double Y = 0;  // R_M / horizon_M
    bool truncated = false;
    int64_t calls_used = 0;
    bool clip_engaged = false;  // some raw draw exceeded B

    bool operator==(const CycleStats &other) const = default;
};

/// (W + S - A)^+.
inline double lindley_step(double W, double S, double A) {
    return std::max(W + S - A, 0.0);
}

/// Runs the arrival-indexed Lindley cycle from W = 0 for at most `horizon` iterations. Each iteration
/// draws A (odd call index) then S (even call index), updates W, counts the delay indicator and stops when
/// W returns to 0. Y is normalized by params.horizon_M regardless of `horizon`.
///
/// In response-time mode the indicator is 1{W_pre + S >= d}, the sojourn time of the arrival whose service
/// S was just drawn (W_pre is its waiting time, the value before the update).
template <typename Draws>
CycleStats run_gg1_cycle(Draws &draws, const Gg1Params &params, int64_t horizon) {
    CycleStats out;
    double w = 0;
    int64_t n = 0;
    int64_t r = 0;
    bool engaged = false;
    while (n < horizon) {
        n++;
        UniformDraw ua = draws.draw_uniform();
        UniformDraw us = draws.draw_uniform();
        double raw_a = params.arrival_dist.quantile(ua.value);
        double raw_s = params.service_dist.quantile(us.value);
        double a = raw_a;
        double s = raw_s;
        if (params.clip.enabled) {
            a = std::min(a, params.clip.level_B);
            s = std::min(s, params.clip.level_B);
            engaged |= raw_a > params.clip.level_B || raw_s > params.clip.level_B;
        }
        double w_pre = w;
        w = lindley_step(w, s, a);
        bool hit = params.metric == DelayMetric::WaitingTime ? w >= params.threshold_d
                                                             : w_pre + s >= params.threshold_d;
        r += hit ? 1 : 0;
        if (w == 0) {
            out.tau_M = n;
            out.R_M = r;
            out.truncated = false;
            out.Y = static_cast<double>(r) / static_cast<double>(params.horizon_M);
            out.calls_used = 2 * n;
            out.clip_engaged = engaged;
            return out;
        }
    }
    out.tau_M = n;
    out.R_M = r;
    out.truncated = true;
    out.Y = static_cast<double>(r) / static_cast<double>(params.horizon_M);
    out.calls_used = 2 * n;
    out.clip_engaged = engaged;
    return out;
}

/// Truncated cycle at params.horizon_M, as a pure function of the stream's seed.
CycleStats evaluate_truncated_cycle(SeedStream stream, const Gg1Params &params);

/// Untruncated ground truth. Throws CapExceeded if the cycle has not regenerated after safety_cap arrivals.
CycleStats evaluate_full_cycle(SeedStream stream, const Gg1Params &params, int64_t safety_cap);

/// Validates Gg1Params invariants; throws InvalidArgument.
void validate(const Gg1Params &params);

}  // namespace qtail

#endif
