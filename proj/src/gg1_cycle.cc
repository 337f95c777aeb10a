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

#include "qtail/gg1_cycle.h"

#include <string>

using namespace qtail;

void qtail::validate(const Gg1Params &params) {
    if (params.horizon_M < 1) {
        throw Error(ErrorCode::InvalidArgument, "horizon_M must be >= 1");
    }
    if (!(params.threshold_d >= 0)) {
        throw Error(ErrorCode::InvalidArgument, "threshold_d must be >= 0");
    }
    if (params.clip.enabled && !(params.clip.level_B > 0)) {
        throw Error(ErrorCode::InvalidArgument, "clip level must be positive when enabled");
    }
}

CycleStats qtail::evaluate_truncated_cycle(SeedStream stream, const Gg1Params &params) {
    return run_gg1_cycle(stream, params, params.horizon_M);
}

CycleStats qtail::evaluate_full_cycle(SeedStream stream, const Gg1Params &params, int64_t safety_cap) {
    CycleStats stats = run_gg1_cycle(stream, params, safety_cap);
    if (stats.truncated) {
        throw Error(
            ErrorCode::CapExceeded,
            "GI/GI/1 cycle for cycle_index " + std::to_string(stream.cycle_index()) + " did not regenerate within " +
                std::to_string(safety_cap) + " arrivals");
    }
    return stats;
}
