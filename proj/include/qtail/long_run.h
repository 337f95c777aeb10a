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

#ifndef QTAIL_LONG_RUN_H
#define QTAIL_LONG_RUN_H

#include <cstdint>

#include "qtail/gg1_cycle.h"
#include "qtail/jsq_cycle.h"
#include "qtail/maxweight_cycle.h"
#include "qtail/stats.h"

namespace qtail {

/// Time-average delay-tail estimators from one long trajectory. They share no simulation code with the
/// cycle simulators and draw from std::mt19937_64 through the standard library distributions, so agreement
/// with the cycle ratio is a real cross-check. Standard errors come from batch ratios.
struct LongRunResult {
    Estimate tail;          // fraction of customers (packets, jobs) with delay at or beyond d
    int64_t customers = 0;  // counted in the estimate
    int64_t batches = 0;
};

/// Fraction of arrivals n = 1..n_arrivals with W_n >= d (or sojourn >= d in response-time mode).
LongRunResult long_run_gg1(const Gg1Params &params, int64_t n_arrivals, uint64_t seed, int64_t batches = 100);

/// Fraction of departures from I with delay >= d over n_slots slots.
LongRunResult long_run_wireless(const WirelessParams &params, int64_t n_slots, uint64_t seed, int64_t batches = 100);

/// Fraction of jobs with response time > d among the first n_jobs departures. No splitting.
LongRunResult long_run_jsq(const JsqParams &params, int64_t n_jobs, uint64_t seed, int64_t batches = 100);

}  // namespace qtail

#endif
