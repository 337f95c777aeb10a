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

#ifndef QTAIL_HARNESS_H
#define QTAIL_HARNESS_H

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qtail/amplitude_estimation.h"
#include "qtail/drift_planner.h"
#include "qtail/gg1_cycle.h"
#include "qtail/jsq_cycle.h"
#include "qtail/maxweight_cycle.h"
#include "qtail/stats.h"

namespace qtail {

enum class EstimateMode { EmulatedQae, ClassicalMc };

/// Seeds, sizes and parallelism shared by every workflow. Results never depend on `threads`.
struct RunOptions {
    uint64_t master_seed = 0;
    int threads = 1;
    int64_t n_cycles = 100000;          // classical numerator and denominator cycles
    int64_t safety_cap = int64_t{1} << 24;
    int seed_bits_m = 16;               // emulated oracle width
    int64_t mc_amplitude_samples = 0;   // ground truth by MC when seed_bits_m > 24
    IqaeOptions iqae;
    double bound_alpha = 1e-3;          // confidence level of bound-check slack
};

struct Gg1Model {
    std::string model_id = "gg1";
    Gg1Params params;
    Gg1Tails tails;
};

struct ErrorBudget {
    double trunc_term = 0;
    double clip_term = 0;
    double statistical_term = 0;
    double total = 0;
    double target = 0;
    bool ok = false;
};

struct CertificationReport {
    std::string model_id;
    EstimateMode mode = EstimateMode::ClassicalMc;
    double p_hat = 0;
    double p_std_error = 0;
    double p_upper = 0;  // (E_R_hat + budget.total) / E_tau_lower
    double E_R_hat = 0;
    double E_tau_hat = 0;
    double E_tau_lower = 0;
    ErrorBudget budget;
    bool certified = false;
    int k_target = 0;
    double alpha_Q = 0;
    int64_t cycles_denominator = 0;
    int64_t cycles_numerator = 0;
    int64_t queries_numerator = 0;
    HorizonPlan plan;
    double clip_B = 0;
};

struct BoundPoint {
    double t = 0;
    double empirical = 0;
    double bound = 0;
    double slack = 0;
};

struct BoundCheckReport {
    std::string bound_name;
    std::vector<BoundPoint> points;
    bool violated = false;
    std::map<std::string, double> details;
};

/// Applies a plan to the model parameters: horizon M and, when the plan clips, the level B.
Gg1Params planned_params(const Gg1Params &params, const HorizonPlan &plan);

/// Ratio estimate of the delay tail. The numerator E[R_M] comes from truncated cycles (classical) or from
/// the emulated amplitude estimator at eps_Q; the denominator E[tau] from untruncated cycles on the same
/// seeds. The budget adds truncation, clipping and statistical terms.
CertificationReport estimate_tail_probability(const Gg1Model &model, double eps_tot, double alpha_Q,
                                              EstimateMode mode, const RunOptions &options);

/// estimate_tail_probability at eps_tot = 10^-(k+2); certified iff p_upper <= 10^-k.
CertificationReport certify(const Gg1Model &model, int k, double alpha_Q, EstimateMode mode,
                            const RunOptions &options);

/// Checks an empirical survival curve P(tau > t), t = 1..max tau, against C exp(-r t). Slack at each t is the
/// distance from the empirical value to its one-sided Clopper-Pearson lower limit at alpha / (grid size);
/// violated iff some lower limit exceeds the bound.
BoundCheckReport check_survival_bound(const std::string &name, const std::vector<int64_t> &taus, double C, double r,
                                      double alpha);

/// Regeneration-time tail of the GI/GI/1 cycle against C exp(-r t) from n_cycles full cycles.
BoundCheckReport verify_regeneration_tail(const Gg1Params &params, double C, double r, int64_t n_cycles,
                                          const RunOptions &options);

/// Regeneration-time tail of the wireless cycle (slots) against C exp(-r t).
BoundCheckReport verify_regeneration_tail(const WirelessParams &params, double C, double r, int64_t n_cycles,
                                          const RunOptions &options);

/// Coupled full and truncated cycles: 0 <= mean(R - R_M) <= e^{-beta M} / (1 - e^{-beta}) + slack and R >= R_M on
/// every seed. details: mean_bias, std_error, pointwise_failures, max_tau, truncated_cycles.
BoundCheckReport verify_truncation_bias(const Gg1Params &params, double beta, int64_t M, int64_t n_cycles,
                                        const RunOptions &options);

/// Clipped and unclipped recursions on shared draws: |mean(R_M - R_M^(B))| <= M^2 (P(A > B) + P(S > B)) + slack.
BoundCheckReport verify_clipping_bias(const Gg1Params &params, double B, int64_t M, int64_t n_cycles,
                                      const RunOptions &options);

/// Arrival-cap bias of the JSQ cycle. For each of n_batches batches compares the direct estimate of
/// E[N_A 1{N_A > R_A}] with the Cauchy-Schwarz surrogate sqrt(E[N_A^2] P(N_A > R_A)); overall checks that the
/// coupled gap E[J] - E[J_RA] stays below the direct term plus slack.
BoundCheckReport jsq_truncation_bias_estimate(const JsqParams &params, int64_t R_A, int64_t n_cycles,
                                              int64_t n_batches, const RunOptions &options);

/// Cycle-ratio delay tail of the wireless model from full cycles: sum J / sum N.
struct CycleRatio {
    Estimate tail;
    Moments tau;
    int64_t cycles = 0;
};
CycleRatio wireless_cycle_ratio(const WirelessParams &params, int64_t n_cycles, const RunOptions &options);

/// Cycle-ratio response tail of the JSQ model from full Nummelin cycles, with splitting statistics.
struct JsqCycleRatio {
    Estimate tail;
    int64_t cycles = 0;
    int64_t tests_performed = 0;
    int64_t tests_succeeded = 0;
    Moments arrivals_per_cycle;
};
JsqCycleRatio jsq_cycle_ratio(const JsqParams &params, int64_t n_cycles, const RunOptions &options);

/// Cycle-ratio delay tail of the GI/GI/1 model from full cycles.
CycleRatio gg1_cycle_ratio(const Gg1Params &params, int64_t n_cycles, const RunOptions &options);

/// Lower confidence bound on min over entry states q in C = {q : sum_i w_i q_i <= level} of
/// P(all queues empty at the end of one of the next m slots | q). Every slot that starts in C begins an attempt.
/// Throws InsufficientVisits for fewer than 100 entries.
struct EmptyingEstimate {
    double p_hat_lower = 0;
    double p_hat_pooled = 0;
    int64_t entries = 0;
    int64_t states = 0;
};
EmptyingEstimate estimate_emptying_probability(const WirelessParams &params, const std::vector<double> &weights,
                                               double level, int64_t m_attempt, int64_t n_slots,
                                               const RunOptions &options, double alpha = 1e-3);

/// Least-squares fit of log P(N > n) = log c0 - gamma n over the points with at least `min_count` exceedances.
struct TailFit {
    double log_c0 = 0;
    double gamma = 0;
    int64_t points = 0;
};
TailFit fit_log_linear_tail(const std::vector<int64_t> &samples, int64_t min_count = 30);

std::string mode_name(EstimateMode mode);

}  // namespace qtail

#endif
