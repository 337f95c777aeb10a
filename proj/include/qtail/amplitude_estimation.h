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

#ifndef QTAIL_AMPLITUDE_ESTIMATION_H
#define QTAIL_AMPLITUDE_ESTIMATION_H

#include <cstdint>
#include <functional>

#include "qtail/seedstream.h"

namespace qtail {

enum class AmplitudeSource { ExactBruteforce, HighPrecisionMc };

/// A classical stand-in for the state-preparation oracle: f maps a seed stream to Y in [0, 1].
struct OracleSpec {
    std::function<double(SeedStream)> evaluator;
    int seed_bits_m = 16;
    uint64_t master_seed = 0;
    AmplitudeSource amplitude_source = AmplitudeSource::ExactBruteforce;
    int64_t mc_samples = 0;  // HighPrecisionMc only
    int threads = 1;
};

struct AmplitudeEstimate {
    double a_hat = 0;
    double ci_lo = 0;
    double ci_hi = 1;
    double eps_target = 0;
    double delta_target = 0;
    int64_t oracle_queries = 0;
    int64_t shots = 0;
    int64_t rounds = 0;
};

constexpr int kMaxBruteforceBits = 24;

/// 2^-m sum over all omega of f(omega), enumerating SeedStream::from_seed_bits. Throws SeedSpaceTooLarge
/// for m > 24.
double exact_amplitude(const OracleSpec &oracle);

/// Mean of f over `mc_samples` fresh streams, with its standard error.
struct McAmplitude {
    double value = 0;
    double std_error = 0;
    int64_t samples = 0;
};
McAmplitude mc_amplitude(const OracleSpec &oracle);

/// The amplitude the emulator treats as ground truth. For HighPrecisionMc the estimate must be within
/// eps_Q / 10 at three standard errors, otherwise InsufficientPrecision.
double resolve_amplitude(const OracleSpec &oracle, double eps_Q);

/// sin^2((2k + 1) asin(sqrt(a))).
double grover_shot_probability(double a, int64_t k);

struct IqaeOptions {
    int64_t shots_per_round = 16;
    double min_ratio = 2;
};

/// Iterative amplitude estimation with Clopper-Pearson round intervals. Shots at Grover power k are
/// Bernoulli(grover_shot_probability(a_true, k)) draws from `stream`; each costs 2k + 1 oracle queries.
AmplitudeEstimate iqae_estimate_amplitude(
    double a_true, double eps, double delta, SeedStream stream, const IqaeOptions &options = {});

/// Same, with the ground truth resolved from the oracle.
AmplitudeEstimate iqae_estimate(
    const OracleSpec &oracle, double eps, double delta, SeedStream stream, const IqaeOptions &options = {});

/// Averages N = ceil(ln(2 / delta) / (2 eps^2)) samples sampler(i), i = 0..N-1, reporting a Hoeffding
/// interval. oracle_queries = shots = N.
AmplitudeEstimate mc_baseline_estimate(
    const std::function<double(int64_t)> &sampler, double eps, double delta, int threads = 1);

struct ResourceReport {
    int64_t seed_qubits = 0;
    int64_t counter_qubits = 0;
    int64_t value_qubits_BA = 0;
    int64_t value_qubits_BS = 0;
    int64_t state_qubits_BW = 0;
    int64_t history_qubits = 0;
    int64_t counter_BR = 0;
    int64_t output_BY = 0;
    int64_t ancilla = 0;
    int64_t flag = 1;
    int64_t total_Q = 0;
    int64_t per_step_gates = 0;
    int64_t Tf_gates = 0;
    double eps_Q = 0;
    double TQAE_gates = 0;
};

/// ceil(log2(n)) for n >= 1.
int64_t ceil_log2(int64_t n);

ResourceReport resource_report(int64_t M, int64_t B_A, int64_t B_S, int64_t B_Y, int64_t m, double eps_tot,
                               double alpha_Q);

}  // namespace qtail

#endif
