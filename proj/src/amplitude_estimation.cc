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

#include "qtail/amplitude_estimation.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qtail/error.h"
#include "qtail/parallel.h"
#include "qtail/stats.h"

using namespace qtail;

namespace {

constexpr uint64_t kAmplitudeMcTag = 0x616d706c;  // "ampl"

struct NextPower {
    int64_t k;
    bool upper_half_circle;
};

// Largest K = 4k + 2 with K >= min_ratio * K_old such that the scaled interval [K theta_l, K theta_u]
// (mod 1) stays inside one half circle. Falls back to the current k.
NextPower find_next_k(int64_t k, bool upper, double theta_l, double theta_u, double min_ratio) {
    double old_scaling = 4.0 * static_cast<double>(k) + 2;
    auto max_scaling = static_cast<int64_t>(1 / (2 * (theta_u - theta_l)));
    int64_t scaling = max_scaling - ((max_scaling - 2) % 4 + 4) % 4;
    while (static_cast<double>(scaling) >= min_ratio * old_scaling) {
        double s = static_cast<double>(scaling);
        double theta_min = s * theta_l - std::floor(s * theta_l);
        double theta_max = s * theta_u - std::floor(s * theta_u);
        if (theta_min <= theta_max && theta_max <= 0.5 && theta_min <= 0.5) {
            return {(scaling - 2) / 4, true};
        }
        if (theta_max >= 0.5 && theta_max >= theta_min && theta_min >= 0.5) {
            return {(scaling - 2) / 4, false};
        }
        scaling -= 4;
    }
    return {k, upper};
}

double sin2_turns(double theta) {
    double s = std::sin(2 * std::numbers::pi * theta);
    return s * s;
}

}  // namespace

double qtail::exact_amplitude(const OracleSpec &oracle) {
    if (oracle.seed_bits_m > kMaxBruteforceBits) {
        throw Error(
            ErrorCode::SeedSpaceTooLarge,
            "exact enumeration needs seed_bits_m <= " + std::to_string(kMaxBruteforceBits) + ", got " +
                std::to_string(oracle.seed_bits_m));
    }
    if (oracle.seed_bits_m < 1) {
        throw Error(ErrorCode::InvalidArgument, "seed_bits_m must be >= 1");
    }
    int64_t count = int64_t{1} << oracle.seed_bits_m;
    double total = parallel_reduce(
        count, oracle.threads, 0.0,
        [&](double &acc, int64_t omega) {
            acc += oracle.evaluator(SeedStream::from_seed_bits(
                oracle.master_seed, static_cast<uint64_t>(omega), oracle.seed_bits_m));
        },
        [](double &a, double b) { a += b; });
    return total / static_cast<double>(count);
}

McAmplitude qtail::mc_amplitude(const OracleSpec &oracle) {
    if (oracle.mc_samples < 2) {
        throw Error(ErrorCode::InvalidArgument, "high-precision MC needs mc_samples >= 2");
    }
    SeedStream picker(derive_seed(oracle.master_seed, kAmplitudeMcTag), 0);
    uint64_t mask = oracle.seed_bits_m >= 64 ? ~uint64_t{0} : (uint64_t{1} << oracle.seed_bits_m) - 1;
    Moments m = parallel_reduce(
        oracle.mc_samples, oracle.threads, Moments{},
        [&](Moments &acc, int64_t i) {
            uint64_t omega = picker.raw_at(static_cast<uint64_t>(i) + 1) & mask;
            acc.add(oracle.evaluator(SeedStream::from_seed_bits(oracle.master_seed, omega, oracle.seed_bits_m)));
        },
        [](Moments &a, const Moments &b) { a.merge(b); });
    return {m.mean(), m.std_error(), m.n};
}

double qtail::resolve_amplitude(const OracleSpec &oracle, double eps_Q) {
    if (oracle.amplitude_source == AmplitudeSource::ExactBruteforce) {
        return exact_amplitude(oracle);
    }
    McAmplitude mc = mc_amplitude(oracle);
    double n = static_cast<double>(mc.samples);
    double a = mc.value;
    double error = 3 * std::sqrt(std::max(a * (1 - a), 1 / n) / n);
    if (error > eps_Q / 10) {
        throw Error(
            ErrorCode::InsufficientPrecision,
            "MC ground truth error " + std::to_string(error) + " exceeds eps_Q / 10 = " + std::to_string(eps_Q / 10));
    }
    return a;
}

double qtail::grover_shot_probability(double a, int64_t k) {
    if (!(a >= 0 && a <= 1) || k < 0) {
        throw Error(ErrorCode::InvalidArgument, "grover_shot_probability needs a in [0, 1] and k >= 0");
    }
    double s = std::sin(static_cast<double>(2 * k + 1) * std::asin(std::sqrt(a)));
    return s * s;
}

AmplitudeEstimate qtail::iqae_estimate_amplitude(
    double a_true, double eps, double delta, SeedStream stream, const IqaeOptions &options) {
    if (!(eps > 0 && eps < 0.5) || !(delta > 0 && delta < 1)) {
        throw Error(ErrorCode::InvalidArgument, "iqae needs eps in (0, 0.5) and delta in (0, 1)");
    }
    if (!(a_true >= 0 && a_true <= 1)) {
        throw Error(ErrorCode::InvalidArgument, "amplitude must lie in [0, 1]");
    }
    if (options.shots_per_round < 1 || !(options.min_ratio > 1)) {
        throw Error(ErrorCode::InvalidArgument, "iqae needs shots_per_round >= 1 and min_ratio > 1");
    }
    const double pi = std::numbers::pi;
    const int64_t shots = options.shots_per_round;
    auto max_rounds = static_cast<int64_t>(std::log(options.min_ratio * pi / 8 / eps) / std::log(options.min_ratio)) + 1;
    double alpha_round = delta / static_cast<double>(std::max<int64_t>(max_rounds, 1));

    AmplitudeEstimate out;
    out.eps_target = eps;
    out.delta_target = delta;
    double theta_l = 0;
    double theta_u = 0.25;
    bool upper = true;
    int64_t k = 0;
    int64_t prev_k = -1;
    int64_t round_shots = 0;
    int64_t round_ones = 0;
    int64_t total_ones = 0;
    while (theta_u - theta_l > eps / pi) {
        if (out.rounds > 100000) {
            throw Error(ErrorCode::InvalidArgument, "iqae failed to converge");
        }
        out.rounds++;
        NextPower next = find_next_k(k, upper, theta_l, theta_u, options.min_ratio);
        k = next.k;
        upper = next.upper_half_circle;
        double p = grover_shot_probability(a_true, k);
        int64_t ones = 0;
        for (int64_t s = 0; s < shots; s++) {
            ones += stream.draw_uniform().value < p ? 1 : 0;
        }
        total_ones += ones;
        out.shots += shots;
        out.oracle_queries += shots * (2 * k + 1);
        // Consecutive rounds at the same power pool their shots.
        if (k == prev_k) {
            round_shots += shots;
            round_ones += ones;
        } else {
            round_shots = shots;
            round_ones = ones;
        }
        prev_k = k;
        auto [lo, hi] = clopper_pearson(round_ones, round_shots, alpha_round);
        double theta_min_i;
        double theta_max_i;
        if (upper) {
            theta_min_i = std::acos(1 - 2 * lo) / (2 * pi);
            theta_max_i = std::acos(1 - 2 * hi) / (2 * pi);
        } else {
            theta_min_i = 1 - std::acos(1 - 2 * hi) / (2 * pi);
            theta_max_i = 1 - std::acos(1 - 2 * lo) / (2 * pi);
        }
        // The chosen k keeps the scaled interval inside one period, so both ends share the period index of
        // the lower end. Taking it from the upper end breaks when K theta_u lands exactly on an integer.
        double scaling = 4.0 * static_cast<double>(k) + 2;
        double period = std::floor(scaling * theta_l);
        double new_l = (period + theta_min_i) / scaling;
        double new_u = (period + theta_max_i) / scaling;
        if (std::max(theta_l, new_l) <= std::min(theta_u, new_u)) {
            theta_l = std::max(theta_l, new_l);
            theta_u = std::min(theta_u, new_u);
        } else {
            theta_l = std::max(new_l, 0.0);
            theta_u = std::min(new_u, 0.25);
        }
    }
    out.ci_lo = sin2_turns(theta_l);
    out.ci_hi = sin2_turns(theta_u);
    if (out.ci_lo > out.ci_hi) {
        std::swap(out.ci_lo, out.ci_hi);
    }
    // With no successes in any round the likelihood peaks at the lower end.
    out.a_hat = total_ones == 0 ? out.ci_lo : 0.5 * (out.ci_lo + out.ci_hi);
    return out;
}

AmplitudeEstimate qtail::iqae_estimate(
    const OracleSpec &oracle, double eps, double delta, SeedStream stream, const IqaeOptions &options) {
    return iqae_estimate_amplitude(resolve_amplitude(oracle, eps), eps, delta, stream, options);
}

AmplitudeEstimate qtail::mc_baseline_estimate(
    const std::function<double(int64_t)> &sampler, double eps, double delta, int threads) {
    int64_t n = hoeffding_sample_size(eps, delta);
    Moments m = parallel_reduce(
        n, threads, Moments{}, [&](Moments &acc, int64_t i) { acc.add(sampler(i)); },
        [](Moments &a, const Moments &b) { a.merge(b); });
    AmplitudeEstimate out;
    out.a_hat = m.mean();
    double h = hoeffding_half_width(n, delta);
    out.ci_lo = std::max(0.0, out.a_hat - h);
    out.ci_hi = std::min(1.0, out.a_hat + h);
    out.eps_target = eps;
    out.delta_target = delta;
    out.oracle_queries = n;
    out.shots = n;
    out.rounds = 1;
    return out;
}

int64_t qtail::ceil_log2(int64_t n) {
    if (n < 1) {
        throw Error(ErrorCode::InvalidArgument, "ceil_log2 needs n >= 1");
    }
    int64_t bits = 0;
    while ((int64_t{1} << bits) < n) {
        bits++;
    }
    return bits;
}

ResourceReport qtail::resource_report(
    int64_t M, int64_t B_A, int64_t B_S, int64_t B_Y, int64_t m, double eps_tot, double alpha_Q) {
    if (M < 1 || B_A < 1 || B_S < 1 || B_Y < 1 || m < 1) {
        throw Error(ErrorCode::InvalidArgument, "resource_report needs all widths >= 1");
    }
    if (!(eps_tot > 0 && eps_tot < 1) || !(alpha_Q > 0 && alpha_Q < 1)) {
        throw Error(ErrorCode::InvalidArgument, "resource_report needs eps_tot and alpha_Q in (0, 1)");
    }
    ResourceReport r;
    r.seed_qubits = m;
    r.counter_qubits = ceil_log2(2 * M);
    r.value_qubits_BA = B_A;
    r.value_qubits_BS = B_S;
    r.state_qubits_BW = ceil_log2(M) + B_S + 2;
    r.history_qubits = M * r.state_qubits_BW;
    r.counter_BR = ceil_log2(M + 1);
    r.output_BY = B_Y;
    r.ancilla = 2 * r.state_qubits_BW;
    r.flag = 1;
    r.total_Q = r.seed_qubits + r.counter_qubits + r.value_qubits_BA + r.value_qubits_BS + r.state_qubits_BW +
                r.history_qubits + r.counter_BR + r.output_BY + r.ancilla + r.flag;
    r.per_step_gates = r.state_qubits_BW + B_A + B_S + r.counter_BR;
    r.Tf_gates = M * r.per_step_gates;
    r.eps_Q = eps_tot / (2 * static_cast<double>(M));
    r.TQAE_gates = std::ceil((1 / r.eps_Q) * std::log(1 / alpha_Q)) * static_cast<double>(r.Tf_gates);
    return r;
}
