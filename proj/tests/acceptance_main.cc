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

// Desk-scale acceptance suite. Prints one PASS/FAIL line per criterion and exits nonzero on any failure.
// Usage: qtail_acceptance [criterion ...]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "qtail/amplitude_estimation.h"
#include "qtail/commands.h"
#include "qtail/config.h"
#include "qtail/drift_planner.h"
#include "qtail/error.h"
#include "qtail/gg1_cycle.h"
#include "qtail/harness.h"
#include "qtail/jsq_cycle.h"
#include "qtail/long_run.h"
#include "qtail/parallel.h"
#include "qtail/seedstream.h"
#include "qtail/stats.h"

using namespace qtail;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char *f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

RunConfig fixture(const std::string &name) {
    return parse_run_config(load_json_file(std::string(QTAIL_CONFIG_DIR) + "/" + name));
}

Gg1Params bounded_params() {
    return fixture("bounded_gg1.json").gg1.params;
}

double bounded_beta() {
    Gg1Params p = bounded_params();
    return beta_bounded(p.arrival_dist.max_value(), p.service_dist.max_value(), p.arrival_dist.mean(),
                        p.service_dist.mean())
        .beta;
}

// Clipped M/M/1, d = 4: the cycle-ratio estimate of P(W >= 4) against 0.5 e^{-2}.
Outcome criterion1() {
    RunConfig cfg = fixture("mm1_clipped.json");
    cfg.run.threads = 1;
    auto t0 = std::chrono::steady_clock::now();
    CertificationReport r =
        estimate_tail_probability(cfg.gg1, *cfg.plan.eps_tot, cfg.plan.alpha_Q, EstimateMode::ClassicalMc, cfg.run);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    double truth = 0.5 * std::exp(-2.0);
    double err = std::abs(r.p_hat - truth);
    return {err <= 5e-3 && secs < 120 && r.cycles_numerator == 100000 && r.plan.eps_clip == 1e-6,
            fmt("p_hat=%.5f truth=%.5f |err|=%.2e B=%.3f cycles=%lld single-thread %.1fs", r.p_hat, truth, err,
                r.clip_B, static_cast<long long>(r.cycles_numerator), secs)};
}

// Bounded-increment GI/GI/1: P(tau > t) <= e^{-beta t} with binomial slack, 1e5 full cycles.
Outcome criterion2() {
    RunOptions o;
    o.master_seed = 21;
    double beta = bounded_beta();
    BoundCheckReport r = verify_regeneration_tail(bounded_params(), 1.0, beta, 100000, o);
    int violations = 0;
    for (const auto &p : r.points) {
        violations += p.empirical - p.slack > p.bound ? 1 : 0;
    }
    return {!r.violated && violations == 0 && !r.points.empty(),
            fmt("beta=%.6f grid=%zu violations=%d", beta, r.points.size(), violations)};
}

// Coupled full and truncated cycles, 1e6 cycles per horizon.
Outcome criterion3() {
    double beta = bounded_beta();
    Gg1Params p = bounded_params();
    RunOptions o;
    o.master_seed = 31;
    o.threads = 0;
    bool pass = true;
    std::string detail = fmt("beta=%.6f", beta);
    for (int64_t M : {1, 10, 40, 392}) {
        BoundCheckReport r = verify_truncation_bias(p, beta, M, 1000000, o);
        double bias = r.details.at("mean_bias");
        double bound = truncation_bias_bound(beta, M);
        bool ok = !r.violated && bias >= 0 && r.details.at("pointwise_failures") == 0;
        pass = pass && ok;
        detail += fmt(" | M=%lld bias=%.3e bound=%.3e pointwise_failures=%.0f", static_cast<long long>(M), bias,
                      bound, r.details.at("pointwise_failures"));
    }
    return {pass, detail};
}

// 1e3 random (beta, eps_tot) pairs through choose_horizon.
Outcome criterion4() {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> log_beta(std::log(1e-4), std::log(5.0));
    std::uniform_real_distribution<double> log_eps(std::log(1e-12), std::log(0.5));
    auto t0 = std::chrono::steady_clock::now();
    int failures = 0;
    int64_t max_M = 0;
    for (int i = 0; i < 1000; i++) {
        double beta = std::exp(log_beta(rng));
        double eps = std::exp(log_eps(rng));
        int64_t M = choose_horizon(beta, eps);
        max_M = std::max(max_M, M);
        if (!(std::exp(-beta * static_cast<double>(M)) <= beta * eps / 4) ||
            !(truncation_bias_bound(beta, M) <= eps / 2)) {
            failures++;
        }
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {failures == 0 && secs < 1, fmt("pairs=1000 failures=%d max_M=%lld %.3fs", failures,
                                           static_cast<long long>(max_M), secs)};
}

// IQAE contract at eps = 1e-3 and query scaling against the Hoeffding baseline.
Outcome criterion5() {
    const double a = 0.01;
    const double delta = 0.05;
    const std::vector<double> eps = {1e-2, 3e-3, 1e-3, 3e-4};
    const uint64_t master = 51;
    auto t0 = std::chrono::steady_clock::now();

    std::vector<double> iqae_median;
    int64_t ok_at_1e3 = 0;
    int64_t runs_at_1e3 = 0;
    for (size_t e = 0; e < eps.size(); e++) {
        int64_t runs = eps[e] == 1e-3 ? 200 : 60;
        uint64_t key = derive_seed(master, e);
        std::vector<double> queries;
        for (int64_t r = 0; r < runs; r++) {
            AmplitudeEstimate est = iqae_estimate_amplitude(a, eps[e], delta, SeedStream(key, r));
            queries.push_back(static_cast<double>(est.oracle_queries));
            if (eps[e] == 1e-3) {
                ok_at_1e3 += std::abs(est.a_hat - a) <= eps[e] ? 1 : 0;
                runs_at_1e3++;
            }
        }
        iqae_median.push_back(median(queries));
    }

    // The baseline actually averages N Bernoulli(a) samples; its cost is the sample count.
    std::vector<double> mc_samples;
    double mc_at_1e3 = 0;
    bool mc_contract = true;
    for (size_t e = 0; e < eps.size(); e++) {
        uint64_t key = derive_seed(master, 100 + e);
        AmplitudeEstimate mc = mc_baseline_estimate(
            [&](int64_t i) { return SeedStream(key, static_cast<uint64_t>(i)).draw_uniform().value < a ? 1.0 : 0.0; },
            eps[e], delta, 0);
        mc_samples.push_back(static_cast<double>(mc.oracle_queries));
        mc_contract = mc_contract && std::abs(mc.a_hat - a) <= eps[e];
        if (eps[e] == 1e-3) {
            mc_at_1e3 = static_cast<double>(mc.oracle_queries);
        }
    }

    std::vector<double> inv;
    for (double e : eps) {
        inv.push_back(1 / e);
    }
    double iqae_slope = log_log_slope(inv, iqae_median);
    double mc_slope = log_log_slope(inv, mc_samples);
    double frac = static_cast<double>(ok_at_1e3) / static_cast<double>(runs_at_1e3);
    double share = iqae_median[2] / mc_at_1e3;
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool pass = frac >= 0.93 && iqae_slope >= 0.8 && iqae_slope <= 1.2 && mc_slope >= 1.8 && mc_slope <= 2.2 &&
                share < 0.05 && secs < 300;
    return {pass, fmt("success@1e-3=%.3f iqae_slope=%.3f mc_slope=%.3f median_queries@1e-3=%.0f mc_N=%.0f "
                      "share=%.4f mc_within_eps=%d %.1fs",
                      frac, iqae_slope, mc_slope, iqae_median[2], mc_at_1e3, share, mc_contract ? 1 : 0, secs)};
}

// Budget audit on the tiny GI/GI/1 with m = 16: exact E[R_M] by enumeration, then 100 emulated runs.
Outcome criterion6() {
    auto t0 = std::chrono::steady_clock::now();
    RunConfig cfg = fixture("bounded_gg1.json");
    const double eps_tot = 1e-2;
    HorizonPlan plan = plan_gg1(cfg.gg1.params, cfg.gg1.tails, eps_tot, cfg.plan.alpha_Q);
    Gg1Params p = planned_params(cfg.gg1.params, plan);
    const int m = 16;
    const uint64_t oracle_seed = derive_seed(61, 0);

    double sum_R = 0;
    for (uint64_t w = 0; w < (uint64_t{1} << m); w++) {
        sum_R += static_cast<double>(evaluate_truncated_cycle(SeedStream::from_seed_bits(oracle_seed, w, m), p).R_M);
    }
    double exact_R = sum_R / 65536.0;

    OracleSpec oracle;
    oracle.evaluator = [&](SeedStream s) { return evaluate_truncated_cycle(s, p).Y; };
    oracle.seed_bits_m = m;
    oracle.master_seed = oracle_seed;
    double a_exact = exact_amplitude(oracle);
    double Md = static_cast<double>(plan.M);
    bool agree = std::abs(Md * a_exact - exact_R) <= 1e-9 * std::max(1.0, exact_R);

    const int runs = 100;
    const uint64_t shots = derive_seed(61, 1);
    int ok = 0;
    for (int r = 0; r < runs; r++) {
        AmplitudeEstimate est = iqae_estimate(oracle, plan.eps_Q, plan.delta_Q, SeedStream(shots, r));
        ok += std::abs(Md * est.a_hat - exact_R) <= Md * plan.eps_Q ? 1 : 0;
    }
    double frac = ok / static_cast<double>(runs);
    double need = 1 - plan.delta_Q - 0.03;
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {agree && frac >= need && secs < 600,
            fmt("M=%lld eps_Q=%.3e delta_Q=%.3f E[R_M]=%.6f enumeration_matches_oracle=%d success=%.2f need=%.2f "
                "%.1fs",
                static_cast<long long>(plan.M), plan.eps_Q, plan.delta_Q, exact_R, agree ? 1 : 0, frac, need, secs)};
}

// MaxWeight K = 2: regeneration tail against (C, eta) from solve_eta, cycle ratio against the long run.
Outcome criterion7() {
    auto t0 = std::chrono::steady_clock::now();
    RunConfig cfg = fixture("maxweight_k2.json");
    RunOptions o = cfg.run;
    o.threads = 0;
    const DriftCertificate &c = cfg.drift;

    // The certificate's p must not exceed what one long trajectory supports.
    EmptyingEstimate emp = estimate_emptying_probability(cfg.maxweight, c.weights, c.level, c.m, 1000000, o);
    MaxWeightDriftSpec spec;
    spec.eps_drift = c.eps;
    spec.nu = c.nu;
    spec.m_attempt = c.m;
    spec.p_empty = std::min(c.p, emp.p_hat_lower);
    spec = solve_eta(spec);

    BoundCheckReport tail = verify_regeneration_tail(cfg.maxweight, spec.prefactor_C, spec.eta_rate, 100000, o);
    CycleRatio ratio = wireless_cycle_ratio(cfg.maxweight, 100000, o);
    LongRunResult lr = long_run_wireless(cfg.maxweight, 10000000, derive_seed(o.master_seed, 7));
    bool overlap = intervals_overlap(ratio.tail, lr.tail, 3);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {!tail.violated && overlap && secs < 300,
            fmt("p=%.4f (estimated lower %.4f) eta=%.5f C=%.4f tail_violated=%d cycle=%.5f+-%.5f "
                "long_run=%.5f+-%.5f overlap=%d %.1fs",
                spec.p_empty, emp.p_hat_lower, spec.eta_rate, spec.prefactor_C, tail.violated ? 1 : 0,
                ratio.tail.value, ratio.tail.std_error, lr.tail.value, lr.tail.std_error, overlap ? 1 : 0, secs)};
}

// JSQ K = 2: splitting frequency, ratio against long run, Cauchy-Schwarz ordering per batch.
Outcome criterion8() {
    auto t0 = std::chrono::steady_clock::now();
    RunConfig cfg = fixture("jsq_k2.json");
    const JsqParams &p = cfg.jsq;
    RunOptions o = cfg.run;
    o.threads = 0;
    double load = clipped_load(p);
    double delta = minorization_delta(p.lambda, p.split_eps);

    JsqCycleRatio ratio = jsq_cycle_ratio(p, 100000, o);
    double n = static_cast<double>(ratio.tests_performed);
    double freq = static_cast<double>(ratio.tests_succeeded) / n;
    double band = 3 * std::sqrt(delta * (1 - delta) / n);
    bool freq_ok = ratio.tests_performed >= 10000 && std::abs(freq - delta) <= band;

    LongRunResult lr = long_run_jsq(p, 10000000, derive_seed(o.master_seed, 8));
    bool overlap = intervals_overlap(ratio.tail, lr.tail, 3);

    BoundCheckReport cs = jsq_truncation_bias_estimate(p, p.arrival_cap_R_A, 100000, 20, o);
    double failures = cs.details.at("ordering_failures");
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {load < 1 && freq_ok && overlap && failures == 0 && !cs.violated && secs < 600,
            fmt("load=%.3f delta=%.5f freq=%.5f band=%.5f tests=%lld cycle=%.5f+-%.5f long_run=%.5f+-%.5f "
                "overlap=%d ordering_failures=%.0f %.1fs",
                load, delta, freq, band, static_cast<long long>(ratio.tests_performed), ratio.tail.value,
                ratio.tail.std_error, lr.tail.value, lr.tail.std_error, overlap ? 1 : 0, failures, secs)};
}

Outcome criterion9() {
    ResourceReport r = resource_report(129, 4, 4, 8, 32, 1e-4, 0.05);
    return {r.state_qubits_BW == 14 && r.history_qubits == 1806 && r.counter_BR == 8,
            fmt("B_W=%lld history=%lld B_R=%lld", static_cast<long long>(r.state_qubits_BW),
                static_cast<long long>(r.history_qubits), static_cast<long long>(r.counter_BR))};
}

// Fixture reports rerun with 1, 4 and 16 threads must be byte-identical.
Outcome criterion10() {
    struct Case {
        const char *config;
        const char *command;
    };
    const std::vector<Case> cases = {
        {"mm1_clipped.json", "estimate"}, {"bounded_gg1.json", "estimate"}, {"bounded_gg1.json", "verify"},
        {"maxweight_k2.json", "verify"},  {"jsq_k2.json", "verify"},        {"unreachable.json", "certify"},
        {"plan_beta.json", "plan"},       {"qae_scaling.json", "qae-scaling"},
    };
    int mismatches = 0;
    for (const auto &c : cases) {
        std::string first;
        for (int threads : {1, 4, 16}) {
            RunConfig cfg = fixture(c.config);
            apply_overrides(cfg, std::nullopt, threads);
            std::string artifact = run_command(c.command, cfg, OutputFormat::Json).artifact;
            if (threads == 1) {
                first = artifact;
            } else if (artifact != first) {
                mismatches++;
                std::fprintf(stderr, "criterion 10: %s %s differs at threads=%d\n", c.command, c.config, threads);
            }
        }
    }
    return {mismatches == 0, fmt("fixtures=%zu thread_counts=1,4,16 mismatches=%d", cases.size(), mismatches)};
}

}  // namespace

int main(int argc, char **argv) {
    const std::vector<std::function<Outcome()>> criteria = {criterion1, criterion2, criterion3, criterion4,
                                                            criterion5, criterion6, criterion7, criterion8,
                                                            criterion9, criterion10};
    std::set<int> selected;
    for (int i = 1; i < argc; i++) {
        selected.insert(std::atoi(argv[i]));
    }
    int failed = 0;
    for (size_t i = 0; i < criteria.size(); i++) {
        int id = static_cast<int>(i) + 1;
        if (!selected.empty() && !selected.contains(id)) {
            continue;
        }
        auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = criteria[i]();
        } catch (const std::exception &e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("criterion %d: %s %s (%.1fs)\n", id, out.pass ? "PASS" : "FAIL", out.detail.c_str(), secs);
        std::fflush(stdout);
        failed += out.pass ? 0 : 1;
    }
    return failed == 0 ? 0 : 1;
}
