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

#include "qtail/harness.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "qtail/error.h"
#include "qtail/parallel.h"

using namespace qtail;

namespace {

// Seed tags: each workflow draws from its own derived key so reports stay comparable across subcommands.
constexpr uint64_t kTagCycles = 0x6379636c;   // numerator / denominator cycles
constexpr uint64_t kTagOracle = 0x6f72636c;   // emulated oracle seed space
constexpr uint64_t kTagShots = 0x73686f74;    // emulated measurement shots
constexpr uint64_t kTagRegen = 0x7265676e;    // regeneration-tail checks
constexpr uint64_t kTagTrunc = 0x7472756e;    // truncation-bias checks
constexpr uint64_t kTagClip = 0x636c6970;     // clipping-bias checks
constexpr uint64_t kTagArrCap = 0x61636170;   // JSQ arrival-cap checks
constexpr uint64_t kTagRatio = 0x7261746f;    // cycle-ratio estimates
constexpr uint64_t kTagEmpty = 0x656d7074;    // emptying-probability trajectory

SeedStream cycle_stream(const RunOptions &options, uint64_t tag, int64_t i) {
    return fork_cycle(derive_seed(options.master_seed, tag), static_cast<uint64_t>(i));
}

void require_cycles(int64_t n) {
    if (n < 1) {
        throw Error(ErrorCode::InvalidArgument, "need at least one cycle");
    }
}

struct SharedCycleAcc {
    Moments R;
    Moments tau;
    RatioMoments ratio;

    void merge(const SharedCycleAcc &o) {
        R.merge(o.R);
        tau.merge(o.tau);
        ratio.merge(o.ratio);
    }
};

}  // namespace

std::string qtail::mode_name(EstimateMode mode) {
    return mode == EstimateMode::EmulatedQae ? "emulated-qae" : "classical-mc";
}

Gg1Params qtail::planned_params(const Gg1Params &params, const HorizonPlan &plan) {
    Gg1Params out = params;
    out.horizon_M = plan.M;
    if (plan.clip_B > 0) {
        out.clip = ClipSpec::at(plan.clip_B);
    }
    return out;
}

CertificationReport qtail::estimate_tail_probability(
    const Gg1Model &model, double eps_tot, double alpha_Q, EstimateMode mode, const RunOptions &options) {
    require_cycles(options.n_cycles);
    CertificationReport rep;
    rep.model_id = model.model_id;
    rep.mode = mode;
    rep.alpha_Q = alpha_Q;
    rep.plan = plan_gg1(model.params, model.tails, eps_tot, alpha_Q);
    rep.clip_B = rep.plan.clip_B;
    const Gg1Params params = planned_params(model.params, rep.plan);
    validate(params);
    const double z = normal_quantile(1 - alpha_Q / 2);
    const double M = static_cast<double>(rep.plan.M);

    // Denominator cycles; in classical mode the truncated prefixes of the same cycles give the numerator.
    SharedCycleAcc acc = parallel_reduce(
        options.n_cycles, options.threads, SharedCycleAcc{},
        [&](SharedCycleAcc &a, int64_t i) {
            SeedStream s = cycle_stream(options, kTagCycles, i);
            CycleStats full = evaluate_full_cycle(s, params, options.safety_cap);
            CycleStats trunc = evaluate_truncated_cycle(s, params);
            a.R.add(static_cast<double>(trunc.R_M));
            a.tau.add(static_cast<double>(full.tau_M));
            a.ratio.add(static_cast<double>(trunc.R_M), static_cast<double>(full.tau_M));
        },
        [](SharedCycleAcc &a, const SharedCycleAcc &b) { a.merge(b); });
    rep.cycles_denominator = acc.tau.n;
    rep.E_tau_hat = acc.tau.mean();
    rep.E_tau_lower = std::max(1.0, rep.E_tau_hat - z * acc.tau.std_error());

    double statistical = 0;
    if (mode == EstimateMode::ClassicalMc) {
        rep.cycles_numerator = acc.R.n;
        rep.queries_numerator = acc.R.n;
        rep.E_R_hat = acc.R.mean();
        statistical = z * acc.R.std_error();
        rep.p_hat = acc.ratio.ratio();
        rep.p_std_error = acc.ratio.std_error();
    } else {
        OracleSpec oracle;
        oracle.evaluator = [params](SeedStream s) { return evaluate_truncated_cycle(s, params).Y; };
        oracle.seed_bits_m = options.seed_bits_m;
        oracle.master_seed = derive_seed(options.master_seed, kTagOracle);
        oracle.amplitude_source = options.seed_bits_m <= kMaxBruteforceBits ? AmplitudeSource::ExactBruteforce
                                                                            : AmplitudeSource::HighPrecisionMc;
        oracle.mc_samples = options.mc_amplitude_samples;
        oracle.threads = options.threads;
        AmplitudeEstimate est = iqae_estimate(
            oracle, rep.plan.eps_Q, alpha_Q, SeedStream(derive_seed(options.master_seed, kTagShots), 0), options.iqae);
        rep.queries_numerator = est.oracle_queries;
        rep.E_R_hat = M * est.a_hat;
        statistical = M * rep.plan.eps_Q;
        rep.p_hat = rep.E_R_hat / rep.E_tau_hat;
        rep.p_std_error = rep.E_R_hat * acc.tau.std_error() / (rep.E_tau_hat * rep.E_tau_hat);
    }

    rep.budget.trunc_term = rep.plan.trunc_bound;
    rep.budget.clip_term = rep.plan.clip_bound;
    rep.budget.statistical_term = statistical;
    rep.budget.total = rep.budget.trunc_term + rep.budget.clip_term + rep.budget.statistical_term;
    rep.budget.target = eps_tot;
    rep.budget.ok = rep.budget.total <= eps_tot;
    rep.p_upper = (rep.E_R_hat + rep.budget.total) / rep.E_tau_lower;
    return rep;
}

CertificationReport qtail::certify(
    const Gg1Model &model, int k, double alpha_Q, EstimateMode mode, const RunOptions &options) {
    if (k < 1) {
        throw Error(ErrorCode::InvalidArgument, "certification target k must be >= 1");
    }
    double eps_tot = std::pow(10.0, -(k + 2));
    CertificationReport rep = estimate_tail_probability(model, eps_tot, alpha_Q, mode, options);
    rep.k_target = k;
    rep.certified = rep.p_upper <= std::pow(10.0, -k);
    return rep;
}

BoundCheckReport qtail::check_survival_bound(
    const std::string &name, const std::vector<int64_t> &taus, double C, double r, double alpha) {
    if (taus.empty()) {
        throw Error(ErrorCode::InvalidArgument, "survival check needs samples");
    }
    BoundCheckReport rep;
    rep.bound_name = name;
    int64_t n = static_cast<int64_t>(taus.size());
    int64_t max_tau = *std::max_element(taus.begin(), taus.end());
    std::vector<int64_t> histogram(static_cast<size_t>(max_tau) + 1, 0);
    for (int64_t t : taus) {
        histogram[t]++;
    }
    double alpha_point = alpha / static_cast<double>(std::max<int64_t>(max_tau, 1));
    int64_t above = n - histogram[0];  // #{tau > t} as t sweeps upward
    for (int64_t t = 1; t <= max_tau; t++) {
        above -= histogram[t];
        double empirical = static_cast<double>(above) / static_cast<double>(n);
        double lower = binomial_lower(above, n, alpha_point);
        BoundPoint p{static_cast<double>(t), empirical, C * std::exp(-r * static_cast<double>(t)), empirical - lower};
        if (p.empirical - p.slack > p.bound) {
            rep.violated = true;
        }
        rep.points.push_back(p);
    }
    rep.details["n_cycles"] = static_cast<double>(n);
    rep.details["max_tau"] = static_cast<double>(max_tau);
    rep.details["prefactor"] = C;
    rep.details["rate"] = r;
    return rep;
}

BoundCheckReport qtail::verify_regeneration_tail(
    const Gg1Params &params, double C, double r, int64_t n_cycles, const RunOptions &options) {
    validate(params);
    require_cycles(n_cycles);
    auto taus = parallel_map<int64_t>(n_cycles, options.threads, [&](int64_t i) {
        return evaluate_full_cycle(cycle_stream(options, kTagRegen, i), params, options.safety_cap).tau_M;
    });
    return check_survival_bound("gg1_regeneration_tail", taus, C, r, options.bound_alpha);
}

BoundCheckReport qtail::verify_regeneration_tail(
    const WirelessParams &params, double C, double r, int64_t n_cycles, const RunOptions &options) {
    validate(params);
    require_cycles(n_cycles);
    auto taus = parallel_map<int64_t>(n_cycles, options.threads, [&](int64_t i) {
        return evaluate_full_wireless_cycle(cycle_stream(options, kTagRegen, i), params, options.safety_cap).T_M;
    });
    return check_survival_bound("wireless_regeneration_tail", taus, C, r, options.bound_alpha);
}

BoundCheckReport qtail::verify_truncation_bias(
    const Gg1Params &params, double beta, int64_t M, int64_t n_cycles, const RunOptions &options) {
    validate(params);
    require_cycles(n_cycles);
    Gg1Params truncated = params;
    truncated.horizon_M = M;
    struct Acc {
        Moments diff;
        int64_t pointwise_failures = 0;
        int64_t max_tau = 0;
        int64_t truncated_cycles = 0;
    };
    Acc acc = parallel_reduce(
        n_cycles, options.threads, Acc{},
        [&](Acc &a, int64_t i) {
            SeedStream s = cycle_stream(options, kTagTrunc, i);
            CycleStats full = evaluate_full_cycle(s, params, options.safety_cap);
            CycleStats tr = evaluate_truncated_cycle(s, truncated);
            int64_t d = full.R_M - tr.R_M;
            if (d < 0 || (full.tau_M <= M && d != 0)) {
                a.pointwise_failures++;
            }
            a.diff.add(static_cast<double>(d));
            a.max_tau = std::max(a.max_tau, full.tau_M);
            a.truncated_cycles += full.tau_M > M ? 1 : 0;
        },
        [](Acc &a, const Acc &b) {
            a.diff.merge(b.diff);
            a.pointwise_failures += b.pointwise_failures;
            a.max_tau = std::max(a.max_tau, b.max_tau);
            a.truncated_cycles += b.truncated_cycles;
        });
    BoundCheckReport rep;
    rep.bound_name = "truncation_bias";
    double z = normal_quantile(1 - options.bound_alpha);
    BoundPoint p{static_cast<double>(M), acc.diff.mean(), truncation_bias_bound(beta, M), z * acc.diff.std_error()};
    rep.points.push_back(p);
    rep.violated = acc.pointwise_failures > 0 || p.empirical < 0 || p.empirical - p.slack > p.bound;
    rep.details["mean_bias"] = acc.diff.mean();
    rep.details["std_error"] = acc.diff.std_error();
    rep.details["pointwise_failures"] = static_cast<double>(acc.pointwise_failures);
    rep.details["max_tau"] = static_cast<double>(acc.max_tau);
    rep.details["truncated_cycles"] = static_cast<double>(acc.truncated_cycles);
    rep.details["n_cycles"] = static_cast<double>(n_cycles);
    return rep;
}

BoundCheckReport qtail::verify_clipping_bias(
    const Gg1Params &params, double B, int64_t M, int64_t n_cycles, const RunOptions &options) {
    validate(params);
    require_cycles(n_cycles);
    Gg1Params unclipped = params;
    unclipped.clip = ClipSpec::none();
    unclipped.horizon_M = M;
    Gg1Params clipped = unclipped;
    clipped.clip = ClipSpec::at(B);
    struct Acc {
        Moments diff;
        int64_t divergent = 0;
        int64_t engaged = 0;
        int64_t unexplained = 0;
    };
    Acc acc = parallel_reduce(
        n_cycles, options.threads, Acc{},
        [&](Acc &a, int64_t i) {
            SeedStream s = cycle_stream(options, kTagClip, i);
            CycleStats u = evaluate_truncated_cycle(s, unclipped);
            CycleStats c = evaluate_truncated_cycle(s, clipped);
            int64_t d = u.R_M - c.R_M;
            a.diff.add(static_cast<double>(d));
            a.engaged += c.clip_engaged ? 1 : 0;
            if (d != 0) {
                a.divergent++;
                a.unexplained += c.clip_engaged ? 0 : 1;
            }
        },
        [](Acc &a, const Acc &b) {
            a.diff.merge(b.diff);
            a.divergent += b.divergent;
            a.engaged += b.engaged;
            a.unexplained += b.unexplained;
        });
    BoundCheckReport rep;
    rep.bound_name = "clipping_bias";
    double z = normal_quantile(1 - options.bound_alpha / 2);
    double bound = clipping_bias_bound(M, params.arrival_dist.exceed_prob(B), params.service_dist.exceed_prob(B));
    BoundPoint p{B, std::abs(acc.diff.mean()), bound, z * acc.diff.std_error()};
    rep.points.push_back(p);
    rep.violated = acc.unexplained > 0 || p.empirical - p.slack > p.bound;
    rep.details["mean_difference"] = acc.diff.mean();
    rep.details["std_error"] = acc.diff.std_error();
    rep.details["divergent_cycles"] = static_cast<double>(acc.divergent);
    rep.details["clip_engaged_cycles"] = static_cast<double>(acc.engaged);
    rep.details["unexplained_divergences"] = static_cast<double>(acc.unexplained);
    rep.details["n_cycles"] = static_cast<double>(n_cycles);
    return rep;
}

BoundCheckReport qtail::jsq_truncation_bias_estimate(
    const JsqParams &params, int64_t R_A, int64_t n_cycles, int64_t n_batches, const RunOptions &options) {
    validate(params);
    require_cycles(n_cycles);
    if (n_batches < 1 || n_batches > n_cycles) {
        throw Error(ErrorCode::InvalidArgument, "n_batches must lie in [1, n_cycles]");
    }
    JsqParams capped = params;
    capped.arrival_cap_R_A = R_A;
    struct Cycle {
        int64_t n_arrivals = 0;
        int64_t gap = 0;
    };
    auto cycles = parallel_map<Cycle>(n_cycles, options.threads, [&](int64_t i) {
        SeedStream s = cycle_stream(options, kTagArrCap, i);
        JsqCycleStats full = evaluate_full_jsq_cycle(s, params, options.safety_cap);
        JsqCycleStats tr = evaluate_jsq_cycle(s, capped);
        return Cycle{full.N_A_cycle, full.J_RA - tr.J_RA};
    });

    BoundCheckReport rep;
    rep.bound_name = "jsq_arrival_cap_bias";
    int64_t per_batch = n_cycles / n_batches;
    int64_t ordering_failures = 0;
    int64_t pointwise_failures = 0;
    Moments excess;  // gap - N 1{N > R_A}, never positive pathwise
    Moments direct_all;
    Moments gap_all;
    for (int64_t b = 0; b < n_batches; b++) {
        int64_t lo = b * per_batch;
        int64_t hi = b + 1 == n_batches ? n_cycles : lo + per_batch;
        double sum_sq = 0;
        double sum_direct = 0;
        int64_t exceed = 0;
        for (int64_t i = lo; i < hi; i++) {
            const Cycle &c = cycles[i];
            double n = static_cast<double>(c.n_arrivals);
            double direct = c.n_arrivals > R_A ? n : 0;
            sum_sq += n * n;
            sum_direct += direct;
            exceed += c.n_arrivals > R_A ? 1 : 0;
            if (c.gap < 0 || static_cast<double>(c.gap) > direct) {
                pointwise_failures++;
            }
            excess.add(static_cast<double>(c.gap) - direct);
            direct_all.add(direct);
            gap_all.add(static_cast<double>(c.gap));
        }
        double count = static_cast<double>(hi - lo);
        double direct_b = sum_direct / count;
        double surrogate_b = std::sqrt((sum_sq / count) * (static_cast<double>(exceed) / count));
        if (direct_b > surrogate_b * (1 + 1e-12)) {
            ordering_failures++;
        }
        rep.points.push_back({static_cast<double>(b), direct_b, surrogate_b, 0});
    }
    double z = normal_quantile(1 - options.bound_alpha);
    double gap_slack = z * excess.std_error();
    bool gap_ok = gap_all.mean() <= direct_all.mean() + gap_slack;
    rep.violated = ordering_failures > 0 || pointwise_failures > 0 || !gap_ok;
    rep.details["R_A"] = static_cast<double>(R_A);
    rep.details["direct"] = direct_all.mean();
    rep.details["gap"] = gap_all.mean();
    rep.details["gap_slack"] = gap_slack;
    rep.details["ordering_failures"] = static_cast<double>(ordering_failures);
    rep.details["pointwise_failures"] = static_cast<double>(pointwise_failures);
    rep.details["n_cycles"] = static_cast<double>(n_cycles);
    rep.details["n_batches"] = static_cast<double>(n_batches);
    return rep;
}

CycleRatio qtail::wireless_cycle_ratio(const WirelessParams &params, int64_t n_cycles, const RunOptions &options) {
    validate(params);
    require_cycles(n_cycles);
    struct Acc {
        RatioMoments ratio;
        Moments tau;
    };
    Acc acc = parallel_reduce(
        n_cycles, options.threads, Acc{},
        [&](Acc &a, int64_t i) {
            auto st = evaluate_full_wireless_cycle(cycle_stream(options, kTagRatio, i), params, options.safety_cap);
            a.ratio.add(static_cast<double>(st.J_M), static_cast<double>(st.N_M));
            a.tau.add(static_cast<double>(st.T_M));
        },
        [](Acc &a, const Acc &b) {
            a.ratio.merge(b.ratio);
            a.tau.merge(b.tau);
        });
    return {{acc.ratio.ratio(), acc.ratio.std_error()}, acc.tau, n_cycles};
}

JsqCycleRatio qtail::jsq_cycle_ratio(const JsqParams &params, int64_t n_cycles, const RunOptions &options) {
    validate(params);
    require_cycles(n_cycles);
    struct Acc {
        RatioMoments ratio;
        Moments arrivals;
        int64_t tests = 0;
        int64_t successes = 0;
    };
    Acc acc = parallel_reduce(
        n_cycles, options.threads, Acc{},
        [&](Acc &a, int64_t i) {
            auto st = evaluate_full_jsq_cycle(cycle_stream(options, kTagRatio, i), params, options.safety_cap);
            a.ratio.add(static_cast<double>(st.J_RA), static_cast<double>(st.N_A_cycle));
            a.arrivals.add(static_cast<double>(st.N_A_cycle));
            a.tests += st.tests_performed;
            a.successes += st.tests_succeeded;
        },
        [](Acc &a, const Acc &b) {
            a.ratio.merge(b.ratio);
            a.arrivals.merge(b.arrivals);
            a.tests += b.tests;
            a.successes += b.successes;
        });
    JsqCycleRatio out;
    out.tail = {acc.ratio.ratio(), acc.ratio.std_error()};
    out.cycles = n_cycles;
    out.tests_performed = acc.tests;
    out.tests_succeeded = acc.successes;
    out.arrivals_per_cycle = acc.arrivals;
    return out;
}

CycleRatio qtail::gg1_cycle_ratio(const Gg1Params &params, int64_t n_cycles, const RunOptions &options) {
    validate(params);
    require_cycles(n_cycles);
    struct Acc {
        RatioMoments ratio;
        Moments tau;
    };
    Acc acc = parallel_reduce(
        n_cycles, options.threads, Acc{},
        [&](Acc &a, int64_t i) {
            auto st = evaluate_full_cycle(cycle_stream(options, kTagRatio, i), params, options.safety_cap);
            a.ratio.add(static_cast<double>(st.R_M), static_cast<double>(st.tau_M));
            a.tau.add(static_cast<double>(st.tau_M));
        },
        [](Acc &a, const Acc &b) {
            a.ratio.merge(b.ratio);
            a.tau.merge(b.tau);
        });
    return {{acc.ratio.ratio(), acc.ratio.std_error()}, acc.tau, n_cycles};
}

EmptyingEstimate qtail::estimate_emptying_probability(const WirelessParams &params, const std::vector<double> &weights,
                                                      double level, int64_t m_attempt, int64_t n_slots,
                                                      const RunOptions &options, double alpha) {
    validate(params);
    const int K = params.K();
    if (static_cast<int>(weights.size()) != K) {
        throw Error(ErrorCode::InvalidArgument, "need one drift-set weight per queue");
    }
    if (m_attempt < 1 || n_slots < 1) {
        throw Error(ErrorCode::InvalidArgument, "m_attempt and n_slots must be >= 1");
    }
    SeedStream stream(derive_seed(options.master_seed, kTagEmpty), 0);
    std::vector<int64_t> q(K, 0);
    std::vector<int64_t> a(K);
    std::vector<int64_t> mu(K);
    std::map<std::vector<int64_t>, int64_t> state_ids;
    std::vector<std::pair<int64_t, int64_t>> entries;  // (slot, state id)
    int64_t total_slots = n_slots + m_attempt;
    std::vector<char> empty_after(static_cast<size_t>(total_slots), 0);
    for (int64_t t = 0; t < total_slots; t++) {
        if (t < n_slots) {
            double L = 0;
            for (int i = 0; i < K; i++) {
                L += weights[i] * static_cast<double>(q[i]);
            }
            if (L <= level) {
                auto [it, inserted] = state_ids.emplace(q, static_cast<int64_t>(state_ids.size()));
                entries.emplace_back(t, it->second);
            }
        }
        for (int i = 0; i < K; i++) {
            a[i] = static_cast<int64_t>(params.arrival_pmfs[i].quantile(stream.draw_uniform().value));
        }
        for (int i = 0; i < K; i++) {
            mu[i] = static_cast<int64_t>(params.channel_pmfs[i].quantile(stream.draw_uniform().value));
        }
        int s = maxweight_schedule(q, mu);
        q[s] -= std::min(q[s], mu[s]);
        bool all_empty = true;
        for (int i = 0; i < K; i++) {
            q[i] += a[i];
            all_empty &= q[i] == 0;
        }
        empty_after[t] = all_empty ? 1 : 0;
    }
    if (entries.size() < 100) {
        throw Error(
            ErrorCode::InsufficientVisits,
            "only " + std::to_string(entries.size()) + " entries into the drift set (need 100)");
    }
    // next_empty[t]: first slot s >= t whose end state is empty.
    std::vector<int64_t> next_empty(static_cast<size_t>(total_slots) + 1, total_slots + m_attempt + 1);
    for (int64_t t = total_slots - 1; t >= 0; t--) {
        next_empty[t] = empty_after[t] ? t : next_empty[t + 1];
    }
    std::vector<int64_t> visits(state_ids.size(), 0);
    std::vector<int64_t> successes(state_ids.size(), 0);
    for (auto [t, id] : entries) {
        visits[id]++;
        successes[id] += next_empty[t] <= t + m_attempt - 1 ? 1 : 0;
    }
    EmptyingEstimate out;
    out.entries = static_cast<int64_t>(entries.size());
    out.states = static_cast<int64_t>(state_ids.size());
    double alpha_state = alpha / static_cast<double>(out.states);
    out.p_hat_lower = 1;
    int64_t total_success = 0;
    for (size_t id = 0; id < visits.size(); id++) {
        out.p_hat_lower = std::min(out.p_hat_lower, binomial_lower(successes[id], visits[id], alpha_state));
        total_success += successes[id];
    }
    out.p_hat_pooled = static_cast<double>(total_success) / static_cast<double>(out.entries);
    return out;
}

TailFit qtail::fit_log_linear_tail(const std::vector<int64_t> &samples, int64_t min_count) {
    TailFit fit;
    if (samples.empty()) {
        return fit;
    }
    int64_t max_v = *std::max_element(samples.begin(), samples.end());
    std::vector<int64_t> histogram(static_cast<size_t>(max_v) + 1, 0);
    for (int64_t v : samples) {
        histogram[std::max<int64_t>(v, 0)]++;
    }
    double n = static_cast<double>(samples.size());
    int64_t above = static_cast<int64_t>(samples.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int64_t t = 0; t <= max_v; t++) {
        above -= histogram[t];
        if (above < min_count) {
            break;
        }
        double x = static_cast<double>(t);
        double y = std::log(static_cast<double>(above) / n);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        fit.points++;
    }
    if (fit.points >= 2) {
        double p = static_cast<double>(fit.points);
        double slope = (p * sxy - sx * sy) / (p * sxx - sx * sx);
        fit.gamma = -slope;
        fit.log_c0 = (sy - slope * sx) / p;
    }
    return fit;
}
