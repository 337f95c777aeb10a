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

#include "qtail/commands.h"

#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>

#include "qtail/long_run.h"
#include "qtail/parallel.h"

using namespace qtail;
using nlohmann::json;

namespace {

constexpr uint64_t kTagLongRun = 0x6c6f6e67;
constexpr uint64_t kTagScaling = 0x7363616c;

std::string csv_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double resolve_eps_tot(const RunConfig &cfg) {
    if (cfg.plan.eps_tot) {
        return *cfg.plan.eps_tot;
    }
    return std::pow(10.0, -(*cfg.plan.k + 2));
}

json header(const std::string &command, const RunConfig &cfg) {
    json j;
    j["command"] = command;
    j["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
    j["config_hash"] = config_hash(cfg);
    j["model"] = model_name(cfg.model);
    j["master_seed"] = cfg.run.master_seed;
    return j;
}

std::string drift_source_name(DriftSource s) {
    return s == DriftSource::Bounded ? "bounded" : "clipped";
}

HorizonPlan gg1_plan(const RunConfig &cfg) {
    double eps_tot = resolve_eps_tot(cfg);
    if (!cfg.plan.beta) {
        return plan_gg1(cfg.gg1.params, cfg.gg1.tails, eps_tot, cfg.plan.alpha_Q);
    }
    // Supplied drift rate: the two-term bounded plan.
    HorizonPlan plan;
    plan.eps_tot = eps_tot;
    plan.delta_Q = cfg.plan.alpha_Q;
    plan.drift.beta = *cfg.plan.beta;
    plan.M = choose_horizon(plan.drift.beta, eps_tot);
    plan.eps_Q = allocate_qae_accuracy(eps_tot, plan.M);
    plan.trunc_bound = truncation_bias_bound(plan.drift.beta, plan.M);
    plan.budget_ok = plan.trunc_bound + static_cast<double>(plan.M) * plan.eps_Q <= eps_tot * (1 + 1e-12);
    return plan;
}

struct WirelessPlan {
    MaxWeightDriftSpec spec;
    std::optional<EmptyingEstimate> emptying;
    double arrivals_per_slot = 0;
    int64_t M = 0;
    double trunc_bound = 0;
};

WirelessPlan wireless_plan(const RunConfig &cfg) {
    const DriftCertificate &c = cfg.drift;
    WirelessPlan out;
    out.spec.eps_drift = c.eps;
    out.spec.nu = c.nu;
    out.spec.m_attempt = c.m;
    out.spec.p_empty = c.p;
    if (c.estimate_p) {
        out.emptying = estimate_emptying_probability(cfg.maxweight, c.weights, c.level, c.m, c.estimate_slots, cfg.run);
        if (!(out.emptying->p_hat_lower > 0)) {
            throw Error(ErrorCode::RateDegenerate, "estimated emptying probability lower bound is zero");
        }
        out.spec.p_empty = out.emptying->p_hat_lower;
    }
    out.spec = solve_eta(out.spec);
    for (int i : cfg.maxweight.subset_I) {
        out.arrivals_per_slot += cfg.maxweight.arrival_pmfs[i].max_value();
    }
    double target = resolve_eps_tot(cfg) / 2;
    if (out.arrivals_per_slot > 0) {
        out.M = choose_wireless_horizon(out.spec.prefactor_C, out.spec.eta_rate, out.arrivals_per_slot, target);
        out.trunc_bound =
            wireless_truncation_bound(out.spec.prefactor_C, out.spec.eta_rate, out.M, out.arrivals_per_slot);
    } else {
        out.M = 1;
    }
    return out;
}

json wireless_plan_json(const WirelessPlan &p, const RunConfig &cfg) {
    json j;
    j["drift"] = to_json(p.spec);
    j["arrivals_per_slot"] = p.arrivals_per_slot;
    j["M"] = p.M;
    j["trunc_bound"] = p.trunc_bound;
    j["eps_tot"] = resolve_eps_tot(cfg);
    if (p.emptying) {
        j["emptying"] = {{"p_hat_lower", p.emptying->p_hat_lower},
                         {"p_hat_pooled", p.emptying->p_hat_pooled},
                         {"entries", p.emptying->entries},
                         {"states", p.emptying->states}};
    }
    return j;
}

json jsq_plan_json(const RunConfig &cfg) {
    const JsqParams &p = cfg.jsq;
    validate(p);
    double load = clipped_load(p);
    if (!(load < 1)) {
        throw Error(ErrorCode::UnstableModel, "clipped load " + std::to_string(load) + " is not below 1");
    }
    json j;
    j["clipped_load"] = load;
    j["minorization_delta"] = minorization_delta(p.lambda, p.split_eps);
    j["arrival_cap_R_A"] = p.arrival_cap_R_A;
    if (cfg.plan.gamma) {
        ChernoffChoice c = choose_chernoff_alpha(p.lambda, *cfg.plan.gamma);
        j["chernoff"] = {{"gamma", *cfg.plan.gamma}, {"alpha", c.alpha}, {"rate", c.rate}};
    }
    return j;
}

BoundCheckReport consistency_report(const Estimate &cycle, const Estimate &long_run, int64_t customers) {
    BoundCheckReport rep;
    rep.bound_name = "ratio_consistency";
    double slack = 3 * (cycle.std_error + long_run.std_error);
    rep.points.push_back({0, cycle.value, long_run.value, slack});
    rep.violated = !intervals_overlap(cycle, long_run, 3);
    rep.details["cycle_estimate"] = cycle.value;
    rep.details["cycle_std_error"] = cycle.std_error;
    rep.details["long_run_estimate"] = long_run.value;
    rep.details["long_run_std_error"] = long_run.std_error;
    rep.details["long_run_customers"] = static_cast<double>(customers);
    return rep;
}

std::vector<std::string> default_suites(const RunConfig &cfg) {
    switch (cfg.model) {
        case ModelKind::Gg1:
            if (cfg.gg1.params.clip.enabled) {
                return {"regeneration_tail", "truncation_bias", "clipping_bias", "ratio_consistency"};
            }
            return {"regeneration_tail", "truncation_bias", "ratio_consistency"};
        case ModelKind::MaxWeight:
            return {"regeneration_tail", "ratio_consistency"};
        case ModelKind::Jsq:
            return {"arrival_cap", "nummelin", "ratio_consistency"};
    }
    return {};
}

[[noreturn]] void unknown_suite(const std::string &suite, const RunConfig &cfg) {
    throw Error(ErrorCode::InvalidConfig, "/verify/suites: suite " + suite + " is not available for model " +
                                              model_name(cfg.model));
}

std::vector<BoundCheckReport> run_verify(const RunConfig &cfg) {
    std::vector<std::string> suites = cfg.verify.suites.empty() ? default_suites(cfg) : cfg.verify.suites;
    const VerifyConfig &v = cfg.verify;
    uint64_t long_seed = derive_seed(cfg.run.master_seed, kTagLongRun);
    std::vector<BoundCheckReport> out;
    if (cfg.model == ModelKind::Gg1) {
        HorizonPlan plan = gg1_plan(cfg);
        Gg1Params params = planned_params(cfg.gg1.params, plan);
        validate(params);
        int64_t M = v.truncation_M > 0 ? v.truncation_M : plan.M;
        for (const auto &s : suites) {
            if (s == "regeneration_tail") {
                out.push_back(verify_regeneration_tail(params, 1.0, plan.drift.beta, v.n_cycles, cfg.run));
            } else if (s == "truncation_bias") {
                out.push_back(verify_truncation_bias(params, plan.drift.beta, M, v.n_cycles, cfg.run));
            } else if (s == "clipping_bias") {
                double B = v.clip_B > 0 ? v.clip_B : plan.clip_B;
                if (!(B > 0)) {
                    throw Error(ErrorCode::InvalidConfig, "/verify/clip_B: clipping_bias needs a clip level");
                }
                out.push_back(verify_clipping_bias(params, B, M, v.n_cycles, cfg.run));
            } else if (s == "ratio_consistency") {
                CycleRatio c = gg1_cycle_ratio(params, v.n_cycles, cfg.run);
                LongRunResult l = long_run_gg1(params, v.long_run_length, long_seed);
                out.push_back(consistency_report(c.tail, l.tail, l.customers));
            } else {
                unknown_suite(s, cfg);
            }
        }
    } else if (cfg.model == ModelKind::MaxWeight) {
        for (const auto &s : suites) {
            if (s == "regeneration_tail") {
                WirelessPlan plan = wireless_plan(cfg);
                out.push_back(verify_regeneration_tail(
                    cfg.maxweight, plan.spec.prefactor_C, plan.spec.eta_rate, v.n_cycles, cfg.run));
            } else if (s == "ratio_consistency") {
                CycleRatio c = wireless_cycle_ratio(cfg.maxweight, v.n_cycles, cfg.run);
                LongRunResult l = long_run_wireless(cfg.maxweight, v.long_run_length, long_seed);
                out.push_back(consistency_report(c.tail, l.tail, l.customers));
            } else if (s == "emptying") {
                const DriftCertificate &d = cfg.drift;
                EmptyingEstimate e =
                    estimate_emptying_probability(cfg.maxweight, d.weights, d.level, d.m, d.estimate_slots, cfg.run);
                BoundCheckReport rep;
                rep.bound_name = "emptying_probability";
                rep.points.push_back({static_cast<double>(d.m), e.p_hat_pooled, e.p_hat_lower, 0});
                rep.violated = !d.estimate_p && e.p_hat_pooled < d.p;
                rep.details["p_hat_lower"] = e.p_hat_lower;
                rep.details["p_hat_pooled"] = e.p_hat_pooled;
                rep.details["entries"] = static_cast<double>(e.entries);
                rep.details["states"] = static_cast<double>(e.states);
                out.push_back(rep);
            } else {
                unknown_suite(s, cfg);
            }
        }
    } else {
        jsq_plan_json(cfg);  // stability check
        for (const auto &s : suites) {
            if (s == "arrival_cap") {
                int64_t R_A = v.R_A > 0 ? v.R_A : cfg.jsq.arrival_cap_R_A;
                out.push_back(jsq_truncation_bias_estimate(
                    cfg.jsq, R_A, v.n_cycles, std::min(v.n_batches, v.n_cycles), cfg.run));
            } else if (s == "nummelin" || s == "ratio_consistency") {
                JsqCycleRatio c = jsq_cycle_ratio(cfg.jsq, v.n_cycles, cfg.run);
                if (s == "nummelin") {
                    double delta = minorization_delta(cfg.jsq.lambda, cfg.jsq.split_eps);
                    double n = static_cast<double>(c.tests_performed);
                    double freq = n > 0 ? static_cast<double>(c.tests_succeeded) / n : 0;
                    double slack = n > 0 ? 3 * std::sqrt(delta * (1 - delta) / n) : 0;
                    BoundCheckReport rep;
                    rep.bound_name = "nummelin_acceptance";
                    rep.points.push_back({0, freq, delta, slack});
                    rep.violated = !(std::abs(freq - delta) <= slack);
                    rep.details["tests_performed"] = n;
                    rep.details["tests_succeeded"] = static_cast<double>(c.tests_succeeded);
                    out.push_back(rep);
                } else {
                    LongRunResult l = long_run_jsq(cfg.jsq, v.long_run_length, long_seed);
                    out.push_back(consistency_report(c.tail, l.tail, l.customers));
                }
            } else {
                unknown_suite(s, cfg);
            }
        }
    }
    return out;
}

int64_t planned_horizon(const RunConfig &cfg) {
    if (cfg.resources.M > 0) {
        return cfg.resources.M;
    }
    switch (cfg.model) {
        case ModelKind::Gg1:
            return gg1_plan(cfg).M;
        case ModelKind::MaxWeight:
            return wireless_plan(cfg).M;
        case ModelKind::Jsq:
            return cfg.jsq.arrival_cap_R_A;
    }
    return 1;
}

CommandResult render(json j, int exit_code) {
    return {j.dump(2) + "\n", "json", exit_code};
}

}  // namespace

json qtail::to_json(const HorizonPlan &plan) {
    return {{"M", plan.M},
            {"eps_tot", plan.eps_tot},
            {"eps_Q", plan.eps_Q},
            {"delta_Q", plan.delta_Q},
            {"trunc_bound", plan.trunc_bound},
            {"clip_bound", plan.clip_bound},
            {"clip_B", plan.clip_B},
            {"eps_clip", plan.eps_clip},
            {"budget_ok", plan.budget_ok},
            {"drift",
             {{"delta", plan.drift.delta}, {"beta", plan.drift.beta}, {"source", drift_source_name(plan.drift.source)}}}};
}

json qtail::to_json(const CertificationReport &r) {
    return {{"model_id", r.model_id},
            {"mode", mode_name(r.mode)},
            {"p_hat", r.p_hat},
            {"p_std_error", r.p_std_error},
            {"p_upper", r.p_upper},
            {"E_R_hat", r.E_R_hat},
            {"E_tau_hat", r.E_tau_hat},
            {"E_tau_lower", r.E_tau_lower},
            {"budget",
             {{"trunc_term", r.budget.trunc_term},
              {"clip_term", r.budget.clip_term},
              {"statistical_term", r.budget.statistical_term},
              {"total", r.budget.total},
              {"target", r.budget.target},
              {"ok", r.budget.ok}}},
            {"certified", r.certified},
            {"k_target", r.k_target},
            {"alpha_Q", r.alpha_Q},
            {"cycles_denominator", r.cycles_denominator},
            {"cycles_numerator", r.cycles_numerator},
            {"queries_numerator", r.queries_numerator},
            {"plan", to_json(r.plan)}};
}

json qtail::to_json(const BoundCheckReport &r) {
    json points = json::array();
    for (const auto &p : r.points) {
        points.push_back({p.t, p.empirical, p.bound, p.slack});
    }
    json details = json::object();
    for (const auto &[k, v] : r.details) {
        details[k] = v;
    }
    return {{"bound_name", r.bound_name},
            {"violated", r.violated},
            {"details", details},
            {"point_fields", {"t", "empirical", "bound", "slack"}},
            {"points", points}};
}

json qtail::to_json(const ResourceReport &r) {
    return {{"seed_qubits", r.seed_qubits},     {"counter_qubits", r.counter_qubits},
            {"value_qubits_BA", r.value_qubits_BA}, {"value_qubits_BS", r.value_qubits_BS},
            {"state_qubits_BW", r.state_qubits_BW}, {"history_qubits", r.history_qubits},
            {"counter_BR", r.counter_BR},       {"output_BY", r.output_BY},
            {"ancilla", r.ancilla},             {"flag", r.flag},
            {"total_Q", r.total_Q},             {"per_step_gates", r.per_step_gates},
            {"Tf_gates", r.Tf_gates},           {"eps_Q", r.eps_Q},
            {"TQAE_gates", r.TQAE_gates}};
}

json qtail::to_json(const MaxWeightDriftSpec &s) {
    return {{"eps_drift", s.eps_drift}, {"nu", s.nu},           {"m_attempt", s.m_attempt},
            {"p_empty", s.p_empty},     {"kappa", s.kappa},     {"theta", s.theta},
            {"eta_star", s.eta_star},   {"eta_rate", s.eta_rate}, {"prefactor_C", s.prefactor_C}};
}

CommandResult qtail::run_command(const std::string &command, const RunConfig &cfg, OutputFormat format) {
    json out = header(command, cfg);

    if (command == "plan") {
        if (cfg.model == ModelKind::Gg1) {
            out["plan"] = to_json(gg1_plan(cfg));
        } else if (cfg.model == ModelKind::MaxWeight) {
            out["plan"] = wireless_plan_json(wireless_plan(cfg), cfg);
        } else {
            out["plan"] = jsq_plan_json(cfg);
        }
        return render(out, 0);
    }

    if (command == "estimate" || command == "certify") {
        bool certifying = command == "certify";
        if (certifying && !cfg.plan.k) {
            throw Error(ErrorCode::InvalidConfig, "/plan/k: certify needs the target exponent k");
        }
        if (cfg.model == ModelKind::Gg1) {
            CertificationReport rep =
                certifying ? certify(cfg.gg1, *cfg.plan.k, cfg.plan.alpha_Q, cfg.mode, cfg.run)
                           : estimate_tail_probability(cfg.gg1, resolve_eps_tot(cfg), cfg.plan.alpha_Q, cfg.mode, cfg.run);
            out["report"] = to_json(rep);
            return render(out, certifying && !rep.certified ? 2 : 0);
        }
        // MaxWeight and JSQ: classical cycle-ratio estimate; certification compares its upper confidence value.
        double z = normal_quantile(1 - cfg.plan.alpha_Q / 2);
        Estimate tail;
        json rep;
        if (cfg.model == ModelKind::MaxWeight) {
            WirelessPlan plan = wireless_plan(cfg);
            CycleRatio c = wireless_cycle_ratio(cfg.maxweight, cfg.run.n_cycles, cfg.run);
            tail = c.tail;
            rep["plan"] = wireless_plan_json(plan, cfg);
            rep["E_tau_hat"] = c.tau.mean();
            rep["cycles"] = c.cycles;
        } else {
            rep["plan"] = jsq_plan_json(cfg);
            JsqCycleRatio c = jsq_cycle_ratio(cfg.jsq, cfg.run.n_cycles, cfg.run);
            tail = c.tail;
            rep["cycles"] = c.cycles;
            rep["tests_performed"] = c.tests_performed;
            rep["tests_succeeded"] = c.tests_succeeded;
            rep["arrivals_per_cycle"] = c.arrivals_per_cycle.mean();
        }
        rep["mode"] = mode_name(EstimateMode::ClassicalMc);
        rep["p_hat"] = tail.value;
        rep["p_std_error"] = tail.std_error;
        rep["p_upper"] = tail.hi(z);
        rep["alpha_Q"] = cfg.plan.alpha_Q;
        bool certified = false;
        if (certifying) {
            certified = tail.hi(z) <= std::pow(10.0, -*cfg.plan.k);
            rep["k_target"] = *cfg.plan.k;
            rep["certified"] = certified;
        }
        out["report"] = rep;
        return render(out, certifying && !certified ? 2 : 0);
    }

    if (command == "verify") {
        std::vector<BoundCheckReport> reports = run_verify(cfg);
        int violations = 0;
        for (const auto &r : reports) {
            violations += r.violated ? 1 : 0;
        }
        int code = violations > 0 ? 2 : 0;
        if (format == OutputFormat::Csv) {
            std::ostringstream csv;
            csv << "bound_name,t,empirical,bound,slack\n";
            for (const auto &r : reports) {
                for (const auto &p : r.points) {
                    csv << r.bound_name << ',' << csv_number(p.t) << ',' << csv_number(p.empirical) << ','
                        << csv_number(p.bound) << ',' << csv_number(p.slack) << '\n';
                }
            }
            return {csv.str(), "csv", code};
        }
        json arr = json::array();
        for (const auto &r : reports) {
            arr.push_back(to_json(r));
        }
        out["reports"] = arr;
        out["violations"] = violations;
        return render(out, code);
    }

    if (command == "resources") {
        int64_t M = planned_horizon(cfg);
        int64_t m = cfg.resources.seed_bits_m > 0 ? cfg.resources.seed_bits_m : cfg.run.seed_bits_m;
        ResourceReport r = resource_report(
            M, cfg.resources.B_A, cfg.resources.B_S, cfg.resources.B_Y, m, resolve_eps_tot(cfg), cfg.plan.alpha_Q);
        out["M"] = M;
        out["resources"] = to_json(r);
        return render(out, 0);
    }

    if (command == "qae-scaling") {
        const ScalingConfig &s = cfg.scaling;
        std::vector<double> iqae_median;
        std::vector<double> iqae_success;
        std::vector<double> mc_n;
        for (size_t e = 0; e < s.eps.size(); e++) {
            uint64_t key = derive_seed(cfg.run.master_seed, kTagScaling + e);
            auto runs = parallel_map<AmplitudeEstimate>(s.runs, cfg.run.threads, [&](int64_t r) {
                return iqae_estimate_amplitude(s.a, s.eps[e], s.delta, SeedStream(key, static_cast<uint64_t>(r)),
                                               cfg.run.iqae);
            });
            std::vector<double> queries;
            int64_t ok = 0;
            for (const auto &est : runs) {
                queries.push_back(static_cast<double>(est.oracle_queries));
                ok += std::abs(est.a_hat - s.a) <= s.eps[e] ? 1 : 0;
            }
            iqae_median.push_back(median(queries));
            iqae_success.push_back(static_cast<double>(ok) / static_cast<double>(s.runs));
            mc_n.push_back(static_cast<double>(hoeffding_sample_size(s.eps[e], s.delta)));
        }
        if (format == OutputFormat::Csv) {
            std::ostringstream csv;
            csv << "eps,median_queries,method\n";
            for (size_t e = 0; e < s.eps.size(); e++) {
                csv << csv_number(s.eps[e]) << ',' << csv_number(iqae_median[e]) << ",iqae\n";
            }
            for (size_t e = 0; e < s.eps.size(); e++) {
                csv << csv_number(s.eps[e]) << ',' << csv_number(mc_n[e]) << ",mc\n";
            }
            return {csv.str(), "csv", 0};
        }
        json rows = json::array();
        for (size_t e = 0; e < s.eps.size(); e++) {
            rows.push_back({{"eps", s.eps[e]},
                            {"iqae_median_queries", iqae_median[e]},
                            {"iqae_success_fraction", iqae_success[e]},
                            {"mc_samples", mc_n[e]}});
        }
        out["a"] = s.a;
        out["delta"] = s.delta;
        out["runs"] = s.runs;
        out["rows"] = rows;
        if (s.eps.size() >= 2) {
            std::vector<double> inv;
            for (double e : s.eps) {
                inv.push_back(1 / e);
            }
            out["iqae_slope"] = log_log_slope(inv, iqae_median);
            out["mc_slope"] = log_log_slope(inv, mc_n);
        }
        return render(out, 0);
    }

    throw Error(ErrorCode::InvalidArgument, "unknown command " + command);
}
