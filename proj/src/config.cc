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

#include "qtail/config.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>

using namespace qtail;
using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string &ptr, const std::string &message) {
    throw Error(ErrorCode::InvalidConfig, (ptr.empty() ? "/" : ptr) + ": " + message);
}

std::string child(const std::string &ptr, const std::string &key) {
    return ptr + "/" + key;
}

void require_object(const json &j, const std::string &ptr) {
    if (!j.is_object()) {
        fail(ptr, "must be an object");
    }
}

void check_keys(const json &obj, const std::string &ptr, std::initializer_list<const char *> allowed) {
    require_object(obj, ptr);
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char *a : allowed) {
            known |= it.key() == a;
        }
        if (!known) {
            fail(child(ptr, it.key()), "unknown property");
        }
    }
}

const json &require(const json &obj, const std::string &ptr, const char *key) {
    if (!obj.contains(key)) {
        fail(child(ptr, key), "is required");
    }
    return obj.at(key);
}

double as_number(const json &j, const std::string &ptr) {
    if (!j.is_number()) {
        fail(ptr, "must be a number");
    }
    double v = j.get<double>();
    if (!std::isfinite(v)) {
        fail(ptr, "must be finite");
    }
    return v;
}

int64_t as_integer(const json &j, const std::string &ptr) {
    if (!j.is_number_integer()) {
        fail(ptr, "must be an integer");
    }
    if (j.is_number_unsigned() && j.get<uint64_t>() > static_cast<uint64_t>(INT64_MAX)) {
        fail(ptr, "is too large");
    }
    return j.get<int64_t>();
}

double number(const json &obj, const std::string &ptr, const char *key, std::optional<double> fallback = {}) {
    if (!obj.contains(key)) {
        if (fallback) {
            return *fallback;
        }
        fail(child(ptr, key), "is required");
    }
    return as_number(obj.at(key), child(ptr, key));
}

int64_t integer(const json &obj, const std::string &ptr, const char *key, std::optional<int64_t> fallback = {}) {
    if (!obj.contains(key)) {
        if (fallback) {
            return *fallback;
        }
        fail(child(ptr, key), "is required");
    }
    return as_integer(obj.at(key), child(ptr, key));
}

double positive(const json &obj, const std::string &ptr, const char *key, std::optional<double> fallback = {}) {
    double v = number(obj, ptr, key, fallback);
    if (!(v > 0)) {
        fail(child(ptr, key), "must be positive");
    }
    return v;
}

double nonnegative(const json &obj, const std::string &ptr, const char *key, std::optional<double> fallback = {}) {
    double v = number(obj, ptr, key, fallback);
    if (!(v >= 0)) {
        fail(child(ptr, key), "must be nonnegative");
    }
    return v;
}

double open_unit(const json &obj, const std::string &ptr, const char *key, std::optional<double> fallback = {}) {
    double v = number(obj, ptr, key, fallback);
    if (!(v > 0 && v < 1)) {
        fail(child(ptr, key), "must lie in (0, 1)");
    }
    return v;
}

int64_t at_least(const json &obj, const std::string &ptr, const char *key, int64_t lo,
                 std::optional<int64_t> fallback = {}) {
    int64_t v = integer(obj, ptr, key, fallback);
    if (v < lo) {
        fail(child(ptr, key), "must be >= " + std::to_string(lo));
    }
    return v;
}

std::string string_of(const json &obj, const std::string &ptr, const char *key, std::optional<std::string> fallback = {}) {
    if (!obj.contains(key)) {
        if (fallback) {
            return *fallback;
        }
        fail(child(ptr, key), "is required");
    }
    if (!obj.at(key).is_string()) {
        fail(child(ptr, key), "must be a string");
    }
    return obj.at(key).get<std::string>();
}

std::vector<double> number_array(const json &obj, const std::string &ptr, const char *key) {
    const json &arr = require(obj, ptr, key);
    std::string p = child(ptr, key);
    if (!arr.is_array() || arr.empty()) {
        fail(p, "must be a nonempty array");
    }
    std::vector<double> out;
    for (size_t i = 0; i < arr.size(); i++) {
        out.push_back(as_number(arr[i], p + "/" + std::to_string(i)));
    }
    return out;
}

// Wraps library validation so its message carries the JSON pointer.
template <typename F>
auto at_path(const std::string &ptr, F f) -> decltype(f()) {
    try {
        return f();
    } catch (const Error &e) {
        if (e.code() == ErrorCode::InvalidConfig) {
            throw;
        }
        fail(ptr, e.what());
    }
}

DistSpec parse_dist(const json &j, const std::string &ptr) {
    require_object(j, ptr);
    std::string kind = string_of(j, ptr, "kind");
    if (kind == "bounded_discrete") {
        check_keys(j, ptr, {"kind", "pmf"});
        auto pmf = number_array(j, ptr, "pmf");
        return at_path(child(ptr, "pmf"), [&] { return DistSpec::bounded_discrete(pmf); });
    }
    if (kind == "exponential") {
        check_keys(j, ptr, {"kind", "rate"});
        double rate = positive(j, ptr, "rate");
        return DistSpec::exponential(rate);
    }
    if (kind == "deterministic") {
        check_keys(j, ptr, {"kind", "value"});
        double v = nonnegative(j, ptr, "value");
        return DistSpec::deterministic(v);
    }
    if (kind == "empirical_quantile") {
        check_keys(j, ptr, {"kind", "table"});
        auto table = number_array(j, ptr, "table");
        return at_path(child(ptr, "table"), [&] { return DistSpec::empirical_quantile(table); });
    }
    fail(child(ptr, "kind"), "must be one of bounded_discrete, exponential, deterministic, empirical_quantile");
}

TailClass parse_tail(const json &j, const std::string &ptr) {
    require_object(j, ptr);
    std::string kind = string_of(j, ptr, "kind");
    if (kind == "bounded") {
        check_keys(j, ptr, {"kind", "max"});
        return TailClass::bounded(nonnegative(j, ptr, "max"));
    }
    if (kind == "sub_gaussian") {
        check_keys(j, ptr, {"kind", "mean", "variance"});
        return TailClass::sub_gaussian(number(j, ptr, "mean"), positive(j, ptr, "variance"));
    }
    if (kind == "sub_exponential") {
        check_keys(j, ptr, {"kind", "K", "rate"});
        return TailClass::sub_exponential(positive(j, ptr, "K"), positive(j, ptr, "rate"));
    }
    fail(child(ptr, "kind"), "must be one of bounded, sub_gaussian, sub_exponential");
}

// Exact certificates for the laws whose tails are known in closed form.
TailClass default_tail(const DistSpec &d) {
    if (d.kind() == DistKind::Exponential) {
        return TailClass::sub_exponential(1, d.rate());
    }
    return TailClass::bounded(d.max_value());
}

void parse_gg1(const json &j, RunConfig &cfg) {
    const std::string ptr = "/gg1";
    check_keys(j, ptr, {"model_id", "arrival", "service", "threshold_d", "metric", "clip", "tails", "horizon_M"});
    Gg1Model &m = cfg.gg1;
    m.model_id = string_of(j, ptr, "model_id", std::string("gg1"));
    m.params.arrival_dist = parse_dist(require(j, ptr, "arrival"), child(ptr, "arrival"));
    m.params.service_dist = parse_dist(require(j, ptr, "service"), child(ptr, "service"));
    m.params.threshold_d = nonnegative(j, ptr, "threshold_d");
    std::string metric = string_of(j, ptr, "metric", std::string("waiting"));
    if (metric == "waiting") {
        m.params.metric = DelayMetric::WaitingTime;
    } else if (metric == "response") {
        m.params.metric = DelayMetric::ResponseTime;
    } else {
        fail(child(ptr, "metric"), "must be waiting or response");
    }
    m.params.horizon_M = at_least(j, ptr, "horizon_M", 1, int64_t{1});
    m.params.clip = ClipSpec::none();
    if (j.contains("clip")) {
        const json &c = j.at("clip");
        std::string cp = child(ptr, "clip");
        check_keys(c, cp, {"enabled", "level_B"});
        if (!c.contains("enabled") || !c.at("enabled").is_boolean()) {
            fail(child(cp, "enabled"), "must be a boolean");
        }
        m.params.clip.enabled = c.at("enabled").get<bool>();
        if (c.contains("level_B") && !(c.at("level_B").is_string() && c.at("level_B") == "auto")) {
            m.params.clip.level_B = positive(c, cp, "level_B");
        }
    }
    bool bounded = std::isfinite(m.params.arrival_dist.max_value()) && std::isfinite(m.params.service_dist.max_value());
    if (!bounded && !m.params.clip.enabled) {
        fail(child(ptr, "clip"), "unbounded inter-arrival or service laws need clipping enabled");
    }
    m.tails.arrival = default_tail(m.params.arrival_dist);
    m.tails.service = default_tail(m.params.service_dist);
    if (j.contains("tails")) {
        const json &t = j.at("tails");
        std::string tp = child(ptr, "tails");
        check_keys(t, tp, {"arrival", "service"});
        if (t.contains("arrival")) {
            m.tails.arrival = parse_tail(t.at("arrival"), child(tp, "arrival"));
        }
        if (t.contains("service")) {
            m.tails.service = parse_tail(t.at("service"), child(tp, "service"));
        }
    }
}

std::vector<DistSpec> parse_pmf_list(const json &obj, const std::string &ptr, const char *key) {
    const json &arr = require(obj, ptr, key);
    std::string p = child(ptr, key);
    if (!arr.is_array() || arr.empty()) {
        fail(p, "must be a nonempty array of pmfs");
    }
    std::vector<DistSpec> out;
    for (size_t i = 0; i < arr.size(); i++) {
        std::string ip = p + "/" + std::to_string(i);
        if (!arr[i].is_array() || arr[i].empty()) {
            fail(ip, "must be a nonempty array");
        }
        std::vector<double> pmf;
        for (size_t k = 0; k < arr[i].size(); k++) {
            pmf.push_back(as_number(arr[i][k], ip + "/" + std::to_string(k)));
        }
        out.push_back(at_path(ip, [&] { return DistSpec::bounded_discrete(pmf); }));
    }
    return out;
}

void parse_maxweight(const json &j, RunConfig &cfg) {
    const std::string ptr = "/maxweight";
    check_keys(j, ptr, {"arrival_pmfs", "channel_pmfs", "subset_I", "threshold_d", "buffer_capacity", "horizon_M",
                        "drift"});
    WirelessParams &w = cfg.maxweight;
    w.arrival_pmfs = parse_pmf_list(j, ptr, "arrival_pmfs");
    w.channel_pmfs = parse_pmf_list(j, ptr, "channel_pmfs");
    if (w.arrival_pmfs.size() != w.channel_pmfs.size()) {
        fail(child(ptr, "channel_pmfs"), "must have one pmf per queue");
    }
    const json &subset = require(j, ptr, "subset_I");
    if (!subset.is_array() || subset.empty()) {
        fail(child(ptr, "subset_I"), "must be a nonempty array");
    }
    w.subset_I.clear();
    for (size_t i = 0; i < subset.size(); i++) {
        std::string ip = child(ptr, "subset_I") + "/" + std::to_string(i);
        int64_t q = as_integer(subset[i], ip);
        if (q < 0 || q >= w.K()) {
            fail(ip, "queue index out of range");
        }
        w.subset_I.push_back(static_cast<int>(q));
    }
    w.threshold_d = at_least(j, ptr, "threshold_d", 0);
    w.buffer_capacity = at_least(j, ptr, "buffer_capacity", 0, int64_t{0});
    w.horizon_M = at_least(j, ptr, "horizon_M", 1, int64_t{1});

    const json &d = require(j, ptr, "drift");
    std::string dp = child(ptr, "drift");
    check_keys(d, dp, {"eps", "nu", "m", "p", "weights", "level", "estimate_slots"});
    DriftCertificate &c = cfg.drift;
    c.eps = positive(d, dp, "eps");
    c.nu = positive(d, dp, "nu");
    c.m = at_least(d, dp, "m", 1);
    const json &p = require(d, dp, "p");
    if (p.is_string()) {
        if (p != "estimate") {
            fail(child(dp, "p"), "must be a number in (0, 1] or \"estimate\"");
        }
        c.estimate_p = true;
    } else {
        c.p = number(d, dp, "p");
        if (!(c.p > 0 && c.p <= 1)) {
            fail(child(dp, "p"), "must lie in (0, 1]");
        }
    }
    c.weights.assign(w.K(), 1.0);
    if (d.contains("weights")) {
        c.weights = number_array(d, dp, "weights");
        if (static_cast<int>(c.weights.size()) != w.K()) {
            fail(child(dp, "weights"), "must have one weight per queue");
        }
    }
    c.level = nonnegative(d, dp, "level", 0.0);
    c.estimate_slots = at_least(d, dp, "estimate_slots", 1, int64_t{1000000});
}

void parse_jsq(const json &j, RunConfig &cfg) {
    const std::string ptr = "/jsq";
    check_keys(j, ptr, {"K", "lambda", "clip_B", "clip_enabled", "service", "split_eps", "threshold_d",
                        "arrival_cap_R_A"});
    JsqParams &p = cfg.jsq;
    p.K = static_cast<int>(at_least(j, ptr, "K", 1));
    p.lambda = positive(j, ptr, "lambda");
    p.clip_B = positive(j, ptr, "clip_B");
    if (j.contains("clip_enabled")) {
        if (!j.at("clip_enabled").is_boolean()) {
            fail(child(ptr, "clip_enabled"), "must be a boolean");
        }
        p.clip_enabled = j.at("clip_enabled").get<bool>();
    }
    p.service_dist = parse_dist(require(j, ptr, "service"), child(ptr, "service"));
    p.split_eps = positive(j, ptr, "split_eps");
    if (!(p.split_eps < p.clip_B)) {
        fail(child(ptr, "split_eps"), "must be smaller than clip_B");
    }
    p.threshold_d = nonnegative(j, ptr, "threshold_d");
    p.arrival_cap_R_A = at_least(j, ptr, "arrival_cap_R_A", 1);
}

void parse_plan(const json &j, RunConfig &cfg) {
    const std::string ptr = "/plan";
    check_keys(j, ptr, {"eps_tot", "k", "alpha_Q", "beta", "gamma"});
    if (j.contains("eps_tot")) {
        cfg.plan.eps_tot = open_unit(j, ptr, "eps_tot");
    }
    if (j.contains("k")) {
        cfg.plan.k = static_cast<int>(at_least(j, ptr, "k", 1));
        if (*cfg.plan.k > 12) {
            fail(child(ptr, "k"), "must be <= 12");
        }
    }
    if (!cfg.plan.eps_tot && !cfg.plan.k) {
        fail(ptr, "needs eps_tot or k");
    }
    cfg.plan.alpha_Q = open_unit(j, ptr, "alpha_Q", 0.05);
    if (j.contains("beta")) {
        cfg.plan.beta = positive(j, ptr, "beta");
    }
    if (j.contains("gamma")) {
        cfg.plan.gamma = positive(j, ptr, "gamma");
    }
}

void parse_run(const json &j, RunConfig &cfg) {
    const std::string ptr = "/run";
    check_keys(j, ptr, {"master_seed", "threads", "n_cycles", "safety_cap", "seed_bits_m", "mc_amplitude_samples",
                        "iqae_shots"});
    RunOptions &r = cfg.run;
    if (j.contains("master_seed")) {
        const json &s = j.at("master_seed");
        if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<int64_t>() >= 0)) {
            fail(child(ptr, "master_seed"), "must be an unsigned 64-bit integer");
        }
        r.master_seed = s.get<uint64_t>();
    }
    r.threads = static_cast<int>(at_least(j, ptr, "threads", 0, int64_t{1}));
    r.n_cycles = at_least(j, ptr, "n_cycles", 1, int64_t{100000});
    r.safety_cap = at_least(j, ptr, "safety_cap", 1, int64_t{1} << 24);
    r.seed_bits_m = static_cast<int>(at_least(j, ptr, "seed_bits_m", 1, int64_t{16}));
    if (r.seed_bits_m > 63) {
        fail(child(ptr, "seed_bits_m"), "must be <= 63");
    }
    r.mc_amplitude_samples = at_least(j, ptr, "mc_amplitude_samples", 0, int64_t{0});
    r.iqae.shots_per_round = at_least(j, ptr, "iqae_shots", 1, int64_t{16});
}

void parse_verify(const json &j, RunConfig &cfg) {
    const std::string ptr = "/verify";
    check_keys(j, ptr, {"suites", "n_cycles", "long_run_length", "truncation_M", "clip_B", "R_A", "n_batches"});
    VerifyConfig &v = cfg.verify;
    if (j.contains("suites")) {
        const json &s = j.at("suites");
        if (!s.is_array()) {
            fail(child(ptr, "suites"), "must be an array");
        }
        v.suites.clear();
        for (size_t i = 0; i < s.size(); i++) {
            std::string ip = child(ptr, "suites") + "/" + std::to_string(i);
            if (!s[i].is_string()) {
                fail(ip, "must be a string");
            }
            v.suites.push_back(s[i].get<std::string>());
        }
    }
    v.n_cycles = at_least(j, ptr, "n_cycles", 1, v.n_cycles);
    v.long_run_length = at_least(j, ptr, "long_run_length", 100, v.long_run_length);
    v.truncation_M = at_least(j, ptr, "truncation_M", 0, int64_t{0});
    if (j.contains("clip_B")) {
        v.clip_B = positive(j, ptr, "clip_B");
    }
    v.R_A = at_least(j, ptr, "R_A", 0, int64_t{0});
    v.n_batches = at_least(j, ptr, "n_batches", 1, v.n_batches);
}

void parse_resources(const json &j, RunConfig &cfg) {
    const std::string ptr = "/resources";
    check_keys(j, ptr, {"B_A", "B_S", "B_Y", "seed_bits_m", "M"});
    ResourcesConfig &r = cfg.resources;
    r.B_A = at_least(j, ptr, "B_A", 1, r.B_A);
    r.B_S = at_least(j, ptr, "B_S", 1, r.B_S);
    r.B_Y = at_least(j, ptr, "B_Y", 1, r.B_Y);
    r.seed_bits_m = at_least(j, ptr, "seed_bits_m", 0, int64_t{0});
    r.M = at_least(j, ptr, "M", 0, int64_t{0});
}

void parse_scaling(const json &j, RunConfig &cfg) {
    const std::string ptr = "/qae_scaling";
    check_keys(j, ptr, {"a", "eps", "delta", "runs"});
    ScalingConfig &s = cfg.scaling;
    s.a = number(j, ptr, "a", s.a);
    if (!(s.a >= 0 && s.a <= 1)) {
        fail(child(ptr, "a"), "must lie in [0, 1]");
    }
    if (j.contains("eps")) {
        s.eps = number_array(j, ptr, "eps");
        for (size_t i = 0; i < s.eps.size(); i++) {
            if (!(s.eps[i] > 0 && s.eps[i] < 0.5)) {
                fail(child(ptr, "eps") + "/" + std::to_string(i), "must lie in (0, 0.5)");
            }
        }
    }
    s.delta = open_unit(j, ptr, "delta", s.delta);
    s.runs = at_least(j, ptr, "runs", 1, s.runs);
}

}  // namespace

std::string qtail::model_name(ModelKind kind) {
    switch (kind) {
        case ModelKind::Gg1:
            return "gg1";
        case ModelKind::MaxWeight:
            return "maxweight";
        case ModelKind::Jsq:
            return "jsq";
    }
    return "";
}

RunConfig qtail::parse_run_config(const json &doc) {
    check_keys(doc, "", {"model", "gg1", "maxweight", "jsq", "plan", "mode", "run", "verify", "resources",
                         "qae_scaling", "output"});
    RunConfig cfg;
    std::string model = string_of(doc, "", "model");
    int blocks = (doc.contains("gg1") ? 1 : 0) + (doc.contains("maxweight") ? 1 : 0) + (doc.contains("jsq") ? 1 : 0);
    if (blocks != 1) {
        fail("", "exactly one model block (gg1, maxweight, jsq) must be present");
    }
    if (model == "gg1") {
        cfg.model = ModelKind::Gg1;
        parse_gg1(require(doc, "", "gg1"), cfg);
    } else if (model == "maxweight") {
        cfg.model = ModelKind::MaxWeight;
        parse_maxweight(require(doc, "", "maxweight"), cfg);
    } else if (model == "jsq") {
        cfg.model = ModelKind::Jsq;
        parse_jsq(require(doc, "", "jsq"), cfg);
    } else {
        fail("/model", "must be gg1, maxweight or jsq");
    }
    parse_plan(require(doc, "", "plan"), cfg);
    std::string mode = string_of(doc, "", "mode", std::string("classical-mc"));
    if (mode == "classical-mc") {
        cfg.mode = EstimateMode::ClassicalMc;
    } else if (mode == "emulated-qae") {
        cfg.mode = EstimateMode::EmulatedQae;
    } else {
        fail("/mode", "must be classical-mc or emulated-qae");
    }
    if (doc.contains("run")) {
        parse_run(doc.at("run"), cfg);
    }
    if (doc.contains("verify")) {
        parse_verify(doc.at("verify"), cfg);
    }
    if (doc.contains("resources")) {
        parse_resources(doc.at("resources"), cfg);
    }
    if (doc.contains("qae_scaling")) {
        parse_scaling(doc.at("qae_scaling"), cfg);
    }
    if (doc.contains("output")) {
        check_keys(doc.at("output"), "/output", {"dir"});
        cfg.output_dir = string_of(doc.at("output"), "/output", "dir", std::string());
    }
    cfg.effective = doc;
    apply_overrides(cfg, std::nullopt, std::nullopt);
    return cfg;
}

json qtail::load_json_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::Io, "cannot read " + path);
    }
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return json::parse(buf.str());
    } catch (const json::parse_error &e) {
        throw Error(ErrorCode::InvalidConfig, "/: not valid JSON (" + std::string(e.what()) + ")");
    }
}

void qtail::apply_overrides(RunConfig &config, std::optional<uint64_t> seed, std::optional<int> threads) {
    if (seed) {
        config.run.master_seed = *seed;
    }
    if (threads) {
        config.run.threads = *threads;
    }
    config.effective["run"]["master_seed"] = config.run.master_seed;
    config.effective["run"]["threads"] = config.run.threads;
}

std::string qtail::config_hash(const RunConfig &config) {
    json canonical = config.effective;
    if (canonical.contains("run")) {
        canonical["run"].erase("threads");
    }
    canonical.erase("output");
    std::string text = canonical.dump();
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char out[17];
    std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(h));
    return out;
}
