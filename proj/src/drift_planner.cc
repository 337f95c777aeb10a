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

#include "qtail/drift_planner.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qtail/error.h"

using namespace qtail;

namespace {

[[noreturn]] void invalid(const std::string &message) {
    throw Error(ErrorCode::InvalidArgument, message);
}

double stream_clip_level(const TailClass &tail, int64_t M, double eps_clip) {
    switch (tail.kind) {
        case TailKind::Bounded:
            return tail.max;
        case TailKind::SubGaussian:
            return clip_level_subgaussian(tail, M, eps_clip);
        case TailKind::SubExponential:
            return clip_level_subexp(tail, M, eps_clip);
    }
    return 0;
}

}  // namespace

DriftConstants qtail::beta_bounded(double A_max, double S_max, double mean_A, double mean_S) {
    if (!(A_max > 0) || !(S_max >= 0) || !(A_max + S_max > 0)) {
        invalid("beta_bounded needs A_max > 0 and S_max >= 0");
    }
    if (!(mean_A >= 0 && mean_A <= A_max) || !(mean_S >= 0 && mean_S <= S_max)) {
        invalid("means must lie within [0, max]");
    }
    DriftConstants out;
    out.delta = mean_A - mean_S;
    if (!(out.delta > 0)) {
        throw Error(
            ErrorCode::UnstableModel,
            "stability slack E[A] - E[S] = " + std::to_string(out.delta) + " is not positive");
    }
    double range = A_max + S_max;
    out.beta = 2 * out.delta * out.delta / (range * range);
    return out;
}

double qtail::truncation_bias_bound(double beta, int64_t M) {
    if (!(beta > 0) || M < 1) {
        invalid("truncation_bias_bound needs beta > 0 and M >= 1");
    }
    return std::exp(-beta * static_cast<double>(M)) / -std::expm1(-beta);
}

int64_t qtail::choose_horizon(double beta, double eps_tot) {
    // eps_tot >= 1 is allowed; the formula only needs a positive log argument, clamped by M >= 1.
    if (!(beta > 0) || !(eps_tot > 0) || !std::isfinite(eps_tot)) {
        invalid("choose_horizon needs beta > 0 and eps_tot > 0");
    }
    double target = beta * eps_tot / 4;
    double x = std::log(4 / (beta * eps_tot)) / beta;
    if (!(x < 9e18)) {
        throw Error(ErrorCode::PlanDiverged, "horizon overflows: beta is too small");
    }
    auto M = std::max<int64_t>(1, static_cast<int64_t>(std::ceil(x)));
    // Smallest integer meeting exp(-beta M) <= beta eps_tot / 4 in floating point.
    while (M > 1 && std::exp(-beta * static_cast<double>(M - 1)) <= target) {
        M--;
    }
    while (std::exp(-beta * static_cast<double>(M)) > target) {
        M++;
    }
    while (truncation_bias_bound(beta, M) > eps_tot / 2) {
        M++;
    }
    return M;
}

double qtail::allocate_qae_accuracy(double eps_tot, int64_t M) {
    if (M < 1) {
        invalid("allocate_qae_accuracy needs M >= 1");
    }
    return eps_tot / (2 * static_cast<double>(M));
}

HajekConstants qtail::hajek_constants(double eps_drift, double nu) {
    if (!(eps_drift > 0) || !(nu > 0)) {
        invalid("hajek_constants needs eps_drift > 0 and nu > 0");
    }
    return {eps_drift / (nu * nu), eps_drift * eps_drift / (2 * nu * nu)};
}

MaxWeightDriftSpec qtail::solve_eta(MaxWeightDriftSpec spec) {
    if (!(spec.p_empty > 0 && spec.p_empty <= 1) || spec.m_attempt < 1) {
        invalid("solve_eta needs p_empty in (0, 1] and m_attempt >= 1");
    }
    auto hk = hajek_constants(spec.eps_drift, spec.nu);
    spec.theta = hk.theta;
    spec.kappa = hk.kappa;
    double m = static_cast<double>(spec.m_attempt);
    double slope = m * (1 + spec.theta * spec.nu / spec.kappa);
    spec.eta_star =
        spec.p_empty >= 1 ? std::numeric_limits<double>::infinity() : -std::log1p(-spec.p_empty) / slope;
    spec.eta_rate = std::min(spec.kappa, spec.eta_star) / 2;
    double eta = spec.eta_rate;
    double coefficient = (1 - spec.p_empty) * std::exp(eta * m + (eta / spec.kappa) * spec.theta * m * spec.nu);
    double denominator = 1 - coefficient;
    if (!(denominator > 0)) {
        throw Error(ErrorCode::RateDegenerate, "regeneration-time moment bound has a nonpositive denominator");
    }
    spec.prefactor_C = std::exp(eta * m) / denominator;
    return spec;
}

double qtail::poisson_chernoff_rate(double lambda, double alpha) {
    double x = lambda * alpha;
    if (!(x > 0 && x < 1)) {
        throw Error(ErrorCode::InvalidAlpha, "poisson_chernoff_rate needs 0 < lambda * alpha < 1");
    }
    return -std::log(x) - (1 - x);
}

ChernoffChoice qtail::choose_chernoff_alpha(double lambda, double gamma) {
    if (!(lambda > 0) || !(gamma > 0)) {
        invalid("choose_chernoff_alpha needs lambda > 0 and gamma > 0");
    }
    double lo = 0;
    double hi = 1 / lambda;
    for (int iter = 0; iter < 200; iter++) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        if (gamma * mid < poisson_chernoff_rate(lambda, mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    double alpha = lo > 0 ? lo : 0.5 * hi;
    return {alpha, std::min(gamma * alpha, poisson_chernoff_rate(lambda, alpha))};
}

HorizonPlan qtail::plan_gg1(const Gg1Params &params, const Gg1Tails &tails, double eps_tot, double alpha_Q) {
    if (!(eps_tot > 0 && eps_tot < 1)) {
        invalid("eps_tot must lie in (0, 1)");
    }
    if (!(alpha_Q > 0 && alpha_Q < 1)) {
        invalid("alpha_Q must lie in (0, 1)");
    }
    HorizonPlan plan;
    plan.eps_tot = eps_tot;
    plan.delta_Q = alpha_Q;
    const DistSpec &A = params.arrival_dist;
    const DistSpec &S = params.service_dist;
    bool bounded_inputs = std::isfinite(A.max_value()) && std::isfinite(S.max_value());

    if (!params.clip.enabled && bounded_inputs) {
        plan.drift = beta_bounded(A.max_value(), S.max_value(), A.mean(), S.mean());
        plan.drift.source = DriftSource::Bounded;
        plan.M = choose_horizon(plan.drift.beta, eps_tot);
        plan.eps_Q = allocate_qae_accuracy(eps_tot, plan.M);
        plan.trunc_bound = truncation_bias_bound(plan.drift.beta, plan.M);
        plan.clip_bound = 0;
        plan.budget_ok = plan.trunc_bound + static_cast<double>(plan.M) * plan.eps_Q <= eps_tot * (1 + 1e-12);
        return plan;
    }
    if (!params.clip.enabled) {
        invalid("unbounded inputs need clipping enabled");
    }

    // Three-way split: truncation eps_tot/4, clipping eps_tot/4, statistical eps_tot/2.
    plan.eps_clip = eps_tot / 4;
    auto drift_at = [&](double B) {
        DriftConstants d = beta_bounded(B, B, A.clipped_mean(B), S.clipped_mean(B));
        d.source = DriftSource::Clipped;
        return d;
    };
    bool auto_level = !(params.clip.level_B > 0);
    int64_t M = 1;
    double B = params.clip.level_B;
    for (int iter = 0;; iter++) {
        if (iter > 500) {
            throw Error(ErrorCode::PlanDiverged, "clip level / horizon iteration did not reach a fixed point");
        }
        if (auto_level) {
            B = std::max(
                stream_clip_level(tails.arrival, M, plan.eps_clip), stream_clip_level(tails.service, M, plan.eps_clip));
            if (!(B > 0)) {
                invalid("tail certificates give a nonpositive clip level");
            }
        }
        plan.drift = drift_at(B);
        int64_t next = choose_horizon(plan.drift.beta, eps_tot / 2);
        if (next == M || !auto_level) {
            M = next;
            break;
        }
        M = next;
    }
    plan.M = M;
    plan.clip_B = B;
    plan.eps_Q = allocate_qae_accuracy(eps_tot / 2, M);
    plan.trunc_bound = truncation_bias_bound(plan.drift.beta, M);
    plan.clip_bound = clipping_bias_bound(M, A.exceed_prob(B), S.exceed_prob(B));
    double total = plan.trunc_bound + plan.clip_bound + static_cast<double>(M) * plan.eps_Q;
    plan.budget_ok = plan.trunc_bound <= eps_tot / 4 * (1 + 1e-12) && plan.clip_bound <= eps_tot / 4 * (1 + 1e-12) &&
                     total <= eps_tot * (1 + 1e-12);
    return plan;
}

double qtail::wireless_truncation_bound(double C, double eta, int64_t M, double arrivals_per_slot) {
    if (!(C > 0) || !(eta > 0) || M < 1) {
        invalid("wireless_truncation_bound needs C > 0, eta > 0, M >= 1");
    }
    double m = static_cast<double>(M);
    return arrivals_per_slot * C * std::exp(-eta * m) * (m + 1 / -std::expm1(-eta));
}

int64_t qtail::choose_wireless_horizon(double C, double eta, double arrivals_per_slot, double target) {
    if (!(target > 0)) {
        invalid("choose_wireless_horizon needs a positive target");
    }
    // The bound decreases once M exceeds 1/eta; search there.
    auto lo = std::max<int64_t>(1, static_cast<int64_t>(std::floor(1 / eta)));
    if (wireless_truncation_bound(C, eta, lo, arrivals_per_slot) <= target) {
        return lo;
    }
    int64_t hi = lo;
    while (wireless_truncation_bound(C, eta, hi, arrivals_per_slot) > target) {
        lo = hi;
        if (hi > (int64_t{1} << 60)) {
            throw Error(ErrorCode::PlanDiverged, "wireless horizon overflows");
        }
        hi *= 2;
    }
    while (hi - lo > 1) {
        int64_t mid = lo + (hi - lo) / 2;
        if (wireless_truncation_bound(C, eta, mid, arrivals_per_slot) <= target) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}
