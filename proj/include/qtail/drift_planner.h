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

#ifndef QTAIL_DRIFT_PLANNER_H
#define QTAIL_DRIFT_PLANNER_H

#include <cstdint>

#include "qtail/distributions.h"
#include "qtail/gg1_cycle.h"

namespace qtail {

enum class DriftSource { Bounded, Clipped };

struct DriftConstants {
    double delta = 0;  // stability slack
    double beta = 0;   // exponential tail rate of the cycle length
    DriftSource source = DriftSource::Bounded;
};

/// Delta = mean_A - mean_S and beta = 2 Delta^2 / (A_max + S_max)^2. For the clipped bound pass the clipped
/// means with A_max = S_max = B. Throws UnstableModel when Delta <= 0.
DriftConstants beta_bounded(double A_max, double S_max, double mean_A, double mean_S);

/// exp(-beta M) / (1 - exp(-beta)).
double truncation_bias_bound(double beta, int64_t M);

/// ceil((1 / beta) ln(4 / (beta eps_tot))), clamped to >= 1.
int64_t choose_horizon(double beta, double eps_tot);

/// eps_tot / (2 M).
double allocate_qae_accuracy(double eps_tot, int64_t M);

struct HajekConstants {
    double theta = 0;
    double kappa = 0;
};

/// theta = eps / nu^2, kappa = eps^2 / (2 nu^2).
HajekConstants hajek_constants(double eps_drift, double nu);

/// Drift certificate for the MaxWeight regeneration time and the rate/prefactor derived from it.
struct MaxWeightDriftSpec {
    double eps_drift = 0;
    double nu = 0;
    int64_t m_attempt = 1;
    double p_empty = 0;
    double kappa = 0;
    double theta = 0;
    double eta_star = 0;
    double eta_rate = 0;
    double prefactor_C = 0;  // bound on E_0[exp(eta_rate tau)]
};

/// Fills kappa/theta (from eps_drift, nu), eta_star (root of (1-p) e^{eta m} e^{(eta/kappa) theta m nu} = 1),
/// eta_rate = min(kappa, eta_star) / 2 and the prefactor bound at eta_rate. Throws RateDegenerate if the
/// prefactor denominator is not positive.
MaxWeightDriftSpec solve_eta(MaxWeightDriftSpec spec);

/// I(alpha) = ln(1 / (lambda alpha)) - (1 - lambda alpha). Throws InvalidAlpha unless 0 < lambda alpha < 1.
double poisson_chernoff_rate(double lambda, double alpha);

struct ChernoffChoice {
    double alpha = 0;
    double rate = 0;  // min(gamma alpha, I(alpha)) at the chosen alpha
};

/// Maximizes the arrival-count tail rate min(gamma alpha, I(alpha)) over alpha in (0, 1/lambda), given a cycle
/// length decay rate gamma. The two terms cross exactly once; bisection finds the crossing.
ChernoffChoice choose_chernoff_alpha(double lambda, double gamma);

/// Tail certificates for the two GI/GI/1 input streams.
struct Gg1Tails {
    TailClass arrival = TailClass::bounded(0);
    TailClass service = TailClass::bounded(0);
};

struct HorizonPlan {
    int64_t M = 0;
    double eps_tot = 0;
    double eps_Q = 0;
    double delta_Q = 0;
    double trunc_bound = 0;
    double clip_bound = 0;
    double clip_B = 0;     // 0 when no clipping
    double eps_clip = 0;   // clip budget, 0 when no clipping
    DriftConstants drift;
    bool budget_ok = false;
};

/// Plans a GI/GI/1 run. Without clipping (both tails bounded and clip off): beta from the bounded slack,
/// M = choose_horizon(beta, eps_tot), eps_Q = eps_tot / (2M). With clipping: eps_tot splits into
/// trunc <= eps_tot/4, clip <= eps_tot/4 and statistical <= eps_tot/2; B comes from the tail choosers
/// (max over streams) and is iterated jointly with M to a fixed point.
HorizonPlan plan_gg1(const Gg1Params &params, const Gg1Tails &tails, double eps_tot, double alpha_Q);

/// Upper bound on E[J] - E[J_M] for the wireless model given P(tau > t) <= C e^{-eta t} and at most
/// `arrivals_per_slot` arrivals to I per slot: arrivals_per_slot * C e^{-eta M} (M + 1 / (1 - e^{-eta})).
double wireless_truncation_bound(double C, double eta, int64_t M, double arrivals_per_slot);

/// Smallest M with wireless_truncation_bound <= target.
int64_t choose_wireless_horizon(double C, double eta, double arrivals_per_slot, double target);

}  // namespace qtail

#endif
