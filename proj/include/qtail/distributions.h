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

#ifndef QTAIL_DISTRIBUTIONS_H
#define QTAIL_DISTRIBUTIONS_H

#include <cstdint>
#include <vector>

#include "qtail/seedstream.h"

namespace qtail {

enum class DistKind { BoundedDiscrete, Exponential, Deterministic, EmpiricalQuantile };

/// An inter-arrival, service, arrival-count or channel law, sampled by its lower (left-continuous)
/// quantile function. Construction validates; sampling never throws.
class DistSpec {
   public:
    /// pmf over {0, 1, ..., pmf.size() - 1}; must sum to 1 within 1e-12.
    static DistSpec bounded_discrete(std::vector<double> pmf);
    static DistSpec exponential(double rate);
    static DistSpec deterministic(double value);
    /// Step inverse CDF: u in [k/n, (k+1)/n) maps to table[k]. Table must be nondecreasing and nonnegative.
    static DistSpec empirical_quantile(std::vector<double> table);

    DistKind kind() const {
        return kind_;
    }
    const std::vector<double> &pmf() const {
        return values_;
    }
    const std::vector<double> &table() const {
        return values_;
    }
    double rate() const {
        return scalar_;
    }
    double value() const {
        return scalar_;
    }

    double quantile(double u) const;
    double mean() const;
    /// Supremum of the support; +infinity for the exponential law.
    double max_value() const;
    /// P(X > b).
    double exceed_prob(double b) const;
    /// E[min(X, b)].
    double clipped_mean(double b) const;

    bool operator==(const DistSpec &other) const = default;

   private:
    DistSpec(DistKind kind, double scalar, std::vector<double> values);

    DistKind kind_;
    double scalar_;
    std::vector<double> values_;
    std::vector<double> cumulative_;
};

struct ClipSpec {
    double level_B = 0;
    bool enabled = false;

    static ClipSpec none() {
        return {};
    }
    /// Throws InvalidArgument unless level_B > 0.
    static ClipSpec at(double level_B);
};

/// Draws the clipped quantile min(T(u), B) (or T(u) when clipping is off).
double sample(const DistSpec &dist, const ClipSpec &clip, UniformDraw u);

enum class TailKind { Bounded, SubGaussian, SubExponential };

/// Tail certificate for one input stream, used to choose a clipping level.
struct TailClass {
    TailKind kind = TailKind::Bounded;
    double max = 0;       // Bounded
    double mean = 0;      // SubGaussian
    double variance = 0;  // SubGaussian
    double K = 1;         // SubExponential prefactor
    double rate = 0;      // SubExponential decay

    static TailClass bounded(double max);
    static TailClass sub_gaussian(double mean, double variance);
    static TailClass sub_exponential(double K, double rate);
};

/// Smallest per-stream B with M^2 exp(-(B - mean)^2 / (2 sigma^2)) <= eps_clip / 2.
double clip_level_subgaussian(const TailClass &tail, int64_t M, double eps_clip);

/// Smallest per-stream B with M^2 K exp(-rate B) <= eps_clip / 2.
double clip_level_subexp(const TailClass &tail, int64_t M, double eps_clip);

/// M^2 (P(A > B) + P(S > B)): bound on |E[R_M] - E[R_M^(B)]| under the min(X, B) coupling.
double clipping_bias_bound(int64_t M, double p_A_exceed, double p_S_exceed);

}  // namespace qtail

#endif
