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

#include "qtail/distributions.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "qtail/error.h"

using namespace qtail;

namespace {

[[noreturn]] void invalid(const std::string &message) {
    throw Error(ErrorCode::InvalidArgument, message);
}

}  // namespace

DistSpec::DistSpec(DistKind kind, double scalar, std::vector<double> values)
    : kind_(kind), scalar_(scalar), values_(std::move(values)) {
    if (kind_ == DistKind::BoundedDiscrete) {
        cumulative_.resize(values_.size());
        std::partial_sum(values_.begin(), values_.end(), cumulative_.begin());
        // Absorb summation rounding so every u < 1 lands on the support.
        cumulative_.back() = 1.0;
    }
}

DistSpec DistSpec::bounded_discrete(std::vector<double> pmf) {
    if (pmf.empty()) {
        invalid("pmf table must not be empty");
    }
    double total = 0;
    for (double p : pmf) {
        if (!(p >= 0) || !std::isfinite(p)) {
            invalid("pmf entries must be finite and nonnegative");
        }
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        invalid("pmf must sum to 1 within 1e-12, sums to " + std::to_string(total));
    }
    return DistSpec(DistKind::BoundedDiscrete, 0, std::move(pmf));
}

DistSpec DistSpec::exponential(double rate) {
    if (!(rate > 0) || !std::isfinite(rate)) {
        invalid("exponential rate must be positive and finite");
    }
    return DistSpec(DistKind::Exponential, rate, {});
}

DistSpec DistSpec::deterministic(double value) {
    if (!(value >= 0) || !std::isfinite(value)) {
        invalid("deterministic value must be finite and nonnegative");
    }
    return DistSpec(DistKind::Deterministic, value, {});
}

DistSpec DistSpec::empirical_quantile(std::vector<double> table) {
    if (table.empty()) {
        invalid("inverse-CDF table must not be empty");
    }
    for (size_t k = 0; k < table.size(); k++) {
        if (!(table[k] >= 0) || !std::isfinite(table[k])) {
            invalid("inverse-CDF table entries must be finite and nonnegative");
        }
        if (k > 0 && table[k] < table[k - 1]) {
            invalid("inverse-CDF table must be nondecreasing");
        }
    }
    return DistSpec(DistKind::EmpiricalQuantile, 0, std::move(table));
}

double DistSpec::quantile(double u) const {
    switch (kind_) {
        case DistKind::BoundedDiscrete:
            for (size_t k = 0; k < values_.size(); k++) {
                if (values_[k] > 0 && cumulative_[k] >= u) {
                    return static_cast<double>(k);
                }
            }
            return static_cast<double>(values_.size() - 1);
        case DistKind::Exponential:
            return -std::log1p(-u) / scalar_;
        case DistKind::Deterministic:
            return scalar_;
        case DistKind::EmpiricalQuantile: {
            auto k = static_cast<size_t>(u * static_cast<double>(values_.size()));
            return values_[std::min(k, values_.size() - 1)];
        }
    }
    return 0;
}

double DistSpec::mean() const {
    return clipped_mean(std::numeric_limits<double>::infinity());
}

double DistSpec::max_value() const {
    switch (kind_) {
        case DistKind::BoundedDiscrete: {
            size_t k = values_.size();
            while (k > 1 && values_[k - 1] == 0) {
                k--;
            }
            return static_cast<double>(k - 1);
        }
        case DistKind::Exponential:
            return std::numeric_limits<double>::infinity();
        case DistKind::Deterministic:
            return scalar_;
        case DistKind::EmpiricalQuantile:
            return values_.back();
    }
    return 0;
}

double DistSpec::exceed_prob(double b) const {
    switch (kind_) {
        case DistKind::BoundedDiscrete: {
            double p = 0;
            for (size_t k = 0; k < values_.size(); k++) {
                if (static_cast<double>(k) > b) {
                    p += values_[k];
                }
            }
            return std::min(p, 1.0);
        }
        case DistKind::Exponential:
            return b < 0 ? 1.0 : std::exp(-scalar_ * b);
        case DistKind::Deterministic:
            return scalar_ > b ? 1.0 : 0.0;
        case DistKind::EmpiricalQuantile: {
            auto above = std::count_if(values_.begin(), values_.end(), [&](double v) { return v > b; });
            return static_cast<double>(above) / static_cast<double>(values_.size());
        }
    }
    return 0;
}

double DistSpec::clipped_mean(double b) const {
    switch (kind_) {
        case DistKind::BoundedDiscrete: {
            double m = 0;
            for (size_t k = 0; k < values_.size(); k++) {
                m += std::min(static_cast<double>(k), b) * values_[k];
            }
            return m;
        }
        case DistKind::Exponential:
            return std::isinf(b) ? 1.0 / scalar_ : -std::expm1(-scalar_ * b) / scalar_;
        case DistKind::Deterministic:
            return std::min(scalar_, b);
        case DistKind::EmpiricalQuantile: {
            double m = 0;
            for (double v : values_) {
                m += std::min(v, b);
            }
            return m / static_cast<double>(values_.size());
        }
    }
    return 0;
}

ClipSpec ClipSpec::at(double level_B) {
    if (!(level_B > 0)) {
        invalid("clipping level B must be positive when clipping is enabled");
    }
    return {level_B, true};
}

double qtail::sample(const DistSpec &dist, const ClipSpec &clip, UniformDraw u) {
    double x = dist.quantile(u.value);
    return clip.enabled ? std::min(x, clip.level_B) : x;
}

TailClass TailClass::bounded(double max) {
    if (!(max >= 0)) {
        invalid("bounded tail needs a nonnegative maximum");
    }
    TailClass t;
    t.kind = TailKind::Bounded;
    t.max = max;
    return t;
}

TailClass TailClass::sub_gaussian(double mean, double variance) {
    if (!(variance > 0)) {
        invalid("sub-Gaussian variance proxy must be positive");
    }
    TailClass t;
    t.kind = TailKind::SubGaussian;
    t.mean = mean;
    t.variance = variance;
    return t;
}

TailClass TailClass::sub_exponential(double K, double rate) {
    if (!(K >= 1) || !(rate > 0)) {
        invalid("sub-exponential tail needs K >= 1 and rate > 0");
    }
    TailClass t;
    t.kind = TailKind::SubExponential;
    t.K = K;
    t.rate = rate;
    return t;
}

double qtail::clip_level_subgaussian(const TailClass &tail, int64_t M, double eps_clip) {
    if (tail.kind != TailKind::SubGaussian) {
        invalid("clip_level_subgaussian needs a sub-Gaussian tail class");
    }
    if (M < 1 || !(eps_clip > 0 && eps_clip < 1)) {
        invalid("clip_level_subgaussian needs M >= 1 and eps_clip in (0, 1)");
    }
    double m = static_cast<double>(M);
    return tail.mean + std::sqrt(tail.variance) * std::sqrt(2 * std::log(2 * m * m / eps_clip));
}

double qtail::clip_level_subexp(const TailClass &tail, int64_t M, double eps_clip) {
    if (tail.kind != TailKind::SubExponential) {
        invalid("clip_level_subexp needs a sub-exponential tail class");
    }
    if (M < 1 || !(eps_clip > 0 && eps_clip < 1)) {
        invalid("clip_level_subexp needs M >= 1 and eps_clip in (0, 1)");
    }
    double m = static_cast<double>(M);
    return std::log(2 * m * m * tail.K / eps_clip) / tail.rate;
}

double qtail::clipping_bias_bound(int64_t M, double p_A_exceed, double p_S_exceed) {
    if (!(p_A_exceed >= 0 && p_A_exceed <= 1 && p_S_exceed >= 0 && p_S_exceed <= 1)) {
        invalid("exceedance probabilities must lie in [0, 1]");
    }
    double m = static_cast<double>(M);
    return m * m * (p_A_exceed + p_S_exceed);
}
