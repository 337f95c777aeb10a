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

#ifndef QTAIL_STATS_H
#define QTAIL_STATS_H

#include <cstdint>
#include <utility>
#include <vector>

namespace qtail {

/// Standard normal quantile.
double normal_quantile(double p);

/// Two-sided Clopper-Pearson interval for k successes in n trials at level alpha.
std::pair<double, double> clopper_pearson(int64_t k, int64_t n, double alpha);

/// One-sided Clopper-Pearson limits at level alpha.
double binomial_upper(int64_t k, int64_t n, double alpha);
double binomial_lower(int64_t k, int64_t n, double alpha);

/// Half-width sqrt(ln(2 / alpha) / (2 n)) of the two-sided Hoeffding interval for [0, 1] samples.
double hoeffding_half_width(int64_t n, double alpha);

/// Sample size ceil(ln(2 / delta) / (2 eps^2)).
int64_t hoeffding_sample_size(double eps, double delta);

/// Plain power sums of one variable. Merged in a fixed order by the callers, so results are reproducible.
struct Moments {
    int64_t n = 0;
    double sum = 0;
    double sum_sq = 0;

    void add(double x) {
        n++;
        sum += x;
        sum_sq += x * x;
    }
    void merge(const Moments &o) {
        n += o.n;
        sum += o.sum;
        sum_sq += o.sum_sq;
    }
    double mean() const;
    double variance() const;  // unbiased
    double std_error() const;
};

/// Paired sums for a ratio sum(x) / sum(y) of i.i.d. cycle quantities.
struct RatioMoments {
    int64_t n = 0;
    double sx = 0;
    double sy = 0;
    double sxx = 0;
    double syy = 0;
    double sxy = 0;

    void add(double x, double y) {
        n++;
        sx += x;
        sy += y;
        sxx += x * x;
        syy += y * y;
        sxy += x * y;
    }
    void merge(const RatioMoments &o) {
        n += o.n;
        sx += o.sx;
        sy += o.sy;
        sxx += o.sxx;
        syy += o.syy;
        sxy += o.sxy;
    }
    double ratio() const;
    /// Delta-method standard error of the ratio.
    double std_error() const;
};

struct Estimate {
    double value = 0;
    double std_error = 0;

    double lo(double z) const {
        return value - z * std_error;
    }
    double hi(double z) const {
        return value + z * std_error;
    }
};

/// Mean and standard error from equal batch means.
Estimate batch_means(const std::vector<double> &batches);

/// True when [a - z sa, a + z sa] and [b - z sb, b + z sb] intersect.
bool intervals_overlap(const Estimate &a, const Estimate &b, double z);

/// Least-squares slope of log(y) against log(x).
double log_log_slope(const std::vector<double> &x, const std::vector<double> &y);

double median(std::vector<double> values);

}  // namespace qtail

#endif
