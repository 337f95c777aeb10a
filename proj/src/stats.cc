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

#include "qtail/stats.h"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>

#include "qtail/error.h"

using namespace qtail;

double qtail::normal_quantile(double p) {
    if (!(p > 0 && p < 1)) {
        throw Error(ErrorCode::InvalidArgument, "normal_quantile needs p in (0, 1)");
    }
    return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

double qtail::binomial_lower(int64_t k, int64_t n, double alpha) {
    if (k <= 0) {
        return 0;
    }
    return boost::math::ibeta_inv(static_cast<double>(k), static_cast<double>(n - k + 1), alpha);
}

double qtail::binomial_upper(int64_t k, int64_t n, double alpha) {
    if (k >= n) {
        return 1;
    }
    return boost::math::ibeta_inv(static_cast<double>(k + 1), static_cast<double>(n - k), 1 - alpha);
}

std::pair<double, double> qtail::clopper_pearson(int64_t k, int64_t n, double alpha) {
    if (n <= 0 || k < 0 || k > n) {
        throw Error(ErrorCode::InvalidArgument, "clopper_pearson needs 0 <= k <= n, n > 0");
    }
    return {binomial_lower(k, n, alpha / 2), binomial_upper(k, n, alpha / 2)};
}

double qtail::hoeffding_half_width(int64_t n, double alpha) {
    return std::sqrt(std::log(2 / alpha) / (2 * static_cast<double>(n)));
}

int64_t qtail::hoeffding_sample_size(double eps, double delta) {
    if (!(eps > 0 && eps < 1) || !(delta > 0 && delta < 1)) {
        throw Error(ErrorCode::InvalidArgument, "hoeffding_sample_size needs eps, delta in (0, 1)");
    }
    return static_cast<int64_t>(std::ceil(std::log(2 / delta) / (2 * eps * eps)));
}

double Moments::mean() const {
    return n > 0 ? sum / static_cast<double>(n) : 0;
}

double Moments::variance() const {
    if (n < 2) {
        return 0;
    }
    double m = mean();
    double v = (sum_sq - static_cast<double>(n) * m * m) / static_cast<double>(n - 1);
    return std::max(v, 0.0);
}

double Moments::std_error() const {
    return n > 0 ? std::sqrt(variance() / static_cast<double>(n)) : 0;
}

double RatioMoments::ratio() const {
    return sy > 0 ? sx / sy : 0;
}

double RatioMoments::std_error() const {
    if (n < 2 || !(sy > 0)) {
        return 0;
    }
    double nn = static_cast<double>(n);
    double r = ratio();
    double my = sy / nn;
    // Residuals x - r y have mean zero by construction.
    double ss = sxx - 2 * r * sxy + r * r * syy;
    double var = std::max(ss, 0.0) / (nn - 1);
    return std::sqrt(var / nn) / my;
}

Estimate qtail::batch_means(const std::vector<double> &batches) {
    Moments m;
    for (double b : batches) {
        m.add(b);
    }
    return {m.mean(), m.std_error()};
}

bool qtail::intervals_overlap(const Estimate &a, const Estimate &b, double z) {
    return a.lo(z) <= b.hi(z) && b.lo(z) <= a.hi(z);
}

double qtail::log_log_slope(const std::vector<double> &x, const std::vector<double> &y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw Error(ErrorCode::InvalidArgument, "log_log_slope needs two or more paired points");
    }
    double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < x.size(); i++) {
        double lx = std::log(x[i]);
        double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double qtail::median(std::vector<double> values) {
    if (values.empty()) {
        throw Error(ErrorCode::InvalidArgument, "median of an empty set");
    }
    std::sort(values.begin(), values.end());
    size_t h = values.size() / 2;
    return values.size() % 2 == 1 ? values[h] : 0.5 * (values[h - 1] + values[h]);
}
