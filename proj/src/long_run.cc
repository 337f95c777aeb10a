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

#include "qtail/long_run.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <random>
#include <vector>

using namespace qtail;

namespace {

// Samples a DistSpec with standard library machinery rather than the library's quantile code.
class StdSampler {
   public:
    explicit StdSampler(const DistSpec &dist) : dist_(dist) {
        if (dist.kind() == DistKind::BoundedDiscrete) {
            discrete_ = std::discrete_distribution<int64_t>(dist.pmf().begin(), dist.pmf().end());
        }
    }

    double operator()(std::mt19937_64 &rng) {
        switch (dist_.kind()) {
            case DistKind::BoundedDiscrete:
                return static_cast<double>(discrete_(rng));
            case DistKind::Exponential:
                return std::exponential_distribution<double>(dist_.rate())(rng);
            case DistKind::Deterministic:
                return dist_.value();
            case DistKind::EmpiricalQuantile: {
                std::uniform_int_distribution<size_t> pick(0, dist_.table().size() - 1);
                return dist_.table()[pick(rng)];
            }
        }
        return 0;
    }

   private:
    const DistSpec &dist_;
    std::discrete_distribution<int64_t> discrete_;
};

LongRunResult finish(const std::vector<int64_t> &hits, const std::vector<int64_t> &counts) {
    RatioMoments rm;
    LongRunResult out;
    for (size_t b = 0; b < hits.size(); b++) {
        if (counts[b] == 0) {
            continue;
        }
        rm.add(static_cast<double>(hits[b]), static_cast<double>(counts[b]));
        out.customers += counts[b];
        out.batches++;
    }
    out.tail = {rm.ratio(), rm.std_error()};
    return out;
}

}  // namespace

LongRunResult qtail::long_run_gg1(const Gg1Params &params, int64_t n_arrivals, uint64_t seed, int64_t batches) {
    std::mt19937_64 rng(seed);
    StdSampler draw_a(params.arrival_dist);
    StdSampler draw_s(params.service_dist);
    double cap = params.clip.enabled ? params.clip.level_B : std::numeric_limits<double>::infinity();
    std::vector<int64_t> hits(batches, 0);
    std::vector<int64_t> counts(batches, 0);
    int64_t per_batch = std::max<int64_t>(1, n_arrivals / batches);
    double w = 0;
    for (int64_t n = 0; n < per_batch * batches; n++) {
        double a = std::min(draw_a(rng), cap);
        double s = std::min(draw_s(rng), cap);
        double sojourn = w + s;
        w = std::max(0.0, w + s - a);
        bool hit = params.metric == DelayMetric::WaitingTime ? w >= params.threshold_d : sojourn >= params.threshold_d;
        int64_t b = n / per_batch;
        hits[b] += hit ? 1 : 0;
        counts[b]++;
    }
    return finish(hits, counts);
}

LongRunResult qtail::long_run_wireless(const WirelessParams &params, int64_t n_slots, uint64_t seed, int64_t batches) {
    std::mt19937_64 rng(seed);
    const int K = params.K();
    std::vector<StdSampler> arrivals;
    std::vector<StdSampler> channels;
    for (int i = 0; i < K; i++) {
        arrivals.emplace_back(params.arrival_pmfs[i]);
        channels.emplace_back(params.channel_pmfs[i]);
    }
    std::vector<std::deque<int64_t>> queues(K);
    std::vector<char> in_I(K, 0);
    for (int i : params.subset_I) {
        in_I[i] = 1;
    }
    std::vector<int64_t> a(K);
    std::vector<int64_t> mu(K);
    std::vector<int64_t> hits(batches, 0);
    std::vector<int64_t> counts(batches, 0);
    int64_t per_batch = std::max<int64_t>(1, n_slots / batches);
    for (int64_t t = 0; t < per_batch * batches; t++) {
        for (int i = 0; i < K; i++) {
            a[i] = static_cast<int64_t>(arrivals[i](rng));
        }
        for (int i = 0; i < K; i++) {
            mu[i] = static_cast<int64_t>(channels[i](rng));
        }
        int best = 0;
        int64_t best_w = static_cast<int64_t>(queues[0].size()) * mu[0];
        for (int i = 1; i < K; i++) {
            int64_t wgt = static_cast<int64_t>(queues[i].size()) * mu[i];
            if (wgt > best_w) {
                best_w = wgt;
                best = i;
            }
        }
        int64_t b = t / per_batch;
        int64_t served = std::min<int64_t>(static_cast<int64_t>(queues[best].size()), mu[best]);
        for (int64_t l = 0; l < served; l++) {
            int64_t stamp = queues[best].front();
            queues[best].pop_front();
            if (in_I[best]) {
                counts[b]++;
                hits[b] += t - stamp >= params.threshold_d ? 1 : 0;
            }
        }
        for (int i = 0; i < K; i++) {
            for (int64_t l = 0; l < a[i]; l++) {
                queues[i].push_back(t);
            }
        }
    }
    return finish(hits, counts);
}

LongRunResult qtail::long_run_jsq(const JsqParams &params, int64_t n_jobs, uint64_t seed, int64_t batches) {
    std::mt19937_64 rng(seed);
    const double inf = std::numeric_limits<double>::infinity();
    double cap = params.clip_enabled ? params.clip_B : inf;
    std::exponential_distribution<double> interarrival(params.lambda);
    StdSampler service(params.service_dist);
    const int K = params.K;
    std::vector<std::deque<double>> jobs(K);  // arrival epochs, head in service
    std::vector<double> done_at(K, inf);
    double now = 0;
    double next_arrival = std::min(interarrival(rng), cap);
    std::vector<int64_t> hits(batches, 0);
    std::vector<int64_t> counts(batches, 0);
    int64_t per_batch = std::max<int64_t>(1, n_jobs / batches);
    int64_t departed = 0;
    while (departed < per_batch * batches) {
        int server = -1;
        double t_dep = inf;
        for (int i = 0; i < K; i++) {
            if (done_at[i] < t_dep) {
                t_dep = done_at[i];
                server = i;
            }
        }
        if (server >= 0 && t_dep <= next_arrival) {
            now = t_dep;
            double arrived = jobs[server].front();
            jobs[server].pop_front();
            int64_t b = departed / per_batch;
            counts[b]++;
            hits[b] += now - arrived > params.threshold_d ? 1 : 0;
            departed++;
            done_at[server] = jobs[server].empty() ? inf : now + std::min(service(rng), cap);
            continue;
        }
        now = next_arrival;
        int j = 0;
        for (int i = 1; i < K; i++) {
            if (jobs[i].size() < jobs[j].size()) {
                j = i;
            }
        }
        jobs[j].push_back(now);
        if (jobs[j].size() == 1) {
            done_at[j] = now + std::min(service(rng), cap);
        }
        next_arrival = now + std::min(interarrival(rng), cap);
    }
    return finish(hits, counts);
}
