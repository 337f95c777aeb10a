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

#include "qtail/maxweight_cycle.h"

#include <algorithm>

using namespace qtail;

int64_t WirelessParams::a_max() const {
    double m = 0;
    for (const auto &d : arrival_pmfs) {
        m = std::max(m, d.max_value());
    }
    return static_cast<int64_t>(m);
}

int64_t WirelessParams::mu_max() const {
    double m = 0;
    for (const auto &d : channel_pmfs) {
        m = std::max(m, d.max_value());
    }
    return static_cast<int64_t>(m);
}

bool WirelessParams::in_subset(int queue) const {
    return std::find(subset_I.begin(), subset_I.end(), queue) != subset_I.end();
}

void qtail::validate(const WirelessParams &params) {
    auto fail = [](const std::string &m) { throw Error(ErrorCode::InvalidArgument, m); };
    if (params.K() < 1) {
        fail("wireless model needs K >= 1");
    }
    if (params.channel_pmfs.size() != params.arrival_pmfs.size()) {
        fail("need one channel pmf per queue");
    }
    for (const auto &d : params.arrival_pmfs) {
        if (d.kind() != DistKind::BoundedDiscrete) {
            fail("arrival laws must be bounded-discrete pmfs");
        }
    }
    for (const auto &d : params.channel_pmfs) {
        if (d.kind() != DistKind::BoundedDiscrete) {
            fail("channel laws must be bounded-discrete pmfs");
        }
    }
    if (params.subset_I.empty()) {
        fail("subset_I must be nonempty");
    }
    for (int i : params.subset_I) {
        if (i < 0 || i >= params.K()) {
            fail("subset_I index " + std::to_string(i) + " out of range");
        }
    }
    if (params.horizon_M < 1) {
        fail("horizon_M must be >= 1");
    }
    if (params.threshold_d < 0) {
        fail("threshold_d must be >= 0");
    }
}

int qtail::maxweight_schedule(std::span<const int64_t> Q, std::span<const int64_t> mu) {
    int best = 0;
    int64_t best_weight = Q[0] * mu[0];
    for (size_t i = 1; i < Q.size(); i++) {
        int64_t w = Q[i] * mu[i];
        if (w > best_weight) {
            best_weight = w;
            best = static_cast<int>(i);
        }
    }
    return best;
}

void TimestampRing::push_back(int64_t slot) {
    if (size_ >= capacity_) {
        throw Error(
            ErrorCode::BufferOverflow, "timestamp buffer capacity " + std::to_string(capacity_) + " exceeded");
    }
    if (static_cast<size_t>(size_) == data_.size()) {
        // Grow and unwrap.
        std::vector<int64_t> grown(std::max<size_t>(8, data_.size() * 2));
        for (int64_t k = 0; k < size_; k++) {
            grown[k] = data_[(head_ + k) % data_.size()];
        }
        data_ = std::move(grown);
        head_ = 0;
    }
    data_[(head_ + size_) % data_.size()] = slot;
    size_++;
}

int64_t TimestampRing::pop_front() {
    int64_t v = data_[head_];
    head_ = (head_ + 1) % data_.size();
    size_--;
    return v;
}

WirelessCycleStats qtail::run_wireless_cycle(
    SeedStream &stream, const WirelessParams &params, int64_t horizon, int64_t capacity, SlotObserver *observer) {
    const int K = params.K();
    std::vector<int64_t> q(K, 0);
    std::vector<int64_t> q_start(K, 0);
    std::vector<int64_t> arrivals(K, 0);
    std::vector<int64_t> channel(K, 0);
    std::vector<int64_t> departures(K, 0);
    std::vector<char> in_I(K, 0);
    for (int i : params.subset_I) {
        in_I[i] = 1;
    }
    std::vector<TimestampRing> buffers(K, TimestampRing(capacity));

    WirelessCycleStats out;
    for (int64_t t = 0; t < horizon; t++) {
        for (int i = 0; i < K; i++) {
            arrivals[i] = static_cast<int64_t>(params.arrival_pmfs[i].quantile(stream.draw_uniform().value));
        }
        for (int i = 0; i < K; i++) {
            channel[i] = static_cast<int64_t>(params.channel_pmfs[i].quantile(stream.draw_uniform().value));
        }
        q_start = q;
        int s = maxweight_schedule(q, channel);
        std::fill(departures.begin(), departures.end(), 0);
        departures[s] = std::min(q[s], channel[s]);
        for (int64_t l = 0; l < departures[s]; l++) {
            int64_t a = buffers[s].pop_front();
            if (in_I[s] && t - a >= params.threshold_d) {
                out.J_M++;
            }
            if (observer != nullptr) {
                observer->on_departure(s, a, t);
            }
        }
        q[s] -= departures[s];
        for (int i = 0; i < K; i++) {
            q[i] += arrivals[i];
            for (int64_t l = 0; l < arrivals[i]; l++) {
                buffers[i].push_back(t);
            }
            if (in_I[i]) {
                out.N_M += arrivals[i];
            }
        }
        if (observer != nullptr) {
            observer->on_slot({t, q_start, arrivals, channel, departures, s});
        }
        if (std::all_of(q.begin(), q.end(), [](int64_t v) { return v == 0; })) {
            out.T_M = t + 1;
            out.truncated = false;
            return out;
        }
    }
    out.T_M = horizon;
    out.truncated = true;
    for (int64_t v : q) {
        out.backlog += v;
    }
    return out;
}

WirelessCycleStats qtail::evaluate_wireless_cycle(SeedStream stream, const WirelessParams &params) {
    int64_t capacity =
        params.buffer_capacity > 0 ? params.buffer_capacity : params.horizon_M * std::max<int64_t>(1, params.a_max());
    return run_wireless_cycle(stream, params, params.horizon_M, capacity, nullptr);
}

WirelessCycleStats qtail::evaluate_full_wireless_cycle(
    SeedStream stream, const WirelessParams &params, int64_t safety_cap) {
    int64_t capacity =
        params.buffer_capacity > 0 ? params.buffer_capacity : safety_cap * std::max<int64_t>(1, params.a_max());
    auto stats = run_wireless_cycle(stream, params, safety_cap, capacity, nullptr);
    if (stats.truncated) {
        throw Error(
            ErrorCode::CapExceeded,
            "wireless cycle for cycle_index " + std::to_string(stream.cycle_index()) + " did not regenerate within " +
                std::to_string(safety_cap) + " slots");
    }
    return stats;
}
