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

#ifndef QTAIL_MAXWEIGHT_CYCLE_H
#define QTAIL_MAXWEIGHT_CYCLE_H

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qtail/distributions.h"
#include "qtail/error.h"
#include "qtail/seedstream.h"

namespace qtail {

/// K-queue slotted downlink. Queue indices are 0-based throughout.
struct WirelessParams {
    std::vector<DistSpec> arrival_pmfs;  // bounded-discrete, one per queue
    std::vector<DistSpec> channel_pmfs;  // bounded-discrete, one per queue
    std::vector<int> subset_I;
    int64_t threshold_d = 0;
    int64_t horizon_M = 1;
    /// Timestamp ring capacity per queue; 0 means horizon * A_max.
    int64_t buffer_capacity = 0;

    int K() const {
        return static_cast<int>(arrival_pmfs.size());
    }
    int64_t a_max() const;
    int64_t mu_max() const;
    bool in_subset(int queue) const;
};

void validate(const WirelessParams &params);

struct WirelessCycleStats {
    int64_t N_M = 0;  // arrivals to I by T_M
    int64_t J_M = 0;  // delay >= d departures from I by T_M
    int64_t T_M = 0;
    bool truncated = false;
    int64_t backlog = 0;  // packets left in all queues at T_M

    bool operator==(const WirelessCycleStats &other) const = default;
};

/// argmax_i Q_i * mu_i, lowest index on ties.
int maxweight_schedule(std::span<const int64_t> Q, std::span<const int64_t> mu);

/// FIFO of arrival slots with a hard capacity; storage grows on demand up to the capacity.
class TimestampRing {
   public:
    explicit TimestampRing(int64_t capacity) : capacity_(capacity) {
    }
    void push_back(int64_t slot);
    int64_t pop_front();
    int64_t size() const {
        return size_;
    }
    bool empty() const {
        return size_ == 0;
    }
    int64_t front() const {
        return data_[head_];
    }

   private:
    std::vector<int64_t> data_;
    int64_t capacity_;
    size_t head_ = 0;
    int64_t size_ = 0;
};

/// Per-slot view for invariant checks in tests.
struct SlotRecord {
    int64_t slot;
    std::span<const int64_t> queue_start;  // Q(t)
    std::span<const int64_t> arrivals;
    std::span<const int64_t> channel;
    std::span<const int64_t> departures;
    int scheduled;
};

struct SlotObserver {
    virtual ~SlotObserver() = default;
    virtual void on_slot(const SlotRecord &record) = 0;
    virtual void on_departure(int queue, int64_t arrival_slot, int64_t departure_slot) = 0;
};

/// Runs one regeneration cycle from the all-zero queue vector for at most `horizon` slots.
///
/// Per slot: draw A_1..A_K then mu_1..mu_K, schedule by MaxWeight on the start-of-slot queues, pop
/// min{Q, mu} head-of-line timestamps from the scheduled queue (departures first), push arrivals stamped
/// with the slot index, then stop if every queue is empty.
WirelessCycleStats run_wireless_cycle(
    SeedStream &stream, const WirelessParams &params, int64_t horizon, int64_t capacity, SlotObserver *observer);

WirelessCycleStats evaluate_wireless_cycle(SeedStream stream, const WirelessParams &params);

/// Untruncated cycle; throws CapExceeded if it has not regenerated after safety_cap slots.
WirelessCycleStats evaluate_full_wireless_cycle(SeedStream stream, const WirelessParams &params, int64_t safety_cap);

}  // namespace qtail

#endif
