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

#ifndef QTAIL_SEEDSTREAM_H
#define QTAIL_SEEDSTREAM_H

#include <array>
#include <cstdint>

namespace qtail {

/// Philox4x32 with 10 rounds (Salmon et al.), the keyed bijection behind every draw.
std::array<uint32_t, 4> philox4x32_10(std::array<uint32_t, 4> counter, std::array<uint32_t, 2> key);

/// Mixes a tag into a seed, giving an independent key for a named purpose (numerator, denominator, ...).
uint64_t derive_seed(uint64_t master_seed, uint64_t tag);

struct UniformDraw {
    double value;   // in [0, 1), a multiple of 2^-bit_width
    int bit_width;
};

/// A counter-addressed randomness source for one regeneration cycle.
///
/// The value of the j-th draw (j = 1, 2, ...) is a pure function of (master_seed, cycle_index, j): the
/// counter block (j, cycle_index) is pushed through Philox keyed by master_seed. Nothing else feeds in,
/// so streams are plain values and can be created on any thread in any order.
class SeedStream {
   public:
    static constexpr int kDefaultBitWidth = 53;

    SeedStream(uint64_t master_seed, uint64_t cycle_index, int bit_width = kDefaultBitWidth);

    /// Brute-force mode: the m-bit integer omega is the whole randomness tape. The 2^m values of omega
    /// enumerate exactly 2^m distinct streams.
    static SeedStream from_seed_bits(
        uint64_t master_seed, uint64_t omega, int seed_bits, int bit_width = kDefaultBitWidth);

    /// Returns PRNG(omega, call_index + 1) and advances call_index.
    UniformDraw draw_uniform();

    /// Raw 64-bit Philox output at call index j. Does not touch call_index.
    uint64_t raw_at(uint64_t j) const;

    /// An independent stream for the same cycle, used where one cycle needs separately indexed sources
    /// (the JSQ simulator keeps arrivals, splitting coins and per-server services apart).
    SeedStream lane(uint64_t lane_id) const;

    uint64_t master_seed() const {
        return master_seed_;
    }
    uint64_t cycle_index() const {
        return cycle_index_;
    }
    uint64_t call_index() const {
        return call_index_;
    }
    int bit_width() const {
        return bit_width_;
    }

    bool operator==(const SeedStream &other) const = default;

   private:
    uint64_t master_seed_;
    uint64_t key_;
    uint64_t cycle_index_;
    uint64_t call_index_ = 0;
    int bit_width_;
};

/// Fresh stream for a cycle, positioned before its first draw (call_index = 0).
SeedStream fork_cycle(uint64_t master_seed, uint64_t cycle_index, int bit_width = SeedStream::kDefaultBitWidth);

}  // namespace qtail

#endif
