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

#include "qtail/seedstream.h"

#include <string>

#include "qtail/error.h"

using namespace qtail;

namespace {

constexpr uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr uint32_t kPhiloxW1 = 0xBB67AE85u;

// Counter word reserved for derive_seed so derived keys never collide with cycle draws.
constexpr uint32_t kDeriveDomain = 0xA5EED5EDu;

inline uint32_t lo32(uint64_t x) {
    return static_cast<uint32_t>(x);
}
inline uint32_t hi32(uint64_t x) {
    return static_cast<uint32_t>(x >> 32);
}

}  // namespace

std::array<uint32_t, 4> qtail::philox4x32_10(std::array<uint32_t, 4> ctr, std::array<uint32_t, 2> key) {
    for (int round = 0; round < 10; round++) {
        uint64_t p0 = uint64_t{kPhiloxM0} * ctr[0];
        uint64_t p1 = uint64_t{kPhiloxM1} * ctr[2];
        ctr = {hi32(p1) ^ ctr[1] ^ key[0], lo32(p1), hi32(p0) ^ ctr[3] ^ key[1], lo32(p0)};
        key[0] += kPhiloxW0;
        key[1] += kPhiloxW1;
    }
    return ctr;
}

uint64_t qtail::derive_seed(uint64_t master_seed, uint64_t tag) {
    auto out = philox4x32_10({lo32(tag), hi32(tag), kDeriveDomain, kDeriveDomain}, {lo32(master_seed), hi32(master_seed)});
    return (uint64_t{out[1]} << 32) | out[0];
}

SeedStream::SeedStream(uint64_t master_seed, uint64_t cycle_index, int bit_width)
    : master_seed_(master_seed), key_(master_seed), cycle_index_(cycle_index), bit_width_(bit_width) {
    if (bit_width < 1 || bit_width > 53) {
        throw Error(ErrorCode::InvalidArgument, "bit_width must lie in [1, 53], got " + std::to_string(bit_width));
    }
}

SeedStream SeedStream::from_seed_bits(uint64_t master_seed, uint64_t omega, int seed_bits, int bit_width) {
    if (seed_bits < 1 || seed_bits > 63) {
        throw Error(ErrorCode::InvalidArgument, "seed_bits must lie in [1, 63]");
    }
    if (omega >> seed_bits) {
        throw Error(ErrorCode::InvalidArgument, "omega does not fit in " + std::to_string(seed_bits) + " bits");
    }
    return SeedStream(master_seed, omega, bit_width);
}

uint64_t SeedStream::raw_at(uint64_t j) const {
    auto out = philox4x32_10({lo32(j), hi32(j), lo32(cycle_index_), hi32(cycle_index_)}, {lo32(key_), hi32(key_)});
    return (uint64_t{out[1]} << 32) | out[0];
}

UniformDraw SeedStream::draw_uniform() {
    call_index_++;
    uint64_t bits = raw_at(call_index_) >> (64 - bit_width_);
    return {static_cast<double>(bits) * (1.0 / static_cast<double>(uint64_t{1} << bit_width_)), bit_width_};
}

SeedStream SeedStream::lane(uint64_t lane_id) const {
    SeedStream result = *this;
    result.key_ = derive_seed(key_, lane_id + 1);
    result.call_index_ = 0;
    return result;
}

SeedStream qtail::fork_cycle(uint64_t master_seed, uint64_t cycle_index, int bit_width) {
    return SeedStream(master_seed, cycle_index, bit_width);
}
