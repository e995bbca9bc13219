// Copyright 2026 The ahsp-sim Authors
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

#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace ahsp {

/// Philox4x32-10 block function: a keyed bijection on 128-bit counters.
class Philox4x32 {
   public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter encrypt(Counter counter, Key key) noexcept;
};

/// Reproducible random stream over Philox. A stream is named by
/// (seed, stream id); it draws from consecutive counters within that
/// name, and substream(i) derives an independent child name. Streams are
/// values: copying one forks an identical sequence.
///
/// Satisfies UniformRandomBitGenerator so it plugs into <random>.
class RandomStream {
   public:
    using result_type = std::uint32_t;

    explicit RandomStream(std::uint64_t seed, std::uint64_t stream_id = 0) noexcept;

    static constexpr result_type min() noexcept {
        return 0;
    }
    static constexpr result_type max() noexcept {
        return std::numeric_limits<result_type>::max();
    }
    result_type operator()() noexcept;

    RandomStream substream(std::uint64_t index) const noexcept;

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() noexcept;
    /// Uniform integer in [0, bound), unbiased.
    std::uint64_t uniform_below(std::uint64_t bound) noexcept;
    std::uint64_t next_u64() noexcept;

    std::uint64_t seed() const noexcept {
        return seed_;
    }
    std::uint64_t stream_id() const noexcept {
        return stream_id_;
    }

   private:
    void refill() noexcept;

    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::uint64_t block_ = 0;
    Philox4x32::Counter buffer_{};
    unsigned used_ = 4;
};

}  // namespace ahsp
