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

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "ahsp/algorithms.hpp"
#include "ahsp/group.hpp"
#include "ahsp/rng.hpp"

namespace ahsp {

/// Running span of the H-perp samples seen so far.
struct RecoveryState {
    ProductSubgroup span;
    std::uint64_t samples_consumed = 0;
    std::uint64_t stable_streak = 0;

    static RecoveryState start(const FiniteAbelianGroup &group);
};

RecoveryState ingest(const RecoveryState &state, const GroupElement &tau);

/// ceil(log2 |G|) + 4.
std::uint64_t blind_streak_length(const FiniteAbelianGroup &group);

class StopRule {
   public:
    /// Stop once the span has not grown for ceil(log2|G|) + 4 samples.
    static StopRule blind(const FiniteAbelianGroup &group);
    static StopRule stable_for(std::uint64_t streak);
    /// Stop as soon as the span equals the planted H-perp.
    static StopRule verification(const ProductSubgroup &planted);

    bool fires(const RecoveryState &state) const;
    std::uint64_t streak() const noexcept {
        return streak_;
    }
    bool is_verification() const noexcept {
        return target_.has_value();
    }

   private:
    std::uint64_t streak_ = 0;
    std::optional<ProductSubgroup> target_;
};

using SampleSource = std::function<GroupElement()>;

struct RecoveryResult {
    ProductSubgroup estimate;
    /// Number of samples drawn, i.e. algorithm runs.
    std::uint64_t queries_used = 0;
    /// False when the budget ran out before the stop rule fired.
    bool complete = false;
    // Filled in when the planted subgroup is known.
    std::optional<bool> matches_planted;
    std::optional<bool> sound;
};

/// Accumulates samples until `stop` fires, then returns the orthogonal
/// subgroup of the span.
RecoveryResult recover_hidden_subgroup(const FiniteAbelianGroup &group, const SampleSource &source,
                                       const StopRule &stop, std::uint64_t budget,
                                       const std::optional<ProductSubgroup> &planted = std::nullopt);

/// The subgroup recovered from a span by scanning G for orthogonal elements
/// instead of using the per-component formula.
ProductSubgroup recover_by_brute_force(const ProductSubgroup &span);

struct QueryStatistics {
    std::size_t trials = 0;
    double mean = 0;
    std::uint64_t min = 0;
    std::uint64_t p50 = 0;
    std::uint64_t p90 = 0;
    std::uint64_t p99 = 0;
    std::uint64_t max = 0;
    /// Fraction of trials matching the planted subgroup, when known.
    std::optional<double> success_rate;
};

QueryStatistics query_statistics(std::span<const RecoveryResult> trials);

struct ScalingRow {
    Int group_order = 0;
    double log2_order = 0;
    double mean_queries = 0;
    double queries_per_log2 = 0;
};

struct ScalingReport {
    std::vector<ScalingRow> rows;
    /// Least-squares c in mean_queries ~ c * log2|G|.
    double fitted_constant = 0;
};

ScalingReport scaling_report(std::span<const std::pair<Int, QueryStatistics>> per_order);

/// Uniform samples of H-perp drawn directly from the group structure.
SampleSource synthetic_source(const ProductSubgroup &hidden, RandomStream &rng);

/// Standard pipeline. The pre-measurement state is the same every run, so
/// it is simulated once and each call measures a fresh copy.
class StandardSampler {
   public:
    explicit StandardSampler(const HidingFunction &f);
    GroupElement next(RandomStream &rng);
    std::uint64_t oracle_calls() const noexcept {
        return oracle_calls_;
    }

   private:
    FiniteAbelianGroup group_;
    std::vector<double> probs_;
    std::uint64_t calls_per_run_ = 0;
    std::uint64_t oracle_calls_ = 0;
};

/// Initialization-free pipeline. Each call draws z (and an ensemble member
/// for mixed aux states) and measures the simulated final state; states are
/// simulated once per distinct (z, member) and cached.
class IfqaSampler {
   public:
    IfqaSampler(HidingFunction f, AuxSpec aux);
    GroupElement next(RandomStream &rng);
    std::uint64_t oracle_calls() const noexcept {
        return oracle_calls_;
    }
    /// Smallest |<Phi|B_after>| over every simulated (z, member).
    double min_restoration_fidelity() const noexcept {
        return min_fidelity_;
    }

   private:
    const std::vector<double> &distribution(std::uint64_t z_index, std::size_t member);

    HidingFunction f_;
    AuxSpec aux_;
    std::map<std::pair<std::uint64_t, std::size_t>, std::vector<double>> cache_;
    std::uint64_t calls_per_run_ = 0;
    std::uint64_t oracle_calls_ = 0;
    double min_fidelity_ = 1.0;
};

}  // namespace ahsp
