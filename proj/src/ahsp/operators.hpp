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
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "ahsp/group.hpp"
#include "ahsp/state.hpp"

namespace ahsp {

/// Per-run instrumentation. Operators bump these when handed a non-null
/// pointer.
struct OperationCounters {
    std::uint64_t oracle_calls = 0;
    std::uint64_t qft_calls = 0;
    std::uint64_t s_z_calls = 0;

    OperationCounters &operator+=(const OperationCounters &o) {
        oracle_calls += o.oracle_calls;
        qft_calls += o.qft_calls;
        s_z_calls += o.s_z_calls;
        return *this;
    }
};

/// e^{2 pi i (a mod n) / n}, reducing the exponent exactly first.
Complex root_of_unity(Int exponent, Int n);

/// F_N with entry (l, j) = omega_N^{jl} / sqrt(N).
ComplexMatrix qft_matrix(Int n);

enum class Direction { Forward, Inverse };

/// F_{N_1} x ... x F_{N_k} on the listed sites, one cyclic factor at a time.
void apply_qft_group(PureState &state, const FiniteAbelianGroup &group, std::span<const std::size_t> targets,
                     Direction direction = Direction::Forward, OperationCounters *counters = nullptr);
void apply_qft_group(const MixedRadixRegister &reg, std::span<Complex> amps, const FiniteAbelianGroup &group,
                     std::span<const std::size_t> targets, Direction direction = Direction::Forward,
                     OperationCounters *counters = nullptr);

/// Register whose sites are the cyclic factors of G.
MixedRadixRegister group_register(const FiniteAbelianGroup &group);

/// |r + H>: amplitude 1/sqrt|H| on every element of the coset.
PureState coset_state(const GroupElement &r, const ProductSubgroup &subgroup);

/// sqrt(|H|/|G|) sum_{t in H-perp} omega_M^{r.t} |t>, built directly from
/// the group data without running a transform.
PureState qft_of_coset_state_reference(const GroupElement &r, const ProductSubgroup &subgroup);

/// f: G -> Y = Z_{h_1} + ... + Z_{h_k}, stored as a table over flat
/// indices, that separates the cosets of the planted subgroup.
class HidingFunction {
   public:
    /// table[i] is the flat index in Y of f(G.element_at(i)). Validates that
    /// f is constant exactly on cosets of `hidden` and onto Y.
    HidingFunction(ProductSubgroup hidden, std::vector<std::uint32_t> table);

    /// f(x) = (x_1 mod h_1, ..., x_k mod h_k), optionally composed with a
    /// uniformly random relabeling of Y.
    static HidingFunction canonical(const ProductSubgroup &hidden,
                                    std::optional<std::uint64_t> relabel_seed = std::nullopt);

    const FiniteAbelianGroup &domain() const noexcept {
        return hidden_.parent();
    }
    const FiniteAbelianGroup &codomain() const noexcept {
        return codomain_;
    }
    const ProductSubgroup &hidden() const noexcept {
        return hidden_;
    }
    std::span<const std::uint32_t> table() const noexcept {
        return table_;
    }
    std::uint32_t value_index(std::uint64_t x_index) const {
        return table_[x_index];
    }
    GroupElement operator()(const GroupElement &x) const;

    /// Flat index of y + v in Y for every y, v in Y (row v, column y).
    /// Built on first use and shared between copies.
    std::span<const std::uint32_t> addition_table() const;

   private:
    struct Lazy;

    ProductSubgroup hidden_;
    FiniteAbelianGroup codomain_;
    std::vector<std::uint32_t> table_;
    std::shared_ptr<Lazy> lazy_;
};

/// U_f |x>_A |y>_B = |x>_A |y + f(x)>_B with componentwise addition in Y;
/// Direction::Inverse subtracts f(x).
void apply_oracle(PureState &state, const HidingFunction &f, std::span<const std::size_t> a_targets,
                  std::span<const std::size_t> b_targets, Direction direction = Direction::Forward,
                  OperationCounters *counters = nullptr);
void apply_oracle(const MixedRadixRegister &reg, std::span<Complex> amps, const HidingFunction &f,
                  std::span<const std::size_t> a_targets, std::span<const std::size_t> b_targets,
                  Direction direction = Direction::Forward, OperationCounters *counters = nullptr);

/// S_z |y> = omega_{h_1}^{z_1 y_1} ... omega_{h_k}^{z_k y_k} |-y>.
void s_z_apply(PureState &state, const GroupElement &z, std::span<const std::size_t> b_targets,
               OperationCounters *counters = nullptr);
void s_z_apply(const MixedRadixRegister &reg, std::span<Complex> amps, const GroupElement &z,
               std::span<const std::size_t> b_targets, OperationCounters *counters = nullptr);

}  // namespace ahsp
