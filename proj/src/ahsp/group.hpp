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

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace ahsp {

using Int = std::int64_t;

/// Largest group order the exhaustive helpers will enumerate by default.
inline constexpr std::size_t kDefaultEnumerationBound = std::size_t{1} << 20;

// Exact integer helpers. Overflow throws ErrorKind::ResourceCap.
Int checked_mul(Int a, Int b);
Int checked_lcm(Int a, Int b);
Int gcd(Int a, Int b);
/// Representative of a in [0, n).
Int mod_floor(Int a, Int n);

class GroupElement;

/// G = Z_{N_1} + ... + Z_{N_k}, given by its cyclic decomposition. Cheap to
/// copy; two groups compare equal when their moduli lists match.
class FiniteAbelianGroup {
   public:
    explicit FiniteAbelianGroup(std::vector<Int> moduli);

    std::size_t rank() const noexcept;
    const std::vector<Int> &moduli() const noexcept;
    Int modulus(std::size_t j) const;
    /// M = lcm(N_1, ..., N_k).
    Int exponent() const noexcept;
    /// alpha_j = M / N_j.
    const std::vector<Int> &alphas() const noexcept;
    Int order() const noexcept;

    /// Builds an element, reducing every coordinate into [0, N_j).
    GroupElement element(std::span<const Int> coords) const;
    GroupElement element(std::initializer_list<Int> coords) const;
    GroupElement zero() const;

    // Row-major flat indexing, leftmost factor most significant. This is the
    // same order the state vector uses for the A register.
    GroupElement element_at(std::uint64_t index) const;
    std::uint64_t index_of(const GroupElement &x) const;

    std::vector<GroupElement> elements(std::size_t bound = kDefaultEnumerationBound) const;

    std::string to_string() const;

    friend bool operator==(const FiniteAbelianGroup &a, const FiniteAbelianGroup &b) {
        return a.data_ == b.data_ || a.moduli() == b.moduli();
    }

   private:
    struct Data {
        std::vector<Int> moduli;
        std::vector<Int> alphas;
        Int exponent = 1;
        Int order = 1;
    };
    std::shared_ptr<const Data> data_;
};

class GroupElement {
   public:
    GroupElement(FiniteAbelianGroup group, std::vector<Int> reduced_coords);

    const FiniteAbelianGroup &group() const noexcept {
        return group_;
    }
    const std::vector<Int> &coords() const noexcept {
        return coords_;
    }
    Int operator[](std::size_t j) const {
        return coords_[j];
    }
    bool is_zero() const noexcept;

    GroupElement operator+(const GroupElement &other) const;
    GroupElement operator-(const GroupElement &other) const;
    GroupElement operator-() const;

    std::string to_string() const;

    friend bool operator==(const GroupElement &a, const GroupElement &b) {
        return a.coords_ == b.coords_ && a.group_ == b.group_;
    }
    friend bool operator<(const GroupElement &a, const GroupElement &b) {
        return a.coords_ < b.coords_;
    }

   private:
    FiniteAbelianGroup group_;
    std::vector<Int> coords_;
};

/// x . y = sum_j alpha_j x_j y_j mod M, returned in [0, M).
Int inner_product(const GroupElement &x, const GroupElement &y);

/// gcd(raw mod N, N), or N when that is zero (the trivial subgroup).
Int normalize_generator(Int raw, Int modulus);

/// H = <h_1> + ... + <h_k> with every h_j a divisor of N_j. The trivial
/// component {0} is encoded as h_j = N_j.
class ProductSubgroup {
   public:
    /// Normalizes each raw generator; a non-divisor is replaced by the
    /// divisor generating the same cyclic subgroup.
    ProductSubgroup(FiniteAbelianGroup parent, std::vector<Int> raw_generators);

    static ProductSubgroup trivial(const FiniteAbelianGroup &parent);
    static ProductSubgroup whole(const FiniteAbelianGroup &parent);

    const FiniteAbelianGroup &parent() const noexcept {
        return parent_;
    }
    const std::vector<Int> &generators() const noexcept {
        return generators_;
    }
    Int generator(std::size_t j) const {
        return generators_[j];
    }
    /// |H| = prod N_j / h_j.
    Int order() const noexcept {
        return order_;
    }
    /// |G/H| = prod h_j.
    Int index() const noexcept {
        return index_;
    }
    /// G/H as the group Z_{h_1} + ... + Z_{h_k}.
    FiniteAbelianGroup quotient_group() const;

    bool contains(const GroupElement &x) const;
    std::vector<GroupElement> elements(std::size_t bound = kDefaultEnumerationBound) const;

    std::string to_string() const;

    friend bool operator==(const ProductSubgroup &a, const ProductSubgroup &b) {
        return a.generators_ == b.generators_ && a.parent_ == b.parent_;
    }

   private:
    FiniteAbelianGroup parent_;
    std::vector<Int> generators_;
    Int order_ = 1;
    Int index_ = 1;
};

/// H-perp = <N_1/h_1> + ... + <N_k/h_k>.
ProductSubgroup orthogonal_subgroup(const ProductSubgroup &subgroup);

/// Checks x . h = 0 on the per-component generators of H; bilinearity
/// extends this to all of H.
bool is_orthogonal(const GroupElement &x, const ProductSubgroup &subgroup);
/// Same predicate, evaluated against every element of H.
bool is_orthogonal_exhaustive(const GroupElement &x, const ProductSubgroup &subgroup);

/// H-perp by scanning all of G against every element of H. Sorted.
std::vector<GroupElement> brute_force_orthogonal(
    const ProductSubgroup &subgroup, std::size_t bound = kDefaultEnumerationBound);

/// Canonical representative of x + H: coordinates x_j mod h_j.
GroupElement coset_representative(const GroupElement &x, const ProductSubgroup &subgroup);
/// One lexicographically smallest element per coset, |G|/|H| in total,
/// in row-major order.
std::vector<GroupElement> coset_representatives(const ProductSubgroup &subgroup);

/// Smallest product subgroup containing every sample. An empty list gives {0}.
ProductSubgroup subgroup_generated_by(
    const FiniteAbelianGroup &group, std::span<const GroupElement> samples);

/// Positive divisors of n in increasing order.
std::vector<Int> divisors(Int n);

/// Every product subgroup of G, in lexicographic order of generator tuples.
std::vector<ProductSubgroup> all_product_subgroups(const FiniteAbelianGroup &group);

}  // namespace ahsp
