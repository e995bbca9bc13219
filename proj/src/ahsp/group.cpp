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

#include "ahsp/group.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "ahsp/error.hpp"

namespace ahsp {

namespace {

std::string join(const std::vector<Int> &values) {
    std::ostringstream out;
    out << '(';
    for (std::size_t j = 0; j < values.size(); ++j) {
        if (j) out << ',';
        out << values[j];
    }
    out << ')';
    return out.str();
}

void require_same_group(const FiniteAbelianGroup &a, const FiniteAbelianGroup &b, const char *op) {
    if (!(a == b)) {
        fail_invalid(std::string(op) + ": elements belong to different groups " + a.to_string() +
                     " and " + b.to_string());
    }
}

// Advances a row-major odometer over the given radices. Returns false once
// every combination has been visited.
bool advance(std::vector<Int> &digits, const std::vector<Int> &radices) {
    for (std::size_t j = digits.size(); j-- > 0;) {
        if (++digits[j] < radices[j]) return true;
        digits[j] = 0;
    }
    return false;
}

}  // namespace

Int checked_mul(Int a, Int b) {
    Int out;
    if (__builtin_mul_overflow(a, b, &out)) {
        fail_cap("integer overflow computing " + std::to_string(a) + " * " + std::to_string(b));
    }
    return out;
}

Int gcd(Int a, Int b) {
    return std::gcd(a, b);
}

Int checked_lcm(Int a, Int b) {
    if (a == 0 || b == 0) return 0;
    return checked_mul(a / gcd(a, b), b);
}

Int mod_floor(Int a, Int n) {
    Int r = a % n;
    return r < 0 ? r + n : r;
}

FiniteAbelianGroup::FiniteAbelianGroup(std::vector<Int> moduli) {
    if (moduli.empty()) fail_invalid("group needs at least one cyclic factor");
    auto data = std::make_shared<Data>();
    for (Int n : moduli) {
        if (n < 1) fail_invalid("group modulus must be >= 1, got " + std::to_string(n));
        data->exponent = checked_lcm(data->exponent, n);
        data->order = checked_mul(data->order, n);
    }
    data->alphas.reserve(moduli.size());
    for (Int n : moduli) data->alphas.push_back(data->exponent / n);
    data->moduli = std::move(moduli);
    data_ = std::move(data);
}

std::size_t FiniteAbelianGroup::rank() const noexcept {
    return data_->moduli.size();
}

const std::vector<Int> &FiniteAbelianGroup::moduli() const noexcept {
    return data_->moduli;
}

Int FiniteAbelianGroup::modulus(std::size_t j) const {
    return data_->moduli.at(j);
}

Int FiniteAbelianGroup::exponent() const noexcept {
    return data_->exponent;
}

const std::vector<Int> &FiniteAbelianGroup::alphas() const noexcept {
    return data_->alphas;
}

Int FiniteAbelianGroup::order() const noexcept {
    return data_->order;
}

GroupElement FiniteAbelianGroup::element(std::span<const Int> coords) const {
    if (coords.size() != rank()) {
        fail_invalid("element has " + std::to_string(coords.size()) + " coordinates, group " +
                     to_string() + " has rank " + std::to_string(rank()));
    }
    std::vector<Int> reduced(coords.size());
    for (std::size_t j = 0; j < coords.size(); ++j) reduced[j] = mod_floor(coords[j], modulus(j));
    return GroupElement(*this, std::move(reduced));
}

GroupElement FiniteAbelianGroup::element(std::initializer_list<Int> coords) const {
    return element(std::span<const Int>(coords.begin(), coords.size()));
}

GroupElement FiniteAbelianGroup::zero() const {
    return GroupElement(*this, std::vector<Int>(rank(), 0));
}

GroupElement FiniteAbelianGroup::element_at(std::uint64_t index) const {
    if (index >= static_cast<std::uint64_t>(order())) {
        fail_invalid("flat index " + std::to_string(index) + " outside group of order " +
                     std::to_string(order()));
    }
    std::vector<Int> coords(rank());
    for (std::size_t j = rank(); j-- > 0;) {
        auto n = static_cast<std::uint64_t>(modulus(j));
        coords[j] = static_cast<Int>(index % n);
        index /= n;
    }
    return GroupElement(*this, std::move(coords));
}

std::uint64_t FiniteAbelianGroup::index_of(const GroupElement &x) const {
    require_same_group(*this, x.group(), "index_of");
    std::uint64_t index = 0;
    for (std::size_t j = 0; j < rank(); ++j) {
        index = index * static_cast<std::uint64_t>(modulus(j)) + static_cast<std::uint64_t>(x[j]);
    }
    return index;
}

std::vector<GroupElement> FiniteAbelianGroup::elements(std::size_t bound) const {
    if (static_cast<std::uint64_t>(order()) > bound) {
        fail_cap("group " + to_string() + " of order " + std::to_string(order()) +
                 " exceeds enumeration bound " + std::to_string(bound));
    }
    std::vector<GroupElement> out;
    out.reserve(static_cast<std::size_t>(order()));
    std::vector<Int> digits(rank(), 0);
    do {
        out.emplace_back(*this, digits);
    } while (advance(digits, moduli()));
    return out;
}

std::string FiniteAbelianGroup::to_string() const {
    std::ostringstream out;
    for (std::size_t j = 0; j < rank(); ++j) {
        if (j) out << " + ";
        out << "Z_" << modulus(j);
    }
    return out.str();
}

GroupElement::GroupElement(FiniteAbelianGroup group, std::vector<Int> reduced_coords)
    : group_(std::move(group)), coords_(std::move(reduced_coords)) {}

bool GroupElement::is_zero() const noexcept {
    return std::all_of(coords_.begin(), coords_.end(), [](Int c) { return c == 0; });
}

GroupElement GroupElement::operator+(const GroupElement &other) const {
    require_same_group(group_, other.group_, "add");
    std::vector<Int> out(coords_.size());
    for (std::size_t j = 0; j < out.size(); ++j) {
        Int n = group_.modulus(j);
        Int s = coords_[j] + other.coords_[j];
        out[j] = s >= n ? s - n : s;
    }
    return GroupElement(group_, std::move(out));
}

GroupElement GroupElement::operator-() const {
    std::vector<Int> out(coords_.size());
    for (std::size_t j = 0; j < out.size(); ++j) {
        out[j] = coords_[j] == 0 ? 0 : group_.modulus(j) - coords_[j];
    }
    return GroupElement(group_, std::move(out));
}

GroupElement GroupElement::operator-(const GroupElement &other) const {
    require_same_group(group_, other.group_, "subtract");
    return *this + (-other);
}

std::string GroupElement::to_string() const {
    return join(coords_);
}

Int inner_product(const GroupElement &x, const GroupElement &y) {
    require_same_group(x.group(), y.group(), "inner_product");
    const auto &g = x.group();
    const auto m = static_cast<__int128>(g.exponent());
    __int128 acc = 0;
    for (std::size_t j = 0; j < g.rank(); ++j) {
        __int128 term = static_cast<__int128>(g.alphas()[j]) * x[j] % m * y[j] % m;
        acc = (acc + term) % m;
    }
    return static_cast<Int>(acc);
}

Int normalize_generator(Int raw, Int modulus) {
    if (modulus < 1) fail_invalid("modulus must be >= 1");
    if (raw < 0) fail_invalid("raw generator must be >= 0");
    Int g = gcd(raw % modulus, modulus);
    return g == 0 ? modulus : g;
}

ProductSubgroup::ProductSubgroup(FiniteAbelianGroup parent, std::vector<Int> raw_generators)
    : parent_(std::move(parent)) {
    if (raw_generators.size() != parent_.rank()) {
        fail_invalid("subgroup needs " + std::to_string(parent_.rank()) + " generators, got " +
                     std::to_string(raw_generators.size()));
    }
    generators_.resize(raw_generators.size());
    for (std::size_t j = 0; j < raw_generators.size(); ++j) {
        if (raw_generators[j] < 0) fail_invalid("generators must be non-negative");
        generators_[j] = normalize_generator(raw_generators[j], parent_.modulus(j));
        order_ *= parent_.modulus(j) / generators_[j];
        index_ *= generators_[j];
    }
}

ProductSubgroup ProductSubgroup::trivial(const FiniteAbelianGroup &parent) {
    return ProductSubgroup(parent, parent.moduli());
}

ProductSubgroup ProductSubgroup::whole(const FiniteAbelianGroup &parent) {
    return ProductSubgroup(parent, std::vector<Int>(parent.rank(), 1));
}

FiniteAbelianGroup ProductSubgroup::quotient_group() const {
    return FiniteAbelianGroup(generators_);
}

bool ProductSubgroup::contains(const GroupElement &x) const {
    require_same_group(parent_, x.group(), "contains");
    for (std::size_t j = 0; j < generators_.size(); ++j) {
        if (x[j] % generators_[j] != 0) return false;
    }
    return true;
}

std::vector<GroupElement> ProductSubgroup::elements(std::size_t bound) const {
    if (static_cast<std::uint64_t>(order_) > bound) {
        fail_cap("subgroup of order " + std::to_string(order_) + " exceeds enumeration bound");
    }
    std::vector<Int> counts(generators_.size());
    for (std::size_t j = 0; j < counts.size(); ++j) counts[j] = parent_.modulus(j) / generators_[j];
    std::vector<GroupElement> out;
    out.reserve(static_cast<std::size_t>(order_));
    std::vector<Int> q(counts.size(), 0);
    std::vector<Int> coords(counts.size());
    do {
        for (std::size_t j = 0; j < q.size(); ++j) coords[j] = q[j] * generators_[j];
        out.emplace_back(parent_, coords);
    } while (advance(q, counts));
    return out;
}

std::string ProductSubgroup::to_string() const {
    return "<" + join(generators_) + "> in " + parent_.to_string();
}

ProductSubgroup orthogonal_subgroup(const ProductSubgroup &subgroup) {
    const auto &g = subgroup.parent();
    std::vector<Int> gens(g.rank());
    for (std::size_t j = 0; j < gens.size(); ++j) gens[j] = g.modulus(j) / subgroup.generator(j);
    return ProductSubgroup(g, std::move(gens));
}

bool is_orthogonal(const GroupElement &x, const ProductSubgroup &subgroup) {
    const auto &g = subgroup.parent();
    require_same_group(g, x.group(), "is_orthogonal");
    std::vector<Int> unit(g.rank(), 0);
    for (std::size_t j = 0; j < g.rank(); ++j) {
        unit.assign(g.rank(), 0);
        unit[j] = subgroup.generator(j);
        if (inner_product(x, g.element(unit)) != 0) return false;
    }
    return true;
}

bool is_orthogonal_exhaustive(const GroupElement &x, const ProductSubgroup &subgroup) {
    for (const auto &y : subgroup.elements()) {
        if (inner_product(x, y) != 0) return false;
    }
    return true;
}

std::vector<GroupElement> brute_force_orthogonal(const ProductSubgroup &subgroup, std::size_t bound) {
    const auto &g = subgroup.parent();
    if (static_cast<std::uint64_t>(g.order()) > bound) {
        fail_cap("brute-force orthogonal: group order " + std::to_string(g.order()) +
                 " exceeds bound " + std::to_string(bound));
    }
    const auto members = subgroup.elements(bound);
    std::vector<GroupElement> out;
    for (const auto &x : g.elements(bound)) {
        bool ok = std::all_of(members.begin(), members.end(),
                              [&](const GroupElement &y) { return inner_product(x, y) == 0; });
        if (ok) out.push_back(x);
    }
    return out;
}

GroupElement coset_representative(const GroupElement &x, const ProductSubgroup &subgroup) {
    require_same_group(subgroup.parent(), x.group(), "coset_representative");
    std::vector<Int> coords(x.coords().size());
    for (std::size_t j = 0; j < coords.size(); ++j) coords[j] = x[j] % subgroup.generator(j);
    return GroupElement(subgroup.parent(), std::move(coords));
}

std::vector<GroupElement> coset_representatives(const ProductSubgroup &subgroup) {
    std::vector<GroupElement> out;
    out.reserve(static_cast<std::size_t>(subgroup.index()));
    std::vector<Int> digits(subgroup.generators().size(), 0);
    do {
        out.emplace_back(subgroup.parent(), digits);
    } while (advance(digits, subgroup.generators()));
    return out;
}

ProductSubgroup subgroup_generated_by(const FiniteAbelianGroup &group,
                                      std::span<const GroupElement> samples) {
    std::vector<Int> acc(group.rank(), 0);
    for (const auto &s : samples) {
        require_same_group(group, s.group(), "subgroup_generated_by");
        for (std::size_t j = 0; j < acc.size(); ++j) acc[j] = gcd(acc[j], s[j]);
    }
    // gcd(0, x) = x, so components never touched stay 0 and normalize to N_j.
    return ProductSubgroup(group, std::move(acc));
}

std::vector<Int> divisors(Int n) {
    if (n < 1) fail_invalid("divisors of non-positive integer");
    std::vector<Int> small, large;
    for (Int d = 1; d * d <= n; ++d) {
        if (n % d == 0) {
            small.push_back(d);
            if (d != n / d) large.push_back(n / d);
        }
    }
    small.insert(small.end(), large.rbegin(), large.rend());
    return small;
}

std::vector<ProductSubgroup> all_product_subgroups(const FiniteAbelianGroup &group) {
    std::vector<std::vector<Int>> choices;
    std::vector<Int> counts;
    for (Int n : group.moduli()) {
        choices.push_back(divisors(n));
        counts.push_back(static_cast<Int>(choices.back().size()));
    }
    std::vector<ProductSubgroup> out;
    std::vector<Int> pick(counts.size(), 0);
    std::vector<Int> gens(counts.size());
    do {
        for (std::size_t j = 0; j < pick.size(); ++j) gens[j] = choices[j][pick[j]];
        out.emplace_back(group, gens);
    } while (advance(pick, counts));
    return out;
}

}  // namespace ahsp
