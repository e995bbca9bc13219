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

#include "ahsp/operators.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>
#include <string>
#include <tuple>

#include "ahsp/error.hpp"

namespace ahsp {

namespace {

void check_site_dims(const MixedRadixRegister &reg, std::span<const std::size_t> sites,
                     const std::vector<Int> &expected, const char *what) {
    if (sites.size() != expected.size()) {
        fail_invalid(std::string(what) + ": expected " + std::to_string(expected.size()) + " sites, got " +
                     std::to_string(sites.size()));
    }
    for (std::size_t j = 0; j < sites.size(); ++j) {
        if (reg.dim(sites[j]) != expected[j]) {
            fail_invalid(std::string(what) + ": site " + std::to_string(sites[j]) + " has dimension " +
                         std::to_string(reg.dim(sites[j])) + ", expected " + std::to_string(expected[j]));
        }
    }
}

// Flat index of y + v in the mixed-radix group Y, for every y.
void shift_permutation(const FiniteAbelianGroup &y_group, const std::vector<Int> &v, std::uint32_t *perm) {
    const auto &mods = y_group.moduli();
    const auto size = static_cast<std::size_t>(y_group.order());
    std::vector<Int> digits(mods.size(), 0);
    for (std::size_t y = 0; y < size; ++y) {
        std::uint64_t idx = 0;
        for (std::size_t j = 0; j < mods.size(); ++j) {
            Int s = digits[j] + v[j];
            if (s >= mods[j]) s -= mods[j];
            idx = idx * static_cast<std::uint64_t>(mods[j]) + static_cast<std::uint64_t>(s);
        }
        perm[y] = static_cast<std::uint32_t>(idx);
        for (std::size_t j = mods.size(); j-- > 0;) {
            if (++digits[j] < mods[j]) break;
            digits[j] = 0;
        }
    }
}

// Above this many entries the addition table is not kept.
constexpr std::uint64_t kMaxAdditionTable = std::uint64_t{1} << 24;

}  // namespace

Complex root_of_unity(Int exponent, Int n) {
    if (n < 1) fail_invalid("root of unity order must be >= 1");
    const Int r = mod_floor(exponent, n);
    if (r == 0) return {1.0, 0.0};
    // Quarter turns are returned exactly.
    if (4 * r == n) return {0.0, 1.0};
    if (2 * r == n) return {-1.0, 0.0};
    if (4 * r == 3 * n) return {0.0, -1.0};
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(n);
    return {std::cos(angle), std::sin(angle)};
}

ComplexMatrix qft_matrix(Int n) {
    if (n < 1) fail_invalid("QFT size must be >= 1");
    const auto dim = static_cast<Eigen::Index>(n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    std::vector<Complex> roots(static_cast<std::size_t>(n));
    for (Int a = 0; a < n; ++a) roots[static_cast<std::size_t>(a)] = root_of_unity(a, n) * scale;
    ComplexMatrix f(dim, dim);
    for (Int l = 0; l < n; ++l) {
        for (Int j = 0; j < n; ++j) {
            auto e = static_cast<Int>(static_cast<__int128>(j) * l % n);
            f(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(j)) = roots[static_cast<std::size_t>(e)];
        }
    }
    return f;
}

void apply_qft_group(PureState &state, const FiniteAbelianGroup &group, std::span<const std::size_t> targets,
                     Direction direction, OperationCounters *counters) {
    apply_qft_group(state.reg(), state.data(), group, targets, direction, counters);
}

namespace {

// FFTW plans for the multi-dimensional DFT over the target sites, batched over
// the remaining ones. The planner is not thread-safe; execution is.
class QftPlanCache {
   public:
    using Key = std::tuple<std::vector<Int>, std::vector<std::size_t>, int>;

    ~QftPlanCache() {
        for (auto &[k, p] : plans_) fftw_destroy_plan(p);
    }

    fftw_plan get(const MixedRadixRegister &reg, std::span<const std::size_t> targets, int sign) {
        Key key{reg.dims(), std::vector<std::size_t>(targets.begin(), targets.end()), sign};
        std::lock_guard lock(mu_);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;
        std::vector<fftw_iodim64> dims, batch;
        std::vector<bool> is_target(reg.num_sites(), false);
        for (auto t : targets) {
            is_target[t] = true;
            if (reg.dim(t) > 1) {
                const auto st = static_cast<std::ptrdiff_t>(reg.stride(t));
                dims.push_back({static_cast<std::ptrdiff_t>(reg.dim(t)), st, st});
            }
        }
        for (std::size_t s = 0; s < reg.num_sites(); ++s) {
            if (is_target[s] || reg.dim(s) == 1) continue;
            const auto st = static_cast<std::ptrdiff_t>(reg.stride(s));
            batch.push_back({static_cast<std::ptrdiff_t>(reg.dim(s)), st, st});
        }
        fftw_plan plan = nullptr;
        if (!dims.empty()) {
            // Planning with FFTW_ESTIMATE never touches the array, so a small
            // scratch pointer stands in for the real data.
            std::vector<Complex> scratch(reg.size());
            auto *buf = reinterpret_cast<fftw_complex *>(scratch.data());
            plan = fftw_plan_guru64_dft(static_cast<int>(dims.size()), dims.data(), static_cast<int>(batch.size()),
                                        batch.data(), buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
            if (!plan) fail_invariant("FFTW could not plan a transform over " + std::to_string(dims.size()) + " sites");
        }
        plans_.emplace(std::move(key), plan);
        return plan;
    }

   private:
    std::mutex mu_;
    std::map<Key, fftw_plan> plans_;
};

QftPlanCache &plan_cache() {
    static QftPlanCache cache;
    return cache;
}

}  // namespace

void apply_qft_group(const MixedRadixRegister &reg, std::span<Complex> amps, const FiniteAbelianGroup &group,
                     std::span<const std::size_t> targets, Direction direction, OperationCounters *counters) {
    check_site_dims(reg, targets, group.moduli(), "apply_qft_group");
    if (amps.size() != reg.size()) fail_invalid("apply_qft_group: amplitude vector does not match register");
    // F_N has omega^{+jl}, which is FFTW's backward sign.
    const int sign = direction == Direction::Forward ? FFTW_BACKWARD : FFTW_FORWARD;
    if (auto plan = plan_cache().get(reg, targets, sign)) {
        auto *buf = reinterpret_cast<fftw_complex *>(amps.data());
        fftw_execute_dft(plan, buf, buf);
        const double scale = 1.0 / std::sqrt(static_cast<double>(group.order()));
        for (auto &a : amps) a *= scale;
    }
    if (counters) ++counters->qft_calls;
}

MixedRadixRegister group_register(const FiniteAbelianGroup &group) {
    return MixedRadixRegister(group.moduli());
}

PureState coset_state(const GroupElement &r, const ProductSubgroup &subgroup) {
    const auto &g = subgroup.parent();
    auto reg = group_register(g);
    check_amplitude_cap(reg.size());
    std::vector<Complex> amps(reg.size());
    const double a = 1.0 / std::sqrt(static_cast<double>(subgroup.order()));
    for (const auto &h : subgroup.elements(max_amplitudes())) amps[g.index_of(r + h)] = a;
    return PureState(std::move(reg), std::move(amps));
}

PureState qft_of_coset_state_reference(const GroupElement &r, const ProductSubgroup &subgroup) {
    const auto &g = subgroup.parent();
    auto reg = group_register(g);
    check_amplitude_cap(reg.size());
    std::vector<Complex> amps(reg.size());
    const double a = std::sqrt(static_cast<double>(subgroup.order()) / static_cast<double>(g.order()));
    for (const auto &t : orthogonal_subgroup(subgroup).elements(max_amplitudes())) {
        amps[g.index_of(t)] = a * root_of_unity(inner_product(r, t), g.exponent());
    }
    return PureState(std::move(reg), std::move(amps));
}

// ---------------------------------------------------------------------------
// HidingFunction

struct HidingFunction::Lazy {
    std::once_flag once;
    std::vector<std::uint32_t> addition;
};

HidingFunction::HidingFunction(ProductSubgroup hidden, std::vector<std::uint32_t> table)
    : hidden_(std::move(hidden)),
      codomain_(hidden_.quotient_group()),
      table_(std::move(table)),
      lazy_(std::make_shared<Lazy>()) {
    const auto &g = hidden_.parent();
    const auto order = static_cast<std::uint64_t>(g.order());
    const auto y_size = static_cast<std::uint64_t>(codomain_.order());
    check_amplitude_cap(order);
    if (table_.size() != order) {
        fail_invalid("hiding-function table has " + std::to_string(table_.size()) + " entries, group has " +
                     std::to_string(order));
    }
    // f separates cosets iff the coset label -> value map is well defined and
    // injective. With |labels| = |Y| that also makes f onto Y.
    constexpr std::uint64_t kUnset = ~std::uint64_t{0};
    std::vector<std::uint64_t> value_of_label(y_size, kUnset);
    std::vector<std::uint64_t> label_of_value(y_size, kUnset);
    const auto &mods = g.moduli();
    const auto &gens = hidden_.generators();
    std::vector<Int> digits(mods.size(), 0);
    for (std::uint64_t x = 0; x < order; ++x) {
        std::uint64_t label = 0;
        for (std::size_t j = 0; j < mods.size(); ++j) {
            label = label * static_cast<std::uint64_t>(gens[j]) + static_cast<std::uint64_t>(digits[j] % gens[j]);
        }
        const std::uint64_t v = table_[x];
        if (v >= y_size) fail_invalid("hiding-function value outside Y");
        if (value_of_label[label] == kUnset) value_of_label[label] = v;
        if (value_of_label[label] != v) {
            fail_invalid("hiding function is not constant on the coset of " + g.element_at(x).to_string());
        }
        if (label_of_value[v] == kUnset) label_of_value[v] = label;
        if (label_of_value[v] != label) fail_invalid("hiding function merges two distinct cosets");
        for (std::size_t j = mods.size(); j-- > 0;) {
            if (++digits[j] < mods[j]) break;
            digits[j] = 0;
        }
    }
}

HidingFunction HidingFunction::canonical(const ProductSubgroup &hidden, std::optional<std::uint64_t> relabel_seed) {
    const auto &g = hidden.parent();
    const auto order = static_cast<std::uint64_t>(g.order());
    check_amplitude_cap(order);
    const auto y_size = static_cast<std::size_t>(hidden.index());
    std::vector<std::uint32_t> relabel(y_size);
    std::iota(relabel.begin(), relabel.end(), 0u);
    if (relabel_seed) {
        RandomStream rng(*relabel_seed, 0x7e1abe1);
        for (std::size_t i = y_size; i > 1; --i) std::swap(relabel[i - 1], relabel[rng.uniform_below(i)]);
    }
    const auto &mods = g.moduli();
    const auto &gens = hidden.generators();
    std::vector<std::uint32_t> table(order);
    std::vector<Int> digits(mods.size(), 0);
    for (std::uint64_t x = 0; x < order; ++x) {
        std::uint64_t label = 0;
        for (std::size_t j = 0; j < mods.size(); ++j) {
            label = label * static_cast<std::uint64_t>(gens[j]) + static_cast<std::uint64_t>(digits[j] % gens[j]);
        }
        table[x] = relabel[label];
        for (std::size_t j = mods.size(); j-- > 0;) {
            if (++digits[j] < mods[j]) break;
            digits[j] = 0;
        }
    }
    return HidingFunction(hidden, std::move(table));
}

GroupElement HidingFunction::operator()(const GroupElement &x) const {
    return codomain_.element_at(table_[domain().index_of(x)]);
}

std::span<const std::uint32_t> HidingFunction::addition_table() const {
    const auto y_size = static_cast<std::uint64_t>(codomain_.order());
    if (y_size * y_size > kMaxAdditionTable) return {};
    std::call_once(lazy_->once, [&] {
        lazy_->addition.resize(y_size * y_size);
        for (std::uint64_t v = 0; v < y_size; ++v) {
            shift_permutation(codomain_, codomain_.element_at(v).coords(), lazy_->addition.data() + v * y_size);
        }
    });
    return lazy_->addition;
}

// ---------------------------------------------------------------------------
// Oracle and S_z

void apply_oracle(PureState &state, const HidingFunction &f, std::span<const std::size_t> a_targets,
                  std::span<const std::size_t> b_targets, Direction direction, OperationCounters *counters) {
    apply_oracle(state.reg(), state.data(), f, a_targets, b_targets, direction, counters);
}

void apply_oracle(const MixedRadixRegister &reg, std::span<Complex> amps, const HidingFunction &f,
                  std::span<const std::size_t> a_targets, std::span<const std::size_t> b_targets,
                  Direction direction, OperationCounters *counters) {
    if (amps.size() != reg.size()) fail_invalid("apply_oracle: amplitude vector does not match register");
    check_site_dims(reg, a_targets, f.domain().moduli(), "apply_oracle (A)");
    check_site_dims(reg, b_targets, f.codomain().moduli(), "apply_oracle (B)");
    std::vector<std::size_t> ab(a_targets.begin(), a_targets.end());
    ab.insert(ab.end(), b_targets.begin(), b_targets.end());
    const auto rest = reg.complement(ab);
    const auto a_off = reg.offsets(a_targets);
    const auto b_off = reg.offsets(b_targets);
    const auto rest_off = reg.offsets(rest);
    const auto &y_group = f.codomain();
    const auto y_size = b_off.size();

    // Bucket the domain by function value so each shift permutation of Y is
    // built once.
    std::vector<std::vector<std::uint64_t>> preimage(y_size);
    for (std::uint64_t x = 0; x < a_off.size(); ++x) preimage[f.value_index(x)].push_back(x);

    const auto table = f.addition_table();
    std::vector<std::uint32_t> own(table.empty() ? y_size : 0);
    std::vector<Complex> fiber(y_size);
    for (std::size_t v = 0; v < y_size; ++v) {
        if (preimage[v].empty()) continue;
        const auto shift = direction == Direction::Inverse ? y_group.index_of(-y_group.element_at(v)) : v;
        const std::uint32_t *perm = nullptr;
        if (table.empty()) {
            shift_permutation(y_group, y_group.element_at(shift).coords(), own.data());
            perm = own.data();
        } else {
            perm = table.data() + shift * y_size;
        }
        for (auto x : preimage[v]) {
            for (auto c : rest_off) {
                const auto base = a_off[x] + c;
                for (std::size_t y = 0; y < y_size; ++y) fiber[y] = amps[base + b_off[y]];
                for (std::size_t y = 0; y < y_size; ++y) amps[base + b_off[perm[y]]] = fiber[y];
            }
        }
    }
    if (counters) ++counters->oracle_calls;
}

void s_z_apply(PureState &state, const GroupElement &z, std::span<const std::size_t> b_targets,
               OperationCounters *counters) {
    s_z_apply(state.reg(), state.data(), z, b_targets, counters);
}

void s_z_apply(const MixedRadixRegister &reg, std::span<Complex> amps, const GroupElement &z,
               std::span<const std::size_t> b_targets, OperationCounters *counters) {
    if (amps.size() != reg.size()) fail_invalid("s_z_apply: amplitude vector does not match register");
    const auto &y_group = z.group();
    check_site_dims(reg, b_targets, y_group.moduli(), "s_z_apply");
    const auto rest = reg.complement(b_targets);
    const auto b_off = reg.offsets(b_targets);
    const auto rest_off = reg.offsets(rest);
    const auto y_size = b_off.size();

    std::vector<std::uint32_t> target(y_size);
    std::vector<Complex> phase(y_size);
    for (std::size_t y = 0; y < y_size; ++y) {
        const auto ye = y_group.element_at(y);
        target[y] = static_cast<std::uint32_t>(y_group.index_of(-ye));
        Complex p = 1.0;
        for (std::size_t j = 0; j < y_group.rank(); ++j) {
            const Int h = y_group.modulus(j);
            p *= root_of_unity(static_cast<Int>(static_cast<__int128>(z[j]) * ye[j] % h), h);
        }
        phase[y] = p;
    }

    std::vector<Complex> fiber(y_size);
    for (auto c : rest_off) {
        for (std::size_t y = 0; y < y_size; ++y) fiber[y] = amps[c + b_off[y]];
        for (std::size_t y = 0; y < y_size; ++y) amps[c + b_off[target[y]]] = phase[y] * fiber[y];
    }
    if (counters) ++counters->s_z_calls;
}

}  // namespace ahsp
