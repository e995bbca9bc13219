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


// Shared helpers for the test binaries: group sweeps, random matrices, and
// closed-form reference values computed straight from the definitions
// (no QFT kernels, no simulator).

#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "ahsp/algorithms.hpp"
#include "ahsp/group.hpp"
#include "ahsp/operators.hpp"
#include "ahsp/rng.hpp"
#include "ahsp/state.hpp"

namespace ahsp::testing {

// Non-decreasing tuples of moduli >= 2 with product <= bound, plus (1).
inline std::vector<std::vector<Int>> moduli_tuples(Int bound) {
    std::vector<std::vector<Int>> out{{1}};
    std::vector<Int> cur;
    auto rec = [&](auto &&self, Int min, Int prod) -> void {
        for (Int n = min; prod * n <= bound; ++n) {
            cur.push_back(n);
            out.push_back(cur);
            self(self, n, prod * n);
            cur.pop_back();
        }
    };
    rec(rec, 2, 1);
    return out;
}

// Invariant-factor decompositions N_1 | N_2 | ... with product <= bound,
// one per isomorphism class, plus (1).
inline std::vector<std::vector<Int>> invariant_factor_groups(Int bound) {
    std::vector<std::vector<Int>> out{{1}};
    std::vector<Int> cur;
    auto rec = [&](auto &&self, Int prev, Int prod) -> void {
        for (Int n = 2; prod * n <= bound; ++n) {
            if (n % prev != 0) continue;
            cur.push_back(n);
            out.push_back(cur);
            self(self, n, prod * n);
            cur.pop_back();
        }
    };
    rec(rec, 1, 1);
    return out;
}

inline Complex omega(Int a, Int n) {
    const double t = 2.0 * std::numbers::pi * static_cast<double>(((a % n) + n) % n) / static_cast<double>(n);
    return {std::cos(t), std::sin(t)};
}

// prod_j omega_{h_j}^{z_j v_j}: the phase S_z leaves behind on Y.
inline Complex y_phase(const FiniteAbelianGroup &y, const GroupElement &z, const GroupElement &v) {
    Complex p = 1.0;
    for (std::size_t j = 0; j < y.rank(); ++j) p *= omega(z[j] * v[j], y.modulus(j));
    return p;
}

inline ComplexMatrix random_unitary(Eigen::Index n, RandomStream &rng) {
    std::normal_distribution<double> gauss;
    ComplexMatrix g(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) g(i, j) = Complex(gauss(rng), gauss(rng));
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ();
    return q;
}

// Full-rank random density matrix G G^dagger / tr.
inline DensityMatrix random_density(const MixedRadixRegister &reg, RandomStream &rng) {
    const auto n = static_cast<Eigen::Index>(reg.size());
    std::normal_distribution<double> gauss;
    ComplexMatrix g(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) g(i, j) = Complex(gauss(rng), gauss(rng));
    ComplexMatrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return DensityMatrix(reg, 0.5 * (rho + rho.adjoint()));
}

// psi_3 amplitudes over the A-major layout, from
//   psi_3(t, y) = (1/|G|) sum_{x : f(x) = y} omega_M^{x . t}.
inline std::vector<Complex> psi3_from_definition(const HidingFunction &f) {
    const auto &g = f.domain();
    const auto gs = static_cast<std::uint64_t>(g.order());
    const auto ys = static_cast<std::uint64_t>(f.codomain().order());
    std::vector<Complex> amps(gs * ys);
    const auto elems = g.elements();
    for (std::uint64_t t = 0; t < gs; ++t) {
        for (std::uint64_t x = 0; x < gs; ++x) {
            amps[t * ys + f.value_index(x)] += omega(inner_product(elems[x], elems[t]), g.exponent());
        }
    }
    for (auto &a : amps) a /= static_cast<double>(gs);
    return amps;
}

// psi_3 from the coset-sum form (|H|/|G|) sum_{r in R} sum_{t in H-perp} omega_M^{r.t} |t>|f(r)>.
inline std::vector<Complex> psi3_coset_form(const HidingFunction &f) {
    const auto &g = f.domain();
    const auto ys = static_cast<std::uint64_t>(f.codomain().order());
    std::vector<Complex> amps(static_cast<std::uint64_t>(g.order()) * ys);
    const double w = static_cast<double>(f.hidden().order()) / static_cast<double>(g.order());
    for (const auto &r : coset_representatives(f.hidden())) {
        const auto fr = f.value_index(g.index_of(r));
        for (const auto &t : orthogonal_subgroup(f.hidden()).elements()) {
            amps[g.index_of(t) * ys + fr] += w * omega(inner_product(r, t), g.exponent());
        }
    }
    return amps;
}

// Pr_z(tau) = |(1/|G|) sum_x omega^{z . f(x)} omega_M^{x . tau}|^2 for every tau.
inline std::vector<double> pr_z_from_definition(const HidingFunction &f, const GroupElement &z) {
    const auto &g = f.domain();
    const auto &y = f.codomain();
    const auto gs = static_cast<std::uint64_t>(g.order());
    const auto elems = g.elements();
    std::vector<Complex> phase(gs);
    for (std::uint64_t x = 0; x < gs; ++x) phase[x] = y_phase(y, z, y.element_at(f.value_index(x)));
    std::vector<double> out(gs);
    for (std::uint64_t t = 0; t < gs; ++t) {
        Complex s = 0;
        for (std::uint64_t x = 0; x < gs; ++x) s += phase[x] * omega(inner_product(elems[x], elems[t]), g.exponent());
        out[t] = std::norm(s / static_cast<double>(gs));
    }
    return out;
}

// The coset double sum (|H|/|G|)^2 sum_{r, r'} omega^{z.(f(r) - f(r'))} omega_M^{(r - r').tau}
// for tau in H-perp, 0 elsewhere.
inline std::vector<double> pr_z_double_sum(const HidingFunction &f, const GroupElement &z) {
    const auto &g = f.domain();
    const auto &y = f.codomain();
    const auto reps = coset_representatives(f.hidden());
    const double w = static_cast<double>(f.hidden().order()) / static_cast<double>(g.order());
    std::vector<double> out(static_cast<std::size_t>(g.order()));
    for (const auto &tau : orthogonal_subgroup(f.hidden()).elements()) {
        Complex s = 0;
        for (const auto &r : reps) {
            const auto fr = y.element_at(f.value_index(g.index_of(r)));
            for (const auto &rp : reps) {
                const auto frp = y.element_at(f.value_index(g.index_of(rp)));
                s += y_phase(y, z, fr - frp) * omega(inner_product(r - rp, tau), g.exponent());
            }
        }
        out[g.index_of(tau)] = w * w * s.real();
    }
    return out;
}

// phi_4 = F_G (|G|^{-1/2} sum_x omega^{z . f(x)} |x>) (x) Phi, evaluated entry by entry.
inline std::vector<Complex> phi4_from_definition(const HidingFunction &f, const PureState &aux,
                                                 const GroupElement &z) {
    const auto &g = f.domain();
    const auto &y = f.codomain();
    const auto gs = static_cast<std::uint64_t>(g.order());
    const auto ys = static_cast<std::uint64_t>(y.order());
    const auto elems = g.elements();
    std::vector<Complex> out(gs * ys);
    for (std::uint64_t t = 0; t < gs; ++t) {
        Complex s = 0;
        for (std::uint64_t x = 0; x < gs; ++x) {
            s += y_phase(y, z, y.element_at(f.value_index(x))) * omega(inner_product(elems[x], elems[t]), g.exponent());
        }
        s /= static_cast<double>(gs);
        for (std::uint64_t b = 0; b < ys; ++b) out[t * ys + b] = s * aux.amplitudes()[b];
    }
    return out;
}

// |H|/|G| on H-perp (membership by scanning H), 0 elsewhere.
inline std::vector<double> uniform_on_perp(const ProductSubgroup &h) {
    const auto &g = h.parent();
    std::vector<double> out(static_cast<std::size_t>(g.order()));
    const double p = static_cast<double>(h.order()) / static_cast<double>(g.order());
    for (std::uint64_t i = 0; i < out.size(); ++i) {
        if (is_orthogonal_exhaustive(g.element_at(i), h)) out[i] = p;
    }
    return out;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double worst = 0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return a.size() == b.size() ? worst : INFINITY;
}

inline double max_abs_diff(std::span<const Complex> a, std::span<const Complex> b) {
    double worst = 0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return a.size() == b.size() ? worst : INFINITY;
}

}  // namespace ahsp::testing
