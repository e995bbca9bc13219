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

#include "ahsp/state.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <random>
#include <string>

#include "ahsp/error.hpp"

namespace ahsp {

namespace {

std::uint64_t initial_cap() {
    if (const char *env = std::getenv("AHSP_SIM_MAX_AMPLITUDES")) {
        char *end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return v;
    }
    return kDefaultMaxAmplitudes;
}

std::atomic<std::uint64_t> &cap_storage() {
    static std::atomic<std::uint64_t> cap{initial_cap()};
    return cap;
}

void require_same_register(const MixedRadixRegister &a, const MixedRadixRegister &b, const char *op) {
    if (!(a == b)) fail_invalid(std::string(op) + ": register dimensions differ");
}

void check_density_dim(std::uint64_t dim) {
    if (dim > kMaxDensityDimension) {
        fail_cap("density matrix dimension " + std::to_string(dim) + " exceeds cap " +
                 std::to_string(kMaxDensityDimension));
    }
}

// Eigenvalues of a Hermitian matrix, ascending.
Eigen::VectorXd hermitian_eigenvalues(const ComplexMatrix &m) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

ComplexMatrix psd_sqrt(const ComplexMatrix &m) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m);
    Eigen::VectorXd ev = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return solver.eigenvectors() * ev.asDiagonal() * solver.eigenvectors().adjoint();
}

double clamp01(double v) {
    return std::clamp(v, 0.0, 1.0);
}

}  // namespace

std::uint64_t max_amplitudes() {
    return cap_storage().load();
}

void set_max_amplitudes(std::uint64_t cap) {
    if (cap == 0) fail_invalid("amplitude cap must be positive");
    cap_storage().store(cap);
}

void reset_max_amplitudes() {
    cap_storage().store(initial_cap());
}

void check_amplitude_cap(std::uint64_t total) {
    if (total > max_amplitudes()) {
        fail_cap("state of " + std::to_string(total) + " amplitudes exceeds cap " +
                 std::to_string(max_amplitudes()) + " (AHSP_SIM_MAX_AMPLITUDES)");
    }
}

// ---------------------------------------------------------------------------
// MixedRadixRegister

MixedRadixRegister::MixedRadixRegister(std::vector<Int> dims) : dims_(std::move(dims)) {
    strides_.resize(dims_.size());
    for (std::size_t i = dims_.size(); i-- > 0;) {
        if (dims_[i] < 1) fail_invalid("register dimension must be >= 1");
        strides_[i] = total_;
        total_ = static_cast<std::uint64_t>(checked_mul(static_cast<Int>(total_), dims_[i]));
    }
}

std::uint64_t MixedRadixRegister::index_of(std::span<const Int> coords) const {
    if (coords.size() != dims_.size()) fail_invalid("coordinate tuple length does not match register");
    std::uint64_t index = 0;
    for (std::size_t i = 0; i < dims_.size(); ++i) {
        if (coords[i] < 0 || coords[i] >= dims_[i]) {
            fail_invalid("coordinate " + std::to_string(coords[i]) + " out of range for site " +
                         std::to_string(i) + " of dimension " + std::to_string(dims_[i]));
        }
        index += static_cast<std::uint64_t>(coords[i]) * strides_[i];
    }
    return index;
}

std::vector<Int> MixedRadixRegister::coords_of(std::uint64_t index) const {
    if (index >= total_) fail_invalid("flat index " + std::to_string(index) + " out of range");
    std::vector<Int> coords(dims_.size());
    for (std::size_t i = 0; i < dims_.size(); ++i) {
        coords[i] = static_cast<Int>(index / strides_[i]);
        index %= strides_[i];
    }
    return coords;
}

MixedRadixRegister MixedRadixRegister::select(std::span<const std::size_t> sites) const {
    std::vector<Int> dims;
    dims.reserve(sites.size());
    for (auto s : sites) dims.push_back(dim(s));
    return MixedRadixRegister(std::move(dims));
}

std::vector<std::size_t> MixedRadixRegister::complement(std::span<const std::size_t> sites) const {
    std::vector<bool> used(dims_.size(), false);
    for (auto s : sites) {
        if (s >= dims_.size()) fail_invalid("site index " + std::to_string(s) + " out of range");
        if (used[s]) fail_invalid("site " + std::to_string(s) + " listed twice");
        used[s] = true;
    }
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < dims_.size(); ++i) {
        if (!used[i]) out.push_back(i);
    }
    return out;
}

std::vector<std::uint64_t> MixedRadixRegister::offsets(std::span<const std::size_t> sites) const {
    std::vector<std::uint64_t> out{0};
    for (auto s : sites) {
        const auto d = static_cast<std::uint64_t>(dim(s));
        const auto st = stride(s);
        std::vector<std::uint64_t> next;
        next.reserve(out.size() * d);
        for (auto o : out) {
            for (std::uint64_t v = 0; v < d; ++v) next.push_back(o + v * st);
        }
        out = std::move(next);
    }
    return out;
}

MixedRadixRegister MixedRadixRegister::concat(const MixedRadixRegister &other) const {
    std::vector<Int> dims = dims_;
    dims.insert(dims.end(), other.dims_.begin(), other.dims_.end());
    return MixedRadixRegister(std::move(dims));
}

// ---------------------------------------------------------------------------
// PureState

PureState::PureState(MixedRadixRegister reg, std::vector<Complex> amplitudes)
    : reg_(std::move(reg)), amps_(std::move(amplitudes)) {
    check_amplitude_cap(reg_.size());
    if (amps_.size() != reg_.size()) {
        fail_invalid("amplitude vector has length " + std::to_string(amps_.size()) + ", register needs " +
                     std::to_string(reg_.size()));
    }
    if (std::abs(norm() - 1.0) > kTolerance) {
        fail_invalid("state is not normalized (norm " + std::to_string(norm()) + ")");
    }
}

PureState PureState::basis(const MixedRadixRegister &reg, std::span<const Int> coords) {
    check_amplitude_cap(reg.size());
    std::vector<Complex> amps(reg.size());
    amps[reg.index_of(coords)] = 1.0;
    return PureState(reg, std::move(amps));
}

PureState PureState::basis(const MixedRadixRegister &reg, std::initializer_list<Int> coords) {
    return basis(reg, std::span<const Int>(coords.begin(), coords.size()));
}

PureState PureState::normalized(MixedRadixRegister reg, std::vector<Complex> amplitudes) {
    double n2 = 0;
    for (const auto &a : amplitudes) n2 += std::norm(a);
    if (!(n2 > kZeroAmplitude * kZeroAmplitude)) fail_invalid("cannot normalize a zero vector");
    const double inv = 1.0 / std::sqrt(n2);
    for (auto &a : amplitudes) a *= inv;
    return PureState(std::move(reg), std::move(amplitudes));
}

PureState PureState::random(const MixedRadixRegister &reg, RandomStream &rng) {
    check_amplitude_cap(reg.size());
    std::normal_distribution<double> gauss;
    std::vector<Complex> amps(reg.size());
    for (auto &a : amps) {
        double re = gauss(rng);
        double im = gauss(rng);
        a = {re, im};
    }
    return normalized(reg, std::move(amps));
}

Complex PureState::amplitude(std::span<const Int> coords) const {
    return amps_[reg_.index_of(coords)];
}

Complex PureState::amplitude(std::initializer_list<Int> coords) const {
    return amplitude(std::span<const Int>(coords.begin(), coords.size()));
}

double PureState::norm() const {
    double n2 = 0;
    for (const auto &a : amps_) n2 += std::norm(a);
    return std::sqrt(n2);
}

PureState PureState::tensor(const PureState &other) const {
    auto reg = reg_.concat(other.reg_);
    check_amplitude_cap(reg.size());
    std::vector<Complex> amps(reg.size());
    std::size_t i = 0;
    for (const auto &a : amps_) {
        for (const auto &b : other.amps_) amps[i++] = a * b;
    }
    return PureState(std::move(reg), std::move(amps));
}

Complex inner(const PureState &a, const PureState &b) {
    require_same_register(a.reg(), b.reg(), "inner");
    Complex acc = 0;
    auto x = a.amplitudes();
    auto y = b.amplitudes();
    for (std::size_t i = 0; i < x.size(); ++i) acc += std::conj(x[i]) * y[i];
    return acc;
}

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix::DensityMatrix(MixedRadixRegister reg, ComplexMatrix rho) : reg_(std::move(reg)), rho_(std::move(rho)) {
    check_density_dim(reg_.size());
    const auto n = static_cast<Eigen::Index>(reg_.size());
    if (rho_.rows() != n || rho_.cols() != n) fail_invalid("density matrix shape does not match register");
    if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > kTolerance) fail_invalid("density matrix is not Hermitian");
    if (std::abs(trace() - 1.0) > kTolerance) {
        fail_invalid("density matrix trace is " + std::to_string(trace()) + ", expected 1");
    }
    ComplexMatrix herm = 0.5 * (rho_ + rho_.adjoint());
    if (hermitian_eigenvalues(herm).minCoeff() < -kTolerance) fail_invalid("density matrix is not positive");
}

DensityMatrix DensityMatrix::from_pure(const PureState &state) {
    check_density_dim(state.reg().size());
    Eigen::Map<const Eigen::VectorXcd> v(state.amplitudes().data(), static_cast<Eigen::Index>(state.amplitudes().size()));
    return DensityMatrix(state.reg(), v * v.adjoint());
}

DensityMatrix DensityMatrix::from_ensemble(std::span<const std::pair<double, PureState>> ensemble) {
    if (ensemble.empty()) fail_invalid("empty ensemble");
    const auto &reg = ensemble.front().second.reg();
    check_density_dim(reg.size());
    const auto n = static_cast<Eigen::Index>(reg.size());
    ComplexMatrix rho = ComplexMatrix::Zero(n, n);
    double total = 0;
    for (const auto &[p, psi] : ensemble) {
        require_same_register(reg, psi.reg(), "from_ensemble");
        if (p < 0) fail_invalid("negative ensemble weight");
        total += p;
        Eigen::Map<const Eigen::VectorXcd> v(psi.amplitudes().data(), n);
        rho += p * v * v.adjoint();
    }
    if (std::abs(total - 1.0) > kTolerance) fail_invalid("ensemble weights do not sum to 1");
    return DensityMatrix(reg, std::move(rho));
}

DensityMatrix DensityMatrix::maximally_mixed(const MixedRadixRegister &reg) {
    check_density_dim(reg.size());
    const auto n = static_cast<Eigen::Index>(reg.size());
    return DensityMatrix(reg, ComplexMatrix::Identity(n, n) / static_cast<double>(n));
}

double DensityMatrix::trace() const {
    return rho_.trace().real();
}

// ---------------------------------------------------------------------------
// Kernels

bool is_unitary(const ComplexMatrix &u, double tol) {
    if (u.rows() != u.cols()) return false;
    ComplexMatrix err = u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols());
    return err.cwiseAbs().maxCoeff() <= tol;
}

void apply_local_unitary(PureState &state, const ComplexMatrix &u, std::span<const std::size_t> targets,
                         UnitaryCheck check) {
    apply_local_unitary(state.reg(), state.data(), u, targets, check);
}

void apply_local_unitary(const MixedRadixRegister &reg, std::span<Complex> amps, const ComplexMatrix &u,
                         std::span<const std::size_t> targets, UnitaryCheck check) {
    if (amps.size() != reg.size()) fail_invalid("amplitude vector does not match register");
    const auto rest = reg.complement(targets);
    const auto fiber = reg.offsets(targets);
    const auto base = reg.offsets(rest);
    const auto d = fiber.size();
    if (u.rows() != static_cast<Eigen::Index>(d) || u.cols() != static_cast<Eigen::Index>(d)) {
        fail_invalid("operator of size " + std::to_string(u.rows()) + "x" + std::to_string(u.cols()) +
                     " does not match target dimension " + std::to_string(d));
    }
    if (check == UnitaryCheck::Checked && !is_unitary(u)) fail_invalid("operator is not unitary");

    // Row-major copy so the inner product walks contiguous memory.
    std::vector<Complex> m(d * d);
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = 0; c < d; ++c) m[r * d + c] = u(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
    std::vector<Complex> in(d);
    for (auto b : base) {
        for (std::size_t j = 0; j < d; ++j) in[j] = amps[b + fiber[j]];
        for (std::size_t r = 0; r < d; ++r) {
            const Complex *row = &m[r * d];
            Complex acc = 0;
            for (std::size_t j = 0; j < d; ++j) acc += row[j] * in[j];
            amps[b + fiber[r]] = acc;
        }
    }
}

std::vector<double> marginal_probabilities(const PureState &state, std::span<const std::size_t> targets) {
    const auto &reg = state.reg();
    const auto rest = reg.complement(targets);
    const auto fiber = reg.offsets(targets);
    const auto base = reg.offsets(rest);
    auto amps = state.amplitudes();
    std::vector<double> probs(fiber.size(), 0.0);
    for (std::size_t t = 0; t < fiber.size(); ++t) {
        double acc = 0;
        for (auto b : base) acc += std::norm(amps[fiber[t] + b]);
        probs[t] = acc;
    }
    return probs;
}

std::map<std::vector<Int>, double> exact_distribution(const PureState &state, std::span<const std::size_t> targets) {
    const auto sub = state.reg().select(targets);
    const auto probs = marginal_probabilities(state, targets);
    std::map<std::vector<Int>, double> out;
    for (std::size_t t = 0; t < probs.size(); ++t) {
        if (probs[t] > kZeroAmplitude * kZeroAmplitude) out.emplace(sub.coords_of(t), probs[t]);
    }
    return out;
}

std::size_t sample_index(std::span<const double> probabilities, RandomStream &rng) {
    if (probabilities.empty()) fail_invalid("cannot sample from an empty distribution");
    double total = std::accumulate(probabilities.begin(), probabilities.end(), 0.0);
    if (!(total > 0)) fail_invariant("distribution has zero total mass");
    double u = rng.uniform() * total;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < probabilities.size(); ++i) {
        if (probabilities[i] <= 0) continue;
        last_positive = i;
        if (u < probabilities[i]) return i;
        u -= probabilities[i];
    }
    return last_positive;
}

Measurement measure_subregister(const PureState &state, std::span<const std::size_t> targets, RandomStream &rng) {
    const auto &reg = state.reg();
    const auto probs = marginal_probabilities(state, targets);
    const auto pick = sample_index(probs, rng);
    const double p = probs[pick];
    if (!(p > kZeroAmplitude * kZeroAmplitude)) fail_invariant("measurement selected a zero-probability outcome");

    const auto rest = reg.complement(targets);
    const auto fiber = reg.offsets(targets);
    const auto base = reg.offsets(rest);
    std::vector<Complex> post(reg.size(), Complex{0, 0});
    const double scale = 1.0 / std::sqrt(p);
    auto amps = state.amplitudes();
    for (auto b : base) post[fiber[pick] + b] = amps[fiber[pick] + b] * scale;
    return Measurement{reg.select(targets).coords_of(pick), p, PureState::normalized(reg, std::move(post))};
}

PureState conditional_state(const PureState &state, std::span<const std::size_t> targets,
                            std::span<const Int> outcome) {
    const auto &reg = state.reg();
    const auto rest = reg.complement(targets);
    const auto sub = reg.select(targets);
    const auto fixed = reg.offsets(targets)[sub.index_of(outcome)];
    const auto base = reg.offsets(rest);
    std::vector<Complex> amps(base.size());
    auto src = state.amplitudes();
    for (std::size_t i = 0; i < base.size(); ++i) amps[i] = src[fixed + base[i]];
    return PureState::normalized(reg.select(rest), std::move(amps));
}

DensityMatrix marginal(const PureState &state, std::span<const std::size_t> targets) {
    const auto &reg = state.reg();
    const auto rest = reg.complement(targets);
    const auto fiber = reg.offsets(targets);
    const auto base = reg.offsets(rest);
    check_density_dim(fiber.size());
    const auto dt = static_cast<Eigen::Index>(fiber.size());
    const auto dc = static_cast<Eigen::Index>(base.size());
    ComplexMatrix psi(dt, dc);
    auto amps = state.amplitudes();
    for (Eigen::Index c = 0; c < dc; ++c) {
        for (Eigen::Index t = 0; t < dt; ++t) psi(t, c) = amps[fiber[t] + base[c]];
    }
    ComplexMatrix rho = psi * psi.adjoint();
    return DensityMatrix(reg.select(targets), std::move(rho));
}

DensityMatrix marginal(const DensityMatrix &rho, std::span<const std::size_t> targets) {
    const auto &reg = rho.reg();
    const auto rest = reg.complement(targets);
    const auto fiber = reg.offsets(targets);
    const auto base = reg.offsets(rest);
    const auto dt = static_cast<Eigen::Index>(fiber.size());
    ComplexMatrix out = ComplexMatrix::Zero(dt, dt);
    const auto &m = rho.matrix();
    for (auto b : base) {
        for (Eigen::Index i = 0; i < dt; ++i) {
            for (Eigen::Index j = 0; j < dt; ++j) {
                out(i, j) += m(static_cast<Eigen::Index>(fiber[i] + b), static_cast<Eigen::Index>(fiber[j] + b));
            }
        }
    }
    return DensityMatrix(reg.select(targets), std::move(out));
}

std::vector<double> schmidt_coefficients(const PureState &state, std::span<const std::size_t> targets) {
    const auto &reg = state.reg();
    const auto rest = reg.complement(targets);
    const auto fiber = reg.offsets(targets);
    const auto base = reg.offsets(rest);
    const auto dt = static_cast<Eigen::Index>(fiber.size());
    const auto dc = static_cast<Eigen::Index>(base.size());
    ComplexMatrix psi(dt, dc);
    auto amps = state.amplitudes();
    for (Eigen::Index c = 0; c < dc; ++c) {
        for (Eigen::Index t = 0; t < dt; ++t) psi(t, c) = amps[fiber[t] + base[c]];
    }
    Eigen::JacobiSVD<ComplexMatrix> svd(psi);
    const auto &s = svd.singularValues();
    return std::vector<double>(s.data(), s.data() + s.size());
}

double fidelity(const PureState &a, const PureState &b) {
    return clamp01(std::abs(inner(a, b)));
}

double fidelity(const PureState &a, const DensityMatrix &b) {
    require_same_register(a.reg(), b.reg(), "fidelity");
    const auto n = static_cast<Eigen::Index>(a.amplitudes().size());
    Eigen::Map<const Eigen::VectorXcd> v(a.amplitudes().data(), n);
    double overlap = (v.adjoint() * b.matrix() * v)(0, 0).real();
    return clamp01(std::sqrt(std::max(overlap, 0.0)));
}

double fidelity(const DensityMatrix &a, const DensityMatrix &b) {
    require_same_register(a.reg(), b.reg(), "fidelity");
    ComplexMatrix prod = psd_sqrt(a.matrix()) * psd_sqrt(b.matrix());
    Eigen::JacobiSVD<ComplexMatrix> svd(prod);
    return clamp01(svd.singularValues().sum());
}

double trace_distance(const PureState &a, const PureState &b) {
    double f = fidelity(a, b);
    return clamp01(std::sqrt(std::max(0.0, 1.0 - f * f)));
}

double trace_distance(const PureState &a, const DensityMatrix &b) {
    return trace_distance(DensityMatrix::from_pure(a), b);
}

double trace_distance(const DensityMatrix &a, const DensityMatrix &b) {
    require_same_register(a.reg(), b.reg(), "trace_distance");
    ComplexMatrix diff = a.matrix() - b.matrix();
    diff = 0.5 * (diff + diff.adjoint());
    return clamp01(0.5 * hermitian_eigenvalues(diff).cwiseAbs().sum());
}

}  // namespace ahsp
