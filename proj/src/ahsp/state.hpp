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

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "ahsp/group.hpp"
#include "ahsp/rng.hpp"

namespace ahsp {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

/// Tolerance for unitarity, normalization and density-matrix checks.
inline constexpr double kTolerance = 1e-9;
/// Amplitudes below this magnitude are classified as exactly zero.
inline constexpr double kZeroAmplitude = 1e-12;

inline constexpr std::uint64_t kDefaultMaxAmplitudes = std::uint64_t{1} << 22;
inline constexpr std::uint64_t kMaxDensityDimension = std::uint64_t{1} << 12;

/// Cap on the number of amplitudes a PureState may hold. Initialized from
/// AHSP_SIM_MAX_AMPLITUDES when set, else 2^22.
std::uint64_t max_amplitudes();
void set_max_amplitudes(std::uint64_t cap);
/// Back to the environment value or the default.
void reset_max_amplitudes();
/// Throws ErrorKind::ResourceCap if a state of `total` amplitudes is too big.
void check_amplitude_cap(std::uint64_t total);

/// Composite register of qudits with dimensions d_1..d_m. Flat indices are
/// row-major: site 0 is the most significant digit.
class MixedRadixRegister {
   public:
    explicit MixedRadixRegister(std::vector<Int> dims);

    std::size_t num_sites() const noexcept {
        return dims_.size();
    }
    const std::vector<Int> &dims() const noexcept {
        return dims_;
    }
    Int dim(std::size_t site) const {
        return dims_.at(site);
    }
    std::uint64_t stride(std::size_t site) const {
        return strides_.at(site);
    }
    std::uint64_t size() const noexcept {
        return total_;
    }

    std::uint64_t index_of(std::span<const Int> coords) const;
    std::vector<Int> coords_of(std::uint64_t index) const;

    /// Register made of the listed sites, in the listed order.
    MixedRadixRegister select(std::span<const std::size_t> sites) const;
    /// Sites not listed, in increasing order.
    std::vector<std::size_t> complement(std::span<const std::size_t> sites) const;
    /// offsets[i] is the flat-index contribution of the i-th configuration
    /// (row-major over `sites`) of the listed sites.
    std::vector<std::uint64_t> offsets(std::span<const std::size_t> sites) const;

    MixedRadixRegister concat(const MixedRadixRegister &other) const;

    friend bool operator==(const MixedRadixRegister &a, const MixedRadixRegister &b) {
        return a.dims_ == b.dims_;
    }

   private:
    std::vector<Int> dims_;
    std::vector<std::uint64_t> strides_;
    std::uint64_t total_ = 1;
};

/// Normalized dense state vector over a mixed-radix register.
class PureState {
   public:
    /// Takes ownership of the amplitudes; they must be normalized.
    PureState(MixedRadixRegister reg, std::vector<Complex> amplitudes);

    static PureState basis(const MixedRadixRegister &reg, std::span<const Int> coords);
    static PureState basis(const MixedRadixRegister &reg, std::initializer_list<Int> coords);
    /// Rescales to unit norm; throws if the vector is (numerically) zero.
    static PureState normalized(MixedRadixRegister reg, std::vector<Complex> amplitudes);
    /// Haar-random state from normalized complex Gaussians.
    static PureState random(const MixedRadixRegister &reg, RandomStream &rng);

    const MixedRadixRegister &reg() const noexcept {
        return reg_;
    }
    std::span<const Complex> amplitudes() const noexcept {
        return amps_;
    }
    /// Raw mutable access for in-place kernels. Kernels must preserve the norm.
    std::vector<Complex> &data() noexcept {
        return amps_;
    }
    Complex amplitude(std::span<const Int> coords) const;
    Complex amplitude(std::initializer_list<Int> coords) const;
    double norm() const;

    PureState tensor(const PureState &other) const;

   private:
    MixedRadixRegister reg_;
    std::vector<Complex> amps_;
};

/// <a|b>.
Complex inner(const PureState &a, const PureState &b);

class DensityMatrix {
   public:
    /// Validates Hermiticity, unit trace and positivity within kTolerance.
    DensityMatrix(MixedRadixRegister reg, ComplexMatrix rho);

    static DensityMatrix from_pure(const PureState &state);
    static DensityMatrix from_ensemble(std::span<const std::pair<double, PureState>> ensemble);
    static DensityMatrix maximally_mixed(const MixedRadixRegister &reg);

    const MixedRadixRegister &reg() const noexcept {
        return reg_;
    }
    const ComplexMatrix &matrix() const noexcept {
        return rho_;
    }
    double trace() const;

   private:
    MixedRadixRegister reg_;
    ComplexMatrix rho_;
};

enum class UnitaryCheck { Checked, Unchecked };

bool is_unitary(const ComplexMatrix &u, double tol = kTolerance);

/// Applies U to the listed sites (I on the rest) with a strided
/// gather/multiply/scatter over d-element fibers. U is indexed row-major
/// over the targets in the order given.
void apply_local_unitary(PureState &state, const ComplexMatrix &u, std::span<const std::size_t> targets,
                         UnitaryCheck check = UnitaryCheck::Checked);
/// Same kernel on an arbitrary (not necessarily normalized) vector.
void apply_local_unitary(const MixedRadixRegister &reg, std::span<Complex> amps, const ComplexMatrix &u,
                         std::span<const std::size_t> targets, UnitaryCheck check = UnitaryCheck::Checked);

/// Born probabilities of every configuration of `targets`, row-major.
std::vector<double> marginal_probabilities(const PureState &state, std::span<const std::size_t> targets);

/// Same distribution keyed by outcome tuple; outcomes whose amplitudes are
/// all below kZeroAmplitude are omitted.
std::map<std::vector<Int>, double> exact_distribution(const PureState &state,
                                                      std::span<const std::size_t> targets);

struct Measurement {
    std::vector<Int> outcome;
    double probability = 0;
    PureState post;
};

/// Projective measurement of `targets` in the computational basis.
Measurement measure_subregister(const PureState &state, std::span<const std::size_t> targets,
                                RandomStream &rng);

/// Index drawn from a discrete distribution using one uniform variate.
std::size_t sample_index(std::span<const double> probabilities, RandomStream &rng);

/// Partial trace onto `targets`.
DensityMatrix marginal(const PureState &state, std::span<const std::size_t> targets);
DensityMatrix marginal(const DensityMatrix &rho, std::span<const std::size_t> targets);

/// Conditional state of the non-target sites given `targets` = outcome,
/// normalized. Throws if the outcome has zero probability.
PureState conditional_state(const PureState &state, std::span<const std::size_t> targets,
                            std::span<const Int> outcome);

/// Schmidt coefficients across the (targets | rest) cut, descending.
std::vector<double> schmidt_coefficients(const PureState &state, std::span<const std::size_t> targets);

// Root (Uhlmann) fidelity tr|sqrt(a) sqrt(b)|; |<a|b>| for pure states.
double fidelity(const PureState &a, const PureState &b);
double fidelity(const PureState &a, const DensityMatrix &b);
double fidelity(const DensityMatrix &a, const DensityMatrix &b);

// Half the trace norm of the difference.
double trace_distance(const PureState &a, const PureState &b);
double trace_distance(const PureState &a, const DensityMatrix &b);
double trace_distance(const DensityMatrix &a, const DensityMatrix &b);

}  // namespace ahsp
