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
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "ahsp/group.hpp"
#include "ahsp/operators.hpp"
#include "ahsp/rng.hpp"
#include "ahsp/state.hpp"

namespace ahsp {

/// Register layout shared by both pipelines: sites [0, k) are A_1..A_k with
/// dimensions N_j, sites [k, 2k) are B_1..B_k with dimensions h_j.
struct AlgorithmLayout {
    MixedRadixRegister reg;
    MixedRadixRegister aux_reg;
    std::vector<std::size_t> a_sites;
    std::vector<std::size_t> b_sites;

    static AlgorithmLayout for_function(const HidingFunction &f);
};

/// Probabilities over G indexed by flat element index.
class OutcomeDistribution {
   public:
    OutcomeDistribution(FiniteAbelianGroup group, std::vector<double> probabilities);

    const FiniteAbelianGroup &group() const noexcept {
        return group_;
    }
    std::span<const double> probabilities() const noexcept {
        return probs_;
    }
    double operator[](const GroupElement &x) const;
    double total() const;
    /// Outcomes with probability above `threshold`, keyed by coordinates.
    std::map<std::vector<Int>, double> to_map(double threshold = kZeroAmplitude * kZeroAmplitude) const;
    /// Largest absolute difference, entry by entry.
    double max_abs_diff(const OutcomeDistribution &other) const;

   private:
    FiniteAbelianGroup group_;
    std::vector<double> probs_;
};

struct SeedDescriptor {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
};

struct ShotRecord {
    GroupElement outcome;
    std::optional<GroupElement> z_used;
    double probability_of_outcome = 0;
    /// Standard: |<0|B_after>|. Initialization-free: |<Phi|B_after>|.
    double aux_restoration_fidelity = 0;
    std::uint64_t shot_index = 0;
    SeedDescriptor rng;
    /// State of B after A has been measured.
    PureState aux_after;
    OperationCounters counters;
};

// Standard algorithm: QFT_A, U_f, QFT_A on |0>_A |0>_B.

PureState standard_run_state(const HidingFunction &f, OperationCounters *counters = nullptr);
OutcomeDistribution standard_exact_distribution(const HidingFunction &f);
ShotRecord standard_sample(const HidingFunction &f, RandomStream &rng, std::uint64_t shot_index = 0);

struct PostMeasurementAux {
    PureState state;
    double fidelity_with_zero = 0;
};

/// B after observing tau: sqrt(|H|/|G|) sum_{r in R} omega_M^{r.tau} |f(r)>.
/// Throws if tau is not in H-perp.
PostMeasurementAux standard_post_measurement_aux(const HidingFunction &f, const GroupElement &tau);

// Initialization-free algorithm: QFT_A, U_f, S_z, U_f, S_z, QFT_A on |0>_A |Phi>_B.

PureState ifqa_run_state(const HidingFunction &f, const PureState &aux, const GroupElement &z,
                         OperationCounters *counters = nullptr);
OutcomeDistribution ifqa_exact_distribution_for_z(const HidingFunction &f, const PureState &aux,
                                                  const GroupElement &z);
/// (1/|Y|) sum_z Pr_z, each term from a full simulation.
OutcomeDistribution ifqa_expected_distribution(const HidingFunction &f, const PureState &aux);

/// Upper bound on the trace distance between the B-marginal of `amps` (a
/// state over the algorithm layout) and |aux><aux|. Exact up to rounding:
/// splits each B fiber into its component along aux and an orthogonal rest.
double restoration_distance_bound(const AlgorithmLayout &layout, std::span<const Complex> amps,
                                  const PureState &aux);

/// Per-outcome data of a final state: Pr(tau) and the fidelity of the
/// B state conditioned on tau with a reference state.
struct OutcomeTable {
    std::vector<double> probabilities;
    /// |<ref|B_tau>|, zero where Pr(tau) vanishes.
    std::vector<double> fidelities;
    /// sqrt(<ref|rho_B|ref>) for the unconditioned B-marginal.
    double marginal_fidelity = 0;
};

OutcomeTable outcome_table(const AlgorithmLayout &layout, std::span<const Complex> amps, const PureState &reference);
/// Reference |0>.
OutcomeTable standard_outcome_table(const HidingFunction &f);
/// Reference aux.
OutcomeTable ifqa_outcome_table(const HidingFunction &f, const PureState &aux, const GroupElement &z);

struct IfqaAverage {
    OutcomeDistribution distribution;
    /// Worst restoration_distance_bound over all z.
    double max_restoration_distance = 0;
    /// Conditional fidelities |<aux|B_tau>| over all (z, tau) with Pr > 0.
    double min_fidelity = 1;
    double mean_fidelity = 1;
};

/// The z-averaged distribution together with a restoration check on every
/// per-z final state.
IfqaAverage ifqa_average(const HidingFunction &f, const PureState &aux);

enum class AuxKind { Zero, GivenPure, RandomPure, GivenMixed, RandomMixed };

const char *to_string(AuxKind kind);
AuxKind aux_kind_from_string(const std::string &name);

/// Initial state of the auxiliary register. Random kinds draw their state
/// once, at construction; it then stays fixed (and unknown to the
/// algorithm) for the experiment.
class AuxSpec {
   public:
    static AuxSpec zero(const MixedRadixRegister &reg);
    static AuxSpec given_pure(PureState state);
    static AuxSpec random_pure(const MixedRadixRegister &reg, RandomStream &rng);
    static AuxSpec given_mixed(std::vector<std::pair<double, PureState>> ensemble);
    static AuxSpec random_mixed(const MixedRadixRegister &reg, RandomStream &rng, std::size_t members = 3);

    AuxKind kind() const noexcept {
        return kind_;
    }
    bool is_mixed() const noexcept {
        return kind_ == AuxKind::GivenMixed || kind_ == AuxKind::RandomMixed;
    }
    const MixedRadixRegister &reg() const noexcept {
        return ensemble_.front().second.reg();
    }
    const std::vector<std::pair<double, PureState>> &ensemble() const noexcept {
        return ensemble_;
    }
    /// The state itself for pure kinds; throws for mixed ones.
    const PureState &pure() const;
    DensityMatrix density() const;
    std::size_t sample_member(RandomStream &rng) const;

   private:
    AuxSpec(AuxKind kind, std::vector<std::pair<double, PureState>> ensemble);

    AuxKind kind_;
    std::vector<std::pair<double, PureState>> ensemble_;
};

/// Draws z uniformly from Y (and an ensemble member when the aux state is
/// mixed), runs the circuit, measures A.
ShotRecord ifqa_sample(const HidingFunction &f, const AuxSpec &aux, RandomStream &rng, std::uint64_t shot_index = 0);

/// A-diagonal blocks of Lambda(|0><0|_A x rho_B), i.e. the joint state after
/// A has been measured. Block t is the unnormalized |Y| x |Y| operator
/// <t|_A Lambda(.) |t>_A.
class ChannelOutput {
   public:
    ChannelOutput(FiniteAbelianGroup group, MixedRadixRegister aux_reg, std::vector<ComplexMatrix> blocks);

    double trace() const;
    OutcomeDistribution a_distribution() const;
    DensityMatrix b_marginal() const;
    /// B conditioned on outcome tau; throws if tau has zero probability.
    DensityMatrix conditional_b(const GroupElement &tau) const;

   private:
    FiniteAbelianGroup group_;
    MixedRadixRegister aux_reg_;
    std::vector<ComplexMatrix> blocks_;
};

/// (1/|Y|) sum_z Lambda_z (|0><0| x rho_B) Lambda_z^dagger, evolving rho_B
/// through its spectral decomposition.
ChannelOutput lambda_channel(const DensityMatrix &rho_b, const HidingFunction &f);

/// The same channel as a full matrix over A x B, by conjugating the whole
/// input density matrix. Only for small registers.
DensityMatrix lambda_channel_dense(const DensityMatrix &rho_b, const HidingFunction &f);

/// Expected A distribution for an arbitrary aux spec: the pure-state
/// average for pure kinds, the channel for mixed ones.
OutcomeDistribution ifqa_expected_distribution(const HidingFunction &f, const AuxSpec &aux);

}  // namespace ahsp
