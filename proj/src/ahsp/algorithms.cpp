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

#include "ahsp/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "ahsp/error.hpp"

namespace ahsp {

namespace {

void require_aux_register(const HidingFunction &f, const MixedRadixRegister &aux) {
    if (aux.dims() != f.codomain().moduli()) {
        fail_invalid("auxiliary state dimensions do not match Y = " + f.codomain().to_string());
    }
}

void require_in_codomain(const HidingFunction &f, const GroupElement &z) {
    if (!(z.group() == f.codomain())) fail_invalid("z is not an element of Y = " + f.codomain().to_string());
}

// The middle section U_f, S_z, U_f, S_z followed by the final QFT, on a raw
// vector over the algorithm layout.
void run_ifqa_tail(const AlgorithmLayout &layout, std::span<Complex> amps, const HidingFunction &f,
                   const GroupElement &z, OperationCounters *counters) {
    apply_oracle(layout.reg, amps, f, layout.a_sites, layout.b_sites, Direction::Forward, counters);
    s_z_apply(layout.reg, amps, z, layout.b_sites, counters);
    apply_oracle(layout.reg, amps, f, layout.a_sites, layout.b_sites, Direction::Forward, counters);
    s_z_apply(layout.reg, amps, z, layout.b_sites, counters);
    apply_qft_group(layout.reg, amps, f.domain(), layout.a_sites, Direction::Forward, counters);
}

void run_ifqa(const AlgorithmLayout &layout, std::span<Complex> amps, const HidingFunction &f, const GroupElement &z,
              OperationCounters *counters) {
    apply_qft_group(layout.reg, amps, f.domain(), layout.a_sites, Direction::Forward, counters);
    run_ifqa_tail(layout, amps, f, z, counters);
}

// |0>_A (x) aux, laid out A-major.
std::vector<Complex> embed_aux(const AlgorithmLayout &layout, std::span<const Complex> aux) {
    check_amplitude_cap(layout.reg.size());
    std::vector<Complex> amps(layout.reg.size());
    std::copy(aux.begin(), aux.end(), amps.begin());
    return amps;
}

OutcomeDistribution a_distribution(const AlgorithmLayout &layout, const PureState &state,
                                   const FiniteAbelianGroup &group) {
    return OutcomeDistribution(group, marginal_probabilities(state, layout.a_sites));
}

void check_quotient_weight(const HidingFunction &f) {
    // |H|/|G| and 1/|Y| must agree; they do whenever Y is G/H.
    const auto &h = f.hidden();
    if (checked_mul(h.order(), f.codomain().order()) != f.domain().order()) {
        fail_invariant("|H| * |Y| != |G| for " + h.to_string());
    }
}

}  // namespace

AlgorithmLayout AlgorithmLayout::for_function(const HidingFunction &f) {
    const auto k = f.domain().rank();
    std::vector<Int> dims = f.domain().moduli();
    const auto &ydims = f.codomain().moduli();
    dims.insert(dims.end(), ydims.begin(), ydims.end());
    AlgorithmLayout layout{MixedRadixRegister(std::move(dims)), MixedRadixRegister(ydims), {}, {}};
    for (std::size_t j = 0; j < k; ++j) {
        layout.a_sites.push_back(j);
        layout.b_sites.push_back(k + j);
    }
    return layout;
}

// ---------------------------------------------------------------------------
// OutcomeDistribution

OutcomeDistribution::OutcomeDistribution(FiniteAbelianGroup group, std::vector<double> probabilities)
    : group_(std::move(group)), probs_(std::move(probabilities)) {
    if (probs_.size() != static_cast<std::size_t>(group_.order())) {
        fail_invalid("distribution length does not match group order");
    }
}

double OutcomeDistribution::operator[](const GroupElement &x) const {
    return probs_[group_.index_of(x)];
}

double OutcomeDistribution::total() const {
    return std::accumulate(probs_.begin(), probs_.end(), 0.0);
}

std::map<std::vector<Int>, double> OutcomeDistribution::to_map(double threshold) const {
    std::map<std::vector<Int>, double> out;
    for (std::size_t i = 0; i < probs_.size(); ++i) {
        if (probs_[i] > threshold) out.emplace(group_.element_at(i).coords(), probs_[i]);
    }
    return out;
}

double OutcomeDistribution::max_abs_diff(const OutcomeDistribution &other) const {
    if (!(group_ == other.group_)) fail_invalid("comparing distributions over different groups");
    double worst = 0;
    for (std::size_t i = 0; i < probs_.size(); ++i) worst = std::max(worst, std::abs(probs_[i] - other.probs_[i]));
    return worst;
}

// ---------------------------------------------------------------------------
// Standard algorithm

PureState standard_run_state(const HidingFunction &f, OperationCounters *counters) {
    const auto layout = AlgorithmLayout::for_function(f);
    auto state = PureState::basis(layout.reg, std::vector<Int>(layout.reg.num_sites(), 0));
    apply_qft_group(state, f.domain(), layout.a_sites, Direction::Forward, counters);
    apply_oracle(state, f, layout.a_sites, layout.b_sites, Direction::Forward, counters);
    apply_qft_group(state, f.domain(), layout.a_sites, Direction::Forward, counters);
    return state;
}

OutcomeDistribution standard_exact_distribution(const HidingFunction &f) {
    const auto layout = AlgorithmLayout::for_function(f);
    return a_distribution(layout, standard_run_state(f), f.domain());
}

ShotRecord standard_sample(const HidingFunction &f, RandomStream &rng, std::uint64_t shot_index) {
    const auto layout = AlgorithmLayout::for_function(f);
    const SeedDescriptor seed{rng.seed(), rng.stream_id()};
    OperationCounters counters;
    const auto psi = standard_run_state(f, &counters);
    auto m = measure_subregister(psi, layout.a_sites, rng);
    auto aux_after = conditional_state(m.post, layout.a_sites, m.outcome);
    const auto zero = PureState::basis(layout.aux_reg, std::vector<Int>(layout.aux_reg.num_sites(), 0));
    const double fid = fidelity(zero, aux_after);
    return ShotRecord{f.domain().element(m.outcome), std::nullopt, m.probability, fid, shot_index, seed,
                      std::move(aux_after), counters};
}

PostMeasurementAux standard_post_measurement_aux(const HidingFunction &f, const GroupElement &tau) {
    const auto &h = f.hidden();
    if (!is_orthogonal(tau, h)) fail_invalid("outcome " + tau.to_string() + " is not in the orthogonal subgroup");
    const auto layout = AlgorithmLayout::for_function(f);
    std::vector<Complex> amps(layout.aux_reg.size());
    const double a = std::sqrt(static_cast<double>(h.order()) / static_cast<double>(f.domain().order()));
    const Int m = f.domain().exponent();
    for (const auto &r : coset_representatives(h)) {
        amps[f.value_index(f.domain().index_of(r))] += a * root_of_unity(inner_product(r, tau), m);
    }
    auto state = PureState(layout.aux_reg, std::move(amps));
    const auto zero = PureState::basis(layout.aux_reg, std::vector<Int>(layout.aux_reg.num_sites(), 0));
    const double fid = fidelity(zero, state);
    return PostMeasurementAux{std::move(state), fid};
}

// ---------------------------------------------------------------------------
// Initialization-free algorithm

PureState ifqa_run_state(const HidingFunction &f, const PureState &aux, const GroupElement &z,
                         OperationCounters *counters) {
    require_aux_register(f, aux.reg());
    require_in_codomain(f, z);
    const auto layout = AlgorithmLayout::for_function(f);
    auto amps = embed_aux(layout, aux.amplitudes());
    run_ifqa(layout, amps, f, z, counters);
    return PureState(layout.reg, std::move(amps));
}

OutcomeDistribution ifqa_exact_distribution_for_z(const HidingFunction &f, const PureState &aux,
                                                  const GroupElement &z) {
    const auto layout = AlgorithmLayout::for_function(f);
    return a_distribution(layout, ifqa_run_state(f, aux, z), f.domain());
}

OutcomeDistribution ifqa_expected_distribution(const HidingFunction &f, const PureState &aux) {
    return ifqa_average(f, aux).distribution;
}

namespace {

struct FiberScan {
    OutcomeTable table;
    double distance_bound = 0;
};

// One pass over the B fibers psi_a of a final state. With psi_a = c_a ref + r_a
// (r_a orthogonal to ref) and w = sum conj(c_a) r_a,
//   rho_B - |ref><ref| = (sum|c_a|^2 - 1)|ref><ref| + |ref><w| + |w><ref| + sum |r_a><r_a|,
// whose trace norm is at most |sum|c_a|^2 - 1| + 2|w| + sum |r_a|^2.
FiberScan scan_fibers(const AlgorithmLayout &layout, std::span<const Complex> amps, const PureState &reference) {
    if (!(reference.reg() == layout.aux_reg)) fail_invalid("reference state does not live on the B register");
    if (amps.size() != layout.reg.size()) fail_invalid("amplitude vector does not match the layout");
    const auto a_off = layout.reg.offsets(layout.a_sites);
    const auto b_off = layout.reg.offsets(layout.b_sites);
    const auto ref = reference.amplitudes();
    const auto n = b_off.size();
    FiberScan out{OutcomeTable{std::vector<double>(a_off.size()), std::vector<double>(a_off.size()), 0}, 0};
    // Fibers are contiguous when B holds the trailing sites.
    bool contiguous = true;
    for (std::size_t b = 0; b < n; ++b) contiguous = contiguous && b_off[b] == b;
    std::vector<Complex> buffer(contiguous ? 0 : n);
    std::vector<Complex> w(n);
    double weight = 0, rest = 0;
    for (std::size_t a = 0; a < a_off.size(); ++a) {
        const Complex *fiber = amps.data() + a_off[a];
        if (!contiguous) {
            for (std::size_t b = 0; b < n; ++b) buffer[b] = amps[a_off[a] + b_off[b]];
            fiber = buffer.data();
        }
        double p = 0;
        Complex c = 0;
        for (std::size_t b = 0; b < n; ++b) {
            p += std::norm(fiber[b]);
            c += std::conj(ref[b]) * fiber[b];
        }
        out.table.probabilities[a] = p;
        if (p == 0) continue;
        const double c2 = std::norm(c);
        weight += c2;
        if (p > kZeroAmplitude * kZeroAmplitude) out.table.fidelities[a] = std::min(1.0, std::sqrt(c2 / p));
        const Complex cc = std::conj(c);
        for (std::size_t b = 0; b < n; ++b) {
            const Complex r = fiber[b] - c * ref[b];
            rest += std::norm(r);
            w[b] += cc * r;
        }
    }
    double w2 = 0;
    for (auto x : w) w2 += std::norm(x);
    out.table.marginal_fidelity = std::sqrt(std::min(1.0, weight));
    out.distance_bound = 0.5 * (std::abs(weight - 1.0) + 2.0 * std::sqrt(w2) + rest);
    return out;
}

}  // namespace

double restoration_distance_bound(const AlgorithmLayout &layout, std::span<const Complex> amps,
                                  const PureState &aux) {
    return scan_fibers(layout, amps, aux).distance_bound;
}

OutcomeTable outcome_table(const AlgorithmLayout &layout, std::span<const Complex> amps, const PureState &reference) {
    return scan_fibers(layout, amps, reference).table;
}

OutcomeTable standard_outcome_table(const HidingFunction &f) {
    const auto layout = AlgorithmLayout::for_function(f);
    const auto psi = standard_run_state(f);
    const auto zero = PureState::basis(layout.aux_reg, std::vector<Int>(layout.aux_reg.num_sites(), 0));
    return outcome_table(layout, psi.amplitudes(), zero);
}

OutcomeTable ifqa_outcome_table(const HidingFunction &f, const PureState &aux, const GroupElement &z) {
    const auto layout = AlgorithmLayout::for_function(f);
    const auto psi = ifqa_run_state(f, aux, z);
    return outcome_table(layout, psi.amplitudes(), aux);
}

IfqaAverage ifqa_average(const HidingFunction &f, const PureState &aux) {
    require_aux_register(f, aux.reg());
    const auto layout = AlgorithmLayout::for_function(f);
    const auto &y = f.codomain();
    const auto y_size = static_cast<std::uint64_t>(y.order());

    // The first QFT does not depend on z; run it once.
    auto prefix = embed_aux(layout, aux.amplitudes());
    apply_qft_group(layout.reg, prefix, f.domain(), layout.a_sites);
    std::vector<double> acc(static_cast<std::size_t>(f.domain().order()), 0.0);
    std::vector<Complex> work(prefix.size());
    double worst = 0;
    double min_fid = 1;
    double mean_fid = 0;
    for (std::uint64_t zi = 0; zi < y_size; ++zi) {
        std::copy(prefix.begin(), prefix.end(), work.begin());
        run_ifqa_tail(layout, work, f, y.element_at(zi), nullptr);
        const auto scan = scan_fibers(layout, work, aux);
        worst = std::max(worst, scan.distance_bound);
        const auto &t = scan.table;
        for (std::size_t i = 0; i < acc.size(); ++i) {
            acc[i] += t.probabilities[i];
            mean_fid += t.probabilities[i] * t.fidelities[i];
            if (t.probabilities[i] > kZeroAmplitude * kZeroAmplitude) min_fid = std::min(min_fid, t.fidelities[i]);
        }
    }
    const double inv = 1.0 / static_cast<double>(y_size);
    for (auto &p : acc) p *= inv;
    return IfqaAverage{OutcomeDistribution(f.domain(), std::move(acc)), worst, min_fid, mean_fid * inv};
}

const char *to_string(AuxKind kind) {
    switch (kind) {
        case AuxKind::Zero:
            return "zero";
        case AuxKind::GivenPure:
            return "given-pure";
        case AuxKind::RandomPure:
            return "random-pure";
        case AuxKind::GivenMixed:
            return "given-mixed";
        case AuxKind::RandomMixed:
            return "random-mixed";
    }
    return "unknown";
}

AuxKind aux_kind_from_string(const std::string &name) {
    for (auto k : {AuxKind::Zero, AuxKind::GivenPure, AuxKind::RandomPure, AuxKind::GivenMixed, AuxKind::RandomMixed}) {
        if (name == to_string(k)) return k;
    }
    fail_invalid("unknown aux kind '" + name + "'");
}

AuxSpec::AuxSpec(AuxKind kind, std::vector<std::pair<double, PureState>> ensemble)
    : kind_(kind), ensemble_(std::move(ensemble)) {
    if (ensemble_.empty()) fail_invalid("aux spec needs at least one state");
    double total = 0;
    for (const auto &[p, psi] : ensemble_) {
        if (!(p >= 0)) fail_invalid("negative ensemble weight");
        if (!(psi.reg() == ensemble_.front().second.reg())) fail_invalid("ensemble members on different registers");
        total += p;
    }
    if (std::abs(total - 1.0) > kTolerance) fail_invalid("ensemble weights do not sum to 1");
}

AuxSpec AuxSpec::zero(const MixedRadixRegister &reg) {
    std::vector<std::pair<double, PureState>> e;
    e.emplace_back(1.0, PureState::basis(reg, std::vector<Int>(reg.num_sites(), 0)));
    return AuxSpec(AuxKind::Zero, std::move(e));
}

AuxSpec AuxSpec::given_pure(PureState state) {
    std::vector<std::pair<double, PureState>> e;
    e.emplace_back(1.0, std::move(state));
    return AuxSpec(AuxKind::GivenPure, std::move(e));
}

AuxSpec AuxSpec::random_pure(const MixedRadixRegister &reg, RandomStream &rng) {
    std::vector<std::pair<double, PureState>> e;
    e.emplace_back(1.0, PureState::random(reg, rng));
    return AuxSpec(AuxKind::RandomPure, std::move(e));
}

AuxSpec AuxSpec::given_mixed(std::vector<std::pair<double, PureState>> ensemble) {
    return AuxSpec(AuxKind::GivenMixed, std::move(ensemble));
}

AuxSpec AuxSpec::random_mixed(const MixedRadixRegister &reg, RandomStream &rng, std::size_t members) {
    if (members == 0) fail_invalid("mixed ensemble needs at least one member");
    std::vector<double> w(members);
    double total = 0;
    for (auto &x : w) {
        // Exponential variates give Dirichlet(1, ..., 1) weights.
        x = -std::log1p(-rng.uniform());
        total += x;
    }
    std::vector<std::pair<double, PureState>> e;
    for (std::size_t i = 0; i < members; ++i) e.emplace_back(w[i] / total, PureState::random(reg, rng));
    return AuxSpec(AuxKind::RandomMixed, std::move(e));
}

const PureState &AuxSpec::pure() const {
    if (is_mixed()) fail_invalid("aux spec is mixed");
    return ensemble_.front().second;
}

DensityMatrix AuxSpec::density() const {
    return DensityMatrix::from_ensemble(ensemble_);
}

std::size_t AuxSpec::sample_member(RandomStream &rng) const {
    if (ensemble_.size() == 1) return 0;
    std::vector<double> w;
    w.reserve(ensemble_.size());
    for (const auto &[p, psi] : ensemble_) w.push_back(p);
    return sample_index(w, rng);
}

ShotRecord ifqa_sample(const HidingFunction &f, const AuxSpec &aux, RandomStream &rng, std::uint64_t shot_index) {
    require_aux_register(f, aux.reg());
    const auto layout = AlgorithmLayout::for_function(f);
    const SeedDescriptor seed{rng.seed(), rng.stream_id()};
    const auto &y = f.codomain();
    auto z = y.element_at(rng.uniform_below(static_cast<std::uint64_t>(y.order())));
    const auto &phi = aux.ensemble()[aux.sample_member(rng)].second;
    OperationCounters counters;
    const auto state = ifqa_run_state(f, phi, z, &counters);
    auto m = measure_subregister(state, layout.a_sites, rng);
    auto aux_after = conditional_state(m.post, layout.a_sites, m.outcome);
    const double fid = fidelity(phi, aux_after);
    return ShotRecord{f.domain().element(m.outcome), std::move(z), m.probability, fid, shot_index, seed,
                      std::move(aux_after), counters};
}

// ---------------------------------------------------------------------------
// Channel

ChannelOutput::ChannelOutput(FiniteAbelianGroup group, MixedRadixRegister aux_reg, std::vector<ComplexMatrix> blocks)
    : group_(std::move(group)), aux_reg_(std::move(aux_reg)), blocks_(std::move(blocks)) {
    if (blocks_.size() != static_cast<std::size_t>(group_.order())) fail_invalid("one block per group element required");
}

double ChannelOutput::trace() const {
    double t = 0;
    for (const auto &b : blocks_) t += b.trace().real();
    return t;
}

OutcomeDistribution ChannelOutput::a_distribution() const {
    std::vector<double> probs;
    probs.reserve(blocks_.size());
    for (const auto &b : blocks_) probs.push_back(b.trace().real());
    return OutcomeDistribution(group_, std::move(probs));
}

DensityMatrix ChannelOutput::b_marginal() const {
    ComplexMatrix acc = ComplexMatrix::Zero(blocks_.front().rows(), blocks_.front().cols());
    for (const auto &b : blocks_) acc += b;
    return DensityMatrix(aux_reg_, std::move(acc));
}

DensityMatrix ChannelOutput::conditional_b(const GroupElement &tau) const {
    const auto &b = blocks_[group_.index_of(tau)];
    const double p = b.trace().real();
    if (!(p > kZeroAmplitude * kZeroAmplitude)) fail_invalid("outcome " + tau.to_string() + " has zero probability");
    return DensityMatrix(aux_reg_, b / p);
}

ChannelOutput lambda_channel(const DensityMatrix &rho_b, const HidingFunction &f) {
    require_aux_register(f, rho_b.reg());
    check_quotient_weight(f);
    const auto layout = AlgorithmLayout::for_function(f);
    const auto &y = f.codomain();
    const auto y_size = static_cast<std::uint64_t>(y.order());
    const auto g_size = static_cast<std::size_t>(f.domain().order());
    const double weight = 1.0 / static_cast<double>(y_size);

    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(0.5 * (rho_b.matrix() + rho_b.matrix().adjoint()));
    const auto n = static_cast<Eigen::Index>(y_size);
    std::vector<ComplexMatrix> blocks(g_size, ComplexMatrix::Zero(n, n));
    const auto a_off = layout.reg.offsets(layout.a_sites);
    const auto b_off = layout.reg.offsets(layout.b_sites);

    // Usual numerical-rank cutoff; anything below it is rounding noise from
    // the eigensolver, not weight in rho.
    const double cutoff = eig.eigenvalues().maxCoeff() * static_cast<double>(y_size) *
                          std::numeric_limits<double>::epsilon();
    for (Eigen::Index c = 0; c < eig.eigenvalues().size(); ++c) {
        const double p = eig.eigenvalues()(c);
        if (p <= cutoff) continue;
        const Eigen::VectorXcd v = eig.eigenvectors().col(c);
        std::vector<Complex> aux(v.data(), v.data() + v.size());
        auto prefix = embed_aux(layout, aux);
        apply_qft_group(layout.reg, prefix, f.domain(), layout.a_sites);
        // Column zi of fibers[t] is the B fiber at outcome t for that z.
        std::vector<ComplexMatrix> fibers(g_size, ComplexMatrix(n, n));
        for (std::uint64_t zi = 0; zi < y_size; ++zi) {
            auto work = prefix;
            run_ifqa_tail(layout, work, f, y.element_at(zi), nullptr);
            const auto col = static_cast<Eigen::Index>(zi);
            for (std::size_t t = 0; t < g_size; ++t) {
                for (Eigen::Index b = 0; b < n; ++b) {
                    fibers[t](b, col) = work[a_off[t] + b_off[static_cast<std::size_t>(b)]];
                }
            }
        }
        for (std::size_t t = 0; t < g_size; ++t) blocks[t].noalias() += (weight * p) * fibers[t] * fibers[t].adjoint();
    }
    return ChannelOutput(f.domain(), layout.aux_reg, std::move(blocks));
}

DensityMatrix lambda_channel_dense(const DensityMatrix &rho_b, const HidingFunction &f) {
    require_aux_register(f, rho_b.reg());
    check_quotient_weight(f);
    const auto layout = AlgorithmLayout::for_function(f);
    const auto total = layout.reg.size();
    if (total > kMaxDensityDimension) fail_cap("dense channel needs a register of at most 4096 states");
    const auto dim = static_cast<Eigen::Index>(total);
    const auto &y = f.codomain();
    const auto y_size = static_cast<std::uint64_t>(y.order());

    // |0><0|_A (x) rho_B occupies the leading |Y| x |Y| block.
    ComplexMatrix input = ComplexMatrix::Zero(dim, dim);
    const auto n = rho_b.matrix().rows();
    input.topLeftCorner(n, n) = rho_b.matrix();

    ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
    auto conjugate_columns = [&](ComplexMatrix &m, const GroupElement &z) {
        for (Eigen::Index c = 0; c < dim; ++c) {
            std::span<Complex> col(m.col(c).data(), total);
            run_ifqa(layout, col, f, z, nullptr);
        }
    };
    for (std::uint64_t zi = 0; zi < y_size; ++zi) {
        const auto z = y.element_at(zi);
        ComplexMatrix left = input;
        conjugate_columns(left, z);  // Lambda_z rho
        ComplexMatrix both = left.adjoint();
        conjugate_columns(both, z);  // Lambda_z (Lambda_z rho)^dagger
        out += both / static_cast<double>(y_size);
    }
    return DensityMatrix(layout.reg, std::move(out));
}

OutcomeDistribution ifqa_expected_distribution(const HidingFunction &f, const AuxSpec &aux) {
    if (!aux.is_mixed()) return ifqa_expected_distribution(f, aux.pure());
    return lambda_channel(aux.density(), f).a_distribution();
}

}  // namespace ahsp
