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


#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numbers>

#include "ahsp/algorithms.hpp"
#include "ahsp/error.hpp"
#include "support.hpp"

namespace ahsp {
namespace {

using testing::max_abs_diff;
using testing::moduli_tuples;

const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

HidingFunction make_f(std::vector<Int> moduli, std::vector<Int> gens, std::optional<std::uint64_t> relabel = {}) {
    FiniteAbelianGroup g(std::move(moduli));
    return HidingFunction::canonical(ProductSubgroup(g, std::move(gens)), relabel);
}

std::map<std::vector<Int>, double> rounded(const OutcomeDistribution &d) {
    return d.to_map(1e-12);
}

TEST(Standard, Examples) {
    const auto f = make_f({4}, {2});
    const auto d = standard_exact_distribution(f);
    EXPECT_NEAR(d[f.domain().element({0})], 0.5, 1e-12);
    EXPECT_NEAR(d[f.domain().element({2})], 0.5, 1e-12);
    EXPECT_EQ(rounded(d).size(), 2u);

    const auto whole = make_f({2, 3}, {1, 1});
    const auto s = standard_run_state(whole);
    EXPECT_NEAR(std::abs(s.amplitudes()[0]), 1.0, 1e-12);

    const auto f2 = make_f({2, 4}, {1, 2});
    const auto d2 = rounded(standard_exact_distribution(f2));
    ASSERT_EQ(d2.size(), 2u);
    EXPECT_TRUE(d2.count({0, 0}) && d2.count({0, 2}));
}

TEST(Standard, StateMatchesBothClosedForms) {
    for (const auto &mods : moduli_tuples(128)) {
        FiniteAbelianGroup g(mods);
        for (const auto &h : all_product_subgroups(g)) {
            const auto f = HidingFunction::canonical(h, g.order() % 3 == 0 ? std::optional<std::uint64_t>(7)
                                                                            : std::nullopt);
            const auto s = standard_run_state(f);
            const auto def = testing::psi3_from_definition(f);
            ASSERT_LT(max_abs_diff(s.amplitudes(), def), 1e-9) << h.to_string();
            ASSERT_LT(max_abs_diff(s.amplitudes(), testing::psi3_coset_form(f)), 1e-9) << h.to_string();
        }
    }
}

TEST(Standard, SamplingExamples) {
    RandomStream rng(42);
    const auto f = make_f({4}, {2});
    int zeros = 0;
    const int shots = 10000;
    for (int i = 0; i < shots; ++i) {
        const auto rec = standard_sample(f, rng, i);
        ASSERT_TRUE(is_orthogonal(rec.outcome, f.hidden()));
        ASSERT_NEAR(rec.probability_of_outcome, 0.5, 1e-12);
        ASSERT_EQ(rec.counters.oracle_calls, 1u);
        zeros += rec.outcome[0] == 0;
    }
    EXPECT_NEAR(static_cast<double>(zeros) / shots, 0.5, 0.02);

    const auto trivial = make_f({3, 2}, {3, 2});
    std::map<std::vector<Int>, int> seen;
    for (int i = 0; i < 3000; ++i) ++seen[standard_sample(trivial, rng).outcome.coords()];
    EXPECT_EQ(seen.size(), 6u);
    for (const auto &[k, c] : seen) EXPECT_NEAR(c / 3000.0, 1.0 / 6, 0.04);

    const auto whole = make_f({6}, {1});
    for (int i = 0; i < 20; ++i) EXPECT_EQ(standard_sample(whole, rng).outcome[0], 0);
}

TEST(Standard, PostMeasurementAux) {
    const auto f = make_f({4}, {2});
    const auto &g = f.domain();
    const auto a0 = standard_post_measurement_aux(f, g.element({0}));
    EXPECT_NEAR(a0.fidelity_with_zero, kInvSqrt2, 1e-12);
    EXPECT_LT(std::abs(a0.state.amplitudes()[0] - kInvSqrt2), 1e-12);
    EXPECT_LT(std::abs(a0.state.amplitudes()[1] - kInvSqrt2), 1e-12);
    const auto a2 = standard_post_measurement_aux(f, g.element({2}));
    EXPECT_LT(std::abs(a2.state.amplitudes()[1] + kInvSqrt2), 1e-12);
    EXPECT_THROW(standard_post_measurement_aux(f, g.element({1})), Error);
    const auto whole = make_f({4}, {1});
    EXPECT_NEAR(standard_post_measurement_aux(whole, whole.domain().zero()).fidelity_with_zero, 1.0, 1e-12);
}

TEST(Standard, PostMeasurementAuxMatchesConditionalState) {
    for (const auto &mods : moduli_tuples(48)) {
        FiniteAbelianGroup g(mods);
        for (const auto &h : all_product_subgroups(g)) {
            const auto f = HidingFunction::canonical(h, 3);
            const auto layout = AlgorithmLayout::for_function(f);
            const auto s = standard_run_state(f);
            for (const auto &tau : orthogonal_subgroup(h).elements()) {
                const auto post = standard_post_measurement_aux(f, tau);
                const auto cond = conditional_state(s, layout.a_sites, tau.coords());
                ASSERT_NEAR(fidelity(post.state, cond), 1.0, 1e-9);
            }
        }
    }
}

TEST(Ifqa, RunStateExamples) {
    RandomStream rng(1);
    const auto f = make_f({2, 4}, {1, 2});
    const auto layout = AlgorithmLayout::for_function(f);
    const auto zero = PureState::basis(layout.aux_reg, {0, 0});
    const auto phi = PureState::random(layout.aux_reg, rng);
    for (const auto &z : f.codomain().elements()) {
        const auto s0 = ifqa_run_state(f, zero, z);
        EXPECT_NEAR(fidelity(zero, marginal(s0, layout.b_sites)), 1.0, 1e-9);
        const auto s = ifqa_run_state(f, phi, z);
        EXPECT_LT(trace_distance(phi, marginal(s, layout.b_sites)), 1e-9);
        for (const auto &[k, p] : exact_distribution(s, layout.a_sites))
            EXPECT_TRUE(is_orthogonal(f.domain().element(k), f.hidden()));
    }
    const auto whole = make_f({6}, {1});
    const auto lw = AlgorithmLayout::for_function(whole);
    const auto pw = PureState::random(lw.aux_reg, rng);
    const auto sw = ifqa_run_state(whole, pw, whole.codomain().zero());
    EXPECT_NEAR(std::abs(sw.amplitudes()[0]), 1.0, 1e-12);
    EXPECT_THROW(ifqa_run_state(f, phi, FiniteAbelianGroup({3}).zero()), Error);
}

TEST(Ifqa, RunStateMatchesClosedFormAndIsProduct) {
    RandomStream rng(2);
    for (const auto &mods : moduli_tuples(32)) {
        FiniteAbelianGroup g(mods);
        for (const auto &h : all_product_subgroups(g)) {
            const auto f = HidingFunction::canonical(h, rng.next_u64());
            const auto layout = AlgorithmLayout::for_function(f);
            const auto phi = PureState::random(layout.aux_reg, rng);
            for (const auto &z : f.codomain().elements()) {
                const auto s = ifqa_run_state(f, phi, z);
                ASSERT_LT(max_abs_diff(s.amplitudes(), testing::phi4_from_definition(f, phi, z)), 1e-9);
                ASSERT_GE(schmidt_coefficients(s, layout.a_sites)[0], 1 - 1e-9);
                for (std::size_t i = 0; i < s.amplitudes().size(); ++i) {
                    const auto t = g.element_at(i / phi.amplitudes().size());
                    if (!is_orthogonal(t, h)) ASSERT_LT(std::abs(s.amplitudes()[i]), 1e-12);
                }
            }
        }
    }
}

TEST(Ifqa, PerZDistributionMatchesDoubleSum) {
    const auto f = make_f({4}, {2});
    const auto layout = AlgorithmLayout::for_function(f);
    const auto zero = PureState::basis(layout.aux_reg, {0});
    const auto z1 = f.codomain().element({1});
    const auto d = ifqa_exact_distribution_for_z(f, zero, z1);
    const auto ds = testing::pr_z_double_sum(f, z1);
    EXPECT_LT(max_abs_diff(d.probabilities(), ds), 1e-9);

    RandomStream rng(3);
    for (const auto &mods : moduli_tuples(24)) {
        FiniteAbelianGroup g(mods);
        for (const auto &h : all_product_subgroups(g)) {
            const auto fr = HidingFunction::canonical(h, rng.next_u64());
            const auto lr = AlgorithmLayout::for_function(fr);
            const auto phi = PureState::random(lr.aux_reg, rng);
            for (const auto &z : fr.codomain().elements()) {
                const auto dz = ifqa_exact_distribution_for_z(fr, phi, z);
                ASSERT_LT(max_abs_diff(dz.probabilities(), testing::pr_z_double_sum(fr, z)), 1e-9);
                ASSERT_LT(max_abs_diff(dz.probabilities(), testing::pr_z_from_definition(fr, z)), 1e-9);
            }
        }
    }
}

TEST(Ifqa, ZeroZIsPointMassAtIdentity) {
    // With z = 0 the phases are all 1, the A register returns to F_G F_G |0>
    // and Pr_0 is the point mass at 0. It agrees with the standard algorithm
    // only when H-perp is trivial.
    RandomStream rng(4);
    for (const auto &mods : moduli_tuples(128)) {
        FiniteAbelianGroup g(mods);
        for (const auto &h : all_product_subgroups(g)) {
            const auto f = HidingFunction::canonical(h);
            const auto layout = AlgorithmLayout::for_function(f);
            const auto phi = PureState::random(layout.aux_reg, rng);
            const auto a = ifqa_exact_distribution_for_z(f, phi, f.codomain().zero());
            std::vector<double> point(static_cast<std::size_t>(g.order()), 0.0);
            point[0] = 1.0;
            ASSERT_LT(max_abs_diff(a.probabilities(), point), 1e-9);
            if (g.order() <= 32)
                ASSERT_LT(max_abs_diff(a.probabilities(), testing::pr_z_double_sum(f, f.codomain().zero())), 1e-9);
            const bool same = a.max_abs_diff(standard_exact_distribution(f)) < 1e-9;
            ASSERT_EQ(same, h.order() == g.order());
        }
    }
}

TEST(Ifqa, AveragedDistributionIsUniformOnPerp) {
    const auto f = make_f({4}, {2});
    const auto layout = AlgorithmLayout::for_function(f);
    const auto d = ifqa_expected_distribution(f, PureState::basis(layout.aux_reg, {0}));
    EXPECT_NEAR(d[f.domain().element({0})], 0.5, 1e-12);
    EXPECT_NEAR(d[f.domain().element({2})], 0.5, 1e-12);
    const auto whole = make_f({4}, {1});
    const auto lw = AlgorithmLayout::for_function(whole);
    EXPECT_NEAR(ifqa_expected_distribution(whole, PureState::basis(lw.aux_reg, {0}))[whole.domain().zero()], 1.0,
                1e-12);

    RandomStream rng(5);
    for (const auto &mods : moduli_tuples(96)) {
        FiniteAbelianGroup g(mods);
        for (const auto &h : all_product_subgroups(g)) {
            const auto fr = HidingFunction::canonical(h, rng.next_u64());
            const auto lr = AlgorithmLayout::for_function(fr);
            const auto avg = ifqa_average(fr, PureState::random(lr.aux_reg, rng));
            ASSERT_LT(max_abs_diff(avg.distribution.probabilities(), testing::uniform_on_perp(h)), 1e-9);
            ASSERT_LT(avg.max_restoration_distance, 1e-9);
            ASSERT_GE(avg.min_fidelity, 1 - 1e-9);
        }
    }
}

TEST(Ifqa, RestorationBoundTracksExactTraceDistance) {
    // The bound is a genuine upper bound and is not vacuous on entangled
    // inputs: compare against the exact partial trace.
    RandomStream rng(6);
    const auto f = make_f({2, 4}, {1, 2});
    const auto layout = AlgorithmLayout::for_function(f);
    const auto phi = PureState::random(layout.aux_reg, rng);
    for (int trial = 0; trial < 40; ++trial) {
        const auto s = PureState::random(layout.reg, rng);
        const double exact = trace_distance(phi, marginal(s, layout.b_sites));
        const double bound = restoration_distance_bound(layout, s.amplitudes(), phi);
        ASSERT_GE(bound + 1e-12, exact);
    }
    // A product state with the right B factor has bound ~0, one with a
    // slightly rotated B factor has a small positive bound.
    const auto a = PureState::random(layout.reg.select(layout.a_sites), rng);
    EXPECT_LT(restoration_distance_bound(layout, a.tensor(phi).amplitudes(), phi), 1e-12);
    auto tilted = phi.amplitudes().size();
    std::vector<Complex> v(phi.amplitudes().begin(), phi.amplitudes().end());
    v[0] += 1e-3;
    const auto near = PureState::normalized(layout.aux_reg, v);
    const double b = restoration_distance_bound(layout, a.tensor(near).amplitudes(), phi);
    EXPECT_GT(b, 0);
    EXPECT_GE(b + 1e-12, trace_distance(phi, near));
    EXPECT_LT(b, 1e-2);
    (void)tilted;
}

TEST(Ifqa, SamplingExamples) {
    RandomStream rng(7);
    const auto f = make_f({4}, {2});
    const auto layout = AlgorithmLayout::for_function(f);
    const auto aux = AuxSpec::random_pure(layout.aux_reg, rng);
    int zeros = 0;
    const int shots = 10000;
    for (int i = 0; i < shots; ++i) {
        const auto rec = ifqa_sample(f, aux, rng, i);
        ASSERT_TRUE(is_orthogonal(rec.outcome, f.hidden()));
        ASSERT_GE(rec.aux_restoration_fidelity, 1 - 1e-9);
        ASSERT_TRUE(rec.z_used.has_value());
        ASSERT_EQ(rec.counters.oracle_calls, 2u);
        ASSERT_EQ(rec.counters.s_z_calls, 2u);
        zeros += rec.outcome[0] == 0;
    }
    EXPECT_NEAR(static_cast<double>(zeros) / shots, 0.5, 0.02);
}

TEST(Ifqa, MixedAuxSamplingRestoresEachMember) {
    RandomStream rng(8);
    const auto f = make_f({2, 4}, {1, 2});
    const auto layout = AlgorithmLayout::for_function(f);
    const auto aux = AuxSpec::random_mixed(layout.aux_reg, rng, 3);
    EXPECT_EQ(aux.ensemble().size(), 3u);
    for (int i = 0; i < 2000; ++i) {
        const auto rec = ifqa_sample(f, aux, rng, i);
        ASSERT_TRUE(is_orthogonal(rec.outcome, f.hidden()));
        ASSERT_GE(rec.aux_restoration_fidelity, 1 - 1e-9);
    }
}

TEST(AuxSpecs, ConstructionAndValidation) {
    MixedRadixRegister r({2, 3});
    RandomStream rng(9);
    const auto z = AuxSpec::zero(r);
    EXPECT_EQ(z.kind(), AuxKind::Zero);
    EXPECT_EQ(z.pure().amplitudes()[0], Complex(1.0));
    const auto m = AuxSpec::random_mixed(r, rng, 4);
    EXPECT_TRUE(m.is_mixed());
    EXPECT_THROW(m.pure(), Error);
    double w = 0;
    for (const auto &[p, s] : m.ensemble()) w += p;
    EXPECT_NEAR(w, 1.0, 1e-12);
    EXPECT_NEAR(m.density().trace(), 1.0, 1e-12);
    const auto a = PureState::basis(r, {0, 0});
    const auto b = PureState::basis(MixedRadixRegister({6}), {0});
    EXPECT_THROW(AuxSpec::given_mixed({{0.5, a}, {0.5, b}}), Error);
    EXPECT_THROW(AuxSpec::given_mixed({{0.4, a}, {0.4, a}}), Error);
    EXPECT_THROW(AuxSpec::given_mixed({{-0.5, a}, {1.5, a}}), Error);
    EXPECT_THROW(AuxSpec::given_mixed({}), Error);
    EXPECT_EQ(aux_kind_from_string(to_string(AuxKind::RandomMixed)), AuxKind::RandomMixed);
    EXPECT_THROW(aux_kind_from_string("bogus"), Error);
}

TEST(Channel, MaximallyMixedExample) {
    const auto f = make_f({2, 4}, {1, 2});
    const auto layout = AlgorithmLayout::for_function(f);
    const auto rho = DensityMatrix::maximally_mixed(layout.aux_reg);
    const auto out = lambda_channel(rho, f);
    EXPECT_NEAR(out.trace(), 1.0, 1e-9);
    const auto d = rounded(out.a_distribution());
    ASSERT_EQ(d.size(), 2u);
    EXPECT_NEAR(d.at({0, 0}), 0.5, 1e-9);
    EXPECT_NEAR(d.at({0, 2}), 0.5, 1e-9);
    EXPECT_LT(trace_distance(rho, out.b_marginal()), 1e-9);
    EXPECT_THROW(out.conditional_b(f.domain().element({0, 1})), Error);
}

TEST(Channel, SpectralMatchesDenseAndRestoresRho) {
    RandomStream rng(10);
    for (const auto &mods : moduli_tuples(16)) {
        FiniteAbelianGroup g(mods);
        for (const auto &h : all_product_subgroups(g)) {
            const auto f = HidingFunction::canonical(h, rng.next_u64());
            const auto layout = AlgorithmLayout::for_function(f);
            const auto rho = testing::random_density(layout.aux_reg, rng);
            const auto fast = lambda_channel(rho, f);
            const auto dense = lambda_channel_dense(rho, f);
            ASSERT_NEAR(fast.trace(), 1.0, 1e-9);
            ASSERT_NEAR(dense.trace(), 1.0, 1e-9);
            // Measuring A: the dense diagonal blocks must agree with the
            // spectral blocks, which we read through the two marginals.
            const auto ad = marginal(dense, layout.a_sites);
            const auto dist = fast.a_distribution();
            for (std::size_t t = 0; t < dist.probabilities().size(); ++t)
                ASSERT_NEAR(ad.matrix()(t, t).real(), dist.probabilities()[t], 1e-9);
            ASSERT_LT(trace_distance(marginal(dense, layout.b_sites), fast.b_marginal()), 1e-9);
            ASSERT_LT(trace_distance(rho, fast.b_marginal()), 1e-9);
            ASSERT_LT(max_abs_diff(dist.probabilities(), testing::uniform_on_perp(h)), 1e-9);
            for (const auto &tau : orthogonal_subgroup(h).elements())
                ASSERT_LT(trace_distance(rho, fast.conditional_b(tau)), 1e-9);
        }
    }
}

TEST(Channel, PureInputMatchesPureAverage) {
    RandomStream rng(11);
    const auto f = make_f({6, 4}, {2, 2}, 5);
    const auto layout = AlgorithmLayout::for_function(f);
    const auto phi = PureState::random(layout.aux_reg, rng);
    const auto out = lambda_channel(DensityMatrix::from_pure(phi), f);
    EXPECT_LT(out.a_distribution().max_abs_diff(ifqa_expected_distribution(f, phi)), 1e-9);
    const auto spec = AuxSpec::given_pure(phi);
    EXPECT_LT(ifqa_expected_distribution(f, spec).max_abs_diff(ifqa_expected_distribution(f, phi)), 1e-12);
}

TEST(Channel, TracePreservedForRandomInputs) {
    RandomStream rng(12);
    const auto f = make_f({2, 4}, {1, 2});
    const auto layout = AlgorithmLayout::for_function(f);
    for (int i = 0; i < 50; ++i) {
        const auto out = lambda_channel(testing::random_density(layout.aux_reg, rng), f);
        ASSERT_NEAR(out.trace(), 1.0, 1e-9);
    }
}

TEST(Counters, OracleCallsPerRun) {
    const auto f = make_f({8}, {2});
    const auto layout = AlgorithmLayout::for_function(f);
    OperationCounters a, b;
    standard_run_state(f, &a);
    ifqa_run_state(f, PureState::basis(layout.aux_reg, {0}), f.codomain().zero(), &b);
    EXPECT_EQ(a.oracle_calls, 1u);
    EXPECT_EQ(a.qft_calls, 2u);
    EXPECT_EQ(b.oracle_calls, 2u);
    EXPECT_EQ(b.qft_calls, 2u);
    EXPECT_EQ(b.s_z_calls, 2u);
}

}  // namespace
}  // namespace ahsp
