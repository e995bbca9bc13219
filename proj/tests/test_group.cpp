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

#include <numeric>
#include <set>

#include "ahsp/error.hpp"
#include "ahsp/group.hpp"
#include "support.hpp"

namespace ahsp {
namespace {

using testing::invariant_factor_groups;
using testing::moduli_tuples;

TEST(Group, BasicQuantities) {
    FiniteAbelianGroup a({2, 4});
    EXPECT_EQ(a.exponent(), 4);
    EXPECT_EQ(a.alphas(), (std::vector<Int>{2, 1}));
    EXPECT_EQ(a.order(), 8);

    FiniteAbelianGroup b({5});
    EXPECT_EQ(b.exponent(), 5);
    EXPECT_EQ(b.alphas(), (std::vector<Int>{1}));
    EXPECT_EQ(b.order(), 5);

    FiniteAbelianGroup c({6, 4});
    EXPECT_EQ(c.exponent(), 12);
    EXPECT_EQ(c.alphas(), (std::vector<Int>{2, 3}));
    EXPECT_EQ(c.order(), 24);
}

TEST(Group, RejectsBadModuli) {
    EXPECT_THROW(FiniteAbelianGroup(std::vector<Int>{}), Error);
    EXPECT_THROW(FiniteAbelianGroup({0}), Error);
    EXPECT_THROW(FiniteAbelianGroup({3, -2}), Error);
    try {
        FiniteAbelianGroup({Int{1} << 40, Int{1} << 40});
        FAIL() << "overflowing order accepted";
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::ResourceCap);
    }
}

TEST(Group, InvariantsHoldAcrossSweep) {
    for (const auto &mods : moduli_tuples(300)) {
        FiniteAbelianGroup g(mods);
        Int order = 1, m = 1;
        for (auto n : mods) {
            order *= n;
            m = std::lcm(m, n);
        }
        ASSERT_EQ(g.order(), order);
        ASSERT_EQ(g.exponent(), m);
        for (std::size_t j = 0; j < mods.size(); ++j) ASSERT_EQ(g.alphas()[j] * mods[j], m);
    }
}

TEST(Group, ElementArithmetic) {
    FiniteAbelianGroup g({2, 4});
    EXPECT_EQ((g.element({1, 3}) + g.element({1, 2})).coords(), (std::vector<Int>{0, 1}));
    EXPECT_EQ((-g.zero()).coords(), (std::vector<Int>{0, 0}));
    FiniteAbelianGroup z4({4});
    EXPECT_EQ((-z4.element({1})).coords(), (std::vector<Int>{3}));
    EXPECT_EQ((z4.element({1}) - z4.element({3})).coords(), (std::vector<Int>{2}));
    EXPECT_EQ(g.element({-1, 9}).coords(), (std::vector<Int>{1, 1}));
    EXPECT_THROW(g.element({1, 1}) + z4.element({1}), Error);
    EXPECT_THROW(g.element({1}), Error);
}

TEST(Group, FlatIndexRoundTrip) {
    FiniteAbelianGroup g({2, 3, 4});
    for (std::uint64_t i = 0; i < 24; ++i) EXPECT_EQ(g.index_of(g.element_at(i)), i);
    EXPECT_EQ(g.index_of(g.element({1, 2, 3})), 23u);
    EXPECT_THROW(g.element_at(24), Error);
}

TEST(Group, InnerProductExamples) {
    FiniteAbelianGroup g({2, 4});
    EXPECT_EQ(inner_product(g.element({1, 1}), g.element({1, 2})), 0);
    EXPECT_EQ(inner_product(g.element({1, 3}), g.element({0, 1})), 3);
    for (const auto &x : g.elements()) EXPECT_EQ(inner_product(x, g.zero()), 0);
    FiniteAbelianGroup other({8});
    EXPECT_THROW(inner_product(g.zero(), other.zero()), Error);
}

TEST(Group, InnerProductIsSymmetricBilinearExhaustiveSmall) {
    for (const auto &mods : moduli_tuples(32)) {
        FiniteAbelianGroup g(mods);
        const auto m = g.exponent();
        const auto el = g.elements();
        for (const auto &x : el)
            for (const auto &y : el) {
                ASSERT_EQ(inner_product(x, y), inner_product(y, x));
                for (const auto &z : el) {
                    ASSERT_EQ(inner_product(x + y, z), (inner_product(x, z) + inner_product(y, z)) % m);
                }
            }
    }
}

TEST(Group, InnerProductBilinearAllTriplesUpTo256) {
    for (const auto &mods : invariant_factor_groups(256)) {
        FiniteAbelianGroup g(mods);
        const auto n = static_cast<std::size_t>(g.order());
        const auto el = g.elements();
        std::vector<Int> ip(n * n);
        std::vector<std::uint64_t> sum(n * n);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) {
                ip[a * n + b] = inner_product(el[a], el[b]);
                sum[a * n + b] = g.index_of(el[a] + el[b]);
            }
        const auto m = g.exponent();
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                for (std::size_t c = 0; c < n; ++c)
                    ASSERT_EQ(ip[sum[a * n + b] * n + c], (ip[a * n + c] + ip[b * n + c]) % m);
    }
}

TEST(Group, InnerProductBilinearUpTo512) {
    // All pairs against the unit vectors; with symmetry this pins down
    // additivity in both arguments.
    for (const auto &mods : invariant_factor_groups(512)) {
        FiniteAbelianGroup g(mods);
        const auto m = g.exponent();
        const auto el = g.elements();
        std::vector<GroupElement> units;
        for (std::size_t j = 0; j < g.rank(); ++j) {
            std::vector<Int> e(g.rank(), 0);
            e[j] = 1;
            units.push_back(g.element(e));
        }
        for (const auto &x : el)
            for (const auto &y : el)
                for (const auto &u : units) {
                    ASSERT_EQ(inner_product(x + y, u), (inner_product(x, u) + inner_product(y, u)) % m);
                }
    }
}

TEST(Group, InnerProductBilinearRandomLarge) {
    RandomStream rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Int> mods;
        const auto k = 1 + rng.uniform_below(4);
        for (std::uint64_t j = 0; j < k; ++j) mods.push_back(static_cast<Int>(2 + rng.uniform_below(5000)));
        FiniteAbelianGroup g(mods);
        auto draw = [&] {
            std::vector<Int> c;
            for (auto n : mods) c.push_back(static_cast<Int>(rng.uniform_below(static_cast<std::uint64_t>(n))));
            return g.element(c);
        };
        const auto x = draw(), y = draw(), z = draw();
        ASSERT_EQ(inner_product(x + y, z), (inner_product(x, z) + inner_product(y, z)) % g.exponent());
    }
}

TEST(Group, NormalizeGenerator) {
    EXPECT_EQ(normalize_generator(6, 4), 2);
    EXPECT_EQ(normalize_generator(0, 4), 4);
    EXPECT_EQ(normalize_generator(3, 4), 1);
    EXPECT_EQ(normalize_generator(4, 4), 4);
    EXPECT_EQ(normalize_generator(0, 1), 1);
    // <raw> and <normalized> coincide in Z_N.
    for (Int n = 1; n <= 60; ++n) {
        for (Int raw = 0; raw < 3 * n; ++raw) {
            const Int h = normalize_generator(raw, n);
            ASSERT_EQ(n % h, 0);
            std::set<Int> a, b;
            for (Int i = 0; i < n; ++i) {
                a.insert(mod_floor(i * raw, n));
                b.insert(mod_floor(i * h, n));
            }
            ASSERT_EQ(a, b) << raw << " in Z_" << n;
        }
    }
}

TEST(Group, SubgroupBasics) {
    FiniteAbelianGroup g({2, 4});
    ProductSubgroup h(g, {1, 2});
    EXPECT_EQ(h.order(), 4);
    EXPECT_EQ(h.index(), 2);
    EXPECT_EQ(h.quotient_group().moduli(), (std::vector<Int>{1, 2}));
    EXPECT_TRUE(h.contains(g.element({1, 2})));
    EXPECT_FALSE(h.contains(g.element({0, 1})));
    EXPECT_EQ(ProductSubgroup(g, {3, 6}).generators(), (std::vector<Int>{1, 2}));
    EXPECT_EQ(ProductSubgroup::trivial(g).generators(), (std::vector<Int>{2, 4}));
    EXPECT_EQ(ProductSubgroup::whole(g).order(), 8);
    EXPECT_THROW(ProductSubgroup(g, {1}), Error);
}

TEST(Group, OrthogonalSubgroupExamples) {
    FiniteAbelianGroup z4({4});
    const auto perp = orthogonal_subgroup(ProductSubgroup(z4, {2}));
    EXPECT_EQ(perp.generators(), (std::vector<Int>{2}));
    EXPECT_EQ(perp.elements(), (std::vector<GroupElement>{z4.element({0}), z4.element({2})}));

    FiniteAbelianGroup g({2, 4});
    EXPECT_EQ(orthogonal_subgroup(ProductSubgroup::whole(g)), ProductSubgroup::trivial(g));
    const auto p2 = orthogonal_subgroup(ProductSubgroup(g, {1, 2}));
    EXPECT_EQ(p2.elements(), (std::vector<GroupElement>{g.element({0, 0}), g.element({0, 2})}));
    EXPECT_EQ(p2.order(), 2);
}

TEST(Group, IsOrthogonalExamples) {
    FiniteAbelianGroup g({2, 4});
    ProductSubgroup h(g, {1, 2});
    EXPECT_TRUE(is_orthogonal(g.element({0, 2}), h));
    EXPECT_TRUE(is_orthogonal(g.zero(), h));
    FiniteAbelianGroup z4({4});
    EXPECT_FALSE(is_orthogonal(z4.element({1}), ProductSubgroup(z4, {2})));
}

TEST(Group, BruteForceOrthogonalExamples) {
    FiniteAbelianGroup z4({4});
    EXPECT_EQ(brute_force_orthogonal(ProductSubgroup(z4, {2})),
              (std::vector<GroupElement>{z4.element({0}), z4.element({2})}));
    FiniteAbelianGroup g({2, 4});
    EXPECT_EQ(brute_force_orthogonal(ProductSubgroup::trivial(g)), g.elements());
    FiniteAbelianGroup v({2, 2});
    EXPECT_EQ(brute_force_orthogonal(ProductSubgroup(v, {2, 1})),
              (std::vector<GroupElement>{v.element({0, 0}), v.element({1, 0})}));
    EXPECT_THROW(brute_force_orthogonal(ProductSubgroup::whole(g), 4), Error);
}

TEST(Group, OrthogonalFormulaMatchesScanUpTo256) {
    for (const auto &mods : moduli_tuples(256)) {
        FiniteAbelianGroup g(mods);
        for (const auto &h : all_product_subgroups(g)) {
            const auto perp = orthogonal_subgroup(h);
            ASSERT_EQ(brute_force_orthogonal(h), perp.elements()) << h.to_string();
            ASSERT_EQ(h.order() * perp.order(), g.order());
            ASSERT_EQ(orthogonal_subgroup(perp), h);
            for (const auto &x : g.elements()) ASSERT_EQ(is_orthogonal(x, h), is_orthogonal_exhaustive(x, h));
        }
    }
}

TEST(Group, CosetRepresentativeExamples) {
    FiniteAbelianGroup z4({4});
    EXPECT_EQ(coset_representatives(ProductSubgroup(z4, {2})),
              (std::vector<GroupElement>{z4.element({0}), z4.element({1})}));
    FiniteAbelianGroup g({2, 4});
    EXPECT_EQ(coset_representatives(ProductSubgroup::whole(g)), (std::vector<GroupElement>{g.zero()}));
    EXPECT_EQ(coset_representatives(ProductSubgroup(g, {1, 2})),
              (std::vector<GroupElement>{g.element({0, 0}), g.element({0, 1})}));
}

TEST(Group, CosetRepresentativesAreCanonicalAndDistinct) {
    for (const auto &mods : moduli_tuples(64)) {
        FiniteAbelianGroup g(mods);
        for (const auto &h : all_product_subgroups(g)) {
            const auto reps = coset_representatives(h);
            ASSERT_EQ(static_cast<Int>(reps.size()) * h.order(), g.order());
            for (std::size_t i = 0; i < reps.size(); ++i)
                for (std::size_t j = i + 1; j < reps.size(); ++j) ASSERT_FALSE(h.contains(reps[i] - reps[j]));
            // Each representative is the smallest member of its coset.
            for (const auto &r : reps) {
                for (const auto &e : h.elements()) ASSERT_FALSE(r + e < r);
            }
            for (const auto &x : g.elements()) ASSERT_TRUE(h.contains(x - coset_representative(x, h)));
        }
    }
}

TEST(Group, SubgroupGeneratedByExamples) {
    FiniteAbelianGroup z4({4});
    const std::vector<GroupElement> s1{z4.element({2})};
    EXPECT_EQ(subgroup_generated_by(z4, s1), ProductSubgroup(z4, {2}));
    const std::vector<GroupElement> s2{z4.zero()};
    EXPECT_EQ(subgroup_generated_by(z4, s2), ProductSubgroup::trivial(z4));
    EXPECT_EQ(subgroup_generated_by(z4, {}), ProductSubgroup::trivial(z4));
    FiniteAbelianGroup g({2, 4});
    const std::vector<GroupElement> s3{g.element({0, 2}), g.element({1, 0})};
    const auto h = subgroup_generated_by(g, s3);
    EXPECT_EQ(h.generators(), (std::vector<Int>{1, 2}));
    EXPECT_EQ(h.order(), 4);
}

TEST(Group, SubgroupGeneratedByEnumerationIsIdentity) {
    for (const auto &mods : moduli_tuples(128)) {
        FiniteAbelianGroup g(mods);
        for (const auto &h : all_product_subgroups(g)) {
            const auto el = h.elements();
            ASSERT_EQ(subgroup_generated_by(g, el), h);
        }
    }
}

TEST(Group, Divisors) {
    EXPECT_EQ(divisors(12), (std::vector<Int>{1, 2, 3, 4, 6, 12}));
    EXPECT_EQ(divisors(1), (std::vector<Int>{1}));
    FiniteAbelianGroup g({4, 6});
    EXPECT_EQ(all_product_subgroups(g).size(), 3u * 4u);
}

}  // namespace
}  // namespace ahsp
