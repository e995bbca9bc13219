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

#include "ahsp/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ahsp/error.hpp"

namespace ahsp {

RecoveryState RecoveryState::start(const FiniteAbelianGroup &group) {
    return RecoveryState{ProductSubgroup::trivial(group), 0, 0};
}

RecoveryState ingest(const RecoveryState &state, const GroupElement &tau) {
    const auto &g = state.span.parent();
    if (!(tau.group() == g)) fail_invalid("sample " + tau.to_string() + " is not in " + g.to_string());
    std::vector<Int> gens(g.rank());
    for (std::size_t j = 0; j < gens.size(); ++j) {
        // A trivial component is stored as N_j; gcd(N_j, x) handles it.
        gens[j] = gcd(state.span.generator(j), tau[j]);
    }
    RecoveryState next{ProductSubgroup(g, std::move(gens)), state.samples_consumed + 1, 0};
    next.stable_streak = next.span == state.span ? state.stable_streak + 1 : 0;
    return next;
}

std::uint64_t blind_streak_length(const FiniteAbelianGroup &group) {
    std::uint64_t bits = 0;
    while ((std::uint64_t{1} << bits) < static_cast<std::uint64_t>(group.order())) ++bits;
    return bits + 4;
}

StopRule StopRule::blind(const FiniteAbelianGroup &group) {
    return stable_for(blind_streak_length(group));
}

StopRule StopRule::stable_for(std::uint64_t streak) {
    if (streak == 0) fail_invalid("stop-rule streak must be positive");
    StopRule rule;
    rule.streak_ = streak;
    return rule;
}

StopRule StopRule::verification(const ProductSubgroup &planted) {
    StopRule rule;
    rule.target_ = orthogonal_subgroup(planted);
    return rule;
}

bool StopRule::fires(const RecoveryState &state) const {
    if (target_) return state.span == *target_;
    return state.stable_streak >= streak_;
}

RecoveryResult recover_hidden_subgroup(const FiniteAbelianGroup &group, const SampleSource &source,
                                       const StopRule &stop, std::uint64_t budget,
                                       const std::optional<ProductSubgroup> &planted) {
    auto state = RecoveryState::start(group);
    bool fired = stop.fires(state);
    while (!fired && state.samples_consumed < budget) {
        state = ingest(state, source());
        fired = stop.fires(state);
    }
    RecoveryResult result{orthogonal_subgroup(state.span), state.samples_consumed, fired, std::nullopt, std::nullopt};
    if (planted) {
        if (!(planted->parent() == group)) fail_invalid("planted subgroup lives in a different group");
        result.matches_planted = result.estimate == *planted;
        // Every sample is orthogonal to H, so H must sit inside the estimate.
        bool sound = true;
        for (std::size_t j = 0; j < group.rank(); ++j) {
            sound = sound && planted->generator(j) % result.estimate.generator(j) == 0;
        }
        result.sound = sound;
    }
    return result;
}

ProductSubgroup recover_by_brute_force(const ProductSubgroup &span) {
    const auto perp = brute_force_orthogonal(span);
    return subgroup_generated_by(span.parent(), perp);
}

QueryStatistics query_statistics(std::span<const RecoveryResult> trials) {
    if (trials.empty()) fail_invalid("query statistics need at least one trial");
    std::vector<std::uint64_t> q;
    q.reserve(trials.size());
    std::size_t known = 0;
    std::size_t successes = 0;
    for (const auto &t : trials) {
        q.push_back(t.queries_used);
        if (t.matches_planted) {
            ++known;
            if (*t.matches_planted) ++successes;
        }
    }
    std::sort(q.begin(), q.end());
    auto rank = [&](double fraction) {
        auto idx = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(q.size())));
        return q[std::clamp<std::size_t>(idx, 1, q.size()) - 1];
    };
    QueryStatistics s;
    s.trials = q.size();
    s.mean = static_cast<double>(std::accumulate(q.begin(), q.end(), std::uint64_t{0})) / static_cast<double>(q.size());
    s.min = q.front();
    s.max = q.back();
    s.p50 = rank(0.5);
    s.p90 = rank(0.9);
    s.p99 = rank(0.99);
    if (known) s.success_rate = static_cast<double>(successes) / static_cast<double>(known);
    return s;
}

ScalingReport scaling_report(std::span<const std::pair<Int, QueryStatistics>> per_order) {
    ScalingReport report;
    double num = 0;
    double den = 0;
    for (const auto &[order, stats] : per_order) {
        const double l = std::log2(static_cast<double>(order));
        report.rows.push_back(ScalingRow{order, l, stats.mean, l > 0 ? stats.mean / l : 0.0});
        num += l * stats.mean;
        den += l * l;
    }
    report.fitted_constant = den > 0 ? num / den : 0.0;
    return report;
}

SampleSource synthetic_source(const ProductSubgroup &hidden, RandomStream &rng) {
    const auto perp = orthogonal_subgroup(hidden);
    return [perp, &rng]() {
        const auto &g = perp.parent();
        std::vector<Int> coords(g.rank());
        for (std::size_t j = 0; j < coords.size(); ++j) {
            const auto count = static_cast<std::uint64_t>(g.modulus(j) / perp.generator(j));
            coords[j] = static_cast<Int>(rng.uniform_below(count)) * perp.generator(j);
        }
        return g.element(coords);
    };
}

StandardSampler::StandardSampler(const HidingFunction &f) : group_(f.domain()) {
    OperationCounters counters;
    const auto layout = AlgorithmLayout::for_function(f);
    const auto psi = standard_run_state(f, &counters);
    probs_ = marginal_probabilities(psi, layout.a_sites);
    calls_per_run_ = counters.oracle_calls;
}

GroupElement StandardSampler::next(RandomStream &rng) {
    oracle_calls_ += calls_per_run_;
    return group_.element_at(sample_index(probs_, rng));
}

IfqaSampler::IfqaSampler(HidingFunction f, AuxSpec aux) : f_(std::move(f)), aux_(std::move(aux)) {}

const std::vector<double> &IfqaSampler::distribution(std::uint64_t z_index, std::size_t member) {
    const auto key = std::make_pair(z_index, member);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    const auto layout = AlgorithmLayout::for_function(f_);
    const auto &phi = aux_.ensemble()[member].second;
    OperationCounters counters;
    const auto state = ifqa_run_state(f_, phi, f_.codomain().element_at(z_index), &counters);
    calls_per_run_ = counters.oracle_calls;
    auto table = outcome_table(layout, state.amplitudes(), phi);
    min_fidelity_ = std::min(min_fidelity_, table.marginal_fidelity);
    return cache_.emplace(key, std::move(table.probabilities)).first->second;
}

GroupElement IfqaSampler::next(RandomStream &rng) {
    const auto z = rng.uniform_below(static_cast<std::uint64_t>(f_.codomain().order()));
    const auto member = aux_.sample_member(rng);
    const auto &probs = distribution(z, member);
    oracle_calls_ += calls_per_run_;
    return f_.domain().element_at(sample_index(probs, rng));
}

}  // namespace ahsp
