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


#include "ahsp/experiment.hpp"

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "ahsp/error.hpp"
#include "ahsp/recovery.hpp"

namespace ahsp {

namespace {

// Stream ids that keep the random draws of different parts of a run apart.
constexpr std::uint64_t kSubgroupStream = 0x5ab6;
constexpr std::uint64_t kAuxStream = 0xa0c5;
constexpr std::uint64_t kShotStream = 0x5407;
constexpr std::uint64_t kRecoverStream = 0x4ec0;

// Exact probabilities at or below this are left out of the outcome lists.
constexpr double kListThreshold = 1e-15;

template <typename E, std::size_t N>
E parse_enum(const std::string &s, const E (&values)[N], const char *what) {
    for (auto v : values) {
        if (s == to_string(v)) return v;
    }
    fail_invalid(std::string("unknown ") + what + " '" + s + "'");
}

Json coords_json(const GroupElement &x) {
    return Json(x.coords());
}

Json complex_list(std::span<const Complex> v) {
    Json out = Json::array();
    for (auto c : v) out.push_back(Json::array({c.real(), c.imag()}));
    return out;
}

std::vector<Complex> parse_complex_list(const Json &j) {
    if (!j.is_array()) fail_invalid("amplitudes must be an array of [re, im] pairs");
    std::vector<Complex> out;
    for (const auto &c : j) {
        if (c.is_number()) {
            out.emplace_back(c.get<double>(), 0.0);
        } else if (c.is_array() && c.size() == 2 && c[0].is_number() && c[1].is_number()) {
            out.emplace_back(c[0].get<double>(), c[1].get<double>());
        } else {
            fail_invalid("amplitude entries must be numbers or [re, im] pairs");
        }
    }
    return out;
}

Int ceil_log2(Int n) {
    Int bits = 0;
    while ((Int{1} << bits) < n) ++bits;
    return bits;
}

AuxSpec build_aux(const ExperimentConfig &config, const MixedRadixRegister &reg) {
    RandomStream rng(config.seed, kAuxStream);
    auto ensemble = [&] {
        std::vector<std::pair<double, PureState>> e;
        for (const auto &[w, amps] : config.aux_states) e.emplace_back(w, PureState(reg, amps));
        return e;
    };
    switch (config.aux) {
        case AuxKind::Zero:
            return AuxSpec::zero(reg);
        case AuxKind::GivenPure:
            return AuxSpec::given_pure(PureState(reg, config.aux_states.front().second));
        case AuxKind::RandomPure:
            return AuxSpec::random_pure(reg, rng);
        case AuxKind::GivenMixed:
            return AuxSpec::given_mixed(ensemble());
        case AuxKind::RandomMixed:
            return AuxSpec::random_mixed(reg, rng, config.mixed_members);
    }
    fail_invariant("unhandled aux kind");
}

// Draws outcomes shot by shot. Shot i only ever sees substream i of the
// base stream, so the thread layout does not change any draw. Final states
// are cached per (z, member); a duplicate computation under contention
// yields the same table.
class ShotEngine {
   public:
    struct Shot {
        std::uint64_t outcome = 0;
        std::uint64_t z = 0;
        double fidelity = 0;
    };

    ShotEngine(const HidingFunction &f, std::optional<AuxSpec> aux) : f_(f), aux_(std::move(aux)) {
        if (!aux_) standard_ = standard_outcome_table(f_);
    }

    Shot draw(RandomStream &rng) {
        if (!aux_) {
            const auto pick = sample_index(standard_.probabilities, rng);
            return Shot{pick, 0, standard_.fidelities[pick]};
        }
        const auto z = rng.uniform_below(static_cast<std::uint64_t>(f_.codomain().order()));
        const auto member = aux_->sample_member(rng);
        const auto &t = table(z, member);
        const auto pick = sample_index(t.probabilities, rng);
        return Shot{pick, z, t.fidelities[pick]};
    }

    std::uint64_t oracle_calls_per_shot() const noexcept {
        return aux_ ? 2 : 1;
    }

   private:
    const OutcomeTable &table(std::uint64_t z, std::size_t member) {
        const auto key = std::make_pair(z, member);
        {
            std::lock_guard lock(mu_);
            if (auto it = cache_.find(key); it != cache_.end()) return it->second;
        }
        auto t = ifqa_outcome_table(f_, aux_->ensemble()[member].second, f_.codomain().element_at(z));
        std::lock_guard lock(mu_);
        return cache_.try_emplace(key, std::move(t)).first->second;
    }

    const HidingFunction &f_;
    std::optional<AuxSpec> aux_;
    OutcomeTable standard_;
    std::mutex mu_;
    std::map<std::pair<std::uint64_t, std::size_t>, OutcomeTable> cache_;
};

// Runs body(i) for i in [0, n) on up to `threads` workers; index i goes to
// worker i mod threads.
template <typename Body>
void parallel_for(std::uint64_t n, unsigned threads, Body body) {
    threads = std::max(1u, threads);
    if (threads == 1 || n < 2) {
        for (std::uint64_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mu;
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (std::uint64_t i = t; i < n; i += threads) body(i);
            } catch (...) {
                std::lock_guard lock(error_mu);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto &th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

Json distribution_json(const OutcomeDistribution &d) {
    Json list = Json::array();
    double listed = 0;
    const auto probs = d.probabilities();
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] <= kListThreshold) continue;
        listed += probs[i];
        list.push_back(Json{{"outcome", coords_json(d.group().element_at(i))}, {"probability", probs[i]}});
    }
    return Json{{"distribution", list}, {"total", d.total()}, {"unlisted_mass", d.total() - listed}};
}

Json restoration_json(const char *reference, double min, double mean) {
    return Json{{"reference", reference}, {"min_fidelity", min}, {"mean_fidelity", mean}};
}

Json counters_json(const OperationCounters &c) {
    return Json{{"oracle_calls", c.oracle_calls}, {"qft_calls", c.qft_calls}, {"s_z_calls", c.s_z_calls}};
}

Json standard_exact(const HidingFunction &f) {
    const auto t = standard_outcome_table(f);
    double min = 1, mean = 0;
    for (std::size_t i = 0; i < t.probabilities.size(); ++i) {
        mean += t.probabilities[i] * t.fidelities[i];
        if (t.probabilities[i] > kListThreshold) min = std::min(min, t.fidelities[i]);
    }
    Json j = distribution_json(OutcomeDistribution(f.domain(), t.probabilities));
    j["restoration"] = restoration_json("zero", min, mean);
    return j;
}

// Channel route for mixed aux: the A distribution, the B-marginal distance
// to the input, and conditional fidelities when they are affordable.
Json channel_exact(const HidingFunction &f, const DensityMatrix &rho) {
    const auto out = lambda_channel(rho, f);
    const auto dist = out.a_distribution();
    Json j = distribution_json(dist);
    j["channel_trace"] = out.trace();
    j["b_marginal_trace_distance"] = trace_distance(out.b_marginal(), rho);
    const auto perp = orthogonal_subgroup(f.hidden());
    const double y = static_cast<double>(f.codomain().order());
    if (static_cast<double>(perp.order()) * y * y * y <= static_cast<double>(1u << 30)) {
        double min = 1, mean = 0;
        for (const auto &tau : perp.elements()) {
            const double p = dist[tau];
            if (p <= kListThreshold) continue;
            const double fid = fidelity(out.conditional_b(tau), rho);
            min = std::min(min, fid);
            mean += p * fid;
        }
        j["restoration"] = restoration_json("aux", min, mean);
    }
    return j;
}

Json init_free_exact(const HidingFunction &f, const AuxSpec &aux) {
    if (aux.is_mixed()) return channel_exact(f, aux.density());
    const auto avg = ifqa_average(f, aux.pure());
    Json j = distribution_json(avg.distribution);
    j["max_restoration_trace_distance"] = avg.max_restoration_distance;
    j["restoration"] = restoration_json("aux", avg.min_fidelity, avg.mean_fidelity);
    return j;
}

Json shots_section(const PreparedExperiment &prep, ShotEngine &engine, std::uint64_t stream) {
    const auto &cfg = prep.config;
    const auto &g = prep.f.domain();
    const RandomStream base(cfg.seed, stream);
    std::vector<ShotEngine::Shot> shots(cfg.shots);
    parallel_for(cfg.shots, cfg.threads, [&](std::uint64_t i) {
        auto rng = base.substream(i);
        shots[i] = engine.draw(rng);
    });
    std::map<std::uint64_t, std::uint64_t> counts;
    double min = 1, sum = 0;
    for (const auto &s : shots) {
        ++counts[s.outcome];
        min = std::min(min, s.fidelity);
        sum += s.fidelity;
    }
    Json outcomes = Json::array();
    double total = 0;
    for (const auto &[idx, c] : counts) {
        const double freq = static_cast<double>(c) / static_cast<double>(cfg.shots);
        total += freq;
        outcomes.push_back(Json{{"outcome", coords_json(g.element_at(idx))}, {"count", c}, {"frequency", freq}});
    }
    Json j{{"shots", cfg.shots}, {"outcomes", outcomes}, {"total_frequency", total},
           {"oracle_calls_total", cfg.shots * engine.oracle_calls_per_shot()}};
    if (cfg.shots > 0) {
        j["restoration"] = Json{{"min_fidelity", min}, {"mean_fidelity", sum / static_cast<double>(cfg.shots)}};
    }
    return j;
}

Json recovery_section(const PreparedExperiment &prep, ShotEngine &engine, std::uint64_t stream) {
    const auto &cfg = prep.config;
    const auto &g = prep.f.domain();
    const RandomStream base(cfg.seed, stream);
    const auto stop = cfg.stop == StopChoice::Blind ? StopRule::blind(g) : StopRule::verification(prep.hidden);
    const std::uint64_t budget =
        cfg.budget ? cfg.budget : 64 * static_cast<std::uint64_t>(ceil_log2(g.order()) + 1);
    std::vector<std::optional<RecoveryResult>> results(cfg.trials);
    parallel_for(cfg.trials, cfg.threads, [&](std::uint64_t t) {
        auto rng = base.substream(t);
        SampleSource source = [&] { return g.element_at(engine.draw(rng).outcome); };
        results[t] = recover_hidden_subgroup(g, source, stop, budget, prep.hidden);
    });
    std::vector<RecoveryResult> flat;
    Json trials = Json::array();
    for (auto &r : results) {
        flat.push_back(*r);
        trials.push_back(Json{{"recovered_generators", r->estimate.generators()},
                              {"success", r->matches_planted.value_or(false)},
                              {"sound", r->sound.value_or(false)},
                              {"complete", r->complete},
                              {"queries_used", r->queries_used},
                              {"oracle_calls", r->queries_used * engine.oracle_calls_per_shot()}});
    }
    const auto stats = query_statistics(flat);
    Json j{{"stop_rule", to_string(cfg.stop)},
           {"budget", budget},
           {"trials", trials},
           {"success_rate", stats.success_rate.value_or(0.0)},
           {"queries", Json{{"mean", stats.mean},
                            {"min", stats.min},
                            {"p50", stats.p50},
                            {"p90", stats.p90},
                            {"p99", stats.p99},
                            {"max", stats.max}}},
           {"log2_order", std::log2(static_cast<double>(g.order()))}};
    j["result"] = trials.front();
    return j;
}

Json run_one(const PreparedExperiment &prep, bool init_free) {
    const auto &cfg = prep.config;
    const auto &f = prep.f;
    std::optional<AuxSpec> aux;
    if (init_free) aux = build_aux(cfg, AlgorithmLayout::for_function(f).aux_reg);

    OperationCounters per_shot;
    if (init_free) {
        per_shot = OperationCounters{2, 2, 2};
    } else {
        per_shot = OperationCounters{1, 2, 0};
    }
    Json j{{"algorithm", init_free ? "init-free" : "standard"},
           {"aux", init_free ? to_string(cfg.aux) : "zero"},
           {"oracle_calls_per_shot", per_shot.oracle_calls},
           {"counters_per_shot", counters_json(per_shot)}};
    if (cfg.mode != RunMode::Recover) {
        if (!init_free) {
            j["exact"] = standard_exact(f);
        } else if (cfg.mode == RunMode::Channel) {
            j["exact"] = channel_exact(f, aux->density());
        } else {
            j["exact"] = init_free_exact(f, *aux);
        }
    }
    if (cfg.mode == RunMode::Shots || cfg.mode == RunMode::Recover) {
        ShotEngine engine(f, aux);
        const std::uint64_t salt = init_free ? 1 : 0;
        if (cfg.mode == RunMode::Shots) j["empirical"] = shots_section(prep, engine, kShotStream + salt);
        if (cfg.mode == RunMode::Recover) j["recovery"] = recovery_section(prep, engine, kRecoverStream + salt);
    }
    return j;
}

Json instance_json(const PreparedExperiment &prep) {
    const auto &h = prep.hidden;
    const auto perp = orthogonal_subgroup(h);
    return Json{{"group", h.parent().to_string()},
                {"moduli", h.parent().moduli()},
                {"order", h.parent().order()},
                {"hidden_generators", h.generators()},
                {"hidden_order", h.order()},
                {"orthogonal_generators", perp.generators()},
                {"orthogonal_order", perp.order()},
                {"codomain_moduli", prep.f.codomain().moduli()},
                {"relabeled", prep.config.relabel_f}};
}

const Json &run_of(const Json &report, const char *key, const char *which) {
    if (!report.contains("runs") || !report["runs"].contains(key)) {
        fail_invalid(std::string("report has no ") + which + " run");
    }
    return report["runs"][key];
}

std::map<std::vector<Int>, double> exact_map(const Json &run, const char *which) {
    if (!run.contains("exact")) fail_invalid(std::string(which) + " run has no exact distribution");
    std::map<std::vector<Int>, double> m;
    for (const auto &e : run["exact"]["distribution"]) m[e["outcome"].get<std::vector<Int>>()] = e["probability"];
    return m;
}

}  // namespace

const char *to_string(AlgorithmChoice a) {
    switch (a) {
        case AlgorithmChoice::Standard:
            return "standard";
        case AlgorithmChoice::InitFree:
            return "init-free";
        case AlgorithmChoice::Both:
            return "both";
    }
    return "unknown";
}

const char *to_string(RunMode m) {
    switch (m) {
        case RunMode::Shots:
            return "shots";
        case RunMode::Exact:
            return "exact";
        case RunMode::Channel:
            return "channel";
        case RunMode::Recover:
            return "recover";
    }
    return "unknown";
}

const char *to_string(OutputFormat f) {
    return f == OutputFormat::Json ? "json" : "csv";
}

const char *to_string(StopChoice s) {
    return s == StopChoice::Blind ? "blind" : "verification";
}

AlgorithmChoice algorithm_from_string(const std::string &s) {
    static constexpr AlgorithmChoice all[] = {AlgorithmChoice::Standard, AlgorithmChoice::InitFree,
                                              AlgorithmChoice::Both};
    return parse_enum(s, all, "algorithm");
}

RunMode mode_from_string(const std::string &s) {
    static constexpr RunMode all[] = {RunMode::Shots, RunMode::Exact, RunMode::Channel, RunMode::Recover};
    return parse_enum(s, all, "mode");
}

OutputFormat format_from_string(const std::string &s) {
    static constexpr OutputFormat all[] = {OutputFormat::Json, OutputFormat::Csv};
    return parse_enum(s, all, "format");
}

StopChoice stop_from_string(const std::string &s) {
    static constexpr StopChoice all[] = {StopChoice::Blind, StopChoice::Verification};
    return parse_enum(s, all, "stop rule");
}

Json config_to_json(const ExperimentConfig &c) {
    Json aux_states = Json::array();
    for (const auto &[w, amps] : c.aux_states) aux_states.push_back(Json{{"weight", w}, {"amplitudes", complex_list(amps)}});
    Json j{{"moduli", c.moduli}};
    j["generators"] = c.random_subgroup ? Json("random-subgroup") : Json(c.generators);
    j["subgroup_seed"] = c.subgroup_seed ? Json(*c.subgroup_seed) : Json(nullptr);
    j["algorithm"] = to_string(c.algorithm);
    j["aux"] = to_string(c.aux);
    j["mixed_members"] = c.mixed_members;
    j["aux_states"] = aux_states;
    j["mode"] = to_string(c.mode);
    j["shots"] = c.shots;
    j["seed"] = c.seed;
    j["relabel_f"] = c.relabel_f;
    j["trials"] = c.trials;
    j["stop"] = to_string(c.stop);
    j["budget"] = c.budget;
    j["output"] = c.output;
    j["format"] = to_string(c.format);
    j["threads"] = c.threads;
    return j;
}

ExperimentConfig config_from_json(const Json &j) {
    if (!j.is_object()) fail_invalid("config must be a JSON object");
    static const char *known[] = {"moduli", "generators", "subgroup_seed", "algorithm", "aux",    "mixed_members",
                                  "aux_states", "mode",   "shots",         "seed",      "relabel_f", "trials",
                                  "stop",   "budget",     "output",        "format",    "threads"};
    for (const auto &[key, value] : j.items()) {
        if (std::find_if(std::begin(known), std::end(known), [&](const char *k) { return key == k; }) ==
            std::end(known)) {
            fail_invalid("unknown config key '" + key + "'");
        }
    }
    ExperimentConfig c;
    try {
        c.moduli = j.at("moduli").get<std::vector<Int>>();
        if (j.contains("generators")) {
            const auto &g = j["generators"];
            if (g.is_string()) {
                if (g.get<std::string>() != "random-subgroup") fail_invalid("generators must be a list or \"random-subgroup\"");
                c.random_subgroup = true;
            } else {
                c.generators = g.get<std::vector<Int>>();
            }
        } else {
            fail_invalid("config needs generators (a list or \"random-subgroup\")");
        }
        if (j.contains("subgroup_seed") && !j["subgroup_seed"].is_null()) {
            c.subgroup_seed = j["subgroup_seed"].get<std::uint64_t>();
        }
        auto str = [&](const char *key, const char *fallback) {
            return j.contains(key) ? j[key].get<std::string>() : std::string(fallback);
        };
        auto u64 = [&](const char *key, std::uint64_t fallback) {
            if (!j.contains(key)) return fallback;
            if (!j[key].is_number_unsigned()) fail_invalid(std::string(key) + " must be a non-negative integer");
            return j[key].get<std::uint64_t>();
        };
        c.algorithm = algorithm_from_string(str("algorithm", "both"));
        c.aux = aux_kind_from_string(str("aux", "zero"));
        c.mixed_members = static_cast<std::size_t>(u64("mixed_members", 3));
        if (j.contains("aux_states")) {
            for (const auto &s : j["aux_states"]) {
                c.aux_states.emplace_back(s.at("weight").get<double>(), parse_complex_list(s.at("amplitudes")));
            }
        }
        c.mode = mode_from_string(str("mode", "exact"));
        c.shots = u64("shots", 1000);
        c.seed = u64("seed", 0);
        c.relabel_f = j.contains("relabel_f") ? j["relabel_f"].get<bool>() : false;
        c.trials = u64("trials", 1);
        c.stop = stop_from_string(str("stop", "blind"));
        c.budget = u64("budget", 0);
        c.output = str("output", "");
        c.format = format_from_string(str("format", "json"));
        c.threads = static_cast<unsigned>(u64("threads", 1));
    } catch (const nlohmann::json::exception &e) {
        fail_invalid(std::string("malformed config: ") + e.what());
    }
    return c;
}

PreparedExperiment prepare(const ExperimentConfig &config) {
    auto cfg = config;
    std::vector<std::string> warnings;
    if (cfg.moduli.empty()) fail_invalid("moduli must not be empty");
    for (auto n : cfg.moduli) {
        if (n < 1) fail_invalid("moduli must be positive, got " + std::to_string(n));
    }
    if (cfg.threads == 0) fail_invalid("threads must be at least 1");
    if (cfg.trials == 0 && cfg.mode == RunMode::Recover) fail_invalid("recover mode needs at least one trial");
    if (cfg.mixed_members == 0) fail_invalid("mixed_members must be at least 1");

    // |G| first: the hiding-function table has one entry per element.
    Int order = 1;
    for (auto n : cfg.moduli) order = checked_mul(order, n);
    check_amplitude_cap(static_cast<std::uint64_t>(order));
    FiniteAbelianGroup g(cfg.moduli);

    if (cfg.random_subgroup) {
        RandomStream rng(cfg.subgroup_seed.value_or(cfg.seed), kSubgroupStream);
        cfg.generators.clear();
        for (auto n : cfg.moduli) {
            const auto d = divisors(n);
            cfg.generators.push_back(d[rng.uniform_below(d.size())]);
        }
        cfg.random_subgroup = false;
    }
    if (cfg.generators.size() != cfg.moduli.size()) {
        fail_invalid("expected " + std::to_string(cfg.moduli.size()) + " generators, got " +
                     std::to_string(cfg.generators.size()));
    }
    for (std::size_t j = 0; j < cfg.generators.size(); ++j) {
        const Int raw = cfg.generators[j];
        const Int norm = normalize_generator(raw, cfg.moduli[j]);
        if (norm != raw && raw != 0) {
            warnings.push_back("generator " + std::to_string(raw) + " of Z_" + std::to_string(cfg.moduli[j]) +
                               " is not a divisor; using " + std::to_string(norm));
        }
        cfg.generators[j] = norm;
    }
    ProductSubgroup hidden(g, cfg.generators);
    const auto y = static_cast<std::uint64_t>(hidden.index());
    const auto full = static_cast<std::uint64_t>(checked_mul(order, hidden.index()));
    check_amplitude_cap(full);
    const bool channel = cfg.algorithm != AlgorithmChoice::Standard &&
                         (cfg.mode == RunMode::Channel ||
                          (cfg.mode == RunMode::Exact &&
                           (cfg.aux == AuxKind::GivenMixed || cfg.aux == AuxKind::RandomMixed)));
    if (channel) {
        if (y > kMaxDensityDimension) fail_cap("channel runs need |Y| <= 4096, got " + std::to_string(y));
        check_amplitude_cap(static_cast<std::uint64_t>(checked_mul(static_cast<Int>(full), static_cast<Int>(y))));
    }
    if (cfg.aux == AuxKind::GivenPure || cfg.aux == AuxKind::GivenMixed) {
        if (cfg.aux_states.empty()) fail_invalid(std::string(to_string(cfg.aux)) + " needs aux_states");
        if (cfg.aux == AuxKind::GivenPure && cfg.aux_states.size() != 1) fail_invalid("given-pure takes one state");
        for (const auto &[w, amps] : cfg.aux_states) {
            if (amps.size() != y) {
                fail_invalid("aux state has " + std::to_string(amps.size()) + " amplitudes, |Y| = " + std::to_string(y));
            }
        }
    }
    auto f = HidingFunction::canonical(hidden, cfg.relabel_f ? std::optional<std::uint64_t>(cfg.seed) : std::nullopt);
    return PreparedExperiment{std::move(cfg), std::move(hidden), std::move(f), std::move(warnings)};
}

Json run_experiment(const ExperimentConfig &config) {
    const auto start = std::chrono::steady_clock::now();
    const auto prep = prepare(config);
    Json report;
    report["tool"] = Json{{"name", "ahsp-sim"}, {"version", version()}};
    report["config"] = config_to_json(prep.config);
    report["warnings"] = prep.warnings;
    report["instance"] = instance_json(prep);
    Json runs = Json::object();
    if (prep.config.algorithm != AlgorithmChoice::InitFree) runs["standard"] = run_one(prep, false);
    if (prep.config.algorithm != AlgorithmChoice::Standard) runs["init_free"] = run_one(prep, true);
    report["runs"] = runs;
    if (runs.contains("standard") && runs.contains("init_free") && runs["standard"].contains("exact")) {
        report["comparison"] = compare_reports(report, report);
    }
    const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report["timing"] = Json{{"wall_clock_seconds", elapsed}};
    return report;
}

Json compare_reports(const Json &standard_report, const Json &init_free_report) {
    const auto &s = run_of(standard_report, "standard", "standard");
    const auto &q = run_of(init_free_report, "init_free", "initialization-free");
    const auto &si = standard_report.at("instance");
    const auto &qi = init_free_report.at("instance");
    if (si.at("moduli") != qi.at("moduli") || si.at("hidden_generators") != qi.at("hidden_generators") ||
        si.at("relabeled") != qi.at("relabeled")) {
        fail_invalid("reports describe different instances");
    }
    if (si.at("relabeled").get<bool>() &&
        standard_report.at("config").at("seed") != init_free_report.at("config").at("seed")) {
        fail_invalid("reports use different relabelings of f");
    }
    const auto a = exact_map(s, "standard");
    const auto b = exact_map(q, "initialization-free");
    std::map<std::vector<Int>, std::pair<double, double>> both;
    for (const auto &[k, v] : a) both[k].first = v;
    for (const auto &[k, v] : b) both[k].second = v;
    Json rows = Json::array();
    double worst = 0;
    for (const auto &[k, v] : both) {
        const double d = std::abs(v.first - v.second);
        worst = std::max(worst, d);
        rows.push_back(Json{{"outcome", k}, {"standard", v.first}, {"init_free", v.second}, {"abs_diff", d}});
    }
    Json restoration{{"standard", s["exact"].value("restoration", Json())},
                     {"init_free", q["exact"].value("restoration", Json())}};
    return Json{{"instance", si},
                {"distributions", rows},
                {"max_abs_diff", worst},
                {"distributions_match", worst <= 1e-9},
                {"oracle_calls_per_shot",
                 Json{{"standard", s.at("oracle_calls_per_shot")}, {"init_free", q.at("oracle_calls_per_shot")}}},
                {"restoration", restoration}};
}

std::string report_to_csv(const Json &report) {
    std::ostringstream out;
    out << "algorithm,outcome,exact_probability,empirical_count,empirical_frequency\n";
    if (!report.contains("runs")) fail_invalid("report has no runs");
    for (const auto &[name, run] : report["runs"].items()) {
        std::map<std::vector<Int>, std::tuple<std::optional<double>, std::uint64_t, double>> rows;
        if (run.contains("exact")) {
            for (const auto &e : run["exact"]["distribution"]) {
                std::get<0>(rows[e["outcome"].get<std::vector<Int>>()]) = e["probability"].get<double>();
            }
        }
        if (run.contains("empirical")) {
            for (const auto &e : run["empirical"]["outcomes"]) {
                auto &r = rows[e["outcome"].get<std::vector<Int>>()];
                std::get<1>(r) = e["count"].get<std::uint64_t>();
                std::get<2>(r) = e["frequency"].get<double>();
            }
        }
        for (const auto &[k, r] : rows) {
            out << run["algorithm"].get<std::string>() << ",\"" << Json(k).dump() << "\",";
            if (std::get<0>(r)) out << Json(*std::get<0>(r)).dump();
            out << ',' << std::get<1>(r) << ',' << Json(std::get<2>(r)).dump() << '\n';
        }
    }
    return out.str();
}

void write_file_atomic(const std::string &path, const std::string &contents) {
    if (path.empty()) throw Error(ErrorKind::Io, "output path is empty");
    const auto tmp = path + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorKind::Io, "cannot open " + tmp + " for writing");
        out << contents;
        out.flush();
        if (!out) {
            std::remove(tmp.c_str());
            throw Error(ErrorKind::Io, "failed writing " + tmp);
        }
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw Error(ErrorKind::Io, "cannot rename " + tmp + " to " + path);
    }
}

void write_report(const Json &report, const std::string &path, OutputFormat format) {
    write_file_atomic(path, format == OutputFormat::Json ? report.dump(2) + "\n" : report_to_csv(report));
}

const char *version() noexcept {
    return AHSP_VERSION;
}

}  // namespace ahsp
