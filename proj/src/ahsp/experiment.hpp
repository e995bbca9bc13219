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
#include <optional>
#include <string>
#include <vector>

#include "ahsp/algorithms.hpp"
#include "ahsp/group.hpp"
#include "json.hpp"

namespace ahsp {

using Json = nlohmann::ordered_json;

enum class AlgorithmChoice { Standard, InitFree, Both };
enum class RunMode { Shots, Exact, Channel, Recover };
enum class OutputFormat { Json, Csv };
enum class StopChoice { Blind, Verification };

const char *to_string(AlgorithmChoice a);
const char *to_string(RunMode m);
const char *to_string(OutputFormat f);
const char *to_string(StopChoice s);
AlgorithmChoice algorithm_from_string(const std::string &s);
RunMode mode_from_string(const std::string &s);
OutputFormat format_from_string(const std::string &s);
StopChoice stop_from_string(const std::string &s);

struct ExperimentConfig {
    std::vector<Int> moduli;
    /// Empty means "random-subgroup": h_j drawn from the divisors of N_j
    /// with subgroup_seed (defaulting to seed).
    std::vector<Int> generators;
    bool random_subgroup = false;
    std::optional<std::uint64_t> subgroup_seed;
    AlgorithmChoice algorithm = AlgorithmChoice::Both;
    AuxKind aux = AuxKind::Zero;
    /// Members of a random mixed ensemble.
    std::size_t mixed_members = 3;
    /// Explicit ensemble for given-pure / given-mixed: (weight, amplitudes).
    std::vector<std::pair<double, std::vector<Complex>>> aux_states;
    RunMode mode = RunMode::Exact;
    std::uint64_t shots = 1000;
    std::uint64_t seed = 0;
    bool relabel_f = false;
    std::uint64_t trials = 1;
    StopChoice stop = StopChoice::Blind;
    /// Samples per recovery trial before giving up; 0 picks 64 (ceil(log2|G|) + 1).
    std::uint64_t budget = 0;
    std::string output;
    OutputFormat format = OutputFormat::Json;
    unsigned threads = 1;
};

Json config_to_json(const ExperimentConfig &config);
/// Unknown keys are rejected. Generators are left as given; normalization
/// happens in prepare().
ExperimentConfig config_from_json(const Json &j);

/// A validated instance ready to run.
struct PreparedExperiment {
    ExperimentConfig config;  // generators normalized
    ProductSubgroup hidden;
    HidingFunction f;
    std::vector<std::string> warnings;
};

/// Normalizes generators (with a warning for each that changes), draws a
/// random subgroup if asked, and checks every size cap before anything
/// large is allocated.
PreparedExperiment prepare(const ExperimentConfig &config);

/// Runs the experiment. Everything except the "timing" key depends only on
/// the config; the thread count does not change results.
Json run_experiment(const ExperimentConfig &config);

/// Side-by-side summary of a standard report and an initialization-free
/// report of the same instance. Either argument may be a report that holds
/// both runs.
Json compare_reports(const Json &standard_report, const Json &init_free_report);

/// Flattened per-outcome table of a report.
std::string report_to_csv(const Json &report);

/// Writes via a temporary file in the same directory and a rename.
void write_file_atomic(const std::string &path, const std::string &contents);
void write_report(const Json &report, const std::string &path, OutputFormat format);

const char *version() noexcept;

}  // namespace ahsp
