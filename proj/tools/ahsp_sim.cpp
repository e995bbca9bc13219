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


// ahsp-sim: command-line experiment runner over the C API.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ahsp/ahsp.h"
#include "json.hpp"

namespace {

using Json = nlohmann::ordered_json;

// Exit codes: 0 success, 1 config (and I/O), 2 resource cap, 3 internal.
int exit_code(ahsp_status s) {
    switch (s) {
        case AHSP_OK:
            return 0;
        case AHSP_ERR_RESOURCE_CAP:
            return 2;
        case AHSP_ERR_INTERNAL:
            return 3;
        default:
            return 1;
    }
}

int report_failure(ahsp_status s, const char *what) {
    std::cerr << "ahsp-sim: " << what << ": " << ahsp_status_name(s) << ": " << ahsp_last_error() << "\n";
    return exit_code(s);
}

bool read_file(const std::string &path, std::string &out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    std::ostringstream ss;
    ss << in.rdbuf();
    out = ss.str();
    return true;
}

std::vector<long long> parse_list(const std::string &s) {
    std::vector<long long> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        long long v = std::stoll(item, &used);
        if (used != item.size()) throw std::invalid_argument(item);
        out.push_back(v);
    }
    return out;
}

// Owns a string returned by the library.
struct LibString {
    char *p = nullptr;
    ~LibString() {
        ahsp_string_free(p);
    }
};

struct RunOptions {
    std::string config_file;
    std::string moduli;
    std::string generators;
    std::string algorithm;
    std::string aux;
    std::string mode;
    std::string stop;
    std::string output;
    std::string format;
    long long shots = -1;
    long long seed = -1;
    long long trials = -1;
    long long budget = -1;
    long long threads = -1;
    long long mixed_members = -1;
    bool relabel_f = false;
};

int run_command(const RunOptions &o) {
    Json cfg = Json::object();
    if (!o.config_file.empty()) {
        std::string text;
        if (!read_file(o.config_file, text)) {
            std::cerr << "ahsp-sim: cannot read config " << o.config_file << "\n";
            return 1;
        }
        try {
            cfg = Json::parse(text);
        } catch (const std::exception &e) {
            std::cerr << "ahsp-sim: config is not valid JSON: " << e.what() << "\n";
            return 1;
        }
    }
    try {
        if (!o.moduli.empty()) cfg["moduli"] = parse_list(o.moduli);
        if (o.generators == "random-subgroup") {
            cfg["generators"] = "random-subgroup";
        } else if (!o.generators.empty()) {
            cfg["generators"] = parse_list(o.generators);
        }
    } catch (const std::exception &) {
        std::cerr << "ahsp-sim: --moduli and --generators take comma-separated integers\n";
        return 1;
    }
    auto set_str = [&](const char *key, const std::string &v) {
        if (!v.empty()) cfg[key] = v;
    };
    auto set_num = [&](const char *key, long long v) {
        if (v >= 0) cfg[key] = static_cast<unsigned long long>(v);
    };
    set_str("algorithm", o.algorithm);
    set_str("aux", o.aux);
    set_str("mode", o.mode);
    set_str("stop", o.stop);
    set_str("output", o.output);
    set_str("format", o.format);
    set_num("shots", o.shots);
    set_num("seed", o.seed);
    set_num("trials", o.trials);
    set_num("budget", o.budget);
    set_num("threads", o.threads);
    set_num("mixed_members", o.mixed_members);
    if (o.relabel_f) cfg["relabel_f"] = true;

    ahsp_config *config = nullptr;
    if (auto s = ahsp_config_from_json(cfg.dump().c_str(), &config); s != AHSP_OK) return report_failure(s, "config");
    ahsp_report *report = nullptr;
    auto s = ahsp_run(config, &report);
    ahsp_config_free(config);
    if (s != AHSP_OK) return report_failure(s, "run");

    LibString json;
    if (auto st = ahsp_report_to_json(report, &json.p); st != AHSP_OK) {
        ahsp_report_free(report);
        return report_failure(st, "report");
    }
    const auto parsed = Json::parse(json.p);
    for (const auto &w : parsed["warnings"]) std::cerr << "ahsp-sim: warning: " << w.get<std::string>() << "\n";

    const auto output = parsed["config"]["output"].get<std::string>();
    const auto format = parsed["config"]["format"].get<std::string>();
    int rc = 0;
    if (output.empty() || output == "-") {
        if (format == "csv") {
            LibString csv;
            if (auto st = ahsp_report_to_csv(report, &csv.p); st != AHSP_OK) {
                rc = report_failure(st, "report");
            } else {
                std::cout << csv.p;
            }
        } else {
            std::cout << json.p << "\n";
        }
    } else if (auto st = ahsp_report_write(report, output.c_str(), format.c_str()); st != AHSP_OK) {
        rc = report_failure(st, "write");
    }
    ahsp_report_free(report);
    return rc;
}

int compare_command(const std::string &std_path, const std::string &ifqa_path, const std::string &output) {
    ahsp_report *reports[2] = {nullptr, nullptr};
    const std::string paths[2] = {std_path, ifqa_path};
    int rc = 0;
    for (int i = 0; i < 2 && rc == 0; ++i) {
        std::string text;
        if (!read_file(paths[i], text)) {
            std::cerr << "ahsp-sim: cannot read report " << paths[i] << "\n";
            rc = 1;
        } else if (auto s = ahsp_report_from_json(text.c_str(), &reports[i]); s != AHSP_OK) {
            rc = report_failure(s, paths[i].c_str());
        }
    }
    if (rc == 0) {
        LibString out;
        if (auto s = ahsp_report_compare(reports[0], reports[1], &out.p); s != AHSP_OK) {
            rc = report_failure(s, "compare");
        } else if (output.empty() || output == "-") {
            std::cout << out.p << "\n";
        } else {
            std::ofstream f(output);
            f << out.p << "\n";
            if (!f) {
                std::cerr << "ahsp-sim: cannot write " << output << "\n";
                rc = 1;
            }
        }
    }
    ahsp_report_free(reports[0]);
    ahsp_report_free(reports[1]);
    return rc;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Simulate the standard and initialization-free abelian hidden subgroup algorithms"};
    app.set_version_flag("--version", std::string(ahsp_version()));
    app.require_subcommand(0, 1);

    RunOptions o;
    app.add_option("--config", o.config_file, "JSON config file; flags override its fields");
    app.add_option("--moduli", o.moduli, "cyclic factors N_1,...,N_k of G");
    app.add_option("--generators", o.generators, "h_1,...,h_k of the hidden subgroup, or random-subgroup");
    app.add_option("--algorithm", o.algorithm, "standard | init-free | both");
    app.add_option("--aux", o.aux, "zero | random-pure | random-mixed | given-pure | given-mixed");
    app.add_option("--mixed-members", o.mixed_members, "ensemble size of a random mixed aux state");
    app.add_option("--mode", o.mode, "shots | exact | channel | recover");
    app.add_option("--shots", o.shots, "number of shots in shots mode");
    app.add_option("--trials", o.trials, "recovery trials in recover mode");
    app.add_option("--stop", o.stop, "recovery stop rule: blind | verification");
    app.add_option("--budget", o.budget, "samples per recovery trial before giving up");
    app.add_option("--seed", o.seed, "master seed");
    app.add_flag("--relabel-f", o.relabel_f, "compose f with a random relabeling of Y");
    app.add_option("--output", o.output, "report path; stdout if omitted");
    app.add_option("--format", o.format, "json | csv");
    app.add_option("--threads", o.threads, "worker threads for shots and trials");

    auto *cmp = app.add_subcommand("compare", "compare a standard report with an initialization-free report");
    std::string std_path, ifqa_path, cmp_out;
    cmp->add_option("standard", std_path, "report containing the standard run")->required();
    cmp->add_option("init_free", ifqa_path, "report containing the initialization-free run")->required();
    cmp->add_option("--output", cmp_out, "comparison path; stdout if omitted");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }
    if (*cmp) return compare_command(std_path, ifqa_path, cmp_out);
    return run_command(o);
}
