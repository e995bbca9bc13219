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


#include "ahsp/ahsp.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "ahsp/algorithms.hpp"
#include "ahsp/error.hpp"
#include "ahsp/experiment.hpp"
#include "ahsp/group.hpp"

struct ahsp_group {
    ahsp::FiniteAbelianGroup group;
};

struct ahsp_subgroup {
    ahsp::ProductSubgroup subgroup;
};

struct ahsp_config {
    ahsp::ExperimentConfig config;
};

struct ahsp_report {
    ahsp::Json json;
};

namespace {

thread_local std::string last_error;

ahsp_status fail(ahsp_status status, std::string message) {
    last_error = std::move(message);
    return status;
}

// Runs body and turns any exception into a status code.
template <typename Body>
ahsp_status guarded(Body body) {
    try {
        last_error.clear();
        body();
        return AHSP_OK;
    } catch (const ahsp::Error &e) {
        switch (e.kind()) {
            case ahsp::ErrorKind::InvalidArgument:
                return fail(AHSP_ERR_INVALID_ARGUMENT, e.what());
            case ahsp::ErrorKind::ResourceCap:
                return fail(AHSP_ERR_RESOURCE_CAP, e.what());
            case ahsp::ErrorKind::Io:
                return fail(AHSP_ERR_IO, e.what());
            case ahsp::ErrorKind::InvariantViolation:
                return fail(AHSP_ERR_INTERNAL, e.what());
        }
        return fail(AHSP_ERR_INTERNAL, e.what());
    } catch (const std::bad_alloc &) {
        return fail(AHSP_ERR_RESOURCE_CAP, "out of memory");
    } catch (const std::exception &e) {
        return fail(AHSP_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(AHSP_ERR_INTERNAL, "unknown error");
    }
}

void require(const void *p, const char *what) {
    if (!p) ahsp::fail_invalid(std::string(what) + " must not be NULL");
}

char *copy_string(const std::string &s) {
    auto *out = static_cast<char *>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

ahsp_status copy_distribution(const ahsp::OutcomeDistribution &d, double *out, std::size_t capacity) {
    const auto probs = d.probabilities();
    if (capacity < probs.size()) {
        return fail(AHSP_ERR_BUFFER_TOO_SMALL,
                    "buffer holds " + std::to_string(capacity) + " entries, need " + std::to_string(probs.size()));
    }
    std::copy(probs.begin(), probs.end(), out);
    return AHSP_OK;
}

}  // namespace

extern "C" {

const char *ahsp_version(void) {
    return ahsp::version();
}

const char *ahsp_status_name(ahsp_status status) {
    switch (status) {
        case AHSP_OK:
            return "ok";
        case AHSP_ERR_INVALID_ARGUMENT:
            return "invalid argument";
        case AHSP_ERR_RESOURCE_CAP:
            return "resource cap exceeded";
        case AHSP_ERR_INTERNAL:
            return "internal error";
        case AHSP_ERR_IO:
            return "i/o error";
        case AHSP_ERR_BUFFER_TOO_SMALL:
            return "buffer too small";
    }
    return "unknown status";
}

const char *ahsp_last_error(void) {
    return last_error.c_str();
}

ahsp_status ahsp_set_max_amplitudes(uint64_t cap) {
    return guarded([&] {
        if (cap == 0) {
            ahsp::reset_max_amplitudes();
        } else {
            ahsp::set_max_amplitudes(cap);
        }
    });
}

uint64_t ahsp_max_amplitudes(void) {
    return ahsp::max_amplitudes();
}

void ahsp_string_free(char *s) {
    std::free(s);
}

ahsp_status ahsp_group_create(const int64_t *moduli, size_t rank, ahsp_group **out) {
    return guarded([&] {
        require(out, "out");
        *out = nullptr;
        if (rank > 0) require(moduli, "moduli");
        *out = new ahsp_group{ahsp::FiniteAbelianGroup(std::vector<ahsp::Int>(moduli, moduli + rank))};
    });
}

void ahsp_group_free(ahsp_group *group) {
    delete group;
}

ahsp_status ahsp_group_rank(const ahsp_group *group, size_t *out) {
    return guarded([&] {
        require(group, "group");
        require(out, "out");
        *out = group->group.rank();
    });
}

ahsp_status ahsp_group_order(const ahsp_group *group, int64_t *out) {
    return guarded([&] {
        require(group, "group");
        require(out, "out");
        *out = group->group.order();
    });
}

ahsp_status ahsp_group_exponent(const ahsp_group *group, int64_t *out) {
    return guarded([&] {
        require(group, "group");
        require(out, "out");
        *out = group->group.exponent();
    });
}

ahsp_status ahsp_group_inner_product(const ahsp_group *group, const int64_t *x, const int64_t *y, int64_t *out) {
    return guarded([&] {
        require(group, "group");
        require(out, "out");
        const auto k = group->group.rank();
        if (k > 0) {
            require(x, "x");
            require(y, "y");
        }
        const auto &g = group->group;
        *out = ahsp::inner_product(g.element(std::span<const ahsp::Int>(x, k)),
                                   g.element(std::span<const ahsp::Int>(y, k)));
    });
}

ahsp_status ahsp_subgroup_create(const ahsp_group *group, const int64_t *generators, ahsp_subgroup **out) {
    return guarded([&] {
        require(out, "out");
        *out = nullptr;
        require(group, "group");
        const auto k = group->group.rank();
        if (k > 0) require(generators, "generators");
        *out = new ahsp_subgroup{ahsp::ProductSubgroup(group->group, std::vector<ahsp::Int>(generators, generators + k))};
    });
}

void ahsp_subgroup_free(ahsp_subgroup *subgroup) {
    delete subgroup;
}

ahsp_status ahsp_subgroup_order(const ahsp_subgroup *subgroup, int64_t *out) {
    return guarded([&] {
        require(subgroup, "subgroup");
        require(out, "out");
        *out = subgroup->subgroup.order();
    });
}

ahsp_status ahsp_subgroup_generators(const ahsp_subgroup *subgroup, int64_t *out, size_t capacity) {
    ahsp_status status = AHSP_OK;
    auto s = guarded([&] {
        require(subgroup, "subgroup");
        const auto &gens = subgroup->subgroup.generators();
        if (capacity < gens.size()) {
            status = fail(AHSP_ERR_BUFFER_TOO_SMALL, "generator buffer holds " + std::to_string(capacity) +
                                                         " entries, need " + std::to_string(gens.size()));
            return;
        }
        if (!gens.empty()) require(out, "out");
        std::copy(gens.begin(), gens.end(), out);
    });
    return s != AHSP_OK ? s : status;
}

ahsp_status ahsp_subgroup_orthogonal(const ahsp_subgroup *subgroup, ahsp_subgroup **out) {
    return guarded([&] {
        require(out, "out");
        *out = nullptr;
        require(subgroup, "subgroup");
        *out = new ahsp_subgroup{ahsp::orthogonal_subgroup(subgroup->subgroup)};
    });
}

ahsp_status ahsp_standard_distribution(const ahsp_subgroup *hidden, double *out, size_t capacity) {
    ahsp_status status = AHSP_OK;
    auto s = guarded([&] {
        require(hidden, "hidden");
        require(out, "out");
        const auto f = ahsp::HidingFunction::canonical(hidden->subgroup);
        status = copy_distribution(ahsp::standard_exact_distribution(f), out, capacity);
    });
    return s != AHSP_OK ? s : status;
}

ahsp_status ahsp_init_free_distribution(const ahsp_subgroup *hidden, const double *aux, size_t aux_len, double *out,
                                        size_t capacity) {
    ahsp_status status = AHSP_OK;
    auto s = guarded([&] {
        require(hidden, "hidden");
        require(out, "out");
        const auto f = ahsp::HidingFunction::canonical(hidden->subgroup);
        const auto layout = ahsp::AlgorithmLayout::for_function(f);
        std::optional<ahsp::PureState> phi;
        if (aux) {
            if (aux_len != 2 * layout.aux_reg.size()) {
                ahsp::fail_invalid("aux needs " + std::to_string(2 * layout.aux_reg.size()) + " doubles (re, im), got " +
                                   std::to_string(aux_len));
            }
            std::vector<ahsp::Complex> amps(layout.aux_reg.size());
            for (std::size_t i = 0; i < amps.size(); ++i) amps[i] = {aux[2 * i], aux[2 * i + 1]};
            phi.emplace(layout.aux_reg, std::move(amps));
        } else {
            phi.emplace(ahsp::PureState::basis(layout.aux_reg, std::vector<ahsp::Int>(layout.aux_reg.num_sites(), 0)));
        }
        status = copy_distribution(ahsp::ifqa_expected_distribution(f, *phi), out, capacity);
    });
    return s != AHSP_OK ? s : status;
}

ahsp_status ahsp_config_from_json(const char *json, ahsp_config **out) {
    return guarded([&] {
        require(out, "out");
        *out = nullptr;
        require(json, "json");
        ahsp::Json parsed;
        try {
            parsed = ahsp::Json::parse(json);
        } catch (const nlohmann::json::exception &e) {
            ahsp::fail_invalid(std::string("config is not valid JSON: ") + e.what());
        }
        *out = new ahsp_config{ahsp::config_from_json(parsed)};
    });
}

ahsp_status ahsp_config_to_json(const ahsp_config *config, char **out) {
    return guarded([&] {
        require(config, "config");
        require(out, "out");
        *out = copy_string(ahsp::config_to_json(config->config).dump(2));
    });
}

void ahsp_config_free(ahsp_config *config) {
    delete config;
}

ahsp_status ahsp_run(const ahsp_config *config, ahsp_report **out) {
    return guarded([&] {
        require(out, "out");
        *out = nullptr;
        require(config, "config");
        *out = new ahsp_report{ahsp::run_experiment(config->config)};
    });
}

ahsp_status ahsp_report_from_json(const char *json, ahsp_report **out) {
    return guarded([&] {
        require(out, "out");
        *out = nullptr;
        require(json, "json");
        try {
            *out = new ahsp_report{ahsp::Json::parse(json)};
        } catch (const nlohmann::json::exception &e) {
            ahsp::fail_invalid(std::string("report is not valid JSON: ") + e.what());
        }
    });
}

ahsp_status ahsp_report_to_json(const ahsp_report *report, char **out) {
    return guarded([&] {
        require(report, "report");
        require(out, "out");
        *out = copy_string(report->json.dump(2));
    });
}

ahsp_status ahsp_report_to_csv(const ahsp_report *report, char **out) {
    return guarded([&] {
        require(report, "report");
        require(out, "out");
        *out = copy_string(ahsp::report_to_csv(report->json));
    });
}

ahsp_status ahsp_report_write(const ahsp_report *report, const char *path, const char *format) {
    return guarded([&] {
        require(report, "report");
        require(path, "path");
        const auto fmt = format ? ahsp::format_from_string(format) : ahsp::OutputFormat::Json;
        ahsp::write_report(report->json, path, fmt);
    });
}

ahsp_status ahsp_report_compare(const ahsp_report *standard_report, const ahsp_report *init_free_report, char **out) {
    return guarded([&] {
        require(standard_report, "standard_report");
        require(init_free_report, "init_free_report");
        require(out, "out");
        try {
            *out = copy_string(ahsp::compare_reports(standard_report->json, init_free_report->json).dump(2));
        } catch (const nlohmann::json::exception &e) {
            ahsp::fail_invalid(std::string("malformed report: ") + e.what());
        }
    });
}

void ahsp_report_free(ahsp_report *report) {
    delete report;
}

}  // extern "C"
