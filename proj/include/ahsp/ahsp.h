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


/* C interface to the ahsp-sim simulator. Every call returns an
 * ahsp_status; on failure ahsp_last_error() describes the problem for the
 * calling thread. Handles are opaque and owned by the caller. */

#ifndef AHSP_AHSP_H_
#define AHSP_AHSP_H_

#include <stddef.h>
#include <stdint.h>

#if defined(AHSP_BUILDING_LIBRARY)
#define AHSP_API __attribute__((visibility("default")))
#else
#define AHSP_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ahsp_status {
    AHSP_OK = 0,
    AHSP_ERR_INVALID_ARGUMENT = 1,
    AHSP_ERR_RESOURCE_CAP = 2,
    AHSP_ERR_INTERNAL = 3,
    AHSP_ERR_IO = 4,
    AHSP_ERR_BUFFER_TOO_SMALL = 5
} ahsp_status;

typedef struct ahsp_group ahsp_group;
typedef struct ahsp_subgroup ahsp_subgroup;
typedef struct ahsp_config ahsp_config;
typedef struct ahsp_report ahsp_report;

AHSP_API const char *ahsp_version(void);
AHSP_API const char *ahsp_status_name(ahsp_status status);
/* Message of the last failed call on this thread, "" if none. */
AHSP_API const char *ahsp_last_error(void);

/* Largest state vector (in amplitudes) a call may allocate. 0 restores the
 * default or the AHSP_SIM_MAX_AMPLITUDES override. */
AHSP_API ahsp_status ahsp_set_max_amplitudes(uint64_t cap);
AHSP_API uint64_t ahsp_max_amplitudes(void);

/* Strings returned by the library are released with this. */
AHSP_API void ahsp_string_free(char *s);

/* G = Z_{moduli[0]} + ... + Z_{moduli[rank-1]}. */
AHSP_API ahsp_status ahsp_group_create(const int64_t *moduli, size_t rank, ahsp_group **out);
AHSP_API void ahsp_group_free(ahsp_group *group);
AHSP_API ahsp_status ahsp_group_rank(const ahsp_group *group, size_t *out);
AHSP_API ahsp_status ahsp_group_order(const ahsp_group *group, int64_t *out);
AHSP_API ahsp_status ahsp_group_exponent(const ahsp_group *group, int64_t *out);
/* x . y = sum_j (M / N_j) x_j y_j mod M for coordinate arrays of length rank. */
AHSP_API ahsp_status ahsp_group_inner_product(const ahsp_group *group, const int64_t *x, const int64_t *y,
                                              int64_t *out);

/* H = <h_1> + ... + <h_k>; generators are normalized to gcd(h_j, N_j)
 * with 0 meaning the trivial component. */
AHSP_API ahsp_status ahsp_subgroup_create(const ahsp_group *group, const int64_t *generators, ahsp_subgroup **out);
AHSP_API void ahsp_subgroup_free(ahsp_subgroup *subgroup);
AHSP_API ahsp_status ahsp_subgroup_order(const ahsp_subgroup *subgroup, int64_t *out);
/* Writes the rank normalized generators into out[0..capacity). */
AHSP_API ahsp_status ahsp_subgroup_generators(const ahsp_subgroup *subgroup, int64_t *out, size_t capacity);
AHSP_API ahsp_status ahsp_subgroup_orthogonal(const ahsp_subgroup *subgroup, ahsp_subgroup **out);

/* Exact measurement distributions over G, indexed row-major by
 * coordinates; out must hold |G| doubles. The hiding function is the
 * canonical f(x) = (x_j mod h_j). */
AHSP_API ahsp_status ahsp_standard_distribution(const ahsp_subgroup *hidden, double *out, size_t capacity);
/* aux holds |Y| complex amplitudes as interleaved (re, im) pairs; NULL
 * means |0>. The result is averaged over z. */
AHSP_API ahsp_status ahsp_init_free_distribution(const ahsp_subgroup *hidden, const double *aux, size_t aux_len,
                                                 double *out, size_t capacity);

AHSP_API ahsp_status ahsp_config_from_json(const char *json, ahsp_config **out);
AHSP_API ahsp_status ahsp_config_to_json(const ahsp_config *config, char **out);
AHSP_API void ahsp_config_free(ahsp_config *config);

AHSP_API ahsp_status ahsp_run(const ahsp_config *config, ahsp_report **out);
AHSP_API ahsp_status ahsp_report_from_json(const char *json, ahsp_report **out);
AHSP_API ahsp_status ahsp_report_to_json(const ahsp_report *report, char **out);
AHSP_API ahsp_status ahsp_report_to_csv(const ahsp_report *report, char **out);
/* format is "json" or "csv"; the file is replaced atomically. */
AHSP_API ahsp_status ahsp_report_write(const ahsp_report *report, const char *path, const char *format);
AHSP_API ahsp_status ahsp_report_compare(const ahsp_report *standard_report, const ahsp_report *init_free_report,
                                         char **out);
AHSP_API void ahsp_report_free(ahsp_report *report);

#ifdef __cplusplus
}
#endif

#endif /* AHSP_AHSP_H_ */
