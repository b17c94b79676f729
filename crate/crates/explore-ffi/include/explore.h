#ifndef EXPLORE_H
#define EXPLORE_H

/* Generated by cbindgen from explore-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every fallible function.
 */
typedef enum ExploreStatus {
  EXPLORE_STATUS_OK = 0,
  EXPLORE_STATUS_NULL_POINTER = 1,
  EXPLORE_STATUS_INVALID_UTF8 = 2,
  EXPLORE_STATUS_PARSE_ERROR = 3,
  EXPLORE_STATUS_INVALID_ARGUMENT = 4,
  EXPLORE_STATUS_RUN_FAILED = 5,
  EXPLORE_STATUS_INDEX_OUT_OF_RANGE = 6,
} ExploreStatus;

/**
 * Termination cause of a finished run.
 */
typedef enum ExploreTermination {
  EXPLORE_TERMINATION_COMPLETE = 0,
  EXPLORE_TERMINATION_BUDGET = 1,
  EXPLORE_TERMINATION_STUCK = 2,
} ExploreTermination;

/**
 * Opaque run-configuration handle.
 */
typedef struct ExploreConfig ExploreConfig;

/**
 * Opaque ground-truth map handle.
 */
typedef struct ExploreMap ExploreMap;

/**
 * Opaque run-result handle.
 */
typedef struct ExploreResult ExploreResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a ground-truth map from text (`W H RESOLUTION` header plus `.`/`#`
 * rows) into a new handle stored in `out`.
 *
 * # Safety
 * `text` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum ExploreStatus explore_map_parse(const char *text, struct ExploreMap **out);

/**
 * Releases a map handle. Accepts NULL.
 *
 * # Safety
 * `map` must be a handle from `explore_map_parse`, not freed before.
 */
void explore_map_free(struct ExploreMap *map);

/**
 * Map width in cells; 0 on NULL.
 *
 * # Safety
 * `map` must be a live map handle or NULL.
 */
uintptr_t explore_map_width(const struct ExploreMap *map);

/**
 * Map height in cells; 0 on NULL.
 *
 * # Safety
 * `map` must be a live map handle or NULL.
 */
uintptr_t explore_map_height(const struct ExploreMap *map);

/**
 * Creates a configuration with default settings.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum ExploreStatus explore_config_new(struct ExploreConfig **out);

/**
 * Applies `key = value` config text (same format as the CLI config files)
 * on top of the current settings.
 *
 * # Safety
 * `cfg` must be a live config handle; `text` a valid NUL-terminated string.
 */
enum ExploreStatus explore_config_apply_text(struct ExploreConfig *cfg, const char *text);

/**
 * Sets the RNG seed.
 *
 * # Safety
 * `cfg` must be a live config handle.
 */
enum ExploreStatus explore_config_set_seed(struct ExploreConfig *cfg, uint64_t seed);

/**
 * Selects the detector: 0 = adaptive, 1 = baseline.
 *
 * # Safety
 * `cfg` must be a live config handle.
 */
enum ExploreStatus explore_config_set_detector(struct ExploreConfig *cfg, int32_t detector);

/**
 * Releases a config handle. Accepts NULL.
 *
 * # Safety
 * `cfg` must be a handle from `explore_config_new`, not freed before.
 */
void explore_config_free(struct ExploreConfig *cfg);

/**
 * Runs one exploration and stores an owned result handle in `out`.
 *
 * # Safety
 * `map` and `cfg` must be live handles; `out` a valid pointer.
 */
enum ExploreStatus explore_run(const struct ExploreMap *map,
                               const struct ExploreConfig *cfg,
                               struct ExploreResult **out);

/**
 * Releases a result handle. Accepts NULL.
 *
 * # Safety
 * `result` must be a handle from `explore_run`, not freed before.
 */
void explore_result_free(struct ExploreResult *result);

/**
 * Termination cause of the run.
 *
 * # Safety
 * `result` must be a live result handle; `out` a valid pointer.
 */
enum ExploreStatus explore_result_termination(const struct ExploreResult *result,
                                              enum ExploreTermination *out);

/**
 * Final explored area, m².
 *
 * # Safety
 * `result` must be a live result handle; `out` a valid pointer.
 */
enum ExploreStatus explore_result_explored_area(const struct ExploreResult *result, double *out);

/**
 * Total simulated time, seconds.
 *
 * # Safety
 * `result` must be a live result handle; `out` a valid pointer.
 */
enum ExploreStatus explore_result_sim_time(const struct ExploreResult *result, double *out);

/**
 * Total travel distance, meters.
 *
 * # Safety
 * `result` must be a live result handle; `out` a valid pointer.
 */
enum ExploreStatus explore_result_distance(const struct ExploreResult *result, double *out);

/**
 * Number of detection windows the run produced.
 *
 * # Safety
 * `result` must be a live result handle.
 */
uintptr_t explore_result_window_count(const struct ExploreResult *result);

/**
 * Attempts and successes of window `index`.
 *
 * # Safety
 * `result` must be a live result handle; `attempts`/`successes` valid pointers.
 */
enum ExploreStatus explore_result_window_samples(const struct ExploreResult *result,
                                                 uintptr_t index,
                                                 uintptr_t *attempts,
                                                 uintptr_t *successes);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EXPLORE_H */
