#ifndef HECKE_N0_H
#define HECKE_N0_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Status codes returned by every fallible function.
 */
typedef enum HnStatus {
  HN_STATUS_OK = 0,
  HN_STATUS_NULL_ARGUMENT = 1,
  HN_STATUS_INVALID_UTF8 = 2,
  HN_STATUS_DOMAIN = 3,
  HN_STATUS_UNSUPPORTED_WEIGHT = 4,
  HN_STATUS_INTERNAL = 5,
  HN_STATUS_CACHE = 6,
  HN_STATUS_IO = 7,
  HN_STATUS_PANIC = 8,
} HnStatus;

/*
 Opaque on-disk cache.
 */
typedef struct HnCache HnCache;

/*
 Opaque result of one n₀ computation.
 */
typedef struct HnResult HnResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the last failed call on this thread, or NULL. The pointer stays
 valid until the next failing call on the same thread.
 */
const char *hn_last_error(void);

/*
 Library version as a static NUL-terminated string.
 */
const char *hn_version(void);

/*
 k·ψ(N)/12, rounded down.
 */
uint64_t hn_sturm_bound(uint64_t level, uint32_t weight);

/*
 Opens (creating if needed) a cache directory.

 # Safety
 `path` must be a NUL-terminated string and `out` a valid pointer.
 */
enum HnStatus hn_cache_open(const char *path, struct HnCache **out);

/*
 # Safety
 `cache` must come from [`hn_cache_open`] and not be used afterwards. NULL is ignored.
 */
void hn_cache_free(struct HnCache *cache);

/*
 Computes n₀(level, weight). `cache` may be NULL.

 # Safety
 `cache` must be NULL or a live handle; `out` must be a valid pointer.
 */
enum HnStatus hn_compute_n0(uint64_t level,
                            uint32_t weight,
                            const struct HnCache *cache,
                            struct HnResult **out);

/*
 # Safety
 `result` must be a live handle.
 */
uint64_t hn_result_n0(const struct HnResult *result);

/*
 Dimension of the new cuspidal plus space.

 # Safety
 `result` must be a live handle.
 */
uint64_t hn_result_dim(const struct HnResult *result);

/*
 Full result as JSON, to be released with [`hn_string_free`].

 # Safety
 `result` must be a live handle and `out` a valid pointer.
 */
enum HnStatus hn_result_json(const struct HnResult *result, char **out);

/*
 # Safety
 `result` must come from [`hn_compute_n0`] and not be used afterwards. NULL is ignored.
 */
void hn_result_free(struct HnResult *result);

/*
 # Safety
 `s` must come from this library and not be used afterwards. NULL is ignored.
 */
void hn_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HECKE_N0_H */
