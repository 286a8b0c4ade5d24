#ifndef ORBICYCLIC_H
#define ORBICYCLIC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum OrbStatus {
  ORB_STATUS_OK = 0,
  ORB_STATUS_NULL_POINTER = 1,
  ORB_STATUS_INVALID_ARGUMENT = 2,
  ORB_STATUS_GUARD_EXCEEDED = 3,
  ORB_STATUS_MISSING_DATA = 4,
  ORB_STATUS_TABLE_ERROR = 5,
  ORB_STATUS_INTERNAL = 6,
  ORB_STATUS_PANIC = 7,
} OrbStatus;

/**
 * Opaque orbifold signature.
 */
typedef struct OrbSignature OrbSignature;

/**
 * Opaque rooted map table.
 */
typedef struct OrbTable OrbTable;

/**
 * Opaque period tuple.
 */
typedef struct OrbTuple OrbTuple;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failure on this thread, or null. Valid until the
 * next call into this library from the same thread.
 */
const char *orb_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void orb_string_free(char *s);

/**
 * # Safety
 * `values` must point to `len` readable integers (or be null with `len == 0`);
 * `out` must be writable.
 */
enum OrbStatus orb_tuple_new(const uint64_t *values, size_t len, struct OrbTuple **out);

/**
 * # Safety
 * `t` must come from [`orb_tuple_new`] and not be freed twice. Null is ignored.
 */
void orb_tuple_free(struct OrbTuple *t);

/**
 * `E` of the tuple as a decimal string.
 *
 * # Safety
 * `t` must be a live tuple handle and `out` writable.
 */
enum OrbStatus orb_tuple_e(const struct OrbTuple *t, char **out);

/**
 * # Safety
 * `t` must be a live tuple handle and `out` writable.
 */
enum OrbStatus orb_tuple_vanishes(const struct OrbTuple *t, bool *out);

/**
 * # Safety
 * As for [`orb_tuple_new`].
 */
enum OrbStatus orb_signature_new(uint64_t genus,
                                 const uint64_t *periods,
                                 size_t len,
                                 struct OrbSignature **out);

/**
 * # Safety
 * `s` must come from [`orb_signature_new`] and not be freed twice. Null is ignored.
 */
void orb_signature_free(struct OrbSignature *s);

/**
 * Order-preserving epimorphisms onto `Z_ell`, as a decimal string.
 *
 * # Safety
 * `s` must be a live signature handle and `out` writable.
 */
enum OrbStatus orb_signature_count_epi(const struct OrbSignature *s, uint64_t ell, char **out);

/**
 * Whether a `Z_ell` action on a genus-`gamma` surface with this quotient exists.
 *
 * # Safety
 * `s` must be a live signature handle and `out` writable.
 */
enum OrbStatus orb_signature_admissible(const struct OrbSignature *s,
                                        uint64_t ell,
                                        uint64_t gamma,
                                        bool *out);

/**
 * # Safety
 * `out` must be writable.
 */
enum OrbStatus orb_table_bundled(struct OrbTable **out);

/**
 * Loads a `genus,edges,count` CSV file.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` writable.
 */
enum OrbStatus orb_table_load(const char *path, struct OrbTable **out);

/**
 * # Safety
 * `t` must come from this library and not be freed twice. Null is ignored.
 */
void orb_table_free(struct OrbTable *t);

/**
 * Unrooted maps with `edges` edges on the genus-`gamma` surface.
 *
 * # Safety
 * `table` must be a live table handle and `out` writable.
 */
enum OrbStatus orb_theta(const struct OrbTable *table, uint64_t gamma, uint64_t edges, char **out);

/**
 * `A(gamma)` and `A_0(gamma)`.
 *
 * # Safety
 * `total` and `planar` must be writable.
 */
enum OrbStatus orb_census(uint64_t gamma, uint64_t *total, uint64_t *planar);

/**
 * Subgroups of index `index` in the free group of rank `rank` and their
 * conjugacy classes.
 *
 * # Safety
 * `subgroups` and `classes` must be writable.
 */
enum OrbStatus orb_free_group(uint64_t rank, uint64_t index, char **subgroups, char **classes);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ORBICYCLIC_H */
