/* Generated by cbindgen from crates/ffi/src/lib.rs. */

#ifndef CONLEY_KERNEL_H
#define CONLEY_KERNEL_H

#include <stdbool.h>
#include <stdint.h>

/*
 Result codes.
 */
typedef enum ConleyStatus {
  CONLEY_STATUS_OK = 0,
  CONLEY_STATUS_VIOLATION = 1,
  CONLEY_STATUS_INPUT_ERROR = 2,
  CONLEY_STATUS_UNDECIDED = 3,
  CONLEY_STATUS_NULL_POINTER = 10,
  CONLEY_STATUS_INVALID_UTF8 = 11,
  CONLEY_STATUS_PANIC = 12,
} ConleyStatus;

/*
 A parsed system document.
 */
typedef struct ConleyDocument ConleyDocument;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Parses a JSON system document into `*out`.

 # Safety
 `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum ConleyStatus conley_document_parse(const char *text, struct ConleyDocument **out);

/*
 Releases a document; null is ignored.

 # Safety
 `doc` must come from `conley_document_parse` and not be used afterwards.
 */
void conley_document_free(struct ConleyDocument *doc);

/*
 Predicate table for `set`, or for every named subset when `set` is null.
 A `bound` of 0 selects the default.

 # Safety
 Pointers must be valid; `set` may be null.
 */
enum ConleyStatus conley_check(const struct ConleyDocument *doc,
                               const char *set,
                               uint32_t bound,
                               char **out);

/*
 Largest invariant subset of the named set.

 # Safety
 Pointers must be valid.
 */
enum ConleyStatus conley_invariant_part(const struct ConleyDocument *doc,
                                        const char *set,
                                        uint32_t bound,
                                        char **out);

/*
 Conley index of `set` relative to `nbhd`; with `search` nonzero the
 neighbourhood is constructed from `nbhd` first.

 # Safety
 Pointers must be valid.
 */
enum ConleyStatus conley_index(const struct ConleyDocument *doc,
                               const char *set,
                               const char *nbhd,
                               bool search,
                               uint32_t bound,
                               char **out);

/*
 Decides `from ~ to` with witnesses.

 # Safety
 Pointers must be valid.
 */
enum ConleyStatus conley_sim(const struct ConleyDocument *doc,
                             const char *from,
                             const char *to,
                             uint32_t bound,
                             char **out);

/*
 Runs a verification suite.

 # Safety
 Pointers must be valid.
 */
enum ConleyStatus conley_verify(const char *suite, uint32_t trials, uint64_t seed, char **out);

/*
 Releases a string returned by this library; null is ignored.

 # Safety
 `s` must come from this library and not be used afterwards.
 */
void conley_string_free(char *s);

/*
 Message for the last failure on this thread. Valid until the next call
 into the library on the same thread.
 */
const char *conley_last_error_message(void);

/*
 Library version as a static string.
 */
const char *conley_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CONLEY_KERNEL_H */
