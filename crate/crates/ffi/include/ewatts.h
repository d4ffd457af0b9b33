#ifndef EWATTS_H
#define EWATTS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum EwattsStatus {
  EWATTS_STATUS_OK = 0,
  EWATTS_STATUS_NULL_ARGUMENT = 1,
  EWATTS_STATUS_INVALID_UTF8 = 2,
  EWATTS_STATUS_PARSE = 3,
  EWATTS_STATUS_DOMAIN = 4,
  EWATTS_STATUS_PANIC = 5,
} EwattsStatus;

// A parsed job, ready to run.
typedef struct EwattsJob EwattsJob;

// A coherent sheaf on the projective line.
typedef struct EwattsSheaf EwattsSheaf;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null if none. The
// pointer stays valid until the next failing call on the same thread.
const char *ewatts_last_error(void);

// Parses a sheaf literal such as `O(-1) + sky(t - 2, 1)`. The field is Q
// when `characteristic` is 0 and GF(p) otherwise. `seed` feeds `random`
// and `scramble(..)` terms.
//
// # Safety
// `text` must be a nul-terminated string and `out` a writable pointer.
enum EwattsStatus ewatts_sheaf_parse(uint64_t characteristic,
                                     const char *text,
                                     uint64_t seed,
                                     struct EwattsSheaf **out);

// # Safety
// `sheaf` must come from `ewatts_sheaf_parse` or be null.
void ewatts_sheaf_free(struct EwattsSheaf *sheaf);

// # Safety
// `sheaf` must be a live handle and `out` a writable pointer.
enum EwattsStatus ewatts_sheaf_h0(const struct EwattsSheaf *sheaf, uintptr_t *out);

// # Safety
// `sheaf` must be a live handle and `out` a writable pointer.
enum EwattsStatus ewatts_sheaf_h1(const struct EwattsSheaf *sheaf, uintptr_t *out);

// Writes the splitting type in the form `splitting: (1, -2)\ntorsion: none\n`.
// Release the string with `ewatts_string_free`.
//
// # Safety
// `sheaf` must be a live handle and `out` a writable pointer.
enum EwattsStatus ewatts_sheaf_classify(const struct EwattsSheaf *sheaf, char **out);

// Parses exactly one job in the command-line grammar, e.g.
// `field GF(5); cohomology O(3);`.
//
// # Safety
// `text` must be a nul-terminated string and `out` a writable pointer.
enum EwattsStatus ewatts_job_parse(const char *text, struct EwattsJob **out);

// # Safety
// `job` must come from `ewatts_job_parse` or be null.
void ewatts_job_free(struct EwattsJob *job);

// Canonical text of the job. Release with `ewatts_string_free`.
//
// # Safety
// `job` must be a live handle and `out` a writable pointer.
enum EwattsStatus ewatts_job_render(const struct EwattsJob *job, char **out);

// Runs the job and writes its report, as text lines or as one JSON object
// when `json` is true. Release with `ewatts_string_free`.
//
// # Safety
// `job` must be a live handle and `out` a writable pointer.
enum EwattsStatus ewatts_job_run(const struct EwattsJob *job, uint64_t seed, bool json, char **out);

// # Safety
// `s` must be a string returned by this library or null.
void ewatts_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EWATTS_H */
