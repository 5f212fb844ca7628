#ifndef FUGLEDE_H
#define FUGLEDE_H

/* C interface to the fuglede library: exact spectral and tiling analysis of
 * compact open subsets of Q_p and of subsets of Z/p^M.
 *
 * Every function returns an fgl_status. On failure the message for the
 * calling thread is available from fgl_last_error_message(). Objects are
 * opaque handles released with their matching destroy function; strings
 * returned through char** are released with fgl_string_free. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(FGL_BUILDING_LIBRARY)
#    define FGL_API __declspec(dllexport)
#  else
#    define FGL_API __declspec(dllimport)
#  endif
#else
#  define FGL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fgl_status {
  FGL_OK = 0,
  FGL_INVALID_ARGUMENT = 1,
  FGL_NOT_PRIME = 2,
  FGL_EMPTY_SET = 3,
  FGL_NOT_VANISHING = 4,
  FGL_NOT_INDICATOR = 5,
  FGL_CONSTRUCTION_FAILED = 6,
  FGL_SCOPE_TOO_LARGE = 7,
  FGL_WINDOW_TOO_SMALL = 8,
  FGL_NOT_A_SPECTRUM_EVIDENCE = 9,
  FGL_NON_REPRESENTABLE = 10,
  FGL_OVERFLOW = 11,
  FGL_PARSE_ERROR = 12,
  FGL_IO_ERROR = 13,
  FGL_INTERNAL_ERROR = 14
} fgl_status;

/* A compact open set p^v (C + p^M Z_p), kept in canonical form. */
typedef struct fgl_set fgl_set;

/* Outcome of fgl_execute: exit code, output document and diagnostics. */
typedef struct fgl_result fgl_result;

FGL_API const char* fgl_version(void);
FGL_API const char* fgl_status_name(fgl_status status);
FGL_API const char* fgl_last_error_message(void);
FGL_API void fgl_string_free(char* s);

FGL_API fgl_status fgl_set_create(int64_t p, int64_t v, int64_t M, const int64_t* digits, size_t count,
                                  fgl_set** out);
/* {"p": int, "v": int, "M": int, "digits": [int, ...]} */
FGL_API fgl_status fgl_set_from_json(const char* json, fgl_set** out);
FGL_API void fgl_set_destroy(fgl_set* set);

FGL_API fgl_status fgl_set_to_json(const fgl_set* set, char** out);
FGL_API fgl_status fgl_set_frame(const fgl_set* set, int64_t* p, int64_t* v, int64_t* M, size_t* digit_count);
FGL_API fgl_status fgl_set_digits(const fgl_set* set, int64_t* digits, size_t capacity);
/* Haar measure as "num/den". */
FGL_API fgl_status fgl_set_measure(const fgl_set* set, char** out);
FGL_API fgl_status fgl_set_contains(const fgl_set* set, const char* x, int* contained);

/* Decisions on the digit set of the canonical frame. */
FGL_API fgl_status fgl_set_is_tile(const fgl_set* set, int* is_tile);
FGL_API fgl_status fgl_set_is_spectral(const fgl_set* set, int* is_spectral);
/* Writes up to `capacity` branching levels; *level_count receives the total. */
FGL_API fgl_status fgl_set_homogeneity(const fgl_set* set, int* homogeneous, int64_t* levels, size_t capacity,
                                       size_t* level_count);

/* Runs a named command (normalize, measure, fourier, autocorr, homogeneity,
 * is-tile, is-spectral, make-spectrum, make-complement, verify-tiling,
 * verify-spectral, spectrum-to-tiling, scan-zeros, density, classify,
 * gallery) on a JSON request. Returns FGL_OK whenever a result was produced;
 * the command's own outcome is in fgl_result_exit_code. */
FGL_API fgl_status fgl_execute(const char* command, const char* request_json, fgl_result** out);
FGL_API int fgl_result_exit_code(const fgl_result* result);
FGL_API const char* fgl_result_output(const fgl_result* result);
FGL_API const char* fgl_result_diagnostics(const fgl_result* result);
FGL_API void fgl_result_destroy(fgl_result* result);

#ifdef __cplusplus
}
#endif

#endif
