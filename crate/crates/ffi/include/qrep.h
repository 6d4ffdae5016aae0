#ifndef QREP_H
#define QREP_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result of every fallible call.
 */
typedef enum {
  QREP_STATUS_OK = 0,
  /*
   A hypothesis or precondition failed (defect too large, not unitary, ...).
   */
  QREP_STATUS_PRECONDITION = 1,
  /*
   Branch cut, missing spectral gap or a singular determinant path.
   */
  QREP_STATUS_NUMERICAL = 2,
  /*
   Malformed matrix, word or JSON.
   */
  QREP_STATUS_INPUT = 3,
  QREP_STATUS_NULL_POINTER = 4,
  /*
   A string argument is not valid UTF-8.
   */
  QREP_STATUS_UTF8 = 5,
  /*
   Internal panic caught at the boundary.
   */
  QREP_STATUS_PANIC = 6,
} QrepStatus;

/*
 Dense square complex matrix.
 */
typedef struct QrepMatrix QrepMatrix;

/*
 Quasi-representation of a finitely presented group.
 */
typedef struct QrepQuasiRep QrepQuasiRep;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the last failed call on this thread, or NULL. The pointer
 stays valid until the next failing call on the same thread.
 */
const char *qrep_last_error_message(void);

/*
 Library version as a static NUL-terminated string.
 */
const char *qrep_version(void);

/*
 Build a `dim × dim` matrix from row-major real and imaginary parts.

 # Safety
 `re` and `im` must each point to `dim * dim` readable doubles; `out` must be writable.
 */
QrepStatus qrep_matrix_new(size_t dim, const double *re, const double *im, QrepMatrix **out);

/*
 # Safety
 `m` must be NULL or a handle returned by this library and not yet freed.
 */
void qrep_matrix_free(QrepMatrix *m);

/*
 Dimension of `m`, or 0 for NULL.

 # Safety
 `m` must be NULL or a live handle.
 */
size_t qrep_matrix_dim(const QrepMatrix *m);

/*
 Entry `(i, j)` of `m`.

 # Safety
 `m` must be a live handle; `re` and `im` must be writable.
 */
QrepStatus qrep_matrix_get(const QrepMatrix *m, size_t i, size_t j, double *re, double *im);

/*
 `κ(w)`, with the normalised trace when `normalized` is true. `rounded`
 receives the nearest integer (standard trace only) and may be NULL.

 # Safety
 `w` must be a live handle; `value` must be writable; `rounded` may be NULL.
 */
QrepStatus qrep_kappa(const QrepMatrix *w, bool normalized, double *value, int64_t *rounded);

/*
 Winding number of `t ↦ det((1-t)·1 + t·w)`.

 # Safety
 `w` must be a live handle; `value` and `rounded` must be writable.
 */
QrepStatus qrep_winding_number(const QrepMatrix *w, double *value, int64_t *rounded);

/*
 Bott pushforward `k(u, v)`; `defect` receives `|e² - e|` and may be NULL.

 # Safety
 `u`, `v` must be live handles; `k` must be writable; `defect` may be NULL.
 */
QrepStatus qrep_k_invariant(const QrepMatrix *u, const QrepMatrix *v, int64_t *k, double *defect);

/*
 `max_t |(1-t)·1 + t·w - exp(t·log w)|`.

 # Safety
 `w` must be a live handle; `gap` must be writable.
 */
QrepStatus qrep_exel_homotopy_gap(const QrepMatrix *w, double *gap);

/*
 Clock and shift unitaries of size `n`.

 # Safety
 `u` and `v` must be writable.
 */
QrepStatus qrep_voiculescu_pair(size_t n, QrepMatrix **u, QrepMatrix **v);

/*
 Parse a quasi-representation from its JSON form. File references in
 images resolve against the current directory.

 # Safety
 `json` must be a NUL-terminated string; `out` must be writable.
 */
QrepStatus qrep_quasirep_from_json(const char *json, QrepQuasiRep **out);

/*
 Clock/shift quasi-representation of ℤ² of size `n`.

 # Safety
 `out` must be writable.
 */
QrepStatus qrep_quasirep_voiculescu(size_t n, QrepQuasiRep **out);

/*
 # Safety
 `q` must be NULL or a live handle.
 */
void qrep_quasirep_free(QrepQuasiRep *q);

/*
 Letter-by-letter image of `word` under `q`.

 # Safety
 `q` must be a live handle, `word` a NUL-terminated string and `out` writable.
 */
QrepStatus qrep_evaluate_word(const QrepQuasiRep *q, const char *word, QrepMatrix **out);

/*
 JSON form of `q`, or NULL on failure. Release with [`qrep_string_free`].

 # Safety
 `q` must be NULL or a live handle.
 */
char *qrep_quasirep_to_json(const QrepQuasiRep *q);

/*
 # Safety
 `s` must be NULL or a string returned by this library and not yet freed.
 */
void qrep_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QREP_H */
