#ifndef TANDEM_H
#define TANDEM_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum TdcStatus {
  TDC_STATUS_OK = 0,
  TDC_STATUS_INVALID_ARGUMENT = 1,
  TDC_STATUS_PARSE = 2,
  TDC_STATUS_BUDGET = 3,
  TDC_STATUS_DECODE = 4,
  TDC_STATUS_INCOMPATIBLE = 5,
  /**
   * The word has several roots.
   */
  TDC_STATUS_NOT_UNIQUE = 6,
  /**
   * The output buffer is too small; the required length is still reported.
   */
  TDC_STATUS_BUFFER_TOO_SMALL = 7,
  TDC_STATUS_NULL_POINTER = 8,
  TDC_STATUS_PANIC = 9,
} TdcStatus;

typedef enum TdcMode {
  TDC_MODE_FIXED_ALL = 0,
  TDC_MODE_FIXED_T = 1,
  TDC_MODE_LE2 = 2,
  TDC_MODE_LE3 = 3,
} TdcMode;

/**
 * Opaque codebook handle.
 */
typedef struct TdcCodebook TdcCodebook;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The message of the last failed call on this thread, or an empty string.
 * The pointer stays valid until the next call on the same thread.
 */
const char *tdc_last_error_message(void);

/**
 * Builds a codebook. `mode` is a [`TdcMode`] value; `k` is ignored by the
 * bounded modes and `t` by all but [`TdcMode::FixedT`]. Free the handle
 * with [`tdc_codebook_free`].
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum TdcStatus tdc_codebook_build(uint32_t q,
                                  size_t n,
                                  uint32_t mode,
                                  size_t k,
                                  size_t t,
                                  struct TdcCodebook **out);

/**
 * # Safety
 * `code` is null or a handle from [`tdc_codebook_build`] not yet freed.
 */
void tdc_codebook_free(struct TdcCodebook *code);

/**
 * Number of codewords, or 0 for a null handle.
 *
 * # Safety
 * `code` is null or a live handle.
 */
size_t tdc_codebook_size(const struct TdcCodebook *code);

/**
 * Codeword length `n`, or 0 for a null handle.
 *
 * # Safety
 * `code` is null or a live handle.
 */
size_t tdc_codebook_length(const struct TdcCodebook *code);

/**
 * Copies codeword `index` (in lexicographic order) into `out`.
 *
 * # Safety
 * `code` is a live handle, `out` has room for `cap` symbols and `out_len` is writable.
 */
enum TdcStatus tdc_codebook_codeword(const struct TdcCodebook *code,
                                     size_t index,
                                     uint32_t *out,
                                     size_t cap,
                                     size_t *out_len);

/**
 * Decodes a received word into `out`.
 *
 * # Safety
 * `received` holds `len` symbols, `out` has room for `cap` symbols and `out_len` is writable.
 */
enum TdcStatus tdc_codebook_decode(const struct TdcCodebook *code,
                                   const uint32_t *received,
                                   size_t len,
                                   uint32_t *out,
                                   size_t cap,
                                   size_t *out_len);

/**
 * The root of a word under the given duplication lengths, when it is
 * unique; [`TdcStatus::NotUnique`] otherwise.
 *
 * # Safety
 * `word` holds `len` symbols, `lengths` holds `count` values, `out` has
 * room for `cap` symbols and `out_len` is writable.
 */
enum TdcStatus tdc_root_unique(uint32_t q,
                               const size_t *lengths,
                               size_t count,
                               const uint32_t *word,
                               size_t len,
                               uint32_t *out,
                               size_t cap,
                               size_t *out_len);

/**
 * Base-`q` capacity of the RLL system with zero runs of length at most `d`.
 *
 * # Safety
 * `out` is writable.
 */
enum TdcStatus tdc_rll_capacity(uint32_t q, size_t d, double tol, double *out);

/**
 * Base-`q` capacity of the words with no square of half-length at most
 * `k_bound` (1, 2 or 3).
 *
 * # Safety
 * `out` is writable.
 */
enum TdcStatus tdc_irr_capacity(uint32_t q, size_t k_bound, double tol, double *out);

/**
 * Whether every word over `sigma` letters has a unique root under the
 * lengths. When not, a word with several roots is written to `witness`
 * and its length to `witness_len`; otherwise `witness_len` is set to 0.
 *
 * # Safety
 * `lengths` holds `count` values, `unique` and `witness_len` are writable
 * and `witness` has room for `cap` symbols.
 */
enum TdcStatus tdc_classify(uint32_t sigma,
                            const size_t *lengths,
                            size_t count,
                            bool *unique,
                            uint32_t *witness,
                            size_t cap,
                            size_t *witness_len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TANDEM_H */
