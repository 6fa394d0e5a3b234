// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include "fracpc/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>

namespace fracpc::kernels {

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const double l0 = _mm_cvtsd_f64(lo);
  const double l1 = _mm_cvtsd_f64(_mm_unpackhi_pd(lo, lo));
  const double l2 = _mm_cvtsd_f64(hi);
  const double l3 = _mm_cvtsd_f64(_mm_unpackhi_pd(hi, hi));
  return (l0 + l1) + (l2 + l3);
}

// Per row: two 4-lane accumulator pairs over blocks of 8, one 4-wide tail
// block, lanes folded pairwise, then the last < 4 terms in order.
template <std::size_t Rows>
void dual_dot_rows(const double* wb, const double* wa, const double* const* rows,
                   std::size_t len, double* sp, double* sc) {
  __m256d p0[Rows], p1[Rows], c0[Rows], c1[Rows];
  for (std::size_t j = 0; j < Rows; ++j) {
    p0[j] = p1[j] = c0[j] = c1[j] = _mm256_setzero_pd();
  }

  std::size_t i = 0;
  for (; i + 8 <= len; i += 8) {
    const __m256d b0 = _mm256_loadu_pd(wb + i);
    const __m256d b1 = _mm256_loadu_pd(wb + i + 4);
    const __m256d a0 = _mm256_loadu_pd(wa + i);
    const __m256d a1 = _mm256_loadu_pd(wa + i + 4);
    for (std::size_t j = 0; j < Rows; ++j) {
      const __m256d f0 = _mm256_loadu_pd(rows[j] + i);
      const __m256d f1 = _mm256_loadu_pd(rows[j] + i + 4);
      p0[j] = _mm256_fmadd_pd(b0, f0, p0[j]);
      p1[j] = _mm256_fmadd_pd(b1, f1, p1[j]);
      c0[j] = _mm256_fmadd_pd(a0, f0, c0[j]);
      c1[j] = _mm256_fmadd_pd(a1, f1, c1[j]);
    }
  }
  if (i + 4 <= len) {
    const __m256d b0 = _mm256_loadu_pd(wb + i);
    const __m256d a0 = _mm256_loadu_pd(wa + i);
    for (std::size_t j = 0; j < Rows; ++j) {
      const __m256d f0 = _mm256_loadu_pd(rows[j] + i);
      p0[j] = _mm256_fmadd_pd(b0, f0, p0[j]);
      c0[j] = _mm256_fmadd_pd(a0, f0, c0[j]);
    }
    i += 4;
  }
  for (std::size_t j = 0; j < Rows; ++j) {
    double accp = hsum(_mm256_add_pd(p0[j], p1[j]));
    double accc = hsum(_mm256_add_pd(c0[j], c1[j]));
    for (std::size_t k = i; k < len; ++k) {
      accp += wb[k] * rows[j][k];
      accc += wa[k] * rows[j][k];
    }
    sp[j] = accp;
    sc[j] = accc;
  }
}

}  // namespace

void dual_dot_avx2(const double* wb, const double* wa, const double* const* rows,
                   std::size_t row_count, std::size_t len, double* sp, double* sc) {
  std::size_t j = 0;
  for (; j + 2 <= row_count; j += 2) {
    dual_dot_rows<2>(wb, wa, rows + j, len, sp + j, sc + j);
  }
  if (j < row_count) {
    dual_dot_rows<1>(wb, wa, rows + j, len, sp + j, sc + j);
  }
}

}  // namespace fracpc::kernels

#else

namespace fracpc::kernels {
void dual_dot_avx2(const double* wb, const double* wa, const double* const* rows,
                   std::size_t row_count, std::size_t len, double* sp, double* sc) {
  dual_dot_scalar(wb, wa, rows, row_count, len, sp, sc);
}
}  // namespace fracpc::kernels

#endif
