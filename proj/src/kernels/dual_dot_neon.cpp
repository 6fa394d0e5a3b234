#include "fracpc/kernels.hpp"

#if defined(__aarch64__)
#include <arm_neon.h>

namespace fracpc::kernels {

namespace {

// Same block structure as the AVX2 kernel with 2-lane registers: blocks of
// 4 into two accumulator pairs, one 2-wide tail block, then scalar rest.
template <std::size_t Rows>
void dual_dot_rows(const double* wb, const double* wa, const double* const* rows,
                   std::size_t len, double* sp, double* sc) {
  float64x2_t p0[Rows], p1[Rows], c0[Rows], c1[Rows];
  for (std::size_t j = 0; j < Rows; ++j) {
    p0[j] = p1[j] = c0[j] = c1[j] = vdupq_n_f64(0.0);
  }

  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    const float64x2_t b0 = vld1q_f64(wb + i);
    const float64x2_t b1 = vld1q_f64(wb + i + 2);
    const float64x2_t a0 = vld1q_f64(wa + i);
    const float64x2_t a1 = vld1q_f64(wa + i + 2);
    for (std::size_t j = 0; j < Rows; ++j) {
      const float64x2_t f0 = vld1q_f64(rows[j] + i);
      const float64x2_t f1 = vld1q_f64(rows[j] + i + 2);
      p0[j] = vfmaq_f64(p0[j], b0, f0);
      p1[j] = vfmaq_f64(p1[j], b1, f1);
      c0[j] = vfmaq_f64(c0[j], a0, f0);
      c1[j] = vfmaq_f64(c1[j], a1, f1);
    }
  }
  if (i + 2 <= len) {
    const float64x2_t b0 = vld1q_f64(wb + i);
    const float64x2_t a0 = vld1q_f64(wa + i);
    for (std::size_t j = 0; j < Rows; ++j) {
      const float64x2_t f0 = vld1q_f64(rows[j] + i);
      p0[j] = vfmaq_f64(p0[j], b0, f0);
      c0[j] = vfmaq_f64(c0[j], a0, f0);
    }
    i += 2;
  }
  for (std::size_t j = 0; j < Rows; ++j) {
    const float64x2_t p = vaddq_f64(p0[j], p1[j]);
    const float64x2_t c = vaddq_f64(c0[j], c1[j]);
    double accp = vgetq_lane_f64(p, 0) + vgetq_lane_f64(p, 1);
    double accc = vgetq_lane_f64(c, 0) + vgetq_lane_f64(c, 1);
    for (std::size_t k = i; k < len; ++k) {
      accp += wb[k] * rows[j][k];
      accc += wa[k] * rows[j][k];
    }
    sp[j] = accp;
    sc[j] = accc;
  }
}

}  // namespace

void dual_dot_neon(const double* wb, const double* wa, const double* const* rows,
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
void dual_dot_neon(const double* wb, const double* wa, const double* const* rows,
                   std::size_t row_count, std::size_t len, double* sp, double* sc) {
  dual_dot_scalar(wb, wa, rows, row_count, len, sp, sc);
}
}  // namespace fracpc::kernels

#endif
