#pragma once

// History-sum kernels.
//
// Every step of the scheme needs, per component j, the two convolutions
//
//   sp_j = sum_i wb[i] * f_j[i]        (predictor)
//   sc_j = sum_i wa[i] * f_j[i]        (corrector)
//
// over a contiguous index window, with the weights pre-reversed so both
// operands are walked forwards. This is the O(N^2) part of a solve.
//
// Components that share an order share a weight table, so the kernels take
// several history rows at once and load each weight once. Each row's result
// depends only on that row's data: fusing rows never changes a bit of the
// output.

#include <cstddef>
#include <string_view>

namespace fracpc::kernels {

enum class Isa { scalar, avx2, neon };

/// Rows fused per kernel call.
inline constexpr std::size_t kMaxFusedRows = 2;

using DualDotFn = void (*)(const double* wb, const double* wa, const double* const* rows,
                           std::size_t row_count, std::size_t len, double* sp, double* sc);

// Reference kernel: one accumulator per sum, strictly left to right.
template <class Real>
void dual_dot_scalar(const Real* wb, const Real* wa, const Real* const* rows,
                     std::size_t row_count, std::size_t len, Real* sp, Real* sc) {
  for (std::size_t j = 0; j < row_count; ++j) {
    const Real* f = rows[j];
    Real accp = 0;
    Real accc = 0;
    for (std::size_t i = 0; i < len; ++i) {
      accp += wb[i] * f[i];
      accc += wa[i] * f[i];
    }
    sp[j] = accp;
    sc[j] = accc;
  }
}

void dual_dot_avx2(const double* wb, const double* wa, const double* const* rows,
                   std::size_t row_count, std::size_t len, double* sp, double* sc);
void dual_dot_neon(const double* wb, const double* wa, const double* const* rows,
                   std::size_t row_count, std::size_t len, double* sp, double* sc);

/// True when the variant was compiled in and the CPU can run it.
bool supported(Isa isa) noexcept;
Isa best_supported() noexcept;
std::string_view name(Isa isa) noexcept;
/// Parses "scalar" | "avx2" | "neon"; throws std::invalid_argument otherwise.
Isa parse_isa(std::string_view text);

/// The variant used by the solvers for 64-bit runs. Defaults to
/// best_supported(), or to $FRACPC_ISA when set.
Isa active() noexcept;
/// Throws std::invalid_argument when the variant is not supported here.
void set_active(Isa isa);
DualDotFn resolve(Isa isa);

inline void dual_dot(const double* wb, const double* wa, const double* const* rows,
                     std::size_t row_count, std::size_t len, double* sp, double* sc) {
  resolve(active())(wb, wa, rows, row_count, len, sp, sc);
}

// No vector path for extended precision.
inline void dual_dot(const long double* wb, const long double* wa, const long double* const* rows,
                     std::size_t row_count, std::size_t len, long double* sp, long double* sc) {
  dual_dot_scalar(wb, wa, rows, row_count, len, sp, sc);
}

}  // namespace fracpc::kernels
