#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "fracpc/kernels.hpp"

namespace fracpc::kernels {

namespace {

void scalar_entry(const double* wb, const double* wa, const double* const* rows,
                  std::size_t row_count, std::size_t len, double* sp, double* sc) {
  dual_dot_scalar(wb, wa, rows, row_count, len, sp, sc);
}

Isa initial_isa() noexcept {
  if (const char* env = std::getenv("FRACPC_ISA")) {
    try {
      const Isa requested = parse_isa(env);
      if (supported(requested)) return requested;
    } catch (const std::invalid_argument&) {
    }
  }
  return best_supported();
}

std::atomic<Isa>& active_slot() noexcept {
  static std::atomic<Isa> slot{initial_isa()};
  return slot;
}

}  // namespace

bool supported(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::neon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Isa best_supported() noexcept {
  if (supported(Isa::avx2)) return Isa::avx2;
  if (supported(Isa::neon)) return Isa::neon;
  return Isa::scalar;
}

std::string_view name(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
    case Isa::neon:
      return "neon";
  }
  return "unknown";
}

Isa parse_isa(std::string_view text) {
  if (text == "scalar") return Isa::scalar;
  if (text == "avx2") return Isa::avx2;
  if (text == "neon") return Isa::neon;
  throw std::invalid_argument("unknown kernel isa '" + std::string(text) + "'");
}

Isa active() noexcept { return active_slot().load(std::memory_order_relaxed); }

void set_active(Isa isa) {
  if (!supported(isa)) {
    throw std::invalid_argument("kernel isa '" + std::string(name(isa)) +
                                "' is not supported on this host");
  }
  active_slot().store(isa, std::memory_order_relaxed);
}

DualDotFn resolve(Isa isa) {
  switch (isa) {
    case Isa::avx2:
      return &dual_dot_avx2;
    case Isa::neon:
      return &dual_dot_neon;
    case Isa::scalar:
      break;
  }
  return &scalar_entry;
}

}  // namespace fracpc::kernels
