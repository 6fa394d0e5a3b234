#include "fracpc/gamma.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fracpc {

namespace {

constexpr long double kLanczosG = 7.0L;
constexpr std::array<long double, 9> kLanczosCoef = {
    0.99999999999980993227684700473478L,  676.520368121885098567009190444019L,
    -1259.13921672240287047156078755283L, 771.3234287776530788486528258894L,
    -176.615029162140599065845513540L,    12.507343278686904814458936853L,
    -0.13857109526572011689554707L,       9.984369578019570859563e-6L,
    1.50563273514931155834e-7L};

}  // namespace

long double lanczos_gamma(long double x) {
  constexpr long double pi = std::numbers::pi_v<long double>;
  if (x <= 0.0L && x == std::floor(x)) {
    throw std::domain_error("gamma: pole at non-positive integer");
  }
  if (x < 0.5L) {
    return pi / (std::sin(pi * x) * lanczos_gamma(1.0L - x));
  }
  x -= 1.0L;
  long double acc = kLanczosCoef[0];
  for (std::size_t i = 1; i < kLanczosCoef.size(); ++i) {
    acc += kLanczosCoef[i] / (x + static_cast<long double>(i));
  }
  const long double t = x + kLanczosG + 0.5L;
  return std::sqrt(2.0L * pi) * std::pow(t, x + 0.5L) * std::exp(-t) * acc;
}

}  // namespace fracpc
