#include "fracpc/weights.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "fracpc/gamma.hpp"

namespace fracpc {

namespace {

using wide = long double;

// (m+1)^p - m^p. The expm1/log1p form avoids subtracting two nearly equal
// large powers; integer p stays on the exact power path.
wide forward_difference(wide m, wide p, bool integer_order) {
  if (m == 0.0L) return 1.0L;
  if (integer_order) return std::pow(m + 1.0L, p) - std::pow(m, p);
  return std::pow(m, p) * std::expm1(p * std::log1p(1.0L / m));
}

}  // namespace

template <class Real>
WeightTable<Real>::WeightTable(double alpha, std::size_t count) : alpha_(alpha) {
  if (!(alpha > 0.0) || alpha > 2.0) {
    throw std::invalid_argument("weights: unsupported order alpha=" + std::to_string(alpha) +
                                " (need 0 < alpha <= 2)");
  }
  if (count == 0) {
    throw std::invalid_argument("weights: step count must be >= 1");
  }

  const wide p = alpha;
  const wide q = p + 1.0L;
  const bool integer_order = (alpha == std::floor(alpha));
  const wide inv_g1 = 1.0L / lanczos_gamma(p + 1.0L);
  const wide inv_g2 = 1.0L / lanczos_gamma(p + 2.0L);
  inv_gamma_a1_ = static_cast<Real>(inv_g1);
  inv_gamma_a2_ = static_cast<Real>(inv_g2);

  const std::size_t len = count + 2;
  b_.resize(len);
  a_.resize(len);
  c_.resize(len);

  wide d_prev = forward_difference(0.0L, q, integer_order);
  for (std::size_t n = 0; n < len; ++n) {
    const wide x = static_cast<wide>(n);
    b_[n] = static_cast<Real>(forward_difference(x, p, integer_order) * inv_g1);

    const wide d_next = forward_difference(x + 1.0L, q, integer_order);
    a_[n] = static_cast<Real>((d_next - d_prev) * inv_g2);
    d_prev = d_next;

    // n^(a+1) - (n-a)(n+1)^a == n^a (a - (n-a) E), E = (1+1/n)^a - 1
    wide cn;
    if (n == 0) {
      cn = p;
    } else if (integer_order) {
      cn = std::pow(x, q) - (x - p) * std::pow(x + 1.0L, p);
    } else {
      const wide e = std::expm1(p * std::log1p(1.0L / x));
      cn = std::pow(x, p) * (p - (x - p) * e);
    }
    c_[n] = static_cast<Real>(cn * inv_g2);
  }

  rev_b_.assign(b_.rbegin(), b_.rend());
  rev_a_.assign(a_.rbegin(), a_.rend());
}

template class WeightTable<double>;
template class WeightTable<long double>;

}  // namespace fracpc
