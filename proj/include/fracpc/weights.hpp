#pragma once

#include <cstddef>
#include <vector>

namespace fracpc {

/// Predictor/corrector coefficient sequences of the fractional
/// Adams-Bashforth-Moulton scheme for one order alpha, indices 0..count+1.
///
///   b_n = ((n+1)^a - n^a) / G(a+1)
///   a_n = ((n+2)^(a+1) - 2 (n+1)^(a+1) + n^(a+1)) / G(a+2)
///   c_n = (n^(a+1) - (n-a)(n+1)^a) / G(a+2)
///
/// Everything is evaluated in long double and narrowed to Real. The reversed
/// copies let the history kernels walk weights and rhs values in the same
/// direction: b[n-k] == reversed_b()[size()-1-n+k].
///
/// Immutable once built; share freely between threads.
template <class Real>
class WeightTable {
 public:
  WeightTable(double alpha, std::size_t count);

  double alpha() const noexcept { return alpha_; }
  std::size_t size() const noexcept { return b_.size(); }

  Real b(std::size_t n) const { return b_[n]; }
  Real a(std::size_t n) const { return a_[n]; }
  Real c(std::size_t n) const { return c_[n]; }

  const std::vector<Real>& b() const noexcept { return b_; }
  const std::vector<Real>& a() const noexcept { return a_; }
  const std::vector<Real>& c() const noexcept { return c_; }
  const std::vector<Real>& reversed_b() const noexcept { return rev_b_; }
  const std::vector<Real>& reversed_a() const noexcept { return rev_a_; }

  Real inv_gamma_a1() const noexcept { return inv_gamma_a1_; }
  Real inv_gamma_a2() const noexcept { return inv_gamma_a2_; }

 private:
  double alpha_;
  std::vector<Real> b_, a_, c_;
  std::vector<Real> rev_b_, rev_a_;
  Real inv_gamma_a1_;
  Real inv_gamma_a2_;
};

template <class Real>
WeightTable<Real> build_weights(double alpha, std::size_t count) {
  return WeightTable<Real>(alpha, count);
}

extern template class WeightTable<double>;
extern template class WeightTable<long double>;

}  // namespace fracpc
