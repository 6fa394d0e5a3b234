#pragma once

namespace fracpc {

/// Lanczos approximation (g = 7, 9 terms) of the gamma function, evaluated in
/// long double. Relative error is below 1e-14 on (0, 4], which is the only
/// range the weight tables need (Gamma(alpha + 1), Gamma(alpha + 2)).
/// Uses the reflection formula for x < 0.5. Throws std::domain_error at poles.
long double lanczos_gamma(long double x);

}  // namespace fracpc
