#pragma once

#include <complex>

namespace fmrlevy {

/// A continuous branch of log Γ(z) via the Lanczos approximation (g = 7, 9 terms),
/// with reflection for Re(z) < 1/2. Relative accuracy ~1e-13 away from the poles.
std::complex<double> log_gamma(std::complex<double> z);

inline std::complex<double> gamma(std::complex<double> z) { return std::exp(log_gamma(z)); }

}  // namespace fmrlevy
