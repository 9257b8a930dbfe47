#include "fmrlevy/complex_gamma.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace fmrlevy {

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoef = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

// log sin(πz) without overflow for large |Im z|. Any branch is acceptable; callers exponentiate.
std::complex<double> log_sin_pi(std::complex<double> z) {
  using namespace std::complex_literals;
  constexpr double pi = std::numbers::pi;
  if (z.imag() > 1.0) {
    return -1i * pi * z + std::log(0.5i) + std::log(1.0 - std::exp(2i * pi * z));
  }
  if (z.imag() < -1.0) {
    return 1i * pi * z + std::log(-0.5i) + std::log(1.0 - std::exp(-2i * pi * z));
  }
  return std::log(std::sin(pi * z));
}

}  // namespace

std::complex<double> log_gamma(std::complex<double> z) {
  constexpr double pi = std::numbers::pi;
  if (z.real() < 0.5) {
    // Γ(z)Γ(1-z) = π / sin(πz)
    return std::log(pi) - log_sin_pi(z) - log_gamma(1.0 - z);
  }
  const std::complex<double> zm1 = z - 1.0;
  std::complex<double> series = kLanczosCoef[0];
  for (std::size_t i = 1; i < kLanczosCoef.size(); ++i) {
    series += kLanczosCoef[i] / (zm1 + static_cast<double>(i));
  }
  const std::complex<double> t = zm1 + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * pi) + (zm1 + 0.5) * std::log(t) - t + std::log(series);
}

}  // namespace fmrlevy
