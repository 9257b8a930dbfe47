#pragma once

// Folded composite Simpson rule along Im(λ) = const shared by the u₀, u₁ and
// u₀,₁ integrals. Not part of the public API.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "fmrlevy/errors.hpp"
#include "fmrlevy/pricing.hpp"

namespace fmrlevy::detail {

using cplx = std::complex<double>;

template <std::size_t N>
struct ContourIntegral {
  std::array<double, N> value{};
  double imag_residue = 0.0;
  double L = 0.0;
  int n = 0;
};

inline constexpr int kMaxSimpsonIntervals = 1 << 21;
inline constexpr double kMaxTruncation = 1e8;

inline double default_truncation(const ModelParams& theta, double t) {
  const double var = std::max(theta.sig2_bar, kMinPricingVariance);
  return std::max(std::sqrt(2.0 * 28.0 / (var * t)), 200.0);
}

/// e^{tφ_λ} ĥ(λ) e^{iλx} / √(2π), assembled in the exponent to avoid overflow.
inline cplx base_integrand(const ModelParams& theta, const OptionSpec& spec, cplx lambda) {
  using namespace std::complex_literals;
  const cplx exponent = spec.t * phi(theta, lambda) + spec.k - 1i * spec.k * lambda + 1i * lambda * spec.x;
  return -std::exp(exponent) / (2.0 * std::numbers::pi * (1i * lambda + lambda * lambda));
}

/// Integrates Re ∫_{-L}^{L} base(λ)·w_j(λ) dλ_r for each multiplier w_j
/// returned by `weights(λ)` (an std::array<cplx, N>).
template <std::size_t N, class Weights>
ContourIntegral<N> integrate_contour(const ModelParams& theta, const OptionSpec& spec, const Contour& contour,
                                     Weights&& weights) {
  using namespace std::complex_literals;
  const double li = contour.lambda_i;
  auto eval = [&](double lr) {
    const cplx lambda{lr, li};
    const cplx base = base_integrand(theta, spec, lambda);
    std::array<cplx, N> w = weights(lambda);
    for (auto& v : w) v *= base;
    return w;
  };

  ContourIntegral<N> out;
  double L = contour.L > 0.0 ? contour.L : default_truncation(theta, spec.t);
  const double peak = std::abs(base_integrand(theta, spec, cplx{0.0, li}));
  if (!(peak > 0.0) || !std::isfinite(peak)) {
    throw NumericError("contour quadrature: integrand magnitude at Re(lambda) = 0 is not finite and positive");
  }

  auto tail_ratio = [&](double at) {
    double worst = 0.0;
    for (const auto& v : eval(at)) worst = std::max(worst, std::abs(v));
    return worst / peak;
  };
  if (!contour.adaptive && !(tail_ratio(L) < 1e-10)) {
    std::ostringstream msg;
    msg << "contour quadrature: integrand not negligible at the fixed truncation L = " << L << "; increase L";
    throw NumericError(msg.str());
  }
  if (contour.adaptive) {
    for (;;) {
      if (tail_ratio(L) < 1e-12) break;
      L *= 2.0;
      if (L > kMaxTruncation) {
        std::ostringstream msg;
        msg << "contour quadrature: integrand not negligible at L = " << L / 2 << "; increase L beyond it";
        throw NumericError(msg.str());
      }
    }
  }

  int n = contour.n;
  double h = L / n;
  std::array<cplx, N> ends{}, interior{}, odd{}, even{};
  std::array<double, N> l1{};
  {
    const auto f0 = eval(0.0);
    const auto fn = eval(L);
    for (std::size_t j = 0; j < N; ++j) ends[j] = f0[j] + fn[j];
    // The mirror nodes feed only the symmetry diagnostic.
    std::array<cplx, N> mirror_ends{}, mirror_odd{}, mirror_even{};
    const auto gn = eval(-L);
    for (std::size_t j = 0; j < N; ++j) mirror_ends[j] = f0[j] + gn[j];
    for (int m = 1; m < n; ++m) {
      const auto f = eval(m * h);
      const auto g = eval(-m * h);
      for (std::size_t j = 0; j < N; ++j) {
        (m % 2 ? odd : even)[j] += f[j];
        (m % 2 ? mirror_odd : mirror_even)[j] += g[j];
      }
    }
    for (std::size_t j = 0; j < N; ++j) {
      interior[j] = odd[j] + even[j];
      const cplx full = h / 3.0 * (ends[j] + mirror_ends[j] + 4.0 * (odd[j] + mirror_odd[j]) +
                                   2.0 * (even[j] + mirror_even[j]));
      out.imag_residue = std::max(out.imag_residue, std::abs(full.imag()));
    }
  }

  auto simpson = [&](const std::array<cplx, N>& o, const std::array<cplx, N>& e, double step) {
    std::array<double, N> s{};
    for (std::size_t j = 0; j < N; ++j) s[j] = 2.0 * (step / 3.0 * (ends[j] + 4.0 * o[j] + 2.0 * e[j])).real();
    return s;
  };
  std::array<double, N> current = simpson(odd, even, h);

  if (contour.adaptive) {
    for (;;) {
      if (2 * n > kMaxSimpsonIntervals) {
        std::ostringstream msg;
        msg << "contour quadrature: no convergence with n = " << n << " at L = " << L
            << "; retry with a larger n or a contour nearer the saddle point";
        throw NumericError(msg.str());
      }
      std::array<cplx, N> mid{};
      l1.fill(0.0);
      const double half = 0.5 * h;
      for (int m = 0; m < n; ++m) {
        const auto f = eval((2 * m + 1) * half);
        for (std::size_t j = 0; j < N; ++j) {
          mid[j] += f[j];
          l1[j] += std::abs(f[j]);
        }
      }
      n *= 2;
      h = half;
      const std::array<double, N> next = simpson(mid, interior, h);
      for (std::size_t j = 0; j < N; ++j) interior[j] += mid[j];

      bool converged = true;
      for (std::size_t j = 0; j < N; ++j) {
        const double tol = std::max(1e-10 * std::abs(next[j]), 1e-13 * 4.0 * l1[j] * h);
        if (!(std::abs(next[j] - current[j]) <= tol)) converged = false;
      }
      current = next;
      if (converged) break;
    }
  }

  for (std::size_t j = 0; j < N; ++j) {
    if (!std::isfinite(current[j])) throw NumericError("contour quadrature: non-finite result");
  }
  out.value = current;
  out.L = L;
  out.n = n;
  return out;
}

}  // namespace fmrlevy::detail
