#pragma once

// Reference computations used only by the tests. Each one evaluates the
// quantity from its definition with a general-purpose quadrature instead of
// the closed forms the library relies on.

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "fmrlevy/levy_measure.hpp"
#include "fmrlevy/multiscale.hpp"
#include "fmrlevy/pricing.hpp"

namespace oracle {

using cplx = std::complex<double>;
using namespace std::complex_literals;

template <class F>
cplx integrate(F&& f, double a, double b, double tol = 1e-13) {
  using boost::math::quadrature::gauss_kronrod;
  const double re = gauss_kronrod<double, 61>::integrate([&](double z) { return f(z).real(); }, a, b, 12, tol);
  const double im = gauss_kronrod<double, 61>::integrate([&](double z) { return f(z).imag(); }, a, b, 12, tol);
  return {re, im};
}

template <class F>
cplx integrate_half_line(F&& f, double tol = 1e-13) {
  boost::math::quadrature::exp_sinh<double> rule;
  const double re = rule.integrate([&](double z) { return f(z).real(); }, 0.0, std::numeric_limits<double>::infinity(), tol);
  const double im = rule.integrate([&](double z) { return f(z).imag(); }, 0.0, std::numeric_limits<double>::infinity(), tol);
  return {re, im};
}

inline cplx compensated(cplx lambda, double z) { return std::exp(1i * lambda * z) - 1.0 - 1i * lambda * z; }

/// ∫ (e^{iλz} - 1 - iλz) ν(dz) against the density of ν.
inline cplx char_integral(const fmrlevy::LevyMeasure& measure, cplx lambda) {
  using namespace fmrlevy;
  if (auto* j = std::get_if<MertonJumps>(&measure)) {
    if (j->s == 0.0) return compensated(lambda, j->m);
    const double s = j->s;
    auto f = [&](double w) {  // w = (z - m)/s, standard normal weight
      return compensated(lambda, j->m + s * w) * std::exp(-0.5 * w * w) / std::sqrt(2.0 * std::numbers::pi);
    };
    return integrate(f, -40.0, 0.0) + integrate(f, 0.0, 40.0);
  }
  if (auto* j = std::get_if<GumbelJumps>(&measure)) {
    auto f = [&](double w) {  // w = (z - m)/σ, density e^{w - e^w}
      return compensated(lambda, j->m + j->sigma * w) * std::exp(w - std::exp(w));
    };
    return integrate(f, -400.0, -20.0) + integrate(f, -20.0, 0.0) + integrate(f, 0.0, 5.0);
  }
  if (auto* j = std::get_if<DiracJumps>(&measure)) return compensated(lambda, j->a);
  if (auto* j = std::get_if<UniformJumps>(&measure)) {
    return integrate([&](double z) { return compensated(lambda, z) / (j->b - j->a); }, j->a, j->b);
  }
  const auto& v = std::get<VarianceGammaJumps>(measure);
  // (e^{iλz} - 1 - iλz) e^{-rz} / z with the exponentials combined, so the far
  // tail is not inf * 0, and a series where the compensator cancels.
  auto weighted = [](cplx il, double rate, double z) -> cplx {
    const cplx u = il * z;
    if (std::abs(u) < 1e-3) return u * u * (0.5 + u * (1.0 / 6 + u / 24.0)) * std::exp(-rate * z) / z;
    return (std::exp(u - rate * z) - (1.0 + u) * std::exp(-rate * z)) / z;
  };
  const cplx up = integrate_half_line([&](double z) { return weighted(1i * lambda, v.a, z); });
  const cplx down = integrate_half_line([&](double z) { return v.B * weighted(-1i * lambda, v.b, z); });
  return up + down;
}

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

inline double black_scholes_call(double spot, double strike, double t, double sigma) {
  const double sd = sigma * std::sqrt(t);
  const double d1 = std::log(spot / strike) / sd + 0.5 * sd;
  return spot * normal_cdf(d1) - strike * normal_cdf(d1 - sd);
}

/// (1/√2π) ∫ e^{-iλx} (e^x - e^k)⁺ dx for Im λ < -1, truncated at x = k + 40.
inline cplx call_transform(double k, cplx lambda) {
  const cplx v = integrate([&](double x) { return std::exp(-1i * lambda * x) * (std::exp(x) - std::exp(k)); }, k,
                           k + 40.0, 1e-14);
  return v / std::sqrt(2.0 * std::numbers::pi);
}

/// Slow-factor quantities behind SlowParams, kept separate so the oracle can
/// apply ⟨M₁⟩ literally.
struct SlowFactor {
  double g = 0.0;
  double gamma_avg = 0.0;
  double rho_xz = 0.0;
  double sigma_avg = 0.0;
  double dsig2_dz = 0.0;
  double dzeta_dz = 0.0;
  double delta = 1.0;
};

/// δ·u₀,₁ as the literal double integral
///   (1/√2π) ∫ dλ_r e^{iλx} ∫₀ᵗ ds e^{(t-s)φ_λ} v̂(s, λ),
/// with v̂ the transform of ⟨M₁⟩u₀,₀: (-g⟨Γ⟩ + g ρ_xz ⟨σ⟩ iλ) ∂_z[e^{sφ_λ}] ĥ(λ).
/// ∂_zφ is taken by differencing φ in the z-dependent averages; φ is affine in
/// both, so the difference is exact up to rounding. The time integral uses
/// composite Simpson with 200 intervals; the λ_r integral Gauss–Kronrod.
inline double u01_double_integral(const fmrlevy::ModelParams& theta, const SlowFactor& f,
                                  const fmrlevy::OptionSpec& spec, double lambda_i) {
  using namespace fmrlevy;
  const double h = 1e-3;
  ModelParams bumped = theta;
  bumped.sig2_bar += h * f.dsig2_dz;
  bumped.zeta_bar += h * f.dzeta_dz;
  const int steps = 200;
  auto integrand = [&](double lr) {
    const cplx lambda{lr, lambda_i};
    const cplx ph = phi(theta, lambda);
    const cplx dz_phi = (phi(bumped, lambda) - ph) / h;
    const cplx m1 = f.delta * (-f.g * f.gamma_avg + f.g * f.rho_xz * f.sigma_avg * 1i * lambda);
    const cplx hh = payoff_transform(spec, lambda);
    auto inner = [&](double s) { return std::exp((spec.t - s) * ph) * m1 * s * dz_phi * std::exp(s * ph) * hh; };
    const double ds = spec.t / steps;
    cplx acc = inner(0.0) + inner(spec.t);
    for (int i = 1; i < steps; ++i) acc += (i % 2 ? 4.0 : 2.0) * inner(i * ds);
    const cplx time_integral = acc * ds / 3.0;
    return std::exp(1i * lambda * spec.x) * time_integral / std::sqrt(2.0 * std::numbers::pi);
  };
  const double var = std::max(theta.sig2_bar, 1e-6);
  const double L = std::sqrt(2.0 * 60.0 / (var * spec.t)) + 10.0;
  // Hermitian symmetry folds [-L, L] onto [0, L].
  return 2.0 * integrate(integrand, 0.0, L, 1e-13).real();
}

}  // namespace oracle
