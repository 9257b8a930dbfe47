#pragma once

#include <complex>

#include "fmrlevy/levy_measure.hpp"
#include "fmrlevy/volatility.hpp"

namespace fmrlevy {

/// Averaged Lévy triplet plus the ε-scaled group parameters of the
/// first-order correction.
struct ModelParams {
  double sig2_bar = 0.04;  // ⟨σ²⟩
  double zeta_bar = 0.0;   // ⟨ζ⟩
  LevyMeasure measure = MertonJumps{};
  double v3e = 0.0;
  double u3e = 0.0;
  double v2e = 0.0;
  double u2e = 0.0;
};

/// Variance floor applied inside pricing so the integrand keeps Gaussian decay.
inline constexpr double kMinPricingVariance = 1e-6;

void require_admissible(const ModelParams& theta);

/// ⟨γ⟩ = -⟨σ²⟩/2 - ⟨ζ⟩ ∫(e^z - 1 - z)ν(dz), with the variance floor applied.
double gamma_bar(const ModelParams& theta);

struct OptionSpec {
  OptionKind kind = OptionKind::call;
  double k = 0.0;  // log-strike
  double t = 1.0;  // maturity in years
  double x = 0.0;  // log-spot
};

void require_valid(const OptionSpec& spec);

/// Integration line Im(λ) = lambda_i, truncated to |Re λ| ≤ L with n Simpson
/// intervals on the folded half-line. When adaptive, L and n are starting
/// values: L grows until the integrand is negligible at the endpoint and n
/// doubles until successive estimates agree.
struct Contour {
  double lambda_i = -1.5;
  double L = 0.0;  // 0 selects the default starting width
  int n = 128;
  bool adaptive = true;
};

/// Checks the strip, pole side and grid invariants; throws DomainError.
void require_valid(const Contour& contour, OptionKind kind, const LevyMeasure& measure);

/// Contour for pricing `spec` under θ: the line through the saddle point of
/// the integrand magnitude at Re λ = 0, kept inside the admissible strip.
Contour default_contour(const ModelParams& theta, const OptionSpec& spec);

/// Characteristic exponent of the averaged Lévy triplet.
std::complex<double> phi(const ModelParams& theta, std::complex<double> lambda);

/// ε·B_λ, the Fourier symbol of the first-order correction operator.
std::complex<double> b_symbol(const ModelParams& theta, std::complex<double> lambda);

/// Generalized Fourier transform ĥ(λ) of the call/put payoff.
std::complex<double> payoff_transform(const OptionSpec& spec, std::complex<double> lambda);

struct PriceComponents {
  double u0 = 0.0;
  double eps_u1 = 0.0;
  double imag_residue = 0.0;  // |Im| of the unfolded integral, a symmetry diagnostic
  double L = 0.0;             // truncation actually used
  int n = 0;                  // intervals actually used

  double approx() const { return u0 + eps_u1; }
  Contour contour(double lambda_i) const { return {lambda_i, L, n, false}; }
};

/// u₀ and ε·u₁ from a single contour quadrature.
PriceComponents price_components(const ModelParams& theta, const OptionSpec& spec, const Contour& contour);
PriceComponents price_components(const ModelParams& theta, const OptionSpec& spec);

double price_u0(const ModelParams& theta, const OptionSpec& spec, const Contour& contour);
double price_u1(const ModelParams& theta, const OptionSpec& spec, const Contour& contour);
double price_approx(const ModelParams& theta, const OptionSpec& spec, const Contour& contour);
double price_approx(const ModelParams& theta, const OptionSpec& spec);

}  // namespace fmrlevy
