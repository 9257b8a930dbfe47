#pragma once

#include <complex>

#include "fmrlevy/pricing.hpp"

namespace fmrlevy {

/// Slow-scale group parameters at a frozen slow-factor value z, each already
/// multiplied by δ:
///   V₁ = g ρ_xz ⟨σ⟩ ∂_z⟨σ²⟩,  V₀ = -g ⟨Γ⟩ ∂_z⟨σ²⟩,
///   U₁ = g ρ_xz ⟨σ⟩ ∂_z⟨ζ⟩,   U₀ = -g ⟨Γ⟩ ∂_z⟨ζ⟩.
struct SlowParams {
  double v1 = 0.0;
  double v0 = 0.0;
  double u1 = 0.0;
  double u0 = 0.0;
  double dsig2_dz = 0.0;
  double dzeta_dz = 0.0;
};

/// Builds the four products from the underlying slow-factor quantities.
SlowParams slow_params(double g, double gamma_avg, double rho_xz, double sigma_avg, double dsig2_dz, double dzeta_dz,
                       double delta);

void require_finite(const SlowParams& slow);

/// Symbol M_λ with (∂_t - ⟨A₂⟩)u₀,₁ = ⟨M₁⟩u₀,₀ becoming
/// û₀,₁ = (t²/2) e^{tφ_λ} ĥ(λ) M_λ:
///   M_λ = ½V₁(-iλ³+λ²) + U₁(λ²κ+iλχ) + ½V₀(-λ²-iλ) + U₀(-iλκ+χ),
/// with χ = char_integral(ν, λ) and κ = exp_moment(ν).
std::complex<double> m_symbol(const ModelParams& theta, const SlowParams& slow, std::complex<double> lambda);

/// δ·u₀,₁ by contour quadrature.
double price_u01(const ModelParams& theta, const SlowParams& slow, const OptionSpec& spec, const Contour& contour);
double price_u01(const ModelParams& theta, const SlowParams& slow, const OptionSpec& spec);

struct MultiscalePrice {
  double u0 = 0.0;
  double eps_u1 = 0.0;
  double delta_u01 = 0.0;

  double total() const { return u0 + eps_u1 + delta_u01; }
};

/// u₀ + ε·u₁ + δ·u₀,₁ from one quadrature pass.
MultiscalePrice price_multiscale(const ModelParams& theta, const SlowParams& slow, const OptionSpec& spec,
                                 const Contour& contour);
MultiscalePrice price_multiscale(const ModelParams& theta, const SlowParams& slow, const OptionSpec& spec);

}  // namespace fmrlevy
