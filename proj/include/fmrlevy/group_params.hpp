#pragma once

#include <functional>

#include "fmrlevy/levy_measure.hpp"
#include "fmrlevy/pricing.hpp"

namespace fmrlevy {

/// OU driving factor with exponential level functions:
///   dY = (-Y/ε² - Λβ/ε) dt + (β/ε) dB̃,  σ(y) = a·e^y,  ζ(y) = b·e^y.
/// Under the physical measure Y has invariant law N(0, β²/2).
struct OuSpec {
  double a = 0.2;
  double b = 1.5;
  double beta = 1.0;
  double Lam = 0.25;
  double rho = -0.7;
  double eps = 0.1;
};

void require_valid(const OuSpec& spec);

/// Averages and group parameters. V3, U3, V2, U2 are unscaled; the *e members
/// carry the ε-scaled values used by pricing.
struct GroupParams {
  double sig2_bar = 0.0;
  double zeta_bar = 0.0;
  double V3 = 0.0;
  double U3 = 0.0;
  double V2 = 0.0;
  double U2 = 0.0;
  double eps = 1.0;
  double v3e = 0.0;
  double u3e = 0.0;
  double v2e = 0.0;
  double u2e = 0.0;

  GroupParams scaled(double epsilon) const;
  ModelParams model(const LevyMeasure& measure) const;
};

/// Closed-form averages and group parameters for the exponential OU specification.
GroupParams ou_closed_forms(const OuSpec& spec);

struct PoissonOracleOptions {
  int hermite_nodes = 96;
  double half_width = 8.0;  // grid is [-half_width·β, half_width·β]
  int cells = 4000;
};

/// Group parameters for arbitrary level functions σ(y), ζ(y) on the OU factor
/// α(y) = -y with constant β and Λ, by quadrature.
///
/// Averages use Gauss–Hermite against N(0, β²/2). The Poisson equations
/// A₀η = σ² - ⟨σ²⟩ and A₀ξ = ζ - ⟨ζ⟩ are solved through the integrating
/// factor, ∂_yη(y) = 2/(β²p(y)) ∫_{lower}^y (σ²(u) - ⟨σ²⟩) p(u) du, with p the
/// invariant density, on a uniform grid; the bracket averages ⟨βσ∂_yη⟩ etc.
/// then follow by composite Simpson. The result is unscaled (eps = 1).
GroupParams poisson_oracle(const std::function<double(double)>& sigma, const std::function<double(double)>& zeta,
                           double beta, double Lam, double rho, const PoissonOracleOptions& options = {});

}  // namespace fmrlevy
