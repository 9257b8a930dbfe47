#pragma once

#include <complex>
#include <limits>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace fmrlevy {

// Jump-size measures. Each ν below is the per-unit-intensity measure; the
// state-dependent Lévy measure of the model is ζ(y)·ν(dz).

/// Log-normal jumps: ν = N(m, s²).
struct MertonJumps {
  double m = 0.0;
  double s = 0.0;

  bool operator==(const MertonJumps&) const = default;
};

/// Minimum-Gumbel jumps with density (1/σ)·exp((z-m)/σ - exp((z-m)/σ)).
struct GumbelJumps {
  double m = 0.0;
  double sigma = 1.0;

  bool operator==(const GumbelJumps&) const = default;
};

/// Fixed jump size a.
struct DiracJumps {
  double a = 0.0;

  bool operator==(const DiracJumps&) const = default;
};

/// ν(dz) = e^{-az}/z on z > 0 plus B·e^{bz}/(-z) on z < 0. Infinite activity.
struct VarianceGammaJumps {
  double a = 2.0;
  double b = 1.0;
  double B = 1.0;

  bool operator==(const VarianceGammaJumps&) const = default;
};

/// Uniform jumps on [a, b].
struct UniformJumps {
  double a = 0.0;
  double b = 1.0;

  bool operator==(const UniformJumps&) const = default;
};

using LevyMeasure =
    std::variant<MertonJumps, GumbelJumps, DiracJumps, VarianceGammaJumps, UniformJumps>;

enum class MeasureKind { merton, gumbel, dirac, variance_gamma, uniform };

MeasureKind kind_of(const LevyMeasure& measure);
std::string_view tag(MeasureKind kind);
MeasureKind measure_kind_from_tag(std::string_view tag);

struct Violation {
  std::string condition;
  std::string parameter;
  double value;
};

/// Every admissibility condition the measure breaks. Empty means admissible.
std::vector<Violation> validate(const LevyMeasure& measure);

/// Throws DomainError listing the violations, if any.
void require_admissible(const LevyMeasure& measure);

// Checked constructors.
LevyMeasure merton(double m, double s);
LevyMeasure gumbel(double m, double sigma);
LevyMeasure dirac(double a);
LevyMeasure variance_gamma(double a, double b, double B);
LevyMeasure uniform(double a, double b);

/// Open interval of Im(λ) on which char_integral is analytic.
struct Strip {
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();

  bool contains(double lambda_i) const { return lambda_i > lower && lambda_i < upper; }
};

Strip analyticity_strip(const LevyMeasure& measure);

/// ∫ (e^{iλz} - 1 - iλz) ν(dz) in closed form. Throws DomainError off the
/// strip and NumericError on a non-finite result.
std::complex<double> char_integral(const LevyMeasure& measure, std::complex<double> lambda);

/// ∫ (e^z - 1 - z) ν(dz).
double exp_moment(const LevyMeasure& measure);

/// ∫ z ν(dz).
double mean_jump(const LevyMeasure& measure);

/// True when ν has unit mass, i.e. jumps can be drawn as i.i.d. sizes.
bool is_probability_measure(const LevyMeasure& measure);

}  // namespace fmrlevy
