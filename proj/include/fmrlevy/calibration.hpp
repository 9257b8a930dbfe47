#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "fmrlevy/pricing.hpp"
#include "fmrlevy/volatility.hpp"

namespace fmrlevy {

struct VolSurface {
  double spot = 1.0;
  std::vector<Quote> quotes;
  std::string label;
};

/// At least 8 quotes, positive maturities and spot, no repeated (t, k).
void require_valid(const VolSurface& surface);

/// Which coordinates of θ are free. Classic freezes the four group
/// parameters at 0; FmrSv removes jumps (⟨ζ⟩ = 0, measure frozen) and
/// freezes the two jump-related groups U₃, U₂ at 0.
struct ModelClass {
  enum class Tag { extended, classic, fmrsv };
  Tag tag = Tag::extended;
  MeasureKind measure = MeasureKind::merton;
};

std::string_view tag(ModelClass::Tag t);
ModelClass::Tag model_class_from_tag(std::string_view t);

/// Flat parameter layout: sig2_bar, zeta_bar, measure parameters, v3e, u3e, v2e, u2e.
std::vector<std::string> parameter_names(MeasureKind kind);
std::vector<double> pack(const ModelParams& theta);
ModelParams unpack(const std::vector<double>& values, MeasureKind kind);
std::vector<bool> free_mask(const ModelClass& cls);

struct Box {
  double lo = 0.0;
  double hi = 0.0;
};

/// Parameter name -> admissible interval.
using Bounds = std::map<std::string, Box>;

Bounds default_bounds(MeasureKind kind);

/// A reasonable starting point inside default_bounds for the class.
ModelParams default_init(const ModelClass& cls);

struct CalibrationOptions {
  int max_iterations = 200;
  int starts = 5;                 // Latin-hypercube starts for the extended class
  std::uint64_t seed = 20111219;  // seeds the start design
  double good_enough_rmse = 1e-7; // skip further starts once a fit is this close
  double failure_residual = 10.0; // residual assigned when a quote cannot be priced
  unsigned threads = 0;
};

struct CalibrationResult {
  ModelParams theta_star;
  double rmse = 0.0;
  std::vector<double> residuals;  // iv_model - iv_obs, in surface order
  std::vector<double> iv_model;   // NaN where pricing failed
  int iterations = 0;
  bool converged = false;
  std::vector<double> objective_trace;  // rmse after each accepted step of the winning start
};

/// Implied volatility of u₀ + ε·u₁, priced on the out-of-the-money side.
double model_iv(const ModelParams& theta, double t, double k, double x);

/// Residuals iv_model - iv_obs for every quote; failures get options.failure_residual.
std::vector<double> iv_residuals(const ModelParams& theta, const VolSurface& surface,
                                 const CalibrationOptions& options = {});

/// Levenberg–Marquardt fit of the IV residuals over all quotes jointly.
CalibrationResult calibrate(const VolSurface& surface, const ModelClass& cls, const ModelParams& init,
                            const Bounds& bounds, const CalibrationOptions& options = {});

}  // namespace fmrlevy
