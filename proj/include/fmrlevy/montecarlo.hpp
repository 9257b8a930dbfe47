#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "fmrlevy/group_params.hpp"
#include "fmrlevy/levy_measure.hpp"
#include "fmrlevy/pricing.hpp"

namespace fmrlevy {

struct McConfig {
  std::size_t n_paths = 400'000;
  double dt = 0.0;  // 0 selects ε²/20
  std::uint64_t seed = 20111219;
  bool antithetic = true;
  double y0 = 0.0;                // initial value of the fast factor
  bool stationary_start = false;  // draw Y₀ from its invariant law under the pricing measure instead
  double budget = 2e10;           // maximum path·steps
  unsigned threads = 0;           // 0 = hardware concurrency
};

struct McResult {
  double price = 0.0;
  double std_error = 0.0;
  std::size_t effective_paths = 0;  // independent samples (pairs when antithetic)
  double elapsed_seconds = 0.0;
};

/// Terminal log-prices X_t, path-index ordered. With antithetic sampling
/// paths 2i and 2i+1 form a pair.
struct TerminalSample {
  std::vector<double> x;
  bool antithetic = false;
  double elapsed_seconds = 0.0;
};

/// Euler–Maruyama simulation of (X, Y) under the pricing measure for the
/// exponential OU specification with finite-activity jumps drawn from ν.
/// Each pair of paths owns an RNG stream keyed by (seed, pair index), so the
/// result does not depend on the thread count.
TerminalSample simulate_terminal(const OuSpec& ou, const LevyMeasure& measure, double t, double x,
                                 const McConfig& cfg);

/// Sample mean and standard error of payoff(X_t).
McResult estimate(const TerminalSample& sample, const std::function<double(double)>& payoff);

McResult simulate_price(const OuSpec& ou, const LevyMeasure& measure, const OptionSpec& option, const McConfig& cfg);

/// Prices of several log-strikes from one set of paths.
std::vector<McResult> simulate_prices(const OuSpec& ou, const LevyMeasure& measure, OptionKind kind, double t,
                                      double x, std::span<const double> log_strikes, const McConfig& cfg);

}  // namespace fmrlevy
