#pragma once

namespace fmrlevy {

enum class OptionKind { call, put };

/// An observed implied-volatility quote. x is the log-spot, k the log-strike.
struct Quote {
  double t = 0.0;
  double k = 0.0;
  double x = 0.0;
  double iv = 0.0;

  double log_moneyness() const { return k - x; }
};

inline constexpr double kMinImpliedVol = 1e-4;
inline constexpr double kMaxImpliedVol = 5.0;

double normal_cdf(double z);
double normal_pdf(double z);

/// Zero-rate Black-Scholes price of a call or put on e^x struck at e^k.
double bs_price(OptionKind kind, double x, double k, double t, double sigma);

/// ∂(price)/∂σ, identical for calls and puts.
double bs_vega(double x, double k, double t, double sigma);

/// Inverts bs_price on [kMinImpliedVol, kMaxImpliedVol].
///
/// The price is first mapped to the out-of-the-money option by parity, then
/// Newton iterations on log-price run inside a shrinking bracket, falling back
/// to bisection whenever a step leaves it. Throws DomainError if the price is
/// outside the no-arbitrage interval or implies a volatility outside the
/// admissible range, NumericError if the solver does not reach 1e-10·e^x.
double implied_vol(OptionKind kind, double x, double k, double t, double price);

}  // namespace fmrlevy
