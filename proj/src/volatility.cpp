#include "fmrlevy/volatility.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fmrlevy/errors.hpp"

namespace fmrlevy {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_pdf(double z) { return std::exp(-0.5 * z * z) * std::numbers::inv_sqrtpi / std::numbers::sqrt2; }

double bs_price(OptionKind kind, double x, double k, double t, double sigma) {
  const double sd = sigma * std::sqrt(t);
  const double spot = std::exp(x);
  const double strike = std::exp(k);
  if (!(sd > 0.0)) {
    return kind == OptionKind::call ? std::max(spot - strike, 0.0) : std::max(strike - spot, 0.0);
  }
  const double d1 = (x - k) / sd + 0.5 * sd;
  const double d2 = d1 - sd;
  if (kind == OptionKind::call) return spot * normal_cdf(d1) - strike * normal_cdf(d2);
  return strike * normal_cdf(-d2) - spot * normal_cdf(-d1);
}

double bs_vega(double x, double k, double t, double sigma) {
  const double sd = sigma * std::sqrt(t);
  const double d1 = (x - k) / sd + 0.5 * sd;
  return std::exp(x) * normal_pdf(d1) * std::sqrt(t);
}

double implied_vol(OptionKind kind, double x, double k, double t, double price) {
  const double spot = std::exp(x);
  const double strike = std::exp(k);
  if (!(t > 0.0) || !std::isfinite(price)) throw DomainError("implied_vol: need t > 0 and a finite price");

  const double lower = kind == OptionKind::call ? std::max(spot - strike, 0.0) : std::max(strike - spot, 0.0);
  const double upper = kind == OptionKind::call ? spot : strike;
  if (!(price > lower && price < upper)) {
    std::ostringstream msg;
    msg << "implied_vol: price " << price << " outside the no-arbitrage interval (" << lower << ", " << upper << ")";
    throw DomainError(msg.str());
  }

  // Out-of-the-money equivalent: only time value is inverted.
  OptionKind otm = k >= x ? OptionKind::call : OptionKind::put;
  double target = price;
  if (otm != kind) target = kind == OptionKind::call ? price - (spot - strike) : price - (strike - spot);
  if (!(target > 0.0)) throw DomainError("implied_vol: time value is not positive");

  const double log_target = std::log(target);
  auto f = [&](double sigma) { return std::log(bs_price(otm, x, k, t, sigma)) - log_target; };

  double lo = kMinImpliedVol;
  double hi = kMaxImpliedVol;
  const double f_lo = f(lo);
  const double f_hi = f(hi);
  if (f_lo > 0.0 || f_hi < 0.0) {
    std::ostringstream msg;
    msg << "implied_vol: price " << price << " implies a volatility outside [" << lo << ", " << hi << "]";
    throw DomainError(msg.str());
  }

  double sigma = std::clamp(std::max(std::sqrt(2.0 * std::abs(x - k) / t),
                                     std::sqrt(2.0 * std::numbers::pi / t) * target / spot),
                            0.05, 2.0);
  for (int iter = 0; iter < 200; ++iter) {
    const double value = bs_price(otm, x, k, t, sigma);
    const double fs = std::log(value) - log_target;
    if (fs > 0.0) hi = sigma; else lo = sigma;

    const double slope = bs_vega(x, k, t, sigma) / value;
    double next = sigma - fs / slope;
    if (!std::isfinite(next) || next <= lo || next >= hi) next = 0.5 * (lo + hi);
    if (std::abs(next - sigma) <= 1e-15 * sigma || hi - lo <= 1e-15 * hi) {
      sigma = next;
      break;
    }
    sigma = next;
  }

  const double err = std::abs(bs_price(kind, x, k, t, sigma) - price);
  if (!(err < 1e-10 * spot)) {
    std::ostringstream msg;
    msg << "implied_vol: solver stalled at sigma = " << sigma << " with price error " << err;
    throw NumericError(msg.str());
  }
  return sigma;
}

}  // namespace fmrlevy
