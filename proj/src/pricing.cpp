#include "fmrlevy/pricing.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "fmrlevy/detail/contour_quadrature.hpp"
#include "fmrlevy/errors.hpp"

namespace fmrlevy {

namespace {

using cplx = std::complex<double>;
using namespace std::complex_literals;

double pricing_variance(const ModelParams& theta) { return std::max(theta.sig2_bar, kMinPricingVariance); }

// Golden-section minimisation of a convex function on [lo, hi]. Values may be
// +inf away from `finite_end`; ties between two infinite probes move toward it.
template <class F>
double golden_minimum(F&& f, double lo, double hi, double finite_end, double tol) {
  constexpr double r = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  const bool toward_hi = finite_end >= hi;
  while (b - a > tol * (1.0 + std::abs(a) + std::abs(b))) {
    const bool both_inf = std::isinf(fc) && std::isinf(fd);
    if (both_inf ? !toward_hi : fc <= fd) {
      b = d; d = c; fd = fc;
      c = b - r * (b - a); fc = f(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + r * (b - a); fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

void require_admissible(const ModelParams& theta) {
  std::ostringstream msg;
  if (!(theta.sig2_bar > 0.0) || !std::isfinite(theta.sig2_bar)) msg << " sig2_bar must be > 0;";
  if (!(theta.zeta_bar >= 0.0) || !std::isfinite(theta.zeta_bar)) msg << " zeta_bar must be >= 0;";
  for (double g : {theta.v3e, theta.u3e, theta.v2e, theta.u2e}) {
    if (!std::isfinite(g)) {
      msg << " group parameters must be finite;";
      break;
    }
  }
  if (!msg.str().empty()) throw DomainError("inadmissible model parameters:" + msg.str());
  require_admissible(theta.measure);
}

double gamma_bar(const ModelParams& theta) {
  return -0.5 * pricing_variance(theta) - theta.zeta_bar * exp_moment(theta.measure);
}

void require_valid(const OptionSpec& spec) {
  if (!(spec.t > 0.0) || !std::isfinite(spec.t)) throw DomainError("option maturity must be positive");
  if (!std::isfinite(spec.k) || !std::isfinite(spec.x)) throw DomainError("log-strike and log-spot must be finite");
}

void require_valid(const Contour& contour, OptionKind kind, const LevyMeasure& measure) {
  std::ostringstream msg;
  const double li = contour.lambda_i;
  if (kind == OptionKind::call && !(li < -1.0)) msg << " call contour needs Im(lambda) < -1;";
  if (kind == OptionKind::put && !(li > 0.0)) msg << " put contour needs Im(lambda) > 0;";
  if (!analyticity_strip(measure).contains(li)) msg << " Im(lambda) outside the measure's analyticity strip;";
  if (contour.L < 0.0 || (!contour.adaptive && !(contour.L > 0.0))) msg << " truncation L must be positive;";
  if (contour.n < 32 || contour.n % 2 != 0) msg << " n must be even and >= 32;";
  if (!msg.str().empty()) {
    std::ostringstream full;
    full << "invalid contour (lambda_i = " << li << "):" << msg.str();
    throw DomainError(full.str());
  }
}

Contour default_contour(const ModelParams& theta, const OptionSpec& spec) {
  const Strip strip = analyticity_strip(theta.measure);
  double lo, hi;
  if (spec.kind == OptionKind::call) {
    lo = strip.lower;
    hi = -1.0;
  } else {
    lo = 0.0;
    hi = strip.upper;
  }
  double margin = 0.25;
  if (std::isfinite(lo) && std::isfinite(hi)) margin = std::min(margin, (hi - lo) / 4.0);

  // log |e^{tφ} ĥ e^{iλx}| at λ = iy; convex in y on each pole-free interval.
  auto log_magnitude = [&](double y) {
    const cplx lambda{0.0, y};
    double value;
    try {
      value = spec.t * phi(theta, lambda).real() + spec.k * (1.0 + y) - y * spec.x - std::log(std::abs(y * (1.0 + y)));
    } catch (const NumericError&) {
      return std::numeric_limits<double>::infinity();  // exponent overflowed: far from the minimum
    }
    return std::isnan(value) ? std::numeric_limits<double>::infinity() : value;
  };

  // An infinite strip end is replaced by stepping outward from the pole side
  // with doubling strides until the magnitude stops falling.
  const double var_t = pricing_variance(theta) * spec.t;
  const double reach = 2.0 + 4.0 * (1.0 + std::abs(spec.k - spec.x)) / var_t;
  auto bracket = [&](double from, double direction) {
    double y = from, fy = log_magnitude(from);
    for (double step = 0.5; step < 2.0 * reach; step *= 2.0) {
      const double next = from + direction * step;
      const double fn = log_magnitude(next);
      if (!(fn < fy)) return next;
      y = next;
      fy = fn;
    }
    return y + direction * reach;
  };
  double a, b, finite_end;
  if (spec.kind == OptionKind::call) {
    b = hi - margin;
    a = std::isfinite(lo) ? lo + margin : bracket(b, -1.0);
    finite_end = b;
  } else {
    a = lo + margin;
    b = std::isfinite(hi) ? hi - margin : bracket(a, 1.0);
    finite_end = a;
  }
  Contour c;
  c.lambda_i = golden_minimum(log_magnitude, a, b, finite_end, 1e-6);
  return c;
}

cplx phi(const ModelParams& theta, cplx lambda) {
  const cplx diffusion = 1i * gamma_bar(theta) * lambda - 0.5 * pricing_variance(theta) * lambda * lambda;
  if (theta.zeta_bar == 0.0) return diffusion;
  return diffusion + theta.zeta_bar * char_integral(theta.measure, lambda);
}

cplx b_symbol(const ModelParams& theta, cplx lambda) {
  const double kappa = exp_moment(theta.measure);
  const cplx chi = char_integral(theta.measure, lambda);
  const cplx l2 = lambda * lambda;
  return theta.v3e * (-1i * l2 * lambda + l2) + theta.u3e * (l2 * kappa + 1i * lambda * chi) +
         theta.v2e * (-l2 - 1i * lambda) + theta.u2e * (-1i * lambda * kappa + chi);
}

cplx payoff_transform(const OptionSpec& spec, cplx lambda) {
  const double li = lambda.imag();
  if (spec.kind == OptionKind::call && !(li < -1.0)) {
    throw DomainError("call payoff transform needs Im(lambda) < -1");
  }
  if (spec.kind == OptionKind::put && !(li > 0.0)) throw DomainError("put payoff transform needs Im(lambda) > 0");
  return -std::exp(spec.k - 1i * spec.k * lambda) /
         (std::sqrt(2.0 * std::numbers::pi) * (1i * lambda + lambda * lambda));
}

PriceComponents price_components(const ModelParams& theta, const OptionSpec& spec, const Contour& contour) {
  require_admissible(theta);
  require_valid(spec);
  require_valid(contour, spec.kind, theta.measure);
  const auto result = detail::integrate_contour<2>(theta, spec, contour, [&](cplx lambda) {
    return std::array<cplx, 2>{1.0, spec.t * b_symbol(theta, lambda)};
  });
  PriceComponents out{result.value[0], result.value[1], result.imag_residue, result.L, result.n};
  const double price_scale = 1.0 + std::abs(out.u0);
  if (!(out.imag_residue < 1e-8 * price_scale)) {
    std::ostringstream msg;
    msg << "contour quadrature: imaginary residue " << out.imag_residue << " exceeds 1e-8*(1+price); retry with L > "
        << out.L << " or n > " << out.n;
    throw NumericError(msg.str());
  }
  return out;
}

PriceComponents price_components(const ModelParams& theta, const OptionSpec& spec) {
  return price_components(theta, spec, default_contour(theta, spec));
}

double price_u0(const ModelParams& theta, const OptionSpec& spec, const Contour& contour) {
  return price_components(theta, spec, contour).u0;
}

double price_u1(const ModelParams& theta, const OptionSpec& spec, const Contour& contour) {
  return price_components(theta, spec, contour).eps_u1;
}

double price_approx(const ModelParams& theta, const OptionSpec& spec, const Contour& contour) {
  return price_components(theta, spec, contour).approx();
}

double price_approx(const ModelParams& theta, const OptionSpec& spec) {
  return price_components(theta, spec).approx();
}

}  // namespace fmrlevy
