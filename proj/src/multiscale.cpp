#include "fmrlevy/multiscale.hpp"

#include <cmath>
#include <sstream>

#include "fmrlevy/detail/contour_quadrature.hpp"
#include "fmrlevy/errors.hpp"

namespace fmrlevy {

using cplx = std::complex<double>;
using namespace std::complex_literals;

SlowParams slow_params(double g, double gamma_avg, double rho_xz, double sigma_avg, double dsig2_dz, double dzeta_dz,
                       double delta) {
  SlowParams s;
  s.v1 = delta * g * rho_xz * sigma_avg * dsig2_dz;
  s.v0 = -delta * g * gamma_avg * dsig2_dz;
  s.u1 = delta * g * rho_xz * sigma_avg * dzeta_dz;
  s.u0 = -delta * g * gamma_avg * dzeta_dz;
  s.dsig2_dz = dsig2_dz;
  s.dzeta_dz = dzeta_dz;
  return s;
}

void require_finite(const SlowParams& slow) {
  for (double v : {slow.v1, slow.v0, slow.u1, slow.u0, slow.dsig2_dz, slow.dzeta_dz}) {
    if (!std::isfinite(v)) throw DomainError("slow-scale parameters must be finite");
  }
}

cplx m_symbol(const ModelParams& theta, const SlowParams& slow, cplx lambda) {
  const double kappa = exp_moment(theta.measure);
  const cplx chi = char_integral(theta.measure, lambda);
  const cplx l2 = lambda * lambda;
  return 0.5 * slow.v1 * (-1i * l2 * lambda + l2) + slow.u1 * (l2 * kappa + 1i * lambda * chi) +
         0.5 * slow.v0 * (-l2 - 1i * lambda) + slow.u0 * (-1i * lambda * kappa + chi);
}

MultiscalePrice price_multiscale(const ModelParams& theta, const SlowParams& slow, const OptionSpec& spec,
                                 const Contour& contour) {
  require_admissible(theta);
  require_finite(slow);
  require_valid(spec);
  require_valid(contour, spec.kind, theta.measure);
  const double half_t2 = 0.5 * spec.t * spec.t;
  const auto result = detail::integrate_contour<3>(theta, spec, contour, [&](cplx lambda) {
    return std::array<cplx, 3>{1.0, spec.t * b_symbol(theta, lambda), half_t2 * m_symbol(theta, slow, lambda)};
  });
  MultiscalePrice out{result.value[0], result.value[1], result.value[2]};
  if (!(result.imag_residue < 1e-8 * (1.0 + std::abs(out.u0)))) {
    std::ostringstream msg;
    msg << "contour quadrature: imaginary residue " << result.imag_residue << " exceeds 1e-8*(1+price); retry with L > "
        << result.L << " or n > " << result.n;
    throw NumericError(msg.str());
  }
  return out;
}

MultiscalePrice price_multiscale(const ModelParams& theta, const SlowParams& slow, const OptionSpec& spec) {
  return price_multiscale(theta, slow, spec, default_contour(theta, spec));
}

double price_u01(const ModelParams& theta, const SlowParams& slow, const OptionSpec& spec, const Contour& contour) {
  return price_multiscale(theta, slow, spec, contour).delta_u01;
}

double price_u01(const ModelParams& theta, const SlowParams& slow, const OptionSpec& spec) {
  return price_multiscale(theta, slow, spec).delta_u01;
}

}  // namespace fmrlevy
