#include "fmrlevy/group_params.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>
#include <vector>

#include "fmrlevy/errors.hpp"
#include "fmrlevy/gauss_rules.hpp"

namespace fmrlevy {

void require_valid(const OuSpec& spec) {
  std::ostringstream msg;
  if (!(spec.a > 0.0)) msg << " a must be > 0;";
  if (!(spec.b >= 0.0)) msg << " b must be >= 0;";
  if (!(spec.beta > 0.0)) msg << " beta must be > 0;";
  if (!std::isfinite(spec.Lam)) msg << " Lam must be finite;";
  if (!(spec.rho >= -1.0 && spec.rho <= 1.0)) msg << " rho must lie in [-1, 1];";
  if (!(spec.eps > 0.0)) msg << " eps must be > 0;";
  if (!msg.str().empty()) throw DomainError("invalid OU specification:" + msg.str());
}

GroupParams GroupParams::scaled(double epsilon) const {
  GroupParams out = *this;
  out.eps = epsilon;
  out.v3e = epsilon * V3;
  out.u3e = epsilon * U3;
  out.v2e = epsilon * V2;
  out.u2e = epsilon * U2;
  return out;
}

ModelParams GroupParams::model(const LevyMeasure& measure) const {
  return ModelParams{sig2_bar, zeta_bar, measure, v3e, u3e, v2e, u2e};
}

GroupParams ou_closed_forms(const OuSpec& spec) {
  require_valid(spec);
  const double a = spec.a, b = spec.b, beta = spec.beta, lam = spec.Lam, rho = spec.rho;
  const double b2 = beta * beta;
  GroupParams g;
  g.sig2_bar = a * a * std::exp(b2);
  g.zeta_bar = b * std::exp(b2 / 4.0);
  g.V3 = rho / beta * a * a * a * std::exp(1.25 * b2) * std::expm1(b2);
  g.U3 = rho / beta * 2.0 * a * b * (std::exp(b2) - std::exp(0.5 * b2));
  g.V2 = -beta * lam * a * a * std::exp(b2);
  g.U2 = -beta * lam * b * std::exp(b2 / 4.0);
  return g.scaled(spec.eps);
}

namespace {

struct Brackets {
  double sigma_eta = 0.0;  // ⟨σ ∂_yη⟩
  double one_eta = 0.0;    // ⟨∂_yη⟩
  double sigma_xi = 0.0;   // ⟨σ ∂_yξ⟩
  double one_xi = 0.0;     // ⟨∂_yξ⟩
};

Brackets bracket_averages(const std::function<double(double)>& sigma, const std::function<double(double)>& zeta,
                          double beta, double sig2_bar, double zeta_bar, double half_width, int cells) {
  const double b2 = beta * beta;
  const double norm = 1.0 / (std::sqrt(std::numbers::pi) * beta);
  auto density = [&](double y) { return norm * std::exp(-y * y / b2); };

  const double lower = -half_width * beta;
  const double h = 2.0 * half_width * beta / cells;
  const GaussRule gl = gauss_legendre(8);

  // Cumulative ∫_{lower}^{y_j} (f - ⟨f⟩) p du, cell by cell.
  std::vector<double> f_eta(cells + 1, 0.0), f_xi(cells + 1, 0.0);
  for (int j = 0; j < cells; ++j) {
    const double left = lower + j * h;
    double acc_eta = 0.0, acc_xi = 0.0;
    for (Eigen::Index q = 0; q < gl.nodes.size(); ++q) {
      const double u = left + 0.5 * h * (gl.nodes(q) + 1.0);
      const double w = 0.5 * h * gl.weights(q) * density(u);
      const double s = sigma(u);
      acc_eta += w * (s * s - sig2_bar);
      acc_xi += w * (zeta(u) - zeta_bar);
    }
    f_eta[j + 1] = f_eta[j] + acc_eta;
    f_xi[j + 1] = f_xi[j] + acc_xi;
  }

  Brackets out;
  for (int j = 0; j <= cells; ++j) {
    const double y = lower + j * h;
    const double p = density(y);
    const double d_eta = 2.0 * f_eta[j] / (b2 * p);
    const double d_xi = 2.0 * f_xi[j] / (b2 * p);
    const double w = (j == 0 || j == cells) ? 1.0 : (j % 2 ? 4.0 : 2.0);
    const double s = sigma(y);
    out.sigma_eta += w * s * d_eta * p;
    out.one_eta += w * d_eta * p;
    out.sigma_xi += w * s * d_xi * p;
    out.one_xi += w * d_xi * p;
  }
  for (double* v : {&out.sigma_eta, &out.one_eta, &out.sigma_xi, &out.one_xi}) *v *= h / 3.0;
  return out;
}

}  // namespace

GroupParams poisson_oracle(const std::function<double(double)>& sigma, const std::function<double(double)>& zeta,
                           double beta, double Lam, double rho, const PoissonOracleOptions& options) {
  if (!(beta > 0.0)) throw DomainError("poisson_oracle: beta must be > 0");
  if (options.cells < 4 || options.cells % 2 != 0) throw DomainError("poisson_oracle: cells must be even");

  // Y ~ N(0, β²/2) ⇒ Y = β·X with X weighted by e^{-x²}/√π.
  const GaussRule gh = gauss_hermite(options.hermite_nodes);
  GroupParams g;
  for (Eigen::Index i = 0; i < gh.nodes.size(); ++i) {
    const double y = beta * gh.nodes(i);
    const double w = gh.weights(i) / std::sqrt(std::numbers::pi);
    const double s = sigma(y);
    g.sig2_bar += w * s * s;
    g.zeta_bar += w * zeta(y);
  }

  const Brackets fine =
      bracket_averages(sigma, zeta, beta, g.sig2_bar, g.zeta_bar, options.half_width, options.cells);
  const Brackets coarse =
      bracket_averages(sigma, zeta, beta, g.sig2_bar, g.zeta_bar, options.half_width, options.cells / 2);
  const double floor = 1e-14 * (1.0 + g.sig2_bar + g.zeta_bar) * (1.0 + g.sig2_bar + g.zeta_bar);
  const std::pair<double, double> pairs[] = {{fine.sigma_eta, coarse.sigma_eta},
                                             {fine.one_eta, coarse.one_eta},
                                             {fine.sigma_xi, coarse.sigma_xi},
                                             {fine.one_xi, coarse.one_xi}};
  for (const auto& [f, c] : pairs) {
    if (!(std::abs(f - c) <= 1e-8 * std::abs(f) + floor)) {
      std::ostringstream msg;
      msg << "poisson_oracle: bracket average moved from " << c << " to " << f
          << " under grid refinement; increase cells";
      throw NumericError(msg.str());
    }
  }

  g.V3 = -0.5 * rho * beta * fine.sigma_eta;
  g.U3 = -rho * beta * fine.sigma_xi;
  g.V2 = 0.5 * beta * Lam * fine.one_eta;
  g.U2 = beta * Lam * fine.one_xi;
  return g.scaled(1.0);
}

}  // namespace fmrlevy
