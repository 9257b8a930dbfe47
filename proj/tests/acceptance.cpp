// Acceptance checks. With no arguments every criterion runs; otherwise only
// the listed numbers. Prints one PASS/FAIL line per criterion and exits
// nonzero if any failed.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "fmrlevy/calibration.hpp"
#include "fmrlevy/group_params.hpp"
#include "fmrlevy/levy_measure.hpp"
#include "fmrlevy/montecarlo.hpp"
#include "fmrlevy/multiscale.hpp"
#include "fmrlevy/pricing.hpp"
#include "fmrlevy/volatility.hpp"
#include "oracles.hpp"

using namespace fmrlevy;
using cplx = std::complex<double>;
using namespace std::complex_literals;

namespace {

struct Verdict {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

LevyMeasure random_measure(int variant, std::mt19937_64& rng) {
  auto u = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  switch (variant % 5) {
    case 0: return MertonJumps{u(-0.5, 0.3), u(0.02, 0.5)};
    case 1: return GumbelJumps{u(-0.3, 0.3), u(0.05, 0.5)};
    case 2: return DiracJumps{u(-0.5, 0.5)};
    case 3: return VarianceGammaJumps{u(1.5, 40.0), u(1.0, 40.0), u(0.1, 15.0)};
    default: {
      const double a = u(-0.5, 0.2);
      return UniformJumps{a, a + u(0.01, 0.5)};
    }
  }
}

ModelParams random_theta(int variant, std::mt19937_64& rng) {
  auto u = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  ModelParams theta;
  theta.sig2_bar = u(0.01, 0.2);
  theta.zeta_bar = u(0.0, 2.0);
  theta.measure = random_measure(variant, rng);
  theta.v3e = u(-0.01, 0.01);
  theta.u3e = u(-0.1, 0.1);
  theta.v2e = u(-0.05, 0.05);
  theta.u2e = u(-0.1, 0.1);
  return theta;
}

// 1. Martingale identities.
Verdict martingale() {
  std::mt19937_64 rng(1);
  double worst_phi = 0.0, worst_b = 0.0;
  for (int i = 0; i < 200; ++i) {
    const ModelParams theta = random_theta(i, rng);
    worst_phi = std::max(worst_phi, std::abs(phi(theta, -1i)));
    worst_b = std::max(worst_b, std::abs(b_symbol(theta, -1i)));
  }
  return {worst_phi < 1e-12 && worst_b < 1e-12, fmt("max |phi(-i)| = %.2e, max |B(-i)| = %.2e", worst_phi, worst_b)};
}

// 2. Closed-form characteristic integrals against density quadrature.
Verdict closed_vs_quadrature() {
  std::mt19937_64 rng(2);
  auto u = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  double worst = 0.0;
  for (int variant = 0; variant < 5; ++variant) {
    for (int i = 0; i < 100; ++i) {
      const LevyMeasure m = random_measure(variant, rng);
      const Strip strip = analyticity_strip(m);
      const double lo = std::max(-3.0, strip.lower + 0.5);
      const double hi = std::min(3.0, strip.upper - 0.5);
      double lr = u(0.5, 10.0) * (u(0.0, 1.0) < 0.5 ? -1.0 : 1.0);
      const cplx lambda{lr, u(lo, hi)};
      const cplx closed = char_integral(m, lambda);
      const cplx quad = oracle::char_integral(m, lambda);
      worst = std::max(worst, std::abs(closed - quad) / (std::abs(quad) + 1e-300));
    }
  }
  return {worst < 1e-8, fmt("max relative gap over 500 samples = %.2e", worst)};
}

const double kStrikes[] = {80.0, 85.0, 90.0, 95.0, 100.0, 105.0, 110.0, 115.0, 120.0};
const double kMaturities[] = {0.1, 0.25, 0.5, 1.0};

// 3. Black-Scholes reduction.
Verdict black_scholes() {
  ModelParams theta;
  theta.sig2_bar = 0.04;
  theta.zeta_bar = 0.0;
  const double spot = 100.0, x = std::log(spot);
  double worst = 0.0;
  for (double K : kStrikes) {
    for (double t : kMaturities) {
      const OptionSpec spec{OptionKind::call, std::log(K), t, x};
      const double u0 = price_u0(theta, spec, default_contour(theta, spec));
      const double bs = oracle::black_scholes_call(spot, K, t, 0.2);
      worst = std::max(worst, std::abs(u0 - bs) / bs);
    }
  }
  return {worst < 1e-6, fmt("max relative error over 9x4 grid = %.2e", worst)};
}

// 4. Put-call parity and contour independence.
Verdict parity_and_contours() {
  const double spot = 100.0, x = std::log(spot);
  double worst_parity = 0.0, worst_contour = 0.0;
  for (const LevyMeasure& m : {LevyMeasure{MertonJumps{-0.2, 0.2}}, LevyMeasure{VarianceGammaJumps{20.0, 10.0, 5.0}}}) {
    ModelParams theta;
    theta.sig2_bar = 0.04;
    theta.zeta_bar = 1.0;
    theta.measure = m;
    theta.v3e = -0.002;
    theta.u3e = 0.03;
    theta.v2e = -0.01;
    theta.u2e = -0.02;
    for (double K : kStrikes) {
      for (double t : kMaturities) {
        const double k = std::log(K);
        const OptionSpec call{OptionKind::call, k, t, x};
        const OptionSpec put{OptionKind::put, k, t, x};
        const double c = price_approx(theta, call);
        const double p = price_approx(theta, put);
        worst_parity = std::max(worst_parity, std::abs(c - p - (spot - K)) / spot);
        const double c2 = price_approx(theta, call, Contour{-1.25});
        const double c3 = price_approx(theta, call, Contour{-3.0});
        const double p2 = price_approx(theta, put, Contour{0.5});
        worst_contour = std::max({worst_contour, std::abs(c - c2) / spot, std::abs(c - c3) / spot,
                                  std::abs(p - p2) / spot});
      }
    }
  }
  return {worst_parity < 1e-6 && worst_contour < 1e-6,
          fmt("max parity gap = %.2e e^x, max contour gap = %.2e e^x", worst_parity, worst_contour)};
}

// 5. Closed-form group parameters against the Poisson-equation oracle.
Verdict group_parameters() {
  auto rel = [](double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); };
  auto compare = [&](const OuSpec& s) {
    const double a = s.a, b = s.b;
    const GroupParams c = ou_closed_forms(s);
    const GroupParams o = poisson_oracle([a](double y) { return a * std::exp(y); },
                                         [b](double y) { return b * std::exp(y); }, s.beta, s.Lam, s.rho);
    return std::max({rel(c.sig2_bar, o.sig2_bar), rel(c.zeta_bar, o.zeta_bar), rel(c.V3, o.V3), rel(c.U3, o.U3),
                     rel(c.V2, o.V2), rel(c.U2, o.U2)});
  };
  OuSpec ref;
  ref.eps = 1.0;
  const GroupParams g = ou_closed_forms(ref);
  const double b2 = ref.beta * ref.beta;
  const double explicit_sig2 = ref.a * ref.a * std::exp(b2);
  const double explicit_v3 = ref.rho / ref.beta * std::pow(ref.a, 3) * std::exp(1.25 * b2) * std::expm1(b2);
  double worst = std::max({compare(ref), rel(g.sig2_bar, explicit_sig2), rel(g.V3, explicit_v3)});
  const bool reference_values = std::abs(g.sig2_bar - 0.108731) < 1e-6 && std::abs(g.zeta_bar - 1.926038) < 1e-6 &&
                                std::abs(g.V3 + 0.033585) < 1e-6 && std::abs(g.U3 + 0.449216) < 1e-6 &&
                                std::abs(g.V2 + 0.027183) < 1e-6 && std::abs(g.U2 + 0.481509) < 1e-6;
  std::mt19937_64 rng(5);
  auto u = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  for (int i = 0; i < 20; ++i) {
    worst = std::max(worst, compare(OuSpec{u(0.05, 0.5), u(0.1, 3.0), u(0.3, 1.5), u(-0.5, 0.5), u(-0.95, 0.95), 1.0}));
  }
  return {worst < 1e-6 && reference_values,
          fmt("max relative gap = %.2e over 21 sets; reference values %s", worst, reference_values ? "match" : "differ")};
}

// 6. Asymptotic implied vols against Monte Carlo of the full model.
Verdict monte_carlo() {
  const double x = std::log(50.0), t = 0.1;
  const double strikes[] = {45.0, 50.0, 55.0};
  auto max_gap = [&](double eps, std::string& row) {
    OuSpec ou;
    ou.eps = eps;
    const LevyMeasure m = MertonJumps{-0.2, 0.2};
    const ModelParams theta = ou_closed_forms(ou).model(m);
    std::vector<double> ks;
    for (double K : strikes) ks.push_back(std::log(K));
    McConfig cfg;
    cfg.n_paths = 400'000;
    const auto mc = simulate_prices(ou, m, OptionKind::call, t, x, ks, cfg);
    double worst = 0.0;
    row = fmt("eps=%.3f:", eps);
    for (std::size_t i = 0; i < ks.size(); ++i) {
      const OptionSpec spec{OptionKind::call, ks[i], t, x};
      const double iv_a = implied_vol(OptionKind::call, x, ks[i], t, price_approx(theta, spec));
      const double iv_m = implied_vol(OptionKind::call, x, ks[i], t, mc[i].price);
      const double gap = 100.0 * std::abs(iv_a - iv_m);
      worst = std::max(worst, gap);
      row += fmt(" K=%g %.2f", strikes[i], gap);
    }
    return worst;
  };
  std::string row1, row2;
  const double g1 = max_gap(0.1, row1);
  const double g2 = max_gap(0.033, row2);
  const bool within = g1 <= 1.5;
  const bool shrinks = g2 <= 0.5 * g1;
  return {within && shrinks,
          fmt("gaps in vol points, %s | %s; <=1.5 at eps=0.1: %s; halves at eps=0.033: %s", row1.c_str(),
              row2.c_str(), within ? "yes" : "no", shrinks ? "yes" : "no")};
}

// 7. Slow-factor correction against the literal double integral.
Verdict slow_factor() {
  std::mt19937_64 rng(7);
  auto u = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  double worst = 0.0, worst_m = 0.0;
  for (int i = 0; i < 20; ++i) {
    ModelParams theta = random_theta(i, rng);
    theta.sig2_bar = u(0.02, 0.1);
    const oracle::SlowFactor f{u(0.5, 2.0), u(-0.5, 0.5), u(-0.9, 0.9), u(0.1, 0.4), u(-0.05, 0.05), u(-0.5, 0.5),
                               u(0.01, 0.2)};
    const SlowParams slow = slow_params(f.g, f.gamma_avg, f.rho_xz, f.sigma_avg, f.dsig2_dz, f.dzeta_dz, f.delta);
    const OptionSpec spec{i % 2 ? OptionKind::put : OptionKind::call, u(-0.15, 0.15), u(0.1, 1.0), 0.0};
    const Contour c = default_contour(theta, spec);
    const double closed = price_u01(theta, slow, spec, c);
    const double literal = oracle::u01_double_integral(theta, f, spec, c.lambda_i);
    worst = std::max(worst, std::abs(closed - literal));
    worst_m = std::max(worst_m, std::abs(m_symbol(theta, slow, -1i)));
  }
  return {worst < 1e-9 && worst_m < 1e-12, fmt("max |closed - literal| = %.2e, max |M(-i)| = %.2e", worst, worst_m)};
}

// 8 and 9 share one synthetic surface and its three fits.
struct Fits {
  CalibrationResult extended, classic, fmrsv;
};

ModelParams surface_truth() {
  ModelParams theta;
  theta.sig2_bar = 0.2054 * 0.2054;
  theta.zeta_bar = 0.8207;
  theta.measure = MertonJumps{-0.5608, 0.4070};
  theta.v3e = -5.61729e-4;
  theta.u3e = 0.3254;
  theta.v2e = -0.1263;
  theta.u2e = -0.1549;
  return theta;
}

const Fits& fits() {
  static std::optional<Fits> cached;
  if (cached) return *cached;
  const ModelParams truth = surface_truth();
  VolSurface s;
  s.spot = 1.0;
  for (double t : {0.05, 0.1, 0.15, 0.25, 0.35, 0.5, 0.75, 1.0}) {
    for (int j = 0; j < 15; ++j) {
      const double k = (-0.3 + 0.4 * j / 14.0) * std::sqrt(t / 0.25);
      s.quotes.push_back({t, k, 0.0, model_iv(truth, t, k, 0.0)});
    }
  }
  ModelParams start = truth;
  start.sig2_bar *= 1.3;
  start.zeta_bar *= 0.7;
  start.measure = MertonJumps{-0.5608 * 1.3, 0.4070 * 0.7};
  start.v3e *= 1.3;
  start.u3e *= 0.7;
  start.v2e *= 1.3;
  start.u2e *= 0.7;
  const Bounds bounds = default_bounds(MeasureKind::merton);
  const ModelClass fmrsv{ModelClass::Tag::fmrsv, MeasureKind::merton};
  cached = Fits{calibrate(s, {ModelClass::Tag::extended, MeasureKind::merton}, start, bounds),
                calibrate(s, {ModelClass::Tag::classic, MeasureKind::merton}, start, bounds),
                calibrate(s, fmrsv, default_init(fmrsv), bounds)};
  return *cached;
}

Verdict calibration_round_trip() {
  const Fits& f = fits();
  const bool nested = f.extended.rmse <= std::min(f.classic.rmse, f.fmrsv.rmse);
  return {f.extended.rmse < 1e-4 && nested,
          fmt("rmse extended %.2e (%d iterations), classic %.4f, fmrsv %.4f", f.extended.rmse, f.extended.iterations,
              f.classic.rmse, f.fmrsv.rmse)};
}

Verdict extended_dominates() {
  const Fits& f = fits();
  return {f.extended.rmse < f.classic.rmse && f.extended.rmse < f.fmrsv.rmse,
          fmt("synthetic jump + stochastic-vol surface: extended %.2e < classic %.4f and fmrsv %.4f", f.extended.rmse,
              f.classic.rmse, f.fmrsv.rmse)};
}

struct Criterion {
  int number;
  const char* name;
  double seconds_allowed;
  std::function<Verdict()> check;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "martingale identities", 1.0, martingale},
      {2, "closed-form vs quadrature", 30.0, closed_vs_quadrature},
      {3, "Black-Scholes reduction", 5.0, black_scholes},
      {4, "put-call parity and contour independence", 10.0, parity_and_contours},
      {5, "group parameters vs Poisson oracle", 10.0, group_parameters},
      {6, "asymptotic vs Monte Carlo implied vol", 1200.0, monte_carlo},
      {7, "slow-factor correction", 30.0, slow_factor},
      {8, "calibration round trip", 300.0, calibration_round_trip},
      {9, "extended class dominates on a synthetic surface", 300.0, extended_dominates},
  };
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.number) == selected.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = seconds <= c.seconds_allowed;
    const bool pass = v.pass && in_time;
    if (!pass) ++failures;
    std::printf("[%s] %d. %s: %s (%.1f s%s)\n", pass ? "PASS" : "FAIL", c.number, c.name, v.detail.c_str(), seconds,
                in_time ? "" : ", over time limit");
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
