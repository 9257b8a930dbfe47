#include <doctest.h>

#include <cmath>
#include <random>

#include "fmrlevy/errors.hpp"
#include "fmrlevy/multiscale.hpp"
#include "oracles.hpp"

using namespace fmrlevy;

namespace {

ModelParams merton_theta() {
  ModelParams theta;
  theta.sig2_bar = 0.05;
  theta.zeta_bar = 0.6;
  theta.measure = MertonJumps{-0.2, 0.2};
  theta.v3e = -0.002;
  theta.u3e = 0.03;
  theta.v2e = -0.01;
  theta.u2e = -0.02;
  return theta;
}

SlowParams from_factor(const oracle::SlowFactor& f) {
  return slow_params(f.g, f.gamma_avg, f.rho_xz, f.sigma_avg, f.dsig2_dz, f.dzeta_dz, f.delta);
}

}  // namespace

TEST_CASE("price_u01: zero slow parameters contribute nothing") {
  const ModelParams theta = merton_theta();
  const OptionSpec call{OptionKind::call, 0.05, 0.5, 0.0};
  CHECK(price_u01(theta, SlowParams{}, call) == 0.0);
  const MultiscalePrice p = price_multiscale(theta, SlowParams{}, call);
  CHECK(p.total() == doctest::Approx(price_approx(theta, call)).epsilon(1e-12));
}

TEST_CASE("m_symbol: vanishes at lambda = -i") {
  const ModelParams theta = merton_theta();
  const SlowParams slow{0.3, -0.2, 0.1, 0.05, 0.0, 0.0};
  CHECK(std::abs(m_symbol(theta, slow, {0.0, -1.0})) < 1e-12);
  ModelParams gumbel = theta;
  gumbel.measure = GumbelJumps{0.05, 0.1};
  CHECK(std::abs(m_symbol(gumbel, slow, {0.0, -1.0})) < 1e-12);
}

TEST_CASE("price_u01: matches the literal double integral") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 5; ++i) {
    ModelParams theta = merton_theta();
    theta.sig2_bar = 0.04 + 0.02 * u(rng);
    theta.zeta_bar = 0.5 + 0.3 * u(rng);
    const oracle::SlowFactor f{1.0 + 0.5 * u(rng), 0.3 * u(rng), 0.8 * u(rng), 0.2 + 0.05 * u(rng),
                               0.02 * u(rng),      0.3 * u(rng), 0.1};
    const OptionSpec spec{i % 2 ? OptionKind::put : OptionKind::call, 0.1 * u(rng), 0.25 + 0.2 * (u(rng) + 1.0),
                          0.0};
    const Contour c = default_contour(theta, spec);
    const double closed = price_u01(theta, from_factor(f), spec, c);
    const double literal = oracle::u01_double_integral(theta, f, spec, c.lambda_i);
    CHECK(closed == doctest::Approx(literal).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("price_u01: linear in the slow parameters") {
  const ModelParams theta = merton_theta();
  const OptionSpec call{OptionKind::call, 0.0, 0.5, 0.0};
  const Contour c = default_contour(theta, call);
  const SlowParams a{0.01, -0.02, 0.03, 0.01, 0.0, 0.0};
  const SlowParams b{-0.02, 0.01, 0.02, -0.03, 0.0, 0.0};
  const SlowParams sum{a.v1 + 2 * b.v1, a.v0 + 2 * b.v0, a.u1 + 2 * b.u1, a.u0 + 2 * b.u0, 0.0, 0.0};
  CHECK(price_u01(theta, sum, call, c) ==
        doctest::Approx(price_u01(theta, a, call, c) + 2 * price_u01(theta, b, call, c)).epsilon(1e-12).scale(1e-9));
}

TEST_CASE("price_u01: same correction for a call and its put") {
  const ModelParams theta = merton_theta();
  const SlowParams slow{0.01, -0.02, 0.03, 0.01, 0.0, 0.0};
  const OptionSpec call{OptionKind::call, 0.1, 0.5, 0.0};
  const OptionSpec put{OptionKind::put, 0.1, 0.5, 0.0};
  CHECK(price_u01(theta, slow, call) == doctest::Approx(price_u01(theta, slow, put)).epsilon(1e-10).scale(1e-9));
}

TEST_CASE("price_u01: slow groups equal to the fast groups give t/2 times the fast correction") {
  const ModelParams theta = merton_theta();
  const SlowParams slow{2 * theta.v3e, 2 * theta.v2e, theta.u3e, theta.u2e, 0.0, 0.0};
  for (double t : {0.1, 0.5, 1.0}) {
    const OptionSpec call{OptionKind::call, 0.05, t, 0.0};
    const Contour c = default_contour(theta, call);
    const double u1 = price_u1(theta, call, c);
    CHECK(price_u01(theta, slow, call, c) == doctest::Approx(0.5 * t * u1).epsilon(1e-8).scale(1e-10));
  }
}

TEST_CASE("slow_params: products and validation") {
  const SlowParams s = slow_params(2.0, 0.5, -0.4, 0.2, 0.1, 0.3, 0.05);
  CHECK(s.v1 == doctest::Approx(0.05 * 2.0 * -0.4 * 0.2 * 0.1));
  CHECK(s.v0 == doctest::Approx(-0.05 * 2.0 * 0.5 * 0.1));
  CHECK(s.u1 == doctest::Approx(0.05 * 2.0 * -0.4 * 0.2 * 0.3));
  CHECK(s.u0 == doctest::Approx(-0.05 * 2.0 * 0.5 * 0.3));
  SlowParams bad;
  bad.u0 = std::nan("");
  CHECK_THROWS_AS(require_finite(bad), DomainError);
}
