#include <doctest.h>

#include <cmath>
#include <sstream>

#include "fmrlevy/errors.hpp"
#include "fmrlevy/json_io.hpp"

using namespace fmrlevy;

TEST_CASE("json_io: measures round-trip") {
  const LevyMeasure measures[] = {MertonJumps{-0.2, 0.2}, GumbelJumps{0.01, 0.1}, DiracJumps{-0.05},
                                  VarianceGammaJumps{20.0, 10.0, 5.0}, UniformJumps{-0.2, 0.1}};
  for (const auto& m : measures) CHECK(measure_from_json(to_json(m)) == m);
}

TEST_CASE("json_io: averaged model form") {
  ModelParams theta;
  theta.sig2_bar = 0.05;
  theta.zeta_bar = 0.3;
  theta.measure = GumbelJumps{0.0, 0.2};
  theta.u3e = 0.01;
  const ModelFile file = model_from_json(to_json(theta));
  CHECK(file.theta.sig2_bar == 0.05);
  CHECK(file.theta.u3e == 0.01);
  CHECK(file.theta.measure == theta.measure);
  CHECK(!file.ou);
  CHECK(!file.slow);

  const ModelFile bs = model_from_json(parse_json(R"({"sig2_bar": 0.04, "zeta_bar": 0})", "bs"));
  CHECK(bs.theta.zeta_bar == 0.0);
}

TEST_CASE("json_io: factor form uses the closed-form group parameters") {
  const Json j = parse_json(R"({"ou": {"a": 0.2, "b": 1.5, "beta": 1.0, "Lam": 0.25, "rho": -0.7, "eps": 0.1},
                                "measure": {"variant": "merton", "m": -0.2, "s": 0.2}})",
                            "fig");
  const ModelFile file = model_from_json(j);
  REQUIRE(file.ou);
  const GroupParams g = ou_closed_forms(*file.ou);
  CHECK(file.theta.sig2_bar == g.sig2_bar);
  CHECK(file.theta.v3e == g.v3e);
}

TEST_CASE("json_io: slow block in both forms") {
  const ModelFile direct = model_from_json(parse_json(
      R"({"sig2_bar": 0.04, "zeta_bar": 0, "slow": {"v1": 0.01, "v0": -0.02, "u1": 0.0, "u0": 0.005}})", "s"));
  REQUIRE(direct.slow);
  CHECK(direct.slow->v0 == -0.02);
  const ModelFile factor = model_from_json(parse_json(
      R"({"sig2_bar": 0.04, "zeta_bar": 0, "slow": {"g": 1, "gamma": 0.5, "rho_xz": -0.4, "sigma": 0.2,
          "dsig2_dz": 0.1, "dzeta_dz": 0.3, "delta": 0.05}})",
      "s"));
  REQUIRE(factor.slow);
  CHECK(factor.slow->v0 == doctest::Approx(-0.05 * 0.5 * 0.1));
}

TEST_CASE("json_io: malformed input names the problem") {
  try {
    parse_json("{\n  \"sig2_bar\": ,\n}", "bad.json");
    FAIL("expected InputError");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("bad.json:2") != std::string::npos);
  }
  CHECK_THROWS_AS(model_from_json(parse_json(R"({"sig2_bar": 0.04, "zeta_bar": 0, "kappa": 1})", "x")), InputError);
  CHECK_THROWS_AS(model_from_json(parse_json(R"({"sig2_bar": 0.04, "zeta_bar": 0.5})", "x")), InputError);
  CHECK_THROWS_AS(measure_from_json(parse_json(R"({"variant": "merton", "m": 0})", "x")), InputError);
  CHECK_THROWS_AS(measure_from_json(parse_json(R"({"variant": "merton", "m": 0, "s": 0.1, "q": 2})", "x")),
                  InputError);
  CHECK_THROWS_AS(model_from_json(parse_json(R"({"sig2_bar": -1, "zeta_bar": 0})", "x")), DomainError);
}

TEST_CASE("json_io: surface CSV round-trip and errors") {
  std::string text = "\xEF\xBB\xBFt_years,log_strike,spot,iv\n0.25,4.6,100,0.2\n0.5,4.7,100,0.21\n";
  for (int i = 0; i < 6; ++i) text += "1," + std::to_string(4.5 + 0.05 * i) + ",100,0.2\n";
  std::istringstream in(text);
  const VolSurface s = read_surface_csv(in, "surf.csv");
  REQUIRE(s.quotes.size() == 8);
  CHECK(s.spot == 100.0);
  CHECK(s.quotes[0].x == doctest::Approx(std::log(100.0)));
  CHECK(s.quotes[1].iv == 0.21);
  std::ostringstream out;
  write_surface_csv(out, s);
  std::istringstream again(out.str());
  const VolSurface t = read_surface_csv(again, "again");
  CHECK(t.quotes[1].k == s.quotes[1].k);

  std::istringstream bad_header("t,k,spot,iv\n");
  CHECK_THROWS_AS(read_surface_csv(bad_header, "h"), InputError);
  std::istringstream bad_row("t_years,log_strike,spot,iv\n0.25,4.6,100,0.2\n0.5,abc,100,0.2\n");
  try {
    read_surface_csv(bad_row, "rows.csv");
    FAIL("expected InputError");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("rows.csv:3") != std::string::npos);
  }
}

TEST_CASE("format_number: shortest round-trip form") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(50.0) == "50");
  const double v = 0.1 + 0.2;
  CHECK(std::stod(format_number(v)) == v);
}
