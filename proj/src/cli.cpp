#include "fmrlevy/cli.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fmrlevy/calibration.hpp"
#include "fmrlevy/errors.hpp"
#include "fmrlevy/group_params.hpp"
#include "fmrlevy/json_io.hpp"
#include "fmrlevy/montecarlo.hpp"
#include "fmrlevy/multiscale.hpp"
#include "fmrlevy/pricing.hpp"
#include "fmrlevy/volatility.hpp"

namespace fmrlevy::cli {

namespace {

struct Options {
  std::string model;
  std::string surface;
  std::string out;
  std::string format;
  std::uint64_t seed = McConfig{}.seed;
  std::string cls = "extended";
  std::string measure;
  std::string strikes;
  std::string maturities;
  std::size_t paths = McConfig{}.n_paths;
  double dt = 0.0;
  double budget = McConfig{}.budget;
  double spot = 1.0;
  double mc_spot = 50.0;
  double strike = std::numeric_limits<double>::quiet_NaN();
  double maturity = std::numeric_limits<double>::quiet_NaN();
  std::string kind = "call";
};

std::vector<double> parse_strikes(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts.size() != 3) throw InputError("--strikes expects lo:hi:n, got '" + spec + "'");
  double lo, hi;
  long n;
  try {
    std::size_t used = 0;
    lo = std::stod(parts[0], &used);
    if (used != parts[0].size()) throw std::invalid_argument("lo");
    hi = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument("hi");
    n = std::stol(parts[2], &used);
    if (used != parts[2].size()) throw std::invalid_argument("n");
  } catch (const std::logic_error&) {
    throw InputError("--strikes expects numbers lo:hi:n, got '" + spec + "'");
  }
  if (!(lo > 0.0) || !(hi >= lo) || n < 1 || (n == 1 && hi != lo)) {
    throw InputError("--strikes needs 0 < lo <= hi and n >= 1 (n = 1 only when lo = hi)");
  }
  std::vector<double> out;
  for (long i = 0; i < n; ++i) out.push_back(n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (n - 1));
  return out;
}

std::vector<double> parse_list(const std::string& spec, const char* flag) {
  std::vector<double> out;
  std::stringstream ss(spec);
  for (std::string p; std::getline(ss, p, ',');) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(p, &used));
      if (used != p.size()) throw std::invalid_argument(p);
    } catch (const std::logic_error&) {
      throw InputError(std::string(flag) + " expects a comma-separated list of numbers, got '" + spec + "'");
    }
  }
  if (out.empty()) throw InputError(std::string(flag) + " is empty");
  return out;
}

OptionKind parse_kind(const std::string& s) {
  if (s == "call") return OptionKind::call;
  if (s == "put") return OptionKind::put;
  throw InputError("--kind must be call or put");
}

ModelParams restrict_to(ModelParams theta, ModelClass::Tag cls) {
  if (cls == ModelClass::Tag::classic) theta.v3e = theta.u3e = theta.v2e = theta.u2e = 0.0;
  if (cls == ModelClass::Tag::fmrsv) {
    theta.zeta_bar = 0.0;
    theta.u3e = theta.u2e = 0.0;
  }
  return theta;
}

ModelClass::Tag parse_class(const std::string& s) {
  try {
    return model_class_from_tag(s);
  } catch (const DomainError& e) {
    throw InputError(e.what());
  }
}

double iv_or_nan(OptionKind kind, double x, double k, double t, double price) {
  try {
    return implied_vol(kind, x, k, t, price);
  } catch (const DomainError&) {
    return std::numeric_limits<double>::quiet_NaN();
  } catch (const NumericError&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

std::string csv_number(double v) { return std::isfinite(v) ? format_number(v) : "nan"; }

OptionKind otm_kind(double k, double x) { return k >= x ? OptionKind::call : OptionKind::put; }

void require_format(const std::string& format, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed) {
    if (format == a) return;
  }
  throw InputError("unsupported --format '" + format + "'");
}

void emit(const Options& o, std::ostream& out, const std::string& text) {
  if (o.out.empty()) {
    out << text;
    return;
  }
  std::ofstream file(o.out, std::ios::binary | std::ios::trunc);
  if (!file) throw InputError("cannot write '" + o.out + "'");
  file << text;
  if (!file) throw InputError("failed writing '" + o.out + "'");
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string cmd_price(const Options& o) {
  const ModelFile model = read_model_file(o.model);
  if (!std::isfinite(o.strike) || !(o.strike > 0.0)) throw InputError("price needs --strike > 0");
  if (!std::isfinite(o.maturity)) throw InputError("price needs --maturity");
  if (!(o.spot > 0.0)) throw InputError("--spot must be positive");
  const std::string format = o.format.empty() ? "json" : o.format;
  require_format(format, {"json", "csv"});
  OptionSpec spec{parse_kind(o.kind), std::log(o.strike), o.maturity, std::log(o.spot)};
  try {
    require_valid(spec);
  } catch (const DomainError& e) {
    throw InputError(e.what());
  }
  const ModelParams theta = restrict_to(model.theta, parse_class(o.cls));
  const SlowParams slow = model.slow.value_or(SlowParams{});
  const MultiscalePrice p = price_multiscale(theta, slow, spec);
  const double iv = iv_or_nan(spec.kind, spec.x, spec.k, spec.t, p.u0 + p.eps_u1);

  if (format == "csv") {
    std::ostringstream ss;
    ss << "kind,spot,strike,t,u0,eps_u1,approx,iv";
    if (model.slow) ss << ",delta_u01,total,iv_total";
    ss << "\n" << o.kind << ',' << csv_number(o.spot) << ',' << csv_number(o.strike) << ',' << csv_number(o.maturity)
       << ',' << csv_number(p.u0) << ',' << csv_number(p.eps_u1) << ',' << csv_number(p.u0 + p.eps_u1) << ','
       << csv_number(iv);
    if (model.slow) {
      ss << ',' << csv_number(p.delta_u01) << ',' << csv_number(p.total()) << ','
         << csv_number(iv_or_nan(spec.kind, spec.x, spec.k, spec.t, p.total()));
    }
    ss << "\n";
    return ss.str();
  }
  Json j;
  j["kind"] = o.kind;
  j["spot"] = o.spot;
  j["strike"] = o.strike;
  j["t"] = o.maturity;
  j["u0"] = p.u0;
  j["eps_u1"] = p.eps_u1;
  j["approx"] = p.u0 + p.eps_u1;
  j["iv"] = number_or_null(iv);
  if (model.slow) {
    j["delta_u01"] = p.delta_u01;
    j["total"] = p.total();
    j["iv_total"] = number_or_null(iv_or_nan(spec.kind, spec.x, spec.k, spec.t, p.total()));
  }
  return dump(j);
}

std::string cmd_smile(const Options& o) {
  const ModelFile model = read_model_file(o.model);
  if (o.strikes.empty()) throw InputError("smile needs --strikes lo:hi:n");
  if (o.maturities.empty()) throw InputError("smile needs --maturities");
  if (!(o.spot > 0.0)) throw InputError("--spot must be positive");
  const std::string format = o.format.empty() ? "csv" : o.format;
  require_format(format, {"json", "csv"});
  std::vector<double> strikes = parse_strikes(o.strikes);
  std::vector<double> maturities = parse_list(o.maturities, "--maturities");
  std::sort(maturities.begin(), maturities.end());
  for (double t : maturities) {
    if (!(t > 0.0)) throw InputError("--maturities must be positive");
  }
  const ModelParams theta = restrict_to(model.theta, parse_class(o.cls));
  const SlowParams slow = model.slow.value_or(SlowParams{});
  const double x = std::log(o.spot);

  std::ostringstream csv;
  csv << "t,k,LM,iv_model\n";
  Json rows = Json::array();
  for (double t : maturities) {
    for (double K : strikes) {
      const double k = std::log(K);
      const OptionSpec spec{otm_kind(k, x), k, t, x};
      const double iv = iv_or_nan(spec.kind, x, k, t, price_multiscale(theta, slow, spec).total());
      csv << csv_number(t) << ',' << csv_number(k) << ',' << csv_number(k - x) << ',' << csv_number(iv) << "\n";
      Json r;
      r["t"] = t;
      r["k"] = k;
      r["LM"] = k - x;
      r["iv_model"] = number_or_null(iv);
      rows.push_back(std::move(r));
    }
  }
  return format == "csv" ? csv.str() : dump(rows);
}

std::string cmd_mc_verify(const Options& o) {
  const ModelFile model = read_model_file(o.model);
  if (!model.ou) throw InputError("mc-verify needs a model file with an \"ou\" block");
  const std::string format = o.format.empty() ? "csv" : o.format;
  require_format(format, {"json", "csv"});
  const double spot = o.mc_spot;
  if (!(spot > 0.0)) throw InputError("--spot must be positive");
  const double t = std::isfinite(o.maturity) ? o.maturity : 0.1;
  if (!(t > 0.0)) throw InputError("--maturity must be positive");
  const std::vector<double> strikes = parse_strikes(o.strikes.empty() ? "45:55:3" : o.strikes);
  McConfig cfg;
  cfg.n_paths = o.paths;
  cfg.dt = o.dt;
  cfg.seed = o.seed;
  cfg.budget = o.budget;
  const double x = std::log(spot);
  TerminalSample sample;
  try {
    sample = simulate_terminal(*model.ou, model.theta.measure, t, x, cfg);
  } catch (const DomainError& e) {
    throw InputError(e.what());
  }

  std::ostringstream csv;
  csv << "strike,k,kind,approx_price,mc_price,mc_stderr,iv_approx,iv_mc,abs_diff_iv\n";
  Json rows = Json::array();
  for (double K : strikes) {
    const double k = std::log(K);
    const OptionKind kind = otm_kind(k, x);
    const OptionSpec spec{kind, k, t, x};
    const double approx = price_approx(model.theta, spec);
    const McResult mc = estimate(sample, [kind, K](double xt) {
      return kind == OptionKind::call ? std::max(std::exp(xt) - K, 0.0) : std::max(K - std::exp(xt), 0.0);
    });
    const double iv_a = iv_or_nan(kind, x, k, t, approx);
    const double iv_m = iv_or_nan(kind, x, k, t, mc.price);
    const double gap = std::abs(iv_a - iv_m);
    const char* kind_name = kind == OptionKind::call ? "call" : "put";
    csv << csv_number(K) << ',' << csv_number(k) << ',' << kind_name << ',' << csv_number(approx) << ','
        << csv_number(mc.price) << ',' << csv_number(mc.std_error) << ',' << csv_number(iv_a) << ','
        << csv_number(iv_m) << ',' << csv_number(gap) << "\n";
    Json r;
    r["strike"] = K;
    r["k"] = k;
    r["kind"] = kind_name;
    r["approx_price"] = approx;
    r["mc_price"] = mc.price;
    r["mc_stderr"] = mc.std_error;
    r["iv_approx"] = number_or_null(iv_a);
    r["iv_mc"] = number_or_null(iv_m);
    r["abs_diff_iv"] = number_or_null(gap);
    rows.push_back(std::move(r));
  }
  return format == "csv" ? csv.str() : dump(rows);
}

std::string cmd_calibrate(const Options& o) {
  if (o.surface.empty()) throw InputError("calibrate needs --surface");
  const std::string format = o.format.empty() ? "json" : o.format;
  require_format(format, {"json"});
  const VolSurface surface = read_surface_file(o.surface);
  std::optional<ModelFile> model;
  if (!o.model.empty()) model = read_model_file(o.model);

  ModelClass cls;
  cls.tag = parse_class(o.cls);
  if (!o.measure.empty()) {
    try {
      cls.measure = measure_kind_from_tag(o.measure);
    } catch (const DomainError& e) {
      throw InputError(e.what());
    }
  } else if (model) {
    cls.measure = kind_of(model->theta.measure);
  }
  ModelParams init = default_init(cls);
  if (model) {
    if (kind_of(model->theta.measure) != cls.measure) throw InputError("--measure does not match the model file");
    init = model->theta;
  }
  CalibrationOptions options;
  options.seed = o.seed;
  CalibrationResult result;
  try {
    result = calibrate(surface, cls, init, default_bounds(cls.measure), options);
  } catch (const DomainError& e) {
    throw InputError(e.what());
  }
  Json j = to_json(result, surface);
  j["class"] = std::string(tag(cls.tag));
  return dump(j);
}

std::string cmd_group_params(const Options& o) {
  const ModelFile model = read_model_file(o.model);
  if (!model.ou) throw InputError("group-params needs a model file with an \"ou\" block");
  const std::string format = o.format.empty() ? "json" : o.format;
  require_format(format, {"json"});
  const OuSpec& ou = *model.ou;
  const GroupParams closed = ou_closed_forms(ou);
  const double a = ou.a, b = ou.b;
  const GroupParams oracle =
      poisson_oracle([a](double y) { return a * std::exp(y); }, [b](double y) { return b * std::exp(y); }, ou.beta,
                     ou.Lam, ou.rho)
          .scaled(ou.eps);
  Json j;
  j["ou"] = to_json(ou);
  j["closed_form"] = to_json(closed);
  j["oracle"] = to_json(oracle);
  j["theta"] = to_json(model.theta);
  return dump(j);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Option pricing and calibration under exponential Levy models with fast mean-reverting "
               "stochastic volatility and jump intensity.",
               "fmrlevy"};
  app.require_subcommand(1);
  Options o;

  auto add_model = [&](CLI::App* c, bool required) {
    auto* opt = c->add_option("--model", o.model, "Model JSON file");
    if (required) opt->required();
  };
  auto add_common = [&](CLI::App* c) {
    c->add_option("--out", o.out, "Write the result here instead of stdout");
    c->add_option("--format", o.format, "csv or json");
  };

  auto* price = app.add_subcommand("price", "Price one option: u0, eps*u1, their sum and its implied vol");
  add_model(price, true);
  add_common(price);
  price->add_option("--spot", o.spot, "Spot price e^x")->capture_default_str();
  price->add_option("--strike", o.strike, "Strike price K")->required();
  price->add_option("--maturity", o.maturity, "Time to maturity in years")->required();
  price->add_option("--kind", o.kind, "call or put")->capture_default_str();
  price->add_option("--class", o.cls, "extended, classic or fmrsv")->capture_default_str();

  auto* smile = app.add_subcommand("smile", "Implied-vol grid over strikes and maturities");
  add_model(smile, true);
  add_common(smile);
  smile->add_option("--spot", o.spot, "Spot price e^x")->capture_default_str();
  smile->add_option("--strikes", o.strikes, "Strike grid lo:hi:n")->required();
  smile->add_option("--maturities", o.maturities, "Comma-separated maturities in years")->required();
  smile->add_option("--class", o.cls, "extended, classic or fmrsv")->capture_default_str();

  auto* mc = app.add_subcommand("mc-verify", "Compare the asymptotic price with Monte Carlo of the full model");
  add_model(mc, true);
  add_common(mc);
  mc->add_option("--spot", o.mc_spot, "Spot price e^x")->capture_default_str();
  mc->add_option("--strikes", o.strikes, "Strike grid lo:hi:n (default 45:55:3)");
  mc->add_option("--maturity", o.maturity, "Time to maturity in years (default 0.1)");
  mc->add_option("--paths", o.paths, "Number of paths")->capture_default_str();
  mc->add_option("--dt", o.dt, "Time step in years (default eps^2/20)");
  mc->add_option("--seed", o.seed, "RNG seed")->capture_default_str();
  mc->add_option("--budget", o.budget, "Maximum paths*steps")->capture_default_str();

  auto* cal = app.add_subcommand("calibrate", "Fit a model class to an implied-vol surface");
  add_model(cal, false);
  add_common(cal);
  cal->add_option("--surface", o.surface, "Surface CSV (t_years,log_strike,spot,iv)")->required();
  cal->add_option("--class", o.cls, "extended, classic or fmrsv")->capture_default_str();
  cal->add_option("--measure", o.measure, "merton, gumbel, dirac, vg or uniform");
  cal->add_option("--seed", o.seed, "Seed of the multi-start design")->capture_default_str();

  auto* gp = app.add_subcommand("group-params", "Closed-form and quadrature group parameters of an OU model");
  add_model(gp, true);
  add_common(gp);

  std::vector<std::string> args;
  for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return ok;
    }
    app.exit(e, out, err);
    return input_error;
  }

  try {
    std::string text;
    if (price->parsed()) text = cmd_price(o);
    if (smile->parsed()) text = cmd_smile(o);
    if (mc->parsed()) text = cmd_mc_verify(o);
    if (cal->parsed()) text = cmd_calibrate(o);
    if (gp->parsed()) text = cmd_group_params(o);
    emit(o, out, text);
    return ok;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return input_error;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return input_error;
  } catch (const BudgetError& e) {
    err << "error: " << e.what() << "\n";
    return budget_exceeded;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << "\n";
    return numeric_error;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return numeric_error;
  }
}

}  // namespace fmrlevy::cli
