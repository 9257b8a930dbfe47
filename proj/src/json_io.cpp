#include "fmrlevy/json_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "fmrlevy/errors.hpp"

namespace fmrlevy {

namespace {

std::string where(const std::string& source, std::size_t line, std::size_t column) {
  std::ostringstream msg;
  msg << source << ":" << line << ":" << column;
  return msg.str();
}

void reject_unknown(const Json& j, std::initializer_list<const char*> allowed, const std::string& context) {
  for (const auto& item : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* k) { return item.key() == k; })) {
      throw InputError("unknown key '" + item.key() + "' in " + context);
    }
  }
}

double number(const Json& j, const char* key, const std::string& context) {
  const auto it = j.find(key);
  if (it == j.end()) throw InputError("missing key '" + std::string(key) + "' in " + context);
  if (!it->is_number()) throw InputError("key '" + std::string(key) + "' in " + context + " must be a number");
  return it->get<double>();
}

double number_or(const Json& j, const char* key, double fallback, const std::string& context) {
  return j.contains(key) ? number(j, key, context) : fallback;
}

void require_object(const Json& j, const std::string& context) {
  if (!j.is_object()) throw InputError(context + " must be a JSON object");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, sep)) out.push_back(trim(field));
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

Json parse_json(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    // e.byte is 1-based and points just past the offending character.
    const std::size_t stop = std::min(text.size(), e.byte == 0 ? std::size_t{0} : e.byte - 1);
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::string detail = e.what();
    if (const auto pos = detail.find("syntax error"); pos != std::string::npos) detail = detail.substr(pos);
    throw InputError(where(source, line, column) + ": invalid JSON: " + detail);
  }
}

Json to_json(const LevyMeasure& measure) {
  Json j;
  j["variant"] = std::string(tag(kind_of(measure)));
  if (auto* m = std::get_if<MertonJumps>(&measure)) {
    j["m"] = m->m;
    j["s"] = m->s;
  } else if (auto* g = std::get_if<GumbelJumps>(&measure)) {
    j["m"] = g->m;
    j["sigma_g"] = g->sigma;
  } else if (auto* d = std::get_if<DiracJumps>(&measure)) {
    j["a"] = d->a;
  } else if (auto* v = std::get_if<VarianceGammaJumps>(&measure)) {
    j["a"] = v->a;
    j["b"] = v->b;
    j["B"] = v->B;
  } else {
    const auto& u = std::get<UniformJumps>(measure);
    j["a"] = u.a;
    j["b"] = u.b;
  }
  return j;
}

LevyMeasure measure_from_json(const Json& j) {
  const std::string ctx = "measure";
  require_object(j, ctx);
  if (!j.contains("variant") || !j["variant"].is_string()) throw InputError("measure needs a string 'variant'");
  MeasureKind kind;
  try {
    kind = measure_kind_from_tag(j["variant"].get<std::string>());
  } catch (const DomainError& e) {
    throw InputError(e.what());
  }
  LevyMeasure out;
  switch (kind) {
    case MeasureKind::merton:
      reject_unknown(j, {"variant", "m", "s"}, ctx);
      out = MertonJumps{number(j, "m", ctx), number(j, "s", ctx)};
      break;
    case MeasureKind::gumbel:
      reject_unknown(j, {"variant", "m", "sigma_g"}, ctx);
      out = GumbelJumps{number(j, "m", ctx), number(j, "sigma_g", ctx)};
      break;
    case MeasureKind::dirac:
      reject_unknown(j, {"variant", "a"}, ctx);
      out = DiracJumps{number(j, "a", ctx)};
      break;
    case MeasureKind::variance_gamma:
      reject_unknown(j, {"variant", "a", "b", "B"}, ctx);
      out = VarianceGammaJumps{number(j, "a", ctx), number(j, "b", ctx), number(j, "B", ctx)};
      break;
    case MeasureKind::uniform:
      reject_unknown(j, {"variant", "a", "b"}, ctx);
      out = UniformJumps{number(j, "a", ctx), number(j, "b", ctx)};
      break;
  }
  require_admissible(out);
  return out;
}

Json to_json(const ModelParams& theta) {
  Json j;
  j["sig2_bar"] = theta.sig2_bar;
  j["zeta_bar"] = theta.zeta_bar;
  j["measure"] = to_json(theta.measure);
  j["v3e"] = theta.v3e;
  j["u3e"] = theta.u3e;
  j["v2e"] = theta.v2e;
  j["u2e"] = theta.u2e;
  return j;
}

Json to_json(const OuSpec& ou) {
  Json j;
  j["a"] = ou.a;
  j["b"] = ou.b;
  j["beta"] = ou.beta;
  j["Lam"] = ou.Lam;
  j["rho"] = ou.rho;
  j["eps"] = ou.eps;
  return j;
}

Json to_json(const GroupParams& g) {
  Json j;
  j["sig2_bar"] = g.sig2_bar;
  j["zeta_bar"] = g.zeta_bar;
  j["V3"] = g.V3;
  j["U3"] = g.U3;
  j["V2"] = g.V2;
  j["U2"] = g.U2;
  j["eps"] = g.eps;
  j["v3e"] = g.v3e;
  j["u3e"] = g.u3e;
  j["v2e"] = g.v2e;
  j["u2e"] = g.u2e;
  return j;
}

Json to_json(const SlowParams& slow) {
  Json j;
  j["v1"] = slow.v1;
  j["v0"] = slow.v0;
  j["u1"] = slow.u1;
  j["u0"] = slow.u0;
  j["dsig2_dz"] = slow.dsig2_dz;
  j["dzeta_dz"] = slow.dzeta_dz;
  return j;
}

ModelFile model_from_json(const Json& j) {
  require_object(j, "model");
  ModelFile out;
  if (j.contains("ou")) {
    reject_unknown(j, {"ou", "measure", "slow"}, "model");
    const Json& o = j["ou"];
    require_object(o, "ou");
    reject_unknown(o, {"a", "b", "beta", "Lam", "rho", "eps"}, "ou");
    OuSpec ou;
    ou.a = number(o, "a", "ou");
    ou.b = number(o, "b", "ou");
    ou.beta = number(o, "beta", "ou");
    ou.Lam = number(o, "Lam", "ou");
    ou.rho = number(o, "rho", "ou");
    ou.eps = number(o, "eps", "ou");
    require_valid(ou);
    if (!j.contains("measure")) throw InputError("missing key 'measure' in model");
    out.ou = ou;
    out.theta = ou_closed_forms(ou).model(measure_from_json(j["measure"]));
  } else {
    reject_unknown(j, {"sig2_bar", "zeta_bar", "measure", "v3e", "u3e", "v2e", "u2e", "slow"}, "model");
    out.theta.sig2_bar = number(j, "sig2_bar", "model");
    out.theta.zeta_bar = number(j, "zeta_bar", "model");
    if (j.contains("measure")) {
      out.theta.measure = measure_from_json(j["measure"]);
    } else if (out.theta.zeta_bar != 0.0) {
      throw InputError("missing key 'measure' in model with zeta_bar != 0");
    }
    out.theta.v3e = number_or(j, "v3e", 0.0, "model");
    out.theta.u3e = number_or(j, "u3e", 0.0, "model");
    out.theta.v2e = number_or(j, "v2e", 0.0, "model");
    out.theta.u2e = number_or(j, "u2e", 0.0, "model");
  }
  require_admissible(out.theta);

  if (j.contains("slow")) {
    const Json& s = j["slow"];
    require_object(s, "slow");
    if (s.contains("delta")) {
      reject_unknown(s, {"g", "gamma", "rho_xz", "sigma", "dsig2_dz", "dzeta_dz", "delta"}, "slow");
      out.slow = slow_params(number(s, "g", "slow"), number(s, "gamma", "slow"), number(s, "rho_xz", "slow"),
                             number(s, "sigma", "slow"), number(s, "dsig2_dz", "slow"), number(s, "dzeta_dz", "slow"),
                             number(s, "delta", "slow"));
    } else {
      reject_unknown(s, {"v1", "v0", "u1", "u0", "dsig2_dz", "dzeta_dz"}, "slow");
      SlowParams sp;
      sp.v1 = number(s, "v1", "slow");
      sp.v0 = number(s, "v0", "slow");
      sp.u1 = number(s, "u1", "slow");
      sp.u0 = number(s, "u0", "slow");
      sp.dsig2_dz = number_or(s, "dsig2_dz", 0.0, "slow");
      sp.dzeta_dz = number_or(s, "dzeta_dz", 0.0, "slow");
      out.slow = sp;
    }
    require_finite(*out.slow);
  }
  return out;
}

ModelFile read_model_file(const std::string& path) { return model_from_json(parse_json(read_file(path), path)); }

VolSurface read_surface_csv(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& what) { throw InputError(where(source, line_no, 1) + ": " + what); };

  if (!std::getline(in, line)) {
    line_no = 1;
    fail("empty surface file; expected header t_years,log_strike,spot,iv");
  }
  ++line_no;
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
  const auto header = split(trim(line), ',');
  if (header != std::vector<std::string>{"t_years", "log_strike", "spot", "iv"}) {
    fail("expected header t_years,log_strike,spot,iv");
  }

  VolSurface surface;
  surface.label = source;
  bool have_spot = false;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 4) fail("expected 4 fields, got " + std::to_string(fields.size()));
    double v[4];
    for (std::size_t i = 0; i < 4; ++i) {
      const std::string& f = fields[i];
      const auto res = std::from_chars(f.data(), f.data() + f.size(), v[i]);
      if (res.ec != std::errc{} || res.ptr != f.data() + f.size() || !std::isfinite(v[i])) {
        fail("field " + std::to_string(i + 1) + " ('" + f + "') is not a finite number");
      }
    }
    if (!(v[2] > 0.0)) fail("spot must be positive");
    if (!have_spot) {
      surface.spot = v[2];
      have_spot = true;
    }
    surface.quotes.push_back(Quote{v[0], v[1], std::log(v[2]), v[3]});
  }
  try {
    require_valid(surface);
  } catch (const DomainError& e) {
    throw InputError(source + ": " + e.what());
  }
  return surface;
}

VolSurface read_surface_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  return read_surface_csv(in, path);
}

void write_surface_csv(std::ostream& out, const VolSurface& surface) {
  out << "t_years,log_strike,spot,iv\n";
  for (const Quote& q : surface.quotes) {
    out << format_number(q.t) << ',' << format_number(q.k) << ',' << format_number(std::exp(q.x)) << ','
        << format_number(q.iv) << '\n';
  }
}

Json to_json(const CalibrationResult& result, const VolSurface& surface) {
  Json j;
  j["theta"] = to_json(result.theta_star);
  j["rmse"] = result.rmse;
  Json residuals = Json::array();
  for (std::size_t i = 0; i < surface.quotes.size(); ++i) {
    const Quote& q = surface.quotes[i];
    Json r;
    r["t"] = q.t;
    r["k"] = q.k;
    r["iv_obs"] = q.iv;
    if (std::isfinite(result.iv_model[i])) {
      r["iv_model"] = result.iv_model[i];
    } else {
      r["iv_model"] = nullptr;
    }
    residuals.push_back(std::move(r));
  }
  j["residuals"] = std::move(residuals);
  j["converged"] = result.converged;
  j["iterations"] = result.iterations;
  return j;
}

}  // namespace fmrlevy
