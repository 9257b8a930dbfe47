#include "fmrlevy/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <utility>

#include <Eigen/Dense>

#include "fmrlevy/errors.hpp"
#include "fmrlevy/parallel.hpp"

namespace fmrlevy {

void require_valid(const VolSurface& surface) {
  if (!(surface.spot > 0.0) || !std::isfinite(surface.spot)) throw DomainError("surface spot must be positive");
  if (surface.quotes.size() < 8) {
    throw DomainError("surface needs at least 8 quotes, got " + std::to_string(surface.quotes.size()));
  }
  std::set<std::pair<double, double>> seen;
  for (const Quote& q : surface.quotes) {
    if (!(q.t > 0.0) || !std::isfinite(q.t)) throw DomainError("quote maturity must be positive");
    if (!std::isfinite(q.k) || !std::isfinite(q.x)) throw DomainError("quote log-strike and log-spot must be finite");
    if (!(q.iv >= kMinImpliedVol && q.iv <= kMaxImpliedVol)) {
      std::ostringstream msg;
      msg << "quote implied volatility " << q.iv << " outside [" << kMinImpliedVol << ", " << kMaxImpliedVol << "]";
      throw DomainError(msg.str());
    }
    if (!seen.emplace(q.t, q.k).second) {
      std::ostringstream msg;
      msg << "duplicate quote at t = " << q.t << ", k = " << q.k;
      throw DomainError(msg.str());
    }
  }
}

std::string_view tag(ModelClass::Tag t) {
  switch (t) {
    case ModelClass::Tag::extended: return "extended";
    case ModelClass::Tag::classic: return "classic";
    case ModelClass::Tag::fmrsv: return "fmrsv";
  }
  return "unknown";
}

ModelClass::Tag model_class_from_tag(std::string_view t) {
  if (t == "extended") return ModelClass::Tag::extended;
  if (t == "classic" || t == "merton") return ModelClass::Tag::classic;
  if (t == "fmrsv") return ModelClass::Tag::fmrsv;
  throw DomainError("unknown model class '" + std::string(t) + "'");
}

namespace {

std::vector<std::string> measure_names(MeasureKind kind) {
  switch (kind) {
    case MeasureKind::merton: return {"m", "s"};
    case MeasureKind::gumbel: return {"m", "sigma_g"};
    case MeasureKind::dirac: return {"a"};
    case MeasureKind::variance_gamma: return {"a", "b", "B"};
    case MeasureKind::uniform: return {"a", "b"};
  }
  return {};
}

std::vector<double> measure_values(const LevyMeasure& measure) {
  if (auto* j = std::get_if<MertonJumps>(&measure)) return {j->m, j->s};
  if (auto* j = std::get_if<GumbelJumps>(&measure)) return {j->m, j->sigma};
  if (auto* j = std::get_if<DiracJumps>(&measure)) return {j->a};
  if (auto* j = std::get_if<VarianceGammaJumps>(&measure)) return {j->a, j->b, j->B};
  const auto& u = std::get<UniformJumps>(measure);
  return {u.a, u.b};
}

LevyMeasure measure_from(MeasureKind kind, const double* v) {
  switch (kind) {
    case MeasureKind::merton: return MertonJumps{v[0], v[1]};
    case MeasureKind::gumbel: return GumbelJumps{v[0], v[1]};
    case MeasureKind::dirac: return DiracJumps{v[0]};
    case MeasureKind::variance_gamma: return VarianceGammaJumps{v[0], v[1], v[2]};
    case MeasureKind::uniform: return UniformJumps{v[0], v[1]};
  }
  return MertonJumps{};
}

}  // namespace

std::vector<std::string> parameter_names(MeasureKind kind) {
  std::vector<std::string> names{"sig2_bar", "zeta_bar"};
  for (auto& n : measure_names(kind)) names.push_back(n);
  for (const char* g : {"v3e", "u3e", "v2e", "u2e"}) names.emplace_back(g);
  return names;
}

std::vector<double> pack(const ModelParams& theta) {
  std::vector<double> v{theta.sig2_bar, theta.zeta_bar};
  for (double p : measure_values(theta.measure)) v.push_back(p);
  for (double g : {theta.v3e, theta.u3e, theta.v2e, theta.u2e}) v.push_back(g);
  return v;
}

ModelParams unpack(const std::vector<double>& values, MeasureKind kind) {
  const std::size_t nm = measure_names(kind).size();
  if (values.size() != nm + 6) throw DomainError("parameter vector has the wrong length for the measure");
  ModelParams theta;
  theta.sig2_bar = values[0];
  theta.zeta_bar = values[1];
  theta.measure = measure_from(kind, values.data() + 2);
  theta.v3e = values[2 + nm];
  theta.u3e = values[3 + nm];
  theta.v2e = values[4 + nm];
  theta.u2e = values[5 + nm];
  return theta;
}

std::vector<bool> free_mask(const ModelClass& cls) {
  const std::size_t nm = measure_names(cls.measure).size();
  std::vector<bool> mask(nm + 6, true);
  switch (cls.tag) {
    case ModelClass::Tag::extended: break;
    case ModelClass::Tag::classic:
      for (std::size_t i = 0; i < 4; ++i) mask[2 + nm + i] = false;
      break;
    case ModelClass::Tag::fmrsv:
      mask[1] = false;
      for (std::size_t i = 0; i < nm; ++i) mask[2 + i] = false;
      mask[3 + nm] = false;  // u3e
      mask[5 + nm] = false;  // u2e
      break;
  }
  return mask;
}

Bounds default_bounds(MeasureKind kind) {
  Bounds b{{"sig2_bar", {1e-4, 1.0}}, {"zeta_bar", {1e-6, 20.0}}, {"v3e", {-1.0, 1.0}},
           {"u3e", {-1.0, 1.0}},      {"v2e", {-1.0, 1.0}},       {"u2e", {-1.0, 1.0}}};
  switch (kind) {
    case MeasureKind::merton:
      b["m"] = {-1.0, 1.0};
      b["s"] = {1e-3, 1.5};
      break;
    case MeasureKind::gumbel:
      b["m"] = {-1.0, 1.0};
      b["sigma_g"] = {1e-3, 1.5};
      break;
    case MeasureKind::dirac: b["a"] = {-1.0, 1.0}; break;
    case MeasureKind::variance_gamma:
      b["a"] = {1.05, 1000.0};
      b["b"] = {0.05, 1000.0};
      b["B"] = {1e-4, 200.0};
      break;
    case MeasureKind::uniform:
      b["a"] = {-1.0, 0.5};
      b["b"] = {-0.5, 1.0};
      break;
  }
  return b;
}

ModelParams default_init(const ModelClass& cls) {
  ModelParams theta;
  theta.sig2_bar = 0.04;
  theta.zeta_bar = cls.tag == ModelClass::Tag::fmrsv ? 0.0 : 0.5;
  switch (cls.measure) {
    case MeasureKind::merton: theta.measure = MertonJumps{-0.1, 0.2}; break;
    case MeasureKind::gumbel: theta.measure = GumbelJumps{0.0, 0.1}; break;
    case MeasureKind::dirac: theta.measure = DiracJumps{-0.1}; break;
    case MeasureKind::variance_gamma: theta.measure = VarianceGammaJumps{20.0, 10.0, 5.0}; break;
    case MeasureKind::uniform: theta.measure = UniformJumps{-0.2, 0.05}; break;
  }
  return theta;
}

namespace {

OptionSpec otm_spec(double t, double k, double x) {
  return OptionSpec{k >= x ? OptionKind::call : OptionKind::put, k, t, x};
}

double iv_from_price(const OptionSpec& spec, double price) { return implied_vol(spec.kind, spec.x, spec.k, spec.t, price); }

// Quotes in canonical (t, k) order, remembering where each came from.
struct Problem {
  std::vector<Quote> quotes;
  std::vector<std::size_t> origin;
  CalibrationOptions options;
};

struct Evaluation {
  std::vector<double> residuals;
  std::vector<double> iv;
  std::vector<PriceComponents> components;
  std::vector<Contour> contours;
  std::vector<bool> ok;
  double rmse = std::numeric_limits<double>::infinity();
};

double rmse_of(const std::vector<double>& r) {
  double s = 0.0;
  for (double v : r) s += v * v;
  return std::sqrt(s / static_cast<double>(r.size()));
}

// Prices every quote. With `base`, the quadrature grid of the base evaluation
// is reused so finite differences see a smooth function of θ.
Evaluation evaluate(const ModelParams& theta, const Problem& p, const Evaluation* base) {
  const std::size_t n = p.quotes.size();
  Evaluation e;
  e.residuals.assign(n, p.options.failure_residual);
  e.iv.assign(n, std::numeric_limits<double>::quiet_NaN());
  e.components.assign(n, PriceComponents{});
  e.contours.assign(n, Contour{});
  e.ok.assign(n, false);
  bool admissible = true;
  try {
    require_admissible(theta);
  } catch (const DomainError&) {
    admissible = false;
  }
  if (admissible) {
    std::vector<char> ok(n, 0);
    parallel_for(
        n,
        [&](std::size_t i) {
          const Quote& q = p.quotes[i];
          const OptionSpec spec = otm_spec(q.t, q.k, q.x);
          try {
            PriceComponents pc;
            Contour contour;
            bool priced = false;
            if (base != nullptr && base->ok[i]) {
              try {
                contour = base->contours[i];
                pc = price_components(theta, spec, contour);
                priced = true;
              } catch (const std::exception&) {
              }
            }
            if (!priced) {
              contour = default_contour(theta, spec);
              pc = price_components(theta, spec, contour);
              contour = pc.contour(contour.lambda_i);
            }
            const double iv = iv_from_price(spec, pc.approx());
            e.iv[i] = iv;
            e.residuals[i] = iv - q.iv;
            e.components[i] = pc;
            e.contours[i] = contour;
            ok[i] = 1;
          } catch (const std::exception&) {
          }
        },
        p.options.threads);
    for (std::size_t i = 0; i < n; ++i) e.ok[i] = ok[i] != 0;
  }
  e.rmse = rmse_of(e.residuals);
  return e;
}

struct Coordinates {
  std::vector<std::size_t> index;  // positions of free parameters in the packed vector
  std::vector<bool> log_scale;
  std::vector<Box> box;            // in transformed coordinates
};

double to_u(double v, bool log_scale) { return log_scale ? std::log(v) : v; }
double from_u(double u, bool log_scale) { return log_scale ? std::exp(u) : u; }

struct Fit {
  ModelParams theta;
  Evaluation eval;
  int iterations = 0;
  bool converged = false;
  std::vector<double> trace;
};

ModelParams apply(const std::vector<double>& packed, const Coordinates& c, const Eigen::VectorXd& u, MeasureKind kind) {
  std::vector<double> v = packed;
  for (std::size_t j = 0; j < c.index.size(); ++j) v[c.index[j]] = from_u(u[static_cast<Eigen::Index>(j)], c.log_scale[j]);
  return unpack(v, kind);
}

Eigen::VectorXd project(Eigen::VectorXd u, const Coordinates& c) {
  for (std::size_t j = 0; j < c.box.size(); ++j) {
    auto& x = u[static_cast<Eigen::Index>(j)];
    x = std::clamp(x, c.box[j].lo, c.box[j].hi);
  }
  return u;
}

Eigen::VectorXd as_vector(const std::vector<double>& r) {
  return Eigen::Map<const Eigen::VectorXd>(r.data(), static_cast<Eigen::Index>(r.size()));
}

Fit levenberg_marquardt(const Problem& p, const std::vector<double>& packed, const Coordinates& c,
                        Eigen::VectorXd u, MeasureKind kind) {
  constexpr double kGradTol = 1e-12;
  constexpr double kStepTol = 1e-10;
  constexpr double kCostTol = 1e-12;
  constexpr double kZeroRmse = 1e-12;
  const auto d = static_cast<Eigen::Index>(c.index.size());

  Fit fit;
  fit.theta = apply(packed, c, u, kind);
  fit.eval = evaluate(fit.theta, p, nullptr);
  fit.trace.push_back(fit.eval.rmse);
  if (std::none_of(fit.eval.ok.begin(), fit.eval.ok.end(), [](bool v) { return v; })) return fit;
  if (d == 0 || fit.eval.rmse < kZeroRmse) {
    fit.converged = true;
    return fit;
  }

  double mu = -1.0;
  for (int iter = 0; iter < p.options.max_iterations; ++iter) {
    const Eigen::VectorXd r = as_vector(fit.eval.residuals);
    const Eigen::Index n = r.size();
    Eigen::MatrixXd J(n, d);
    for (Eigen::Index j = 0; j < d; ++j) {
      const double h = 1e-6 * std::max(1.0, std::abs(u[j]));
      Eigen::VectorXd up = u;
      // Step away from the nearer bound so the difference stays feasible.
      const bool backward = up[j] + h > c.box[static_cast<std::size_t>(j)].hi;
      up[j] += backward ? -h : h;
      const Evaluation e = evaluate(apply(packed, c, up, kind), p, &fit.eval);
      J.col(j) = (as_vector(e.residuals) - r) / (backward ? -h : h);
    }
    const Eigen::VectorXd g = J.transpose() * r;
    // Projected gradient: components pushing against an active bound do not count.
    Eigen::VectorXd pg = g;
    for (Eigen::Index j = 0; j < d; ++j) {
      const Box& b = c.box[static_cast<std::size_t>(j)];
      if ((u[j] <= b.lo && g[j] > 0.0) || (u[j] >= b.hi && g[j] < 0.0)) pg[j] = 0.0;
    }
    if (pg.lpNorm<Eigen::Infinity>() < kGradTol) {
      fit.converged = true;
      break;
    }
    const Eigen::MatrixXd A = J.transpose() * J;
    const Eigen::VectorXd scale = A.diagonal().cwiseMax(1e-12);
    if (mu < 0.0) mu = 1e-3;

    const double cost = 0.5 * r.squaredNorm();
    bool accepted = false;
    bool tiny_step = false;
    for (int attempt = 0; attempt < 30 && !accepted; ++attempt) {
      Eigen::MatrixXd M = A;
      M.diagonal() += mu * scale;
      const Eigen::VectorXd delta = M.ldlt().solve(-g);
      const Eigen::VectorXd trial = project(u + delta, c);
      if ((trial - u).norm() < kStepTol * (u.norm() + kStepTol)) {
        tiny_step = true;
        break;
      }
      const ModelParams theta = apply(packed, c, trial, kind);
      Evaluation e = evaluate(theta, p, nullptr);
      const double trial_cost = 0.5 * as_vector(e.residuals).squaredNorm();
      if (trial_cost < cost) {
        accepted = true;
        const double decrease = (cost - trial_cost) / std::max(cost, 1e-300);
        u = trial;
        fit.theta = theta;
        fit.eval = std::move(e);
        fit.trace.push_back(fit.eval.rmse);
        fit.iterations = iter + 1;
        mu = std::max(mu / 3.0, 1e-12);
        if (decrease < kCostTol || fit.eval.rmse < kZeroRmse) {
          fit.converged = true;
          return fit;
        }
      } else {
        mu *= 4.0;
      }
    }
    if (tiny_step) {
      fit.converged = true;
      break;
    }
    if (!accepted) break;  // stalled: best-so-far, not converged
  }
  return fit;
}

std::vector<Eigen::VectorXd> latin_hypercube(const Coordinates& c, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t d = c.box.size();
  std::vector<Eigen::VectorXd> out(static_cast<std::size_t>(count), Eigen::VectorXd(static_cast<Eigen::Index>(d)));
  std::vector<int> perm(static_cast<std::size_t>(count));
  for (std::size_t j = 0; j < d; ++j) {
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    for (int s = 0; s < count; ++s) {
      const double cell = (perm[static_cast<std::size_t>(s)] + unit(rng)) / count;
      out[static_cast<std::size_t>(s)][static_cast<Eigen::Index>(j)] = c.box[j].lo + cell * (c.box[j].hi - c.box[j].lo);
    }
  }
  return out;
}

}  // namespace

double model_iv(const ModelParams& theta, double t, double k, double x) {
  const OptionSpec spec = otm_spec(t, k, x);
  return iv_from_price(spec, price_approx(theta, spec));
}

std::vector<double> iv_residuals(const ModelParams& theta, const VolSurface& surface,
                                 const CalibrationOptions& options) {
  Problem p;
  p.quotes = surface.quotes;
  p.options = options;
  return evaluate(theta, p, nullptr).residuals;
}

CalibrationResult calibrate(const VolSurface& surface, const ModelClass& cls, const ModelParams& init,
                            const Bounds& bounds, const CalibrationOptions& options) {
  require_valid(surface);
  if (kind_of(init.measure) != cls.measure) {
    throw DomainError("initial measure does not match the model class measure");
  }

  Problem p;
  p.options = options;
  p.origin.resize(surface.quotes.size());
  std::iota(p.origin.begin(), p.origin.end(), std::size_t{0});
  std::stable_sort(p.origin.begin(), p.origin.end(), [&](std::size_t a, std::size_t b) {
    const Quote& qa = surface.quotes[a];
    const Quote& qb = surface.quotes[b];
    return qa.t != qb.t ? qa.t < qb.t : qa.k < qb.k;
  });
  for (std::size_t i : p.origin) p.quotes.push_back(surface.quotes[i]);

  // Frozen coordinates take the class values.
  ModelParams start = init;
  if (cls.tag == ModelClass::Tag::classic) start.v3e = start.u3e = start.v2e = start.u2e = 0.0;
  if (cls.tag == ModelClass::Tag::fmrsv) {
    start.zeta_bar = 0.0;
    start.u3e = start.u2e = 0.0;
  }
  require_admissible(start);

  const std::vector<std::string> names = parameter_names(cls.measure);
  const std::vector<bool> mask = free_mask(cls);
  const std::vector<double> packed = pack(start);
  Coordinates c;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (!mask[i]) continue;
    const auto it = bounds.find(names[i]);
    if (it == bounds.end()) throw DomainError("no bounds given for parameter '" + names[i] + "'");
    const Box b = it->second;
    if (!(b.lo <= b.hi)) throw DomainError("empty bounds for parameter '" + names[i] + "'");
    if (packed[i] < b.lo || packed[i] > b.hi) {
      std::ostringstream msg;
      msg << "initial " << names[i] << " = " << packed[i] << " outside [" << b.lo << ", " << b.hi << "]";
      throw DomainError(msg.str());
    }
    const bool log_scale = b.lo > 0.0;
    c.index.push_back(i);
    c.log_scale.push_back(log_scale);
    c.box.push_back({to_u(b.lo, log_scale), to_u(b.hi, log_scale)});
  }

  Eigen::VectorXd u0(static_cast<Eigen::Index>(c.index.size()));
  for (std::size_t j = 0; j < c.index.size(); ++j) u0[static_cast<Eigen::Index>(j)] = to_u(packed[c.index[j]], c.log_scale[j]);

  Fit best = levenberg_marquardt(p, packed, c, u0, cls.measure);
  if (cls.tag == ModelClass::Tag::extended && options.starts > 0 && best.eval.rmse > options.good_enough_rmse &&
      !c.box.empty()) {
    for (const Eigen::VectorXd& s : latin_hypercube(c, options.starts, options.seed)) {
      Fit fit = levenberg_marquardt(p, packed, c, s, cls.measure);
      if (fit.eval.rmse < best.eval.rmse) best = std::move(fit);
      if (best.eval.rmse <= options.good_enough_rmse) break;
    }
  }

  CalibrationResult out;
  out.theta_star = best.theta;
  out.rmse = best.eval.rmse;
  out.iterations = best.iterations;
  out.converged = best.converged;
  out.objective_trace = best.trace;
  out.residuals.resize(p.quotes.size());
  out.iv_model.resize(p.quotes.size());
  for (std::size_t i = 0; i < p.quotes.size(); ++i) {
    out.residuals[p.origin[i]] = best.eval.residuals[i];
    out.iv_model[p.origin[i]] = best.eval.iv[i];
  }
  return out;
}

}  // namespace fmrlevy
