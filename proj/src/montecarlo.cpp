#include "fmrlevy/montecarlo.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "fmrlevy/errors.hpp"
#include "fmrlevy/parallel.hpp"

namespace fmrlevy {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Jump size from one base variate. Normal-based measures take a standard
// normal draw, the rest a uniform; the antithetic partner uses -v or 1-v.
struct JumpSampler {
  LevyMeasure measure;
  bool gaussian = false;

  double size(double v) const {
    return std::visit(overloaded{
                          [&](const MertonJumps& j) { return j.m + j.s * v; },
                          [&](const GumbelJumps& j) { return j.m + j.sigma * std::log(-std::log1p(-std::min(v, 1.0 - 0x1p-53))); },
                          [&](const DiracJumps& j) { return j.a; },
                          [&](const UniformJumps& j) { return j.a + (j.b - j.a) * v; },
                          [&](const VarianceGammaJumps&) { return 0.0; },
                      },
                      measure);
  }
  double mirror(double v) const { return gaussian ? -v : 1.0 - v; }
};

// Inverse-CDF Poisson draw from a single uniform.
int poisson_count(double mean, double u) {
  double p = std::exp(-mean);
  double cdf = p;
  int k = 0;
  while (u > cdf && k < 64) {
    ++k;
    p *= mean / k;
    cdf += p;
  }
  return k;
}

}  // namespace

TerminalSample simulate_terminal(const OuSpec& ou, const LevyMeasure& measure, double t, double x,
                                 const McConfig& cfg) {
  require_valid(ou);
  require_admissible(measure);
  if (!is_probability_measure(measure)) {
    throw DomainError("Monte Carlo needs a finite-activity jump measure; variance gamma is not supported");
  }
  if (!(t > 0.0)) throw DomainError("Monte Carlo maturity must be positive");
  if (cfg.n_paths < 10'000) throw DomainError("Monte Carlo needs at least 10^4 paths");
  if (cfg.antithetic && cfg.n_paths % 2 != 0) throw DomainError("antithetic sampling needs an even path count");

  const double dt_max = ou.eps * ou.eps / 20.0;
  const double dt_req = cfg.dt > 0.0 ? cfg.dt : dt_max;
  if (dt_req > dt_max * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "time step " << dt_req << " does not resolve the fast scale; need dt <= eps^2/20 = " << dt_max;
    throw DomainError(msg.str());
  }
  const auto steps = static_cast<std::size_t>(std::ceil(t / dt_req - 1e-9));
  const double dt = t / static_cast<double>(steps);
  if (static_cast<double>(cfg.n_paths) * static_cast<double>(steps) > cfg.budget) {
    std::ostringstream msg;
    msg << "simulation needs " << static_cast<double>(cfg.n_paths) * steps << " path-steps, budget is " << cfg.budget;
    throw BudgetError(msg.str());
  }

  const auto start = std::chrono::steady_clock::now();
  const double sqdt = std::sqrt(dt);
  const double rho_perp = std::sqrt(std::max(0.0, 1.0 - ou.rho * ou.rho));
  const double kappa = exp_moment(measure);
  const double mbar = mean_jump(measure);
  // Drift of X: γ(y) minus the compensator of ∫ z dN, i.e. -σ²/2 - ζ(e^z-1 averaged).
  const double jump_drift = kappa + mbar;
  const double y_pull = dt / (ou.eps * ou.eps);
  const double y_shift = ou.Lam * ou.beta / ou.eps * dt;
  const double y_vol = ou.beta / ou.eps * sqdt;
  const JumpSampler jumps{measure, kind_of(measure) == MeasureKind::merton};

  const std::size_t group = cfg.antithetic ? 2 : 1;
  const std::size_t units = cfg.n_paths / group;
  TerminalSample out;
  out.antithetic = cfg.antithetic;
  out.x.assign(cfg.n_paths, 0.0);

  parallel_for(
      units,
      [&](std::size_t unit) {
        std::mt19937_64 rng(splitmix64(cfg.seed ^ splitmix64(unit + 1)));
        std::normal_distribution<double> normal;
        std::uniform_real_distribution<double> uniform;
        double xs[2] = {x, x};
        double ys[2] = {cfg.y0, cfg.y0};
        if (cfg.stationary_start) {
          // N(-εΛβ, β²/2), the invariant law of the pricing-measure OU.
          const double z = normal(rng);
          const double mean = -ou.eps * ou.Lam * ou.beta;
          const double sd = ou.beta / std::sqrt(2.0);
          ys[0] = mean + sd * z;
          ys[1] = mean - sd * z;
        }
        std::vector<double> sizes;
        for (std::size_t step = 0; step < steps; ++step) {
          const double zb = normal(rng);
          const double zw = ou.rho * zb + rho_perp * normal(rng);
          const double u = uniform(rng);
          int counts[2] = {0, 0};
          for (std::size_t p = 0; p < group; ++p) {
            const double sign = p == 0 ? 1.0 : -1.0;
            const double level = std::exp(ys[p]);
            const double vol = ou.a * level;
            const double intensity = ou.b * level;
            counts[p] = poisson_count(intensity * dt, p == 0 ? u : 1.0 - u);
            xs[p] += (-0.5 * vol * vol - intensity * jump_drift) * dt + vol * sqdt * sign * zw;
            ys[p] += -ys[p] * y_pull - y_shift + y_vol * sign * zb;
          }
          const int needed = std::max(counts[0], counts[1]);
          sizes.resize(static_cast<std::size_t>(needed));
          for (auto& v : sizes) v = jumps.gaussian ? normal(rng) : uniform(rng);
          for (std::size_t p = 0; p < group; ++p) {
            for (int j = 0; j < counts[p]; ++j) {
              const double v = sizes[static_cast<std::size_t>(j)];
              xs[p] += jumps.size(p == 0 ? v : jumps.mirror(v));
            }
          }
          if (!std::isfinite(xs[0]) || !std::isfinite(xs[group - 1])) {
            std::ostringstream msg;
            msg << "non-finite path: seed " << cfg.seed << ", path " << unit * group << ", step " << step;
            throw NumericError(msg.str());
          }
        }
        for (std::size_t p = 0; p < group; ++p) out.x[unit * group + p] = xs[p];
      },
      cfg.threads);

  out.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

McResult estimate(const TerminalSample& sample, const std::function<double(double)>& payoff) {
  const std::size_t group = sample.antithetic ? 2 : 1;
  const std::size_t n = sample.x.size() / group;
  if (n < 2) throw DomainError("estimate needs at least two samples");
  // Welford in path order: deterministic regardless of how paths were produced.
  double mean = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double v = 0.0;
    for (std::size_t p = 0; p < group; ++p) v += payoff(sample.x[i * group + p]);
    v /= static_cast<double>(group);
    const double delta = v - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (v - mean);
  }
  McResult r;
  r.price = mean;
  r.std_error = std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n));
  r.effective_paths = n;
  r.elapsed_seconds = sample.elapsed_seconds;
  return r;
}

namespace {

std::function<double(double)> payoff_of(OptionKind kind, double k) {
  const double strike = std::exp(k);
  if (kind == OptionKind::call) return [strike](double x) { return std::max(std::exp(x) - strike, 0.0); };
  return [strike](double x) { return std::max(strike - std::exp(x), 0.0); };
}

}  // namespace

McResult simulate_price(const OuSpec& ou, const LevyMeasure& measure, const OptionSpec& option, const McConfig& cfg) {
  require_valid(option);
  return estimate(simulate_terminal(ou, measure, option.t, option.x, cfg), payoff_of(option.kind, option.k));
}

std::vector<McResult> simulate_prices(const OuSpec& ou, const LevyMeasure& measure, OptionKind kind, double t,
                                      double x, std::span<const double> log_strikes, const McConfig& cfg) {
  const TerminalSample sample = simulate_terminal(ou, measure, t, x, cfg);
  std::vector<McResult> out;
  out.reserve(log_strikes.size());
  for (double k : log_strikes) out.push_back(estimate(sample, payoff_of(kind, k)));
  return out;
}

}  // namespace fmrlevy
