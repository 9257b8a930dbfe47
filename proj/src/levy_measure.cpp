#include "fmrlevy/levy_measure.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "fmrlevy/complex_gamma.hpp"
#include "fmrlevy/errors.hpp"

namespace fmrlevy {

namespace {

using cplx = std::complex<double>;
using namespace std::complex_literals;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// e^u - 1 - u, accurate for small |u|.
cplx exp_m1_m_id(cplx u) {
  if (std::abs(u) < 1e-2) {
    const cplx u2 = u * u;
    return u2 * (0.5 + u * (1.0 / 6 + u * (1.0 / 24 + u * (1.0 / 120 + u * (1.0 / 720 + u / 5040.0)))));
  }
  return std::exp(u) - 1.0 - u;
}

// log(1 + w) - w, accurate for small |w|.
cplx log1p_m_id(cplx w) {
  if (std::abs(w) < 1e-3) {
    const cplx w2 = w * w;
    return w2 * (-0.5 + w * (1.0 / 3 + w * (-0.25 + w * (0.2 + w * (-1.0 / 6)))));
  }
  return std::log(1.0 + w) - w;
}

// sin(w)/w - 1; four-term series for small arguments.
cplx sinc_m1(cplx w) {
  if (std::abs(2.0 * w) < 1e-4) {
    const cplx w2 = w * w;
    return w2 * (-1.0 / 6 + w2 * (1.0 / 120 + w2 * (-1.0 / 5040 + w2 / 362880.0)));
  }
  return std::sin(w) / w - 1.0;
}

bool finite(double v) { return std::isfinite(v); }

}  // namespace

MeasureKind kind_of(const LevyMeasure& measure) {
  return static_cast<MeasureKind>(measure.index());
}

std::string_view tag(MeasureKind kind) {
  switch (kind) {
    case MeasureKind::merton: return "merton";
    case MeasureKind::gumbel: return "gumbel";
    case MeasureKind::dirac: return "dirac";
    case MeasureKind::variance_gamma: return "vg";
    case MeasureKind::uniform: return "uniform";
  }
  return "unknown";
}

MeasureKind measure_kind_from_tag(std::string_view t) {
  if (t == "merton") return MeasureKind::merton;
  if (t == "gumbel") return MeasureKind::gumbel;
  if (t == "dirac") return MeasureKind::dirac;
  if (t == "vg" || t == "variancegamma" || t == "variance_gamma") return MeasureKind::variance_gamma;
  if (t == "uniform") return MeasureKind::uniform;
  throw DomainError("unknown measure variant '" + std::string(t) + "'");
}

std::vector<Violation> validate(const LevyMeasure& measure) {
  std::vector<Violation> out;
  auto need = [&out](bool ok, std::string condition, std::string parameter, double value) {
    if (!ok) out.push_back({std::move(condition), std::move(parameter), value});
  };
  std::visit(
      overloaded{
          [&](const MertonJumps& j) {
            need(finite(j.m), "finite parameter", "m", j.m);
            need(finite(j.s) && j.s >= 0.0, "s >= 0", "s", j.s);
          },
          [&](const GumbelJumps& j) {
            need(finite(j.m), "finite parameter", "m", j.m);
            need(finite(j.sigma) && j.sigma > 0.0, "sigma_g > 0", "sigma_g", j.sigma);
          },
          [&](const DiracJumps& j) { need(finite(j.a), "finite parameter", "a", j.a); },
          [&](const VarianceGammaJumps& j) {
            need(finite(j.a) && j.a > 1.0, "int_{|z|>=1} e^z nu(dz) < inf requires a > 1", "a", j.a);
            need(finite(j.b) && j.b > 0.0, "int_{|z|>=1} |z| nu(dz) < inf requires b > 0", "b", j.b);
            need(finite(j.B) && j.B >= 0.0, "B >= 0", "B", j.B);
          },
          [&](const UniformJumps& j) {
            need(finite(j.a), "finite parameter", "a", j.a);
            need(finite(j.b), "finite parameter", "b", j.b);
            if (finite(j.a) && finite(j.b)) need(j.a < j.b, "a < b", "b", j.b);
          },
      },
      measure);
  return out;
}

void require_admissible(const LevyMeasure& measure) {
  const auto violations = validate(measure);
  if (violations.empty()) return;
  std::ostringstream msg;
  msg << "inadmissible " << tag(kind_of(measure)) << " measure:";
  for (const auto& v : violations) msg << " [" << v.condition << ": " << v.parameter << " = " << v.value << "]";
  throw DomainError(msg.str());
}

LevyMeasure merton(double m, double s) {
  LevyMeasure out = MertonJumps{m, s};
  require_admissible(out);
  return out;
}

LevyMeasure gumbel(double m, double sigma) {
  LevyMeasure out = GumbelJumps{m, sigma};
  require_admissible(out);
  return out;
}

LevyMeasure dirac(double a) {
  LevyMeasure out = DiracJumps{a};
  require_admissible(out);
  return out;
}

LevyMeasure variance_gamma(double a, double b, double B) {
  LevyMeasure out = VarianceGammaJumps{a, b, B};
  require_admissible(out);
  return out;
}

LevyMeasure uniform(double a, double b) {
  LevyMeasure out = UniformJumps{a, b};
  require_admissible(out);
  return out;
}

Strip analyticity_strip(const LevyMeasure& measure) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return std::visit(overloaded{
                        [](const GumbelJumps& j) { return Strip{-inf, 1.0 / j.sigma}; },
                        // Branch arguments 1 - iλ/a and 1 + iλ/b keep positive real part.
                        [](const VarianceGammaJumps& j) {
                          return Strip{-j.a, j.B > 0.0 ? j.b : inf};
                        },
                        [](const auto&) { return Strip{}; },
                    },
                    measure);
}

std::complex<double> char_integral(const LevyMeasure& measure, std::complex<double> lambda) {
  if (lambda == 0.0) return 0.0;
  if (!analyticity_strip(measure).contains(lambda.imag())) {
    std::ostringstream msg;
    msg << "Im(lambda) = " << lambda.imag() << " outside the analyticity strip of the "
        << tag(kind_of(measure)) << " measure";
    throw DomainError(msg.str());
  }
  const cplx value = std::visit(
      overloaded{
          [&](const MertonJumps& j) {
            const cplx u = 1i * lambda * j.m - 0.5 * j.s * j.s * lambda * lambda;
            return exp_m1_m_id(u) - 0.5 * j.s * j.s * lambda * lambda;
          },
          [&](const GumbelJumps& j) {
            // E[e^{iλZ}] = e^{iλm} Γ(1 + iλσ); mean m - σ γ_E.
            const cplx lg = log_gamma(1.0 + 1i * lambda * j.sigma);
            const cplx u = 1i * lambda * j.m + lg;
            return exp_m1_m_id(u) + lg + 1i * lambda * j.sigma * std::numbers::egamma;
          },
          [&](const DiracJumps& j) { return exp_m1_m_id(1i * lambda * j.a); },
          [&](const VarianceGammaJumps& j) {
            return -log1p_m_id(-1i * lambda / j.a) - j.B * log1p_m_id(1i * lambda / j.b);
          },
          [&](const UniformJumps& j) {
            // (e^{iλb} - e^{iλa}) / (iλ(b-a)) = e^{iλc} sin(λh)/(λh)
            const double c = 0.5 * (j.a + j.b);
            const double h = 0.5 * (j.b - j.a);
            const cplx u = 1i * lambda * c;
            return exp_m1_m_id(u) + std::exp(u) * sinc_m1(lambda * h);
          },
      },
      measure);
  if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
    std::ostringstream msg;
    msg << "non-finite characteristic integral at lambda = " << lambda;
    throw NumericError(msg.str());
  }
  return value;
}

double exp_moment(const LevyMeasure& measure) {
  return std::visit(
      overloaded{
          [](const MertonJumps& j) { return std::expm1(j.m + 0.5 * j.s * j.s) - j.m; },
          [](const GumbelJumps& j) {
            return std::expm1(j.m + std::lgamma(1.0 + j.sigma)) - j.m + j.sigma * std::numbers::egamma;
          },
          [](const DiracJumps& j) { return std::expm1(j.a) - j.a; },
          [](const VarianceGammaJumps& j) {
            return -std::log1p(-1.0 / j.a) - 1.0 / j.a - j.B * std::log1p(1.0 / j.b) + j.B / j.b;
          },
          [](const UniformJumps& j) {
            const double c = 0.5 * (j.a + j.b);
            const double h = 0.5 * (j.b - j.a);
            const double shc = h < 1e-4 ? h * h / 6.0 * (1.0 + h * h / 20.0) : std::sinh(h) / h - 1.0;
            return (std::expm1(c) - c) + std::exp(c) * shc;
          },
      },
      measure);
}

double mean_jump(const LevyMeasure& measure) {
  return std::visit(overloaded{
                        [](const MertonJumps& j) { return j.m; },
                        [](const GumbelJumps& j) { return j.m - j.sigma * std::numbers::egamma; },
                        [](const DiracJumps& j) { return j.a; },
                        [](const VarianceGammaJumps& j) { return 1.0 / j.a - j.B / j.b; },
                        [](const UniformJumps& j) { return 0.5 * (j.a + j.b); },
                    },
                    measure);
}

bool is_probability_measure(const LevyMeasure& measure) {
  return kind_of(measure) != MeasureKind::variance_gamma;
}

}  // namespace fmrlevy
