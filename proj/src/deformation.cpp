#include "minlen/deformation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/fpclassify.hpp>
#include <boost/math/interpolators/pchip.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "minlen/errors.hpp"

namespace minlen {

namespace {

using Pchip = boost::math::interpolators::pchip<std::vector<double>>;

[[noreturn]] void domain_error(const char* what, double x, double limit) {
  throw DomainError(std::string(what) + ": |" + std::to_string(x) + "| exceeds " +
                    std::to_string(limit));
}

} // namespace

struct DeformationFamily::Table {
  std::vector<double> p;
  std::vector<double> g;
  Pchip interp;

  static Pchip make(const std::vector<double>& p, const std::vector<double>& g) {
    std::vector<double> x, y;
    x.reserve(2 * p.size() - 1);
    y.reserve(2 * p.size() - 1);
    for (std::size_t i = p.size() - 1; i > 0; --i) {
      x.push_back(-p[i]);
      y.push_back(-g[i]);
    }
    x.insert(x.end(), p.begin(), p.end());
    y.insert(y.end(), g.begin(), g.end());
    return Pchip(std::move(x), std::move(y));
  }

  Table(std::vector<double> p_in, std::vector<double> g_in)
      : p(std::move(p_in)), g(std::move(g_in)), interp(make(p, g)) {}

  // g^{-1}(P) for 0 <= P <= g(b).
  double inverse(double P) const {
    if (P <= 0.0) return 0.0;
    if (P >= g.back()) return p.back();
    auto f = [&](double x) { return interp(x) - P; };
    std::uintmax_t iters = 200;
    auto tol = boost::math::tools::eps_tolerance<double>(52);
    auto [lo, hi] = boost::math::tools::toms748_solve(f, 0.0, p.back(), -P, g.back() - P, tol, iters);
    return 0.5 * (lo + hi);
  }
};

std::string_view to_string(DeformationKind kind) {
  switch (kind) {
  case DeformationKind::Cutoff: return "cutoff";
  case DeformationKind::Kempf: return "kempf";
  case DeformationKind::InverseSqrt: return "inversesqrt";
  case DeformationKind::Custom: return "custom";
  }
  return "unknown";
}

DeformationKind parse_deformation_kind(std::string_view text) {
  if (text == "cutoff") return DeformationKind::Cutoff;
  if (text == "kempf") return DeformationKind::Kempf;
  if (text == "inversesqrt" || text == "inverse_sqrt") return DeformationKind::InverseSqrt;
  if (text == "custom") return DeformationKind::Custom;
  throw ConfigError("unknown deformation kind '" + std::string(text) + "'");
}

DeformationFamily::DeformationFamily(DeformationKind kind, double beta, double b)
    : kind_(kind), beta_(beta), b_(b) {}

DeformationFamily DeformationFamily::cutoff(double b) {
  if (!(b > 0.0)) throw ConfigError("cutoff family requires b > 0");
  return DeformationFamily(DeformationKind::Cutoff, 0.0, b);
}

DeformationFamily DeformationFamily::kempf(double beta) {
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw ConfigError("kempf family requires finite beta >= 0");
  const double b = beta > 0.0 ? std::numbers::pi / (2.0 * std::sqrt(beta)) : kInfinity;
  return DeformationFamily(DeformationKind::Kempf, beta, b);
}

DeformationFamily DeformationFamily::inverse_sqrt(double beta) {
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw ConfigError("inversesqrt family requires finite beta >= 0");
  const double b = beta > 0.0 ? 1.0 / std::sqrt(beta) : kInfinity;
  return DeformationFamily(DeformationKind::InverseSqrt, beta, b);
}

DeformationFamily DeformationFamily::custom(std::vector<double> p, std::vector<double> g) {
  if (p.size() != g.size()) throw ConfigError("custom table: p and g columns differ in length");
  if (p.size() < 3) throw ConfigError("custom table: at least 3 rows required");
  if (p.front() != 0.0 || g.front() != 0.0) throw ConfigError("custom table must start at p = 0, g = 0");
  for (std::size_t i = 1; i < p.size(); ++i) {
    if (!(p[i] > p[i - 1]) || !(g[i] > g[i - 1]) || !std::isfinite(p[i]) || !std::isfinite(g[i])) {
      throw ConfigError("custom table: p and g must be finite and strictly increasing");
    }
  }
  DeformationFamily family(DeformationKind::Custom, 0.0, p.back());
  family.table_ = std::make_shared<const Table>(std::move(p), std::move(g));
  return family;
}

bool DeformationFamily::diverges_at_endpoint() const {
  return bounded() && (kind_ == DeformationKind::Kempf || kind_ == DeformationKind::InverseSqrt);
}

double DeformationFamily::momentum_limit() const {
  if (!bounded() || diverges_at_endpoint()) return kInfinity;
  if (kind_ == DeformationKind::Custom) return table_->g.back();
  return b_;
}

double DeformationFamily::g_unchecked(double p) const {
  switch (kind_) {
  case DeformationKind::Cutoff:
    return p;
  case DeformationKind::Kempf: {
    if (beta_ == 0.0) return p;
    const double root = std::sqrt(beta_);
    return std::tan(root * p) / root;
  }
  case DeformationKind::InverseSqrt: {
    if (beta_ == 0.0) return p;
    const double x = std::sqrt(beta_) * p;
    return p / std::sqrt((1.0 - x) * (1.0 + x));
  }
  case DeformationKind::Custom:
    return table_->interp(p);
  }
  return p;
}

double DeformationFamily::g(double p) const {
  const double ap = std::abs(p);
  if (ap > b_ || std::isnan(p)) domain_error("g(p)", p, b_);
  if (ap == b_ && diverges_at_endpoint()) {
    throw DomainError("g(p) diverges at the endpoint |p| = b");
  }
  return g_unchecked(p);
}

double DeformationFamily::g_prime(double p) const {
  const double ap = std::abs(p);
  if (ap > b_ || (ap == b_ && diverges_at_endpoint())) domain_error("g'(p)", p, b_);
  switch (kind_) {
  case DeformationKind::Cutoff:
    return 1.0;
  case DeformationKind::Kempf: {
    const double c = std::cos(std::sqrt(beta_) * p);
    return 1.0 / (c * c);
  }
  case DeformationKind::InverseSqrt: {
    const double x = std::sqrt(beta_) * p;
    return std::pow((1.0 - x) * (1.0 + x), -1.5);
  }
  case DeformationKind::Custom:
    return table_->interp.prime(p);
  }
  return 1.0;
}

double DeformationFamily::g_increment(double v, double delta) const {
  if (delta == 0.0) return 0.0;
  const double u = v + delta;
  switch (kind_) {
  case DeformationKind::Cutoff:
    return delta;
  case DeformationKind::Kempf: {
    if (beta_ == 0.0) return delta;
    const double root = std::sqrt(beta_);
    return std::sin(root * delta) / (root * std::cos(root * u) * std::cos(root * v));
  }
  case DeformationKind::InverseSqrt: {
    if (beta_ == 0.0) return delta;
    const double reach = b_ - std::max(std::abs(u), std::abs(v));
    if (std::abs(delta) > 0.05 * reach) return g_unchecked(u) - g_unchecked(v);
    // Integrate over the offset so that delta enters exactly.
    auto derivative = [this, v](double t) {
      const double y = std::sqrt(beta_) * (v + t);
      return std::pow((1.0 - y) * (1.0 + y), -1.5);
    };
    return boost::math::quadrature::gauss<double, 10>::integrate(derivative, 0.0, delta);
  }
  case DeformationKind::Custom:
    return g_unchecked(u) - g_unchecked(v);
  }
  return delta;
}

double DeformationFamily::g_remainder(double v, double delta) const {
  if (delta == 0.0 || kind_ == DeformationKind::Cutoff) return 0.0;
  if (kind_ != DeformationKind::Custom && beta_ == 0.0) return 0.0;
  const double u = v + delta;
  const double reach = b_ - std::max(std::abs(u), std::abs(v));
  if (kind_ == DeformationKind::Custom || std::abs(delta) > 0.05 * reach) {
    return g_increment(v, delta) - g_prime(v) * delta;
  }
  // Integral form of the Taylor remainder: int_0^delta (delta - t) g''(v + t) dt.
  const double root = std::sqrt(beta_);
  auto second = [this, root](double t) {
    if (kind_ == DeformationKind::Kempf) {
      const double c = std::cos(root * t);
      return 2.0 * root * std::tan(root * t) / (c * c);
    }
    const double y = root * t;
    return 3.0 * beta_ * t * std::pow((1.0 - y) * (1.0 + y), -2.5);
  };
  auto weighted = [&](double t) { return (delta - t) * second(v + t); };
  return boost::math::quadrature::gauss<double, 10>::integrate(weighted, 0.0, delta);
}

double DeformationFamily::g_squared_clamped(double p) const noexcept {
  if (std::abs(p) >= b_) {
    if (diverges_at_endpoint()) return kInfinity;
    p = std::copysign(b_, p);
  }
  const double value = g_unchecked(p);
  return value * value;
}

double DeformationFamily::f(double P) const {
  const double a = momentum_limit();
  const double aP = std::abs(P);
  if (aP > a || std::isnan(P)) domain_error("f(P)", P, a);
  switch (kind_) {
  case DeformationKind::Cutoff:
    return 1.0;
  case DeformationKind::Kempf:
    return 1.0 + beta_ * P * P;
  case DeformationKind::InverseSqrt:
    return std::pow(1.0 + beta_ * P * P, 1.5);
  case DeformationKind::Custom:
    return table_->interp.prime(table_->inverse(aP));
  }
  return 1.0;
}

double DeformationFamily::minimal_length(double hbar) const {
  if (!bounded()) return 0.0;
  return std::numbers::pi * hbar / (2.0 * b_);
}

const std::vector<double>& DeformationFamily::table_p() const {
  static const std::vector<double> empty;
  return table_ ? table_->p : empty;
}

const std::vector<double>& DeformationFamily::table_g() const {
  static const std::vector<double> empty;
  return table_ ? table_->g : empty;
}

bool DeformationFamily::operator==(const DeformationFamily& other) const {
  if (kind_ != other.kind_ || beta_ != other.beta_ || b_ != other.b_) return false;
  if (kind_ != DeformationKind::Custom) return true;
  return table_p() == other.table_p() && table_g() == other.table_g();
}

MassScalingRule MassScalingRule::from_gamma(double gamma) {
  if (!(gamma > 0.0)) throw ConfigError("gamma must be positive");
  return {std::numbers::pi / (2.0 * std::sqrt(gamma))};
}

DeformationFamily from_mass(const MassScalingRule& rule, double m, DeformationKind kind) {
  if (!(m > 0.0)) throw ConfigError("mass must be positive");
  if (!(rule.eta > 0.0)) throw ConfigError("eta must be positive");
  const double b = rule.eta * m;
  switch (kind) {
  case DeformationKind::Cutoff:
    return DeformationFamily::cutoff(b);
  case DeformationKind::Kempf: {
    const double root = std::numbers::pi / (2.0 * b);
    return DeformationFamily::kempf(root * root);
  }
  case DeformationKind::InverseSqrt:
    return DeformationFamily::inverse_sqrt(1.0 / (b * b));
  case DeformationKind::Custom:
    break;
  }
  throw ConfigError("custom families have no b -> parameter map; supply a table");
}

} // namespace minlen
