#include "minlen/perturbation.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "minlen/errors.hpp"

namespace minlen {

namespace {

constexpr double kPi2 = std::numbers::pi * std::numbers::pi;

SeriesPrediction finish(SeriesPrediction p) {
  p.total = 0.0;
  for (const auto& t : p.terms) p.total += t.value;
  return p;
}

void require_identical(const TwoBodySystem& sys, const char* who) {
  if (sys.m1() != sys.m2()) throw ConfigError(std::string(who) + " requires identical particles (m1 = m2)");
}

} // namespace

double SeriesPrediction::partial_sum(int max_order) const {
  double sum = 0.0;
  for (const auto& t : terms) {
    if (t.order <= max_order) sum += t.value;
  }
  return sum;
}

double SeriesPrediction::term(std::string_view label) const {
  for (const auto& t : terms) {
    if (t.label == label) return t.value;
  }
  throw std::out_of_range("no series term '" + std::string(label) + "'");
}

SeriesPrediction series_cutoff_distinct(const TwoBodySystem& sys, double kappa, double p0, double b2) {
  if (sys.equal_cutoffs()) {
    throw ConfigError("distinct-mass series requires b1 != b2; use series_cutoff_identical");
  }
  if (!(kappa > 0.0) || !(b2 > 0.0)) throw ConfigError("series requires kappa > 0 and b2 > 0");
  const double M = sys.total_mass();
  const double mu = sys.reduced_mass();

  SeriesPrediction p;
  p.family = SeriesFamily::Cutoff;
  p.regime = SeriesRegime::DistinctMasses;
  p.terms = {
      {"free", 0, p0 * p0 / (2.0 * M)},
      {"order0", 0, -kPi2 * mu / (2.0 * kappa * kappa)},
      {"order1_over_b", 1, 2.0 * kPi2 * mu * mu / (std::pow(kappa, 3) * b2)},
      {"order2_over_b2", 2, -6.0 * kPi2 * std::pow(mu, 3) / (std::pow(kappa, 4) * b2 * b2)},
  };
  const double gap = sys.b1() - sys.b2();
  if (std::isfinite(gap) && std::abs(p0) > 0.1 * gap) {
    p.warnings.push_back("DomainWarning: |p0| > 0.1 (b1 - b2), outside the small-p0 regime of domain I");
  }
  return finish(std::move(p));
}

SeriesPrediction series_cutoff_identical(const TwoBodySystem& sys, double kappa, double p0, double b) {
  require_identical(sys, "series_cutoff_identical");
  if (!(kappa > 0.0) || !(b > 0.0)) throw ConfigError("series requires kappa > 0 and b > 0");
  if (!(std::abs(p0) < 2.0 * b)) throw ConfigError("identical-particle series requires |p0| < 2b");
  const double M = sys.total_mass();
  const double mu = sys.reduced_mass();
  const double mu3 = std::pow(mu, 3);

  SeriesPrediction p;
  p.family = SeriesFamily::Cutoff;
  p.regime = SeriesRegime::Identical;
  p.terms = {
      {"free", 0, p0 * p0 / (2.0 * M)},
      {"order0", 0, -kPi2 * mu / (2.0 * kappa * kappa)},
      {"order1_over_b", 1, 2.0 * kPi2 * mu * mu / (std::pow(kappa, 3) * b)},
      {"order2_over_b2", 2, -6.0 * kPi2 * mu3 / (std::pow(kappa, 4) * b * b)},
      {"order2_over_b2_p0", 2, 4.0 * kPi2 * mu3 * std::abs(p0) / (std::pow(kappa, 3) * M * b * b)},
  };
  return finish(std::move(p));
}

SeriesPrediction series_inversesqrt_identical(const TwoBodySystem& sys, double kappa, double p0, double beta,
                                              Transcription transcription) {
  require_identical(sys, "series_inversesqrt_identical");
  if (!(kappa > 0.0) || !(beta >= 0.0)) throw ConfigError("series requires kappa > 0 and beta >= 0");
  const double M = sys.total_mass();
  const double mu = sys.reduced_mass();
  const double mu3 = std::pow(mu, 3);
  const double k2 = kappa * kappa;
  const double k4 = k2 * k2;
  const double sign = transcription == Transcription::Corrected ? 1.0 : -1.0;

  SeriesPrediction p;
  p.family = SeriesFamily::InverseSqrt;
  p.regime = SeriesRegime::Identical;
  p.terms = {
      {"free", 0, p0 * p0 / (2.0 * M)},
      {"order0", 0, -kPi2 * mu / (2.0 * k2)},
      {"order_sqrt_beta", 1, 4.0 * kPi2 * mu * mu * std::sqrt(beta) / std::pow(kappa, 3)},
      {"order_beta_p0_4", 2, sign * std::pow(p0, 4) / (32.0 * mu) * beta},
      {"order_beta_p0_2", 2, sign * 3.0 * mu * kPi2 * p0 * p0 / (4.0 * k2) * beta},
      {"order_beta_pi4", 2, -sign * 3.0 * mu3 * kPi2 * kPi2 / (2.0 * k4) * beta},
      {"order_beta_pi2", 2, -sign * 24.0 * mu3 * kPi2 / k4 * beta},
  };
  return finish(std::move(p));
}

double undeformed_baseline(const TwoBodySystem& sys, const Interaction& interaction, double p0,
                           std::optional<int> n) {
  validate(interaction);
  const double free = p0 * p0 / (2.0 * sys.total_mass());
  const double mu = sys.reduced_mass();
  if (const auto* d = std::get_if<DeltaInteraction>(&interaction)) {
    return free - 2.0 * kPi2 * mu * d->U0 * d->U0;
  }
  const auto& c = std::get<CoulombInteraction>(interaction);
  if (!n) throw ConfigError("coulomb baseline requires a level n");
  coupling_kappa(c, *n, sys.hbar());  // InvalidLevel check
  const double level = *n + c.delta;
  return free - c.alpha * c.alpha * mu / (2.0 * sys.hbar() * sys.hbar() * level * level);
}

} // namespace minlen
