#pragma once

#include <limits>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace minlen {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class DeformationKind { Cutoff, Kempf, InverseSqrt, Custom };

std::string_view to_string(DeformationKind kind);
/// Accepts "cutoff", "kempf", "inversesqrt" (also "inverse_sqrt"), "custom".
DeformationKind parse_deformation_kind(std::string_view text);

/**
 * One particle's deformed algebra [X, P] = i hbar f(P), represented with an
 * undeformed position operator and P = g(p), p in [-b, b].
 *
 * g is odd and strictly increasing, f is even and positive, and
 * dg/dp = f(g(p)). b may be +infinity, in which case nothing constrains p.
 * Instances are immutable.
 */
class DeformationFamily {
public:
  /// g(p) = p on [-b, b]; b = kInfinity is the undeformed algebra.
  static DeformationFamily cutoff(double b);
  /// f(P) = 1 + beta P^2, g(p) = tan(sqrt(beta) p) / sqrt(beta), b = pi / (2 sqrt(beta)).
  static DeformationFamily kempf(double beta);
  /// f(P) = (1 + beta P^2)^{3/2}, g(p) = p / sqrt(1 - beta p^2), b = 1 / sqrt(beta).
  static DeformationFamily inverse_sqrt(double beta);
  /**
   * Tabulated g on [0, b]: p must start at 0, be strictly increasing, and g
   * must start at 0 and be strictly increasing. The table is extended to
   * [-b, 0] by oddness and interpolated with a monotone (PCHIP) cubic; f is
   * derived as g'(g^{-1}(P)).
   */
  static DeformationFamily custom(std::vector<double> p, std::vector<double> g);
  static DeformationFamily undeformed() { return cutoff(kInfinity); }

  DeformationKind kind() const { return kind_; }
  double b() const { return b_; }
  bool bounded() const { return b_ < kInfinity; }
  /// beta for Kempf / InverseSqrt, 0 otherwise.
  double beta() const { return beta_; }
  /// True when |g(p)| -> infinity as |p| -> b (finite b only).
  bool diverges_at_endpoint() const;
  /// Upper end a of the physical momentum range P in [-a, a]; a = lim_{p->b} g(p).
  double momentum_limit() const;

  /// P = g(p). Throws DomainError for |p| > b, and at |p| = b when g diverges there.
  double g(double p) const;
  /// f(P). Throws DomainError for |P| > a.
  double f(double P) const;
  /// g'(p), evaluated from the closed form (or the interpolant for custom tables).
  double g_prime(double p) const;
  /// g(v + delta) - g(v), accurate when delta is small compared with v.
  /// Both points must lie within [-b, b] (strictly inside for divergent families).
  double g_increment(double v, double delta) const;
  /// g(v + delta) - g(v) - g'(v) delta, same domain as g_increment.
  double g_remainder(double v, double delta) const;
  /// g^2(p) for integrands: |p| >= b is clamped to the endpoint value, which is
  /// +infinity for divergent families. Never throws.
  double g_squared_clamped(double p) const noexcept;

  /// l0 = pi hbar / (2 b), 0 when b is infinite.
  double minimal_length(double hbar) const;

  /// Tabulated data of a custom family (empty otherwise), p >= 0 half only.
  const std::vector<double>& table_p() const;
  const std::vector<double>& table_g() const;

  bool operator==(const DeformationFamily& other) const;

private:
  struct Table;

  DeformationFamily(DeformationKind kind, double beta, double b);

  double g_unchecked(double p) const;

  DeformationKind kind_;
  double beta_ = 0.0;
  double b_ = kInfinity;
  std::shared_ptr<const Table> table_;
};

/// b = eta * m for every particle, eta universal.
struct MassScalingRule {
  double eta;

  /// Kempf relation beta = gamma / m^2, i.e. eta = pi / (2 sqrt(gamma)).
  static MassScalingRule from_gamma(double gamma);
};

/// Family of the given kind whose cutoff is b = eta * m. ConfigError for Custom.
DeformationFamily from_mass(const MassScalingRule& rule, double m, DeformationKind kind);

} // namespace minlen
