#pragma once

#include <string_view>

#include "minlen/deformation.hpp"

namespace minlen {

struct Particle {
  double mass;
  DeformationFamily deformation;
};

/**
 * Two particles with their own deformations, reduced to centre-of-mass
 * momentum p0 = p1 + p2 and relative momentum p = mu2 p1 - mu1 p2.
 *
 * Particles are relabelled at construction so that b1 >= b2.
 */
class TwoBodySystem {
public:
  TwoBodySystem(Particle first, Particle second, double hbar = 1.0);

  const Particle& particle1() const { return p1_; }
  const Particle& particle2() const { return p2_; }
  /// True if the constructor swapped the two particles to enforce b1 >= b2.
  bool relabelled() const { return relabelled_; }

  double m1() const { return p1_.mass; }
  double m2() const { return p2_.mass; }
  double total_mass() const { return total_mass_; }
  double mu1() const { return mu1_; }
  double mu2() const { return mu2_; }
  /// mu = m1 m2 / M.
  double reduced_mass() const { return mu1_ * mu2_ * total_mass_; }
  double b1() const { return p1_.deformation.b(); }
  double b2() const { return p2_.deformation.b(); }
  double hbar() const { return hbar_; }
  /// b1 == b2: domain I collapses and domains II/III merge.
  bool equal_cutoffs() const { return b1() == b2(); }

private:
  Particle p1_;
  Particle p2_;
  double hbar_;
  double total_mass_;
  double mu1_;
  double mu2_;
  bool relabelled_ = false;
};

enum class Domain { I, II, III, Merged, Empty };

std::string_view to_string(Domain domain);

struct MomentumSupport {
  double c1 = 0.0;
  double c2 = 0.0;
  Domain domain = Domain::Empty;
  /// G^2 diverges at the lower / upper end (the active constraint belongs to a
  /// family whose g diverges at its cutoff).
  bool lower_singular = false;
  bool upper_singular = false;

  bool empty() const { return domain == Domain::Empty; }
  bool degenerate() const { return !empty() && c1 == c2; }
  double width() const { return c2 - c1; }
  bool contains(double p) const { return !empty() && p >= c1 && p <= c2; }
};

/// [c1, c2] = [-b1 - mu1 p0, b1 - mu1 p0] intersected with [mu2 p0 - b2, mu2 p0 + b2].
MomentumSupport momentum_support(const TwoBodySystem& sys, double p0);

/// G^2(p0, p) = g1^2(mu1 p0 + p) / mu1 + g2^2(mu2 p0 - p) / mu2.
/// Throws DomainError when either argument leaves its particle's range.
double kinetic_kernel(const TwoBodySystem& sys, double p0, double p);

/// Integrand form of kinetic_kernel: arguments are clamped to the cutoffs and
/// divergent endpoints give +infinity.
double kinetic_kernel_clamped(const TwoBodySystem& sys, double p0, double p) noexcept;

/// G^2(p0, p) - G^2(p0, p_ref) without the cancellation of a direct difference.
/// Arguments are clamped like kinetic_kernel_clamped; +infinity at divergent endpoints.
double kernel_excess(const TwoBodySystem& sys, double p0, double p_ref, double p) noexcept;
/// dG^2/dp at p. Throws DomainError outside the support or at a divergent endpoint.
double kernel_slope(const TwoBodySystem& sys, double p0, double p);
/// G^2(p0, p_ref + delta) - G^2(p0, p_ref) for an offset given exactly.
double kernel_step(const TwoBodySystem& sys, double p0, double p_ref, double delta) noexcept;

struct KernelMinimum {
  double p_star = 0.0;
  double value = 0.0;
  /// Half the second derivative of G^2 at p_star (0 when it cannot be
  /// estimated, e.g. at a support endpoint).
  double curvature = 0.0;
  /// p_star lies strictly inside the support, away from the endpoints.
  bool interior = false;
};

/// Global minimum of G^2 over the support: 512-point scan refined by golden section,
/// then by a root search on dG^2/dp for interior minima.
/// Throws EmptySupport when the support is empty.
KernelMinimum kernel_minimum(const TwoBodySystem& sys, double p0);
KernelMinimum kernel_minimum(const TwoBodySystem& sys, double p0, const MomentumSupport& support);

} // namespace minlen
