#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include "minlen/kinematics.hpp"

namespace minlen {

struct QuadratureResult {
  double value = 0.0;
  double err_estimate = 0.0;
  std::size_t panels = 0;
};

/// Hint that the integrand is sharply peaked at `location` with width `width`.
struct PeakHint {
  double location;
  double width;
};

struct AdaptiveOptions {
  double tol_rel = 1e-12;
  double tol_abs = 1e-15;
  std::size_t max_panels = 1'000'000;
  /// Endpoint behaviour: when set, the integrand vanishes at that end and the
  /// segment touching it is mapped through a quadratic squash.
  bool lower_singular = false;
  bool upper_singular = false;
};

/**
 * Adaptive bisection with a 15-point Gauss-Legendre panel rule. Each panel is
 * estimated once whole and once as two halves; the halves are kept and their
 * difference from the whole is the panel's error estimate. Infinite limits are
 * mapped to [0, 1). The integration range is split at `peak->location` and the
 * initial mesh is graded geometrically away from it.
 *
 * Throws ConvergenceError if more than max_panels panels are needed.
 */
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    const AdaptiveOptions& options, const PeakHint* peak = nullptr);

/// Integrals of the quantization condition at spectral parameter s = q^2 = -2ME.
struct SpectralIntegrals {
  double s = 0.0;
  /// int dp / (G^2 + s) over [c1, c2]
  double I1 = 0.0;
  /// int dp / (G^2 + s)^2 over [c1, c2]
  double I2 = 0.0;
  double err_estimate = 0.0;
};

/// The one-body problem at fixed centre-of-mass momentum: support and kernel
/// minimum are computed once and shared by every integration.
class SpectralProblem {
public:
  /// Throws EmptySupport if |p0| > b1 + b2.
  SpectralProblem(const TwoBodySystem& sys, double p0);

  const TwoBodySystem& system() const { return sys_; }
  double p0() const { return p0_; }
  const MomentumSupport& support() const { return support_; }
  const KernelMinimum& minimum() const { return minimum_; }
  /// s must stay strictly above this value.
  double pole() const { return -minimum_.value; }
  /// Smallest admissible s: pole() plus the margin 1e-14 max(1, |Gmin2|).
  double min_admissible_s() const;
  /// Smallest admissible distance from the pole, the same margin.
  double min_gap() const;
  double kernel(double p) const { return kinetic_kernel_clamped(sys_, p0_, p); }
  /// G^2(p) + s evaluated as (G^2(p) - Gmin2) + (s + Gmin2), which stays
  /// accurate as s approaches the pole. +infinity at divergent endpoints.
  double denominator(double p, double s) const { return offset_denominator(p - minimum_.p_star, s + minimum_.value); }
  /// G^2(p_star + x) + s for gap = s + Gmin2, with x and gap given exactly.
  double offset_denominator(double x, double gap) const {
    return kernel_step(sys_, p0_, minimum_.p_star, x) + gap;
  }
  /// Width of the peak of 1/(G^2 + s) around p_star at gap = s + Gmin2.
  double peak_width(double gap) const;

private:
  TwoBodySystem sys_;
  double p0_;
  MomentumSupport support_;
  KernelMinimum minimum_;
};

/// Relative tolerance `tol`, absolute tolerance tol * 1e-3.
/// Throws PoleError for s <= pole() + margin.
QuadratureResult integrate_I1(const SpectralProblem& problem, double s, double tol);
QuadratureResult integrate_I2(const SpectralProblem& problem, double s, double tol);
/// int_{p_lo}^{p_hi} dp / (G^2 + s), [p_lo, p_hi] within the support (either order).
QuadratureResult integrate_phase(const SpectralProblem& problem, double s, double p_lo, double p_hi, double tol);
SpectralIntegrals spectral_integrals(const SpectralProblem& problem, double s, double tol);

/// The same integrals parametrized by gap = s + Gmin2, which resolves s
/// closer to the pole than s itself can. Throws PoleError for gap <= min_gap().
QuadratureResult integrate_I1_at_gap(const SpectralProblem& problem, double gap, double tol);
QuadratureResult integrate_I2_at_gap(const SpectralProblem& problem, double gap, double tol);
QuadratureResult integrate_phase_at_gap(const SpectralProblem& problem, double gap, double p_lo, double p_hi,
                                        double tol);

QuadratureResult integrate_I1(const TwoBodySystem& sys, double p0, double s, double tol);
QuadratureResult integrate_I2(const TwoBodySystem& sys, double p0, double s, double tol);
QuadratureResult integrate_phase(const TwoBodySystem& sys, double p0, double s, double p_lo, double p_hi, double tol);

} // namespace minlen
