#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "minlen/kinematics.hpp"

namespace minlen {

/// Attractive delta interaction: constant momentum-space kernel -U0.
struct DeltaInteraction {
  double U0;
};

/// 1D Coulomb-like interaction -alpha/|x| with self-adjoint-extension parameter delta in [0, 1).
struct CoulombInteraction {
  double alpha;
  double delta;
};

using Interaction = std::variant<DeltaInteraction, CoulombInteraction>;

/// Throws ConfigError unless U0 > 0, alpha > 0 and 0 <= delta < 1.
void validate(const Interaction& interaction);

/// kappa = 1 / (2 U0).
double coupling_kappa(const DeltaInteraction& delta);
/// kappa = pi hbar (n + delta) / alpha. InvalidLevel for n < 0 or n + delta = 0.
double coupling_kappa(const CoulombInteraction& coulomb, int n, double hbar);

struct SolveOptions {
  /// Bracket width relative to the distance from the pole.
  double tol = 1e-12;
  /// Relative tolerance of every quadrature evaluated by the solver.
  double quad_tol = 1e-13;
};

struct BoundState {
  double E = 0.0;
  /// s = q^2 = -2 M E
  double s = 0.0;
  /// s + Gmin2, the distance from the pole, held to full relative precision.
  double gap = 0.0;
  double p0 = 0.0;
  /// Coulomb level; empty for the delta interaction.
  std::optional<int> n;
  MomentumSupport support;
  /// |(M / kappa) I1 - 1| at the accepted root, evaluated at gap.
  double residual = 0.0;
  double kappa = 0.0;
  KernelMinimum minimum;
  int evaluations = 0;
};

struct NoBoundState {
  double p0 = 0.0;
  std::string reason;
};

using SolveResult = std::variant<BoundState, NoBoundState>;

/// Residual bound every accepted state satisfies.
inline constexpr double kRootResidualBound = 1e-9;

/// Unique root of 2 M U0 I1(s) = 1. Throws EmptySupport for |p0| > b1 + b2.
SolveResult solve_delta(const TwoBodySystem& sys, const DeltaInteraction& interaction, double p0,
                        const SolveOptions& options = {});

/// Root of (M alpha / hbar) I1(s) = pi (n + delta).
/// Throws InvalidLevel for n < 0 or (n = 0, delta = 0), EmptySupport for |p0| > b1 + b2.
SolveResult solve_coulomb(const TwoBodySystem& sys, const CoulombInteraction& interaction, double p0, int n,
                          const SolveOptions& options = {});

/// Dispatches on the interaction; `n` is required for Coulomb and ignored for delta.
SolveResult solve(const TwoBodySystem& sys, const Interaction& interaction, double p0, std::optional<int> n,
                  const SolveOptions& options = {});

/// Levels n = 0 .. n_max (n = 0 skipped when delta = 0).
std::vector<SolveResult> coulomb_levels(const TwoBodySystem& sys, const CoulombInteraction& interaction, double p0,
                                        int n_max = 10, const SolveOptions& options = {});

struct ScanFailure {
  std::string message;
};

struct ScanPoint {
  double p0;
  std::variant<BoundState, NoBoundState, ScanFailure> outcome;
};

/// One solve per grid value, possibly concurrent; output in input order.
/// Per-point errors are recorded as ScanFailure.
std::vector<ScanPoint> scan_p0(const TwoBodySystem& sys, const Interaction& interaction,
                               std::span<const double> p0_grid, std::optional<int> n,
                               const SolveOptions& options = {}, unsigned threads = 0);

} // namespace minlen
