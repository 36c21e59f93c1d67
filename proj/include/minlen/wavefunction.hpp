#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include "minlen/spectrum.hpp"

namespace minlen {

enum class WavefunctionKind { Delta, Coulomb };

/**
 * Momentum-space eigenfunction sampled on a grid over [c1, c2].
 *
 * The grid is p = p_star + w tan(theta) with theta at Chebyshev points of the
 * first kind between atan((c1 - p_star)/w) and atan((c2 - p_star)/w), w being
 * the peak width of 1/(G^2 + s). This resolves the Lorentzian core and clusters
 * points at the support edges. `weights` integrate smooth functions of p over
 * the whole support (Fejer rule in the mapped variable).
 */
struct MomentumWavefunction {
  WavefunctionKind kind = WavefunctionKind::Delta;
  std::vector<double> grid;
  std::vector<std::complex<double>> values;
  std::vector<double> weights;
  /// dp/dx at each node, x in (-1, 1) being the Chebyshev variable.
  std::vector<double> jacobian;
  /// sum_k weights_k |phi_k|^2
  double norm_check = 0.0;
  /// Amplitude constant: phi = normalization / (G^2 + s) (times a phase for Coulomb).
  double normalization = 0.0;
  /// Delta only: phi_tilde = int phi dp.
  double phi_tilde = 0.0;
  /// Coulomb only: phase(c2) - phase(c1), should equal 2 pi (n + delta).
  double total_phase = 0.0;
  /// Point where the Coulomb phase is zero (0 if inside the support, else c1).
  double phase_anchor = 0.0;
  double E = 0.0;
  double p0 = 0.0;
  std::optional<int> n;
};

inline constexpr std::size_t kDefaultGridSize = 2048;

/// phi(p) = 2 M U0 phi_tilde / (G^2 + s), unit L2 norm.
/// Throws UnsolvedState if state.residual >= 1e-9.
MomentumWavefunction build_delta_wavefunction(const BoundState& state, const TwoBodySystem& sys,
                                              const DeltaInteraction& interaction,
                                              std::size_t grid_size = kDefaultGridSize);

/// phi(p) = C exp(-i phase(p)) / (G^2 + s), C = I2^{-1/2},
/// phase(p) = (2 M alpha / hbar) int_anchor^p dp' / (G^2 + s).
MomentumWavefunction build_coulomb_wavefunction(const BoundState& state, const TwoBodySystem& sys,
                                                const CoulombInteraction& interaction,
                                                std::size_t grid_size = kDefaultGridSize);

MomentumWavefunction build_wavefunction(const BoundState& state, const TwoBodySystem& sys,
                                        const Interaction& interaction, std::size_t grid_size = kDefaultGridSize);

/**
 * Relative residual of the momentum-space integral equation at energy state.E:
 * max_k |G^2 phi / 2M + (U phi)(p_k) - E phi_k| / max_k |E phi_k|.
 *
 * Potential terms: -U0 int phi for delta; for Coulomb
 * -(alpha / 2 hbar) [(i + cot(pi delta)) int_{c1}^{c2} phi - 2i int_{c1}^{p} phi].
 * For delta = 0 the product cot(pi delta) int phi is fitted as a constant and
 * the violation of the constraint int phi = 0 is folded into the residual.
 */
double residual_check(const MomentumWavefunction& wf, const TwoBodySystem& sys, const Interaction& interaction,
                      const BoundState& state);

} // namespace minlen
