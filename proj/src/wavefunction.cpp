#include "minlen/wavefunction.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "chebyshev.hpp"
#include "minlen/errors.hpp"
#include "minlen/quadrature.hpp"

namespace minlen {

namespace {

constexpr double kQuadTol = 1e-13;

void require_solved(const BoundState& state) {
  if (!(state.residual < kRootResidualBound)) {
    throw UnsolvedState("bound state residual " + std::to_string(state.residual) + " is not below 1e-9");
  }
}

// Grid, weights and jacobian shared by both kinds.
MomentumWavefunction make_grid(const SpectralProblem& problem, double gap, std::size_t grid_size,
                               std::vector<double>& offsets) {
  if (grid_size < 16) throw ConfigError("wavefunction grid needs at least 16 points");
  const auto& support = problem.support();
  if (support.degenerate()) throw UnsolvedState("degenerate support carries no wavefunction");

  const double center = problem.minimum().p_star;
  const double width = std::max(problem.peak_width(gap), 1e-300);
  const double x_lo = support.c1 - center;
  const double x_hi = support.c2 - center;
  const double theta_lo = std::atan(x_lo / width);
  const double theta_hi = std::atan(x_hi / width);
  const double theta_mid = 0.5 * (theta_lo + theta_hi);
  const double theta_half = 0.5 * (theta_hi - theta_lo);

  const auto x = detail::chebyshev_nodes(grid_size);
  const auto fejer = detail::fejer_weights(grid_size);

  MomentumWavefunction wf;
  wf.grid.resize(grid_size);
  wf.weights.resize(grid_size);
  wf.jacobian.resize(grid_size);
  offsets.resize(grid_size);
  for (std::size_t k = 0; k < grid_size; ++k) {
    const double theta = theta_mid + theta_half * x[k];
    const double c = std::cos(theta);
    offsets[k] = std::clamp(width * std::tan(theta), x_lo, x_hi);
    wf.grid[k] = std::clamp(center + offsets[k], support.c1, support.c2);
    wf.jacobian[k] = width * theta_half / (c * c);
    wf.weights[k] = fejer[k] * wf.jacobian[k];
  }
  return wf;
}

double inverse_kernel(const SpectralProblem& problem, double gap, double x) {
  const double denominator = problem.offset_denominator(x, gap);
  return std::isfinite(denominator) ? 1.0 / denominator : 0.0;
}

void finish_norm(MomentumWavefunction& wf) {
  double norm = 0.0;
  for (std::size_t k = 0; k < wf.grid.size(); ++k) norm += wf.weights[k] * std::norm(wf.values[k]);
  wf.norm_check = norm;
}

} // namespace

MomentumWavefunction build_delta_wavefunction(const BoundState& state, const TwoBodySystem& sys,
                                              const DeltaInteraction& interaction, std::size_t grid_size) {
  require_solved(state);
  validate(interaction);
  const SpectralProblem problem(sys, state.p0);
  const double gap = state.gap;

  std::vector<double> offsets;
  MomentumWavefunction wf = make_grid(problem, gap, grid_size, offsets);
  wf.kind = WavefunctionKind::Delta;
  wf.E = state.E;
  wf.p0 = state.p0;
  const double i1 = integrate_I1_at_gap(problem, gap, kQuadTol).value;
  const double i2 = integrate_I2_at_gap(problem, gap, kQuadTol).value;
  wf.normalization = 1.0 / std::sqrt(i2);
  wf.phi_tilde = wf.normalization * i1;

  wf.values.resize(grid_size);
  for (std::size_t k = 0; k < grid_size; ++k) {
    wf.values[k] = wf.normalization * inverse_kernel(problem, gap, offsets[k]);
  }
  finish_norm(wf);
  return wf;
}

MomentumWavefunction build_coulomb_wavefunction(const BoundState& state, const TwoBodySystem& sys,
                                                const CoulombInteraction& interaction, std::size_t grid_size) {
  require_solved(state);
  validate(interaction);
  const SpectralProblem problem(sys, state.p0);
  const auto& support = problem.support();
  const double gap = state.gap;

  std::vector<double> offsets;
  MomentumWavefunction wf = make_grid(problem, gap, grid_size, offsets);
  wf.kind = WavefunctionKind::Coulomb;
  wf.E = state.E;
  wf.p0 = state.p0;
  wf.n = state.n;
  wf.normalization = 1.0 / std::sqrt(integrate_I2_at_gap(problem, gap, kQuadTol).value);
  wf.phase_anchor = support.contains(0.0) ? 0.0 : support.c1;

  // Raw phase integral, accumulated between neighbouring grid points.
  std::vector<double> raw(grid_size);
  raw[0] = integrate_phase_at_gap(problem, gap, wf.phase_anchor, wf.grid[0], kQuadTol).value;
  for (std::size_t k = 1; k < grid_size; ++k) {
    raw[k] = raw[k - 1] + integrate_phase_at_gap(problem, gap, wf.grid[k - 1], wf.grid[k], kQuadTol).value;
  }
  const double at_c1 = raw.front() - integrate_phase_at_gap(problem, gap, support.c1, wf.grid.front(), kQuadTol).value;
  const double at_c2 = raw.back() + integrate_phase_at_gap(problem, gap, wf.grid.back(), support.c2, kQuadTol).value;

  const double prefactor = 2.0 * sys.total_mass() * interaction.alpha / sys.hbar();
  wf.total_phase = prefactor * (at_c2 - at_c1);
  wf.values.resize(grid_size);
  for (std::size_t k = 0; k < grid_size; ++k) {
    const double amplitude = wf.normalization * inverse_kernel(problem, gap, offsets[k]);
    wf.values[k] = std::polar(amplitude, -prefactor * raw[k]);
  }
  finish_norm(wf);
  return wf;
}

MomentumWavefunction build_wavefunction(const BoundState& state, const TwoBodySystem& sys,
                                        const Interaction& interaction, std::size_t grid_size) {
  if (const auto* d = std::get_if<DeltaInteraction>(&interaction)) {
    return build_delta_wavefunction(state, sys, *d, grid_size);
  }
  return build_coulomb_wavefunction(state, sys, std::get<CoulombInteraction>(interaction), grid_size);
}

double residual_check(const MomentumWavefunction& wf, const TwoBodySystem& sys, const Interaction& interaction,
                      const BoundState& state) {
  const std::size_t n = wf.grid.size();
  const double two_m = 2.0 * sys.total_mass();
  const double E = state.E;
  using cd = std::complex<double>;

  // G^2 phi / 2M - E phi = (G^2 + s) phi / 2M with s = -2 M E.
  const SpectralProblem problem(sys, wf.p0);
  // The solver's gap is sharper than s near the pole; use it unless E was changed.
  const double gap = E == -state.s / two_m ? state.gap : -two_m * E + problem.minimum().value;
  std::vector<cd> kinetic(n);
  std::vector<bool> finite(n);
  double scale = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    scale = std::max(scale, std::abs(E * wf.values[k]));
    const double denominator = problem.offset_denominator(wf.grid[k] - problem.minimum().p_star, gap);
    finite[k] = std::isfinite(denominator);
    if (finite[k]) kinetic[k] = denominator * wf.values[k] / two_m;
  }

  std::vector<cd> potential(n);
  double constraint = 0.0;
  if (const auto* d = std::get_if<DeltaInteraction>(&interaction)) {
    cd total = 0.0;
    for (std::size_t k = 0; k < n; ++k) total += wf.weights[k] * wf.values[k];
    std::fill(potential.begin(), potential.end(), -d->U0 * total);
  } else {
    const auto& c = std::get<CoulombInteraction>(interaction);
    std::vector<cd> samples(n);
    for (std::size_t k = 0; k < n; ++k) samples[k] = wf.values[k] * wf.jacobian[k];
    const auto running = detail::chebyshev_running_integral(samples);
    const cd total = running[n];
    const double coupling = c.alpha / (2.0 * sys.hbar());
    const cd i(0.0, 1.0);
    const double sine = std::sin(std::numbers::pi * c.delta);
    cd full;
    if (sine != 0.0) {
      full = (i + std::cos(std::numbers::pi * c.delta) / sine) * total;
    } else {
      // cot(pi delta) int phi has a finite limit; fit it as the weighted mean.
      constraint = coupling * std::abs(total);
      cd sum = 0.0;
      double weight = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        if (!finite[k]) continue;
        sum += wf.weights[k] * (kinetic[k] / coupling + 2.0 * i * running[k]);
        weight += wf.weights[k];
      }
      full = weight > 0.0 ? sum / weight : i * total;
    }
    for (std::size_t k = 0; k < n; ++k) potential[k] = -coupling * (full - 2.0 * i * running[k]);
  }

  double worst = constraint;
  for (std::size_t k = 0; k < n; ++k) {
    if (finite[k]) worst = std::max(worst, std::abs(kinetic[k] + potential[k]));
  }
  return scale > 0.0 ? worst / scale : worst;
}

} // namespace minlen
