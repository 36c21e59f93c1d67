#include "minlen/spectrum.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/tools/toms748_solve.hpp>

#include "minlen/errors.hpp"
#include "minlen/parallel.hpp"
#include "minlen/quadrature.hpp"

namespace minlen {

namespace {

// (M / kappa) I1 - 1 as a function of the distance from the pole, strictly decreasing.
class Condition {
public:
  Condition(const SpectralProblem& problem, double kappa, double quad_tol)
      : problem_(problem), scale_(problem.system().total_mass() / kappa), quad_tol_(quad_tol) {}

  double operator()(double gap) {
    ++evaluations_;
    return scale_ * integrate_I1_at_gap(problem_, gap, quad_tol_).value - 1.0;
  }

  int evaluations() const { return evaluations_; }

private:
  const SpectralProblem& problem_;
  double scale_;
  double quad_tol_;
  int evaluations_ = 0;
};

SolveResult solve_condition(const SpectralProblem& problem, double kappa, std::optional<int> n,
                            const SolveOptions& options) {
  const double p0 = problem.p0();
  const auto& support = problem.support();
  if (support.degenerate()) return NoBoundState{p0, "degenerate momentum support (c1 = c2)"};

  const TwoBodySystem& sys = problem.system();
  const double M = sys.total_mass();
  const double pole = problem.pole();
  Condition condition(problem, kappa, options.quad_tol);

  // Upper end: above the undeformed root, doubled until the condition is negative.
  const double undeformed = std::numbers::pi * std::numbers::pi * sys.mu1() * sys.mu2() * M * M / (kappa * kappa);
  double hi = std::max(1.0, undeformed) * 10.0 - pole;
  double f_hi = condition(hi);
  for (int k = 0; f_hi >= 0.0; ++k) {
    if (k > 200) throw ConvergenceError("could not bracket the quantization condition from above");
    hi *= 2.0;
    f_hi = condition(hi);
  }

  // Lower end: approach the pole by halving the gap.
  double lo = 0.5 * hi;
  double f_lo = condition(lo);
  for (int halvings = 0; f_lo <= 0.0; ++halvings) {
    hi = lo;
    f_hi = f_lo;
    if (halvings >= 60 || 0.5 * lo < problem.min_gap()) {
      return NoBoundState{p0, "quantization condition not reached: sup (M/kappa) I1 < 1 above the pole"};
    }
    lo *= 0.5;
    f_lo = condition(lo);
  }
  if (!(f_lo > 0.0 && f_hi < 0.0)) throw ConvergenceError("bracket does not contain a single sign change");

  const double tol = options.tol;
  auto width_ok = [tol](double a, double b) { return (b - a) <= tol * std::min(a, b); };
  std::uintmax_t max_iter = 200;
  auto [a, b] = boost::math::tools::toms748_solve(std::ref(condition), lo, hi, f_lo, f_hi, width_ok, max_iter);

  BoundState state;
  state.gap = 0.5 * (a + b);
  state.s = pole + state.gap;
  state.E = -state.s / (2.0 * M);
  state.p0 = p0;
  state.n = n;
  state.support = support;
  state.kappa = kappa;
  state.minimum = problem.minimum();
  state.residual = std::abs(condition(state.gap));
  state.evaluations = condition.evaluations();
  if (!(state.residual < kRootResidualBound)) {
    std::ostringstream msg;
    msg << "root residual " << state.residual << " exceeds 1e-9 at s = " << state.s;
    throw ConvergenceError(msg.str());
  }
  return state;
}

} // namespace

void validate(const Interaction& interaction) {
  if (const auto* d = std::get_if<DeltaInteraction>(&interaction)) {
    if (!(d->U0 > 0.0) || !std::isfinite(d->U0)) throw ConfigError("delta interaction requires U0 > 0");
    return;
  }
  const auto& c = std::get<CoulombInteraction>(interaction);
  if (!(c.alpha > 0.0) || !std::isfinite(c.alpha)) throw ConfigError("coulomb interaction requires alpha > 0");
  if (!(c.delta >= 0.0 && c.delta < 1.0)) throw ConfigError("coulomb interaction requires 0 <= delta < 1");
}

double coupling_kappa(const DeltaInteraction& delta) { return 1.0 / (2.0 * delta.U0); }

double coupling_kappa(const CoulombInteraction& coulomb, int n, double hbar) {
  if (n < 0) throw InvalidLevel("coulomb level n must be non-negative");
  if (n == 0 && coulomb.delta == 0.0) throw InvalidLevel("level n = 0 with delta = 0 has no solution");
  return std::numbers::pi * hbar * (n + coulomb.delta) / coulomb.alpha;
}

SolveResult solve_delta(const TwoBodySystem& sys, const DeltaInteraction& interaction, double p0,
                        const SolveOptions& options) {
  validate(interaction);
  const SpectralProblem problem(sys, p0);
  return solve_condition(problem, coupling_kappa(interaction), std::nullopt, options);
}

SolveResult solve_coulomb(const TwoBodySystem& sys, const CoulombInteraction& interaction, double p0, int n,
                          const SolveOptions& options) {
  validate(interaction);
  const double kappa = coupling_kappa(interaction, n, sys.hbar());
  const SpectralProblem problem(sys, p0);
  return solve_condition(problem, kappa, n, options);
}

SolveResult solve(const TwoBodySystem& sys, const Interaction& interaction, double p0, std::optional<int> n,
                  const SolveOptions& options) {
  if (const auto* d = std::get_if<DeltaInteraction>(&interaction)) return solve_delta(sys, *d, p0, options);
  if (!n) throw ConfigError("coulomb solve requires a level n");
  return solve_coulomb(sys, std::get<CoulombInteraction>(interaction), p0, *n, options);
}

std::vector<SolveResult> coulomb_levels(const TwoBodySystem& sys, const CoulombInteraction& interaction, double p0,
                                        int n_max, const SolveOptions& options) {
  std::vector<SolveResult> levels;
  for (int n = interaction.delta == 0.0 ? 1 : 0; n <= n_max; ++n) {
    levels.push_back(solve_coulomb(sys, interaction, p0, n, options));
  }
  return levels;
}

std::vector<ScanPoint> scan_p0(const TwoBodySystem& sys, const Interaction& interaction,
                               std::span<const double> p0_grid, std::optional<int> n, const SolveOptions& options,
                               unsigned threads) {
  std::vector<ScanPoint> out(p0_grid.size(), ScanPoint{0.0, ScanFailure{"not evaluated"}});
  parallel_for(p0_grid.size(), threads, [&](std::size_t i) {
    const double p0 = p0_grid[i];
    out[i].p0 = p0;
    try {
      std::visit([&](auto&& result) { out[i].outcome = result; }, solve(sys, interaction, p0, n, options));
    } catch (const std::exception& e) {
      out[i].outcome = ScanFailure{e.what()};
    }
  });
  return out;
}

} // namespace minlen
