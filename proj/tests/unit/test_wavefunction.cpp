#include <doctest.h>

#include <cmath>
#include <numbers>

#include "minlen/errors.hpp"
#include "minlen/quadrature.hpp"
#include "minlen/wavefunction.hpp"
#include "support/oracles.hpp"

using namespace minlen;
using std::numbers::pi;

namespace {

TwoBodySystem identical(const DeformationFamily& f, double m = 1.0) { return TwoBodySystem(Particle{m, f}, Particle{m, f}); }

BoundState bound(const SolveResult& r) {
  REQUIRE(std::holds_alternative<BoundState>(r));
  return std::get<BoundState>(r);
}

BoundState detuned(BoundState st, double factor) {
  st.E *= factor;
  return st;
}

} // namespace

TEST_CASE("delta wavefunction: undeformed Lorentzian, parity, norm") {
  const auto sys = identical(DeformationFamily::undeformed());
  const DeltaInteraction d{1.0 / (2.0 * pi)};
  const auto st = bound(solve_delta(sys, d, 0.0));
  const auto wf = build_delta_wavefunction(st, sys, d, 512);
  REQUIRE(wf.grid.size() == 512);
  CHECK(wf.kind == WavefunctionKind::Delta);
  CHECK(std::abs(wf.norm_check - 1.0) < 1e-8);
  const double k2 = sys.mu1() * sys.mu2();
  const double c = wf.values[0].real() * (wf.grid[0] * wf.grid[0] / k2 + st.s);
  for (std::size_t k = 0; k < wf.grid.size(); ++k) {
    CHECK(wf.values[k].imag() == 0.0);
    CHECK(wf.values[k].real() > 0.0);
    CHECK(wf.values[k].real() * (wf.grid[k] * wf.grid[k] / k2 + st.s) == doctest::Approx(c).epsilon(1e-12));
    const std::size_t m = wf.grid.size() - 1 - k;
    CHECK(wf.grid[m] == doctest::Approx(-wf.grid[k]).epsilon(1e-12));
    CHECK(wf.values[m].real() == doctest::Approx(wf.values[k].real()).epsilon(1e-12));
  }
}

TEST_CASE("delta wavefunction: self-consistency of phi_tilde") {
  const TwoBodySystem sys(Particle{2.0, DeformationFamily::kempf(0.2)}, Particle{1.0, DeformationFamily::cutoff(3.0)});
  const DeltaInteraction d{0.35};
  const double p0 = 1.1;
  const auto st = bound(solve_delta(sys, d, p0));
  const auto wf = build_delta_wavefunction(st, sys, d);
  CHECK(std::abs(wf.norm_check - 1.0) < 1e-8);
  double integral = 0.0;
  for (std::size_t k = 0; k < wf.grid.size(); ++k) integral += wf.weights[k] * wf.values[k].real();
  CHECK(integral == doctest::Approx(wf.phi_tilde).epsilon(1e-8));
  const double M = sys.total_mass();
  for (std::size_t k = 0; k < wf.grid.size(); k += 97) {
    const double G2 = kinetic_kernel_clamped(sys, p0, wf.grid[k]);
    CHECK(wf.values[k].real() == doctest::Approx(2.0 * M * d.U0 * wf.phi_tilde / (G2 + st.s)).epsilon(1e-8));
  }
  const SpectralProblem problem(sys, p0);
  CHECK(wf.normalization == doctest::Approx(1.0 / std::sqrt(integrate_I2(problem, st.s, 1e-13).value)).epsilon(1e-10));
}

TEST_CASE("Coulomb wavefunction: phase winding, amplitude, normalization") {
  const auto sys = identical(DeformationFamily::cutoff(40.0));
  const CoulombInteraction c{1.0, 0.5};
  for (int n = 0; n <= 5; ++n) {
    const auto st = bound(solve_coulomb(sys, c, 0.0, n));
    const auto wf = build_coulomb_wavefunction(st, sys, c);
    INFO("n = " << n);
    CHECK(std::abs(wf.total_phase - 2.0 * pi * (n + 0.5)) < 1e-8);
    CHECK(std::abs(wf.norm_check - 1.0) < 1e-8);
    CHECK(wf.phase_anchor == 0.0);
    const SpectralProblem problem(sys, 0.0);
    CHECK(wf.normalization == doctest::Approx(1.0 / std::sqrt(integrate_I2(problem, st.s, 1e-13).value)).epsilon(1e-10));
    for (std::size_t k = 0; k < wf.grid.size(); k += 101) {
      const std::size_t m = wf.grid.size() - 1 - k;
      CHECK(std::abs(wf.values[m]) == doctest::Approx(std::abs(wf.values[k])).epsilon(1e-10));
    }
  }
}

TEST_CASE("Coulomb wavefunction in domain II anchors the phase at c1") {
  const TwoBodySystem sys(Particle{1.0, DeformationFamily::cutoff(3.0)}, Particle{1.0, DeformationFamily::cutoff(1.0)});
  const CoulombInteraction c{0.8, 0.25};
  const double p0 = 3.0;
  const auto st = bound(solve_coulomb(sys, c, p0, 2));
  const auto wf = build_coulomb_wavefunction(st, sys, c);
  CHECK(st.support.domain == Domain::II);
  CHECK(wf.phase_anchor == st.support.c1);
  CHECK(std::abs(wf.total_phase - 2.0 * pi * 2.25) < 1e-8);
  CHECK(residual_check(wf, sys, c, st) < 1e-6);
}

TEST_CASE("residual_check is small at solved states and grows when detuned") {
  const TwoBodySystem sys(Particle{1.5, DeformationFamily::inverse_sqrt(0.05)}, Particle{1.0, DeformationFamily::kempf(0.02)});
  const double p0 = 0.6;

  const DeltaInteraction d{0.3};
  const auto sd = bound(solve_delta(sys, d, p0));
  const auto wd = build_delta_wavefunction(sd, sys, d);
  const double rd = residual_check(wd, sys, d, sd);
  CHECK(rd < 1e-6);
  CHECK(residual_check(wd, sys, d, detuned(sd, 1.001)) >= 10.0 * rd);
  CHECK(residual_check(wd, sys, d, detuned(sd, 0.999)) >= 10.0 * rd);

  for (double delta : {0.0, 0.5, 0.9}) {
    const CoulombInteraction c{1.2, delta};
    for (int n = (delta == 0.0 ? 1 : 0); n <= 3; ++n) {
      const auto sc = bound(solve_coulomb(sys, c, p0, n));
      const auto wc = build_coulomb_wavefunction(sc, sys, c);
      const double rc = residual_check(wc, sys, c, sc);
      INFO("delta = " << delta << " n = " << n);
      CHECK(rc < 1e-6);
      CHECK(residual_check(wc, sys, c, detuned(sc, 1.001)) >= 10.0 * rc);
      CHECK(residual_check(wc, sys, c, detuned(sc, 0.999)) >= 10.0 * rc);
    }
  }
}

TEST_CASE("preconditions") {
  const auto sys = identical(DeformationFamily::cutoff(5.0));
  const DeltaInteraction d{0.3};
  auto st = bound(solve_delta(sys, d, 0.0));
  CHECK_THROWS_AS(build_delta_wavefunction(st, sys, d, 8), ConfigError);
  st.residual = 1e-3;
  CHECK_THROWS_AS(build_delta_wavefunction(st, sys, d), UnsolvedState);
  CHECK_THROWS_AS(build_wavefunction(st, sys, CoulombInteraction{1.0, 0.5}), UnsolvedState);
}
