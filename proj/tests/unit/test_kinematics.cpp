#include <doctest.h>

#include <cmath>

#include "minlen/errors.hpp"
#include "minlen/kinematics.hpp"
#include "support/oracles.hpp"

using namespace minlen;

namespace {

TwoBodySystem cutoff_pair(double m1, double b1, double m2, double b2) {
  return TwoBodySystem(Particle{m1, DeformationFamily::cutoff(b1)}, Particle{m2, DeformationFamily::cutoff(b2)});
}

} // namespace

TEST_CASE("derived masses") {
  const auto sys = cutoff_pair(3.0, 10.0, 1.0, 5.0);
  CHECK(sys.total_mass() == 4.0);
  CHECK(sys.mu1() == 0.75);
  CHECK(sys.mu2() == 0.25);
  CHECK(sys.mu1() + sys.mu2() == 1.0);
  CHECK(sys.reduced_mass() == doctest::Approx(3.0 / 4.0).epsilon(1e-15));
  CHECK_FALSE(sys.relabelled());
}

TEST_CASE("particles are relabelled so that b1 >= b2") {
  const auto sys = cutoff_pair(1.0, 2.0, 3.0, 7.0);
  CHECK(sys.relabelled());
  CHECK(sys.b1() == 7.0);
  CHECK(sys.b2() == 2.0);
  CHECK(sys.m1() == 3.0);
  CHECK(sys.m2() == 1.0);
  CHECK_THROWS_AS(cutoff_pair(0.0, 1.0, 1.0, 1.0), ConfigError);
}

TEST_CASE("momentum_support examples") {
  const auto same = cutoff_pair(1.0, 2.5, 1.0, 2.5);
  auto s = momentum_support(same, 0.0);
  CHECK(s.c1 == -2.5);
  CHECK(s.c2 == 2.5);
  CHECK(s.domain == Domain::Merged);

  const auto sys = cutoff_pair(1.0, 3.0, 1.0, 1.0);
  s = momentum_support(sys, 1.0);
  CHECK(s.domain == Domain::I);
  CHECK(s.c1 == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(s.c2 == doctest::Approx(1.5).epsilon(1e-15));

  s = momentum_support(sys, 4.0);
  CHECK(s.domain == Domain::II);
  CHECK(s.degenerate());
  CHECK(s.c1 == 1.0);
  CHECK(s.c2 == 1.0);

  CHECK(momentum_support(sys, -4.0).domain == Domain::III);
  CHECK(momentum_support(sys, 4.0 + 1e-9).empty());
  CHECK(momentum_support(sys, 2.0).domain == Domain::I);
  CHECK(momentum_support(sys, 2.0 + 1e-12).domain == Domain::II);
}

TEST_CASE("merged domain for identical cutoffs") {
  const auto sys = cutoff_pair(2.0, 3.0, 2.0, 3.0);
  for (double p0 : {-5.0, -1.0, 0.5, 4.0}) {
    const auto s = momentum_support(sys, p0);
    CHECK(s.domain == Domain::Merged);
    CHECK(s.c1 == doctest::Approx(-3.0 + 0.5 * std::abs(p0)).epsilon(1e-15));
    CHECK(s.c2 == doctest::Approx(3.0 - 0.5 * std::abs(p0)).epsilon(1e-15));
  }
}

TEST_CASE("unbounded particles give the whole line") {
  const TwoBodySystem sys(Particle{1.0, DeformationFamily::undeformed()}, Particle{2.0, DeformationFamily::undeformed()});
  const auto s = momentum_support(sys, 3.0);
  CHECK(std::isinf(s.c1));
  CHECK(s.c1 < 0);
  CHECK(std::isinf(s.c2));
  CHECK(s.c2 > 0);
  const double k2 = sys.mu1() * sys.mu2();
  CHECK(kinetic_kernel(sys, 3.0, 1.7) == doctest::Approx(9.0 + 1.7 * 1.7 / k2).epsilon(1e-14));
}

TEST_CASE("kinetic_kernel examples") {
  const auto sys = cutoff_pair(1.0, 10.0, 1.0, 10.0);
  CHECK(kinetic_kernel(sys, 0.0, 1.0) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(kinetic_kernel(sys, 0.0, 0.0) == 0.0);

  const TwoBodySystem mixed(Particle{2.0, DeformationFamily::kempf(0.3)},
                            Particle{1.0, DeformationFamily::inverse_sqrt(0.5)});
  CHECK(kinetic_kernel(mixed, 0.0, 0.0) == 0.0);
  CHECK_THROWS_AS(kinetic_kernel(sys, 0.0, 15.0), DomainError);
}

TEST_CASE("property: cutoff kernel equals p0^2 + p^2 / (mu1 mu2)") {
  for (int i = 0; i < 200; ++i) {
    const double m1 = oracle::log_uniform(0.1, 10.0);
    const double m2 = oracle::log_uniform(0.1, 10.0);
    const auto sys = cutoff_pair(m1, 1e3, m2, 1e3);
    const double p0 = oracle::uniform(-100.0, 100.0);
    const auto sup = momentum_support(sys, p0);
    const double p = oracle::uniform(sup.c1, sup.c2);
    const double expected = p0 * p0 + p * p / (sys.mu1() * sys.mu2());
    CHECK(kinetic_kernel(sys, p0, p) == doctest::Approx(expected).epsilon(1e-11));
  }
}

TEST_CASE("property: parity of support and kernel") {
  for (int i = 0; i < 200; ++i) {
    const TwoBodySystem sys(Particle{oracle::log_uniform(0.2, 5.0), DeformationFamily::kempf(oracle::log_uniform(0.01, 1.0))},
                            Particle{oracle::log_uniform(0.2, 5.0), DeformationFamily::inverse_sqrt(oracle::log_uniform(0.01, 1.0))});
    const double p0 = oracle::uniform(-1.0, 1.0) * (sys.b1() + sys.b2());
    const auto plus = momentum_support(sys, p0);
    const auto minus = momentum_support(sys, -p0);
    CHECK(plus.c1 == doctest::Approx(-minus.c2).epsilon(1e-13));
    CHECK(plus.c2 == doctest::Approx(-minus.c1).epsilon(1e-13));
    const double p = oracle::uniform(plus.c1, plus.c2);
    const double a = kinetic_kernel_clamped(sys, p0, p);
    const double b = kinetic_kernel_clamped(sys, -p0, -p);
    if (std::isfinite(a)) CHECK(b == doctest::Approx(a).epsilon(1e-12));
  }
}

TEST_CASE("property: identical-particle support width non-increasing in |p0|") {
  const auto sys = cutoff_pair(1.5, 2.0, 1.5, 2.0);
  double prev = kInfinity;
  for (int i = 0; i <= 400; ++i) {
    const double p0 = 4.0 * i / 400.0;
    const double w = momentum_support(sys, p0).width();
    CHECK(w <= prev);
    prev = w;
  }
}

TEST_CASE("property: intersection matches the tabulated support per domain") {
  for (int i = 0; i < 1000; ++i) {
    const double b2 = oracle::log_uniform(0.1, 100.0);
    const double b1 = b2 * oracle::log_uniform(1.0, 10.0);
    const auto sys = cutoff_pair(oracle::log_uniform(0.1, 10.0), b1, oracle::log_uniform(0.1, 10.0), b2);
    const double p0 = oracle::uniform(-1.0, 1.0) * (b1 + b2);
    const auto s = momentum_support(sys, p0);
    const auto t = oracle::table_support(sys.b1(), sys.b2(), sys.mu1(), sys.mu2(), p0);
    CHECK(std::abs(s.c1 - t.c1) <= 1e-12 * std::max(1.0, b1));
    CHECK(std::abs(s.c2 - t.c2) <= 1e-12 * std::max(1.0, b1));
  }
}

TEST_CASE("kernel_minimum examples") {
  const auto sys = cutoff_pair(1.0, 10.0, 1.0, 10.0);
  auto m = kernel_minimum(sys, 0.0);
  CHECK(std::abs(m.p_star) < 1e-7);
  CHECK(m.value < 1e-12);

  m = kernel_minimum(sys, 1.0);
  CHECK(std::abs(m.p_star) < 1e-7);
  CHECK(m.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(m.interior);
  CHECK(m.curvature == doctest::Approx(4.0).epsilon(1e-5));

  const TwoBodySystem inv(Particle{1.0, DeformationFamily::inverse_sqrt(1.0)},
                          Particle{1.0, DeformationFamily::inverse_sqrt(1.0)});
  m = kernel_minimum(inv, 0.0);
  CHECK(std::abs(m.p_star) < 1e-7);
  CHECK(m.value < 1e-12);

  CHECK_THROWS_AS(kernel_minimum(sys, 25.0), EmptySupport);
}

TEST_CASE("kernel_minimum at a support endpoint in domain II") {
  const auto sys = cutoff_pair(1.0, 3.0, 1.0, 1.0);
  const double p0 = 3.0;
  const auto sup = momentum_support(sys, p0);
  REQUIRE(sup.c1 > 0.0);
  const auto m = kernel_minimum(sys, p0);
  CHECK(m.p_star == doctest::Approx(sup.c1).epsilon(1e-9));
  CHECK(m.value == doctest::Approx(p0 * p0 + 4.0 * sup.c1 * sup.c1).epsilon(1e-12));
  CHECK_FALSE(m.interior);
}
