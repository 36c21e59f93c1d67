#include "minlen/kinematics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

#include "minlen/errors.hpp"

#include <boost/math/tools/toms748_solve.hpp>

namespace minlen {

namespace {

// Arguments that overshoot a cutoff by rounding (p taken exactly at c1 or c2)
// are pulled back onto it.
double snap_to_cutoff(double x, double b) {
  const double ax = std::abs(x);
  if (ax > b && ax <= b * (1.0 + 16.0 * std::numeric_limits<double>::epsilon())) {
    return std::copysign(b, x);
  }
  return x;
}

bool endpoint_singular(const DeformationFamily& a, double bound_a, const DeformationFamily& b, double bound_b,
                       bool take_max) {
  if (!std::isfinite(bound_a) && !std::isfinite(bound_b)) return false;
  const bool a_active = take_max ? bound_a >= bound_b : bound_a <= bound_b;
  const bool b_active = take_max ? bound_b >= bound_a : bound_b <= bound_a;
  return (a_active && a.diverges_at_endpoint()) || (b_active && b.diverges_at_endpoint());
}

// Coordinate used for scanning a possibly unbounded support.
struct ScanMap {
  double t_lo, t_hi;
  double origin, scale;
  enum class Kind { Linear, Both, Upper, Lower } kind;

  double operator()(double t) const {
    switch (kind) {
    case Kind::Linear: return t;
    case Kind::Both:
    case Kind::Upper:
    case Kind::Lower: return origin + scale * std::tan(t);
    }
    return t;
  }
};

ScanMap make_scan_map(const MomentumSupport& support, double p0) {
  const double half_pi = 0.5 * std::numbers::pi;
  const double scale = 1.0 + std::abs(p0);
  const bool lo_inf = !std::isfinite(support.c1);
  const bool hi_inf = !std::isfinite(support.c2);
  if (lo_inf && hi_inf) return {-half_pi, half_pi, 0.0, scale, ScanMap::Kind::Both};
  if (hi_inf) return {0.0, half_pi, support.c1, scale, ScanMap::Kind::Upper};
  if (lo_inf) return {-half_pi, 0.0, support.c2, scale, ScanMap::Kind::Lower};
  return {support.c1, support.c2, 0.0, 1.0, ScanMap::Kind::Linear};
}

} // namespace

TwoBodySystem::TwoBodySystem(Particle first, Particle second, double hbar)
    : p1_(std::move(first)), p2_(std::move(second)), hbar_(hbar) {
  if (!(p1_.mass > 0.0) || !(p2_.mass > 0.0) || !std::isfinite(p1_.mass) || !std::isfinite(p2_.mass)) {
    throw ConfigError("particle masses must be positive and finite");
  }
  if (!(hbar_ > 0.0) || !std::isfinite(hbar_)) throw ConfigError("hbar must be positive and finite");
  if (p1_.deformation.b() < p2_.deformation.b()) {
    std::swap(p1_, p2_);
    relabelled_ = true;
  }
  total_mass_ = p1_.mass + p2_.mass;
  mu1_ = p1_.mass / total_mass_;
  mu2_ = p2_.mass / total_mass_;
}

std::string_view to_string(Domain domain) {
  switch (domain) {
  case Domain::I: return "I";
  case Domain::II: return "II";
  case Domain::III: return "III";
  case Domain::Merged: return "Merged";
  case Domain::Empty: return "Empty";
  }
  return "Empty";
}

MomentumSupport momentum_support(const TwoBodySystem& sys, double p0) {
  const double b1 = sys.b1();
  const double b2 = sys.b2();
  MomentumSupport out;
  if (!(std::abs(p0) <= b1 + b2)) return out;

  const double lo1 = -b1 - sys.mu1() * p0;
  const double hi1 = b1 - sys.mu1() * p0;
  const double lo2 = sys.mu2() * p0 - b2;
  const double hi2 = sys.mu2() * p0 + b2;
  out.c1 = std::max(lo1, lo2);
  out.c2 = std::min(hi1, hi2);
  if (out.c1 > out.c2) out.c2 = out.c1;  // corner |p0| = b1 + b2 under rounding

  const auto& f1 = sys.particle1().deformation;
  const auto& f2 = sys.particle2().deformation;
  out.lower_singular = endpoint_singular(f1, lo1, f2, lo2, true);
  out.upper_singular = endpoint_singular(f1, hi1, f2, hi2, false);

  if (sys.equal_cutoffs()) {
    out.domain = Domain::Merged;
  } else if (std::abs(p0) <= b1 - b2) {
    out.domain = Domain::I;
  } else {
    out.domain = p0 > 0.0 ? Domain::II : Domain::III;
  }
  return out;
}

double kinetic_kernel(const TwoBodySystem& sys, double p0, double p) {
  const auto& f1 = sys.particle1().deformation;
  const auto& f2 = sys.particle2().deformation;
  const double g1 = f1.g(snap_to_cutoff(sys.mu1() * p0 + p, f1.b()));
  const double g2 = f2.g(snap_to_cutoff(sys.mu2() * p0 - p, f2.b()));
  return g1 * g1 / sys.mu1() + g2 * g2 / sys.mu2();
}

double kinetic_kernel_clamped(const TwoBodySystem& sys, double p0, double p) noexcept {
  const double a = sys.particle1().deformation.g_squared_clamped(sys.mu1() * p0 + p);
  const double b = sys.particle2().deformation.g_squared_clamped(sys.mu2() * p0 - p);
  return a / sys.mu1() + b / sys.mu2();
}

namespace {

// g(v + d)^2 - g(v)^2 for one particle, split as slope * d + rest so that the
// linear terms of both particles can be combined before rounding.
struct SquareIncrement {
  double slope = 0.0;
  double rest = 0.0;
};

SquareIncrement square_increment(const DeformationFamily& f, double v, double d) noexcept {
  const double requested = d;
  const double b = f.b();
  if (f.bounded()) {
    const double u = v + d;
    if (f.diverges_at_endpoint() && (std::abs(u) >= b || std::abs(v) >= b)) {
      const double edge = std::abs(u) >= b && std::abs(v) < b ? kInfinity : std::numeric_limits<double>::quiet_NaN();
      return {0.0, edge};
    }
    if (std::abs(v) > b || std::abs(u) > b) {
      v = std::clamp(v, -b, b);
      d = std::clamp(u, -b, b) - v;
    }
  }
  const double g = f.g(v);
  const double slope = 2.0 * g * f.g_prime(v);
  const double dg = f.g_increment(v, d);
  return {slope, slope * (d - requested) + 2.0 * g * f.g_remainder(v, d) + dg * dg};
}

} // namespace

double kernel_step(const TwoBodySystem& sys, double p0, double p_ref, double delta) noexcept {
  if (delta == 0.0) return 0.0;
  const auto a = square_increment(sys.particle1().deformation, sys.mu1() * p0 + p_ref, delta);
  const auto b = square_increment(sys.particle2().deformation, sys.mu2() * p0 - p_ref, -delta);
  return delta * (a.slope / sys.mu1() - b.slope / sys.mu2()) + (a.rest / sys.mu1() + b.rest / sys.mu2());
}

double kernel_slope(const TwoBodySystem& sys, double p0, double p) {
  const auto& f1 = sys.particle1().deformation;
  const auto& f2 = sys.particle2().deformation;
  const double v1 = snap_to_cutoff(sys.mu1() * p0 + p, f1.b());
  const double v2 = snap_to_cutoff(sys.mu2() * p0 - p, f2.b());
  return 2.0 * (f1.g(v1) * f1.g_prime(v1) / sys.mu1() - f2.g(v2) * f2.g_prime(v2) / sys.mu2());
}

double kernel_excess(const TwoBodySystem& sys, double p0, double p_ref, double p) noexcept {
  return kernel_step(sys, p0, p_ref, p - p_ref);
}

KernelMinimum kernel_minimum(const TwoBodySystem& sys, double p0) {
  return kernel_minimum(sys, p0, momentum_support(sys, p0));
}

KernelMinimum kernel_minimum(const TwoBodySystem& sys, double p0, const MomentumSupport& support) {
  if (support.empty()) throw EmptySupport("kernel_minimum: momentum support is empty");
  auto kernel = [&](double p) { return kinetic_kernel_clamped(sys, p0, p); };

  KernelMinimum out;
  if (support.degenerate()) {
    out.p_star = support.c1;
    out.value = kernel(support.c1);
    return out;
  }

  const ScanMap map = make_scan_map(support, p0);
  constexpr int grid = 512;
  const double dt = (map.t_hi - map.t_lo) / (grid - 1);
  int best = 0;
  double best_value = kInfinity;
  for (int k = 0; k < grid; ++k) {
    const double value = kernel(map(map.t_lo + k * dt));
    if (value < best_value) {
      best_value = value;
      best = k;
    }
  }

  // Golden-section refinement inside the two cells adjacent to the best node.
  double a = map.t_lo + std::max(best - 1, 0) * dt;
  double b = map.t_lo + std::min(best + 1, grid - 1) * dt;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = kernel(map(x1));
  double f2 = kernel(map(x2));
  for (int it = 0; it < 200 && (b - a) > 4.0 * std::numeric_limits<double>::epsilon() * (std::abs(a) + std::abs(b)); ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = kernel(map(x1));
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = kernel(map(x2));
    }
  }
  std::array<double, 3> candidates{map(map.t_lo + best * dt), map(x1), map(x2)};
  out.p_star = candidates[0];
  out.value = kernel(candidates[0]);
  for (double p : candidates) {
    const double value = kernel(p);
    if (value < out.value) {
      out.value = value;
      out.p_star = p;
    }
  }
  out.p_star = std::clamp(out.p_star, support.c1, support.c2);

  const double span = std::isfinite(support.width()) ? support.width() / 4.0 : kInfinity;
  const double h = 1e-3 * std::min(span, std::max(1.0, std::abs(out.p_star)));
  out.interior = out.p_star - 2.0 * h >= support.c1 && out.p_star + 2.0 * h <= support.c2;
  if (out.interior) {
    // The scan cells next to the best node bracket the zero of dG^2/dp.
    const double lo = std::max(map(map.t_lo + std::max(best - 1, 0) * dt), support.c1);
    const double hi = std::min(map(map.t_lo + std::min(best + 1, grid - 1) * dt), support.c2);
    auto slope = [&](double p) { return kernel_slope(sys, p0, p); };
    if (lo > support.c1 && hi < support.c2 && lo < out.p_star && out.p_star < hi) {
      const double f_lo = slope(lo);
      const double f_hi = slope(hi);
      if (f_lo < 0.0 && f_hi > 0.0) {
        std::uintmax_t iters = 200;
        auto tol = boost::math::tools::eps_tolerance<double>(53);
        auto [a0, b0] = boost::math::tools::toms748_solve(slope, lo, hi, f_lo, f_hi, tol, iters);
        out.p_star = std::abs(slope(a0)) <= std::abs(slope(b0)) ? a0 : b0;
      }
    }
    auto excess = [&](double p) { return kernel_excess(sys, p0, out.p_star, p); };
    out.value = kernel(out.p_star);
    const double second = (excess(out.p_star - h) + excess(out.p_star + h)) / (h * h);
    out.curvature = std::isfinite(second) && second > 0.0 ? 0.5 * second : 0.0;
  }
  return out;
}

} // namespace minlen
