#include "minlen/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "minlen/errors.hpp"

namespace minlen {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

using Gauss15 = boost::math::quadrature::gauss<double, 15>;

// One piece of the integration range, parametrised by u in [0, 1]; u = 0 is
// the `start` end (the peak side when there is one).
struct Segment {
  enum class Map { Linear, Squash, Infinite };

  double start = 0.0;
  double dir = 1.0;
  double length = 0.0;  // mapping scale for Map::Infinite
  Map map = Map::Linear;
  double grade = 0.0;   // peak width in u at u = 0, 0 if none

  double point(double u) const {
    switch (map) {
    case Map::Linear: return start + dir * length * u;
    case Map::Squash: return start + dir * length * u * (2.0 - u);
    case Map::Infinite: return start + dir * length * u / (1.0 - u);
    }
    return start;
  }

  double jacobian(double u) const {
    switch (map) {
    case Map::Linear: return length;
    case Map::Squash: return 2.0 * length * (1.0 - u);
    case Map::Infinite: return length / ((1.0 - u) * (1.0 - u));
    }
    return length;
  }
};

struct Panel {
  std::size_t segment;
  double u0, u1;
  double left, right;  // half-panel estimates
  double err;

  double value() const { return left + right; }
  bool operator<(const Panel& other) const { return err < other.err; }
};

template <class F>
double gauss_panel(const F& g, double u0, double u1) {
  const double half = 0.5 * (u1 - u0);
  const double mid = 0.5 * (u0 + u1);
  const auto& x = Gauss15::abscissa();
  const auto& w = Gauss15::weights();
  double sum = w[0] * g(mid);
  for (std::size_t i = 1; i < x.size(); ++i) {
    sum += w[i] * (g(mid - half * x[i]) + g(mid + half * x[i]));
  }
  return sum * half;
}

Segment make_segment(double start, double end, bool end_singular, double peak_width) {
  Segment seg;
  seg.start = start;
  seg.dir = end >= start ? 1.0 : -1.0;
  if (!std::isfinite(end)) {
    seg.map = Segment::Map::Infinite;
    seg.length = peak_width > 0.0 ? peak_width : std::max(1.0, std::abs(start));
    return seg;
  }
  seg.length = std::abs(end - start);
  seg.map = end_singular ? Segment::Map::Squash : Segment::Map::Linear;
  if (peak_width > 0.0 && seg.length > 0.0) {
    seg.grade = peak_width / (seg.map == Segment::Map::Squash ? 2.0 * seg.length : seg.length);
  }
  return seg;
}

std::vector<Segment> build_segments(double a, double b, const AdaptiveOptions& options, const PeakHint* peak) {
  std::vector<Segment> segments;
  const double width = peak ? peak->width : 0.0;
  if (peak && peak->location > a && peak->location < b) {
    segments.push_back(make_segment(peak->location, a, options.lower_singular, width));
    segments.push_back(make_segment(peak->location, b, options.upper_singular, width));
    return segments;
  }
  if (!std::isfinite(a) && !std::isfinite(b)) {
    segments.push_back(make_segment(0.0, a, false, width));
    segments.push_back(make_segment(0.0, b, false, width));
    return segments;
  }
  if (!std::isfinite(a)) {
    segments.push_back(make_segment(b, a, false, width));
    return segments;
  }
  if (!std::isfinite(b)) {
    segments.push_back(make_segment(a, b, false, width));
    return segments;
  }
  if (peak && peak->location >= b && !options.upper_singular) {
    segments.push_back(make_segment(b, a, options.lower_singular, width));
    return segments;
  }
  if (peak && peak->location <= a && !options.lower_singular) {
    segments.push_back(make_segment(a, b, options.upper_singular, width));
    return segments;
  }
  if (options.lower_singular && options.upper_singular) {
    const double mid = 0.5 * (a + b);
    segments.push_back(make_segment(mid, a, true, 0.0));
    segments.push_back(make_segment(mid, b, true, 0.0));
    return segments;
  }
  if (options.lower_singular) {
    segments.push_back(make_segment(b, a, true, 0.0));
  } else {
    segments.push_back(make_segment(a, b, options.upper_singular, 0.0));
  }
  return segments;
}

std::vector<double> initial_mesh(double grade) {
  std::vector<double> nodes{0.0};
  if (grade > 0.0 && grade < 0.125) {
    for (double u = grade; u < 0.5; u *= 2.0) nodes.push_back(u);
    for (double u : {0.5, 0.75}) nodes.push_back(u);
  } else {
    for (double u : {0.125, 0.25, 0.5, 0.75}) nodes.push_back(u);
  }
  nodes.push_back(1.0);
  return nodes;
}

} // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    const AdaptiveOptions& options, const PeakHint* peak) {
  if (a == b) return {};
  if (a > b) {
    AdaptiveOptions flipped = options;
    std::swap(flipped.lower_singular, flipped.upper_singular);
    QuadratureResult r = integrate_adaptive(f, b, a, flipped, peak);
    r.value = -r.value;
    return r;
  }

  const std::vector<Segment> segments = build_segments(a, b, options, peak);

  auto integrand = [&](std::size_t s) {
    const Segment& seg = segments[s];
    return [&seg, &f](double u) {
      const double value = f(seg.point(u));
      return value == 0.0 ? 0.0 : value * seg.jacobian(u);
    };
  };

  auto make_panel = [&](std::size_t s, double u0, double u1, double whole) {
    const auto g = integrand(s);
    const double mid = 0.5 * (u0 + u1);
    Panel panel{s, u0, u1, gauss_panel(g, u0, mid), gauss_panel(g, mid, u1), 0.0};
    panel.err = std::abs(whole - panel.value());
    return panel;
  };

  // Max-heap on the panel error estimate.
  std::vector<Panel> active;
  std::vector<Panel> frozen;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    const auto nodes = initial_mesh(segments[s].grade);
    const auto g = integrand(s);
    for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
      active.push_back(make_panel(s, nodes[k], nodes[k + 1], gauss_panel(g, nodes[k], nodes[k + 1])));
    }
  }
  std::make_heap(active.begin(), active.end());

  struct Totals {
    double value = 0.0, err = 0.0, magnitude = 0.0;
    void add(const Panel& p, double sign = 1.0) {
      value += sign * p.value();
      err += sign * p.err;
      magnitude += sign * (std::abs(p.left) + std::abs(p.right));
    }
  };
  auto recompute = [&]() {
    Totals t;
    for (const auto& p : active) t.add(p);
    for (const auto& p : frozen) t.add(p);
    return t;
  };

  std::size_t panel_count = active.size();
  Totals total = recompute();
  double frozen_err = 0.0;
  std::size_t next_recompute = 64;
  for (std::size_t iter = 0;; ++iter) {
    const double target =
        std::max({options.tol_rel * std::abs(total.value), options.tol_abs, 50.0 * kEps * total.magnitude});
    if (total.err - frozen_err <= target || active.empty()) break;
    if (panel_count > options.max_panels) {
      throw ConvergenceError("adaptive quadrature exceeded " + std::to_string(options.max_panels) + " panels");
    }
    std::pop_heap(active.begin(), active.end());
    const Panel worst = active.back();
    active.pop_back();
    const double mid = 0.5 * (worst.u0 + worst.u1);
    if (mid - worst.u0 <= 8.0 * kEps * std::max(1.0, std::abs(mid))) {
      frozen.push_back(worst);
      frozen_err += worst.err;
    } else {
      const Panel left = make_panel(worst.segment, worst.u0, mid, worst.left);
      const Panel right = make_panel(worst.segment, mid, worst.u1, worst.right);
      total.add(worst, -1.0);
      total.add(left);
      total.add(right);
      active.push_back(left);
      std::push_heap(active.begin(), active.end());
      active.push_back(right);
      std::push_heap(active.begin(), active.end());
      ++panel_count;
    }
    if (iter == next_recompute) {
      total = recompute();
      next_recompute = iter + std::max<std::size_t>(64, panel_count / 4);
    }
  }
  total = recompute();
  return {total.value, std::max(total.err, 50.0 * kEps * total.magnitude), panel_count};
}

// ---------------------------------------------------------------------------

SpectralProblem::SpectralProblem(const TwoBodySystem& sys, double p0)
    : sys_(sys), p0_(p0), support_(momentum_support(sys, p0)) {
  if (support_.empty()) throw EmptySupport("|p0| exceeds b1 + b2: momentum support is empty");
  minimum_ = kernel_minimum(sys_, p0_, support_);
}

double SpectralProblem::min_gap() const { return 1e-14 * std::max(1.0, std::abs(minimum_.value)); }

double SpectralProblem::min_admissible_s() const { return pole() + min_gap(); }

double SpectralProblem::peak_width(double gap) const {
  const double curvature =
      minimum_.curvature > 0.0 ? minimum_.curvature : 1.0 / (sys_.mu1() * sys_.mu2());
  double width = std::sqrt(std::max(gap, 0.0) / curvature);
  if (std::isfinite(support_.width())) width = std::min(width, support_.width());
  return width;
}

namespace {

// int dx / (gap + c x^2)^power over [x1, x2]; x may be infinite.
double quadratic_model_integral(double gap, double c, double x1, double x2, int power) {
  const double root = std::sqrt(c / gap);
  auto antiderivative = [&](double x) {
    const double at = std::atan(x * root);
    if (power == 1) return at / std::sqrt(c * gap);
    const double rational = std::isfinite(x) ? x / (2.0 * gap * (gap + c * x * x)) : 0.0;
    return rational + at / (2.0 * gap * std::sqrt(c * gap));
  };
  return antiderivative(x2) - antiderivative(x1);
}

QuadratureResult integrate_spectral(const SpectralProblem& problem, double gap, double lo, double hi, double tol,
                                    int power) {
  if (!(gap > problem.min_gap())) {
    std::ostringstream msg;
    msg << "spectral parameter s = " << problem.pole() + gap << " is at or below the pole -Gmin2 = " << problem.pole();
    throw PoleError(msg.str());
  }
  if (lo == hi) return {};
  const MomentumSupport& support = problem.support();
  const double sign = hi >= lo ? 1.0 : -1.0;
  if (sign < 0.0) std::swap(lo, hi);
  const double slack = 1e-12 * std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
  if (lo < support.c1 - slack || hi > support.c2 + slack) {
    throw DomainError("integration range lies outside the momentum support");
  }
  lo = std::max(lo, support.c1);
  hi = std::min(hi, support.c2);

  const KernelMinimum& minimum = problem.minimum();
  const bool subtract = gap < 1e-6 * (1.0 + std::abs(minimum.value)) && minimum.interior && minimum.curvature > 0.0;

  AdaptiveOptions options;
  options.tol_rel = tol;
  options.tol_abs = tol * 1e-3;
  options.lower_singular = support.lower_singular && lo == support.c1;
  options.upper_singular = support.upper_singular && hi == support.c2;
  // Integrate over the offset x = p - p_star so that points next to the peak
  // keep their full precision.
  const PeakHint peak{0.0, problem.peak_width(gap)};
  const double x_lo = lo - minimum.p_star;
  const double x_hi = hi - minimum.p_star;

  double closed = 0.0;
  std::function<double(double)> f;
  if (subtract) {
    const double c = minimum.curvature;
    closed = quadratic_model_integral(gap, c, x_lo, x_hi, power);
    options.tol_abs = std::max(options.tol_abs, options.tol_rel * std::abs(closed));
    f = [&problem, gap, c, power](double x) {
      const double model = 1.0 / (gap + c * x * x);
      const double exact = 1.0 / problem.offset_denominator(x, gap);
      return power == 1 ? exact - model : exact * exact - model * model;
    };
  } else {
    f = [&problem, gap, power](double x) {
      const double inv = 1.0 / problem.offset_denominator(x, gap);
      return power == 1 ? inv : inv * inv;
    };
  }

  QuadratureResult r = integrate_adaptive(f, x_lo, x_hi, options, &peak);
  r.value = sign * (r.value + closed);
  r.err_estimate = std::max(r.err_estimate, 4.0 * kEps * std::abs(closed));
  return r;
}

} // namespace

QuadratureResult integrate_I1_at_gap(const SpectralProblem& problem, double gap, double tol) {
  const auto& support = problem.support();
  if (support.degenerate()) return {};
  return integrate_spectral(problem, gap, support.c1, support.c2, tol, 1);
}

QuadratureResult integrate_I2_at_gap(const SpectralProblem& problem, double gap, double tol) {
  const auto& support = problem.support();
  if (support.degenerate()) return {};
  return integrate_spectral(problem, gap, support.c1, support.c2, tol, 2);
}

QuadratureResult integrate_phase_at_gap(const SpectralProblem& problem, double gap, double p_lo, double p_hi,
                                        double tol) {
  return integrate_spectral(problem, gap, p_lo, p_hi, tol, 1);
}

namespace {

double gap_of(const SpectralProblem& problem, double s) {
  if (!(s > problem.min_admissible_s())) {
    std::ostringstream msg;
    msg << "spectral parameter s = " << s << " is at or below the pole -Gmin2 = " << problem.pole();
    throw PoleError(msg.str());
  }
  return s + problem.minimum().value;
}

} // namespace

QuadratureResult integrate_I1(const SpectralProblem& problem, double s, double tol) {
  return integrate_I1_at_gap(problem, gap_of(problem, s), tol);
}

QuadratureResult integrate_I2(const SpectralProblem& problem, double s, double tol) {
  return integrate_I2_at_gap(problem, gap_of(problem, s), tol);
}

QuadratureResult integrate_phase(const SpectralProblem& problem, double s, double p_lo, double p_hi, double tol) {
  return integrate_phase_at_gap(problem, gap_of(problem, s), p_lo, p_hi, tol);
}

SpectralIntegrals spectral_integrals(const SpectralProblem& problem, double s, double tol) {
  const auto i1 = integrate_I1(problem, s, tol);
  const auto i2 = integrate_I2(problem, s, tol);
  return {s, i1.value, i2.value, std::max(i1.err_estimate, i2.err_estimate)};
}

QuadratureResult integrate_I1(const TwoBodySystem& sys, double p0, double s, double tol) {
  return integrate_I1(SpectralProblem(sys, p0), s, tol);
}

QuadratureResult integrate_I2(const TwoBodySystem& sys, double p0, double s, double tol) {
  return integrate_I2(SpectralProblem(sys, p0), s, tol);
}

QuadratureResult integrate_phase(const TwoBodySystem& sys, double p0, double s, double p_lo, double p_hi,
                                 double tol) {
  return integrate_phase(SpectralProblem(sys, p0), s, p_lo, p_hi, tol);
}

} // namespace minlen
