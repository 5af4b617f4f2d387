#ifndef EQUIAFFINE_GEODESIC_HPP
#define EQUIAFFINE_GEODESIC_HPP

// Geodesics ẍ^h = −Γ^h_{ij}(x) ẋ^i ẋ^j by classical fixed-step RK4, and
// comparison of curves as unparametrized point sets.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "equiaffine/geometry.hpp"

namespace equiaffine {

struct GeodesicProblem {
  Point start;
  Point velocity;
  double t_end = 1.0;
  double step = 1e-3;
};

struct CurveSample {
  double t = 0.0;
  Point x;
  Point v;
  Point a;  // ẍ from the ODE right-hand side; empty when unknown
};

struct Curve {
  std::vector<CurveSample> samples;
  bool truncated = false;  // left the chart before t_end
};

/// Raised when the connection cannot be evaluated mid-trajectory.
class IntegrationError : public Error {
public:
  IntegrationError(const std::string& what, double t) : Error(what + " (at t = " + std::to_string(t) + ")"), t_(t) {}
  double t() const { return t_; }

private:
  double t_;
};

namespace detail {

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

inline double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline double distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(s);
}

/// −Γ^h_{ij}(x) v^i v^j
inline Point geodesic_acceleration(const ConnectionField& c, std::span<const double> x, std::span<const double> v) {
  const int n = c.dim();
  const Tensor3 g = connection_values(c, x);
  Point acc(static_cast<std::size_t>(n), 0.0);
  for (int h = 0; h < n; ++h) {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s += g(h, i, j) * v[i] * v[j];
    acc[h] = -s;
  }
  return acc;
}

struct State {
  Point x, v;
};

inline State rk4_step(const ConnectionField& c, const State& s, double h) {
  const std::size_t n = s.x.size();
  auto axpy = [n](const Point& base, const Point& d, double f) {
    Point r(n);
    for (std::size_t k = 0; k < n; ++k) r[k] = base[k] + f * d[k];
    return r;
  };
  const Point k1x = s.v;
  const Point k1v = geodesic_acceleration(c, s.x, s.v);
  const Point x2 = axpy(s.x, k1x, h / 2), v2 = axpy(s.v, k1v, h / 2);
  const Point k2x = v2;
  const Point k2v = geodesic_acceleration(c, x2, v2);
  const Point x3 = axpy(s.x, k2x, h / 2), v3 = axpy(s.v, k2v, h / 2);
  const Point k3x = v3;
  const Point k3v = geodesic_acceleration(c, x3, v3);
  const Point x4 = axpy(s.x, k3x, h), v4 = axpy(s.v, k3v, h);
  const Point k4x = v4;
  const Point k4v = geodesic_acceleration(c, x4, v4);
  State out{Point(n), Point(n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.x[k] = s.x[k] + h / 6 * (k1x[k] + 2 * k2x[k] + 2 * k3x[k] + k4x[k]);
    out.v[k] = s.v[k] + h / 6 * (k1v[k] + 2 * k2v[k] + 2 * k3v[k] + k4v[k]);
  }
  return out;
}

}  // namespace detail

/// Predicate on the newest sample; returning true ends integration after it.
using StopCondition = std::function<bool(const CurveSample&)>;

/// Integrates with N = ceil(t_end / step) uniform steps of size t_end / N,
/// stopping early (truncated = true) when the curve leaves the chart.
inline Curve integrate(const ConnectionField& c, const GeodesicProblem& prob, const StopCondition& stop = {}) {
  const Chart& chart = c.chart();
  const int n = c.dim();
  if (static_cast<int>(prob.start.size()) != n || static_cast<int>(prob.velocity.size()) != n)
    throw DimensionError("geodesic start and velocity must have one entry per coordinate");
  if (!(detail::norm(prob.velocity) > 0.0)) throw DimensionError("geodesic velocity must be nonzero");
  if (!(prob.t_end > 0.0) || !(prob.step > 0.0)) throw DimensionError("t_end and step must be positive");
  if (prob.step > prob.t_end) throw DimensionError("step must not exceed t_end");
  chart.require_inside(prob.start);

  const auto steps = static_cast<long long>(std::ceil(prob.t_end / prob.step - 1e-9));
  const double h = prob.t_end / static_cast<double>(steps);

  Curve curve;
  curve.samples.reserve(static_cast<std::size_t>(steps) + 1);
  detail::State s{prob.start, prob.velocity};
  double t = 0.0;
  try {
    curve.samples.push_back({t, s.x, s.v, detail::geodesic_acceleration(c, s.x, s.v)});
    if (stop && stop(curve.samples.back())) return curve;
    for (long long k = 1; k <= steps; ++k) {
      detail::State next = detail::rk4_step(c, s, h);
      const double t_next = static_cast<double>(k) * h;
      if (!chart.contains(next.x)) {
        curve.truncated = true;
        break;
      }
      t = t_next;
      s = std::move(next);
      curve.samples.push_back({t, s.x, s.v, detail::geodesic_acceleration(c, s.x, s.v)});
      if (stop && stop(curve.samples.back())) break;
    }
  } catch (const DomainError& e) {
    throw IntegrationError(e.what(), t);
  }
  return curve;
}

/// Largest normalized component of the ∇-acceleration D = ẍ + Γ(ẋ, ẋ)
/// orthogonal to ẋ, |D_⊥| / (|D| + |ẋ|²). Zero for reparametrized
/// ∇-geodesics.
inline double collinearity_defect(const Curve& curve, const ConnectionField& c) {
  const auto& s = curve.samples;
  const int n = c.dim();
  double worst = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const Point& v = s[k].v;
    const double speed = detail::norm(v);
    if (speed < 1e-12) throw DimensionError("degenerate velocity along curve at t = " + std::to_string(s[k].t));

    Point acc = s[k].a;
    if (acc.empty()) {
      if (s.size() < 2) throw DimensionError("collinearity_defect needs accelerations or at least two samples");
      const std::size_t lo = k == 0 ? 0 : k - 1;
      const std::size_t hi = k + 1 == s.size() ? k : k + 1;
      acc.assign(static_cast<std::size_t>(n), 0.0);
      for (int h = 0; h < n; ++h) acc[h] = (s[hi].v[h] - s[lo].v[h]) / (s[hi].t - s[lo].t);
    }
    const Point geo = detail::geodesic_acceleration(c, s[k].x, v);
    Point d(static_cast<std::size_t>(n));
    for (int h = 0; h < n; ++h) d[h] = acc[h] - geo[h];
    const double along = detail::dot(d, v) / (speed * speed);
    Point perp(static_cast<std::size_t>(n));
    for (int h = 0; h < n; ++h) perp[h] = d[h] - along * v[h];
    worst = std::max(worst, detail::norm(perp) / (detail::norm(d) + speed * speed));
  }
  return worst;
}

namespace detail {

inline double point_segment_distance(std::span<const double> p, std::span<const double> a, std::span<const double> b) {
  const std::size_t n = p.size();
  double ab2 = 0.0, t = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    ab2 += (b[k] - a[k]) * (b[k] - a[k]);
    t += (p[k] - a[k]) * (b[k] - a[k]);
  }
  t = ab2 > 0.0 ? std::clamp(t / ab2, 0.0, 1.0) : 0.0;
  double d2 = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double q = a[k] + t * (b[k] - a[k]) - p[k];
    d2 += q * q;
  }
  return std::sqrt(d2);
}

/// max over samples of `a` of the distance to the polyline through `b`.
inline double directed_distance(const Curve& a, const Curve& b) {
  double worst = 0.0;
  for (const auto& s : a.samples) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k + 1 < b.samples.size(); ++k)
      best = std::min(best, point_segment_distance(s.x, b.samples[k].x, b.samples[k + 1].x));
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace detail

/// Symmetric polyline (Hausdorff-type) distance between the point sets of
/// two curves, divided by the diameter of their union.
inline double unparametrized_distance(const Curve& a, const Curve& b) {
  if (a.samples.size() < 2 || b.samples.size() < 2)
    throw DimensionError("unparametrized_distance needs at least two samples per curve");
  const double d = std::max(detail::directed_distance(a, b), detail::directed_distance(b, a));

  std::vector<const Point*> pts;
  pts.reserve(a.samples.size() + b.samples.size());
  for (const auto& s : a.samples) pts.push_back(&s.x);
  for (const auto& s : b.samples) pts.push_back(&s.x);
  double diameter = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) diameter = std::max(diameter, detail::distance(*pts[i], *pts[j]));
  if (diameter == 0.0) return 0.0;
  return d / diameter;
}

/// Cuts `curve` where it first crosses the hyperplane through `origin` with
/// normal `normal` (from the negative side). The crossing point is located on
/// the cubic Hermite interpolant of the bracketing samples. Returns nullopt
/// when the curve never crosses.
inline std::optional<Curve> clip_at_plane(const Curve& curve, std::span<const double> origin,
                                          std::span<const double> normal) {
  const auto& s = curve.samples;
  const std::size_t n = origin.size();
  auto side = [&](std::span<const double> x) {
    double f = 0.0;
    for (std::size_t k = 0; k < n; ++k) f += (x[k] - origin[k]) * normal[k];
    return f;
  };
  for (std::size_t k = 1; k < s.size(); ++k) {
    const double f0 = side(s[k - 1].x), f1 = side(s[k].x);
    if (!(f0 < 0.0 && f1 >= 0.0)) continue;

    const double dt = s[k].t - s[k - 1].t;
    auto hermite = [&](double u, Point& x, Point& v) {
      const double u2 = u * u, u3 = u2 * u;
      const double h00 = 2 * u3 - 3 * u2 + 1, h10 = u3 - 2 * u2 + u, h01 = -2 * u3 + 3 * u2, h11 = u3 - u2;
      const double d00 = 6 * u2 - 6 * u, d10 = 3 * u2 - 4 * u + 1, d01 = -6 * u2 + 6 * u, d11 = 3 * u2 - 2 * u;
      x.resize(n);
      v.resize(n);
      for (std::size_t j = 0; j < n; ++j) {
        x[j] = h00 * s[k - 1].x[j] + h10 * dt * s[k - 1].v[j] + h01 * s[k].x[j] + h11 * dt * s[k].v[j];
        v[j] = (d00 * s[k - 1].x[j] + d01 * s[k].x[j]) / dt + d10 * s[k - 1].v[j] + d11 * s[k].v[j];
      }
    };
    double lo = 0.0, hi = 1.0;
    Point x, v;
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
      const double mid = 0.5 * (lo + hi);
      hermite(mid, x, v);
      (side(x) < 0.0 ? lo : hi) = mid;
    }
    hermite(hi, x, v);

    Curve out;
    out.samples.assign(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(k));
    out.samples.push_back({s[k - 1].t + hi * dt, std::move(x), std::move(v), {}});
    return out;
  }
  return std::nullopt;
}

struct GeodesicComparison {
  Curve base;       // geodesic of the source connection
  Curve projected;  // geodesic of the transformed connection, same initial ray
  double distance = 0.0;
  double defect = 0.0;  // collinearity_defect(projected, source)
};

/// Integrates `source` over `prob`, then `projected` from the same ray until
/// it passes the end of the first curve (up to `time_factor` × t_end), and
/// trims whichever curve runs further so both cover the same stretch.
inline GeodesicComparison compare_geodesics(const ConnectionField& source, const ConnectionField& projected,
                                            const GeodesicProblem& prob, double time_factor = 64.0) {
  GeodesicComparison out;
  out.base = integrate(source, prob);
  const CurveSample& end = out.base.samples.back();
  const Point origin = end.x;
  const Point normal = end.v;

  GeodesicProblem long_prob = prob;
  long_prob.t_end = prob.t_end * time_factor;
  auto passed = [&](const CurveSample& s) {
    double f = 0.0;
    for (std::size_t k = 0; k < origin.size(); ++k) f += (s.x[k] - origin[k]) * normal[k];
    return s.t > 0.0 && f >= 0.0;
  };
  Curve other = integrate(projected, long_prob, passed);

  if (auto clipped = clip_at_plane(other, origin, normal)) {
    out.projected = std::move(*clipped);
  } else {
    // The transformed geodesic stopped short: trim the source curve instead.
    out.projected = std::move(other);
    const CurveSample& stop = out.projected.samples.back();
    if (auto trimmed = clip_at_plane(out.base, stop.x, stop.v)) out.base = std::move(*trimmed);
  }
  // Interpolated end points carry no acceleration yet.
  if (!out.projected.samples.empty() && out.projected.samples.back().a.empty()) {
    auto& last = out.projected.samples.back();
    last.a = detail::geodesic_acceleration(projected, last.x, last.v);
  }
  if (!out.base.samples.empty() && out.base.samples.back().a.empty()) {
    auto& last = out.base.samples.back();
    last.a = detail::geodesic_acceleration(source, last.x, last.v);
  }
  out.distance = unparametrized_distance(out.base, out.projected);
  out.defect = collinearity_defect(out.projected, source);
  return out;
}

/// CSV with header t,x0..,v0.. and 17 significant digits per value.
inline void write_csv(std::ostream& os, const Curve& curve, int n) {
  os << 't';
  for (int k = 0; k < n; ++k) os << ",x" << k;
  for (int k = 0; k < n; ++k) os << ",v" << k;
  os << '\n';
  char buf[40];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    os << buf;
  };
  for (const auto& s : curve.samples) {
    put(s.t);
    for (double x : s.x) os << ',', put(x);
    for (double v : s.v) os << ',', put(v);
    os << '\n';
  }
}

}  // namespace equiaffine

#endif  // EQUIAFFINE_GEODESIC_HPP
