#ifndef EQUIAFFINE_SUITE_HPP
#define EQUIAFFINE_SUITE_HPP

// Seeded generators of test connections and metrics.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "equiaffine/geometry.hpp"
#include "equiaffine/sampling.hpp"

namespace equiaffine::suite {

/// Portable uniform draws on [lo, hi) from a 64-bit Mersenne twister.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform(double lo, double hi) { return lo + (hi - lo) * detail::unit_double(engine_()); }
  int below(int bound) { return static_cast<int>(engine_() % static_cast<std::uint64_t>(bound)); }

private:
  std::mt19937_64 engine_;
};

namespace detail {
inline void monomials(int n, int degree, int first, std::vector<int>& current, std::vector<std::vector<int>>& out) {
  out.push_back(current);
  if (degree == 0) return;
  for (int k = first; k < n; ++k) {
    current.push_back(k);
    monomials(n, degree - 1, k, current, out);
    current.pop_back();
  }
}
}  // namespace detail

/// Every monomial of total degree <= `degree` in n variables, as lists of
/// variable indices (the empty list is the constant term).
inline std::vector<std::vector<int>> monomials(int n, int degree) {
  std::vector<std::vector<int>> out;
  std::vector<int> current;
  detail::monomials(n, degree, 0, current, out);
  return out;
}

/// Polynomial with coefficients drawn uniformly from [-1, 1].
inline Expression random_polynomial(Rng& rng, int n, int degree) {
  Expression e;
  for (const auto& mono : monomials(n, degree)) {
    Expression term = Expression::constant(rng.uniform(-1.0, 1.0));
    for (int k : mono) term = term * Expression::variable(k);
    e = e + term;
  }
  return e;
}

inline ConnectionField random_connection(const Chart& chart, std::uint64_t seed, int degree = 3) {
  Rng rng(seed);
  ConnectionField c(chart);
  const int n = chart.dim();
  for (int h = 0; h < n; ++h)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) c.set(h, i, j, random_polynomial(rng, n, degree));
  return c;
}

/// Chart used by the randomized suites.
inline Chart suite_chart(int n) { return Chart::cube(n, -1.0, 1.0); }

/// Diagonally dominant (hence positive definite) metric on [-1, 1]^n:
/// g_ii = 2 + x_i², g_ij = 0.3 sin(x_i + x_j).
inline MetricField suite_metric(const Chart& chart) {
  MetricField m(chart);
  for (int i = 0; i < chart.dim(); ++i)
    for (int j = i; j < chart.dim(); ++j) {
      const std::string xi = chart.names()[i], xj = chart.names()[j];
      m.set(i, j, chart.parse(i == j ? "2 + " + xi + "^2" : "0.3*sin(" + xi + " + " + xj + ")"));
    }
  return m;
}

struct NamedMetric {
  std::string name;
  MetricField metric;
};

/// Assorted closed-form metrics, each nondegenerate on its chart.
inline std::vector<NamedMetric> sample_metrics() {
  std::vector<NamedMetric> out;
  {
    Chart ch(2, {0.5, -1.0}, {2.0, 1.0});
    MetricField m(ch);
    m.set(0, 0, ch.parse("1"));
    m.set(1, 1, ch.parse("x0^2"));
    out.push_back({"polar", m});
  }
  {
    Chart ch(2, {-1.0, 0.5}, {1.0, 2.0});
    MetricField m(ch);
    m.set(0, 0, ch.parse("1/x1^2"));
    m.set(1, 1, ch.parse("1/x1^2"));
    out.push_back({"half-plane", m});
  }
  {
    Chart ch = Chart::cube(3, -1.0, 1.0);
    MetricField m(ch);
    for (int i = 0; i < 3; ++i) m.set(i, i, ch.parse("exp(x0 - 0.5*x1 + 0.25*x2)"));
    out.push_back({"conformal", m});
  }
  {
    Chart ch(3, {0.5, 0.3, -1.0}, {1.5, 2.8, 1.0});
    MetricField m(ch);
    m.set(0, 0, ch.parse("1"));
    m.set(1, 1, ch.parse("x0^2"));
    m.set(2, 2, ch.parse("x0^2*sin(x1)^2"));
    out.push_back({"spherical", m});
  }
  out.push_back({"dominant-4d", suite_metric(suite_chart(4))});
  return out;
}

/// Random metric g = AᵀA + I with a constant matrix A.
inline MetricField random_spd_constant_metric(const Chart& chart, std::uint64_t seed) {
  Rng rng(seed);
  const int n = chart.dim();
  std::vector<double> a(static_cast<std::size_t>(n * n));
  for (auto& x : a) x = rng.uniform(-1.0, 1.0);
  MetricField m(chart);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double s = i == j ? 1.0 : 0.0;
      for (int k = 0; k < n; ++k) s += a[k * n + i] * a[k * n + j];
      m.set(i, j, Expression::constant(s));
    }
  return m;
}

}  // namespace equiaffine::suite

#endif  // EQUIAFFINE_SUITE_HPP
