#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "equiaffine/geometry.hpp"
#include "equiaffine/sampling.hpp"
#include "equiaffine/suite.hpp"
#include "oracles.hpp"

using namespace equiaffine;
using Catch::Approx;

TEST_CASE("chart validation", "[geometry]") {
  CHECK_THROWS_AS(Chart(2, {0, 1}, {1, 1}), DimensionError);
  CHECK_THROWS_AS(Chart(1, {0}, {1}), DimensionError);
  CHECK_THROWS_AS(Chart(2, {0, 0}, {1, 1}, {"a", "a"}), DimensionError);
  const Chart c = Chart::cube(3, -1, 1);
  CHECK(c.contains(Point{0, 1, -1}));
  CHECK_FALSE(c.contains(Point{0, 1.01, 0}));
  CHECK_THROWS_AS(c.require_inside(Point{2, 0, 0}), DimensionError);
  CHECK(c.names() == std::vector<std::string>{"x0", "x1", "x2"});
}

TEST_CASE("connection storage is symmetric", "[geometry]") {
  const Chart chart = Chart::cube(3, -1, 1);
  const ConnectionField c = suite::random_connection(chart, 3);
  for (int h = 0; h < 3; ++h)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) CHECK(&c(h, i, j) == &c(h, j, i));

  for (const Point& p : sample_points(chart, 20, 1)) {
    const ConnectionJets jets = connection_jets(c, p);
    for (int h = 0; h < 3; ++h)
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) REQUIRE(jets.values(h, i, j) == jets.values(h, j, i));
  }
  ConnectionField bad(chart);
  CHECK_THROWS_AS(bad.set(0, 0, 0, Expression::variable(3)), DimensionError);
}

TEST_CASE("connection jets", "[geometry]") {
  const Chart chart = Chart::cube(2, -1, 1);
  const ConnectionField flat(chart);
  const ConnectionJets z = connection_jets(flat, Point{0.2, 0.4});
  CHECK(z.values.max_abs() == 0.0);
  CHECK(z.gradients.max_abs() == 0.0);

  ConnectionField c(chart);
  c.set(0, 0, 0, chart.parse("x1"));
  const ConnectionJets j = connection_jets(c, Point{0.2, 0.4});
  CHECK(j.values(0, 0, 0) == 0.4);
  CHECK(j.gradients(0, 0, 0, 1) == 1.0);
  CHECK(j.gradients(0, 0, 0, 0) == 0.0);

  CHECK_THROWS_AS(connection_jets(c, Point{2.0, 0.0}), DimensionError);
}

TEST_CASE("connection gradients match finite differences", "[geometry][property]") {
  for (int n = 2; n <= 4; ++n) {
    const Chart chart = suite::suite_chart(n);
    const ConnectionField c = suite::random_connection(chart, 100 + n);
    double worst = 0.0;
    for (const Point& p : sample_points(chart, 20, 9)) {
      const ConnectionJets jets = connection_jets(c, p);
      for (int h = 0; h < n; ++h)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            const auto g = oracle::gradient(oracle::scalar(c(h, i, j)), p);
            for (int k = 0; k < n; ++k)
              worst = std::max(worst, std::fabs(jets.gradients(h, i, j, k) - g[k]) / std::max(1.0, std::fabs(g[k])));
          }
    }
    CHECK(worst <= 1e-6);
  }
}

TEST_CASE("metric inverse", "[geometry]") {
  const Chart chart = Chart::cube(2, -3, 3);
  const Tensor2 id = metric_inverse(MetricField::identity(chart), Point{0.5, 0.5});
  CHECK(id(0, 0) == 1.0);
  CHECK(id(1, 1) == 1.0);
  CHECK(id(0, 1) == 0.0);

  MetricField polar(chart);
  polar.set(0, 0, chart.parse("1"));
  polar.set(1, 1, chart.parse("x0^2"));
  const Tensor2 inv = metric_inverse(polar, Point{2, 0.1});
  CHECK(inv(0, 0) == 1.0);
  CHECK(inv(1, 1) == 0.25);
  CHECK(inv(0, 1) == 0.0);

  try {
    metric_inverse(polar, Point{0.0, 1.0});
    FAIL("expected a singular metric");
  } catch (const SingularMetricError& e) {
    CHECK(e.det() == 0.0);
    CHECK(e.point() == Point{0.0, 1.0});
  }
}

TEST_CASE("metric inverse multiplies back to the identity", "[geometry][property]") {
  for (int n = 2; n <= 5; ++n) {
    const Chart chart = Chart::cube(n, -1, 1);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const MetricField m = suite::random_spd_constant_metric(chart, seed);
      const Point p(n, 0.1);
      const Tensor2 g = metric_values(m, p), inv = metric_inverse(m, p);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double s = 0.0;
          for (int k = 0; k < n; ++k) s += inv(i, k) * g(k, j);
          CHECK(std::fabs(s - (i == j ? 1.0 : 0.0)) <= 1e-10);
        }
    }
  }
}

TEST_CASE("Levi-Civita connection of simple metrics", "[geometry]") {
  const Chart chart = Chart::cube(3, -1, 1);
  const ConnectionJets flat = levi_civita(suite::random_spd_constant_metric(chart, 4), Point{0.1, 0.2, 0.3});
  CHECK(flat.values.max_abs() == 0.0);
  CHECK(flat.gradients.max_abs() == 0.0);

  const Chart plane(2, {0.5, -1}, {3, 1});
  MetricField polar(plane);
  polar.set(0, 0, plane.parse("1"));
  polar.set(1, 1, plane.parse("x0^2"));
  const Point p{2.0, 0.3};
  const ConnectionJets lc = levi_civita(polar, p);
  CHECK(lc.values(1, 0, 1) == Approx(0.5).epsilon(1e-15));
  CHECK(lc.values(1, 1, 0) == Approx(0.5).epsilon(1e-15));
  CHECK(lc.values(0, 1, 1) == Approx(-2.0).epsilon(1e-15));
  CHECK(lc.values(0, 0, 0) == 0.0);
  CHECK(lc.values(1, 1, 1) == 0.0);
  CHECK(lc.values(1, 0, 0) == 0.0);
  CHECK(lc.values(0, 0, 1) == 0.0);
  // ∂_0 Γ^1_{01} = −1/x0², ∂_0 Γ^0_{11} = −1
  CHECK(lc.gradients(1, 0, 1, 0) == Approx(-0.25).epsilon(1e-14));
  CHECK(lc.gradients(0, 1, 1, 0) == Approx(-1.0).epsilon(1e-14));

  const Tensor3 fd = oracle::christoffel(polar, p);
  CHECK((lc.values - fd).max_abs() <= 1e-9);
}

TEST_CASE("Levi-Civita connections are metric compatible and match the oracle", "[geometry][property]") {
  for (const auto& [name, m] : suite::sample_metrics()) {
    INFO(name);
    double compat = 0.0, oracle_err = 0.0, grad_err = 0.0;
    for (const Point& p : sample_points(m.chart(), 100, 3)) {
      const ConnectionJets lc = levi_civita(m, p);
      compat = std::max(compat, metric_covariant_derivative(m, lc.values, p).max_abs());
      oracle_err = std::max(oracle_err, (lc.values - oracle::christoffel(m, p)).max_abs());
    }
    for (const Point& p : sample_points(m.chart(), 10, 4)) {
      // Gradients of Γ against differences of levi_civita values.
      const ConnectionJets lc = levi_civita(m, p);
      const int n = m.dim();
      for (int k = 0; k < n; ++k) {
        Point a = p, b = p;
        const double h = 1e-6;
        a[k] += h;
        b[k] -= h;
        if (!m.chart().contains(a) || !m.chart().contains(b)) continue;
        const Tensor3 diff = levi_civita(m, a).values - levi_civita(m, b).values;
        for (int hh = 0; hh < n; ++hh)
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
              const double fd = diff(hh, i, j) / (2 * h);
              grad_err = std::max(grad_err, std::fabs(lc.gradients(hh, i, j, k) - fd) / std::max(1.0, std::fabs(fd)));
            }
      }
    }
    CHECK(compat <= 1e-9);
    CHECK(oracle_err <= 1e-8);
    CHECK(grad_err <= 1e-6);
  }
}

TEST_CASE("covariant derivative of a one-form", "[geometry]") {
  const Chart chart = Chart::cube(2, -1, 1);
  const ConnectionField flat(chart);
  const OneFormField zero(chart);
  CHECK(covariant_derivative_oneform(zero, suite::random_connection(chart, 1), Point{0.3, 0.1}).max_abs() == 0.0);

  OneFormField psi(chart);
  psi.set(0, chart.parse("x1"));
  const Tensor2 d = covariant_derivative_oneform(psi, flat, Point{0.3, -0.6});
  CHECK(d(0, 1) == 1.0);
  CHECK(d(0, 0) == 0.0);
  CHECK(d(1, 0) == 0.0);
  CHECK(d(1, 1) == 0.0);
}

TEST_CASE("covariant derivative matches finite differences", "[geometry][property]") {
  for (int n = 2; n <= 4; ++n) {
    const Chart chart = suite::suite_chart(n);
    const ConnectionField c = suite::random_connection(chart, 40 + n);
    suite::Rng rng(n);
    OneFormField psi(chart);
    for (int i = 0; i < n; ++i) psi.set(i, suite::random_polynomial(rng, n, 3));
    for (const Point& p : sample_points(chart, 30, 2)) {
      const Tensor2 d = covariant_derivative_oneform(psi, c, p);
      for (int i = 0; i < n; ++i) {
        const auto g = oracle::gradient(oracle::scalar(psi[i]), p);
        for (int j = 0; j < n; ++j) {
          double expected = g[j];
          for (int a = 0; a < n; ++a) expected -= oracle::gamma(c, a, i, j, p) * eval(psi[a], p);
          CHECK(std::fabs(d(i, j) - expected) <= 1e-8 * std::max(1.0, std::fabs(expected)));
        }
      }
    }
  }
}

TEST_CASE("sample points are deterministic and inside the chart", "[geometry][sampling]") {
  const Chart chart(3, {-1, 0, 2}, {1, 0.5, 7});
  const auto a = sample_points(chart, 100, 42), b = sample_points(chart, 100, 42), c = sample_points(chart, 100, 43);
  CHECK(a == b);
  CHECK(a != c);
  for (const Point& p : a) CHECK(chart.contains(p));
}
