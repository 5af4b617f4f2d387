#include <catch2/catch_amalgamated.hpp>

#include <string>

#include "equiaffine/manifest.hpp"
#include "equiaffine/sampling.hpp"
#include "equiaffine/suite.hpp"

using namespace equiaffine;

namespace {

const char* kCurved = R"j({
  "dimension": 3,
  "coordinates": ["u", "v", "w"],
  "domain": {"lo": [-1, -1, -1], "hi": [1, 1, 2]},
  "seed": 7,
  "metric": {"0_0": "2 + u^2", "0_1": "0.3*sin(u + v)", "1_1": "1", "2_2": "exp(w)"},
  "connection": {"0_00": "u*v", "1_02": "sin(w)", "2_11": "-u"}
})j";

std::string with_connection(const std::string& body) {
  return R"({"dimension": 2, "domain": {"lo": [-1, -1], "hi": [1, 1]}, "connection": )" + body + "}";
}

std::string error_of(const std::string& text) {
  try {
    parse_manifest(text);
  } catch (const ManifestError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("parse a manifest", "[manifest]") {
  const Manifest m = parse_manifest(kCurved);
  CHECK(m.chart.dim() == 3);
  CHECK(m.chart.names() == std::vector<std::string>{"u", "v", "w"});
  CHECK(m.chart.hi()[2] == 2.0);
  CHECK(m.has_metric);
  REQUIRE(m.seed);
  CHECK(*m.seed == 7);
  CHECK_FALSE(m.psi);
  CHECK_FALSE(m.source_connection);

  const Point p{0.5, -0.25, 1.0};
  CHECK(eval(m.connection(0, 0, 0), p) == -0.125);
  CHECK(eval(m.connection(1, 2, 0), p) == std::sin(1.0));
  CHECK(eval(m.connection(2, 1, 1), p) == -0.5);
  CHECK(m.connection(0, 1, 2).is_constant(0.0));
  CHECK(eval(m.metric(1, 0), p) == 0.3 * std::sin(0.25));
  CHECK(m.metric(0, 2).is_constant(0.0));
  CHECK(m.digest == digest_of(kCurved));
}

TEST_CASE("defaults", "[manifest]") {
  const Manifest m = parse_manifest(with_connection("{}"));
  CHECK(m.chart.names() == std::vector<std::string>{"x0", "x1"});
  CHECK_FALSE(m.has_metric);
  CHECK(m.metric.is_identity());
  CHECK_FALSE(m.seed);
  CHECK(connection_values(m.connection, Point{0.1, 0.2}).max_abs() == 0.0);
}

TEST_CASE("comma-separated index pairs", "[manifest]") {
  const Manifest m = parse_manifest(with_connection(R"({"1_0,1": "x0"})"));
  CHECK(eval(m.connection(1, 1, 0), Point{0.5, 0}) == 0.5);
}

TEST_CASE("manifest errors", "[manifest]") {
  CHECK(error_of(with_connection(R"({"0_10": "x0"})")).find("i <= j") != std::string::npos);
  CHECK(error_of(with_connection(R"({"2_00": "x0"})")).find("out of range") != std::string::npos);
  CHECK(error_of(with_connection(R"({"0_0": "x0"})")).find("malformed") != std::string::npos);
  CHECK(error_of(with_connection(R"({"000": "x0"})")).find("h_ij") != std::string::npos);
  CHECK(error_of(with_connection(R"({"0_00": 1})")).find("must be a string") != std::string::npos);

  const std::string x9 = error_of(with_connection(R"({"0_01": "x0 + x9"})"));
  CHECK(x9.find("x9") != std::string::npos);
  CHECK(x9.find("position 5") != std::string::npos);

  CHECK_FALSE(error_of("{").empty());
  CHECK(error_of("[]").find("object") != std::string::npos);
  CHECK(error_of(R"({"dimension": 1, "domain": {"lo": [0], "hi": [1]}, "connection": {}})").find("dimension") !=
        std::string::npos);
  CHECK(error_of(R"({"dimension": 2, "domain": {"lo": [0, 0], "hi": [1]}, "connection": {}})").find("domain.hi") !=
        std::string::npos);
  CHECK(error_of(R"({"dimension": 2, "domain": {"lo": [0, 1], "hi": [1, 1]}, "connection": {}})").find("lo < hi") !=
        std::string::npos);
  CHECK(error_of(R"({"dimension": 2, "domain": {"lo": [0, 0], "hi": [1, 1]}})").find("connection") != std::string::npos);
  CHECK(error_of(R"({"dimension": 2, "coordinates": ["a", "sin"], "domain": {"lo": [0, 0], "hi": [1, 1]},
                     "connection": {}})")
            .find("sin") != std::string::npos);
  CHECK(error_of(R"({"dimension": 2, "domain": {"lo": [0, 0], "hi": [1, 1]}, "connection": {}, "seed": -3})")
            .find("seed") != std::string::npos);
  CHECK(error_of(R"({"dimension": 2, "domain": {"lo": [0, 0], "hi": [1, 1]}, "connection": {},
                     "metric": {"1_0": "1"}})")
            .find("i <= j") != std::string::npos);
  CHECK_THROWS_AS(load_manifest("/nonexistent/manifest.json"), ManifestError);
}

TEST_CASE("dump and parse round trip", "[manifest]") {
  const Manifest m = parse_manifest(kCurved);
  const std::string text = dump_manifest(m);
  const Manifest again = parse_manifest(text);
  CHECK(dump_manifest(again) == text);
  CHECK(again.seed == m.seed);
  CHECK(again.chart.names() == m.chart.names());
  for (const Point& p : sample_points(m.chart, 20, 3)) {
    CHECK((connection_values(again.connection, p) - connection_values(m.connection, p)).max_abs() == 0.0);
    CHECK((metric_values(again.metric, p) - metric_values(m.metric, p)).max_abs() == 0.0);
  }
}

TEST_CASE("random connections survive serialization exactly", "[manifest][property]") {
  for (int n = 2; n <= 4; ++n) {
    const Chart chart = suite::suite_chart(n);
    Manifest m{.chart = chart,
               .connection = suite::random_connection(chart, 5 * n),
               .metric = suite::suite_metric(chart),
               .has_metric = true};
    OneFormField psi(chart);
    psi.set(0, chart.parse("x1^2 - 0.1"));
    m.psi = psi;
    m.source_connection = ConnectionField(chart);
    const Manifest again = parse_manifest(dump_manifest(m));
    REQUIRE(again.psi);
    REQUIRE(again.source_connection);
    for (const Point& p : sample_points(chart, 10, 1)) {
      CHECK((connection_values(again.connection, p) - connection_values(m.connection, p)).max_abs() == 0.0);
      CHECK((metric_values(again.metric, p) - metric_values(m.metric, p)).max_abs() == 0.0);
      CHECK(eval((*again.psi)[0], p) == eval(psi[0], p));
      CHECK(eval((*again.psi)[n - 1], p) == 0.0);
    }
  }
}

TEST_CASE("digest", "[manifest]") {
  CHECK(digest_of("") == "fnv1a64:cbf29ce484222325");
  CHECK(digest_of("a") == "fnv1a64:af63dc4c8601ec8c");
  CHECK(digest_of("ab") != digest_of("ba"));
}
