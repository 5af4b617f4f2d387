#ifndef EQUIAFFINE_COMMANDS_HPP
#define EQUIAFFINE_COMMANDS_HPP

// The four command-line operations, usable in-process. Each writes a JSON
// report to `out`, diagnostics to `err`, and returns the process exit code:
// 0 all checks pass, 1 a tolerance check fails, 2 input or evaluation error.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <exception>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "equiaffine/curvature.hpp"
#include "equiaffine/geodesic.hpp"
#include "equiaffine/manifest.hpp"
#include "equiaffine/projective.hpp"
#include "equiaffine/sampling.hpp"

namespace equiaffine::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitError = 2;

struct Tolerances {
  double ricci_asymmetry = 1e-8;
  double eq_f2 = 1e-9;
  double eq_f4 = 1e-9;
  double trace_normalization = 1e-10;
  double psi_idempotence = 1e-12;
  double geodesic_distance = 1e-4;
  double collinearity = 1e-6;
};

struct CheckOptions {
  std::string manifest;
  int samples = 100;
  double tol = 1e-8;
};

struct EquiaffinizeOptions {
  std::string manifest;
  std::string out;
  int samples = 100;
  double tol = 1e-8;
};

struct VerifyOptions {
  std::string manifest;
  int samples = 100;
  double tol = 1e-8;
};

struct GeodesicOptions {
  std::string manifest;
  std::vector<double> start;
  std::vector<double> velocity;
  double tmax = 1.0;
  double step = 1e-3;
  bool compare_equiaffinized = false;
  std::string out;
};

using Json = nlohmann::ordered_json;

namespace detail {

inline Json check_entry(double residual, double tol) {
  return Json{{"residual", residual}, {"tolerance", tol}, {"pass", residual <= tol}};
}

inline Json check_entry(double residual, double tol, const Point& worst) {
  Json j = check_entry(residual, tol);
  j["worst_point"] = worst;
  return j;
}

inline Json header(const char* command, const Manifest& m, std::uint64_t seed, int samples) {
  return Json{{"command", command}, {"manifest_digest", m.digest}, {"seed", seed}, {"samples", samples}};
}

/// Like Json::dump but with every floating-point value at 17 significant digits.
inline void write_json(std::ostream& os, const Json& j, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close(static_cast<std::size_t>(indent * depth), ' ');
  const char* nl = indent > 0 ? "\n" : "";
  const char* colon = indent > 0 ? ": " : ":";
  if (j.is_object() && !j.empty()) {
    os << '{' << nl;
    bool first = true;
    for (const auto& [key, value] : j.items()) {
      if (!first) os << ',' << nl;
      first = false;
      os << pad << Json(key).dump() << colon;
      write_json(os, value, indent, depth + 1);
    }
    os << nl << close << '}';
  } else if (j.is_array() && !j.empty()) {
    os << '[' << nl;
    for (std::size_t k = 0; k < j.size(); ++k) {
      if (k) os << ',' << nl;
      os << pad;
      write_json(os, j[k], indent, depth + 1);
    }
    os << nl << close << ']';
  } else if (j.is_number_float() && std::isfinite(j.get<double>())) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", j.get<double>());
    os << buf;
  } else {
    os << j.dump();
  }
}

inline void emit(std::ostream& out, const Json& report) {
  write_json(out, report, 2, 0);
  out << '\n';
}

template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }
  return kExitError;
}

inline void require_samples(int samples) {
  if (samples < 1) throw DimensionError("--samples must be at least 1");
}

/// Result the manifest describes: an equiaffinize output (psi +
/// source_connection present) is taken as is, anything else is transformed.
struct Transformation {
  ConnectionField source;
  EquiaffinizeResult result;
};

inline Transformation transformation_of(const Manifest& m, std::span<const Point> points) {
  if (m.psi && m.source_connection) {
    for (const Point& p : points) metric_inverse(m.metric, p);
    return {*m.source_connection, EquiaffinizeResult{*m.psi, m.connection, m.digest}};
  }
  return {m.connection, equiaffinize(m.connection, m.metric, points, m.digest)};
}

}  // namespace detail

/// Ricci symmetry of the manifest's connection on seeded sample points.
inline int run_check(const CheckOptions& opt, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    detail::require_samples(opt.samples);
    const Manifest m = load_manifest(opt.manifest);
    const std::uint64_t seed = m.seed.value_or(kDefaultSeed);
    const auto points = sample_points(m.chart, opt.samples, seed);
    const EquiaffinityReport rep = equiaffinity_report(m.connection, points, opt.tol);

    Json report = detail::header("check", m, seed, opt.samples);
    report["checks"] = Json{{"ricci_asymmetry", detail::check_entry(rep.max_asym, opt.tol, rep.worst_point)}};
    report["pass"] = rep.is_equiaffine;
    detail::emit(out, report);
    return rep.is_equiaffine ? kExitPass : kExitFail;
  });
}

/// Writes the projectively equivalent equiaffine connection as a manifest.
inline int run_equiaffinize(const EquiaffinizeOptions& opt, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    detail::require_samples(opt.samples);
    if (opt.out.empty()) throw ManifestError("--out is required");
    const Manifest m = load_manifest(opt.manifest);
    const std::uint64_t seed = m.seed.value_or(kDefaultSeed);
    const auto points = sample_points(m.chart, opt.samples, seed);

    const EquiaffinizeResult r = equiaffinize(m.connection, m.metric, points, m.digest);
    const EquiaffinityReport before = equiaffinity_report(m.connection, points, opt.tol);
    const EquiaffinityReport after = equiaffinity_report(r.bar, points, opt.tol);

    const Manifest result{.chart = m.chart,
                          .connection = r.bar,
                          .metric = m.metric,
                          .has_metric = m.has_metric,
                          .seed = m.seed,
                          .psi = r.psi,
                          .source_connection = m.connection};
    const std::string text = dump_manifest(result);
    {
      std::ofstream file(opt.out, std::ios::binary);
      if (!file) throw ManifestError("cannot write '" + opt.out + "'");
      file << text;
      if (!file) throw ManifestError("failed writing '" + opt.out + "'");
    }

    Json report = detail::header("equiaffinize", m, seed, opt.samples);
    report["output_digest"] = digest_of(text);
    report["checks"] = Json{
        {"ricci_asymmetry_before", Json{{"residual", before.max_asym}, {"worst_point", before.worst_point}}},
        {"ricci_asymmetry_after", detail::check_entry(after.max_asym, opt.tol, after.worst_point)},
    };
    report["pass"] = after.is_equiaffine;
    detail::emit(out, report);
    return after.is_equiaffine ? kExitPass : kExitFail;
  });
}

/// Residuals of every transformation identity on seeded sample points.
inline int run_verify(const VerifyOptions& opt, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    detail::require_samples(opt.samples);
    const Manifest m = load_manifest(opt.manifest);
    const std::uint64_t seed = m.seed.value_or(kDefaultSeed);
    const auto points = sample_points(m.chart, opt.samples, seed);
    const auto t = detail::transformation_of(m, points);
    Tolerances tol;
    tol.ricci_asymmetry = opt.tol;

    struct Worst {
      double value = 0.0;
      Point at;
      void update(double v, const Point& p) {
        if (at.empty() || v > value) value = v, at = p;
      }
    } f2, f4, trace;
    for (const Point& p : points) {
      f2.update(verify_curvature_relation(t.source, t.result, p), p);
      f4.update(verify_ricci_relation(t.source, t.result, p), p);
      trace.update(trace_normalization_residual(t.result.bar, m.metric, p), p);
    }
    const IdempotenceResidual idem = idempotence_residual(t.result, m.metric, points);
    const EquiaffinityReport before = equiaffinity_report(t.source, points, opt.tol);
    const EquiaffinityReport after = equiaffinity_report(t.result.bar, points, opt.tol);

    Json checks;
    checks["ricci_asymmetry_before"] = Json{{"residual", before.max_asym}, {"worst_point", before.worst_point}};
    checks["ricci_asymmetry_after"] = detail::check_entry(after.max_asym, tol.ricci_asymmetry, after.worst_point);
    checks["eq_f2_residual"] = detail::check_entry(f2.value, tol.eq_f2, f2.at);
    checks["eq_f4_residual"] = detail::check_entry(f4.value, tol.eq_f4, f4.at);
    checks["trace_normalization_residual"] = detail::check_entry(trace.value, tol.trace_normalization, trace.at);
    checks["psi_idempotence_residual"] = detail::check_entry(idem.psi, tol.psi_idempotence);

    bool pass = true;
    for (const auto& [name, entry] : checks.items())
      if (entry.contains("pass")) pass = pass && entry["pass"].get<bool>();

    Json report = detail::header("verify", m, seed, opt.samples);
    report["checks"] = checks;
    report["pass"] = pass;
    detail::emit(out, report);
    return pass ? kExitPass : kExitFail;
  });
}

/// Path of the second CSV written by `geodesic --compare-equiaffinized`:
/// "curve.csv" -> "curve.equiaffine.csv".
inline std::string companion_path(const std::string& path) {
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path + ".equiaffine";
  return path.substr(0, dot) + ".equiaffine" + path.substr(dot);
}

/// Integrates a geodesic; optionally compares it with the geodesic of the
/// equiaffinized connection from the same initial ray. Prints a one-line
/// JSON summary.
inline int run_geodesic(const GeodesicOptions& opt, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    if (opt.out.empty()) throw ManifestError("--out is required");
    const Manifest m = load_manifest(opt.manifest);
    const GeodesicProblem prob{opt.start, opt.velocity, opt.tmax, opt.step};
    auto write = [](const std::string& path, const Curve& c, int n) {
      std::ofstream file(path, std::ios::binary);
      if (!file) throw ManifestError("cannot write '" + path + "'");
      write_csv(file, c, n);
    };

    Json summary{{"command", "geodesic"}, {"manifest_digest", m.digest}};
    int code = kExitPass;
    if (!opt.compare_equiaffinized) {
      const Curve curve = integrate(m.connection, prob);
      write(opt.out, curve, m.chart.dim());
      summary["samples"] = curve.samples.size();
      summary["truncated"] = curve.truncated;
      summary["t_final"] = curve.samples.back().t;
    } else {
      const EquiaffinizeResult r = equiaffinize(m.connection, m.metric, {}, m.digest);
      const GeodesicComparison cmp = compare_geodesics(m.connection, r.bar, prob);
      write(opt.out, cmp.base, m.chart.dim());
      write(companion_path(opt.out), cmp.projected, m.chart.dim());
      const Tolerances tol;
      const bool pass = cmp.distance <= tol.geodesic_distance && cmp.defect <= tol.collinearity;
      summary["samples"] = cmp.base.samples.size();
      summary["truncated"] = cmp.base.truncated;
      summary["t_final"] = cmp.base.samples.back().t;
      summary["equiaffine_samples"] = cmp.projected.samples.size();
      summary["equiaffine_csv"] = companion_path(opt.out);
      summary["unparametrized_distance"] = detail::check_entry(cmp.distance, tol.geodesic_distance);
      summary["collinearity_defect"] = detail::check_entry(cmp.defect, tol.collinearity);
      summary["pass"] = pass;
      code = pass ? kExitPass : kExitFail;
    }
    detail::write_json(out, summary, 0, 0);
    out << '\n';
    return code;
  });
}

}  // namespace equiaffine::cli

#endif  // EQUIAFFINE_COMMANDS_HPP
