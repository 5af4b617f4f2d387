#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "equiaffine/commands.hpp"

namespace {

std::vector<double> parse_csv(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (item.find_first_not_of(" \t", used) != std::string::npos) throw CLI::ValidationError("bad number '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw CLI::ValidationError("empty coordinate list");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  namespace cli = equiaffine::cli;
  CLI::App app{"Projectively equivalent equiaffine connections: construction and verification"};
  app.require_subcommand(1);

  cli::CheckOptions check;
  auto* check_cmd = app.add_subcommand("check", "Test Ricci symmetry on seeded sample points");
  check_cmd->add_option("manifest", check.manifest, "Manifest path")->required();
  check_cmd->add_option("--samples", check.samples, "Number of sample points")->capture_default_str();
  check_cmd->add_option("--tol", check.tol, "Ricci asymmetry tolerance")->capture_default_str();

  cli::EquiaffinizeOptions eq;
  auto* eq_cmd = app.add_subcommand("equiaffinize", "Write the projectively equivalent equiaffine connection");
  eq_cmd->add_option("manifest", eq.manifest, "Manifest path")->required();
  eq_cmd->add_option("--out", eq.out, "Output manifest path")->required();
  eq_cmd->add_option("--samples", eq.samples, "Number of sample points")->capture_default_str();
  eq_cmd->add_option("--tol", eq.tol, "Ricci asymmetry tolerance")->capture_default_str();

  cli::VerifyOptions verify;
  auto* verify_cmd = app.add_subcommand("verify", "Residuals of the curvature, Ricci, trace and idempotence identities");
  verify_cmd->add_option("manifest", verify.manifest, "Manifest path")->required();
  verify_cmd->add_option("--samples", verify.samples, "Number of sample points")->capture_default_str();
  verify_cmd->add_option("--tol", verify.tol, "Ricci asymmetry tolerance after the transformation")->capture_default_str();

  cli::GeodesicOptions geo;
  std::string start, velocity;
  auto* geo_cmd = app.add_subcommand("geodesic", "Integrate a geodesic and export it as CSV");
  geo_cmd->add_option("manifest", geo.manifest, "Manifest path")->required();
  geo_cmd->add_option("--start", start, "Start point, comma separated")->required();
  geo_cmd->add_option("--velocity", velocity, "Initial velocity, comma separated")->required();
  geo_cmd->add_option("--tmax", geo.tmax, "Final parameter value")->capture_default_str();
  geo_cmd->add_option("--step", geo.step, "RK4 step")->capture_default_str();
  geo_cmd->add_flag("--compare-equiaffinized", geo.compare_equiaffinized,
                    "Also integrate under the equiaffinized connection and compare point sets");
  geo_cmd->add_option("--out", geo.out, "CSV output path")->required();

  try {
    app.parse(argc, argv);
    if (geo_cmd->parsed()) {
      geo.start = parse_csv(start);
      geo.velocity = parse_csv(velocity);
    }
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitError;
  }

  if (check_cmd->parsed()) return cli::run_check(check, std::cout, std::cerr);
  if (eq_cmd->parsed()) return cli::run_equiaffinize(eq, std::cout, std::cerr);
  if (verify_cmd->parsed()) return cli::run_verify(verify, std::cout, std::cerr);
  return cli::run_geodesic(geo, std::cout, std::cerr);
}
