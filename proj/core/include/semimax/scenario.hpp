#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "semimax/transport.hpp"
#include "semimax/wigner.hpp"

namespace semimax {

/// Raised for malformed or inconsistent configuration input; the CLI maps
/// it to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One verification scenario, parsed from the JSON config format
/// (documented in the README).  A mandatory version field guards the
/// schema.
struct ScenarioConfig {
  int version = 1;
  std::string kind = "free-space";  // free-space | half-space-conductor |
                                    // calderon-interface | curved-interface
  // media (expression strings over x1, x2, x3)
  std::string epsilon = "1";
  std::string eta = "1";
  std::string sigma = "0";
  std::string epsilon_interior;
  std::string eta_interior;
  std::string sigma_interior;
  std::string phi;  // curved interface height

  double omega = 1.0;
  std::vector<double> epsilon_scales = {0.0625};  // strictly positive, decreasing

  std::array<int, 3> grid_shape = {1, 1, 128};
  std::array<double, 3> grid_spacing = {1.0, 1.0, 1.0 / 128};
  Vec3 grid_origin = Vec3::Zero();
  std::array<bool, 3> grid_periodic = {false, false, true};

  int window_half_width = 16;
  double window_taper = 0.1;

  // plane-wave source (scaled wave vector at the largest epsilon scale)
  Vec3 k0 = Vec3(0, 0, 1);
  int polarization = 1;
  Complex amplitude = 1.0;

  int ray_count = 10000;
  std::uint64_t seed = 1;
  double t_final = 4.0;
  double dt = 1e-2;

  std::vector<std::array<int, 3>> probes;  // empty: defaults per kind
  std::string out_dir = "out";
  bool strict = false;
  std::map<std::string, double> tolerance_overrides;

  /// Parse/serialize against the JSON schema; parse validates invariants
  /// (version, omega > 0, scales positive and strictly decreasing).
  static ScenarioConfig from_json_text(const std::string& text);
  static ScenarioConfig load(const std::filesystem::path& path);
  std::string to_json_text() const;
  void save(const std::filesystem::path& path) const;

  void validate() const;

  MediumModel exterior_medium() const;
  std::optional<MediumModel> interior_medium() const;
  std::optional<InterfaceChart> interface_chart() const;
  Grid grid() const;
  WindowSpec window() const;
  double tolerance(const std::string& name, double fallback) const;
};

struct CheckResult {
  std::string name;
  double measured = 0.0;
  double tolerance = 0.0;
  /// Direction of the comparison: true when measured <= tolerance passes,
  /// false when measured >= tolerance passes.
  bool upper_bound = true;
  bool pass = false;
};

struct RunReport {
  std::string suite;
  std::vector<CheckResult> checks;
  std::uint64_t seed = 0;
  std::string fingerprint;  // toolchain + build mode
  double elapsed_seconds = 0.0;

  bool all_passed() const;
  CheckResult& add(const std::string& name, double measured, double tolerance,
                   bool upper_bound = true);
  /// One line per check: "[PASS|FAIL] name measured tolerance".
  void print(std::ostream& os) const;
  void write_csv(const std::filesystem::path& path) const;
};

std::string build_fingerprint();

/// Full scenario pipeline: synthesis, Wigner analysis, ray transport,
/// binning, file emission, and the field-vs-ray comparison table.
RunReport run_scenario(const ScenarioConfig& config, int threads = 0);

}  // namespace semimax
