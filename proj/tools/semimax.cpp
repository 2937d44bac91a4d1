// semimax: semiclassical Maxwell phase-space toolkit.
//
// Subcommands
//   dispersion-check   eigenstructure diagnostics at one (x, k)
//   synthesize         write a field snapshot from a scenario config
//   wigner             Wigner-transform a field file
//   transport          run the ray-transport side of a scenario
//   verify <suite>     run one verification suite
//   run <config>       full scenario pipeline
//
// Exit codes: 0 all checks pass, 1 check failure, 2 configuration error,
// 3 internal error.

#include <iostream>

#include <CLI11.hpp>

#include "semimax/expr.hpp"
#include "semimax/io.hpp"
#include "semimax/parallel.hpp"
#include "semimax/scenario.hpp"
#include "semimax/synthesis.hpp"
#include "semimax/verify.hpp"

using namespace semimax;

namespace {

struct CommonFlags {
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = 0;
  std::string out_dir;
  bool strict = false;
};

void apply_overrides(ScenarioConfig& config, const CommonFlags& flags) {
  if (flags.seed_set) config.seed = flags.seed;
  if (!flags.out_dir.empty()) config.out_dir = flags.out_dir;
  if (flags.strict) config.strict = true;
}

int cmd_dispersion_check(const std::string& eps_expr, const std::string& eta_expr,
                         const std::vector<double>& xv,
                         const std::vector<double>& kv) {
  const MediumModel medium(Expression::parse(eps_expr).as_field(),
                           Expression::parse(eta_expr).as_field());
  const Vec3 x(xv[0], xv[1], xv[2]);
  const Vec3 k(kv[0], kv[1], kv[2]);
  const auto es = eigensystem(medium, x, k);
  const auto rep = normalization_report(es, medium, x, k);

  std::cout << "speed v(x) = " << medium.speed(x) << "\n"
            << "omega_plus = " << es.omega_plus
            << ", omega_minus = " << es.omega_minus
            << "\n"
            << "normalization deviation = " << rep.max_deviation << "\n"
            << "boundary pairing (A_b b, b) = " << rep.boundary_pairing << "\n"
            << "normal flux (A3 b, b) = " << rep.normal_flux_plus1 << "\n";
  return rep.ok(1e-10) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"semiclassical Maxwell phase-space toolkit"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  CommonFlags flags;
  app.add_option("--seed", flags.seed, "override the scenario seed")
      ->each([&](const std::string&) { flags.seed_set = true; });
  app.add_option("--threads", flags.threads,
                 "worker threads (default: SEMIMAX_THREADS or 1)");
  app.add_option("--out-dir", flags.out_dir, "override the output directory");
  app.add_flag("--strict", flags.strict, "fail on incommensurate wave vectors");

  // dispersion-check
  auto* disp = app.add_subcommand("dispersion-check",
                                  "eigenstructure diagnostics at one (x, k)");
  std::string eps_expr = "1", eta_expr = "1";
  std::vector<double> xv = {0, 0, 0}, kv = {0, 0, 1};
  disp->add_option("--epsilon", eps_expr, "permittivity expression");
  disp->add_option("--eta", eta_expr, "susceptibility expression");
  disp->add_option("--x", xv, "evaluation point")->expected(3);
  disp->add_option("--k", kv, "wave vector")->expected(3);

  // synthesize
  auto* synth = app.add_subcommand("synthesize", "write the scenario's field");
  std::string synth_config;
  synth->add_option("config", synth_config, "scenario config file")->required();

  // wigner
  auto* wign = app.add_subcommand("wigner", "Wigner-transform a field file");
  std::string wigner_in, wigner_out = "wigner.smxw";
  int wigner_half_width = 16;
  double wigner_taper = 0.1;
  wign->add_option("field", wigner_in, "input .smxf field")->required();
  wign->add_option("--output", wigner_out, "output .smxw file");
  wign->add_option("--half-width", wigner_half_width, "window half width");
  wign->add_option("--taper", wigner_taper, "window taper fraction");

  // transport
  auto* trans = app.add_subcommand("transport", "ray-transport side of a scenario");
  std::string transport_config;
  trans->add_option("config", transport_config, "scenario config file")->required();

  // verify
  auto* ver = app.add_subcommand("verify", "run one verification suite");
  std::string suite;
  std::string verify_config;
  ver->add_option("suite", suite, "suite name")->required();
  ver->add_option("--config", verify_config, "optional tolerance overrides");

  // run
  auto* run = app.add_subcommand("run", "full scenario pipeline");
  std::string run_config;
  run->add_option("config", run_config, "scenario config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const int threads = resolve_threads(flags.threads);

  try {
    if (disp->parsed()) return cmd_dispersion_check(eps_expr, eta_expr, xv, kv);

    if (synth->parsed()) {
      auto config = ScenarioConfig::load(synth_config);
      apply_overrides(config, flags);
      std::filesystem::create_directories(config.out_dir);
      const Grid grid = config.grid();
      const MediumModel medium = config.exterior_medium();
      PlaneWaveSpec spec;
      spec.k0 = config.k0;
      spec.epsilon_scale = config.epsilon_scales.back();
      spec.polarization = config.polarization;
      spec.amplitude = config.amplitude;
      spec.eps_coeff = medium.epsilon(grid.origin);
      spec.eta_coeff = medium.eta(grid.origin);
      SynthesisInfo info;
      const auto field = plane_wave_field(spec, grid, config.strict, &info);
      const auto path = std::filesystem::path(config.out_dir) / "field.smxf";
      write_field(path, field);
      std::cout << "wrote " << path.string()
                << " (|k| adjustment " << info.relative_adjustment << ")\n";
      return 0;
    }

    if (wign->parsed()) {
      const auto field = read_field(wigner_in);
      const WindowSpec win{wigner_half_width, wigner_taper};
      const auto w = wigner_transform(field, all_probes(field.grid, win), win,
                                      {.threads = threads});
      write_wigner(wigner_out, w);
      std::cout << "wrote " << wigner_out << " (" << w.probes.size()
                << " probes, " << w.kcount() << " k nodes)\n";
      return 0;
    }

    if (trans->parsed()) {
      auto config = ScenarioConfig::load(transport_config);
      apply_overrides(config, flags);
      // reuse the full pipeline; the ray outputs land in out_dir
      const auto report = run_scenario(config, threads);
      report.print(std::cout);
      return report.all_passed() ? 0 : 1;
    }

    if (ver->parsed()) {
      std::optional<ScenarioConfig> config;
      if (!verify_config.empty()) config = ScenarioConfig::load(verify_config);
      if (config) apply_overrides(*config, flags);
      const auto report =
          verify_suite(suite, config ? &*config : nullptr, threads, flags.out_dir);
      report.print(std::cout);
      if (!flags.out_dir.empty()) {
        std::filesystem::create_directories(flags.out_dir);
        report.write_csv(std::filesystem::path(flags.out_dir) /
                         ("verify_" + suite + ".csv"));
      }
      std::cout << (report.all_passed() ? "suite passed" : "suite FAILED")
                << " in " << report.elapsed_seconds << " s\n";
      return report.all_passed() ? 0 : 1;
    }

    if (run->parsed()) {
      auto config = ScenarioConfig::load(run_config);
      apply_overrides(config, flags);
      const auto report = run_scenario(config, threads);
      report.print(std::cout);
      return report.all_passed() ? 0 : 1;
    }
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
