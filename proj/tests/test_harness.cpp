#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "semimax/expr.hpp"
#include "semimax/io.hpp"
#include "semimax/scenario.hpp"
#include "semimax/verify.hpp"

using namespace semimax;

namespace {

constexpr double kPi = std::numbers::pi;

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

std::string cross_config_text(const std::string& out_dir, int rays = 96) {
  const double eps = 1.0 / 16;
  const double unit = eps * 2 * kPi;
  return std::string(R"({
  "version": 1,
  "kind": "half-space-conductor",
  "omega": )") +
         CsvWriter::number(unit * std::sqrt(25.0 + 64.0)) + R"(,
  "epsilon_scales": [)" +
         CsvWriter::number(eps) + R"(],
  "grid": {"shape": [42, 1, 42], "spacing": [)" +
         CsvWriter::number(1.0 / 42) + ", 1.0, " + CsvWriter::number(1.0 / 42) +
         R"(], "periodic": [true, false, true]},
  "window": {"half_width": 10, "taper": 0.0},
  "source": {"k0": [)" +
         CsvWriter::number(unit * 5) + ", 0.0, " + CsvWriter::number(-unit * 8) +
         R"(], "polarization": 1, "amplitude_re": 0.8, "amplitude_im": 0.3},
  "rays": {"count": )" +
         std::to_string(rays) + R"(, "seed": 7, "t_final": 3.0, "dt": 0.004},
  "probes": [[12, 0, 21], [21, 0, 21], [30, 0, 21]],
  "out_dir": ")" +
         out_dir + R"("
})";
}

}  // namespace

TEST_CASE("expression parser: values, gradients, errors") {
  const auto e = Expression::parse("1 + 0.1*x3");
  CHECK(e.eval(Vec3(0, 0, 2)) == doctest::Approx(1.2).epsilon(1e-15));

  const auto trig = Expression::parse("sin(x1)*cos(x2) + exp(-x3*x3)/sqrt(2)");
  const auto field = trig.as_field();
  CHECK(field.has_analytic_gradient());
  for (const Vec3& x : {Vec3(0.3, -0.7, 0.2), Vec3(-1.1, 0.4, 0.9)}) {
    const double h = 1e-6;
    for (int a = 0; a < 3; ++a) {
      Vec3 xp = x, xm = x;
      xp[a] += h;
      xm[a] -= h;
      const double fd = (field(xp) - field(xm)) / (2 * h);
      CHECK(field.gradient(x)[a] == doctest::Approx(fd).epsilon(1e-7));
    }
  }

  CHECK_THROWS_AS(Expression::parse("1 +"), std::invalid_argument);
  CHECK_THROWS_AS(Expression::parse("foo(x1)"), std::invalid_argument);
  CHECK_THROWS_AS(Expression::parse("x4"), std::invalid_argument);
  CHECK_THROWS_AS(Expression::parse("1 2"), std::invalid_argument);
  CHECK_NOTHROW(Expression::parse("-(x1 + 2) * (3 / x2)"));
}

TEST_CASE("csv quoting") {
  CHECK(CsvWriter::quote("plain") == "plain");
  CHECK(CsvWriter::quote("a,b") == "\"a,b\"");
  CHECK(CsvWriter::quote("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(CsvWriter::quote("two\nlines") == "\"two\nlines\"");
}

TEST_CASE("binary field and wigner grids round-trip bit-exactly") {
  const auto dir = std::filesystem::temp_directory_path() / "semimax_io_test";
  std::filesystem::create_directories(dir);

  Grid g;
  g.shape = {6, 1, 8};
  g.spacing = {0.25, 1.0, 0.125};
  g.origin = Vec3(-0.5, 0.0, 1.0);
  g.periodic = {true, false, true};
  auto field = FieldSnapshot::zero(g, 0.03125);
  for (Eigen::Index i = 0; i < field.values.cols(); ++i)
    for (int c = 0; c < 6; ++c)
      field.values(c, i) = Complex(std::sin(0.1 * double(i) + c), std::cos(0.2 * double(i) - c));

  write_field(dir / "f.smxf", field);
  const auto back = read_field(dir / "f.smxf");
  CHECK(back.grid == field.grid);
  CHECK(back.epsilon_scale == field.epsilon_scale);
  CHECK((back.values - field.values).norm() == 0.0);

  const WindowSpec win{2, 0.5};
  const auto w = wigner_transform(field, all_probes(g, win), win,
                                  {.validate_resolution = false});
  write_wigner(dir / "w.smxw", w);
  const auto wback = read_wigner(dir / "w.smxw");
  CHECK(wback.kshape == w.kshape);
  CHECK(wback.epsilon_scale == w.epsilon_scale);
  CHECK(wback.probes.size() == w.probes.size());
  REQUIRE(wback.values.size() == w.values.size());
  for (std::size_t i = 0; i < w.values.size(); ++i)
    CHECK((wback.values[i] - w.values[i]).norm() == 0.0);

  // corrupted magic is rejected
  {
    std::ofstream bad(dir / "bad.smxf", std::ios::binary);
    bad << "NOPE" << std::string(64, '\0');
  }
  CHECK_THROWS_AS(read_field(dir / "bad.smxf"), std::runtime_error);
}

TEST_CASE("scenario config: validation and round-trip") {
  const std::string text = cross_config_text("out_test");
  const auto config = ScenarioConfig::from_json_text(text);
  CHECK(config.kind == "half-space-conductor");
  CHECK(config.ray_count == 96);

  // parse -> serialize -> parse is the identity on the serialized form
  const std::string serialized = config.to_json_text();
  const auto config2 = ScenarioConfig::from_json_text(serialized);
  CHECK(config2.to_json_text() == serialized);

  // omega = 0 rejected
  auto bad = config;
  bad.omega = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);

  // epsilon scales must decrease
  bad = config;
  bad.epsilon_scales = {0.1, 0.2};
  CHECK_THROWS_AS(bad.validate(), ConfigError);

  // missing version
  CHECK_THROWS_AS(ScenarioConfig::from_json_text("{\"kind\": \"free-space\"}"),
                  ConfigError);
  // malformed JSON
  CHECK_THROWS_AS(ScenarioConfig::from_json_text("{nope"), ConfigError);
  // unknown kind
  bad = config;
  bad.kind = "wormhole";
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  // calderon without interior
  bad = config;
  bad.kind = "calderon-interface";
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("run_scenario: determinism and checks") {
  const auto base = std::filesystem::temp_directory_path() / "semimax_run_test";
  std::filesystem::remove_all(base);

  auto config = ScenarioConfig::from_json_text(cross_config_text((base / "a").string()));
  const auto report = run_scenario(config, 1);
  CHECK(report.all_passed());

  // identical config + seed, different thread count: byte-identical CSVs
  auto config_b = config;
  config_b.out_dir = (base / "b").string();
  run_scenario(config_b, 4);

  for (const char* name :
       {"report.csv", "mode_density.csv", "boundary_measure.csv",
        "comparison.csv"}) {
    CAPTURE(name);
    CHECK(slurp(base / "a" / name) == slurp(base / "b" / name));
  }
  // binary outputs too
  CHECK(slurp(base / "a" / "field.smxf") == slurp(base / "b" / "field.smxf"));
  CHECK(slurp(base / "a" / "wigner.smxw") == slurp(base / "b" / "wigner.smxw"));
}

TEST_CASE("free-space scenario reports full shell concentration") {
  const auto dir = std::filesystem::temp_directory_path() / "semimax_free_test";
  std::filesystem::remove_all(dir);
  ScenarioConfig config;
  config.kind = "free-space";
  const double eps = 1.0 / 16;
  config.epsilon_scales = {eps};
  // grid length a multiple of the window length so the field mode lands
  // exactly on a Wigner k node
  config.grid_shape = {1, 1, 132};
  config.grid_spacing = {1, 1, 1.0 / 132};
  config.grid_periodic = {false, false, true};
  config.k0 = Vec3(0, 0, eps * 2 * kPi * 12);
  config.omega = config.k0.norm();
  config.window_half_width = 16;
  config.window_taper = 0.0;
  config.ray_count = 0;
  config.out_dir = dir.string();
  config.probes = {{0, 0, 32}, {0, 0, 64}, {0, 0, 96}};

  const auto report = run_scenario(config);
  REQUIRE_FALSE(report.checks.empty());
  CHECK(report.checks[0].name == "shell_fraction");
  CHECK(report.checks[0].measured >= 0.9);
  CHECK(report.all_passed());
}

TEST_CASE("verify: unknown suite and empty cross ensemble are errors") {
  CHECK_THROWS_AS(verify_suite("nope"), ConfigError);

  ScenarioConfig config;
  config.ray_count = 0;
  CHECK_THROWS_AS(verify_suite("cross", &config), ConfigError);
}
