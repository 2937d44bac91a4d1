#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "semimax/quantize.hpp"
#include "semimax/synthesis.hpp"
#include "semimax/wigner.hpp"

using namespace semimax;

namespace {

constexpr double kPi = std::numbers::pi;

Grid cube_grid(int n, double length, bool periodic = true) {
  Grid g;
  g.shape = {n, 1, n};
  g.spacing = {length / n, 1.0, length / n};
  g.periodic = {periodic, false, periodic};
  return g;
}

MediumModel linear_speed_medium(double alpha) {
  ScalarField eta(
      [alpha](const Vec3& x) {
        const double v = 1.0 + alpha * x[2];
        return 1.0 / (v * v);
      },
      [alpha](const Vec3& x) {
        const double v = 1.0 + alpha * x[2];
        return Vec3(0, 0, -2.0 * alpha / (v * v * v));
      });
  return MediumModel(ScalarField::constant(1.0), eta);
}

}  // namespace

TEST_CASE("plane wave: residual, divergence, trivial cases") {
  Grid g;
  g.shape = {1, 1, 128};
  g.spacing = {1, 1, 1.0 / 128};
  g.periodic = {false, false, true};

  PlaneWaveSpec spec;
  spec.epsilon_scale = 1.0 / 16;
  spec.k0 = Vec3(0, 0, spec.epsilon_scale * 2 * kPi * 12);
  spec.eps_coeff = 1.0;
  spec.eta_coeff = 1.0;
  spec.amplitude = Complex(0.7, -0.4);

  SynthesisInfo info;
  const auto field = plane_wave_field(spec, g, true, &info);
  CHECK(info.relative_adjustment <= 1e-15);

  const auto medium = MediumModel::homogeneous(1.0, 1.0);
  const auto res = maxwell_residual(field, medium, info.adjusted_omega);
  CHECK(res.relative <= 1e-10);

  const auto div = divergence_diagnostic(field, medium);
  CHECK(div.div_e <= 1e-10);
  CHECK(div.div_h <= 1e-10);

  // polarization satisfies sum_j k_j A^j b = -omega A^0 b
  Vec6 lhs = Vec6::Zero();
  for (int j = 0; j < 3; ++j)
    lhs += info.adjusted_k[j] * (maxwell::flux_matrix(j) * info.polarization);
  const Vec6 rhs = -info.adjusted_omega *
                   (maxwell::material_matrix(1.0, 1.0) * info.polarization);
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12);

  // zero amplitude gives the zero field
  PlaneWaveSpec zero = spec;
  zero.amplitude = 0.0;
  const auto zf = plane_wave_field(zero, g);
  CHECK(zf.values.norm() == 0.0);

  // off-shell omega is rejected
  PlaneWaveSpec off = spec;
  off.omega = 2.0 * info.adjusted_omega;
  CHECK_THROWS_AS(plane_wave_field(off, g), std::domain_error);

  // strict mode rejects incommensurate wave vectors
  PlaneWaveSpec inc = spec;
  inc.k0[2] *= 1.05;
  CHECK_THROWS_AS(plane_wave_field(inc, g, true), std::domain_error);
  CHECK_NOTHROW(plane_wave_field(inc, g, false));
}

TEST_CASE("conductor mirror: normal incidence cancels tangential E") {
  Grid g;
  g.shape = {1, 1, 64};
  g.spacing = {1, 1, 1.0 / 64};
  g.periodic = {false, false, true};

  MirrorFieldSpec spec;
  spec.incident.epsilon_scale = 1.0 / 8;
  spec.incident.k0 = Vec3(0, 0, -spec.incident.epsilon_scale * 2 * kPi * 8);
  spec.incident.amplitude = 1.0;

  MirrorInfo info;
  const auto field = conductor_mirror_field(spec, g, true, &info);
  CHECK((info.reflected_k - Vec3(0, 0, -info.incident.adjusted_k[2])).norm() == 0.0);
  CHECK(info.boundary_tangential_residual <= 1e-12);

  // both constituents are on shell: residual of the superposition
  const auto medium = MediumModel::homogeneous(1.0, 1.0);
  const auto res = maxwell_residual(field, medium, info.incident.adjusted_omega);
  CHECK(res.relative <= 1e-10);

  // normal incidence: reflected tangential E = -incident tangential E
  // (coefficient -1 in the E components)
  const Complex e1_inc = spec.incident.amplitude * info.incident.polarization[0];
  const Complex e1_ref = info.reflection_coefficients[0] *
                             plane_wave_polarization(info.reflected_k, 1, 1, 1)[0] +
                         info.reflection_coefficients[1] *
                             plane_wave_polarization(info.reflected_k, 1, 1, 2)[0];
  CHECK(std::abs(e1_ref + e1_inc) <= 1e-12);

  // wrong-sign incident wave is rejected
  MirrorFieldSpec bad = spec;
  bad.incident.k0[2] = -bad.incident.k0[2];
  CHECK_THROWS_AS(conductor_mirror_field(bad, g), std::invalid_argument);
}

TEST_CASE("conductor mirror: oblique incidence shows two equal Wigner peaks") {
  const int m = 10;
  const int n = 2 * (2 * m + 1);  // 42: field modes land on Wigner k nodes
  const Grid g = cube_grid(n, 1.0);
  const double eps = 1.0 / 16;

  MirrorFieldSpec spec;
  spec.incident.epsilon_scale = eps;
  spec.incident.k0 = eps * 2 * kPi * Vec3(5, 0, -8);
  spec.incident.amplitude = Complex(0.9, 0.2);

  MirrorInfo info;
  const auto field = conductor_mirror_field(spec, g, true, &info);

  const WindowSpec win{m, 0.0};
  // interior probes away from the wall
  std::vector<std::array<int, 3>> probes;
  for (int i : {m, n / 2, n - m - 1}) probes.push_back({i, 0, n / 2});
  const auto w = wigner_transform(field, probes, win);
  const auto rho = trace_density(w);

  const std::size_t node_inc = w.nearest_knode(info.incident.adjusted_k);
  const std::size_t node_ref = w.nearest_knode(info.reflected_k);
  CHECK((w.wavevector(node_inc) - info.incident.adjusted_k).norm() <= 1e-12);
  CHECK((w.wavevector(node_ref) - info.reflected_k).norm() <= 1e-12);

  const double a2 = std::norm(spec.incident.amplitude);
  for (std::size_t p = 0; p < probes.size(); ++p) {
    const double inc_mass = rho[p * w.kcount() + node_inc] * w.dk_volume();
    const double ref_mass = rho[p * w.kcount() + node_ref] * w.dk_volume();
    CHECK(std::abs(inc_mass - a2) <= 0.05 * a2);
    CHECK(std::abs(ref_mass - a2) <= 0.05 * a2);
  }

  // boundary trace: 1-D Wigner of u(x', 0) peaks at the tangential k'
  Grid slice;
  slice.shape = {n, 1, 1};
  slice.spacing = {g.spacing[0], 1, 1};
  slice.periodic = {true, false, false};
  auto trace = FieldSnapshot::zero(slice, eps);
  for (int i = 0; i < n; ++i)
    trace.values.col(i) = field.values.col(static_cast<Eigen::Index>(g.index(i, 0, 0)));
  const auto wt = wigner_transform(trace, all_probes(slice, win), win);
  const auto rt = trace_density(wt);
  const Vec3 kp(info.incident.adjusted_k[0], 0, 0);
  const std::size_t node_kp = wt.nearest_knode(kp);
  double at_peak = 0.0, total = 0.0;
  for (std::size_t p = 0; p < wt.probes.size(); ++p)
    for (std::size_t q = 0; q < wt.kcount(); ++q) {
      total += std::abs(rt[p * wt.kcount() + q]);
      if (q == node_kp) at_peak += std::abs(rt[p * wt.kcount() + q]);
    }
  CHECK(at_peak / total >= 0.95);
}

TEST_CASE("wkb: constant speed reduces to the plane wave") {
  Grid g;
  g.shape = {1, 1, 96};
  g.spacing = {1, 1, 1.0 / 96};
  g.periodic = {false, false, true};
  const auto vac = MediumModel::homogeneous(1.0, 1.0);
  const double eps = 1.0 / 16;
  const double k3 = -eps * 2 * kPi * 10;

  WkbSpec wkb;
  wkb.omega = std::abs(k3);
  wkb.kp = Eigen::Vector2d::Zero();
  wkb.k3_sign = -1;
  wkb.epsilon_scale = eps;
  wkb.anchor_z = 0.0;
  const auto uw = wkb_field(wkb, vac, g);

  PlaneWaveSpec pw;
  pw.epsilon_scale = eps;
  pw.k0 = Vec3(0, 0, k3);
  const auto up = plane_wave_field(pw, g, true);
  CHECK((uw.values - up.values).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("wkb: residual first order in eps, compact support respected") {
  Grid g;
  g.shape = {1, 1, 256};
  g.spacing = {1, 1, 1.0 / 256};
  g.periodic = {false, false, true};
  const auto medium = linear_speed_medium(0.08);

  std::vector<double> epses = {1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128};
  std::vector<double> residuals;
  for (const double eps : epses) {
    WkbSpec wkb;
    wkb.omega = 6.0;
    wkb.k3_sign = -1;
    wkb.epsilon_scale = eps;
    wkb.anchor_z = 0.5;
    wkb.amplitude_profile = [](const Vec3& x) {
      const double u = (x[2] - 0.5) / 0.08;
      return std::exp(-0.5 * u * u);
    };
    const auto field = wkb_field(wkb, medium, g);
    residuals.push_back(maxwell_residual(field, medium, wkb.omega).relative);
  }
  CHECK(fitted_order(epses, residuals) >= 0.9);
  for (std::size_t i = 1; i < residuals.size(); ++i)
    CHECK(residuals[i] < residuals[i - 1]);

  // hard compact support vanishes outside
  WkbSpec wkb;
  wkb.omega = 6.0;
  wkb.k3_sign = -1;
  wkb.epsilon_scale = 1.0 / 32;
  wkb.amplitude_profile = [](const Vec3& x) {
    return (x[2] > 0.3 && x[2] < 0.7) ? 1.0 : 0.0;
  };
  const auto field = wkb_field(wkb, medium, g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double z = g.node(g.unravel(i))[2];
    if (z <= 0.3 || z >= 0.7)
      CHECK(field.values.col(static_cast<Eigen::Index>(i)).norm() == 0.0);
  }

  // turning point is rejected
  WkbSpec bad = wkb;
  bad.kp = Eigen::Vector2d(7.0, 0.0);  // |k'| > omega / v everywhere
  CHECK_THROWS_AS(wkb_field(bad, medium, g), std::domain_error);
}

TEST_CASE("wkb: shell concentration improves as eps decreases") {
  Grid g;
  g.shape = {1, 1, 256};
  g.spacing = {1, 1, 1.0 / 256};
  g.periodic = {false, false, true};
  const auto medium = linear_speed_medium(0.08);
  const double omega = 6.0;
  const WindowSpec win{64, 0.2};

  double prev = 0.0;
  for (const double eps : {1.0 / 16, 1.0 / 32, 1.0 / 64}) {
    WkbSpec wkb;
    wkb.omega = omega;
    wkb.k3_sign = -1;
    wkb.epsilon_scale = eps;
    wkb.anchor_z = 0.5;
    wkb.amplitude_profile = [](const Vec3& x) {
      const double u = (x[2] - 0.5) / 0.1;
      return std::exp(-0.5 * u * u);
    };
    const auto field = wkb_field(wkb, medium, g);

    std::vector<std::array<int, 3>> probes;
    for (int i = 100; i <= 156; i += 8) probes.push_back({0, 0, i});
    const auto w = wigner_transform(field, probes, win);
    const auto frac =
        shell_mass_fraction(project_modes(w, medium), w, medium, omega, 0.1);
    REQUIRE(frac.fraction_of(Mode::minus1).has_value());
    const double f = *frac.fraction_of(Mode::minus1);
    CHECK(f >= prev - 0.02);  // non-decreasing in 1/eps (small slack)
    prev = f;
  }
  CHECK(prev >= 0.9);  // at eps = 1/64
}
