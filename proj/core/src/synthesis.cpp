#include "semimax/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "semimax/fft.hpp"
#include "semimax/transport.hpp"

namespace semimax {

namespace {
constexpr double kPi = std::numbers::pi;
}

Vec6 plane_wave_polarization(const Vec3& k, double eps_coeff, double eta_coeff,
                             int polarization) {
  if (polarization != 1 && polarization != 2)
    throw std::invalid_argument("plane_wave_polarization: index must be 1 or 2");
  const auto medium = MediumModel::homogeneous(eps_coeff, eta_coeff);
  const auto es = eigensystem(medium, Vec3::Zero(), k);
  return es.basis(polarization == 1 ? Mode::minus1 : Mode::minus2);
}

double PlaneWaveSpec::speed() const {
  return 1.0 / std::sqrt(eps_coeff * eta_coeff);
}

void PlaneWaveSpec::validate() const {
  if (eps_coeff <= 0.0 || eta_coeff <= 0.0)
    throw std::domain_error("PlaneWaveSpec: eps and eta must be positive");
  if (epsilon_scale <= 0.0)
    throw std::invalid_argument("PlaneWaveSpec: epsilon_scale must be > 0");
  if (!(k0.norm() > 0.0))
    throw std::domain_error("PlaneWaveSpec: k0 must be nonzero");
  if (omega > 0.0 && std::abs(speed() * k0.norm() - omega) > 1e-12 * omega)
    throw std::domain_error("PlaneWaveSpec: k0 off the shell v|k0| = omega");
}

namespace {

// Snap k0/eps to the grid's wavenumber lattice on active axes.
Vec3 snap_wavevector(const Vec3& k0, double eps, const Grid& g) {
  Vec3 k = k0;
  for (int a = 0; a < 3; ++a) {
    if (!g.axis_active(a)) continue;
    const auto ua = static_cast<size_t>(a);
    const double unit = 2.0 * kPi * eps / (g.shape[ua] * g.spacing[ua]);
    k[a] = unit * std::round(k0[a] / unit);
  }
  return k;
}

}  // namespace

FieldSnapshot plane_wave_field(const PlaneWaveSpec& spec, const Grid& grid,
                               bool strict, SynthesisInfo* info) {
  spec.validate();
  const double eps = spec.epsilon_scale;
  const Vec3 k = snap_wavevector(spec.k0, eps, grid);
  const double adjust = (k - spec.k0).norm() / spec.k0.norm();
  if (strict && adjust > 1e-12)
    throw std::domain_error("plane_wave_field: k0 incommensurate with grid");

  const Vec6 b =
      plane_wave_polarization(k, spec.eps_coeff, spec.eta_coeff, spec.polarization);
  if (info) {
    info->adjusted_k = k;
    info->adjusted_omega = spec.speed() * k.norm();
    info->polarization = b;
    info->relative_adjustment = adjust;
  }

  auto field = FieldSnapshot::zero(grid, eps);
  const CVec6 bc = b.cast<Complex>() * spec.amplitude;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Vec3 x = grid.node(grid.unravel(i));
    field.values.col(static_cast<Eigen::Index>(i)) =
        bc * std::exp(Complex(0.0, k.dot(x) / eps));
  }
  return field;
}

FieldSnapshot conductor_mirror_field(const MirrorFieldSpec& spec,
                                     const Grid& grid, bool strict,
                                     MirrorInfo* info) {
  spec.incident.validate();
  if (spec.incident.k0[2] >= 0.0)
    throw std::invalid_argument(
        "conductor_mirror_field: incident wave needs k3 < 0");

  SynthesisInfo inc_info;
  auto field = plane_wave_field(spec.incident, grid, strict, &inc_info);

  const Vec3 ki = inc_info.adjusted_k;
  const Vec3 kr(ki[0], ki[1], -ki[2]);
  const Vec6 b1 = plane_wave_polarization(kr, spec.incident.eps_coeff,
                                          spec.incident.eta_coeff, 1);
  const Vec6 b2 = plane_wave_polarization(kr, spec.incident.eps_coeff,
                                          spec.incident.eta_coeff, 2);

  // solve beta1 b1_Etan + beta2 b2_Etan = -E_tan(incident) at x3 = 0
  Eigen::Matrix2cd m;
  m << b1[0], b2[0], b1[1], b2[1];
  const Eigen::Vector2cd rhs =
      -spec.incident.amplitude *
      Eigen::Vector2cd(inc_info.polarization[0], inc_info.polarization[1]);
  const Eigen::Vector2cd beta = m.colPivHouseholderQr().solve(rhs);

  PlaneWaveSpec refl = spec.incident;
  refl.k0 = kr;
  double max_tan = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Vec3 x = grid.node(grid.unravel(i));
    const Complex phase = std::exp(Complex(0.0, kr.dot(x) / refl.epsilon_scale));
    field.values.col(static_cast<Eigen::Index>(i)) +=
        (beta[0] * b1.cast<Complex>() + beta[1] * b2.cast<Complex>()) * phase;
    if (x[2] == grid.origin[2] && grid.origin[2] == 0.0) {
      max_tan = std::max({max_tan,
                          std::abs(field.values(0, static_cast<Eigen::Index>(i))),
                          std::abs(field.values(1, static_cast<Eigen::Index>(i)))});
    }
  }

  if (info) {
    info->incident = inc_info;
    info->reflected_k = kr;
    info->reflection_coefficients = {beta[0], beta[1]};
    info->boundary_tangential_residual = max_tan;
  }
  return field;
}

FieldSnapshot wkb_field(const WkbSpec& spec, const MediumModel& medium,
                        const Grid& grid) {
  if (spec.omega <= 0.0) throw std::invalid_argument("wkb_field: omega <= 0");
  if (spec.k3_sign != 1 && spec.k3_sign != -1)
    throw std::invalid_argument("wkb_field: k3_sign must be +1 or -1");
  if (!grid.axis_active(2))
    throw std::invalid_argument("wkb_field: x3 axis must be active");

  const double z_lo = grid.origin[2];
  const double z_hi = grid.origin[2] + (grid.shape[2] - 1) * grid.spacing[2];

  // local normal wavenumber on the shell; rejects turning points
  auto k3_of = [&](double z) {
    const Vec3 x(0, 0, z);
    const double v = medium.speed(x);
    const double disc = spec.omega * spec.omega / (v * v) - spec.kp.squaredNorm();
    if (disc <= kDefaultWavevectorFloor * kDefaultWavevectorFloor)
      throw std::domain_error("wkb_field: |grad S| hits the floor (turning point)");
    return spec.k3_sign * std::sqrt(disc);
  };

  // one bicharacteristic sweeps the z range; S3 accumulates k3 dz
  RayState ray;
  ray.mode = Mode::minus1;  // the branch of e^{+i k.x/eps} waves
  const double dz_dt_sign = -spec.k3_sign;  // dx3/dt = -v k3/|k| for minus
  const double z_start = dz_dt_sign > 0 ? z_lo : z_hi;
  ray.x = Vec3(0, 0, z_start);
  ray.k = Vec3(spec.kp[0], spec.kp[1], k3_of(z_start));

  IntegrationOptions opts;
  opts.dt = spec.trace_dt;
  opts.record_trajectory = true;
  // generous horizon: the sweep stops at the far end via an event
  EventDetector far_end{[&](const Vec3& x) {
                          return dz_dt_sign > 0 ? (z_hi + 4 * grid.spacing[2]) - x[2]
                                                : x[2] - (z_lo - 4 * grid.spacing[2]);
                        },
                        7, 1e-9};
  const double span = (z_hi - z_lo + 8 * grid.spacing[2]);
  const double v_min = std::min(medium.speed(Vec3(0, 0, z_lo)),
                                medium.speed(Vec3(0, 0, z_hi)));
  const auto res = integrate_ray(ray, medium, 4.0 * span / std::max(1e-6, v_min),
                                 opts, std::span<const EventDetector>(&far_end, 1));

  // phase samples S3(z) = -w t - kp.(x'(t) - x'(0)) along the trajectory
  std::vector<double> zs, ss;
  zs.reserve(res.trajectory.size());
  for (const auto& [t, state] : res.trajectory) {
    zs.push_back(state.x[2]);
    ss.push_back(-spec.omega * t -
                 spec.kp.dot(state.x.head<2>() - ray.x.head<2>()));
  }
  if (zs.size() < 4) throw std::runtime_error("wkb_field: trace too short");
  if (dz_dt_sign < 0) {
    std::reverse(zs.begin(), zs.end());
    std::reverse(ss.begin(), ss.end());
  }

  // cubic Hermite interpolation with the analytic slope S3' = k3(z)
  auto s3_at = [&](double z) {
    auto it = std::upper_bound(zs.begin(), zs.end(), z);
    std::size_t i = (it == zs.begin()) ? 0 : static_cast<std::size_t>(it - zs.begin() - 1);
    i = std::min(i, zs.size() - 2);
    const double h = zs[i + 1] - zs[i];
    const double u = (z - zs[i]) / h;
    const double m0 = k3_of(zs[i]) * h, m1 = k3_of(zs[i + 1]) * h;
    const double u2 = u * u, u3 = u2 * u;
    return (2 * u3 - 3 * u2 + 1) * ss[i] + (u3 - 2 * u2 + u) * m0 +
           (-2 * u3 + 3 * u2) * ss[i + 1] + (u3 - u2) * m1;
  };
  const double s3_anchor = s3_at(spec.anchor_z);

  auto field = FieldSnapshot::zero(grid, spec.epsilon_scale);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Vec3 x = grid.node(grid.unravel(i));
    const double a =
        spec.amplitude_profile ? spec.amplitude_profile(x) : 1.0;
    if (a == 0.0) continue;
    const Vec3 k_local(spec.kp[0], spec.kp[1], k3_of(x[2]));
    const auto es = eigensystem(medium, x, k_local);
    const Vec6& b =
        es.basis(spec.polarization == 1 ? Mode::minus1 : Mode::minus2);
    const double phase = spec.kp.dot(x.head<2>()) + s3_at(x[2]) - s3_anchor;
    field.values.col(static_cast<Eigen::Index>(i)) =
        spec.amplitude * a * b.cast<Complex>() *
        std::exp(Complex(0.0, phase / spec.epsilon_scale));
  }
  return field;
}

namespace {

using Block = Eigen::Matrix<Complex, 6, Eigen::Dynamic>;

// spectral partial derivative along one active axis
Block spectral_derivative(const FieldSnapshot& f, int axis) {
  const Grid& g = f.grid;
  Block out = Block::Zero(6, static_cast<Eigen::Index>(g.size()));
  if (!g.axis_active(axis)) return out;  // constant along inactive axes
  if (!g.periodic[static_cast<size_t>(axis)])
    throw std::invalid_argument("spectral_derivative: axis must be periodic");

  const int n = g.shape[static_cast<size_t>(axis)];
  std::vector<Complex> buf(g.size());
  out = f.values;
  for (int c = 0; c < 6; ++c) {
    for (std::size_t i = 0; i < g.size(); ++i)
      buf[i] = out(c, static_cast<Eigen::Index>(i));
    fft::transform(buf.data(), g.shape, -1);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const auto bins = g.unravel(i);
      const double kappa = 2.0 * kPi *
                           fft::signed_index(bins[static_cast<size_t>(axis)], n) /
                           (n * g.spacing[static_cast<size_t>(axis)]);
      buf[i] *= Complex(0.0, kappa);
    }
    fft::transform(buf.data(), g.shape, +1);
    const double inv = 1.0 / static_cast<double>(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
      out(c, static_cast<Eigen::Index>(i)) = buf[i] * inv;
  }
  return out;
}

}  // namespace

MaxwellResidual maxwell_residual(const FieldSnapshot& field,
                                 const MediumModel& medium, double omega) {
  const Grid& g = field.grid;
  const double eps = field.epsilon_scale;

  std::array<Block, 3> deriv;
  for (int a = 0; a < 3; ++a) deriv[static_cast<size_t>(a)] = spectral_derivative(field, a);

  double res2 = 0.0, ref2 = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Vec3 x = g.node(g.unravel(i));
    const Mat6 a0 = medium.material_matrix(x);
    const Mat6 c = maxwell::conduction_matrix(medium.sigma(x));
    CVec6 r = Complex(0.0, omega / eps) *
                  (a0 * field.values.col(static_cast<Eigen::Index>(i))) +
              c.cast<Complex>() * field.values.col(static_cast<Eigen::Index>(i));
    for (int a = 0; a < 3; ++a)
      r += maxwell::flux_matrix(a).cast<Complex>() *
           deriv[static_cast<size_t>(a)].col(static_cast<Eigen::Index>(i));
    res2 += r.squaredNorm();
    ref2 += (a0 * field.values.col(static_cast<Eigen::Index>(i))).squaredNorm();
  }
  MaxwellResidual out;
  out.absolute = std::sqrt(res2 * g.cell_volume());
  const double ref = (omega / eps) * std::sqrt(ref2 * g.cell_volume());
  out.relative = ref > 0.0 ? out.absolute / ref : 0.0;
  return out;
}

DivergenceDiagnostic divergence_diagnostic(const FieldSnapshot& field,
                                           const MediumModel& medium) {
  const Grid& g = field.grid;

  // fields eps E and eta H, then spectral divergence
  FieldSnapshot weighted = field;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Vec3 x = g.node(g.unravel(i));
    weighted.values.col(static_cast<Eigen::Index>(i)).head<3>() *= medium.epsilon(x);
    weighted.values.col(static_cast<Eigen::Index>(i)).tail<3>() *= medium.eta(x);
  }

  double div_e2 = 0.0, div_h2 = 0.0, ref2 = 0.0;
  std::array<Block, 3> deriv;
  for (int a = 0; a < 3; ++a)
    deriv[static_cast<size_t>(a)] = spectral_derivative(weighted, a);
  for (std::size_t i = 0; i < g.size(); ++i) {
    Complex de(0, 0), dh(0, 0);
    for (int a = 0; a < 3; ++a) {
      de += deriv[static_cast<size_t>(a)](a, static_cast<Eigen::Index>(i));
      dh += deriv[static_cast<size_t>(a)](a + 3, static_cast<Eigen::Index>(i));
    }
    div_e2 += std::norm(de);
    div_h2 += std::norm(dh);
    ref2 += field.values.col(static_cast<Eigen::Index>(i)).squaredNorm();
  }
  DivergenceDiagnostic out;
  const double ref = std::sqrt(ref2) + 1e-300;
  out.div_e = std::sqrt(div_e2) / ref * field.epsilon_scale;
  out.div_h = std::sqrt(div_h2) / ref * field.epsilon_scale;
  return out;
}

}  // namespace semimax
