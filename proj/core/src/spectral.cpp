#include "semimax/spectral.hpp"

#include <cmath>

namespace semimax {

const char* mode_name(Mode m) {
  switch (m) {
    case Mode::zero1:
      return "zero1";
    case Mode::zero2:
      return "zero2";
    case Mode::plus1:
      return "plus1";
    case Mode::plus2:
      return "plus2";
    case Mode::minus1:
      return "minus1";
    case Mode::minus2:
      return "minus2";
  }
  return "?";
}

PropagationFrame propagation_frame(const Vec3& k, double k_min) {
  const double kn = k.norm();
  if (!(kn >= k_min))
    throw std::domain_error(
        "propagation_frame: |k| below floor, direction undefined");

  PropagationFrame f;
  const double rho = std::hypot(k[0], k[1]);
  f.theta = std::atan2(rho, k[2]);
  f.phi = (rho == 0.0) ? 0.0 : std::atan2(k[1], k[0]);

  const double st = std::sin(f.theta), ct = std::cos(f.theta);
  const double sp = std::sin(f.phi), cp = std::cos(f.phi);
  f.khat = Vec3(st * cp, st * sp, ct);
  f.z1 = Vec3(ct * cp, ct * sp, -st);
  f.z2 = Vec3(-sp, cp, 0.0);
  return f;
}

Mat6 dispersion_matrix(const MediumModel& medium, const Vec3& x, const Vec3& k,
                       double k_min) {
  if (!(k.norm() >= k_min))
    throw std::domain_error("dispersion_matrix: |k| below floor");
  medium.require_valid(x);

  const double eps = medium.epsilon(x);
  const double eta = medium.eta(x);
  // K = sum_j k_j Q_j is the cross-product matrix of k.
  Mat3 kx = Mat3::Zero();
  for (int a = 0; a < 3; ++a) kx += k[a] * maxwell::cross_matrix(a);

  Mat6 l = Mat6::Zero();
  l.topRightCorner<3, 3>() = kx.transpose() / eps;
  l.bottomLeftCorner<3, 3>() = kx / eta;
  return l;
}

EigenSystem eigensystem(const MediumModel& medium, const Vec3& x, const Vec3& k,
                        double k_min) {
  const PropagationFrame f = propagation_frame(k, k_min);
  medium.require_valid(x);

  const double eps = medium.epsilon(x);
  const double eta = medium.eta(x);
  const double v = medium.speed(x);
  const double kn = k.norm();

  EigenSystem es;
  es.omega_zero = 0.0;
  es.omega_plus = v * kn;
  es.omega_minus = -v * kn;

  const double se = 1.0 / std::sqrt(eps);
  const double sn = 1.0 / std::sqrt(eta);
  const double te = 1.0 / std::sqrt(2.0 * eps);
  const double tn = 1.0 / std::sqrt(2.0 * eta);

  auto pack = [](const Vec3& e, const Vec3& h) {
    Vec6 u;
    u << e, h;
    return u;
  };

  es.b[mode_index(Mode::zero1)] = pack(se * f.khat, Vec3::Zero());
  es.b[mode_index(Mode::zero2)] = pack(Vec3::Zero(), sn * f.khat);
  es.b[mode_index(Mode::plus1)] = pack(te * f.z1, tn * f.z2);
  es.b[mode_index(Mode::plus2)] = pack(te * f.z2, -tn * f.z1);
  es.b[mode_index(Mode::minus1)] = pack(te * f.z1, -tn * f.z2);
  es.b[mode_index(Mode::minus2)] = pack(te * f.z2, tn * f.z1);

  const Mat6 a0 = maxwell::material_matrix(eps, eta);
  for (size_t i = 0; i < 6; ++i) es.d[i] = a0 * es.b[i];
  return es;
}

NormalizationReport normalization_report(const EigenSystem& es,
                                         const MediumModel& medium,
                                         const Vec3& x, const Vec3& k) {
  NormalizationReport r;
  const Mat6 a0 = medium.material_matrix(x);
  const double v = medium.speed(x);
  const Vec3 khat = k / k.norm();

  for (int a = 0; a < 6; ++a)
    for (int bb = 0; bb < 6; ++bb)
      r.gram(a, bb) = es.b[static_cast<size_t>(a)].dot(a0 * es.b[static_cast<size_t>(bb)]);

  const Vec6& bp1 = es.basis(Mode::plus1);
  const Vec6& bp2 = es.basis(Mode::plus2);
  for (int j = 0; j < 3; ++j) {
    r.flux_plus1[j] = bp1.dot(maxwell::flux_matrix(j) * bp1);
    r.flux_plus2[j] = bp2.dot(maxwell::flux_matrix(j) * bp2);
  }
  r.boundary_pairing = bp1.dot(maxwell::boundary_coupling() * bp1);
  r.normal_flux_plus1 = r.flux_plus1[2];

  double dev = (r.gram - Mat6::Identity()).cwiseAbs().maxCoeff();
  dev = std::max(dev, (r.flux_plus1 - v * khat).cwiseAbs().maxCoeff());
  dev = std::max(dev, (r.flux_plus2 - v * khat).cwiseAbs().maxCoeff());
  dev = std::max(dev, std::abs(r.boundary_pairing));
  dev = std::max(dev, std::abs(r.normal_flux_plus1 - v * khat[2]));
  r.max_deviation = dev;
  return r;
}

}  // namespace semimax
