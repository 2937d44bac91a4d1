#include "semimax/maxwell.hpp"

#include <cmath>

namespace semimax {
namespace maxwell {

Mat3 cross_matrix(int axis) {
  Mat3 q = Mat3::Zero();
  switch (axis) {
    case 0:
      q(1, 2) = -1.0;
      q(2, 1) = 1.0;
      break;
    case 1:
      q(0, 2) = 1.0;
      q(2, 0) = -1.0;
      break;
    case 2:
      q(0, 1) = -1.0;
      q(1, 0) = 1.0;
      break;
    default:
      throw std::invalid_argument("cross_matrix: axis must be 0, 1 or 2");
  }
  return q;
}

namespace {

Mat6 build_flux(int axis) {
  const Mat3 q = cross_matrix(axis);
  Mat6 a = Mat6::Zero();
  a.topRightCorner<3, 3>() = q.transpose();
  a.bottomLeftCorner<3, 3>() = q;
  return a;
}

}  // namespace

const Mat6& flux_matrix(int axis) {
  static const Mat6 a1 = build_flux(0);
  static const Mat6 a2 = build_flux(1);
  static const Mat6 a3 = build_flux(2);
  switch (axis) {
    case 0:
      return a1;
    case 1:
      return a2;
    case 2:
      return a3;
    default:
      throw std::invalid_argument("flux_matrix: axis must be 0, 1 or 2");
  }
}

Mat6 material_matrix(double eps, double eta) {
  Mat6 a = Mat6::Zero();
  a.diagonal() << eps, eps, eps, eta, eta, eta;
  return a;
}

Mat6 conduction_matrix(double sigma) {
  Mat6 c = Mat6::Zero();
  c.diagonal().head<3>().setConstant(sigma);
  return c;
}

const Mat6& boundary_coupling() {
  static const Mat6 ab = [] {
    Mat6 m = Mat6::Zero();
    m(3, 4) = -1.0;
    m(4, 3) = 1.0;
    return m;
  }();
  return ab;
}

const Mat6& tangential_projector() {
  static const Mat6 m = [] {
    Mat6 p = Mat6::Zero();
    p.diagonal() << 1.0, 1.0, 0.0, 1.0, 1.0, 0.0;
    return p;
  }();
  return m;
}

}  // namespace maxwell

Vec3 ScalarField::gradient(const Vec3& x) const {
  if (grad_) return grad_(x);
  Vec3 g;
  for (int a = 0; a < 3; ++a) {
    Vec3 xp = x, xm = x;
    xp[a] += fd_step_;
    xm[a] -= fd_step_;
    g[a] = (eval_(xp) - eval_(xm)) / (2.0 * fd_step_);
  }
  return g;
}

MediumModel::MediumModel(ScalarField eps, ScalarField eta, ScalarField sigma,
                         Region region)
    : eps_(std::move(eps)),
      eta_(std::move(eta)),
      sigma_(std::move(sigma)),
      region_(region) {
  if (!eps_.valid() || !eta_.valid() || !sigma_.valid())
    throw std::invalid_argument("MediumModel: missing coefficient field");
}

MediumModel MediumModel::homogeneous(double eps, double eta, double sigma,
                                     Region region) {
  if (eps <= 0.0 || eta <= 0.0)
    throw std::domain_error("MediumModel: eps and eta must be positive");
  return MediumModel(ScalarField::constant(eps), ScalarField::constant(eta),
                     ScalarField::constant(sigma), region);
}

double MediumModel::speed(const Vec3& x) const {
  return 1.0 / std::sqrt(eps_(x) * eta_(x));
}

Vec3 MediumModel::grad_speed(const Vec3& x) const {
  // v = (eps*eta)^{-1/2}  =>  grad v = -v/2 (grad eps/eps + grad eta/eta)
  const double e = eps_(x), n = eta_(x);
  const double v = 1.0 / std::sqrt(e * n);
  return (-0.5 * v) * (eps_.gradient(x) / e + eta_.gradient(x) / n);
}

void MediumModel::require_valid(const Vec3& x) const {
  if (!valid_at(x))
    throw std::domain_error("MediumModel: eps or eta not positive at point");
}

}  // namespace semimax
