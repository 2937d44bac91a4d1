#pragma once

#include <functional>
#include <stdexcept>

#include "semimax/linalg.hpp"

namespace semimax {

/// Constant matrices of the six-component first-order Maxwell system
/// written for the field vector u = (E1,E2,E3,H1,H2,H3).
namespace maxwell {

/// Antisymmetric 3x3 matrix of the cross product with the basis vector
/// e_axis, i.e. cross_matrix(a)*x == e_a x x.  axis in {0,1,2}.
Mat3 cross_matrix(int axis);

/// Flux matrix A^j (j = axis in {0,1,2}): symmetric, built from the
/// off-diagonal blocks [0, Q^T; Q, 0].
const Mat6& flux_matrix(int axis);

/// Material weight matrix A^0 = diag(eps,eps,eps,eta,eta,eta).
Mat6 material_matrix(double eps, double eta);

/// Conduction matrix C = diag(sigma,sigma,sigma,0,0,0).
Mat6 conduction_matrix(double sigma);

/// Boundary coupling matrix: only entries (3,4) = -1 and (4,3) = 1
/// (zero-based) are nonzero.  Encodes the tangential-H jump produced by
/// extending a conductor half-space field by zero.
const Mat6& boundary_coupling();

/// Idempotent symmetric projector M = diag(1,1,0,1,1,0) selecting the
/// tangential E and H components; transfers boundary measures across a
/// transmission interface.
const Mat6& tangential_projector();

}  // namespace maxwell

/// Scalar coefficient field over R^3 with a gradient evaluator.  The
/// gradient is analytic when supplied, otherwise a second-order central
/// difference with a configurable step.
class ScalarField {
 public:
  using Eval = std::function<double(const Vec3&)>;
  using Grad = std::function<Vec3(const Vec3&)>;

  ScalarField() = default;
  explicit ScalarField(Eval f) : eval_(std::move(f)) {}
  ScalarField(Eval f, Grad g) : eval_(std::move(f)), grad_(std::move(g)) {}

  static ScalarField constant(double c) {
    return ScalarField([c](const Vec3&) { return c; },
                       [](const Vec3&) { return Vec3::Zero().eval(); });
  }

  double operator()(const Vec3& x) const { return eval_(x); }
  Vec3 gradient(const Vec3& x) const;

  bool valid() const { return static_cast<bool>(eval_); }
  bool has_analytic_gradient() const { return static_cast<bool>(grad_); }

  /// Central-difference step used when no analytic gradient is present
  /// (pick ~1e-5 times the domain scale).
  void set_fd_step(double h) { fd_step_ = h; }
  double fd_step() const { return fd_step_; }

 private:
  Eval eval_;
  Grad grad_;
  double fd_step_ = 1e-5;
};

enum class Region { whole_space, exterior, interior };

/// Smooth scalar coefficients eps(x), eta(x), sigma(x) of one medium and
/// the derived propagation speed v(x) = 1/sqrt(eps*eta).
class MediumModel {
 public:
  MediumModel(ScalarField eps, ScalarField eta,
              ScalarField sigma = ScalarField::constant(0.0),
              Region region = Region::whole_space);

  static MediumModel homogeneous(double eps, double eta, double sigma = 0.0,
                                 Region region = Region::whole_space);

  double epsilon(const Vec3& x) const { return eps_(x); }
  double eta(const Vec3& x) const { return eta_(x); }
  double sigma(const Vec3& x) const { return sigma_(x); }
  double speed(const Vec3& x) const;

  Vec3 grad_epsilon(const Vec3& x) const { return eps_.gradient(x); }
  Vec3 grad_eta(const Vec3& x) const { return eta_.gradient(x); }
  Vec3 grad_speed(const Vec3& x) const;

  Region region() const { return region_; }

  bool valid_at(const Vec3& x) const { return eps_(x) > 0.0 && eta_(x) > 0.0; }
  /// Throws std::domain_error where eps or eta is not positive.
  void require_valid(const Vec3& x) const;

  Mat6 material_matrix(const Vec3& x) const {
    return maxwell::material_matrix(eps_(x), eta_(x));
  }

 private:
  ScalarField eps_, eta_, sigma_;
  Region region_;
};

}  // namespace semimax
