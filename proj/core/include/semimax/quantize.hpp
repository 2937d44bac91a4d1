#pragma once

#include <functional>
#include <span>
#include <vector>

#include "semimax/grid.hpp"
#include "semimax/maxwell.hpp"
#include "semimax/wigner.hpp"

namespace semimax {

/// Scalar phase-space test function a(x,k), optionally with analytic
/// gradients (required by the product-rule remainder).
struct Symbol {
  using Eval = std::function<double(const Vec3&, const Vec3&)>;
  using Grad = std::function<Vec3(const Vec3&, const Vec3&)>;

  Eval eval;
  Grad grad_x;
  Grad grad_k;
  bool depends_on_x = true;
  bool depends_on_k = true;

  double operator()(const Vec3& x, const Vec3& k) const { return eval(x, k); }
  bool has_gradients() const {
    return static_cast<bool>(grad_x) && static_cast<bool>(grad_k);
  }

  static Symbol constant(double c);
  /// Multiplication symbol a(x); zero k gradient.
  static Symbol of_x(std::function<double(const Vec3&)> f,
                     std::function<Vec3(const Vec3&)> grad = {});
  /// Fourier multiplier a(k); zero x gradient.
  static Symbol of_k(std::function<double(const Vec3&)> f,
                     std::function<Vec3(const Vec3&)> grad = {});
  /// Coordinate symbol k_j.
  static Symbol wavenumber(int axis);

  /// Pointwise product (scalar symbols commute).
  static Symbol product(const Symbol& a, const Symbol& b);
  /// Poisson-type contraction grad_k b . grad_x a.
  static Symbol gradient_contraction(const Symbol& b, const Symbol& a);
};

/// Matrix-valued test function with the commutation property check used
/// for boundary symbols.
struct MatrixSymbol {
  std::function<Mat6(const Vec3&, const Vec3&)> eval;
};

/// Max over samples of || a(L - wI) - (L^T - wI) a ||.
double commuting_class_violation(const MatrixSymbol& a,
                                 const MediumModel& medium, double omega,
                                 std::span<const Vec3> xs,
                                 std::span<const Vec3> ks);

/// Kohn-Nirenberg operator at scale eps = field.epsilon_scale:
///   [a(x, eps D) f](x) = (2 pi)^-d Int e^{i x.k} a(x, eps k) fhat(k) dk
/// realized on the periodic grid lattice.  Fast paths for pure
/// multiplication and pure Fourier multiplier symbols.
FieldSnapshot apply_pdo(const Symbol& a, const FieldSnapshot& field);

/// Weyl (midpoint) quantization via the direct kernel quadrature.  Cost
/// grows with the cube of the node count; intended for small grids.
FieldSnapshot apply_weyl(const Symbol& a, const FieldSnapshot& field);

/// Remainder of the product rule
///   b_eps a_eps = (ba)_eps + (eps/i)(grad_k b . grad_x a)_eps + O(eps^2)
/// measured on one field across a ladder of scales.
struct RemainderReport {
  std::vector<double> epsilons;
  std::vector<double> relative_norms;
  double fitted_order = 0.0;  // log-log slope
};

RemainderReport product_remainder(const Symbol& a, const Symbol& b,
                                  const FieldSnapshot& field,
                                  std::span<const double> epsilons);

/// Both sides of <a, W^eps> = (a^w(x, eps D) f, f) on matched grids.
struct DualityPairing {
  Complex phase_space_side;  // sum of a tr W over the probe x k lattice
  Complex operator_side;     // Weyl quadratic form
  double abs_difference = 0.0;
};

DualityPairing duality_pairing(const Symbol& a, const FieldSnapshot& field);

/// Decomposition a(x,k) = a0(x,k') + a1(x,k') k3 + a2(x,k)(v|k| - omega)
/// at a fixed spatial point, valid in the hyperbolic region |k'| < omega/v.
struct SymbolDecomposition {
  double omega = 0.0;
  double guard = 1e-6;  // relative half-width of the shell guard band
  std::function<double(const Eigen::Vector2d&)> a0;
  std::function<double(const Eigen::Vector2d&)> a1;
  std::function<double(const Vec3&)> a2;
  double reconstruct(const Vec3& k) const;

 private:
  friend SymbolDecomposition decompose_symbol(const Symbol&, const MediumModel&,
                                              double, const Vec3&, double);
  std::function<double(const Vec3&)> raw_;
  double speed_ = 1.0;
};

SymbolDecomposition decompose_symbol(const Symbol& a, const MediumModel& medium,
                                     double omega, const Vec3& x,
                                     double guard_rel = 1e-6);

/// Scaled discrete Sobolev norm: FFT multiplier (1 + |eps k|^2)^{s/2}.
double sobolev_norm(const FieldSnapshot& field, double s);

/// Least-squares slope of log(y) against log(x); the fitted decay order.
double fitted_order(std::span<const double> x, std::span<const double> y);

}  // namespace semimax
