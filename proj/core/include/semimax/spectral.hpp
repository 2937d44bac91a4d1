#pragma once

#include <array>

#include "semimax/maxwell.hpp"

namespace semimax {

/// Wave vectors below this floor (relative to the problem's k scale) have
/// no well-defined propagation direction and are rejected.
inline constexpr double kDefaultWavevectorFloor = 1e-8;

/// Propagation mode labels.  zero1/zero2 are the longitudinal
/// non-propagating modes, plus*/minus* the transverse modes of the
/// +v|k| / -v|k| eigenvalue branches.
enum class Mode : int {
  zero1 = 0,
  zero2 = 1,
  plus1 = 2,
  plus2 = 3,
  minus1 = 4,
  minus2 = 5,
};

inline constexpr std::array<Mode, 6> kAllModes = {
    Mode::zero1, Mode::zero2, Mode::plus1, Mode::plus2, Mode::minus1,
    Mode::minus2};
inline constexpr std::array<Mode, 4> kTransverseModes = {
    Mode::plus1, Mode::plus2, Mode::minus1, Mode::minus2};

constexpr int mode_index(Mode m) { return static_cast<int>(m); }
constexpr Mode mode_from_index(int i) { return static_cast<Mode>(i); }

/// Branch sign: +1 for plus modes, -1 for minus modes, 0 for longitudinal.
constexpr int branch_sign(Mode m) {
  switch (m) {
    case Mode::plus1:
    case Mode::plus2:
      return 1;
    case Mode::minus1:
    case Mode::minus2:
      return -1;
    default:
      return 0;
  }
}

/// Polarization index (1 or 2) of a transverse mode, 0 for longitudinal.
constexpr int polarization_index(Mode m) {
  switch (m) {
    case Mode::plus1:
    case Mode::minus1:
      return 1;
    case Mode::plus2:
    case Mode::minus2:
      return 2;
    default:
      return 0;
  }
}

const char* mode_name(Mode m);

/// Orthonormal propagation triple (khat, z1, z2) in the closed polar form.
/// At the polar axis (sin(theta) == 0) the azimuth is fixed to phi = 0 so
/// the frame is deterministic.
struct PropagationFrame {
  Vec3 khat;
  Vec3 z1;
  Vec3 z2;
  double theta = 0.0;
  double phi = 0.0;
};

PropagationFrame propagation_frame(const Vec3& k,
                                   double k_min = kDefaultWavevectorFloor);

/// Complete eigensystem of the dispersion matrix at one (x, k): the
/// eigenvalues 0, +v|k|, -v|k| (each of multiplicity two), the propagation
/// basis vectors b_alpha and their duals d_alpha = A^0 b_alpha.
struct EigenSystem {
  double omega_zero = 0.0;
  double omega_plus = 0.0;
  double omega_minus = 0.0;
  std::array<Vec6, 6> b{};
  std::array<Vec6, 6> d{};

  double omega(Mode m) const {
    const int s = branch_sign(m);
    return s > 0 ? omega_plus : (s < 0 ? omega_minus : omega_zero);
  }
  const Vec6& basis(Mode m) const { return b[static_cast<size_t>(mode_index(m))]; }
  const Vec6& dual(Mode m) const { return d[static_cast<size_t>(mode_index(m))]; }
};

/// Dispersion matrix L(x,k) = sum_j (A^0)^{-1} k_j A^j.  Rejects k = 0 and
/// points where the medium coefficients are not positive.
Mat6 dispersion_matrix(const MediumModel& medium, const Vec3& x, const Vec3& k,
                       double k_min = kDefaultWavevectorFloor);

EigenSystem eigensystem(const MediumModel& medium, const Vec3& x, const Vec3& k,
                        double k_min = kDefaultWavevectorFloor);

/// Numerical check of the normalization, flux and boundary pairing
/// identities satisfied by an eigensystem.
struct NormalizationReport {
  Mat6 gram;                 // (A^0 b_a, b_b), expected identity
  Vec3 flux_plus1;           // (A^j b_+^1, b_+^1), expected v*khat
  Vec3 flux_plus2;           // (A^j b_+^2, b_+^2), expected v*khat
  double boundary_pairing;   // (A_b b_+^1, b_+^1), expected 0
  double normal_flux_plus1;  // (A^3 b_+^1, b_+^1), expected v*khat_3
  double max_deviation = 0.0;
  bool ok(double tol = 1e-10) const { return max_deviation <= tol; }
};

NormalizationReport normalization_report(const EigenSystem& es,
                                         const MediumModel& medium,
                                         const Vec3& x, const Vec3& k);

}  // namespace semimax
