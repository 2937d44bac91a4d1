#pragma once

#include <optional>

#include "semimax/grid.hpp"
#include "semimax/spectral.hpp"

namespace semimax {

/// Polarization eigenvector of the branch a plane wave e^{+i k.x/eps}
/// must occupy to solve the time-harmonic system: the -v|k| branch.
/// polarization selects the transverse index (1 or 2).
Vec6 plane_wave_polarization(const Vec3& k, double eps_coeff, double eta_coeff,
                             int polarization);

/// Exact plane-wave solution on a homogeneous medium.
struct PlaneWaveSpec {
  Vec3 k0 = Vec3(0, 0, 1);
  Complex amplitude = 1.0;
  int polarization = 1;  // user-facing mode index (1 or 2)
  double epsilon_scale = 1.0;
  double eps_coeff = 1.0;
  double eta_coeff = 1.0;
  double omega = 0.0;  // 0: derive from the shell v |k0|

  double speed() const;
  double shell_omega() const { return speed() * k0.norm(); }
  void validate() const;  // on-shell within 1e-12 when omega given
};

struct SynthesisInfo {
  Vec3 adjusted_k = Vec3::Zero();     // nearest lattice wave vector used
  double adjusted_omega = 0.0;        // shell frequency of adjusted_k
  Vec6 polarization = Vec6::Zero();   // unit eigenvector used
  double relative_adjustment = 0.0;   // |k_adj - k0| / |k0|
};

/// u(x) = amplitude b e^{i k0.x / eps} with k0 snapped per active axis to
/// the grid's wavenumber lattice.  strict mode rejects any snap beyond
/// 1e-12 relative.
FieldSnapshot plane_wave_field(const PlaneWaveSpec& spec, const Grid& grid,
                               bool strict = false,
                               SynthesisInfo* info = nullptr);

/// Incident plane wave plus the reflected wave whose coefficients cancel
/// the tangential electric field on the conductor plane x3 = 0.  The
/// incident wave must carry k3 < 0.
struct MirrorFieldSpec {
  PlaneWaveSpec incident;
};

struct MirrorInfo {
  SynthesisInfo incident;
  Vec3 reflected_k = Vec3::Zero();
  std::array<Complex, 2> reflection_coefficients{};  // on b(k*) pol 1, 2
  double boundary_tangential_residual = 0.0;         // max |E_tan| at x3 = 0
};

FieldSnapshot conductor_mirror_field(const MirrorFieldSpec& spec,
                                     const Grid& grid, bool strict = false,
                                     MirrorInfo* info = nullptr);

/// WKB beam u = A(x) b(x, grad S) e^{i S / eps} in a layered medium
/// v = v(x3), with S = kp.x' + S3(x3) generated by tracing one
/// bicharacteristic across the grid's x3 range.
struct WkbSpec {
  double omega = 1.0;
  Eigen::Vector2d kp = Eigen::Vector2d::Zero();  // conserved tangential part
  int k3_sign = -1;                              // sign of dS3/dx3
  int polarization = 1;
  Complex amplitude = 1.0;
  double epsilon_scale = 1.0;
  std::function<double(const Vec3&)> amplitude_profile;  // default: 1
  double anchor_z = 0.0;                                 // S3(anchor_z) = 0
  double trace_dt = 1e-3;
};

FieldSnapshot wkb_field(const WkbSpec& spec, const MediumModel& medium,
                        const Grid& grid);

/// Relative residual of the time-harmonic system under spectral
/// differentiation:
///   || (i w / eps) A^0 u + sum_j A^j d_j u + C u ||  /  ((w/eps) ||A^0 u||)
/// Active axes must be periodic; inactive axes are treated as constant.
struct MaxwellResidual {
  double absolute = 0.0;
  double relative = 0.0;
};

MaxwellResidual maxwell_residual(const FieldSnapshot& field,
                                 const MediumModel& medium, double omega);

/// L2 norms of the spectral divergences div(eps E) and div(eta H),
/// relative to the field norm times the dominant wavenumber.
struct DivergenceDiagnostic {
  double div_e = 0.0;
  double div_h = 0.0;
};

DivergenceDiagnostic divergence_diagnostic(const FieldSnapshot& field,
                                           const MediumModel& medium);

}  // namespace semimax
