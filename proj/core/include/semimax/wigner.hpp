#pragma once

#include <optional>
#include <vector>

#include "semimax/grid.hpp"
#include "semimax/spectral.hpp"

namespace semimax {

/// Symmetric window over node offsets -m..m per active axis: flat center,
/// cosine-squared roll-off over the outer `taper` fraction of the
/// half-width.  taper = 0 is the rectangular window.
struct WindowSpec {
  int half_width = 16;
  double taper = 0.1;

  int length() const { return 2 * half_width + 1; }
  /// Weight at signed offset j, |j| <= half_width; w(0) = 1.
  double weight(int j) const;
};

/// Discrete scaled Wigner transform of a field at a set of spatial probes.
/// Per probe, a Hermitian 6x6 matrix on a signed k lattice with spacing
/// dk_a = pi * eps / (M_a * h_a) on each active axis.  Inactive axes carry
/// a pinned k component.
struct WignerGrid {
  double epsilon_scale = 1.0;
  WindowSpec window;
  std::array<bool, 3> axis_active = {false, false, false};
  std::array<int, 3> kshape = {1, 1, 1};  // nodes per axis (1 if inactive)
  std::array<double, 3> dk = {0.0, 0.0, 0.0};
  Vec3 pinned_k = Vec3::Zero();

  std::vector<Vec3> probes;                    // physical positions
  std::vector<std::array<int, 3>> probe_node;  // grid node indices

  /// Probe lattice metadata (set when the probes form a uniform lattice,
  /// required for position smoothing).
  bool probes_form_lattice = false;
  std::array<int, 3> probe_shape = {1, 1, 1};
  std::array<double, 3> probe_spacing = {0.0, 0.0, 0.0};
  std::array<bool, 3> probe_periodic = {false, false, false};

  /// values[p * kcount + n], n row-major over kshape.
  std::vector<CMat6> values;

  std::size_t kcount() const {
    return static_cast<std::size_t>(kshape[0]) *
           static_cast<std::size_t>(kshape[1]) *
           static_cast<std::size_t>(kshape[2]);
  }
  std::size_t node_count() const { return probes.size() * kcount(); }

  const CMat6& at(std::size_t probe, std::size_t knode) const {
    return values[probe * kcount() + knode];
  }
  CMat6& at(std::size_t probe, std::size_t knode) {
    return values[probe * kcount() + knode];
  }

  /// Wave vector of a k node (row-major index), pinned components included.
  Vec3 wavevector(std::size_t knode) const;
  std::array<int, 3> k_indices(std::size_t knode) const;
  /// Signed lattice coordinates of the node nearest to k on active axes.
  std::size_t nearest_knode(const Vec3& k) const;

  /// Volume element of the active k axes.
  double dk_volume() const;
};

struct WignerOptions {
  /// Check that the field's spectral content fits the covered k range.
  bool validate_resolution = true;
  /// Fraction of spectral power allowed beyond the k range before the
  /// resolution check fails.
  double resolution_power_tol = 0.25;
  int threads = 0;
};

/// Windowed discrete realization of the scaled Wigner transform
///   W(x,k) = (2 pi)^-d Int e^{i y.k} f(x - eps y/2) (x) f*(x + eps y/2) dy
/// evaluated at grid-node probes.  Hermitian by construction (symmetric
/// offsets, even window).
WignerGrid wigner_transform(const FieldSnapshot& field,
                            const std::vector<std::array<int, 3>>& probes,
                            const WindowSpec& window,
                            const WignerOptions& opts = {});

/// All grid nodes whose window fits (every node on periodic axes).
std::vector<std::array<int, 3>> all_probes(const Grid& grid,
                                           const WindowSpec& window);

/// Scalar transport densities per mode, extracted from a Wigner grid by
/// pairing with the dual eigenvectors: mu_a = Re(d_a^T W d_a).
struct ModeDensities {
  std::vector<std::array<double, 6>> mu;  // [probe * kcount + knode][mode]
  std::vector<bool> skipped;              // nodes below the k floor
  double max_imag = 0.0;                  // diagnostic: |Im d^T W d|
  std::size_t kcount = 0;
  std::size_t probe_count = 0;

  double& value(std::size_t p, std::size_t n, Mode m) {
    return mu[p * kcount + n][static_cast<size_t>(mode_index(m))];
  }
  double value(std::size_t p, std::size_t n, Mode m) const {
    return mu[p * kcount + n][static_cast<size_t>(mode_index(m))];
  }
};

ModeDensities project_modes(const WignerGrid& w, const MediumModel& medium,
                            double k_min = kDefaultWavevectorFloor);

/// Cross-mode coherence d_a^T W d_b at one node (complex in general).
Complex cross_coherence(const WignerGrid& w, const MediumModel& medium,
                        std::size_t probe, std::size_t knode, Mode a, Mode b,
                        double k_min = kDefaultWavevectorFloor);

/// Fraction of the total |mu| mass per mode lying in the shell band
/// |v(x)|k| - omega| <= band * omega.  Modes with zero total mass report
/// no value (empty-mass marker).
struct ShellMassReport {
  std::array<std::optional<double>, 6> fraction;
  std::array<double, 6> total_mass{};
  std::optional<double> fraction_of(Mode m) const {
    return fraction[static_cast<size_t>(mode_index(m))];
  }
};

ShellMassReport shell_mass_fraction(const ModeDensities& mu,
                                    const WignerGrid& w,
                                    const MediumModel& medium, double omega,
                                    double band);

/// Gaussian-smoothed trace density (Husimi-style positivity diagnostic).
struct HusimiDensity {
  std::vector<double> values;  // [probe * kcount + knode]
  std::size_t kcount = 0;
  std::size_t probe_count = 0;
  double min_value = 0.0;
};

struct SmoothWidths {
  std::array<double, 3> sigma_x = {0.0, 0.0, 0.0};
  std::array<double, 3> sigma_k = {0.0, 0.0, 0.0};
};

/// Requires sigma_x * sigma_k >= eps/2 on every active axis and probes on
/// a uniform lattice.
HusimiDensity husimi_smooth(const WignerGrid& w, const SmoothWidths& widths);

/// Plain trace density Re tr W per (probe, knode).
std::vector<double> trace_density(const WignerGrid& w);

/// Energy-weighted trace tr(A^0 W); equals the sum of the mode densities.
std::vector<double> energy_trace_density(const WignerGrid& w,
                                         const MediumModel& medium);

}  // namespace semimax
