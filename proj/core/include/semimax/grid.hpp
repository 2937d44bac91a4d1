#pragma once

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "semimax/linalg.hpp"

namespace semimax {

/// Uniform rectilinear grid with up to three active axes.  Axes with a
/// single node are inactive; the field is constant along them.
struct Grid {
  std::array<int, 3> shape = {1, 1, 1};
  std::array<double, 3> spacing = {1.0, 1.0, 1.0};
  Vec3 origin = Vec3::Zero();
  std::array<bool, 3> periodic = {false, false, false};

  bool axis_active(int a) const { return shape[static_cast<size_t>(a)] > 1; }
  int active_axis_count() const {
    return (axis_active(0) ? 1 : 0) + (axis_active(1) ? 1 : 0) +
           (axis_active(2) ? 1 : 0);
  }

  std::size_t size() const {
    return static_cast<std::size_t>(shape[0]) *
           static_cast<std::size_t>(shape[1]) *
           static_cast<std::size_t>(shape[2]);
  }

  // Row-major: axis 0 slowest, axis 2 fastest.
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * static_cast<std::size_t>(shape[1]) +
            static_cast<std::size_t>(j)) *
               static_cast<std::size_t>(shape[2]) +
           static_cast<std::size_t>(k);
  }
  std::size_t index(const std::array<int, 3>& n) const {
    return index(n[0], n[1], n[2]);
  }
  std::array<int, 3> unravel(std::size_t flat) const {
    const auto n2 = static_cast<std::size_t>(shape[2]);
    const auto n1 = static_cast<std::size_t>(shape[1]);
    std::array<int, 3> n;
    n[2] = static_cast<int>(flat % n2);
    n[1] = static_cast<int>((flat / n2) % n1);
    n[0] = static_cast<int>(flat / (n2 * n1));
    return n;
  }

  Vec3 node(int i, int j, int k) const {
    return origin + Vec3(i * spacing[0], j * spacing[1], k * spacing[2]);
  }
  Vec3 node(const std::array<int, 3>& n) const { return node(n[0], n[1], n[2]); }

  /// Cell volume restricted to the active axes.
  double cell_volume() const {
    double v = 1.0;
    for (int a = 0; a < 3; ++a)
      if (axis_active(a)) v *= spacing[static_cast<size_t>(a)];
    return v;
  }

  double extent(int a) const {
    return shape[static_cast<size_t>(a)] * spacing[static_cast<size_t>(a)];
  }

  bool operator==(const Grid&) const = default;
};

/// Complex six-component field sampled on a grid, together with the
/// semiclassical scale of its oscillation.  Components are ordered
/// (E1,E2,E3,H1,H2,H3).
struct FieldSnapshot {
  Grid grid;
  double epsilon_scale = 1.0;
  /// 6 x N column-major block, one column per grid node (row-major node
  /// ordering as in Grid::index).
  Eigen::Matrix<Complex, 6, Eigen::Dynamic> values;
  /// Optional smooth cutoff 0 <= theta <= 1 applied to the raw field,
  /// stored for provenance (values already include it).
  std::optional<std::vector<double>> cutoff;

  static FieldSnapshot zero(const Grid& g, double epsilon_scale);

  CVec6 at(const std::array<int, 3>& n) const {
    return values.col(static_cast<Eigen::Index>(grid.index(n)));
  }

  /// L2 norm including the active-axis cell volume.
  double l2_norm() const;

  /// Multiply the field in place by a scalar function of position and
  /// store it as the cutoff record.
  void apply_cutoff(const std::function<double(const Vec3&)>& theta);

  void require_compatible(const FieldSnapshot& other) const;
};

}  // namespace semimax
