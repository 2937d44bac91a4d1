#include "semimax/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace semimax {

FieldSnapshot FieldSnapshot::zero(const Grid& g, double epsilon_scale) {
  if (epsilon_scale <= 0.0)
    throw std::invalid_argument("FieldSnapshot: epsilon_scale must be > 0");
  for (int a = 0; a < 3; ++a)
    if (g.shape[static_cast<size_t>(a)] < 1 || g.spacing[static_cast<size_t>(a)] <= 0.0)
      throw std::invalid_argument("FieldSnapshot: bad grid");
  FieldSnapshot f;
  f.grid = g;
  f.epsilon_scale = epsilon_scale;
  f.values = Eigen::Matrix<Complex, 6, Eigen::Dynamic>::Zero(
      6, static_cast<Eigen::Index>(g.size()));
  return f;
}

double FieldSnapshot::l2_norm() const {
  return values.norm() * std::sqrt(grid.cell_volume());
}

void FieldSnapshot::apply_cutoff(const std::function<double(const Vec3&)>& theta) {
  std::vector<double> record(grid.size());
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const double t = theta(grid.node(grid.unravel(p)));
    record[p] = t;
    values.col(static_cast<Eigen::Index>(p)) *= t;
  }
  cutoff = std::move(record);
}

void FieldSnapshot::require_compatible(const FieldSnapshot& other) const {
  if (!(grid == other.grid) || epsilon_scale != other.epsilon_scale)
    throw std::invalid_argument("FieldSnapshot: mismatched grids");
}

}  // namespace semimax
