#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "semimax/spectral.hpp"

namespace semimax {

/// Weighted particle of one scalar transport density.
struct RayState {
  Vec3 x = Vec3::Zero();
  Vec3 k = Vec3::Zero();
  Mode mode = Mode::plus1;  // transverse modes only
  double weight = 1.0;
  Region region = Region::whole_space;
  bool alive = true;
};

struct RayEnsemble {
  std::vector<RayState> rays;
  std::uint64_t seed = 0;
  double initial_mass = 0.0;

  static RayEnsemble of(std::vector<RayState> rays, std::uint64_t seed = 0);
};

/// Bicharacteristic right-hand side (dx/dt, dk/dt) = (grad_k w, -grad_x w)
/// for w = branch * v(x) |k|.
struct HamiltonianRhs {
  Vec3 dx;
  Vec3 dk;
};

HamiltonianRhs hamiltonian_rhs(const MediumModel& medium, const Vec3& x,
                               const Vec3& k, int branch,
                               double k_min = kDefaultWavevectorFloor);

/// Scalar event function; an event fires when the value crosses zero from
/// the positive side.  Detectors arm only once the value exceeds the
/// arming threshold, so rays may start on a boundary.
struct EventDetector {
  std::function<double(const Vec3&)> value;
  int id = 0;
  double arm_threshold = 1e-9;
};

struct RayEvent {
  int detector = -1;
  double t = 0.0;
  RayState state;
  bool location_failed = false;
};

struct IntegrationOptions {
  double dt = 1e-2;
  int max_steps = 1 << 20;
  bool record_trajectory = false;
  double event_tol = 1e-10;  // |detector value| at the located event
  int bisection_max_iter = 200;
};

struct IntegrationResult {
  RayState state;
  double t = 0.0;
  std::optional<RayEvent> event;  // first event hit, if any
  double omega_drift = 0.0;       // max |w(t) - w(0)| over accepted steps
  std::vector<std::pair<double, RayState>> trajectory;
};

/// Fixed-step RK4 along the bicharacteristics until t_final, a detector
/// event, or the step limit.  Events are located by bisecting the step.
IntegrationResult integrate_ray(const RayState& ray, const MediumModel& medium,
                                double t_final, const IntegrationOptions& opts,
                                std::span<const EventDetector> detectors = {});

/// One boundary-measure sample on (x', k').  branch records which shell
/// root k3 belongs to: alpha for k3 < 0 (k3^-), beta for k3 > 0 (k3^+).
enum class ShellBranch { alpha, beta };

struct BoundarySample {
  Eigen::Vector2d xp;
  Eigen::Vector2d kp;
  ShellBranch branch = ShellBranch::alpha;
  Mode mode = Mode::plus1;
  double weight = 0.0;  // raw ray weight
  double factor = 0.0;  // v k3 khat3 at the sample, stored alongside
};

struct BoundaryMeasure {
  std::string interface_id;
  std::vector<BoundarySample> samples;

  double total(ShellBranch b) const;
  double total() const;
};

/// Specular reflection at the flat conductor x3 = 0: k' kept, k3 negated,
/// full weight reflected.  Deposits one sample per involved shell branch
/// (incoming and outgoing).  The ray must arrive on shell; an evanescent
/// tangential part cannot occur and trips a logic error.
RayState reflect_flat(const RayState& ray, const MediumModel& medium,
                      double omega, BoundaryMeasure* nu = nullptr,
                      double shell_tol = 1e-6);

/// Transmission interface at x3 = 0 between two media.
struct CalderonResult {
  RayState reflected;
  std::optional<RayState> transmitted;
  bool evanescent = false;
  double transmitted_fraction = 0.0;  // capped at one
  double pairing_raw = 0.0;           // uncapped M-dyad pairing
  std::array<double, 2> mode_weights{};  // per target polarization
};

CalderonResult calderon_split(const RayState& ray, const MediumModel& exterior,
                              const MediumModel& interior, double omega,
                              BoundaryMeasure* nu_ext = nullptr,
                              BoundaryMeasure* nu_int = nullptr,
                              double shell_tol = 1e-6);

/// Flattening chart for the curved interface x3 = phi(x'):
/// (y, z) = (x', x3 - phi(x')) with the phase-preserving wave-vector map
/// k_y = k' + k3 grad(phi), k_z = k3.
class InterfaceChart {
 public:
  static InterfaceChart flat();
  explicit InterfaceChart(ScalarField phi);

  double height(const Eigen::Vector2d& xp) const;
  Eigen::Vector2d slope(const Eigen::Vector2d& xp) const;
  /// Unit upward normal of the interface at x'.
  Vec3 normal(const Eigen::Vector2d& xp) const;

  Vec3 flatten_position(const Vec3& x) const;
  Vec3 unflatten_position(const Vec3& yz) const;
  Vec3 flatten_wavevector(const Vec3& x, const Vec3& k) const;
  Vec3 unflatten_wavevector(const Vec3& yz, const Vec3& kt) const;

  /// Specular reflection in chart coordinates: k_y is conserved and k_z
  /// moves to the other root of the dispersion relation, which for a
  /// tilted plane reproduces the exact mirror reflection.
  Vec3 reflect_wavevector(const Vec3& x, const Vec3& k) const;

  /// Signed distance-like event value z = x3 - phi(x').
  double event_value(const Vec3& x) const;

 private:
  ScalarField phi_;
};

/// Curved-conductor reflection: position stays on the interface, the wave
/// vector reflects through the chart.  Deposits use chart coordinates.
RayState reflect_curved(const RayState& ray, const MediumModel& medium,
                        const InterfaceChart& chart, double omega,
                        BoundaryMeasure* nu = nullptr);

enum class ScenarioKind {
  free_space,
  half_space_conductor,
  calderon_interface,
  curved_interface,
};

struct TransportScenario {
  ScenarioKind kind = ScenarioKind::free_space;
  MediumModel exterior = MediumModel::homogeneous(1.0, 1.0);
  std::optional<MediumModel> interior;
  std::optional<InterfaceChart> chart;
  double omega = 1.0;
  Vec3 box_min = Vec3(-10, -10, -10);
  Vec3 box_max = Vec3(10, 10, 10);
  IntegrationOptions integration;
  int max_events_per_ray = 64;
};

struct MassBudget {
  double initial = 0.0;
  double alive = 0.0;
  double exited = 0.0;
  double lost = 0.0;
  double imbalance() const { return initial - alive - exited - lost; }
};

struct TransportResult {
  RayEnsemble ensemble;  // final states (alive flag cleared on exit)
  BoundaryMeasure boundary_exterior;
  BoundaryMeasure boundary_interior;
  MassBudget budget;
  std::size_t event_count = 0;
  std::size_t failed_locations = 0;
  double max_omega_drift = 0.0;
};

TransportResult transport_ensemble(const RayEnsemble& ensemble,
                                   const TransportScenario& scenario,
                                   double t_final, int threads = 0);

/// Uniform phase-space lattice over the active axes of x and k.
struct PhaseSpaceLattice {
  std::array<int, 3> xshape = {1, 1, 1};
  std::array<int, 3> kshape = {1, 1, 1};
  Vec3 xmin = Vec3::Zero();
  Vec3 kmin = Vec3::Zero();
  std::array<double, 3> dx = {1, 1, 1};
  std::array<double, 3> dk = {1, 1, 1};

  std::size_t cell_count() const {
    std::size_t n = 1;
    for (int a = 0; a < 3; ++a)
      n *= static_cast<std::size_t>(xshape[static_cast<size_t>(a)]) *
           static_cast<std::size_t>(kshape[static_cast<size_t>(a)]);
    return n;
  }
};

/// Cloud-in-cell deposition of ray weights onto the lattice, per mode.
struct BinnedDensity {
  PhaseSpaceLattice lattice;
  std::array<std::vector<double>, 6> mass{};  // indexed by Mode
  double out_of_range = 0.0;

  double total() const;
};

BinnedDensity bin_ensemble(const RayEnsemble& ensemble,
                           const PhaseSpaceLattice& lattice);

}  // namespace semimax
