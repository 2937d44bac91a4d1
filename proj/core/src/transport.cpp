#include "semimax/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "semimax/parallel.hpp"

namespace semimax {

RayEnsemble RayEnsemble::of(std::vector<RayState> rays, std::uint64_t seed) {
  RayEnsemble e;
  e.rays = std::move(rays);
  e.seed = seed;
  for (const auto& r : e.rays) {
    if (r.weight < 0.0)
      throw std::invalid_argument("RayEnsemble: negative ray weight");
    e.initial_mass += r.weight;
  }
  return e;
}

HamiltonianRhs hamiltonian_rhs(const MediumModel& medium, const Vec3& x,
                               const Vec3& k, int branch, double k_min) {
  if (branch != 1 && branch != -1)
    throw std::invalid_argument("hamiltonian_rhs: branch must be +1 or -1");
  const double kn = k.norm();
  if (!(kn >= k_min))
    throw std::domain_error("hamiltonian_rhs: |k| below floor");
  const double s = static_cast<double>(branch);
  const double v = medium.speed(x);
  return {s * v * (k / kn), (-s * kn) * medium.grad_speed(x)};
}

namespace {

struct Phase {
  Vec3 x, k;
};

Phase rk4_step(const MediumModel& medium, const Phase& p, int branch,
               double dt) {
  const auto f = [&](const Phase& q) {
    const auto rhs = hamiltonian_rhs(medium, q.x, q.k, branch);
    return Phase{rhs.dx, rhs.dk};
  };
  const Phase k1 = f(p);
  const Phase k2 = f({p.x + 0.5 * dt * k1.x, p.k + 0.5 * dt * k1.k});
  const Phase k3 = f({p.x + 0.5 * dt * k2.x, p.k + 0.5 * dt * k2.k});
  const Phase k4 = f({p.x + dt * k3.x, p.k + dt * k3.k});
  return {p.x + (dt / 6.0) * (k1.x + 2.0 * (k2.x + k3.x) + k4.x),
          p.k + (dt / 6.0) * (k1.k + 2.0 * (k2.k + k3.k) + k4.k)};
}

double omega_of(const MediumModel& medium, const Phase& p, int branch) {
  return branch * medium.speed(p.x) * p.k.norm();
}

}  // namespace

IntegrationResult integrate_ray(const RayState& ray, const MediumModel& medium,
                                double t_final, const IntegrationOptions& opts,
                                std::span<const EventDetector> detectors) {
  if (opts.dt <= 0.0) throw std::invalid_argument("integrate_ray: dt <= 0");
  const int branch = branch_sign(ray.mode);
  if (branch == 0)
    throw std::invalid_argument("integrate_ray: longitudinal modes do not propagate");

  IntegrationResult res;
  Phase p{ray.x, ray.k};
  double t = 0.0;
  const double omega0 = omega_of(medium, p, branch);

  std::vector<bool> armed(detectors.size());
  std::vector<double> value(detectors.size());
  for (std::size_t d = 0; d < detectors.size(); ++d) {
    value[d] = detectors[d].value(p.x);
    armed[d] = value[d] > detectors[d].arm_threshold;
  }
  if (opts.record_trajectory) res.trajectory.push_back({t, ray});

  auto snapshot = [&](const Phase& q) {
    RayState s = ray;
    s.x = q.x;
    s.k = q.k;
    return s;
  };

  for (int step = 0; step < opts.max_steps && t < t_final; ++step) {
    const double dt = std::min(opts.dt, t_final - t);
    const Phase next = rk4_step(medium, p, branch, dt);

    // detector bookkeeping: first crossing within this step wins
    int hit = -1;
    for (std::size_t d = 0; d < detectors.size(); ++d) {
      const double nv = detectors[d].value(next.x);
      if (armed[d] && value[d] > 0.0 && nv <= 0.0 && hit < 0)
        hit = static_cast<int>(d);
      if (!armed[d] && nv > detectors[d].arm_threshold) armed[d] = true;
      value[d] = nv;
    }

    if (hit >= 0) {
      // bisect the substep length until the detector value is resolved
      const auto& det = detectors[static_cast<size_t>(hit)];
      double lo = 0.0, hi = dt;
      Phase at = next;
      double val = det.value(at.x);
      int it = 0;
      for (; it < opts.bisection_max_iter && std::abs(val) > opts.event_tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        const Phase pm = rk4_step(medium, p, branch, mid);
        const double vm = det.value(pm.x);
        if (vm > 0.0)
          lo = mid;
        else
          hi = mid;
        at = pm;
        val = vm;
        if (hi - lo < 1e-300) break;  // step collapse
      }
      RayEvent ev;
      ev.detector = det.id;
      ev.t = t + hi;
      ev.state = snapshot(at);
      ev.location_failed = std::abs(val) > opts.event_tol;
      res.event = ev;
      res.state = ev.state;
      res.t = ev.t;
      res.omega_drift = std::max(
          res.omega_drift, std::abs(omega_of(medium, at, branch) - omega0));
      if (opts.record_trajectory) res.trajectory.push_back({ev.t, ev.state});
      return res;
    }

    p = next;
    t += dt;
    res.omega_drift =
        std::max(res.omega_drift, std::abs(omega_of(medium, p, branch) - omega0));
    if (opts.record_trajectory) res.trajectory.push_back({t, snapshot(p)});
  }

  res.state = snapshot(p);
  res.t = t;
  return res;
}

double BoundaryMeasure::total(ShellBranch b) const {
  double acc = 0.0;
  for (const auto& s : samples)
    if (s.branch == b) acc += s.weight;
  return acc;
}

double BoundaryMeasure::total() const {
  double acc = 0.0;
  for (const auto& s : samples) acc += s.weight;
  return acc;
}

namespace {

void deposit(BoundaryMeasure* nu, const Eigen::Vector2d& xp,
             const Eigen::Vector2d& kp, double k3, Mode mode, double weight,
             double v, double knorm) {
  if (!nu) return;
  BoundarySample s;
  s.xp = xp;
  s.kp = kp;
  s.branch = (k3 < 0.0) ? ShellBranch::alpha : ShellBranch::beta;
  s.mode = mode;
  s.weight = weight;
  s.factor = v * k3 * (k3 / knorm);  // v k3 khat3
  nu->samples.push_back(s);
}

}  // namespace

RayState reflect_flat(const RayState& ray, const MediumModel& medium,
                      double omega, BoundaryMeasure* nu, double shell_tol) {
  const Vec3& k = ray.k;
  const double v = medium.speed(ray.x);
  if (std::abs(v * k.norm() - omega) > shell_tol * omega)
    throw std::logic_error("reflect_flat: ray arrived off shell");
  const double disc = omega * omega / (v * v) - k.head<2>().squaredNorm();
  if (disc <= 0.0)
    throw std::logic_error("reflect_flat: evanescent tangential wave vector");

  const Eigen::Vector2d xp = ray.x.head<2>();
  const Eigen::Vector2d kp = k.head<2>();
  deposit(nu, xp, kp, k[2], ray.mode, ray.weight, v, k.norm());

  RayState out = ray;
  out.k[2] = -k[2];  // opposite-sign shell root, |k| preserved exactly
  deposit(nu, xp, kp, out.k[2], ray.mode, ray.weight, v, out.k.norm());
  return out;
}

CalderonResult calderon_split(const RayState& ray, const MediumModel& exterior,
                              const MediumModel& interior, double omega,
                              BoundaryMeasure* nu_ext, BoundaryMeasure* nu_int,
                              double shell_tol) {
  const bool from_exterior = ray.region != Region::interior;
  const MediumModel& src = from_exterior ? exterior : interior;
  const MediumModel& tgt = from_exterior ? interior : exterior;
  exterior.require_valid(ray.x);
  interior.require_valid(ray.x);

  const double v_src = src.speed(ray.x);
  if (std::abs(v_src * ray.k.norm() - omega) > shell_tol * omega)
    throw std::logic_error("calderon_split: ray arrived off shell");

  const int branch = branch_sign(ray.mode);
  const Eigen::Vector2d xp = ray.x.head<2>();
  const Eigen::Vector2d kp = ray.k.head<2>();

  CalderonResult res;
  res.reflected = ray;
  res.reflected.k[2] = -ray.k[2];

  BoundaryMeasure* nu_src = from_exterior ? nu_ext : nu_int;
  BoundaryMeasure* nu_tgt = from_exterior ? nu_int : nu_ext;
  deposit(nu_src, xp, kp, ray.k[2], ray.mode, ray.weight, v_src, ray.k.norm());

  const double v_tgt = tgt.speed(ray.x);
  const double disc = omega * omega / (v_tgt * v_tgt) - kp.squaredNorm();
  if (disc <= 0.0) {
    // total internal reflection: all mass stays
    res.evanescent = true;
    deposit(nu_src, xp, kp, res.reflected.k[2], ray.mode, ray.weight, v_src,
            res.reflected.k.norm());
    return res;
  }

  // transmitted normal component, oriented away from the interface
  const double away = from_exterior ? -1.0 : 1.0;  // sign of dx3/dt
  const double k3t = away * branch * std::sqrt(disc);
  const Vec3 kt(kp[0], kp[1], k3t);

  // weight split through the tangential projector M: expand M (b x b*) M
  // in the target-side duals of the transmitted branch
  static const Mat6& m = maxwell::tangential_projector();
  // idempotence, checked where it is used
  if ((m * m - m).norm() != 0.0)
    throw std::logic_error("calderon_split: projector not idempotent");

  const EigenSystem es_src = eigensystem(src, ray.x, ray.k);
  const EigenSystem es_tgt = eigensystem(tgt, ray.x, kt);
  const Vec6 mb = m * es_src.basis(ray.mode);

  const Mode target_modes[2] = {
      branch > 0 ? Mode::plus1 : Mode::minus1,
      branch > 0 ? Mode::plus2 : Mode::minus2,
  };
  double tau = 0.0;
  for (int i = 0; i < 2; ++i) {
    const double c = mb.dot(es_tgt.dual(target_modes[i]));
    res.mode_weights[static_cast<size_t>(i)] = c * c;
    tau += c * c;
  }
  // The dyad pairing is a boundary-trace quantity; for strongly mismatched
  // media it can exceed one.  Weights stay conservative: the raw pairing is
  // reported, the transmitted share is capped so the complement is valid.
  res.pairing_raw = tau;
  tau = std::min(tau, 1.0);
  res.transmitted_fraction = tau;

  res.reflected.weight = ray.weight * (1.0 - tau);
  deposit(nu_src, xp, kp, res.reflected.k[2], ray.mode, res.reflected.weight,
          v_src, res.reflected.k.norm());

  RayState trans = ray;
  trans.k = kt;
  trans.weight = ray.weight * tau;
  trans.region = from_exterior ? Region::interior : Region::exterior;
  // label keeps the polarization index on the transmitted branch
  trans.mode = polarization_index(ray.mode) == 1 ? target_modes[0] : target_modes[1];
  for (int i = 0; i < 2; ++i)
    deposit(nu_tgt, xp, kp, k3t, target_modes[static_cast<size_t>(i)],
            ray.weight * res.mode_weights[static_cast<size_t>(i)], v_tgt, kt.norm());
  res.transmitted = trans;
  return res;
}

InterfaceChart InterfaceChart::flat() {
  return InterfaceChart(ScalarField::constant(0.0));
}

InterfaceChart::InterfaceChart(ScalarField phi) : phi_(std::move(phi)) {
  if (!phi_.valid()) throw std::invalid_argument("InterfaceChart: missing phi");
}

double InterfaceChart::height(const Eigen::Vector2d& xp) const {
  return phi_(Vec3(xp[0], xp[1], 0.0));
}

Eigen::Vector2d InterfaceChart::slope(const Eigen::Vector2d& xp) const {
  return phi_.gradient(Vec3(xp[0], xp[1], 0.0)).head<2>();
}

Vec3 InterfaceChart::normal(const Eigen::Vector2d& xp) const {
  const Eigen::Vector2d g = slope(xp);
  Vec3 n(-g[0], -g[1], 1.0);
  return n / n.norm();
}

Vec3 InterfaceChart::flatten_position(const Vec3& x) const {
  return Vec3(x[0], x[1], x[2] - height(x.head<2>()));
}

Vec3 InterfaceChart::unflatten_position(const Vec3& yz) const {
  return Vec3(yz[0], yz[1], yz[2] + height(yz.head<2>()));
}

Vec3 InterfaceChart::flatten_wavevector(const Vec3& x, const Vec3& k) const {
  const Eigen::Vector2d g = slope(x.head<2>());
  return Vec3(k[0] + k[2] * g[0], k[1] + k[2] * g[1], k[2]);
}

Vec3 InterfaceChart::unflatten_wavevector(const Vec3& yz, const Vec3& kt) const {
  const Eigen::Vector2d g = slope(yz.head<2>());
  return Vec3(kt[0] - kt[2] * g[0], kt[1] - kt[2] * g[1], kt[2]);
}

Vec3 InterfaceChart::reflect_wavevector(const Vec3& x, const Vec3& k) const {
  const Eigen::Vector2d g = slope(x.head<2>());
  const Vec3 kt = flatten_wavevector(x, k);
  // second root of (1+|g|^2) kz^2 - 2 (ky.g) kz + |ky|^2 - w^2/v^2 = 0
  // with ky fixed; by Vieta the roots sum to 2 (ky.g)/(1+|g|^2)
  const double kz_out =
      2.0 * (kt[0] * g[0] + kt[1] * g[1]) / (1.0 + g.squaredNorm()) - kt[2];
  const Vec3 kt_out(kt[0], kt[1], kz_out);
  return unflatten_wavevector(flatten_position(x), kt_out);
}

double InterfaceChart::event_value(const Vec3& x) const {
  return x[2] - height(x.head<2>());
}

RayState reflect_curved(const RayState& ray, const MediumModel& medium,
                        const InterfaceChart& chart, double omega,
                        BoundaryMeasure* nu) {
  const double v = medium.speed(ray.x);
  const Vec3 yz = chart.flatten_position(ray.x);
  const Vec3 kt_in = chart.flatten_wavevector(ray.x, ray.k);

  RayState out = ray;
  out.k = chart.reflect_wavevector(ray.x, ray.k);
  const Vec3 kt_out = chart.flatten_wavevector(out.x, out.k);

  if (nu) {
    deposit(nu, yz.head<2>(), kt_in.head<2>(), kt_in[2], ray.mode, ray.weight,
            v, kt_in.norm());
    deposit(nu, yz.head<2>(), kt_out.head<2>(), kt_out[2], ray.mode,
            ray.weight, v, kt_out.norm());
  }
  (void)omega;
  return out;
}

namespace {

struct RayOutcome {
  std::vector<RayState> finals;
  BoundaryMeasure nu_ext;
  BoundaryMeasure nu_int;
  double alive = 0.0, exited = 0.0, lost = 0.0;
  std::size_t events = 0;
  std::size_t failures = 0;
  double drift = 0.0;
};

// Advance one seed ray (plus any transmitted descendants) to t_final.
RayOutcome advance_ray(RayState seed, const TransportScenario& sc,
                       double t_final) {
  RayOutcome out;
  std::vector<std::pair<RayState, double>> work;  // (ray, time already used)
  work.emplace_back(seed, 0.0);

  while (!work.empty()) {
    auto [ray, t0] = work.back();
    work.pop_back();
    int events_left = sc.max_events_per_ray;
    double t = t0;

    while (true) {
      const MediumModel& medium =
          (ray.region == Region::interior && sc.interior) ? *sc.interior
                                                          : sc.exterior;

      std::vector<EventDetector> detectors;
      // 0: domain box exit, positive inside
      detectors.push_back(EventDetector{
          [&sc](const Vec3& x) {
            double d = std::numeric_limits<double>::infinity();
            for (int a = 0; a < 3; ++a)
              d = std::min({d, x[a] - sc.box_min[a], sc.box_max[a] - x[a]});
            return d;
          },
          0, 1e-9});
      // 1: interface, positive on the ray's side
      if (sc.kind == ScenarioKind::half_space_conductor ||
          sc.kind == ScenarioKind::calderon_interface) {
        const double side = (ray.region == Region::interior) ? -1.0 : 1.0;
        detectors.push_back(
            EventDetector{[side](const Vec3& x) { return side * x[2]; }, 1, 1e-9});
      } else if (sc.kind == ScenarioKind::curved_interface) {
        const InterfaceChart& chart = *sc.chart;
        detectors.push_back(EventDetector{
            [&chart](const Vec3& x) { return chart.event_value(x); }, 1, 1e-9});
      }

      const auto res =
          integrate_ray(ray, medium, t_final - t, sc.integration, detectors);
      out.drift = std::max(out.drift, res.omega_drift);
      t += res.t;

      if (!res.event) {
        // reached t_final inside the domain
        ray = res.state;
        ray.alive = true;
        out.alive += ray.weight;
        out.finals.push_back(ray);
        break;
      }

      if (res.event->detector == 1) ++out.events;  // interface events only
      if (res.event->location_failed) {
        ++out.failures;
        RayState dead = res.event->state;
        dead.alive = false;
        out.lost += dead.weight;
        out.finals.push_back(dead);
        break;
      }

      if (res.event->detector == 0) {
        // left the computational box
        RayState gone = res.event->state;
        gone.alive = false;
        out.exited += gone.weight;
        out.finals.push_back(gone);
        break;
      }

      // interface event
      ray = res.event->state;
      if (--events_left < 0) {
        ray.alive = false;
        out.lost += ray.weight;
        out.finals.push_back(ray);
        ++out.failures;
        break;
      }
      if (sc.kind == ScenarioKind::half_space_conductor) {
        ray = reflect_flat(ray, sc.exterior, sc.omega, &out.nu_ext);
      } else if (sc.kind == ScenarioKind::curved_interface) {
        ray = reflect_curved(ray, sc.exterior, *sc.chart, sc.omega, &out.nu_ext);
      } else {
        const auto split = calderon_split(ray, sc.exterior, *sc.interior,
                                          sc.omega, &out.nu_ext, &out.nu_int);
        if (split.transmitted && split.transmitted->weight > 0.0)
          work.emplace_back(*split.transmitted, t);
        ray = split.reflected;
        if (ray.weight == 0.0) {
          ray.alive = false;
          out.finals.push_back(ray);
          break;
        }
      }
    }
  }
  return out;
}

}  // namespace

TransportResult transport_ensemble(const RayEnsemble& ensemble,
                                   const TransportScenario& scenario,
                                   double t_final, int threads) {
  if (scenario.kind == ScenarioKind::calderon_interface && !scenario.interior)
    throw std::invalid_argument("transport_ensemble: missing interior medium");
  if (scenario.kind == ScenarioKind::curved_interface && !scenario.chart)
    throw std::invalid_argument("transport_ensemble: missing interface chart");

  std::vector<RayOutcome> outcomes(ensemble.rays.size());
  parallel_for(ensemble.rays.size(), threads, [&](std::size_t i) {
    outcomes[i] = advance_ray(ensemble.rays[i], scenario, t_final);
  });

  TransportResult res;
  res.budget.initial = ensemble.initial_mass;
  res.ensemble.seed = ensemble.seed;
  res.boundary_exterior.interface_id = "x3=0";
  res.boundary_interior.interface_id = "x3=0";
  for (auto& o : outcomes) {
    res.budget.alive += o.alive;
    res.budget.exited += o.exited;
    res.budget.lost += o.lost;
    res.event_count += o.events;
    res.failed_locations += o.failures;
    res.max_omega_drift = std::max(res.max_omega_drift, o.drift);
    for (auto& r : o.finals) res.ensemble.rays.push_back(r);
    for (auto& s : o.nu_ext.samples) res.boundary_exterior.samples.push_back(s);
    for (auto& s : o.nu_int.samples) res.boundary_interior.samples.push_back(s);
  }
  res.ensemble.initial_mass = ensemble.initial_mass;
  return res;
}

double BinnedDensity::total() const {
  double acc = out_of_range;
  for (const auto& m : mass)
    for (double v : m) acc += v;
  return acc;
}

BinnedDensity bin_ensemble(const RayEnsemble& ensemble,
                           const PhaseSpaceLattice& lattice) {
  BinnedDensity out;
  out.lattice = lattice;
  const std::size_t cells = lattice.cell_count();
  for (auto& m : out.mass) m.assign(cells, 0.0);

  // per-axis CIC weights for the six lattice axes (x then k)
  struct AxisDep {
    int lo = 0;
    double w_lo = 1.0;  // rest goes to lo+1
    bool active = false;
  };

  auto axis_dep = [](double coord, double lo, double step, int n, bool& ok) {
    AxisDep d;
    if (n <= 1) return d;  // inactive axis
    d.active = true;
    const double u = (coord - lo) / step - 0.5;  // cell-centered
    const double fl = std::floor(u);
    d.lo = static_cast<int>(fl);
    d.w_lo = 1.0 - (u - fl);
    if (d.lo < -1 || d.lo > n - 1) ok = false;
    return d;
  };

  for (const auto& ray : ensemble.rays) {
    bool ok = true;
    std::array<AxisDep, 6> dep;
    for (int a = 0; a < 3; ++a) {
      const auto ua = static_cast<size_t>(a);
      dep[ua] = axis_dep(ray.x[a], lattice.xmin[a], lattice.dx[ua],
                         lattice.xshape[ua], ok);
      dep[ua + 3] = axis_dep(ray.k[a], lattice.kmin[a], lattice.dk[ua],
                             lattice.kshape[ua], ok);
    }
    if (!ok) {
      out.out_of_range += ray.weight;
      continue;
    }
    auto& target = out.mass[static_cast<size_t>(mode_index(ray.mode))];

    // distribute over the corner set; clip partial weight at lattice edges
    std::array<int, 6> shapes = {lattice.xshape[0], lattice.xshape[1],
                                 lattice.xshape[2], lattice.kshape[0],
                                 lattice.kshape[1], lattice.kshape[2]};
    double clipped = 0.0;
    const int corners = 1 << 6;
    for (int c = 0; c < corners; ++c) {
      double w = ray.weight;
      std::size_t idx = 0;
      bool inside = true;
      bool skip = false;
      for (int ax = 0; ax < 6; ++ax) {
        const auto ua = static_cast<size_t>(ax);
        const int hi_bit = (c >> ax) & 1;
        int cell = 0;
        double ww = 1.0;
        if (dep[ua].active) {
          cell = dep[ua].lo + hi_bit;
          ww = hi_bit ? (1.0 - dep[ua].w_lo) : dep[ua].w_lo;
        } else if (hi_bit) {
          skip = true;  // inactive axes contribute one corner only
          break;
        }
        if (ww == 0.0) {
          skip = true;
          break;
        }
        if (cell < 0 || cell >= shapes[ua]) inside = false;
        idx = idx * static_cast<std::size_t>(shapes[ua]) +
              static_cast<std::size_t>(std::clamp(cell, 0, shapes[ua] - 1));
        w *= ww;
      }
      if (skip) continue;
      if (!inside) {
        clipped += w;
        continue;
      }
      target[idx] += w;
    }
    out.out_of_range += clipped;
  }
  return out;
}

}  // namespace semimax
