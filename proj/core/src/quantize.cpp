#include "semimax/quantize.hpp"

#include <climits>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "semimax/fft.hpp"

namespace semimax {

namespace {
constexpr double kPi = std::numbers::pi;

void require_periodic(const Grid& g, const char* who) {
  for (int a = 0; a < 3; ++a)
    if (g.axis_active(a) && !g.periodic[static_cast<size_t>(a)])
      throw std::invalid_argument(std::string(who) +
                                  ": grid must be periodic on active axes");
}

double checked(double v, const char* who) {
  if (!std::isfinite(v))
    throw std::domain_error(std::string(who) + ": symbol returned non-finite value");
  return v;
}

// Absolute wavenumber of FFT bin n on axis a.
double kappa_of_bin(const Grid& g, int axis, int bin) {
  const int n = g.shape[static_cast<size_t>(axis)];
  return 2.0 * kPi * fft::signed_index(bin, n) / (n * g.spacing[static_cast<size_t>(axis)]);
}

using Block = Eigen::Matrix<Complex, 6, Eigen::Dynamic>;

Block forward_fft(const FieldSnapshot& f) {
  Block spec = f.values;
  std::vector<Complex> buf(f.grid.size());
  for (int c = 0; c < 6; ++c) {
    for (std::size_t i = 0; i < f.grid.size(); ++i)
      buf[i] = spec(c, static_cast<Eigen::Index>(i));
    fft::transform(buf.data(), f.grid.shape, -1);
    for (std::size_t i = 0; i < f.grid.size(); ++i)
      spec(c, static_cast<Eigen::Index>(i)) = buf[i];
  }
  return spec;
}

void inverse_fft_normalized(Block& spec, const Grid& g) {
  std::vector<Complex> buf(g.size());
  const double inv = 1.0 / static_cast<double>(g.size());
  for (int c = 0; c < 6; ++c) {
    for (std::size_t i = 0; i < g.size(); ++i)
      buf[i] = spec(c, static_cast<Eigen::Index>(i));
    fft::transform(buf.data(), g.shape, +1);
    for (std::size_t i = 0; i < g.size(); ++i)
      spec(c, static_cast<Eigen::Index>(i)) = buf[i] * inv;
  }
}

}  // namespace

Symbol Symbol::constant(double c) {
  Symbol s;
  s.eval = [c](const Vec3&, const Vec3&) { return c; };
  s.grad_x = [](const Vec3&, const Vec3&) { return Vec3::Zero().eval(); };
  s.grad_k = [](const Vec3&, const Vec3&) { return Vec3::Zero().eval(); };
  s.depends_on_x = false;
  s.depends_on_k = false;
  return s;
}

Symbol Symbol::of_x(std::function<double(const Vec3&)> f,
                    std::function<Vec3(const Vec3&)> grad) {
  Symbol s;
  s.eval = [f = std::move(f)](const Vec3& x, const Vec3&) { return f(x); };
  if (grad)
    s.grad_x = [grad = std::move(grad)](const Vec3& x, const Vec3&) {
      return grad(x);
    };
  s.grad_k = [](const Vec3&, const Vec3&) { return Vec3::Zero().eval(); };
  s.depends_on_k = false;
  return s;
}

Symbol Symbol::of_k(std::function<double(const Vec3&)> f,
                    std::function<Vec3(const Vec3&)> grad) {
  Symbol s;
  s.eval = [f = std::move(f)](const Vec3&, const Vec3& k) { return f(k); };
  if (grad)
    s.grad_k = [grad = std::move(grad)](const Vec3&, const Vec3& k) {
      return grad(k);
    };
  s.grad_x = [](const Vec3&, const Vec3&) { return Vec3::Zero().eval(); };
  s.depends_on_x = false;
  return s;
}

Symbol Symbol::wavenumber(int axis) {
  Symbol s = of_k([axis](const Vec3& k) { return k[axis]; },
                  [axis](const Vec3&) {
                    Vec3 g = Vec3::Zero();
                    g[axis] = 1.0;
                    return g;
                  });
  return s;
}

Symbol Symbol::product(const Symbol& a, const Symbol& b) {
  Symbol s;
  s.eval = [ae = a.eval, be = b.eval](const Vec3& x, const Vec3& k) {
    return ae(x, k) * be(x, k);
  };
  if (a.has_gradients() && b.has_gradients()) {
    s.grad_x = [a, b](const Vec3& x, const Vec3& k) {
      return (a.grad_x(x, k) * b.eval(x, k) + b.grad_x(x, k) * a.eval(x, k)).eval();
    };
    s.grad_k = [a, b](const Vec3& x, const Vec3& k) {
      return (a.grad_k(x, k) * b.eval(x, k) + b.grad_k(x, k) * a.eval(x, k)).eval();
    };
  }
  s.depends_on_x = a.depends_on_x || b.depends_on_x;
  s.depends_on_k = a.depends_on_k || b.depends_on_k;
  return s;
}

Symbol Symbol::gradient_contraction(const Symbol& b, const Symbol& a) {
  if (!a.has_gradients() || !b.has_gradients())
    throw std::invalid_argument("gradient_contraction: symbols need gradients");
  Symbol s;
  s.eval = [b, a](const Vec3& x, const Vec3& k) {
    return b.grad_k(x, k).dot(a.grad_x(x, k));
  };
  s.depends_on_x = true;
  s.depends_on_k = true;
  return s;
}

double commuting_class_violation(const MatrixSymbol& a,
                                 const MediumModel& medium, double omega,
                                 std::span<const Vec3> xs,
                                 std::span<const Vec3> ks) {
  double worst = 0.0;
  for (const Vec3& x : xs)
    for (const Vec3& k : ks) {
      const Mat6 l = dispersion_matrix(medium, x, k);
      const Mat6 at = a.eval(x, k);
      const Mat6 lhs = at * (l - omega * Mat6::Identity());
      const Mat6 rhs = (l.transpose() - omega * Mat6::Identity()) * at;
      worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
    }
  return worst;
}

FieldSnapshot apply_pdo(const Symbol& a, const FieldSnapshot& field) {
  const Grid& g = field.grid;
  require_periodic(g, "apply_pdo");
  const double eps = field.epsilon_scale;

  FieldSnapshot out = field;

  if (!a.depends_on_k) {
    for (std::size_t i = 0; i < g.size(); ++i)
      out.values.col(static_cast<Eigen::Index>(i)) *=
          checked(a.eval(g.node(g.unravel(i)), Vec3::Zero()), "apply_pdo");
    return out;
  }

  Block spec = forward_fft(field);

  if (!a.depends_on_x) {
    for (std::size_t n = 0; n < g.size(); ++n) {
      const auto bins = g.unravel(n);
      const Vec3 kk(kappa_of_bin(g, 0, bins[0]), kappa_of_bin(g, 1, bins[1]),
                    kappa_of_bin(g, 2, bins[2]));
      spec.col(static_cast<Eigen::Index>(n)) *=
          checked(a.eval(Vec3::Zero(), eps * kk), "apply_pdo");
    }
    inverse_fft_normalized(spec, g);
    out.values = spec;
    return out;
  }

  // Mixed symbol: direct double sum (per-x evaluation after a full FFT).
  // Separable phase tables keep the inner loop cheap.
  const std::array<int, 3> shape = g.shape;
  std::array<std::vector<Complex>, 3> phase;
  std::array<std::vector<double>, 3> kap;
  for (int axis = 0; axis < 3; ++axis) {
    const int n = shape[static_cast<size_t>(axis)];
    phase[static_cast<size_t>(axis)].resize(static_cast<size_t>(n) * static_cast<size_t>(n));
    kap[static_cast<size_t>(axis)].resize(static_cast<size_t>(n));
    for (int bin = 0; bin < n; ++bin)
      kap[static_cast<size_t>(axis)][static_cast<size_t>(bin)] = kappa_of_bin(g, axis, bin);
    for (int i = 0; i < n; ++i)
      for (int bin = 0; bin < n; ++bin)
        phase[static_cast<size_t>(axis)][static_cast<size_t>(i * n + bin)] =
            std::exp(Complex(0.0, 2.0 * kPi * i * bin / double(n)));
  }

  const double inv = 1.0 / static_cast<double>(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto xi = g.unravel(i);
    const Vec3 x = g.node(xi);
    CVec6 acc = CVec6::Zero();
    for (std::size_t n = 0; n < g.size(); ++n) {
      const auto bins = g.unravel(n);
      const Vec3 kk(kap[0][static_cast<size_t>(bins[0])], kap[1][static_cast<size_t>(bins[1])],
                    kap[2][static_cast<size_t>(bins[2])]);
      const double av = checked(a.eval(x, eps * kk), "apply_pdo");
      if (av == 0.0) continue;
      const Complex ph = phase[0][static_cast<size_t>(xi[0] * shape[0] + bins[0])] *
                         phase[1][static_cast<size_t>(xi[1] * shape[1] + bins[1])] *
                         phase[2][static_cast<size_t>(xi[2] * shape[2] + bins[2])];
      acc += (av * ph) * spec.col(static_cast<Eigen::Index>(n));
    }
    out.values.col(static_cast<Eigen::Index>(i)) = inv * acc;
  }
  return out;
}

FieldSnapshot apply_weyl(const Symbol& a, const FieldSnapshot& field) {
  const Grid& g = field.grid;
  require_periodic(g, "apply_weyl");
  const double eps = field.epsilon_scale;
  const std::size_t total = g.size();
  if (total > 4096)
    throw std::invalid_argument(
        "apply_weyl: direct kernel quadrature is limited to small grids");

  FieldSnapshot out = field;
  const double inv = 1.0 / static_cast<double>(total);

  std::vector<Vec3> nodes(total);
  for (std::size_t i = 0; i < total; ++i) nodes[i] = g.node(g.unravel(i));
  std::vector<Vec3> kappas(total);
  for (std::size_t n = 0; n < total; ++n) {
    const auto bins = g.unravel(n);
    kappas[n] = Vec3(kappa_of_bin(g, 0, bins[0]), kappa_of_bin(g, 1, bins[1]),
                     kappa_of_bin(g, 2, bins[2]));
  }

  for (std::size_t i = 0; i < total; ++i) {
    CVec6 acc = CVec6::Zero();
    for (std::size_t j = 0; j < total; ++j) {
      const Vec3 mid = 0.5 * (nodes[i] + nodes[j]);
      const Vec3 diff = nodes[i] - nodes[j];
      Complex kernel(0.0, 0.0);
      for (std::size_t n = 0; n < total; ++n) {
        const double av = checked(a.eval(mid, eps * kappas[n]), "apply_weyl");
        if (av == 0.0) continue;
        kernel += av * std::exp(Complex(0.0, diff.dot(kappas[n])));
      }
      acc += kernel * field.values.col(static_cast<Eigen::Index>(j));
    }
    out.values.col(static_cast<Eigen::Index>(i)) = inv * acc;
  }
  return out;
}

RemainderReport product_remainder(const Symbol& a, const Symbol& b,
                                  const FieldSnapshot& field,
                                  std::span<const double> epsilons) {
  if (!a.has_gradients() || !b.has_gradients())
    throw std::invalid_argument("product_remainder: symbols need gradients");
  const Symbol ba = Symbol::product(b, a);
  const Symbol poisson = Symbol::gradient_contraction(b, a);

  RemainderReport rep;
  const double fnorm = field.l2_norm();
  for (const double eps : epsilons) {
    FieldSnapshot f = field;
    f.epsilon_scale = eps;
    const FieldSnapshot composed = apply_pdo(b, apply_pdo(a, f));
    const FieldSnapshot direct = apply_pdo(ba, f);
    const FieldSnapshot corr = apply_pdo(poisson, f);
    // R = b_eps a_eps f - (ba)_eps f - (eps/i) (grad_k b . grad_x a)_eps f
    Eigen::Matrix<Complex, 6, Eigen::Dynamic> r =
        composed.values - direct.values -
        (eps / Complex(0.0, 1.0)) * corr.values;
    rep.epsilons.push_back(eps);
    rep.relative_norms.push_back(r.norm() * std::sqrt(field.grid.cell_volume()) /
                                 fnorm);
  }
  rep.fitted_order = fitted_order(rep.epsilons, rep.relative_norms);
  return rep;
}

double fitted_order(std::span<const double> x, std::span<const double> y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (y[i] <= 0.0) continue;  // exact zeros carry no slope information
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) return std::numeric_limits<double>::infinity();
  const double dn = static_cast<double>(n);
  return (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
}

DualityPairing duality_pairing(const Symbol& a, const FieldSnapshot& field) {
  const Grid& g = field.grid;
  require_periodic(g, "duality_pairing");

  // Full-width rectangular window; probes at every node.
  int m = INT_MAX;
  for (int axis = 0; axis < 3; ++axis)
    if (g.axis_active(axis))
      m = std::min(m, (g.shape[static_cast<size_t>(axis)] - 1) / 2);
  if (m == INT_MAX)
    throw std::invalid_argument("duality_pairing: no active axes");
  const WindowSpec win{m, 0.0};

  const auto w = wigner_transform(field, all_probes(g, win), win,
                                  {.validate_resolution = false});

  Complex lhs(0.0, 0.0);
  const double cell = g.cell_volume() * w.dk_volume();
  for (std::size_t p = 0; p < w.probes.size(); ++p)
    for (std::size_t n = 0; n < w.kcount(); ++n) {
      const double av = checked(a.eval(w.probes[p], w.wavevector(n)),
                                "duality_pairing");
      if (av == 0.0) continue;
      lhs += av * w.at(p, n).trace() * cell;
    }

  const FieldSnapshot af = apply_weyl(a, field);
  Complex rhs(0.0, 0.0);
  for (std::size_t i = 0; i < g.size(); ++i)
    rhs += field.values.col(static_cast<Eigen::Index>(i))
               .dot(af.values.col(static_cast<Eigen::Index>(i)));
  rhs *= g.cell_volume();

  return {lhs, rhs, std::abs(lhs - rhs)};
}

double SymbolDecomposition::reconstruct(const Vec3& k) const {
  const Eigen::Vector2d kp(k[0], k[1]);
  return a0(kp) + a1(kp) * k[2] + a2(k) * (speed_ * k.norm() - omega);
}

SymbolDecomposition decompose_symbol(const Symbol& a, const MediumModel& medium,
                                     double omega, const Vec3& x,
                                     double guard_rel) {
  if (omega <= 0.0)
    throw std::invalid_argument("decompose_symbol: omega must be positive");
  const double v = medium.speed(x);

  SymbolDecomposition dec;
  dec.omega = omega;
  dec.guard = guard_rel;
  dec.speed_ = v;
  dec.raw_ = [a, x](const Vec3& k) { return a.eval(x, k); };

  auto root = [v, omega](const Eigen::Vector2d& kp) {
    const double disc = omega * omega / (v * v) - kp.squaredNorm();
    if (disc <= 0.0)
      throw std::domain_error(
          "decompose_symbol: evanescent region |k'| >= omega/v");
    return std::sqrt(disc);
  };

  auto raw = dec.raw_;
  dec.a0 = [raw, root](const Eigen::Vector2d& kp) {
    const double k3 = root(kp);
    return 0.5 * (raw(Vec3(kp[0], kp[1], k3)) + raw(Vec3(kp[0], kp[1], -k3)));
  };
  dec.a1 = [raw, root](const Eigen::Vector2d& kp) {
    const double k3 = root(kp);
    return (raw(Vec3(kp[0], kp[1], k3)) - raw(Vec3(kp[0], kp[1], -k3))) /
           (2.0 * k3);
  };

  const auto a0 = dec.a0;
  const auto a1 = dec.a1;
  dec.a2 = [raw, a0, a1, v, omega, guard_rel](const Vec3& k) {
    const Eigen::Vector2d kp(k[0], k[1]);
    auto quotient = [&](double k3) {
      const Vec3 kk(kp[0], kp[1], k3);
      return (raw(kk) - a0(kp) - a1(kp) * k3) / (v * kk.norm() - omega);
    };
    const double s = v * k.norm() - omega;
    if (std::abs(s) >= guard_rel * omega) return quotient(k[2]);

    // Inside the guard band: one-sided quadratic extrapolation along k3
    // from samples beyond the band edge.
    const double disc = omega * omega / (v * v) - kp.squaredNorm();
    if (disc <= 0.0)
      throw std::domain_error("decompose_symbol: evanescent region");
    const double r = (k[2] >= 0.0 ? 1.0 : -1.0) * std::sqrt(disc);
    if (std::abs(r) < 1e-8 * omega / v)
      throw std::domain_error(
          "decompose_symbol: glancing shell, extrapolation ill-posed");
    const double side = (k[2] - r) >= 0.0 ? 1.0 : -1.0;
    // |d(v|k|)/dk3| = v |r| / |k*|; step past the guard edge
    const Vec3 kstar(kp[0], kp[1], r);
    const double slope = v * std::abs(r) / kstar.norm();
    const double delta = 2.0 * guard_rel * omega / slope;
    const double t1 = r + side * delta;
    const double t2 = r + side * 2.0 * delta;
    const double t3 = r + side * 3.0 * delta;
    const double f1 = quotient(t1), f2 = quotient(t2), f3 = quotient(t3);
    // Lagrange extrapolation to k3
    const double u = k[2];
    return f1 * (u - t2) * (u - t3) / ((t1 - t2) * (t1 - t3)) +
           f2 * (u - t1) * (u - t3) / ((t2 - t1) * (t2 - t3)) +
           f3 * (u - t1) * (u - t2) / ((t3 - t1) * (t3 - t2));
  };
  return dec;
}

double sobolev_norm(const FieldSnapshot& field, double s) {
  const Grid& g = field.grid;
  require_periodic(g, "sobolev_norm");
  const double eps = field.epsilon_scale;
  Block spec = forward_fft(field);
  double acc = 0.0;
  for (std::size_t n = 0; n < g.size(); ++n) {
    const auto bins = g.unravel(n);
    const Vec3 kk(kappa_of_bin(g, 0, bins[0]), kappa_of_bin(g, 1, bins[1]),
                  kappa_of_bin(g, 2, bins[2]));
    const double mult = std::pow(1.0 + (eps * kk).squaredNorm(), s);
    acc += mult * spec.col(static_cast<Eigen::Index>(n)).squaredNorm();
  }
  // normalized so s = 0 reproduces the L2 norm
  return std::sqrt(acc * g.cell_volume() / static_cast<double>(g.size()));
}

}  // namespace semimax
