#include "semimax/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstring>
#include <numbers>
#include <random>

#include "semimax/expr.hpp"
#include "semimax/io.hpp"
#include "semimax/quantize.hpp"
#include "semimax/synthesis.hpp"

namespace semimax {

namespace {

constexpr double kPi = std::numbers::pi;

double tol(const ScenarioConfig* config, const std::string& name, double fb) {
  return config ? config->tolerance(name, fb) : fb;
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
  }
};

// ---------------------------------------------------------------------------
// spectral suite: eigensystem identities over randomized samples
// ---------------------------------------------------------------------------

RunReport verify_spectral(const ScenarioConfig* config) {
  RunReport rep;
  rep.suite = "spectral";
  std::mt19937_64 rng(411u);
  auto uniform = [&](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };

  double worst_res = 0, worst_gram = 0, worst_flux = 0, worst_comp = 0,
         worst_oracle = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const double eps = uniform(0.3, 4.0), eta = uniform(0.3, 4.0);
    const auto medium = MediumModel::homogeneous(eps, eta);
    const Vec3 x(uniform(-2, 2), uniform(-2, 2), uniform(-2, 2));
    Vec3 k(uniform(-1, 1), uniform(-1, 1), uniform(-1, 1));
    if (k.norm() < 1e-2) k = Vec3(0.2, -0.5, 0.7);
    k *= uniform(0.1, 5.0) / k.norm();

    const Mat6 l = dispersion_matrix(medium, x, k);
    const auto es = eigensystem(medium, x, k);
    Mat6 comp = Mat6::Zero();
    for (Mode m : kAllModes) {
      worst_res = std::max(worst_res, (l * es.basis(m) - es.omega(m) * es.basis(m)).norm() /
                                          (l.norm() * es.basis(m).norm()));
      comp += es.basis(m) * es.dual(m).transpose();
    }
    worst_comp = std::max(worst_comp, (comp - Mat6::Identity()).cwiseAbs().maxCoeff());

    const auto nr = normalization_report(es, medium, x, k);
    worst_gram = std::max(worst_gram,
                          (nr.gram - Mat6::Identity()).cwiseAbs().maxCoeff());
    const Vec3 vk = medium.speed(x) * k / k.norm();
    worst_flux = std::max({worst_flux, (nr.flux_plus1 - vk).cwiseAbs().maxCoeff(),
                           (nr.flux_plus2 - vk).cwiseAbs().maxCoeff()});

    Mat6 a = Mat6::Zero();
    for (int j = 0; j < 3; ++j) a += k[j] * maxwell::flux_matrix(j);
    Eigen::GeneralizedSelfAdjointEigenSolver<Mat6> solver(
        a, maxwell::material_matrix(eps, eta));
    const double w = medium.speed(x) * k.norm();
    Eigen::Matrix<double, 6, 1> expected;
    expected << -w, -w, 0, 0, w, w;
    worst_oracle =
        std::max(worst_oracle, (solver.eigenvalues() - expected).cwiseAbs().maxCoeff() /
                                   std::max(1.0, w));
  }

  rep.add("eigenresidual", worst_res, tol(config, "eigenresidual", 1e-12));
  rep.add("normalization", worst_gram, tol(config, "normalization", 1e-12));
  rep.add("flux_identity", worst_flux, tol(config, "flux_identity", 1e-10));
  rep.add("completeness", worst_comp, tol(config, "completeness", 1e-12));
  rep.add("dense_oracle", worst_oracle, tol(config, "dense_oracle", 1e-10));
  return rep;
}

// ---------------------------------------------------------------------------
// boundary suite: shell pairings
// ---------------------------------------------------------------------------

RunReport verify_boundary(const ScenarioConfig* config) {
  RunReport rep;
  rep.suite = "boundary";
  std::mt19937_64 rng(412u);
  auto uniform = [&](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };

  const Mat6& ab = maxwell::boundary_coupling();
  const Mat6& a3 = maxwell::flux_matrix(2);
  double worst_same = 0, worst_cross = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const double eps = uniform(0.3, 4.0), eta = uniform(0.3, 4.0);
    const auto medium = MediumModel::homogeneous(eps, eta);
    const double v = medium.speed(Vec3::Zero());
    const double omega = uniform(0.5, 3.0);
    Eigen::Vector2d kp(uniform(-1, 1), uniform(-1, 1));
    kp *= uniform(0.05, 0.95) * omega / v / std::max(1e-12, kp.norm());
    const double k3 = std::sqrt(omega * omega / (v * v) - kp.squaredNorm());
    const auto es_p = eigensystem(medium, Vec3::Zero(), Vec3(kp[0], kp[1], k3));
    const auto es_m = eigensystem(medium, Vec3::Zero(), Vec3(kp[0], kp[1], -k3));

    const Vec6& bp = es_p.basis(Mode::plus1);
    const Vec6& bm = es_m.basis(Mode::plus1);
    worst_same = std::max({worst_same, std::abs(bp.dot(ab * bp)),
                           std::abs(bm.dot(ab * bm))});
    worst_cross = std::max({worst_cross, std::abs(bm.dot(a3 * bp)),
                            std::abs(bm.dot(ab * bp))});
  }
  rep.add("pairing_ab_same", worst_same, tol(config, "pairing_ab_same", 1e-12));
  rep.add("pairing_cross", worst_cross, tol(config, "pairing_cross", 1e-12));
  return rep;
}

// ---------------------------------------------------------------------------
// wigner suite: transform invariants plus the support-concentration trend
// ---------------------------------------------------------------------------

FieldSnapshot wkb_ladder_field(const MediumModel& medium, const Grid& g,
                               double omega, double eps) {
  WkbSpec wkb;
  wkb.omega = omega;
  wkb.k3_sign = -1;
  wkb.epsilon_scale = eps;
  wkb.anchor_z = 0.5;
  wkb.amplitude_profile = [](const Vec3& x) {
    const double u = (x[2] - 0.5) / 0.1;
    return std::exp(-0.5 * u * u);
  };
  return wkb_field(wkb, medium, g);
}

RunReport verify_wigner(const ScenarioConfig* config, int threads) {
  RunReport rep;
  rep.suite = "wigner";
  std::mt19937_64 rng(413u);
  auto uniform = [&](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };

  // hermiticity / real trace / Parseval on a random band-limited 2-D field
  {
    Grid g;
    g.shape = {48, 1, 48};
    g.spacing = {1.0 / 48, 1.0, 1.0 / 48};
    g.periodic = {true, false, true};
    auto field = FieldSnapshot::zero(g, 0.125);
    for (int c = 0; c < 6; ++c)
      for (int m1 = -4; m1 <= 4; ++m1)
        for (int m3 = -4; m3 <= 4; ++m3) {
          const Complex amp(uniform(-1, 1), uniform(-1, 1));
          for (std::size_t i = 0; i < g.size(); ++i) {
            const Vec3 x = g.node(g.unravel(i));
            field.values(c, static_cast<Eigen::Index>(i)) +=
                amp * std::exp(Complex(0, 2 * kPi * (m1 * x[0] + m3 * x[2])));
          }
        }
    const WindowSpec win{8, 0.25};
    const auto w = wigner_transform(field, all_probes(g, win), win,
                                    {.validate_resolution = false, .threads = threads});
    double herm = 0, imtr = 0;
    for (const auto& m : w.values) {
      herm = std::max(herm, (m - m.adjoint()).norm() / std::max(1.0, m.norm()));
      imtr = std::max(imtr, std::abs(m.trace().imag()) /
                                std::max(1.0, std::abs(m.trace().real())));
    }
    rep.add("hermiticity", herm, tol(config, "hermiticity", 1e-10));
    rep.add("real_trace", imtr, tol(config, "real_trace", 1e-10));

    const auto rho = trace_density(w);
    double parseval = 0;
    for (std::size_t p = 0; p < w.probes.size(); ++p) {
      double mass = 0;
      for (std::size_t n = 0; n < w.kcount(); ++n) mass += rho[p * w.kcount() + n];
      mass *= w.dk_volume();
      const double expect =
          field.values.col(static_cast<Eigen::Index>(field.grid.index(w.probe_node[p])))
              .squaredNorm();
      parseval = std::max(parseval, std::abs(mass - expect) / std::max(1e-12, expect));
    }
    rep.add("parseval", parseval, tol(config, "parseval", 1e-6));
  }

  // plane-wave concentration at the nearest node (rectangular window on a
  // periodic grid; N = 2M aligns field modes with k nodes)
  {
    const int m = 16;
    const int n = 2 * (2 * m + 1);
    Grid g;
    g.shape = {1, 1, n};
    g.spacing = {1, 1, 1.0 / n};
    g.periodic = {false, false, true};
    const double eps = 1.0 / 16;
    const double k0 = eps * 2 * kPi * 9;
    auto field = FieldSnapshot::zero(g, eps);
    CVec6 b;
    b << 1.0, 0.3, -0.2, 0.0, 0.5, 0.1;
    for (int i = 0; i < n; ++i)
      field.values.col(i) = b * std::exp(Complex(0, k0 * g.node({0, 0, i})[2] / eps));
    const WindowSpec win{m, 0.0};
    const auto w = wigner_transform(field, all_probes(g, win), win);
    const auto rho = trace_density(w);
    const std::size_t target = w.nearest_knode(Vec3(0, 0, k0));
    double at_node = 0, total = 0;
    for (std::size_t p = 0; p < w.probes.size(); ++p)
      for (std::size_t q = 0; q < w.kcount(); ++q) {
        total += std::abs(rho[p * w.kcount() + q]);
        if (q == target) at_node += std::abs(rho[p * w.kcount() + q]);
      }
    rep.add("plane_wave_concentration", at_node / total,
            tol(config, "plane_wave_concentration", 0.95), false);
  }

  // localisation (bitwise) and the |c|^2 cutoff law
  {
    Grid g;
    g.shape = {1, 1, 64};
    g.spacing = {1, 1, 1.0 / 64};
    auto f1 = FieldSnapshot::zero(g, 0.125);
    for (int i = 0; i < 64; ++i)
      f1.values(0, i) = std::exp(Complex(0, 44.0 * g.node({0, 0, i})[2])) *
                        (1.0 + 0.2 * g.node({0, 0, i})[2]);
    auto f2 = f1;
    for (int i = 0; i < 18; ++i) f2.values(0, i) *= Complex(0.2, 0.5);
    for (int i = 48; i < 64; ++i) f2.values(0, i) += Complex(1.0, -1.0);

    const WindowSpec win{6, 0.5};
    const std::vector<std::array<int, 3>> probes = {{0, 0, 32}};
    const auto w1 = wigner_transform(f1, probes, win, {.validate_resolution = false});
    const auto w2 = wigner_transform(f2, probes, win, {.validate_resolution = false});
    double loc = 0;
    for (std::size_t q = 0; q < w1.kcount(); ++q)
      loc = std::max(loc, (w1.at(0, q) - w2.at(0, q)).cwiseAbs().maxCoeff());
    rep.add("localisation", loc, tol(config, "localisation", 0.0));

    auto fc = f1;
    const Complex c(0.6, -0.8);
    for (int i = 20; i <= 44; ++i) fc.values.col(i) *= c;
    for (int i = 0; i < 20; ++i) fc.values.col(i) *= 0.1;
    const auto wc = wigner_transform(fc, probes, win, {.validate_resolution = false});
    double cut = 0;
    for (std::size_t q = 0; q < w1.kcount(); ++q)
      cut = std::max(cut, (wc.at(0, q) - std::norm(c) * w1.at(0, q)).cwiseAbs().maxCoeff() /
                              std::max(1.0, w1.at(0, q).cwiseAbs().maxCoeff()));
    rep.add("cutoff_law", cut, tol(config, "cutoff_law", 1e-13));
  }

  // support-concentration trend (WKB ladder) and the off-shell control
  {
    Grid g;
    g.shape = {1, 1, 256};
    g.spacing = {1, 1, 1.0 / 256};
    g.periodic = {false, false, true};
    ScalarField eta(
        [](const Vec3& x) {
          const double v = 1.0 + 0.08 * x[2];
          return 1.0 / (v * v);
        },
        [](const Vec3& x) {
          const double v = 1.0 + 0.08 * x[2];
          return Vec3(0, 0, -0.16 / (v * v * v));
        });
    const MediumModel medium(ScalarField::constant(1.0), eta);
    const double omega = 6.0;
    const WindowSpec win{64, 0.2};
    std::vector<std::array<int, 3>> probes;
    for (int i = 100; i <= 156; i += 8) probes.push_back({0, 0, i});

    std::array<double, 3> fractions{};
    const double ladder[3] = {1.0 / 16, 1.0 / 32, 1.0 / 64};
    for (int i = 0; i < 3; ++i) {
      const auto field = wkb_ladder_field(medium, g, omega, ladder[i]);
      const auto w = wigner_transform(field, probes, win, {.threads = threads});
      const auto frac =
          shell_mass_fraction(project_modes(w, medium), w, medium, omega, 0.1);
      fractions[static_cast<size_t>(i)] = frac.fraction_of(Mode::minus1).value_or(0.0);
    }
    double max_decrease = 0.0;
    for (int i = 0; i + 1 < 3; ++i)
      max_decrease = std::max(max_decrease,
                              fractions[static_cast<size_t>(i)] -
                                  fractions[static_cast<size_t>(i + 1)]);
    rep.add("support_monotone", max_decrease, tol(config, "support_monotone", 0.0));
    rep.add("support_fraction", fractions[2], tol(config, "support_fraction", 0.9),
            false);

    // control field oscillating at v|k| = 2 omega
    Grid gc;
    gc.shape = {1, 1, 512};
    gc.spacing = {1, 1, 1.0 / 512};
    gc.periodic = {false, false, true};
    const double eps = 1.0 / 64;
    PlaneWaveSpec pw;
    pw.epsilon_scale = eps;
    pw.k0 = Vec3(0, 0, -eps * 2 * kPi * std::round(2 * omega / (eps * 2 * kPi)));
    const auto control = plane_wave_field(pw, gc, false);
    std::vector<std::array<int, 3>> cp;
    for (int i = 200; i <= 312; i += 16) cp.push_back({0, 0, i});
    const auto wctl = wigner_transform(control, cp, win, {.threads = threads});
    const auto fctl = shell_mass_fraction(project_modes(wctl, MediumModel::homogeneous(1, 1)),
                                          wctl, MediumModel::homogeneous(1, 1), omega, 0.1);
    rep.add("off_shell_control", fctl.fraction_of(Mode::minus1).value_or(0.0),
            tol(config, "off_shell_control", 0.05));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// pdo suite: operator calculus plus the symbol decomposition
// ---------------------------------------------------------------------------

RunReport verify_pdo(const ScenarioConfig* config, const std::string& out_dir) {
  RunReport rep;
  rep.suite = "pdo";
  std::vector<CalculusRow> calculus;
  std::mt19937_64 rng(414u);
  auto uniform = [&](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };

  Grid g;
  g.shape = {1, 1, 96};
  g.spacing = {1, 1, 4.0 / 96};
  g.origin = Vec3(0, 0, -2.0);
  g.periodic = {false, false, true};
  const double len = g.extent(2);

  auto trig_field = [&](double eps, int max_mode) {
    auto f = FieldSnapshot::zero(g, eps);
    for (int mode = -max_mode; mode <= max_mode; ++mode) {
      const Complex amp(uniform(-1, 1), uniform(-1, 1));
      for (std::size_t i = 0; i < g.size(); ++i)
        f.values(0, static_cast<Eigen::Index>(i)) +=
            amp * std::exp(Complex(0, 2 * kPi * mode * g.node(g.unravel(i))[2] / len));
    }
    return f;
  };

  const auto f = trig_field(0.125, 6);
  const double fnorm = f.l2_norm();

  // identity and multiplication exactness
  {
    const auto id = apply_pdo(Symbol::constant(1.0), f);
    double dev = (id.values - f.values).cwiseAbs().maxCoeff();
    rep.add("identity_exact", dev, tol(config, "identity_exact", 1e-12));

    auto ax = Symbol::of_x([&](const Vec3& x) { return 2.0 + std::sin(2 * kPi * x[2] / len); });
    const auto mf = apply_pdo(ax, f);
    double mdev = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const Complex expect = ax.eval(g.node(g.unravel(i)), Vec3::Zero()) *
                             f.values(0, static_cast<Eigen::Index>(i));
      mdev = std::max(mdev, std::abs(mf.values(0, static_cast<Eigen::Index>(i)) - expect));
    }
    rep.add("multiplier_exact", mdev, tol(config, "multiplier_exact", 1e-12));
  }

  // derivative symbol against the analytic Gaussian derivative
  {
    Grid gg;
    gg.shape = {1, 1, 128};
    gg.spacing = {1, 1, 8.0 / 128};
    gg.origin = Vec3(0, 0, -4.0);
    gg.periodic = {false, false, true};
    const double eps = 0.25, width = 0.5;
    auto gf = FieldSnapshot::zero(gg, eps);
    for (std::size_t i = 0; i < gg.size(); ++i) {
      const double z = gg.node(gg.unravel(i))[2];
      gf.values(0, static_cast<Eigen::Index>(i)) = std::exp(-0.5 * z * z / (width * width));
    }
    const auto df = apply_pdo(Symbol::wavenumber(2), gf);
    double dev = 0;
    for (std::size_t i = 0; i < gg.size(); ++i) {
      const double z = gg.node(gg.unravel(i))[2];
      const Complex expect = (eps / Complex(0, 1)) * (-z / (width * width)) *
                             std::exp(-0.5 * z * z / (width * width));
      dev = std::max(dev, std::abs(df.values(0, static_cast<Eigen::Index>(i)) - expect));
    }
    rep.add("gaussian_derivative", dev, tol(config, "gaussian_derivative", 1e-6));
  }

  // quantization equivalence decay
  {
    Grid gs;
    gs.shape = {1, 1, 48};
    gs.spacing = {1, 1, 4.0 / 48};
    gs.origin = Vec3(0, 0, -2.0);
    gs.periodic = {false, false, true};
    Symbol lin;
    lin.eval = [&](const Vec3& x, const Vec3& k) {
      return (0.3 + 0.2 * std::sin(2 * kPi * x[2] / 4.0)) * k[2];
    };
    std::vector<double> eps_list = {1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128};
    std::vector<double> diffs;
    for (const double eps : eps_list) {
      auto gf = FieldSnapshot::zero(gs, eps);
      for (std::size_t i = 0; i < gs.size(); ++i) {
        const double z = gs.node(gs.unravel(i))[2];
        gf.values(0, static_cast<Eigen::Index>(i)) = std::exp(-0.5 * z * z / 0.16);
      }
      const auto kn = apply_pdo(lin, gf);
      const auto wl = apply_weyl(lin, gf);
      diffs.push_back((kn.values - wl.values).norm() / gf.values.norm());
    }
    rep.add("quantization_equivalence_slope", fitted_order(eps_list, diffs),
            tol(config, "quantization_equivalence_slope", 0.9), false);
  }

  // product-rule remainder order across eps in {2^-3 .. 2^-7}
  {
    auto ax = Symbol::of_x(
        [&](const Vec3& x) { return 1.0 + 0.4 * std::sin(2 * kPi * x[2] / len); },
        [&](const Vec3& x) {
          return Vec3(0, 0, 0.4 * (2 * kPi / len) * std::cos(2 * kPi * x[2] / len));
        });
    Symbol bk = Symbol::of_k([](const Vec3& k) { return k[2] * k[2]; },
                             [](const Vec3& k) { return Vec3(0, 0, 2 * k[2]).eval(); });
    const double ladder[] = {1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128};
    const auto remainder = product_remainder(ax, bk, f, ladder);
    rep.add("remainder_order", remainder.fitted_order,
            tol(config, "remainder_order", 1.9), false);
    for (std::size_t i = 0; i < remainder.epsilons.size(); ++i)
      calculus.push_back({remainder.epsilons[i], std::nullopt, std::nullopt,
                          remainder.relative_norms[i], remainder.fitted_order});
  }

  // duality pairing on matched discretizations
  {
    Grid go;
    go.shape = {1, 1, 65};
    go.spacing = {1, 1, 2.0 / 65};
    go.periodic = {false, false, true};
    auto fo = FieldSnapshot::zero(go, 0.125);
    for (int mode = -5; mode <= 5; ++mode) {
      const Complex amp(uniform(-1, 1), uniform(-1, 1));
      for (std::size_t i = 0; i < go.size(); ++i)
        fo.values(0, static_cast<Eigen::Index>(i)) +=
            amp * std::exp(Complex(0, 2 * kPi * mode * go.node(go.unravel(i))[2] / 2.0));
    }
    const double n2 = fo.l2_norm() * fo.l2_norm();
    auto ax = Symbol::of_x([](const Vec3& x) { return 1.0 + 0.3 * std::cos(kPi * x[2]); });
    double worst = 0.0;
    const double k0 = 0.125 * 2 * kPi * 3 / 2.0;
    auto bump = Symbol::of_k([=](const Vec3& k) {
      const double u = (k[2] - k0) / (4 * k0);
      return std::exp(-8.0 * u * u);
    });
    const Symbol* symbols[] = {nullptr, &ax, &bump};
    Symbol unit = Symbol::constant(1.0);
    symbols[0] = &unit;
    for (const Symbol* sym : symbols) {
      const auto d = duality_pairing(*sym, fo);
      worst = std::max(worst, d.abs_difference);
      calculus.push_back({fo.epsilon_scale, d.phase_space_side.real(),
                          d.operator_side.real(), d.abs_difference,
                          std::nullopt});
    }
    rep.add("duality_pairing", worst / n2, tol(config, "duality_pairing", 1e-6));
  }

  // symbol decomposition: closed forms and the reconstruction identity
  {
    const auto medium = MediumModel::homogeneous(2.0, 0.5);
    const Vec3 x(0.2, -0.1, 0.4);
    const double v = medium.speed(x);
    const double omega = 1.7;

    Symbol shell;
    shell.eval = [&](const Vec3&, const Vec3& k) { return v * k.norm() - omega; };
    const auto dec_shell = decompose_symbol(shell, medium, omega, x);
    Symbol k3sq;
    k3sq.eval = [](const Vec3&, const Vec3& k) { return k[2] * k[2]; };
    const auto dec_k3 = decompose_symbol(Symbol::wavenumber(2), medium, omega, x);
    const auto dec_sq = decompose_symbol(k3sq, medium, omega, x);

    Symbol smooth;
    smooth.eval = [&](const Vec3& xx, const Vec3& k) {
      return (1.0 + 0.4 * std::sin(xx[2])) * (1.0 + 0.5 * k[2] + 0.2 * k.squaredNorm());
    };
    const auto dec_smooth = decompose_symbol(smooth, medium, omega, x);

    double closed = 0, recon = 0, sq_dev = 0;
    for (int trial = 0; trial < 400; ++trial) {
      Eigen::Vector2d kp(uniform(-0.6, 0.6), uniform(-0.6, 0.6));
      kp *= omega / v;
      if (kp.norm() >= 0.9 * omega / v) continue;
      const Vec3 k(kp[0], kp[1], uniform(-2.5, 2.5) * omega / v);
      closed = std::max({closed, std::abs(dec_shell.a0(kp)), std::abs(dec_shell.a1(kp)),
                         std::abs(dec_k3.a0(kp)), std::abs(dec_k3.a1(kp) - 1.0)});
      if (std::abs(v * k.norm() - omega) >= 1e-6 * omega) {
        closed = std::max(closed, std::abs(dec_shell.a2(k) - 1.0));
        sq_dev = std::max(sq_dev, std::abs(dec_sq.a2(k) - (v * k.norm() + omega) / (v * v)));
        recon = std::max(recon, std::abs(dec_smooth.reconstruct(k) - smooth.eval(x, k)) /
                                    std::max(1.0, std::abs(smooth.eval(x, k))));
      }
      sq_dev = std::max(sq_dev, std::abs(dec_sq.a0(kp) -
                                         (omega * omega / (v * v) - kp.squaredNorm())));
    }
    rep.add("decomposition_closed_forms", closed,
            tol(config, "decomposition_closed_forms", 1e-10));
    rep.add("decomposition_k3sq", sq_dev, tol(config, "decomposition_k3sq", 1e-9));
    rep.add("decomposition_reconstruct", recon,
            tol(config, "decomposition_reconstruct", 1e-9));
  }
  (void)fnorm;
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    write_calculus_csv(std::filesystem::path(out_dir) / "calculus.csv", calculus);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// transport suite
// ---------------------------------------------------------------------------

RunReport verify_transport(const ScenarioConfig* config, int threads) {
  RunReport rep;
  rep.suite = "transport";
  std::mt19937_64 rng(415u);
  auto uniform = [&](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };

  // omega drift over a unit path in a smooth medium
  {
    ScalarField eps_f(
        [](const Vec3& x) { return 1.5 + 0.2 * std::sin(x[0]) * std::cos(x[2]); },
        [](const Vec3& x) {
          return Vec3(0.2 * std::cos(x[0]) * std::cos(x[2]), 0.0,
                      -0.2 * std::sin(x[0]) * std::sin(x[2]));
        });
    const MediumModel medium(eps_f, ScalarField::constant(1.0));
    double drift = 0;
    for (int trial = 0; trial < 20; ++trial) {
      RayState ray;
      ray.x = Vec3(uniform(-1, 1), uniform(-1, 1), uniform(-1, 1));
      ray.k = Vec3(uniform(-1, 1), uniform(-1, 1), uniform(-1, 1));
      if (ray.k.norm() < 0.3) ray.k = Vec3(0.5, 0.2, 0.9);
      ray.mode = trial % 2 ? Mode::plus1 : Mode::minus2;
      IntegrationOptions opts;
      opts.dt = 5e-3;
      const double omega0 = medium.speed(ray.x) * ray.k.norm();
      const auto res = integrate_ray(ray, medium, 1.0, opts);
      drift = std::max(drift, res.omega_drift / omega0);
    }
    rep.add("omega_drift", drift, tol(config, "omega_drift", 1e-8));
  }

  // specular involution, bitwise
  {
    const auto vac = MediumModel::homogeneous(1.0, 1.0);
    double dev = 0;
    for (int trial = 0; trial < 100; ++trial) {
      RayState ray;
      ray.x = Vec3(uniform(-1, 1), uniform(-1, 1), 0.0);
      const double s1 = uniform(-0.7, 0.7), s2 = uniform(-0.5, 0.5);
      ray.k = Vec3(s1, s2, -std::sqrt(std::max(0.05, 1.0 - s1 * s1 - s2 * s2)));
      ray.mode = Mode::plus1;
      const double omega = ray.k.norm();
      const auto once = reflect_flat(ray, vac, omega);
      const auto twice = reflect_flat(once, vac, omega);
      dev = std::max(dev, (twice.k - ray.k).cwiseAbs().maxCoeff());
      dev = std::max(dev, (twice.x - ray.x).cwiseAbs().maxCoeff());
    }
    rep.add("specular_involution", dev, tol(config, "specular_involution", 0.0));
  }

  // mass bookkeeping on a mixed reflecting bundle
  {
    TransportScenario sc;
    sc.kind = ScenarioKind::half_space_conductor;
    sc.exterior = MediumModel::homogeneous(1.0, 1.0);
    sc.omega = 1.0;
    sc.box_min = Vec3(-100, -100, -1);
    sc.box_max = Vec3(100, 100, 2);
    sc.integration.dt = 0.01;
    std::vector<RayState> rays;
    for (int i = 0; i < 200; ++i) {
      RayState r;
      r.x = Vec3(uniform(-1, 1), uniform(-1, 1), 1.0);
      const double s = uniform(-0.9, 0.9);
      r.k = Vec3(s, 0.0, -std::sqrt(1.0 - s * s));
      r.mode = Mode::plus1;
      r.weight = uniform(0.1, 1.0);
      rays.push_back(r);
    }
    const auto res = transport_ensemble(RayEnsemble::of(rays), sc, 8.0, threads);
    rep.add("mass_bookkeeping",
            std::abs(res.budget.imbalance()) / res.budget.initial,
            tol(config, "mass_bookkeeping", 1e-12));
  }

  // Monte-Carlo pushforward against the analytic translate, N = 1e5
  {
    const int n = 100000;
    const double sigma = 0.4;
    std::normal_distribution<double> gauss(0.0, sigma);
    std::vector<RayState> rays;
    rays.reserve(n);
    for (int i = 0; i < n; ++i) {
      RayState r;
      r.x = Vec3(0, 0, gauss(rng));
      r.k = Vec3(0, 0, 1.0);
      r.mode = Mode::plus1;
      r.weight = 1.0 / n;
      rays.push_back(r);
    }
    TransportScenario sc;
    sc.kind = ScenarioKind::free_space;
    sc.exterior = MediumModel::homogeneous(1.0, 1.0);
    sc.box_min = Vec3(-1e3, -1e3, -1e3);
    sc.box_max = Vec3(1e3, 1e3, 1e3);
    sc.integration.dt = 0.05;
    const double t = 1.5;
    const auto res = transport_ensemble(RayEnsemble::of(rays), sc, t, threads);

    PhaseSpaceLattice lat;
    lat.xshape = {1, 1, 40};
    lat.kshape = {1, 1, 1};
    lat.xmin[2] = t - 5 * sigma;
    lat.dx = {1, 1, 10 * sigma / 40};
    const auto binned = bin_ensemble(res.ensemble, lat);
    auto cdf = [&](double z) {
      return 0.5 * (1.0 + std::erf((z - t) / (sigma * std::sqrt(2.0))));
    };
    double measured = 0;
    for (int c = 10; c < 30; ++c) measured += binned.mass[2][static_cast<size_t>(c)];
    const double expect = cdf(lat.xmin[2] + 30 * lat.dx[2]) - cdf(lat.xmin[2] + 10 * lat.dx[2]);
    rep.add("mc_pushforward", std::abs(measured - expect),
            tol(config, "mc_pushforward", 2.0 / std::sqrt(double(n))));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// calderon suite
// ---------------------------------------------------------------------------

RunReport verify_calderon(const ScenarioConfig* config) {
  RunReport rep;
  rep.suite = "calderon";
  std::mt19937_64 rng(416u);
  auto uniform = [&](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };

  const Mat6& m = maxwell::tangential_projector();
  rep.add("projector_idempotent", (m * m - m).cwiseAbs().maxCoeff(),
          tol(config, "projector_idempotent", 0.0));
  rep.add("projector_symmetric", (m - m.transpose()).cwiseAbs().maxCoeff(),
          tol(config, "projector_symmetric", 0.0));

  double kprime = 0, tir = 0, pairing = 0, conservation = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto medium = MediumModel::homogeneous(uniform(0.5, 3.0), uniform(0.5, 3.0));
    RayState ray;
    ray.x = Vec3(uniform(-1, 1), uniform(-1, 1), 0.0);
    const double s1 = uniform(-0.7, 0.7), s2 = uniform(-0.5, 0.5);
    ray.k = Vec3(s1, s2, -std::sqrt(std::max(0.05, 1.0 - s1 * s1 - s2 * s2)));
    ray.mode = trial % 2 ? Mode::plus1 : Mode::plus2;
    ray.region = Region::exterior;
    ray.weight = uniform(0.2, 2.0);
    const double omega = medium.speed(ray.x) * ray.k.norm();

    const auto res = calderon_split(ray, medium, medium, omega);
    if (!res.transmitted)
      throw std::logic_error("calderon suite: expected a transmitted ray");
    kprime = std::max({kprime, std::abs(res.transmitted->k[0] - ray.k[0]),
                       std::abs(res.transmitted->k[1] - ray.k[1]),
                       std::abs(res.reflected.k[0] - ray.k[0]),
                       std::abs(res.reflected.k[1] - ray.k[1])});

    // oracle pairing
    const auto es = eigensystem(medium, ray.x, ray.k);
    const Vec6 mb = m * es.basis(ray.mode);
    const auto es_t = eigensystem(medium, ray.x, res.transmitted->k);
    const double c1 = mb.dot(es_t.dual(Mode::plus1));
    const double c2 = mb.dot(es_t.dual(Mode::plus2));
    pairing = std::max(pairing, std::abs(res.transmitted_fraction - (c1 * c1 + c2 * c2)));
    conservation = std::max(conservation,
                            std::abs(res.reflected.weight + res.transmitted->weight -
                                     ray.weight) /
                                ray.weight);
  }
  // total internal reflection into a faster interior
  {
    const auto slow = MediumModel::homogeneous(2.0, 2.0);
    const auto fast = MediumModel::homogeneous(1.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
      RayState ray;
      ray.x = Vec3(uniform(-1, 1), uniform(-1, 1), 0.0);
      const double s = uniform(0.55, 0.95);
      ray.k = Vec3(s, 0.0, -std::sqrt(1.0 - s * s));
      ray.mode = Mode::plus1;
      ray.region = Region::exterior;
      ray.weight = uniform(0.2, 2.0);
      const double omega = slow.speed(ray.x) * ray.k.norm();
      const auto res = calderon_split(ray, slow, fast, omega);
      if (!res.evanescent) {
        tir = std::max(tir, 1.0);
        continue;
      }
      tir = std::max(tir, std::abs(res.reflected.weight - ray.weight));
    }
  }
  rep.add("kprime_continuity", kprime, tol(config, "kprime_continuity", 0.0));
  rep.add("tir_full_reflection", tir, tol(config, "tir_full_reflection", 0.0));
  rep.add("equal_media_pairing", pairing, tol(config, "equal_media_pairing", 1e-12));
  rep.add("mass_conservation", conservation, tol(config, "mass_conservation", 1e-12));
  return rep;
}

// ---------------------------------------------------------------------------
// curved suite
// ---------------------------------------------------------------------------

RunReport verify_curved(const ScenarioConfig* config, int threads) {
  RunReport rep;
  rep.suite = "curved";
  std::mt19937_64 rng(417u);
  auto uniform = [&](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };

  // flat reduction: phi == 0 pipeline bitwise-matches the flat pipeline
  {
    std::vector<RayState> rays;
    for (int i = 0; i < 32; ++i) {
      RayState r;
      r.x = Vec3(uniform(-1, 1), uniform(-1, 1), 1.0 + uniform(0, 0.5));
      const double s1 = uniform(-0.6, 0.6), s2 = uniform(-0.4, 0.4);
      r.k = Vec3(s1, s2, -std::sqrt(std::max(0.05, 1.0 - s1 * s1 - s2 * s2)));
      r.mode = (i % 2 == 0) ? Mode::plus1 : Mode::plus2;
      r.weight = uniform(0.1, 1.0);
      rays.push_back(r);
    }
    TransportScenario flat;
    flat.kind = ScenarioKind::half_space_conductor;
    flat.exterior = MediumModel::homogeneous(1.0, 1.0);
    flat.omega = 1.0;
    flat.box_min = Vec3(-100, -100, -1);
    flat.box_max = Vec3(100, 100, 3);
    flat.integration.dt = 0.01;
    TransportScenario curved = flat;
    curved.kind = ScenarioKind::curved_interface;
    curved.chart = InterfaceChart(Expression::parse("0").as_field());

    const auto a = transport_ensemble(RayEnsemble::of(rays), flat, 8.0, threads);
    const auto b = transport_ensemble(RayEnsemble::of(rays), curved, 8.0, threads);
    double dev = (a.ensemble.rays.size() == b.ensemble.rays.size()) ? 0.0 : 1.0;
    if (dev == 0.0)
      for (std::size_t i = 0; i < a.ensemble.rays.size(); ++i) {
        if (std::memcmp(a.ensemble.rays[i].x.data(), b.ensemble.rays[i].x.data(),
                        3 * sizeof(double)) != 0)
          dev = 1.0;
        if (std::memcmp(a.ensemble.rays[i].k.data(), b.ensemble.rays[i].k.data(),
                        3 * sizeof(double)) != 0)
          dev = 1.0;
      }
    rep.add("flat_reduction_bitwise", dev, tol(config, "flat_reduction_bitwise", 0.0));
  }

  // tilted plane against the exact mirror-matrix oracle
  {
    double dev = 0;
    for (int trial = 0; trial < 500; ++trial) {
      const Eigen::Vector2d a(uniform(-0.8, 0.8), uniform(-0.8, 0.8));
      ScalarField phi([a](const Vec3& x) { return a[0] * x[0] + a[1] * x[1]; },
                      [a](const Vec3&) { return Vec3(a[0], a[1], 0.0); });
      const InterfaceChart chart(phi);
      Vec3 k(uniform(-2, 2), uniform(-2, 2), uniform(-2, 2));
      if (k.norm() < 0.3) continue;
      const Vec3 x(uniform(-1, 1), uniform(-1, 1), 0.0);
      Vec3 n(-a[0], -a[1], 1.0);
      n.normalize();
      const Vec3 mirror = k - 2.0 * k.dot(n) * n;
      dev = std::max(dev, (chart.reflect_wavevector(x, k) - mirror).cwiseAbs().maxCoeff() /
                              std::max(1.0, k.norm()));
    }
    rep.add("tilted_mirror", dev, tol(config, "tilted_mirror", 1e-10));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// cross suite: field side vs ray side on the half-space conductor
// ---------------------------------------------------------------------------

RunReport verify_cross(const ScenarioConfig* config, int threads) {
  RunReport rep;
  rep.suite = "cross";
  if (config && config->ray_count == 0)
    throw ConfigError("cross suite: empty ray ensemble (ray_count = 0)");

  const int m = 10;
  const int n = 2 * (2 * m + 1);  // 42
  Grid g;
  g.shape = {n, 1, n};
  g.spacing = {1.0 / n, 1.0, 1.0 / n};
  g.periodic = {true, false, true};
  const double eps = 1.0 / 16;

  MirrorFieldSpec spec;
  spec.incident.epsilon_scale = eps;
  spec.incident.k0 = eps * 2 * kPi * Vec3(5, 0, -8);
  spec.incident.amplitude = Complex(0.8, 0.3);

  MirrorInfo info;
  const auto field = conductor_mirror_field(spec, g, true, &info);
  const double omega = info.incident.adjusted_omega;
  const auto vac = MediumModel::homogeneous(1.0, 1.0);

  // --- field side: Wigner mode densities at interior probes
  const WindowSpec win{m, 0.0};
  std::vector<std::array<int, 3>> probes;
  for (int i : {12, 21, 30}) probes.push_back({i, 0, 21});
  const auto w = wigner_transform(field, probes, win, {.threads = threads});
  const auto modes = project_modes(w, vac);

  const std::size_t node_inc = w.nearest_knode(info.incident.adjusted_k);
  const std::size_t node_ref = w.nearest_knode(info.reflected_k);
  rep.add("peak_nodes_exact",
          std::max((w.wavevector(node_inc) - info.incident.adjusted_k).norm(),
                   (w.wavevector(node_ref) - info.reflected_k).norm()),
          tol(config, "peak_nodes_exact", 1e-12));

  auto peak_mass = [&](std::size_t node) {
    double acc = 0;
    for (std::size_t p = 0; p < probes.size(); ++p)
      for (Mode mm : kTransverseModes) acc += std::abs(modes.value(p, node, mm));
    return acc / probes.size();
  };
  const double wig_inc = peak_mass(node_inc);
  const double wig_ref = peak_mass(node_ref);

  // --- ray side: streaming snapshots of the downgoing-energy component
  const int ray_count = config ? config->ray_count : 256;
  TransportScenario sc;
  sc.kind = ScenarioKind::half_space_conductor;
  sc.exterior = vac;
  sc.omega = omega;
  sc.box_min = Vec3(-100, -100, -1);
  sc.box_max = Vec3(100, 100, 10);
  sc.integration.dt = 2e-3;

  std::mt19937_64 rng(418u);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::vector<RayState> seeds;
  const Vec3 k_seed = info.reflected_k;  // k3 > 0 carries energy downward
  for (int i = 0; i < ray_count; ++i) {
    RayState r;
    r.x = Vec3(u01(rng), 0.0, 1.5);
    r.k = k_seed;
    r.mode = Mode::minus1;
    r.weight = 1.0 / ray_count;
    seeds.push_back(r);
  }

  // stationary cloud: sample every trajectory at the integrator step
  std::vector<RayState> cloud;
  double deposited_alpha = 0, deposited_beta = 0;
  Eigen::Vector2d deposit_kp = Eigen::Vector2d::Zero();
  const double z_lo = 0.15, z_hi = 0.75;  // both branches sweep this band
  for (const auto& seed : seeds) {
    RayState ray = seed;
    int guard = 8;
    double t_used = 0;
    const double t_final = 4.0;
    while (t_used < t_final && guard-- > 0) {
      std::vector<EventDetector> det = {
          EventDetector{[](const Vec3& x) { return x[2]; }, 1, 1e-9}};
      IntegrationOptions opts = sc.integration;
      opts.record_trajectory = true;
      const auto res = integrate_ray(ray, vac, t_final - t_used, opts, det);
      for (const auto& [tt, state] : res.trajectory) {
        if (state.x[2] >= z_lo && state.x[2] <= z_hi) {
          RayState s = state;
          s.weight = ray.weight * opts.dt;
          cloud.push_back(s);
        }
      }
      t_used += res.t;
      if (!res.event || res.event->location_failed) break;
      BoundaryMeasure nu;
      ray = reflect_flat(res.event->state, vac, omega, &nu);
      for (const auto& smp : nu.samples) {
        (smp.branch == ShellBranch::alpha ? deposited_alpha : deposited_beta) +=
            smp.weight;
        deposit_kp = smp.kp;
      }
    }
  }

  PhaseSpaceLattice lat;
  lat.xshape = {1, 1, 1};
  lat.kshape = w.kshape;
  lat.xmin = Vec3(-1000, -1000, z_lo);
  lat.dx = {2000, 2000, z_hi - z_lo};
  for (int a = 0; a < 3; ++a) {
    const auto ua = static_cast<size_t>(a);
    lat.dk[ua] = w.axis_active[ua] ? w.dk[ua] : 1.0;
    const int mm = (w.kshape[ua] - 1) / 2;
    lat.kmin[a] = w.axis_active[ua] ? -(mm + 0.5) * w.dk[ua] : -0.5;
  }
  const auto binned = bin_ensemble(RayEnsemble::of(std::move(cloud)), lat);
  auto ray_mass = [&](std::size_t node) {
    double acc = 0;
    for (int mm = 0; mm < 6; ++mm) acc += binned.mass[static_cast<size_t>(mm)][node];
    return acc;
  };
  const double ray_inc = ray_mass(node_inc);
  const double ray_ref = ray_mass(node_ref);

  const double wig_ratio = wig_inc / wig_ref;
  const double ray_ratio = ray_inc / ray_ref;
  rep.add("peak_ratio_match", std::abs(wig_ratio / ray_ratio - 1.0),
          tol(config, "peak_ratio_match", 0.10));

  // peaks carry the bulk of the on-shell mass on both sides (the coherent
  // midpoint term of the mirror field lives off shell and is excluded)
  double wig_total = 0, ray_total = 0;
  for (std::size_t q = 0; q < w.kcount(); ++q) {
    if (std::abs(w.wavevector(q).norm() - omega) > 0.1 * omega) continue;
    for (std::size_t p = 0; p < probes.size(); ++p)
      for (Mode mm : kTransverseModes) wig_total += std::abs(modes.value(p, q, mm));
    ray_total += ray_mass(q);
  }
  wig_total /= probes.size();
  rep.add("field_peaks_dominant", (wig_inc + wig_ref) / wig_total,
          tol(config, "field_peaks_dominant", 0.9), false);
  rep.add("ray_peaks_dominant", (ray_inc + ray_ref) / ray_total,
          tol(config, "ray_peaks_dominant", 0.9), false);

  // --- boundary trace: Wigner of u(x', 0) vs the deposited measures
  Grid slice;
  slice.shape = {n, 1, 1};
  slice.spacing = {g.spacing[0], 1, 1};
  slice.periodic = {true, false, false};
  auto trace = FieldSnapshot::zero(slice, eps);
  for (int i = 0; i < n; ++i)
    trace.values.col(i) = field.values.col(static_cast<Eigen::Index>(g.index(i, 0, 0)));
  const auto wt = wigner_transform(trace, all_probes(slice, win), win);

  // k' support: the trace peak node equals the deposit k'
  const auto rt = trace_density(wt);
  std::size_t peak_node = 0;
  double peak_val = -1;
  std::vector<double> ksum(wt.kcount(), 0.0);
  for (std::size_t p = 0; p < wt.probes.size(); ++p)
    for (std::size_t q = 0; q < wt.kcount(); ++q) ksum[q] += std::abs(rt[p * wt.kcount() + q]);
  for (std::size_t q = 0; q < wt.kcount(); ++q)
    if (ksum[q] > peak_val) {
      peak_val = ksum[q];
      peak_node = q;
    }
  rep.add("boundary_kprime_support",
          std::abs(wt.wavevector(peak_node)[0] - deposit_kp[0]),
          tol(config, "boundary_kprime_support", 0.5 * wt.dk[0]));

  // branch split: project the peak Wigner matrix onto the two constituent
  // dyads and compare with the deposited alpha/beta split
  const CVec6 q_minus =
      spec.incident.amplitude * info.incident.polarization.cast<Complex>();
  const CVec6 q_plus =
      info.reflection_coefficients[0] *
          plane_wave_polarization(info.reflected_k, 1, 1, 1).cast<Complex>() +
      info.reflection_coefficients[1] *
          plane_wave_polarization(info.reflected_k, 1, 1, 2).cast<Complex>();
  const CVec6 u_m = q_minus / q_minus.norm();
  const CVec6 u_p = q_plus / q_plus.norm();

  CMat6 w_peak = CMat6::Zero();
  for (std::size_t p = 0; p < wt.probes.size(); ++p) w_peak += wt.at(p, peak_node);

  Eigen::Matrix<Complex, 36, 4> basis;
  auto put_dyad = [&](int col, const CVec6& a, const CVec6& b) {
    const CMat6 d = a * b.adjoint();
    for (int r = 0; r < 6; ++r)
      for (int c = 0; c < 6; ++c) basis(r * 6 + c, col) = d(r, c);
  };
  put_dyad(0, u_m, u_m);
  put_dyad(1, u_p, u_p);
  put_dyad(2, u_m, u_p);
  put_dyad(3, u_p, u_m);
  Eigen::Matrix<Complex, 36, 1> target;
  for (int r = 0; r < 6; ++r)
    for (int c = 0; c < 6; ++c) target(r * 6 + c) = w_peak(r, c);
  const Eigen::Matrix<Complex, 4, 1> coef =
      basis.colPivHouseholderQr().solve(target);

  const double nu_alpha_w = coef(0).real();  // k3 < 0 constituent
  const double nu_beta_w = coef(1).real();
  const double split_wigner = nu_alpha_w / (nu_alpha_w + nu_beta_w);
  const double split_rays = deposited_alpha / (deposited_alpha + deposited_beta);
  rep.add("boundary_split_match", std::abs(split_wigner - split_rays),
          tol(config, "boundary_split_match", 0.15));
  return rep;
}

}  // namespace

std::vector<std::string> verify_suite_names() {
  return {"spectral", "boundary", "wigner", "pdo",
          "transport", "calderon", "curved", "cross"};
}

RunReport verify_suite(const std::string& name, const ScenarioConfig* config,
                       int threads, const std::string& out_dir) {
  Timer timer;
  RunReport rep;
  if (name == "spectral")
    rep = verify_spectral(config);
  else if (name == "boundary")
    rep = verify_boundary(config);
  else if (name == "wigner")
    rep = verify_wigner(config, threads);
  else if (name == "pdo")
    rep = verify_pdo(config, out_dir);
  else if (name == "transport")
    rep = verify_transport(config, threads);
  else if (name == "calderon")
    rep = verify_calderon(config);
  else if (name == "curved")
    rep = verify_curved(config, threads);
  else if (name == "cross")
    rep = verify_cross(config, threads);
  else
    throw ConfigError("verify: unknown suite '" + name + "'");
  rep.seed = config ? config->seed : 0;
  rep.fingerprint = build_fingerprint();
  rep.elapsed_seconds = timer.seconds();
  return rep;
}

}  // namespace semimax
