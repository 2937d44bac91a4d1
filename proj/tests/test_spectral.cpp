#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "semimax/maxwell.hpp"
#include "semimax/spectral.hpp"

using namespace semimax;

namespace {

std::mt19937_64 rng(20240817u);

double uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Vec3 random_point() {
  return Vec3(uniform(-2, 2), uniform(-2, 2), uniform(-2, 2));
}

Vec3 random_wavevector(double kmin = 0.05, double kmax = 5.0) {
  Vec3 k;
  do {
    k = Vec3(uniform(-1, 1), uniform(-1, 1), uniform(-1, 1));
  } while (k.norm() < 1e-3);
  k.normalize();
  return uniform(kmin, kmax) * k;
}

// Independent dense oracle: generalized symmetric eigenproblem
// (sum k_j A^j) v = lambda A^0 v, which is the eigensystem of L.
struct DenseOracle {
  Eigen::Matrix<double, 6, 1> eigenvalues;
  Eigen::Matrix<double, 6, 6> eigenvectors;  // A^0-orthonormal columns
};

DenseOracle dense_eigensystem(double eps, double eta, const Vec3& k) {
  Mat6 a = Mat6::Zero();
  for (int j = 0; j < 3; ++j) a += k[j] * maxwell::flux_matrix(j);
  const Mat6 a0 = maxwell::material_matrix(eps, eta);
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat6> solver(a, a0);
  return {solver.eigenvalues(), solver.eigenvectors()};
}

}  // namespace

TEST_CASE("constant matrices have the stated structure") {
  for (int j = 0; j < 3; ++j) {
    const Mat3 q = maxwell::cross_matrix(j);
    CHECK((q + q.transpose()).norm() == 0.0);
    // Q_j x == e_j x x
    const Vec3 x(0.3, -1.2, 0.7);
    Vec3 e = Vec3::Zero();
    e[j] = 1.0;
    CHECK((q * x - e.cross(x)).norm() == 0.0);

    const Mat6 a = maxwell::flux_matrix(j);
    CHECK((a - a.transpose()).norm() == 0.0);
  }

  const Mat6 a0 = maxwell::material_matrix(2.0, 3.0);
  Eigen::SelfAdjointEigenSolver<Mat6> es(a0);
  CHECK(es.eigenvalues().minCoeff() > 0.0);

  const Mat6& ab = maxwell::boundary_coupling();
  CHECK(ab(3, 4) == -1.0);
  CHECK(ab(4, 3) == 1.0);
  double off = 0.0;
  for (int r = 0; r < 6; ++r)
    for (int c = 0; c < 6; ++c)
      if (!((r == 3 && c == 4) || (r == 4 && c == 3))) off += std::abs(ab(r, c));
  CHECK(off == 0.0);

  const Mat6& m = maxwell::tangential_projector();
  CHECK((m * m - m).norm() == 0.0);
  CHECK((m - m.transpose()).norm() == 0.0);
}

TEST_CASE("dispersion matrix: vacuum z-direction reduces to the third flux matrix") {
  const auto medium = MediumModel::homogeneous(1.0, 1.0);
  const Mat6 l = dispersion_matrix(medium, Vec3::Zero(), Vec3(0, 0, 1));
  CHECK((l - maxwell::flux_matrix(2)).norm() == 0.0);
}

TEST_CASE("dispersion matrix: diagonal blocks vanish, eigenvalues match oracle") {
  for (int trial = 0; trial < 200; ++trial) {
    const double eps = uniform(0.3, 4.0);
    const double eta = uniform(0.3, 4.0);
    const auto medium = MediumModel::homogeneous(eps, eta);
    const Vec3 x = random_point();
    const Vec3 k = random_wavevector();
    const Mat6 l = dispersion_matrix(medium, x, k);

    CHECK(l.topLeftCorner<3, 3>().norm() == 0.0);
    CHECK(l.bottomRightCorner<3, 3>().norm() == 0.0);

    const double vk = medium.speed(x) * k.norm();
    const auto oracle = dense_eigensystem(eps, eta, k);
    Eigen::Matrix<double, 6, 1> expected;
    expected << -vk, -vk, 0, 0, vk, vk;
    CHECK((oracle.eigenvalues - expected).cwiseAbs().maxCoeff() <= 1e-10 * std::max(1.0, vk));
  }
}

TEST_CASE("dispersion matrix rejects degenerate input") {
  const auto medium = MediumModel::homogeneous(1.0, 1.0);
  CHECK_THROWS_AS(dispersion_matrix(medium, Vec3::Zero(), Vec3::Zero()),
                  std::domain_error);

  const MediumModel bad(ScalarField([](const Vec3& x) { return x[0]; }),
                        ScalarField::constant(1.0));
  CHECK_THROWS_AS(dispersion_matrix(bad, Vec3(-1, 0, 0), Vec3(0, 0, 1)),
                  std::domain_error);
}

TEST_CASE("propagation frame: axis conventions") {
  const auto f3 = propagation_frame(Vec3(0, 0, 1));
  CHECK((f3.khat - Vec3(0, 0, 1)).norm() == 0.0);
  CHECK((f3.z1 - Vec3(1, 0, 0)).norm() <= 1e-15);
  CHECK((f3.z2 - Vec3(0, 1, 0)).norm() <= 1e-15);

  const auto f1 = propagation_frame(Vec3(1, 0, 0));
  CHECK((f1.khat - Vec3(1, 0, 0)).norm() <= 1e-15);
  CHECK((f1.z1 - Vec3(0, 0, -1)).norm() <= 1e-15);
  CHECK((f1.z2 - Vec3(0, 1, 0)).norm() <= 1e-15);

  // Deterministic azimuth at the lower pole as well.
  const auto fm = propagation_frame(Vec3(0, 0, -2));
  CHECK(fm.phi == 0.0);

  CHECK_THROWS_AS(propagation_frame(Vec3(0, 0, 1e-12)), std::domain_error);
}

TEST_CASE("propagation frame: orthonormality over random directions") {
  for (int trial = 0; trial < 1000; ++trial) {
    const auto f = propagation_frame(random_wavevector());
    Mat3 g;
    g.col(0) = f.khat;
    g.col(1) = f.z1;
    g.col(2) = f.z2;
    CHECK(((g.transpose() * g) - Mat3::Identity()).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("eigensystem: closed-form examples") {
  const auto m28 = MediumModel::homogeneous(2.0, 8.0);
  const auto es = eigensystem(m28, Vec3::Zero(), Vec3(0, 0, 1));
  Vec6 expected;
  expected << 0.5, 0, 0, 0, 0.25, 0;
  CHECK((es.basis(Mode::plus1) - expected).cwiseAbs().maxCoeff() <= 1e-15);

  const auto vac = MediumModel::homogeneous(1.0, 1.0);
  const auto es2 = eigensystem(vac, Vec3::Zero(), Vec3(0, 0, 2));
  CHECK(es2.omega_plus == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(es2.omega_minus == doctest::Approx(-2.0).epsilon(1e-15));
  CHECK(es2.omega_zero == 0.0);
}

TEST_CASE("eigensystem: residuals, normalization, completeness, oracle (1000 samples)") {
  double worst_residual = 0.0;
  double worst_gram = 0.0;
  double worst_flux = 0.0;
  double worst_completeness = 0.0;
  double worst_reconstruction = 0.0;
  double worst_oracle = 0.0;

  for (int trial = 0; trial < 1000; ++trial) {
    const double eps = uniform(0.3, 4.0);
    const double eta = uniform(0.3, 4.0);
    const auto medium = MediumModel::homogeneous(eps, eta);
    const Vec3 x = random_point();
    const Vec3 k = random_wavevector();
    const Mat6 l = dispersion_matrix(medium, x, k);
    const auto es = eigensystem(medium, x, k);
    const double scale = l.norm();

    Mat6 completeness = Mat6::Zero();
    Mat6 reconstruction = Mat6::Zero();
    for (Mode m : kAllModes) {
      const Vec6& b = es.basis(m);
      const Vec6& d = es.dual(m);
      const double w = es.omega(m);
      worst_residual = std::max(worst_residual, (l * b - w * b).norm() / (scale * b.norm()));
      completeness += b * d.transpose();
      reconstruction += w * b * d.transpose();
    }
    worst_completeness = std::max(worst_completeness,
                                  (completeness - Mat6::Identity()).cwiseAbs().maxCoeff());
    worst_reconstruction = std::max(worst_reconstruction,
                                    (reconstruction - l).cwiseAbs().maxCoeff() / scale);

    const auto rep = normalization_report(es, medium, x, k);
    worst_gram = std::max(worst_gram, (rep.gram - Mat6::Identity()).cwiseAbs().maxCoeff());
    const Vec3 vk = medium.speed(x) * (k / k.norm());
    worst_flux = std::max(worst_flux, (rep.flux_plus1 - vk).cwiseAbs().maxCoeff());
    worst_flux = std::max(worst_flux, (rep.flux_plus2 - vk).cwiseAbs().maxCoeff());

    // Dense-solver cross-check: eigenvalues and the eigenspace projectors.
    const auto oracle = dense_eigensystem(eps, eta, k);
    const double w = es.omega_plus;
    Eigen::Matrix<double, 6, 1> expected;
    expected << -w, -w, 0, 0, w, w;
    worst_oracle = std::max(worst_oracle,
                            (oracle.eigenvalues - expected).cwiseAbs().maxCoeff() /
                                std::max(1.0, w));
    const Mat6 a0 = maxwell::material_matrix(eps, eta);
    for (int group = 0; group < 3; ++group) {
      // groups (ascending): {minus, zero, plus} eigenvalue pairs
      const Mat6 p_oracle = oracle.eigenvectors.col(2 * group) *
                                oracle.eigenvectors.col(2 * group).transpose() * a0 +
                            oracle.eigenvectors.col(2 * group + 1) *
                                oracle.eigenvectors.col(2 * group + 1).transpose() * a0;
      static const Mode groups[3][2] = {{Mode::minus1, Mode::minus2},
                                        {Mode::zero1, Mode::zero2},
                                        {Mode::plus1, Mode::plus2}};
      Mat6 p_closed = Mat6::Zero();
      for (Mode m : groups[group])
        p_closed += es.basis(m) * es.dual(m).transpose();
      worst_oracle = std::max(worst_oracle, (p_oracle - p_closed).cwiseAbs().maxCoeff());
    }
  }

  CHECK(worst_residual <= 1e-12);
  CHECK(worst_gram <= 1e-12);
  CHECK(worst_flux <= 1e-10);
  CHECK(worst_completeness <= 1e-12);
  CHECK(worst_reconstruction <= 1e-12);
  CHECK(worst_oracle <= 1e-10);
}

TEST_CASE("normalization report: boundary pairings") {
  const auto vac = MediumModel::homogeneous(1.0, 1.0);
  const auto es = eigensystem(vac, Vec3::Zero(), Vec3(0, 0, 1));
  const auto rep = normalization_report(es, vac, Vec3::Zero(), Vec3(0, 0, 1));
  CHECK(rep.boundary_pairing == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(rep.normal_flux_plus1 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(rep.ok(1e-10));
}

TEST_CASE("boundary pairings over random on-shell tangential wave vectors") {
  // (A_b b_+^1(k), b_+^1(k)) = 0 and (A^3 b_+^1(k+), b_+^1(k-)) = 0,
  // with k+- = (k', +-k3) the two shell roots for a given k'.
  const Mat6& ab = maxwell::boundary_coupling();
  const Mat6& a3 = maxwell::flux_matrix(2);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const double eps = uniform(0.3, 4.0);
    const double eta = uniform(0.3, 4.0);
    const auto medium = MediumModel::homogeneous(eps, eta);
    const double v = medium.speed(Vec3::Zero());
    const double omega = uniform(0.5, 3.0);
    // tangential part strictly inside the hyperbolic disc
    const double kp_max = 0.95 * omega / v;
    Eigen::Vector2d kp(uniform(-kp_max, kp_max), uniform(-kp_max, kp_max));
    if (kp.norm() >= kp_max) kp *= 0.9 * kp_max / kp.norm();
    const double k3 = std::sqrt(omega * omega / (v * v) - kp.squaredNorm());
    const Vec3 kplus(kp[0], kp[1], k3);
    const Vec3 kminus(kp[0], kp[1], -k3);

    const auto es_plus = eigensystem(medium, Vec3::Zero(), kplus);
    const auto es_minus = eigensystem(medium, Vec3::Zero(), kminus);
    const Vec6& bp = es_plus.basis(Mode::plus1);
    const Vec6& bm = es_minus.basis(Mode::plus1);

    worst = std::max(worst, std::abs(bp.dot(ab * bp)));
    worst = std::max(worst, std::abs(bm.dot(ab * bm)));
    worst = std::max(worst, std::abs(bm.dot(a3 * bp)));
    worst = std::max(worst, std::abs(bm.dot(ab * bp)));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("invariants: homogeneity, coefficient dependence, parity (1000 samples)") {
  for (int trial = 0; trial < 1000; ++trial) {
    const double eps = uniform(0.3, 4.0);
    const double eta = uniform(0.3, 4.0);
    const auto medium = MediumModel::homogeneous(eps, eta);
    const Vec3 x = random_point();
    const Vec3 k = random_wavevector();
    const double s = uniform(0.1, 10.0);

    const Mat6 l = dispersion_matrix(medium, x, k);
    const Mat6 ls = dispersion_matrix(medium, x, s * k);
    CHECK((ls - s * l).cwiseAbs().maxCoeff() <= 1e-12 * ls.norm());

    // L depends on x only through the coefficient values.
    const Vec3 x2 = random_point();
    CHECK((dispersion_matrix(medium, x2, k) - l).norm() == 0.0);

    // Eigenvectors are invariant under k -> s k.
    const auto es = eigensystem(medium, x, k);
    const auto es_s = eigensystem(medium, x, s * k);
    for (Mode m : kAllModes)
      CHECK((es.basis(m) - es_s.basis(m)).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(es_s.omega_plus == doctest::Approx(s * es.omega_plus).epsilon(1e-12));

    // Parity: |k| is even, and the frame stays orthonormal at -k.
    const auto es_neg = eigensystem(medium, x, -k);
    CHECK(es_neg.omega_plus == doctest::Approx(es.omega_plus).epsilon(1e-12));
    const auto f = propagation_frame(-k);
    Mat3 g;
    g.col(0) = f.khat;
    g.col(1) = f.z1;
    g.col(2) = f.z2;
    CHECK(((g.transpose() * g) - Mat3::Identity()).cwiseAbs().maxCoeff() <= 1e-12);
    // The frame comes from the closed polar form at the mapped angles.
    const double st = std::sin(f.theta), ct = std::cos(f.theta);
    const double sp = std::sin(f.phi), cp = std::cos(f.phi);
    CHECK((f.z1 - Vec3(ct * cp, ct * sp, -st)).cwiseAbs().maxCoeff() <= 1e-14);
    CHECK((f.z2 - Vec3(-sp, cp, 0.0)).cwiseAbs().maxCoeff() <= 1e-14);
  }
}

TEST_CASE("medium model: speed identity and gradients") {
  // smooth non-trivial coefficients with analytic gradients
  ScalarField eps([](const Vec3& x) { return 2.0 + 0.3 * std::sin(x[0]) + 0.1 * x[2]; },
                  [](const Vec3& x) {
                    return Vec3(0.3 * std::cos(x[0]), 0.0, 0.1);
                  });
  ScalarField eta([](const Vec3& x) { return 1.5 + 0.2 * std::cos(x[1]); },
                  [](const Vec3& x) {
                    return Vec3(0.0, -0.2 * std::sin(x[1]), 0.0);
                  });
  const MediumModel medium(eps, eta);

  for (int trial = 0; trial < 200; ++trial) {
    const Vec3 x = random_point();
    CHECK(medium.speed(x) * std::sqrt(medium.epsilon(x) * medium.eta(x)) ==
          doctest::Approx(1.0).epsilon(1e-14));

    // analytic gradient vs central difference, O(h^2)
    const double h = 1e-5;
    for (int a = 0; a < 3; ++a) {
      Vec3 xp = x, xm = x;
      xp[a] += h;
      xm[a] -= h;
      const double fd = (medium.speed(xp) - medium.speed(xm)) / (2 * h);
      CHECK(medium.grad_speed(x)[a] == doctest::Approx(fd).epsilon(1e-7));
    }
  }

  // fields without analytic gradients fall back to central differences
  ScalarField plain([](const Vec3& x) { return 1.0 + 0.25 * x[0] * x[0]; });
  const Vec3 x0(0.7, 0.0, 0.0);
  CHECK(plain.gradient(x0)[0] == doctest::Approx(0.5 * 0.7).epsilon(1e-8));
}
