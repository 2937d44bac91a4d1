#include "semimax/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "semimax/fft.hpp"
#include "semimax/parallel.hpp"

namespace semimax {

namespace {
constexpr double kPi = std::numbers::pi;
}

double WindowSpec::weight(int j) const {
  const int m = half_width;
  if (std::abs(j) > m) return 0.0;
  if (m == 0) return 1.0;
  const double u = static_cast<double>(std::abs(j)) / m;
  const double flat = 1.0 - taper;
  if (u <= flat || taper <= 0.0) return 1.0;
  const double s = std::sin(0.5 * kPi * (u - flat) / taper);
  return 1.0 - s * s;  // cos^2 roll-off, 1 at the flat edge, 0 at |j| = m
}

Vec3 WignerGrid::wavevector(std::size_t knode) const {
  const auto idx = k_indices(knode);
  Vec3 k = pinned_k;
  for (int a = 0; a < 3; ++a)
    if (axis_active[static_cast<size_t>(a)]) {
      const int m = (kshape[static_cast<size_t>(a)] - 1) / 2;
      k[a] = (idx[static_cast<size_t>(a)] - m) * dk[static_cast<size_t>(a)];
    }
  return k;
}

std::array<int, 3> WignerGrid::k_indices(std::size_t knode) const {
  const auto n2 = static_cast<std::size_t>(kshape[2]);
  const auto n1 = static_cast<std::size_t>(kshape[1]);
  return {static_cast<int>(knode / (n2 * n1)),
          static_cast<int>((knode / n2) % n1), static_cast<int>(knode % n2)};
}

std::size_t WignerGrid::nearest_knode(const Vec3& k) const {
  std::array<int, 3> idx = {0, 0, 0};
  for (int a = 0; a < 3; ++a) {
    if (!axis_active[static_cast<size_t>(a)]) continue;
    const int m = (kshape[static_cast<size_t>(a)] - 1) / 2;
    int s = static_cast<int>(std::lround(k[a] / dk[static_cast<size_t>(a)]));
    s = std::max(-m, std::min(m, s));
    idx[static_cast<size_t>(a)] = s + m;
  }
  return (static_cast<std::size_t>(idx[0]) * static_cast<std::size_t>(kshape[1]) +
          static_cast<std::size_t>(idx[1])) *
             static_cast<std::size_t>(kshape[2]) +
         static_cast<std::size_t>(idx[2]);
}

double WignerGrid::dk_volume() const {
  double v = 1.0;
  for (int a = 0; a < 3; ++a)
    if (axis_active[static_cast<size_t>(a)]) v *= dk[static_cast<size_t>(a)];
  return v;
}

namespace {

// Spectral power beyond the half-Nyquist range covered by the Wigner
// k lattice, per active axis, as a fraction of the total.
void check_resolution(const FieldSnapshot& field, double tol) {
  const Grid& g = field.grid;
  for (int a = 0; a < 3; ++a) {
    if (!g.axis_active(a)) continue;
    const int n = g.shape[static_cast<size_t>(a)];
    // Project |f|^2 spectrum onto axis a by summing FFT power over lines.
    std::vector<double> power(static_cast<size_t>(n), 0.0);
    std::vector<Complex> line(static_cast<size_t>(n));
    const std::size_t total = g.size();
    const std::size_t stride = [&] {
      std::array<int, 3> step = {0, 0, 0};
      step[static_cast<size_t>(a)] = 1;
      return g.index(step[0], step[1], step[2]);
    }();
    for (int c = 0; c < 6; ++c) {
      for (std::size_t base = 0; base < total; ++base) {
        const auto idx = g.unravel(base);
        if (idx[static_cast<size_t>(a)] != 0) continue;
        for (int i = 0; i < n; ++i)
          line[static_cast<size_t>(i)] = field.values(
              c, static_cast<Eigen::Index>(base + static_cast<std::size_t>(i) * stride));
        fft::transform(line.data(), {n, 1, 1}, -1);
        for (int i = 0; i < n; ++i)
          power[static_cast<size_t>(i)] += std::norm(line[static_cast<size_t>(i)]);
      }
    }
    double inside = 0.0, outside = 0.0;
    for (int i = 0; i < n; ++i) {
      const int s = fft::signed_index(i, n);
      const double kappa = 2.0 * kPi * s / (n * g.spacing[static_cast<size_t>(a)]);
      const double limit = kPi / (2.0 * g.spacing[static_cast<size_t>(a)]);
      (std::abs(kappa) <= limit ? inside : outside) += power[static_cast<size_t>(i)];
    }
    const double sum = inside + outside;
    if (sum > 0.0 && outside / sum > tol)
      throw std::domain_error(
          "wigner_transform: field oscillation not resolved by the Wigner "
          "k range (power beyond half-Nyquist)");
  }
}

}  // namespace

WignerGrid wigner_transform(const FieldSnapshot& field,
                            const std::vector<std::array<int, 3>>& probes,
                            const WindowSpec& window,
                            const WignerOptions& opts) {
  const Grid& g = field.grid;
  const double eps = field.epsilon_scale;
  if (eps <= 0.0) throw std::invalid_argument("wigner_transform: eps <= 0");
  if (window.half_width < 1)
    throw std::invalid_argument("wigner_transform: window too small");
  const int m = window.half_width;
  const int len = window.length();

  for (int a = 0; a < 3; ++a)
    if (g.axis_active(a) && len > g.shape[static_cast<size_t>(a)])
      throw std::invalid_argument("wigner_transform: window exceeds grid");

  for (const auto& p : probes) {
    for (int a = 0; a < 3; ++a) {
      const auto ua = static_cast<size_t>(a);
      if (p[ua] < 0 || p[ua] >= g.shape[ua])
        throw std::invalid_argument("wigner_transform: probe outside grid");
      if (g.axis_active(a) && !g.periodic[ua] &&
          (p[ua] - m < 0 || p[ua] + m >= g.shape[ua]))
        throw std::invalid_argument(
            "wigner_transform: window leaves the grid at a probe");
    }
  }

  if (opts.validate_resolution) check_resolution(field, opts.resolution_power_tol);

  WignerGrid w;
  w.epsilon_scale = eps;
  w.window = window;
  double prefactor = 1.0;
  for (int a = 0; a < 3; ++a) {
    const auto ua = static_cast<size_t>(a);
    w.axis_active[ua] = g.axis_active(a);
    if (g.axis_active(a)) {
      w.kshape[ua] = len;
      w.dk[ua] = kPi * eps / (len * g.spacing[ua]);
      prefactor *= g.spacing[ua] / (kPi * eps);
    }
  }
  w.probe_node = probes;
  w.probes.resize(probes.size());
  for (std::size_t i = 0; i < probes.size(); ++i) w.probes[i] = g.node(probes[i]);
  w.values.assign(probes.size() * w.kcount(), CMat6::Zero());

  const std::array<int, 3> fshape = {w.kshape[0], w.kshape[1], w.kshape[2]};
  const std::size_t ksize = w.kcount();

  parallel_for(probes.size(), opts.threads, [&](std::size_t pi) {
    const auto& pnode = probes[pi];
    // Windowed pair products Y_j = w_j f(x - j h) (x) f*(x + j h) laid out
    // at FFT bin (j mod M) per axis.
    std::vector<CMat6> pair(ksize, CMat6::Zero());
    std::array<int, 3> j{};
    for (j[0] = -(w.axis_active[0] ? m : 0); j[0] <= (w.axis_active[0] ? m : 0); ++j[0])
      for (j[1] = -(w.axis_active[1] ? m : 0); j[1] <= (w.axis_active[1] ? m : 0); ++j[1])
        for (j[2] = -(w.axis_active[2] ? m : 0); j[2] <= (w.axis_active[2] ? m : 0); ++j[2]) {
          double wt = 1.0;
          std::array<int, 3> minus{}, plus{};
          bool ok = true;
          for (int a = 0; a < 3; ++a) {
            const auto ua = static_cast<size_t>(a);
            if (!w.axis_active[ua]) {
              minus[ua] = pnode[ua];
              plus[ua] = pnode[ua];
              continue;
            }
            wt *= window.weight(j[ua]);
            int lo = pnode[ua] - j[ua];
            int hi = pnode[ua] + j[ua];
            if (g.periodic[ua]) {
              const int n = g.shape[ua];
              lo = ((lo % n) + n) % n;
              hi = ((hi % n) + n) % n;
            } else if (lo < 0 || hi < 0 || lo >= g.shape[ua] || hi >= g.shape[ua]) {
              ok = false;
              break;
            }
            minus[ua] = lo;
            plus[ua] = hi;
          }
          if (!ok || wt == 0.0) continue;
          const CVec6 fm = field.at(minus);
          const CVec6 fp = field.at(plus);
          std::size_t bin = 0;
          for (int a = 0; a < 3; ++a) {
            const auto ua = static_cast<size_t>(a);
            const int b = w.axis_active[ua] ? fft::bin_of_signed(j[ua], len) : 0;
            bin = bin * static_cast<std::size_t>(w.kshape[ua]) + static_cast<std::size_t>(b);
          }
          pair[bin] = wt * (fm * fp.adjoint());
        }

    // Backward FFT (positive exponent) per matrix entry, then reorder the
    // bins into signed order and scale.
    std::vector<Complex> buf(ksize);
    std::vector<CMat6> out(ksize, CMat6::Zero());
    for (int r = 0; r < 6; ++r)
      for (int c = 0; c < 6; ++c) {
        for (std::size_t q = 0; q < ksize; ++q) buf[q] = pair[q](r, c);
        fft::transform(buf.data(), fshape, +1);
        for (std::size_t q = 0; q < ksize; ++q) out[q](r, c) = buf[q];
      }
    for (std::size_t q = 0; q < ksize; ++q) {
      // q is a raw FFT bin; map to the signed node index.
      const auto idx = w.k_indices(q);
      std::size_t dst = 0;
      for (int a = 0; a < 3; ++a) {
        const auto ua = static_cast<size_t>(a);
        int s = idx[ua];
        if (w.axis_active[ua]) s = fft::signed_index(idx[ua], len) + m;
        dst = dst * static_cast<std::size_t>(w.kshape[ua]) + static_cast<std::size_t>(s);
      }
      w.values[pi * ksize + dst] = prefactor * out[q];
    }
  });

  return w;
}

std::vector<std::array<int, 3>> all_probes(const Grid& grid,
                                           const WindowSpec& window) {
  std::vector<std::array<int, 3>> probes;
  const int m = window.half_width;
  for (std::size_t f = 0; f < grid.size(); ++f) {
    const auto n = grid.unravel(f);
    bool ok = true;
    for (int a = 0; a < 3 && ok; ++a) {
      const auto ua = static_cast<size_t>(a);
      if (grid.axis_active(a) && !grid.periodic[ua] &&
          (n[ua] - m < 0 || n[ua] + m >= grid.shape[ua]))
        ok = false;
    }
    if (ok) probes.push_back(n);
  }
  return probes;
}

ModeDensities project_modes(const WignerGrid& w, const MediumModel& medium,
                            double k_min) {
  ModeDensities md;
  md.kcount = w.kcount();
  md.probe_count = w.probes.size();
  md.mu.assign(w.node_count(), {});
  md.skipped.assign(w.node_count(), false);

  for (std::size_t p = 0; p < w.probes.size(); ++p) {
    const Vec3& x = w.probes[p];
    for (std::size_t n = 0; n < md.kcount; ++n) {
      const Vec3 k = w.wavevector(n);
      const std::size_t node = p * md.kcount + n;
      if (k.norm() < k_min) {
        md.skipped[node] = true;
        continue;
      }
      const EigenSystem es = eigensystem(medium, x, k, k_min);
      const CMat6& wm = w.at(p, n);
      for (Mode m : kAllModes) {
        const Vec6& dv = es.dual(m);
        const Complex val = dv.cast<Complex>().dot(wm * dv.cast<Complex>());
        md.mu[node][static_cast<size_t>(mode_index(m))] = val.real();
        md.max_imag = std::max(md.max_imag, std::abs(val.imag()));
      }
    }
  }
  return md;
}

Complex cross_coherence(const WignerGrid& w, const MediumModel& medium,
                        std::size_t probe, std::size_t knode, Mode a, Mode b,
                        double k_min) {
  const Vec3 k = w.wavevector(knode);
  if (k.norm() < k_min)
    throw std::domain_error("cross_coherence: node below the k floor");
  const EigenSystem es = eigensystem(medium, w.probes[probe], k, k_min);
  const CVec6 da = es.dual(a).cast<Complex>();
  const CVec6 db = es.dual(b).cast<Complex>();
  return da.dot(w.at(probe, knode) * db);
}

ShellMassReport shell_mass_fraction(const ModeDensities& mu,
                                    const WignerGrid& w,
                                    const MediumModel& medium, double omega,
                                    double band) {
  if (band <= 0.0)
    throw std::invalid_argument("shell_mass_fraction: band must be > 0");
  ShellMassReport rep;
  std::array<double, 6> in_band{};
  for (std::size_t p = 0; p < mu.probe_count; ++p) {
    const Vec3& x = w.probes[p];
    const double v = medium.speed(x);
    for (std::size_t n = 0; n < mu.kcount; ++n) {
      const std::size_t node = p * mu.kcount + n;
      if (mu.skipped[node]) continue;
      const double vk = v * w.wavevector(n).norm();
      const bool on_shell = std::abs(vk - omega) <= band * omega;
      for (int m = 0; m < 6; ++m) {
        const double mass = std::abs(mu.mu[node][static_cast<size_t>(m)]);
        rep.total_mass[static_cast<size_t>(m)] += mass;
        if (on_shell) in_band[static_cast<size_t>(m)] += mass;
      }
    }
  }
  for (int m = 0; m < 6; ++m) {
    const auto um = static_cast<size_t>(m);
    if (rep.total_mass[um] > 0.0)
      rep.fraction[um] = in_band[um] / rep.total_mass[um];
  }
  return rep;
}

std::vector<double> trace_density(const WignerGrid& w) {
  std::vector<double> rho(w.node_count());
  for (std::size_t i = 0; i < rho.size(); ++i) rho[i] = w.values[i].trace().real();
  return rho;
}

std::vector<double> energy_trace_density(const WignerGrid& w,
                                         const MediumModel& medium) {
  std::vector<double> rho(w.node_count());
  const std::size_t kc = w.kcount();
  for (std::size_t p = 0; p < w.probes.size(); ++p) {
    const CMat6 a0 = medium.material_matrix(w.probes[p]).cast<Complex>();
    for (std::size_t n = 0; n < kc; ++n)
      rho[p * kc + n] = (a0 * w.at(p, n)).trace().real();
  }
  return rho;
}

namespace {

// Normalized Gaussian kernel on a uniform lattice, truncated at 6 sigma.
std::vector<double> gaussian_kernel(double sigma, double step) {
  const int r = std::max(1, static_cast<int>(std::ceil(6.0 * sigma / step)));
  std::vector<double> ker(static_cast<size_t>(2 * r + 1));
  double sum = 0.0;
  for (int i = -r; i <= r; ++i) {
    const double u = i * step / sigma;
    ker[static_cast<size_t>(i + r)] = std::exp(-0.5 * u * u);
    sum += ker[static_cast<size_t>(i + r)];
  }
  for (double& v : ker) v /= sum;
  return ker;
}

// Separable convolution along one axis of a dense [outer][n][inner] block.
// Wraps on periodic axes, zero pads otherwise.
void convolve_axis(std::vector<double>& data, std::size_t outer, std::size_t n,
                   std::size_t inner, const std::vector<double>& kernel,
                   bool periodic) {
  const int r = (static_cast<int>(kernel.size()) - 1) / 2;
  std::vector<double> line(n);
  for (std::size_t o = 0; o < outer; ++o)
    for (std::size_t in = 0; in < inner; ++in) {
      for (std::size_t i = 0; i < n; ++i)
        line[i] = data[(o * n + i) * inner + in];
      for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int s = -r; s <= r; ++s) {
          long long q = static_cast<long long>(i) + s;
          if (periodic) {
            const auto nn = static_cast<long long>(n);
            q = ((q % nn) + nn) % nn;
          } else if (q < 0 || q >= static_cast<long long>(n)) {
            continue;  // zero pad
          }
          acc += kernel[static_cast<size_t>(s + r)] * line[static_cast<size_t>(q)];
        }
        data[(o * n + i) * inner + in] = acc;
      }
    }
}

}  // namespace

HusimiDensity husimi_smooth(const WignerGrid& w, const SmoothWidths& widths) {
  for (int a = 0; a < 3; ++a) {
    const auto ua = static_cast<size_t>(a);
    if (!w.axis_active[ua]) continue;
    if (widths.sigma_x[ua] * widths.sigma_k[ua] < 0.5 * w.epsilon_scale - 1e-15)
      throw std::invalid_argument(
          "husimi_smooth: sigma_x * sigma_k < eps/2 on an active axis");
  }
  if (!w.probes_form_lattice && w.probes.size() > 1)
    throw std::invalid_argument(
        "husimi_smooth: probes must form a uniform lattice");

  HusimiDensity h;
  h.kcount = w.kcount();
  h.probe_count = w.probes.size();
  h.values = trace_density(w);

  // k axes (fastest varying), then probe axes.  The discrete transform is
  // periodic in k with period M*dk, so the k convolution is circular.
  std::size_t inner = 1;
  for (int a = 2; a >= 0; --a) {
    const auto ua = static_cast<size_t>(a);
    if (!w.axis_active[ua]) continue;
    const auto n = static_cast<std::size_t>(w.kshape[ua]);
    const std::size_t outer = h.values.size() / (n * inner);
    convolve_axis(h.values, outer, n, inner,
                  gaussian_kernel(widths.sigma_k[ua], w.dk[ua]), true);
    inner *= n;
  }
  if (w.probes.size() > 1) {
    inner = h.kcount;
    for (int a = 2; a >= 0; --a) {
      const auto ua = static_cast<size_t>(a);
      if (w.probe_shape[ua] <= 1) continue;
      const auto n = static_cast<std::size_t>(w.probe_shape[ua]);
      const std::size_t outer = h.values.size() / (n * inner);
      convolve_axis(h.values, outer, n, inner,
                    gaussian_kernel(widths.sigma_x[ua], w.probe_spacing[ua]),
                    w.probe_periodic[ua]);
      inner *= n;
    }
  }

  h.min_value = h.values.empty() ? 0.0 : *std::min_element(h.values.begin(), h.values.end());
  return h;
}

}  // namespace semimax
