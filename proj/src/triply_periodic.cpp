#include "slabewald/triply_periodic.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "slabewald/errors.hpp"
#include "slabewald/kernels.hpp"
#include "slabewald/parallel.hpp"

namespace slabewald {

namespace {
constexpr double kPi = std::numbers::pi;
using cplx = std::complex<double>;

double wavenumber(int i, int n, double L, bool deriv) {
  if (deriv && n % 2 == 0 && i == n / 2) return 0.0;
  int m = i <= n / 2 ? i : i - n;
  return 2.0 * kPi * m / L;
}
}  // namespace

void solve_triply_periodic(int nx, int ny, int nz, double lx, double ly, double lz, double eps, const double* rho,
                           double* phi) {
  const int nzh = nz / 2 + 1;
  const std::size_t ns = std::size_t(nx) * ny * nzh, nr = std::size_t(nx) * ny * nz;
  std::vector<cplx> spec(ns);
  std::vector<double> in(rho, rho + nr);
  fftw_plan f = fftw_plan_dft_r2c_3d(nx, ny, nz, in.data(), reinterpret_cast<fftw_complex*>(spec.data()),
                                     FFTW_ESTIMATE);
  fftw_execute(f);
  fftw_destroy_plan(f);
  const double norm = 1.0 / double(nr);
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j)
      for (int k = 0; k < nzh; ++k) {
        double kx = wavenumber(i, nx, lx, false), ky = wavenumber(j, ny, ly, false), kz = 2.0 * kPi * k / lz;
        double k2 = kx * kx + ky * ky + kz * kz;
        auto& s = spec[(std::size_t(i) * ny + j) * nzh + k];
        s = k2 > 0.0 ? s * norm / (eps * k2) : 0.0;
      }
  fftw_plan b = fftw_plan_dft_c2r_3d(nx, ny, nz, reinterpret_cast<fftw_complex*>(spec.data()), phi, FFTW_ESTIMATE);
  fftw_execute(b);
  fftw_destroy_plan(b);
}

struct TriplyPeriodicEwald::Plans {
  fftw_plan r2c = nullptr, c2r = nullptr;
  mutable std::vector<double> real;
  mutable std::vector<cplx> spec, work;
  ~Plans() {
    if (r2c) fftw_destroy_plan(r2c);
    if (c2r) fftw_destroy_plan(c2r);
  }
};

TriplyPeriodicEwald::TriplyPeriodicEwald(double L, double eps, double g_w, double xi, double delta)
    : L_(L), eps_(eps), g_w_(g_w) {
  if (!(L > 0.0) || !(eps > 0.0) || !(xi > 0.0)) throw InputError("triply periodic: bad parameters");
  Profile prof = profile_for(delta);
  double g_t = split_widths(xi, g_w);
  n_ = fft_friendly_size(std::max(8, int(std::lround(L / (g_t / prof.h_ratio)))));
  h_ = L / n_;
  g_t_ = prof.h_ratio * h_;
  if (!(g_t_ > g_w)) throw InputError("triply periodic: grid resolves g_w");
  xi_ = 0.5 / std::sqrt(g_t_ * g_t_ - g_w * g_w);
  radius_ = 0.5 * prof.n_g * h_;
  r_cut_ = tune_cutoff(xi_, g_w, delta) + prof.n_sigma() * g_w;
  if (!(r_cut_ < 0.5 * L)) throw ConstraintError("near_box", "triply periodic: r_cut exceeds half the box");
  plans_ = std::make_unique<Plans>();
  const std::size_t nr = std::size_t(n_) * n_ * n_, ns = std::size_t(n_) * n_ * (n_ / 2 + 1);
  plans_->real.resize(nr);
  plans_->spec.resize(ns);
  plans_->work.resize(ns);
  plans_->r2c = fftw_plan_dft_r2c_3d(n_, n_, n_, plans_->real.data(),
                                     reinterpret_cast<fftw_complex*>(plans_->spec.data()), FFTW_MEASURE);
  plans_->c2r = fftw_plan_dft_c2r_3d(n_, n_, n_, reinterpret_cast<fftw_complex*>(plans_->work.data()),
                                     plans_->real.data(), FFTW_MEASURE);
}

TriplyPeriodicEwald::~TriplyPeriodicEwald() = default;

void TriplyPeriodicEwald::compute(const ChargeSet& c, std::vector<double>& phi,
                                  std::vector<std::array<double, 3>>& E) const {
  const std::size_t N = c.size();
  const int n = n_, nh = n / 2 + 1;
  const std::size_t nr = std::size_t(n) * n * n;
  phi.assign(N, 0.0);
  E.assign(N, {0.0, 0.0, 0.0});
  if (N == 0) return;

  // stencil of one charge: node offsets and separable Gaussian factors
  const int m = int(std::ceil(radius_ / h_));
  const int w = 2 * m + 1;
  const double c3 = std::pow(2.0 * kPi * g_t_ * g_t_, -0.5);
  auto stencil = [&](double p, int* idx, double* f) {
    double u = p / h_;
    int i0 = int(std::floor(u));
    for (int a = 0; a < w; ++a) {
      int i = i0 - m + a;
      double d = (i - u) * h_;
      idx[a] = ((i % n) + n) % n;
      f[a] = std::abs(d) <= radius_ ? c3 * std::exp(-0.5 * d * d / (g_t_ * g_t_)) : 0.0;
    }
  };

  auto& grid = plans_->real;
  std::fill(grid.begin(), grid.end(), 0.0);
  std::vector<int> ix(w), iy(w), iz(w);
  std::vector<double> fx(w), fy(w), fz(w);
  for (std::size_t k = 0; k < N; ++k) {
    stencil(c.x[k], ix.data(), fx.data());
    stencil(c.y[k], iy.data(), fy.data());
    stencil(c.z[k], iz.data(), fz.data());
    for (int a = 0; a < w; ++a) {
      if (fx[a] == 0.0) continue;
      for (int b = 0; b < w; ++b) {
        double fab = c.q[k] * fx[a] * fy[b];
        if (fab == 0.0) continue;
        double* row = &grid[(std::size_t(ix[a]) * n + iy[b]) * n];
        for (int d = 0; d < w; ++d) row[iz[d]] += fab * fz[d];
      }
    }
  }

  fftw_execute(plans_->r2c);
  const double norm = 1.0 / double(nr);
  auto& spec = plans_->spec;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < nh; ++k) {
        double kx = wavenumber(i, n, L_, false), ky = wavenumber(j, n, L_, false), kz = 2.0 * kPi * k / L_;
        double k2 = kx * kx + ky * ky + kz * kz;
        auto& s = spec[(std::size_t(i) * n + j) * nh + k];
        s = k2 > 0.0 ? s * norm / (eps_ * k2) : 0.0;
      }

  std::vector<std::vector<double>> fields(4, std::vector<double>(nr));
  for (int f = 0; f < 4; ++f) {
    auto& wk = plans_->work;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < nh; ++k) {
          std::size_t id = (std::size_t(i) * n + j) * nh + k;
          if (f == 0) {
            wk[id] = spec[id];
            continue;
          }
          double kk = f == 1 ? wavenumber(i, n, L_, true) : f == 2 ? wavenumber(j, n, L_, true)
                                                                    : (n % 2 == 0 && k == n / 2 ? 0.0 : 2.0 * kPi * k / L_);
          wk[id] = cplx(0.0, -kk) * spec[id];
        }
    fftw_execute(plans_->c2r);
    fields[f] = grid;
  }

  const double h3 = h_ * h_ * h_;
  parallel_for(N, [&](std::size_t b0, std::size_t e0) {
    std::vector<int> jx(w), jy(w), jz(w);
    std::vector<double> gx(w), gy(w), gz(w);
    for (std::size_t k = b0; k < e0; ++k) {
      stencil(c.x[k], jx.data(), gx.data());
      stencil(c.y[k], jy.data(), gy.data());
      stencil(c.z[k], jz.data(), gz.data());
      double acc[4] = {0, 0, 0, 0};
      for (int a = 0; a < w; ++a) {
        if (gx[a] == 0.0) continue;
        for (int b = 0; b < w; ++b) {
          double fab = gx[a] * gy[b];
          if (fab == 0.0) continue;
          std::size_t base = (std::size_t(jx[a]) * n + jy[b]) * n;
          for (int d = 0; d < w; ++d) {
            double wt = fab * gz[d];
            for (int f = 0; f < 4; ++f) acc[f] += wt * fields[f][base + jz[d]];
          }
        }
      }
      phi[k] = h3 * acc[0];
      E[k] = {h3 * acc[1], h3 * acc[2], h3 * acc[3]};
    }
  });

  // near field: cell list with minimum image in all three directions
  const double rc = r_cut_, rc2 = rc * rc;
  int nc = std::max(1, int(L_ / rc));
  if (nc < 3) nc = 1;
  auto cell_of = [&](double p) { return std::clamp(int(p / L_ * nc), 0, nc - 1); };
  const std::size_t ncell = std::size_t(nc) * nc * nc;
  std::vector<std::size_t> start(ncell + 1, 0), items(N), cid(N);
  for (std::size_t k = 0; k < N; ++k) {
    cid[k] = (std::size_t(cell_of(c.x[k])) * nc + cell_of(c.y[k])) * nc + cell_of(c.z[k]);
    ++start[cid[k] + 1];
  }
  for (std::size_t t = 0; t < ncell; ++t) start[t + 1] += start[t];
  {
    auto pos = start;
    for (std::size_t k = 0; k < N; ++k) items[pos[cid[k]]++] = k;
  }
  const double self = near_potential_avg(0.0, g_w_, xi_, eps_);
  parallel_for(N, [&](std::size_t b0, std::size_t e0) {
    for (std::size_t i = b0; i < e0; ++i) {
      int ci[3] = {cell_of(c.x[i]), cell_of(c.y[i]), cell_of(c.z[i])};
      int o = nc == 1 ? 0 : 1;
      double ph = self * c.q[i], ex = 0, ey = 0, ez = 0;
      for (int a = -o; a <= o; ++a)
        for (int b = -o; b <= o; ++b)
          for (int d = -o; d <= o; ++d) {
            std::size_t id = (std::size_t((ci[0] + a + nc) % nc) * nc + (ci[1] + b + nc) % nc) * nc +
                             (ci[2] + d + nc) % nc;
            for (std::size_t t = start[id]; t < start[id + 1]; ++t) {
              std::size_t j = items[t];
              if (j == i) continue;
              double dx = c.x[i] - c.x[j], dy = c.y[i] - c.y[j], dz = c.z[i] - c.z[j];
              dx -= L_ * std::nearbyint(dx / L_);
              dy -= L_ * std::nearbyint(dy / L_);
              dz -= L_ * std::nearbyint(dz / L_);
              double r2 = dx * dx + dy * dy + dz * dz;
              if (r2 > rc2) continue;
              double r = std::sqrt(r2);
              ph += c.q[j] * near_potential_avg(r, g_w_, xi_, eps_);
              if (r > 0.0) {
                double f = c.q[j] * near_field_avg(r, g_w_, xi_, eps_) / r;
                ex += f * dx;
                ey += f * dy;
                ez += f * dz;
              }
            }
          }
      phi[i] += ph;
      E[i][0] += ex;
      E[i][1] += ey;
      E[i][2] += ez;
    }
  });
}

}  // namespace slabewald
