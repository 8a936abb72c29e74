#include "slabewald/grid_ops.hpp"

#include <cmath>
#include <numbers>

#include "slabewald/errors.hpp"
#include "slabewald/parallel.hpp"

namespace slabewald {

namespace {

struct Axis {
  std::vector<int> idx;
  std::vector<double> w;
};

// Periodic axis with n nodes at i*h; kernel factors for |x_i - x| <= radius.
void periodic_axis(double x, double h, int n, const GaussianKernel& k, double norm, Axis& a) {
  a.idx.clear();
  a.w.clear();
  int lo = static_cast<int>(std::ceil((x - k.radius) / h - 1e-12));
  int hi = static_cast<int>(std::floor((x + k.radius) / h + 1e-12));
  const double inv2s2 = 0.5 / (k.width * k.width);
  for (int i = lo; i <= hi; ++i) {
    double d = i * h - x;
    if (std::abs(d) > k.radius) continue;
    int m = ((i % n) + n) % n;
    a.idx.push_back(m);
    a.w.push_back(norm * std::exp(-d * d * inv2s2));
  }
}

// Chebyshev axis (descending nodes); explicit distance test.
void cheb_axis(double z, const std::vector<double>& nodes, const GaussianKernel& k, double norm, Axis& a) {
  a.idx.clear();
  a.w.clear();
  const int n = static_cast<int>(nodes.size());
  // first index with node <= z + radius
  int lo = 0, hi = n;
  double top = z + k.radius;
  while (lo < hi) {
    int mid = (lo + hi) / 2;
    if (nodes[mid] > top)
      lo = mid + 1;
    else
      hi = mid;
  }
  const double inv2s2 = 0.5 / (k.width * k.width);
  for (int j = lo; j < n; ++j) {
    double d = nodes[j] - z;
    if (d < -k.radius) break;
    if (std::abs(d) > k.radius) continue;
    a.idx.push_back(j);
    a.w.push_back(norm * std::exp(-d * d * inv2s2));
  }
}

double norm1d(double s) { return 1.0 / (std::sqrt(2.0 * std::numbers::pi) * s); }

void check_point(const FourierChebGrid& g, double z, std::size_t i) {
  if (!(z >= g.z0() && z <= g.z1()))
    throw InputError("spread: point " + std::to_string(i) + " lies outside the extended z domain");
}

}  // namespace

void spread(const FourierChebGrid& g, const PointSet& pts, const double* q, const GaussianKernel& k, double* grid) {
  for (std::size_t p = 0; p < pts.n; ++p) check_point(g, pts.z[p], p);
  const int nx = g.nx(), ny = g.ny(), nz = g.nz();
  const double c = norm1d(k.width);
  parallel_for(static_cast<std::size_t>(nx), [&](std::size_t xb, std::size_t xe) {
    Axis ax, ay, az;
    for (std::size_t p = 0; p < pts.n; ++p) {
      if (q[p] == 0.0) continue;
      periodic_axis(pts.x[p], g.hx(), nx, k, c, ax);
      bool any = false;
      for (int i : ax.idx) any |= (i >= int(xb) && i < int(xe));
      if (!any) continue;
      periodic_axis(pts.y[p], g.hy(), ny, k, c, ay);
      cheb_axis(pts.z[p], g.z(), k, c, az);
      for (std::size_t a = 0; a < ax.idx.size(); ++a) {
        int ix = ax.idx[a];
        if (ix < int(xb) || ix >= int(xe)) continue;
        double wx = q[p] * ax.w[a];
        for (std::size_t b = 0; b < ay.idx.size(); ++b) {
          double wxy = wx * ay.w[b];
          double* col = grid + (std::size_t(ix) * ny + ay.idx[b]) * nz;
          for (std::size_t cidx = 0; cidx < az.idx.size(); ++cidx) col[az.idx[cidx]] += wxy * az.w[cidx];
        }
      }
    }
  });
}

void interpolate(const FourierChebGrid& g, const PointSet& pts, const std::vector<const double*>& fields,
                 const GaussianKernel& k, const std::vector<double*>& out) {
  for (std::size_t p = 0; p < pts.n; ++p) check_point(g, pts.z[p], p);
  const int nx = g.nx(), ny = g.ny(), nz = g.nz();
  const double c = norm1d(k.width);
  const auto& wz = g.cc_weights();
  const std::size_t nf = fields.size();
  parallel_for(pts.n, [&](std::size_t pb, std::size_t pe) {
    Axis ax, ay, az;
    std::vector<double> acc(nf);
    for (std::size_t p = pb; p < pe; ++p) {
      periodic_axis(pts.x[p], g.hx(), nx, k, c * g.hx(), ax);
      periodic_axis(pts.y[p], g.hy(), ny, k, c * g.hy(), ay);
      cheb_axis(pts.z[p], g.z(), k, c, az);
      for (std::size_t cidx = 0; cidx < az.idx.size(); ++cidx) az.w[cidx] *= wz[az.idx[cidx]];
      std::fill(acc.begin(), acc.end(), 0.0);
      for (std::size_t a = 0; a < ax.idx.size(); ++a) {
        for (std::size_t b = 0; b < ay.idx.size(); ++b) {
          double wxy = ax.w[a] * ay.w[b];
          std::size_t base = (std::size_t(ax.idx[a]) * ny + ay.idx[b]) * nz;
          for (std::size_t f = 0; f < nf; ++f) {
            const double* col = fields[f] + base;
            double s = 0.0;
            for (std::size_t cidx = 0; cidx < az.idx.size(); ++cidx) s += az.w[cidx] * col[az.idx[cidx]];
            acc[f] += wxy * s;
          }
        }
      }
      for (std::size_t f = 0; f < nf; ++f) out[f][p] = acc[f];
    }
  });
}

}  // namespace slabewald
