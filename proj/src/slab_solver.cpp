#include "slabewald/slab_solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "slabewald/errors.hpp"
#include "slabewald/grid_ops.hpp"
#include "slabewald/parallel.hpp"

namespace slabewald {

namespace {

constexpr double kPi = std::numbers::pi;

double image_factor(double eps, double eps_out) { return (eps - eps_out) / (eps + eps_out); }

ChargeSet subset(const ChargeSet& c, const std::vector<std::size_t>& idx) {
  ChargeSet s;
  s.resize(idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) {
    s.x[k] = c.x[idx[k]];
    s.y[k] = c.y[idx[k]];
    s.z[k] = c.z[idx[k]];
    s.q[k] = c.q[idx[k]];
  }
  return s;
}

PointSet points(const ChargeSet& c) { return {c.x.data(), c.y.data(), c.z.data(), c.size()}; }

// Sources seen by the near field: real charges and first images within `reach` of the slab.
struct Sources {
  std::vector<double> x, y, z, q;
  std::vector<long> parent;  // real charge index, or -1 for images
};

Sources near_sources(const ChargeSet& c, const SlabGeometry& g, double reach) {
  Sources s;
  const double rb = image_factor(g.eps, g.eps_b), rt = image_factor(g.eps, g.eps_t);
  auto push = [&](double x, double y, double z, double q, long parent) {
    s.x.push_back(x);
    s.y.push_back(y);
    s.z.push_back(z);
    s.q.push_back(q);
    s.parent.push_back(parent);
  };
  for (std::size_t i = 0; i < c.size(); ++i) push(c.x[i], c.y[i], c.z[i], c.q[i], long(i));
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (rb != 0.0 && c.z[i] < reach) push(c.x[i], c.y[i], -c.z[i], rb * c.q[i], -1);
    if (rt != 0.0 && g.H - c.z[i] < reach) push(c.x[i], c.y[i], 2.0 * g.H - c.z[i], rt * c.q[i], -1);
  }
  return s;
}

// Cell list over [0,Lx) x [0,Ly) x [zlo, zhi] with cells no smaller than rc.
struct CellList {
  int nx, ny, nz;
  double zlo, cz;
  std::vector<std::size_t> start, items;

  CellList(const Sources& s, const SlabGeometry& g, double rc, double zlo_, double zhi) : zlo(zlo_) {
    nx = std::max(1, int(g.Lx / rc));
    ny = std::max(1, int(g.Ly / rc));
    if (nx < 3) nx = 1;
    if (ny < 3) ny = 1;
    nz = std::max(1, int((zhi - zlo) / rc));
    if (nz < 3) nz = 1;
    cz = (zhi - zlo) / nz;
    const std::size_t ncell = std::size_t(nx) * ny * nz;
    std::vector<std::size_t> count(ncell + 1, 0), cell(s.q.size());
    for (std::size_t k = 0; k < s.q.size(); ++k) {
      cell[k] = index(cx(s.x[k], g.Lx), cy(s.y[k], g.Ly), czi(s.z[k]));
      ++count[cell[k] + 1];
    }
    for (std::size_t c = 0; c < ncell; ++c) count[c + 1] += count[c];
    start = count;
    items.resize(s.q.size());
    for (std::size_t k = 0; k < s.q.size(); ++k) items[count[cell[k]]++] = k;
  }
  int cx(double x, double L) const { return std::clamp(int(x / L * nx), 0, nx - 1); }
  int cy(double y, double L) const { return std::clamp(int(y / L * ny), 0, ny - 1); }
  int czi(double z) const { return std::clamp(int((z - zlo) / cz), 0, nz - 1); }
  std::size_t index(int i, int j, int k) const { return (std::size_t(i) * ny + j) * nz + k; }

  template <class F>
  void visit(int i, int j, int k, F&& f) const {
    int ox = nx == 1 ? 0 : 1, oy = ny == 1 ? 0 : 1;
    for (int a = -ox; a <= ox; ++a)
      for (int b = -oy; b <= oy; ++b)
        for (int c = -1; c <= 1; ++c) {
          int kk = k + c;
          if (kk < 0 || kk >= nz) continue;
          int ii = ((i + a) % nx + nx) % nx, jj = ((j + b) % ny + ny) % ny;
          std::size_t id = index(ii, jj, kk);
          for (std::size_t t = start[id]; t < start[id + 1]; ++t) f(items[t]);
        }
  }
};

inline double min_image(double d, double L) { return d - L * std::nearbyint(d / L); }

// F(k, d; s): xy transform at height offset d of the potential of a 3D
// Gaussian of standard deviation s, without the 1/eps factor; k > 0.
double plane_gaussian(double k, double d, double s) {
  const double r2s = std::sqrt(2.0) * s;
  const double u = (k * s * s + d) / r2s, v = (k * s * s - d) / r2s;
  const double g = std::exp(-0.5 * k * k * s * s - 0.5 * d * d / (s * s));
  double val;
  if (v >= 0.0)
    val = g * (erfcx(u) + erfcx(v));
  else
    val = 2.0 * std::exp(-k * d) + g * (erfcx(u) - erfcx(-v));
  return val / (4.0 * k);
}

// Mean absolute deviation E|d - Z|, Z ~ N(0, s^2).
double abs_moment(double d, double s) {
  return s * std::sqrt(2.0 / kPi) * std::exp(-0.5 * d * d / (s * s)) + d * std::erf(d / (std::sqrt(2.0) * s));
}

}  // namespace

double near_kernel_plane_transform(double k, double d, double g_w, double xi, double eps) {
  d = std::abs(d);
  if (std::isinf(xi)) return 0.0;
  const double s1 = g_w;
  const double s2 = std::sqrt(g_w * g_w + 0.5 / (xi * xi));
  if (k == 0.0) return (abs_moment(d, s2) - abs_moment(d, s1)) / (2.0 * eps);
  if (s1 == 0.0) return (std::exp(-k * d) / (2.0 * k) - plane_gaussian(k, d, s2)) / eps;
  return (plane_gaussian(k, d, s1) - plane_gaussian(k, d, s2)) / eps;
}

Partition build_partition(const ChargeSet& c, const SlabGeometry& g, double H_E) {
  Partition p;
  const double rb = image_factor(g.eps, g.eps_b), rt = image_factor(g.eps, g.eps_t);
  for (std::size_t i = 0; i < c.size(); ++i) {
    bool nb = c.z[i] < 2.0 * H_E, nt = c.z[i] > g.H - 2.0 * H_E;
    (nb || nt ? p.over : p.far).push_back(i);
    if (nb && rb != 0.0) p.images.add(c.x[i], c.y[i], -c.z[i], rb * c.q[i]);
    if (nt && rt != 0.0) p.images.add(c.x[i], c.y[i], 2.0 * g.H - c.z[i], rt * c.q[i]);
  }
  return p;
}

void near_field_sum(const ChargeSet& c, const SlabGeometry& g, const EwaldParams& p, bool subtract_self,
                    std::vector<double>& phi, std::vector<std::array<double, 3>>& E) {
  const std::size_t n = c.size();
  const double four_pi_eps = 4.0 * kPi * g.eps;
  const double inv_sqrt_pi = 1.0 / std::sqrt(kPi);
  if (!p.split()) {
    if (subtract_self)
      for (std::size_t i = 0; i < n; ++i) phi[i] -= c.q[i] * inv_sqrt_pi / (p.g_w * four_pi_eps);
    return;
  }
  double self;
  if (subtract_self)
    self = -2.0 * inv_sqrt_pi / std::sqrt(4.0 * p.g_w * p.g_w + 1.0 / (p.xi * p.xi)) / four_pi_eps;
  else
    self = near_potential_avg(0.0, p.g_w, p.xi, g.eps);

  const double rc = p.r_cut, rc2 = rc * rc;
  Sources s = near_sources(c, g, rc);
  CellList cells(s, g, rc, -rc, g.H + rc);
  parallel_for(n, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      double ph = 0.0, ex = 0.0, ey = 0.0, ez = 0.0;
      const double xi = c.x[i], yi = c.y[i], zi = c.z[i];
      cells.visit(cells.cx(xi, g.Lx), cells.cy(yi, g.Ly), cells.czi(zi), [&](std::size_t k) {
        if (s.parent[k] == long(i)) {
          ph += s.q[k] * self;
          return;
        }
        double dx = min_image(xi - s.x[k], g.Lx), dy = min_image(yi - s.y[k], g.Ly), dz = zi - s.z[k];
        double r2 = dx * dx + dy * dy + dz * dz;
        if (r2 > rc2) return;
        double r = std::sqrt(r2);
        ph += s.q[k] * near_potential_avg(r, p.g_w, p.xi, g.eps);
        if (r > 0.0) {
          double f = s.q[k] * near_field_avg(r, p.g_w, p.xi, g.eps) / r;
          ex += f * dx;
          ey += f * dy;
          ez += f * dz;
        }
      });
      phi[i] += ph;
      E[i][0] += ex;
      E[i][1] += ey;
      E[i][2] += ez;
    }
  });
}

double near_potential_at(const ChargeSet& c, const SlabGeometry& g, const EwaldParams& p, double x, double y,
                         double z) {
  if (!p.split()) return 0.0;
  const double rc = p.r_cut;
  Sources s = near_sources(c, g, rc);
  double acc = 0.0;
  for (std::size_t k = 0; k < s.q.size(); ++k) {
    double dx = min_image(x - s.x[k], g.Lx), dy = min_image(y - s.y[k], g.Ly), dz = z - s.z[k];
    double r = std::sqrt(dx * dx + dy * dy + dz * dz);
    if (r <= rc) acc += s.q[k] * near_potential_point(r, p.g_w, p.xi, g.eps);
  }
  return acc;
}

SlabSolver::SlabSolver(const SlabGeometry& g, const EwaldParams& p, const SolverOptions& opt)
    : geom_(g), params_(p), opt_(opt) {
  geom_.validate();
  grid_ = std::make_unique<FourierChebGrid>(p.Nx, p.Ny, p.Nz, g.Lx, g.Ly, p.z0, p.z1);
  dtn_ = std::make_unique<DtnSolver>(*grid_);
}

SlabSolver::~SlabSolver() = default;

SolveResult SlabSolver::solve(ChargeSet& charges, const SurfaceCharge& sigma_b, const SurfaceCharge& sigma_t) {
  const SlabGeometry& g = geom_;
  const FourierChebGrid& G = *grid_;
  const EwaldParams& P = params_;
  const std::size_t N = charges.size();
  const int nz = G.nz(), nyh = G.nyh();
  const std::size_t nm = G.num_modes();
  const double A = g.area();

  validate_positions(charges, g, P.n_sigma * P.g_w, opt_.allow_wall_overlap);
  check_electroneutrality(charges, sigma_b, sigma_t, g, opt_.neutrality_tol, G.nx());

  SolveResult res;
  SolveDiagnostics& diag = res.diag;
  {
    EwaldParams pc = P;
    if (N > 0) {
      double h = kInf;
      for (std::size_t i = 0; i < N; ++i) h = std::min({h, charges.z[i], g.H - charges.z[i]});
      pc.h_min = h;
    }
    evaluate_constraints(pc, g);
    diag.constraints = pc.constraints;
    diag.h_min = pc.h_min;
    if (const Constraint* v = pc.first_violation()) {
      char buf[200];
      std::snprintf(buf, sizeof buf, "constraint '%s' violated: %s (%.6g vs bound %.6g)", v->name.c_str(),
                    v->description.c_str(), v->value, v->bound);
      if (opt_.enforce_constraints) throw ConstraintError(v->name, buf);
      diag.warnings.push_back(buf);
    }
  }

  const bool jb = g.jump_bottom(), jt = g.jump_top();
  const double cb = 2.0 * g.eps / (g.eps_b + g.eps), ct = 2.0 * g.eps / (g.eps_t + g.eps);
  Partition part = build_partition(charges, g, P.H_E);
  diag.n_over = part.over.size();
  diag.n_far = part.far.size();
  diag.n_images = part.images.size();
  ChargeSet over = subset(charges, part.over), far = subset(charges, part.far);
  const GaussianKernel K{P.g_t, P.H_E};

  // free-space solves: psi_o from C_over, psi_i from everything
  auto rho = G.make_real();
  spread(G, points(over), over.q.data(), K, rho.data());
  std::vector<cplx> vo0, voH, do0, doH;
  double do_z0 = 0.0, do_z1 = 0.0;
  if (jb || jt) {
    auto psi_o = G.make_spec();
    G.forward(rho.data(), psi_o.data());
    dtn_->solve(psi_o.data(), g.eps, psi_o.data());
    auto dpsi_o = G.make_spec();
    G.z_derivative(psi_o.data(), dpsi_o.data());
    vo0 = G.evaluate_at(psi_o.data(), 0.0);
    voH = G.evaluate_at(psi_o.data(), g.H);
    do0 = G.evaluate_at(dpsi_o.data(), 0.0);
    doH = G.evaluate_at(dpsi_o.data(), g.H);
    do_z0 = cheb::sum_at_minus_one(dpsi_o.data(), nz).real();
    do_z1 = cheb::sum_at_plus_one(dpsi_o.data(), nz).real();
  }
  spread(G, points(far), far.q.data(), K, rho.data());
  spread(G, points(part.images), part.images.q.data(), K, rho.data());
  auto psi = G.make_spec();
  G.forward(rho.data(), psi.data());
  std::vector<double>().swap(rho);
  dtn_->solve(psi.data(), g.eps, psi.data());
  auto dpsi = G.make_spec();
  G.z_derivative(psi.data(), dpsi.data());
  auto vi0 = G.evaluate_at(psi.data(), 0.0), viH = G.evaluate_at(psi.data(), g.H);
  auto di0 = G.evaluate_at(dpsi.data(), 0.0), diH = G.evaluate_at(dpsi.data(), g.H);
  const double di_z0 = cheb::sum_at_minus_one(dpsi.data(), nz).real();
  const double di_z1 = cheb::sum_at_plus_one(dpsi.data(), nz).real();

  // wall solutions: scaled psi_o across a jump, psi_i itself otherwise
  auto wall_b = [&](std::size_t m, cplx& v, cplx& d) {
    if (jb) {
      v = cb * vo0[m];
      d = cb * do0[m];
    } else {
      v = vi0[m];
      d = di0[m];
    }
  };
  auto wall_t = [&](std::size_t m, cplx& v, cplx& d) {
    if (jt) {
      v = ct * voH[m];
      d = ct * doH[m];
    } else {
      v = viH[m];
      d = diH[m];
    }
  };

  std::vector<cplx> sbh(nm), sth(nm);
  const bool has_sb = !sigma_b.is_zero(), has_st = !sigma_t.is_zero();
  if (has_sb) G.plane_forward(sigma_b.sample(G.nx(), G.ny(), g.Lx, g.Ly).data(), sbh.data());
  if (has_st) G.plane_forward(sigma_t.sample(G.nx(), G.ny(), g.Lx, g.Ly).data(), sth.data());

  // node values of psi_i* and its z-derivative
  auto phis = std::move(psi);
  G.z_coeffs_to_values(phis.data());
  auto dzs = std::move(dpsi);
  G.z_coeffs_to_values(dzs.data());

  // harmonic correction on the window -H_E <= z <= H + H_E
  std::vector<cplx> corr_b(nm), corr_t(nm);
  const auto& zn = G.z();
  int jlo = nz, jhi = -1;
  for (int j = 0; j < nz; ++j)
    if (zn[j] >= -P.H_E && zn[j] <= g.H + P.H_E) {
      jlo = std::min(jlo, j);
      jhi = std::max(jhi, j);
    }
  parallel_for(nm, [&](std::size_t b, std::size_t e) {
    for (std::size_t m = b; m < e; ++m) {
      if (m == 0) continue;
      double k = G.kmag(m);
      if (k > P.k_max) continue;
      cplx vb, db, vt, dt;
      wall_b(m, vb, db);
      wall_t(m, vt, dt);
      WallMismatch mm{vi0[m] - vb, g.eps * di0[m] - g.eps_b * db + sbh[m], viH[m] - vt,
                      g.eps * diH[m] - g.eps_t * dt - sth[m]};
      if (mm.phi_b == 0.0 && mm.E_b == 0.0 && mm.phi_t == 0.0 && mm.E_t == 0.0) continue;
      HarmonicCorrection hc(g, k, mm);
      cplx v, d;
      for (int j = jlo; j <= jhi; ++j) {
        hc.eval(zn[j], v, d);
        phis[m * nz + j] += v;
        dzs[m * nz + j] += d;
      }
      hc.eval(0.0, corr_b[m], d);
      hc.eval(g.H, corr_t[m], d);
    }
  });

  // k = 0 linear mode
  {
    K0Inputs in{};
    in.dpsi_b_z0 = jb ? cb * do_z0 : di_z0;
    in.dpsi_t_z1 = jt ? ct * do_z1 : di_z1;
    cplx v, d;
    wall_b(0, v, d);
    in.dpsi_b_0 = d.real();
    wall_t(0, v, d);
    in.dpsi_t_H = d.real();
    in.dpsi_i_0 = di0[0].real();
    in.dpsi_i_H = diH[0].real();
    in.sigma_b = sbh[0].real();
    in.sigma_t = sth[0].real();
    in.scale = (charges.total_abs_charge() + A * (std::abs(in.sigma_b) + std::abs(in.sigma_t))) / (g.eps * A);
    K0Result k0 = combine_k0(g, in);
    diag.ai1 = k0.ai1;
    diag.ai2 = k0.ai2;
    diag.A_i = k0.A_i;
    diag.ai_discrepancy = k0.discrepancy;
    if (k0.discrepancy > opt_.k0_fail) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "zero-wavenumber matching is inconsistent: ai1=%.6g ai2=%.6g", k0.ai1, k0.ai2);
      throw NumericalError(buf);
    }
    if (k0.discrepancy > opt_.k0_warn) diag.warnings.push_back("zero-wavenumber matching discrepancy above 1e-3");
    for (int j = 0; j < nz; ++j) {
      phis[j] += k0.A_i * zn[j];
      dzs[j] += k0.A_i;
    }
  }

  // grids of phi and E
  const std::size_t nr = G.real_size();
  std::vector<double> gphi(nr), gex(nr), gey(nr), gez(nr);
  {
    auto tmp = G.make_spec();
    G.xy_inverse(phis.data(), gphi.data());
    for (int axis = 0; axis < 2; ++axis) {
      for (std::size_t m = 0; m < nm; ++m) {
        int ix = int(m / nyh), iy = int(m % nyh);
        cplx f(0.0, -(axis == 0 ? G.dkx(ix) : G.dky(iy)));
        for (int j = 0; j < nz; ++j) tmp[m * nz + j] = f * phis[m * nz + j];
      }
      G.xy_inverse(tmp.data(), axis == 0 ? gex.data() : gey.data());
    }
    for (std::size_t t = 0; t < tmp.size(); ++t) tmp[t] = -dzs[t];
    G.xy_inverse(tmp.data(), gez.data());
  }

  res.phi_bar.assign(N, 0.0);
  res.E_bar.assign(N, {0.0, 0.0, 0.0});
  if (N > 0) {
    std::vector<double> fx(N), fy(N), fz(N);
    interpolate(G, points(charges), {gphi.data(), gex.data(), gey.data(), gez.data()}, K,
                {res.phi_bar.data(), fx.data(), fy.data(), fz.data()});
    for (std::size_t i = 0; i < N; ++i) res.E_bar[i] = {fx[i], fy[i], fz[i]};
  }
  std::vector<double>().swap(gphi);
  std::vector<double>().swap(gex);
  std::vector<double>().swap(gey);
  std::vector<double>().swap(gez);
  near_field_sum(charges, g, P, opt_.subtract_self, res.phi_bar, res.E_bar);

  // pointwise far potential on a wall plane, per mode
  auto far_wall = [&](double zw, const std::vector<cplx>& corr) {
    std::vector<cplx> out(nm);
    if (!P.split()) {
      auto c = phis;  // node values -> coefficients for exact evaluation at the wall
      G.z_values_to_coeffs(c.data());
      out = G.evaluate_at(c.data(), zw);
      return out;
    }
    const double sg = 0.5 / P.xi, rad = P.n_sigma * sg;
    const auto& w = G.cc_weights();
    std::vector<std::pair<int, double>> qw;
    for (int j = 0; j < nz; ++j) {
      double d = zn[j] - zw;
      if (std::abs(d) <= rad) qw.emplace_back(j, w[j] * std::exp(-0.5 * d * d / (sg * sg)) / (std::sqrt(2 * kPi) * sg));
    }
    for (std::size_t m = 0; m < nm; ++m) {
      double k = G.kmag(m);
      cplx s = 0.0;
      for (auto [j, wj] : qw) s += wj * phis[m * nz + j];
      out[m] = std::exp(-k * k * sg * sg * 0.5) * s;
    }
    (void)corr;
    return out;
  };

  // gauge phi(0,0,0) = 0
  auto fb = far_wall(0.0, corr_b);
  {
    double far0 = 0.0;
    for (std::size_t m = 0; m < nm; ++m) far0 += G.hermitian_weight(int(m % nyh)) * fb[m].real();
    double near0 = near_potential_at(charges, g, P, 0.0, 0.0, 0.0);
    diag.B_i = -(far0 + near0);
    for (auto& v : res.phi_bar) v += diag.B_i;
  }

  if (opt_.compute_energy) {
    double U = 0.0;
    for (std::size_t i = 0; i < N; ++i) U += 0.5 * charges.q[i] * res.phi_bar[i];
    const double rb = image_factor(g.eps, g.eps_b), rt = image_factor(g.eps, g.eps_t);
    auto wall_energy = [&](const SurfaceCharge& sig, const std::vector<cplx>& sh, const std::vector<cplx>& farw,
                           bool bottom) {
      const double zw = bottom ? 0.0 : g.H;
      // near-field sources as (strength, distance) pairs per charge
      std::vector<double> sx, sy, sd, sq;
      const double dmax = P.split() ? 6.0 * std::sqrt(2.0 * P.g_w * P.g_w + 1.0 / (P.xi * P.xi)) + 6.0 * P.g_w : 0.0;
      for (std::size_t i = 0; i < N && P.split(); ++i) {
        double d1 = std::abs(charges.z[i] - zw);
        double f1 = 1.0 + (bottom ? rb : rt);
        double d2 = bottom ? 2.0 * g.H - charges.z[i] : g.H + charges.z[i];
        double f2 = bottom ? rt : rb;
        if (d1 < dmax) {
          sx.push_back(charges.x[i]);
          sy.push_back(charges.y[i]);
          sd.push_back(d1);
          sq.push_back(f1 * charges.q[i]);
        }
        if (f2 != 0.0 && d2 < dmax) {
          sx.push_back(charges.x[i]);
          sy.push_back(charges.y[i]);
          sd.push_back(d2);
          sq.push_back(f2 * charges.q[i]);
        }
      }
      const std::size_t mmax = sig.profile ? nm : 1;
      double acc = 0.0;
      for (std::size_t m = 0; m < mmax; ++m) {
        if (sh[m] == 0.0) continue;
        int ix = int(m / nyh), iy = int(m % nyh);
        double k = G.kmag(m);
        cplx nearh = 0.0;
        for (std::size_t s = 0; s < sq.size(); ++s) {
          double ph = -(G.kx(ix) * sx[s] + G.ky(iy) * sy[s]);
          nearh += sq[s] * near_kernel_plane_transform(k, sd[s], P.g_w, P.xi, g.eps) * std::polar(1.0, ph);
        }
        cplx phih = farw[m] + nearh / A + (m == 0 ? cplx(diag.B_i) : cplx(0.0));
        acc += G.hermitian_weight(iy) * (std::conj(sh[m]) * phih).real();
      }
      return A * acc;
    };
    if (has_sb) U += 0.5 * wall_energy(sigma_b, sbh, fb, true);
    if (has_st) U += 0.5 * wall_energy(sigma_t, sth, far_wall(g.H, corr_t), false);
    res.U = U;
    res.has_energy = true;
  }

  for (std::size_t i = 0; i < N; ++i)
    if (!std::isfinite(res.phi_bar[i]) || !std::isfinite(res.E_bar[i][0]) || !std::isfinite(res.E_bar[i][1]) ||
        !std::isfinite(res.E_bar[i][2]))
      throw NumericalError("non-finite field at charge " + std::to_string(i));
  return res;
}

}  // namespace slabewald
