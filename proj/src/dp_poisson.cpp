#include "slabewald/dp_poisson.hpp"

#include <cmath>
#include <map>

#include "slabewald/errors.hpp"
#include "slabewald/parallel.hpp"

namespace slabewald {

DtnSolver::DtnSolver(const FourierChebGrid& g) : g_(g) {
  const int nx = g.nx(), nyh = g.nyh(), nz = g.nz();
  const double a = g.half_height();
  op_index_.resize(g.num_modes());
  std::map<std::pair<int, int>, int> seen;
  for (int ix = 0; ix < nx; ++ix) {
    int fx = std::min(ix, nx - ix);
    for (int iy = 0; iy < nyh; ++iy) {
      auto key = std::make_pair(fx, iy);
      auto it = seen.find(key);
      if (it == seen.end()) {
        double k = g.kmag(std::size_t(ix) * nyh + iy);
        ops_.push_back(cheb::BvpOperator::dtn(nz, k * a));
        it = seen.emplace(key, int(ops_.size()) - 1).first;
      }
      op_index_[std::size_t(ix) * nyh + iy] = it->second;
    }
  }
}

void DtnSolver::solve(const cplx* rho, double eps, cplx* psi) const {
  const int nz = g_.nz();
  const double a = g_.half_height();
  const double scale = -a * a / eps;
  parallel_for(g_.num_modes(), [&](std::size_t b, std::size_t e) {
    std::vector<cplx> f(nz);
    for (std::size_t m = b; m < e; ++m) {
      for (int j = 0; j < nz; ++j) f[j] = scale * rho[m * nz + j];
      ops_[op_index_[m]].solve(f.data(), cplx(0.0), cplx(0.0), psi + m * nz);
    }
  });
}

HarmonicCorrection::HarmonicCorrection(const SlabGeometry& g, double k, const WallMismatch& m) {
  using ld = long double;
  using lc = std::complex<long double>;
  k_ = k;
  H_ = g.H;
  const ld e = g.eps, eb = g.eps_b, et = g.eps_t;
  const lc Pb = lc(m.E_b) - eb * k_ * lc(m.phi_b);
  const lc Pt = lc(m.E_t) + et * k_ * lc(m.phi_t);
  const ld E = std::exp(-k_ * H_);
  const ld D = (e + eb) * (e + et) - (eb - e) * (et - e) * E * E;
  const ld kD = k_ * D;
  cb1_ = (e + et) * Pb / kD;
  cb2_ = -(et - e) * Pb / kD;
  ct1_ = -(e + eb) * Pt / kD;
  ct2_ = (eb - e) * Pt / kD;
  cplx v0, d0, vH, dH;
  eval(0.0, v0, d0);
  eval(g.H, vH, dH);
  a_b = v0 + m.phi_b;
  a_t = vH + m.phi_t;
  if (!std::isfinite(std::abs(a_b)) || !std::isfinite(std::abs(a_t)))
    throw NumericalError("harmonic correction is not finite");
}

void HarmonicCorrection::eval(double zd, cplx& value, cplx& dvalue) const {
  const long double z = zd;
  const long double e1 = std::exp(-k_ * z);
  const long double e2 = std::exp(k_ * (z - 2 * H_));
  const long double e3 = std::exp(k_ * (z - H_));
  const long double e4 = std::exp(-k_ * (z + H_));
  auto v = cb1_ * e1 + cb2_ * e2 + ct1_ * e3 + ct2_ * e4;
  auto d = k_ * (-cb1_ * e1 + cb2_ * e2 + ct1_ * e3 - ct2_ * e4);
  value = cplx(double(v.real()), double(v.imag()));
  dvalue = cplx(double(d.real()), double(d.imag()));
}

K0Result combine_k0(const SlabGeometry& g, const K0Inputs& in) {
  K0Result r{};
  r.A_b = -in.dpsi_b_z0;
  r.A_t = -in.dpsi_t_z1;
  r.ai1 = (g.eps_b * (in.dpsi_b_0 + r.A_b) - g.eps * in.dpsi_i_0 - in.sigma_b) / g.eps;
  r.ai2 = (g.eps_t * (in.dpsi_t_H + r.A_t) - g.eps * in.dpsi_i_H + in.sigma_t) / g.eps;
  r.A_i = 0.5 * (r.ai1 + r.ai2);
  r.discrepancy = in.scale > 0.0 ? std::abs(r.ai1 - r.ai2) / in.scale : 0.0;
  if (!std::isfinite(r.A_i)) throw NumericalError("zero-wavenumber mode is not finite");
  return r;
}

}  // namespace slabewald
