#include "slabewald/domain.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "slabewald/errors.hpp"

namespace slabewald {

void SlabGeometry::validate() const {
  auto pos = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!pos(Lx) || !pos(Ly) || !pos(H)) throw InputError("geometry: Lx, Ly and H must be positive");
  if (!pos(eps) || !pos(eps_b) || !pos(eps_t)) throw InputError("geometry: permittivities must be positive");
}

void ChargeSet::add(double xi, double yi, double zi, double qi) {
  x.push_back(xi);
  y.push_back(yi);
  z.push_back(zi);
  q.push_back(qi);
}

void ChargeSet::resize(std::size_t n) {
  x.resize(n);
  y.resize(n);
  z.resize(n);
  q.resize(n);
}

double ChargeSet::total_charge() const {
  double s = 0.0;
  for (double v : q) s += v;
  return s;
}

double ChargeSet::total_abs_charge() const {
  double s = 0.0;
  for (double v : q) s += std::abs(v);
  return s;
}

std::vector<double> SurfaceCharge::sample(int nx, int ny, double Lx, double Ly) const {
  std::vector<double> s(std::size_t(nx) * ny, uniform);
  if (!profile) return s;
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) s[std::size_t(i) * ny + j] = profile(i * Lx / nx, j * Ly / ny);
  return s;
}

double SurfaceCharge::mean(int nx, int ny, double Lx, double Ly) const {
  if (!profile) return uniform;
  auto s = sample(nx, ny, Lx, Ly);
  double m = 0.0;
  for (double v : s) m += v;
  return m / double(s.size());
}

SurfaceCharge periodic_gaussian_surface(double Lx, double Ly, double x0, double y0, double s, double amplitude,
                                        int images) {
  if (!(s > 0.0)) throw InputError("surface charge: width must be positive");
  SurfaceCharge out;
  out.profile = [=](double x, double y) {
    double v = 0.0;
    for (int a = -images; a <= images; ++a)
      for (int b = -images; b <= images; ++b) {
        double dx = x - x0 + a * Lx, dy = y - y0 + b * Ly;
        v += std::exp(-(dx * dx + dy * dy) / (2.0 * s * s));
      }
    return amplitude * v;
  };
  return out;
}

double check_electroneutrality(const ChargeSet& c, const SurfaceCharge& sb, const SurfaceCharge& st,
                               const SlabGeometry& g, double tol, int nsample) {
  double mb = sb.mean(nsample, nsample, g.Lx, g.Ly);
  double mt = st.mean(nsample, nsample, g.Lx, g.Ly);
  double net = c.total_charge() + g.area() * (mb + mt);
  double scale = c.total_abs_charge() + g.area() * (std::abs(mb) + std::abs(mt));
  if (scale == 0.0) return 0.0;
  if (std::abs(net) > tol * scale) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "system is not electroneutral: net charge %.6g (tolerance %.3g)", net,
                  tol * scale);
    throw InputError(buf);
  }
  return net;
}

void validate_positions(ChargeSet& c, const SlabGeometry& g, double margin, bool allow_wall_overlap) {
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (!std::isfinite(c.x[i]) || !std::isfinite(c.y[i]) || !std::isfinite(c.z[i]) || !std::isfinite(c.q[i]))
      throw InputError("charge " + std::to_string(i) + " has a non-finite coordinate or strength");
    c.x[i] -= g.Lx * std::floor(c.x[i] / g.Lx);
    c.y[i] -= g.Ly * std::floor(c.y[i] / g.Ly);
    if (c.x[i] >= g.Lx) c.x[i] = 0.0;
    if (c.y[i] >= g.Ly) c.y[i] = 0.0;
    double lo = allow_wall_overlap ? 0.0 : margin, hi = allow_wall_overlap ? g.H : g.H - margin;
    bool bad = allow_wall_overlap ? !(c.z[i] > lo && c.z[i] < hi) : !(c.z[i] >= lo && c.z[i] <= hi);
    if (bad) {
      char buf[200];
      std::snprintf(buf, sizeof buf, "charge %zu at z=%.17g is outside the allowed range [%.6g, %.6g]", i, c.z[i],
                    lo, hi);
      throw InputError(buf);
    }
  }
}

ChargeSet read_charges_csv(std::istream& in) {
  ChargeSet c;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    for (char& ch : line)
      if (ch == ',') ch = ' ';
    std::istringstream ss(line);
    double v[4];
    if (!(ss >> v[0] >> v[1] >> v[2] >> v[3])) {
      if (c.size() == 0 && lineno == 1) continue;  // header
      throw InputError("charges csv: cannot parse line " + std::to_string(lineno));
    }
    c.add(v[0], v[1], v[2], v[3]);
  }
  return c;
}

ChargeSet read_charges_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot open charges file " + path);
  return read_charges_csv(f);
}

void write_charges_csv(std::ostream& out, const ChargeSet& c) {
  out << "x,y,z,q\n";
  char buf[128];
  for (std::size_t i = 0; i < c.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", c.x[i], c.y[i], c.z[i], c.q[i]);
    out << buf;
  }
}

}  // namespace slabewald
