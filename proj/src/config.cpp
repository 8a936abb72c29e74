#include "slabewald/config.hpp"

#include <boost/program_options.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "slabewald/errors.hpp"

namespace po = boost::program_options;

namespace slabewald {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

po::options_description schema(RunConfig& c) {
  po::options_description d("config");
  auto& g = c.geometry;
  auto& b = c.bd;
  // clang-format off
  d.add_options()
    ("geometry.Lx", po::value<double>(&g.Lx)->default_value(g.Lx))
    ("geometry.Ly", po::value<double>(&g.Ly)->default_value(g.Ly))
    ("geometry.H", po::value<double>(&g.H)->default_value(g.H))
    ("geometry.eps", po::value<double>(&g.eps)->default_value(g.eps))
    ("geometry.eps_b", po::value<double>(&g.eps_b)->default_value(g.eps_b))
    ("geometry.eps_t", po::value<double>(&g.eps_t)->default_value(g.eps_t))
    ("charges.file", po::value<std::string>(&c.charges_file))
    ("model.g_w", po::value<double>(&c.g_w)->required())
    ("ewald.delta", po::value<double>(&c.delta)->default_value(c.delta))
    ("ewald.Nxy", po::value<int>(&c.nxy))
    ("ewald.xi", po::value<double>(&c.xi))
    ("ewald.enforce_constraints", po::value<bool>(&c.solver.enforce_constraints)->default_value(true))
    ("ewald.allow_wall_overlap", po::value<bool>(&c.solver.allow_wall_overlap)->default_value(false))
    ("ewald.subtract_self", po::value<bool>(&c.solver.subtract_self)->default_value(false))
    ("ewald.compute_energy", po::value<bool>(&c.solver.compute_energy)->default_value(true))
    ("surface.kind", po::value<std::string>(&c.surface.kind)->default_value("none"))
    ("surface.sigma_b", po::value<double>(&c.surface.sigma_b)->default_value(0.0))
    ("surface.sigma_t", po::value<double>(&c.surface.sigma_t)->default_value(0.0))
    ("surface.s", po::value<double>(&c.surface.s)->default_value(c.surface.s))
    ("surface.amplitude_b", po::value<double>(&c.surface.amplitude_b)->default_value(0.0))
    ("surface.amplitude_t", po::value<double>(&c.surface.amplitude_t)->default_value(0.0))
    ("surface.x0", po::value<double>(&c.surface.x0))
    ("surface.y0", po::value<double>(&c.surface.y0))
    ("bd.mode", po::value<std::string>(&b.mode)->default_value(b.mode))
    ("bd.init", po::value<std::string>(&b.init)->default_value(b.init))
    ("bd.n_pos", po::value<std::size_t>(&b.n_pos)->default_value(0))
    ("bd.n_neg", po::value<std::size_t>(&b.n_neg)->default_value(0))
    ("bd.L", po::value<double>(&b.L)->default_value(0.0))
    ("bd.a", po::value<double>(&b.steric.a)->default_value(b.steric.a))
    ("bd.U0", po::value<double>(&b.steric.U0)->default_value(b.steric.U0))
    ("bd.r_m", po::value<double>(&b.steric.r_m)->default_value(b.steric.r_m))
    ("bd.p", po::value<double>(&b.steric.p)->default_value(b.steric.p))
    ("bd.dt", po::value<double>(&b.cfg.dt)->default_value(b.cfg.dt))
    ("bd.mu", po::value<double>(&b.cfg.mu)->default_value(b.cfg.mu))
    ("bd.kT", po::value<double>(&b.cfg.kT)->default_value(b.cfg.kT))
    ("bd.steps", po::value<long>(&b.cfg.steps)->default_value(0))
    ("bd.equil_steps", po::value<long>(&b.cfg.equil_steps)->default_value(0))
    ("bd.sample_every", po::value<long>(&b.cfg.sample_every)->default_value(1))
    ("bd.log_every", po::value<long>(&b.log_every)->default_value(b.log_every))
    ("bd.max_disp", po::value<double>(&b.cfg.max_disp)->default_value(b.cfg.max_disp))
    ("bd.max_retries", po::value<int>(&b.cfg.max_retries)->default_value(b.cfg.max_retries))
    ("bd.z_bin", po::value<double>(&b.z_bin)->default_value(b.z_bin))
    ("bd.r_bin", po::value<double>(&b.r_bin)->default_value(b.r_bin))
    ("bd.r_max", po::value<double>(&b.r_max)->default_value(0.0))
    ("output.dir", po::value<std::string>(&c.out_dir)->default_value(c.out_dir))
    ("run.threads", po::value<int>(&c.threads)->default_value(1))
    ("run.seed", po::value<std::uint64_t>(&c.seed)->default_value(1));
  // clang-format on
  return d;
}

}  // namespace

RunConfig parse_config(std::istream& in) {
  RunConfig c;
  po::options_description d = schema(c);
  po::variables_map vm;
  try {
    po::store(po::parse_config_file(in, d, false), vm);
    po::notify(vm);
  } catch (const po::error& e) {
    throw InputError(std::string("config: ") + e.what());
  }
  const bool have_nxy = vm.count("ewald.Nxy") > 0, have_xi = vm.count("ewald.xi") > 0;
  if (have_nxy == have_xi) throw InputError("config: give exactly one of ewald.Nxy and ewald.xi");
  if (!have_nxy) c.nxy = 0;
  if (!have_xi) c.xi = 0.0;
  c.surface.center_set = vm.count("surface.x0") > 0 || vm.count("surface.y0") > 0;
  if (!c.surface.center_set) {
    c.surface.x0 = 0.5 * c.geometry.Lx;
    c.surface.y0 = 0.5 * c.geometry.Ly;
  }
  c.bd.cfg.seed = c.seed;
  check_config(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InputError("config: cannot open '" + path + "'");
  return parse_config(f);
}

void check_config(const RunConfig& c) {
  c.geometry.validate();
  if (!(c.g_w >= 0.0)) throw InputError("config: model.g_w must be non-negative");
  profile_for(c.delta);  // throws for unsupported profiles
  if (c.nxy > 0 && c.xi > 0.0) throw InputError("config: give exactly one of ewald.Nxy and ewald.xi");
  if (c.nxy <= 0 && !(c.xi > 0.0)) throw InputError("config: ewald.Nxy must be >= 4 or ewald.xi > 0");
  if (c.nxy > 0 && c.nxy < 4) throw InputError("config: ewald.Nxy must be >= 4");
  const auto& s = c.surface;
  if (s.kind != "none" && s.kind != "uniform" && s.kind != "gaussian")
    throw InputError("config: surface.kind must be none, uniform or gaussian");
  if (s.kind == "gaussian" && !(s.s > 0.0)) throw InputError("config: surface.s must be positive");
  const auto& b = c.bd;
  if (b.mode != "slab" && b.mode != "bulk") throw InputError("config: bd.mode must be slab or bulk");
  if (b.mode == "bulk" && (c.xi <= 0.0 || !(b.L > 0.0)))
    throw InputError("config: bulk bd runs need ewald.xi and bd.L > 0");
  if (b.init != "random" && b.init != "pnp" && b.init != "file")
    throw InputError("config: bd.init must be random, pnp or file");
  if (!(b.cfg.dt > 0.0) || !(b.cfg.mu > 0.0) || b.cfg.kT < 0.0) throw InputError("config: bad bd.dt, bd.mu or bd.kT");
  if (b.cfg.steps < 0 || b.cfg.equil_steps < 0 || b.cfg.sample_every < 1 || b.log_every < 1)
    throw InputError("config: bd step counts must be non-negative and intervals positive");
  if (b.cfg.max_retries < 0) throw InputError("config: bd.max_retries must be non-negative");
  if (!(b.steric.a > 0.0) || !(b.steric.p > 0.0) || !(b.steric.r_m > 0.0) || b.steric.U0 < 0.0)
    throw InputError("config: bad steric parameters");
  if (!(b.z_bin > 0.0) || !(b.r_bin > 0.0) || b.r_max < 0.0) throw InputError("config: bad histogram bins");
  if (c.threads < 1) throw InputError("config: run.threads must be >= 1");
}

std::vector<std::pair<std::string, std::string>> resolved_parameters(const RunConfig& c) {
  const auto& g = c.geometry;
  const auto& b = c.bd;
  auto tf = [](bool v) { return std::string(v ? "true" : "false"); };
  std::vector<std::pair<std::string, std::string>> out = {
      {"geometry.Lx", num(g.Lx)},
      {"geometry.Ly", num(g.Ly)},
      {"geometry.H", num(g.H)},
      {"geometry.eps", num(g.eps)},
      {"geometry.eps_b", num(g.eps_b)},
      {"geometry.eps_t", num(g.eps_t)},
      {"charges.file", c.charges_file},
      {"model.g_w", num(c.g_w)},
      {"ewald.delta", num(c.delta)},
      {c.nxy > 0 ? "ewald.Nxy" : "ewald.xi", c.nxy > 0 ? std::to_string(c.nxy) : num(c.xi)},
      {"ewald.enforce_constraints", tf(c.solver.enforce_constraints)},
      {"ewald.allow_wall_overlap", tf(c.solver.allow_wall_overlap)},
      {"ewald.subtract_self", tf(c.solver.subtract_self)},
      {"ewald.compute_energy", tf(c.solver.compute_energy)},
      {"surface.kind", c.surface.kind},
  };
  if (c.surface.kind == "uniform") {
    out.push_back({"surface.sigma_b", num(c.surface.sigma_b)});
    out.push_back({"surface.sigma_t", num(c.surface.sigma_t)});
  } else if (c.surface.kind == "gaussian") {
    out.push_back({"surface.s", num(c.surface.s)});
    out.push_back({"surface.amplitude_b", num(c.surface.amplitude_b)});
    out.push_back({"surface.amplitude_t", num(c.surface.amplitude_t)});
    out.push_back({"surface.x0", num(c.surface.x0)});
    out.push_back({"surface.y0", num(c.surface.y0)});
  }
  std::vector<std::pair<std::string, std::string>> bdp = {
      {"bd.mode", b.mode},
      {"bd.init", b.init},
      {"bd.n_pos", std::to_string(b.n_pos)},
      {"bd.n_neg", std::to_string(b.n_neg)},
      {"bd.L", num(b.L)},
      {"bd.a", num(b.steric.a)},
      {"bd.U0", num(b.steric.U0)},
      {"bd.r_m", num(b.steric.r_m)},
      {"bd.p", num(b.steric.p)},
      {"bd.dt", num(b.cfg.dt)},
      {"bd.mu", num(b.cfg.mu)},
      {"bd.kT", num(b.cfg.kT)},
      {"bd.steps", std::to_string(b.cfg.steps)},
      {"bd.equil_steps", std::to_string(b.cfg.equil_steps)},
      {"bd.sample_every", std::to_string(b.cfg.sample_every)},
      {"bd.log_every", std::to_string(b.log_every)},
      {"bd.max_disp", num(b.cfg.max_disp)},
      {"bd.max_retries", std::to_string(b.cfg.max_retries)},
      {"bd.z_bin", num(b.z_bin)},
      {"bd.r_bin", num(b.r_bin)},
      {"bd.r_max", num(b.r_max)},
      {"output.dir", c.out_dir},
      {"run.threads", std::to_string(c.threads)},
      {"run.seed", std::to_string(c.seed)},
  };
  out.insert(out.end(), bdp.begin(), bdp.end());
  return out;
}

EwaldParams plan_from_config(const RunConfig& c) {
  if (c.nxy > 0) return plan_grid(c.geometry, c.g_w, c.delta, c.nxy);
  return plan_grid_xi(c.geometry, c.g_w, c.delta, c.xi);
}

void make_surfaces(const RunConfig& c, SurfaceCharge& sigma_b, SurfaceCharge& sigma_t) {
  const auto& s = c.surface;
  sigma_b = {};
  sigma_t = {};
  if (s.kind == "uniform") {
    sigma_b = SurfaceCharge::constant(s.sigma_b);
    sigma_t = SurfaceCharge::constant(s.sigma_t);
  } else if (s.kind == "gaussian") {
    const auto& g = c.geometry;
    if (s.amplitude_b != 0.0) sigma_b = periodic_gaussian_surface(g.Lx, g.Ly, s.x0, s.y0, s.s, s.amplitude_b);
    if (s.amplitude_t != 0.0) sigma_t = periodic_gaussian_surface(g.Lx, g.Ly, s.x0, s.y0, s.s, s.amplitude_t);
  }
}

}  // namespace slabewald
