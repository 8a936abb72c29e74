#include "commands.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <random>

#include "slabewald/bd.hpp"
#include "slabewald/config.hpp"
#include "slabewald/errors.hpp"
#include "slabewald/oracles.hpp"
#include "slabewald/parallel.hpp"
#include "slabewald/slab_solver.hpp"
#include "slabewald/triply_periodic.hpp"
#include "slabewald/validation.hpp"

namespace slabewald::cli {

namespace {
using nlohmann::ordered_json;
namespace fs = std::filesystem;

RunConfig load(const Overrides& o) {
  RunConfig c = load_config(o.config);
  if (o.charges) c.charges_file = *o.charges;
  if (o.out) c.out_dir = *o.out;
  if (o.seed) c.seed = c.bd.cfg.seed = *o.seed;
  if (o.threads) c.threads = *o.threads;
  check_config(c);
  set_num_threads(c.threads);
  return c;
}

ordered_json params_json(const RunConfig& c) {
  ordered_json j = ordered_json::object();
  for (const auto& [k, v] : resolved_parameters(c)) j[k] = v;
  return j;
}

ordered_json ewald_json(const EwaldParams& p) {
  ordered_json j;
  j["xi"] = p.split() ? ordered_json(p.xi) : ordered_json("inf");
  j["g_w"] = p.g_w;
  j["g_t"] = p.g_t;
  j["delta"] = p.delta;
  j["n_g"] = p.n_g;
  j["n_sigma"] = p.n_sigma;
  j["h_xy"] = p.h_xy;
  j["hx"] = p.hx;
  j["hy"] = p.hy;
  j["H_E"] = p.H_E;
  j["r_nf"] = p.r_nf;
  j["r_cut"] = p.r_cut;
  j["k_max"] = p.k_max;
  j["Nx"] = p.Nx;
  j["Ny"] = p.Ny;
  j["Nz"] = p.Nz;
  j["n_img"] = p.n_img;
  j["h_min"] = p.h_min;
  j["z0"] = p.z0;
  j["z1"] = p.z1;
  return j;
}

ordered_json constraints_json(const std::vector<Constraint>& cs) {
  ordered_json a = ordered_json::array();
  for (const auto& c : cs)
    a.push_back({{"name", c.name},
                  {"ok", c.ok},
                  {"value", c.value},
                  {"bound", c.bound},
                  {"margin", c.margin()},
                  {"description", c.description}});
  return a;
}

// "# key=value" lines carrying the resolved parameters.
void write_header(std::FILE* f, const RunConfig& c, const EwaldParams* p) {
  for (const auto& [k, v] : resolved_parameters(c)) std::fprintf(f, "# %s=%s\n", k.c_str(), v.c_str());
  if (p) {
    const ordered_json e = ewald_json(*p);
    for (const auto& [k, v] : e.items()) std::fprintf(f, "# derived.%s=%s\n", k.c_str(), v.dump().c_str());
  }
}

std::FILE* open_out(const RunConfig& c, const std::string& name) {
  fs::create_directories(c.out_dir);
  std::string path = (fs::path(c.out_dir) / name).string();
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw InputError("cannot write '" + path + "'");
  return f;
}

void write_json(const RunConfig& c, const std::string& name, const ordered_json& j) {
  std::FILE* f = open_out(c, name);
  std::string s = j.dump(2);
  std::fprintf(f, "%s\n", s.c_str());
  std::fclose(f);
}

double min_wall_distance(const ChargeSet& q, double H) {
  double h = kInf;
  for (double z : q.z) h = std::min(h, std::min(z, H - z));
  return h;
}

// FNV-1a over the bit patterns of the positions.
std::string position_hash(const ChargeSet& c) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&](double v) {
    unsigned char b[sizeof(double)];
    std::memcpy(b, &v, sizeof v);
    for (unsigned char x : b) {
      h ^= x;
      h *= 1099511628211ULL;
    }
  };
  for (std::size_t i = 0; i < c.size(); ++i) {
    mix(c.x[i]);
    mix(c.y[i]);
    mix(c.z[i]);
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}
}  // namespace

int cmd_tune(const Overrides& o) {
  RunConfig c = load(o);
  EwaldParams p = plan_from_config(c);
  if (!c.charges_file.empty()) {
    ChargeSet q = read_charges_csv(c.charges_file);
    if (q.size() > 0) {
      p.h_min = min_wall_distance(q, c.geometry.H);
      evaluate_constraints(p, c.geometry);
    }
  }
  ordered_json j;
  j["parameters"] = params_json(c);
  j["ewald"] = ewald_json(p);
  j["constraints"] = constraints_json(p.constraints);
  j["ok"] = p.constraints_ok();
  std::printf("%s\n", j.dump(2).c_str());
  if (o.out) write_json(c, "tune.json", j);
  if (const Constraint* v = p.first_violation()) {
    std::fprintf(stderr, "constraint violation (%s): %s\n", v->name.c_str(), v->description.c_str());
    return 3;
  }
  return 0;
}

int cmd_solve(const Overrides& o) {
  RunConfig c = load(o);
  if (c.charges_file.empty()) throw InputError("solve: no charges file (charges.file or --charges)");
  ChargeSet q = read_charges_csv(c.charges_file);
  SurfaceCharge sb, st;
  make_surfaces(c, sb, st);
  EwaldParams p = plan_from_config(c);
  SlabSolver solver(c.geometry, p, c.solver);
  SolveResult r = solver.solve(q, sb, st);

  std::FILE* f = open_out(c, "results.csv");
  write_header(f, c, &p);
  std::fprintf(f, "id,phi_bar,Ex,Ey,Ez,Fx,Fy,Fz\n");
  for (std::size_t i = 0; i < q.size(); ++i) {
    const auto& E = r.E_bar[i];
    std::fprintf(f, "%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", i, r.phi_bar[i], E[0], E[1], E[2],
                 q.q[i] * E[0], q.q[i] * E[1], q.q[i] * E[2]);
  }
  std::fclose(f);

  ordered_json j;
  j["parameters"] = params_json(c);
  j["ewald"] = ewald_json(p);
  j["n_charges"] = q.size();
  j["U"] = r.has_energy ? ordered_json(r.U) : ordered_json(nullptr);
  const auto& d = r.diag;
  j["diagnostics"] = {{"ai1", d.ai1},
                      {"ai2", d.ai2},
                      {"A_i", d.A_i},
                      {"B_i", d.B_i},
                      {"ai_discrepancy", d.ai_discrepancy},
                      {"n_over", d.n_over},
                      {"n_far", d.n_far},
                      {"n_images", d.n_images},
                      {"h_min", d.h_min},
                      {"constraints", constraints_json(d.constraints)},
                      {"warnings", d.warnings}};
  write_json(c, "summary.json", j);
  for (const auto& w : d.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
  if (r.has_energy)
    std::printf("solved %zu charges, U = %.17g\n", q.size(), r.U);
  else
    std::printf("solved %zu charges\n", q.size());
  return 0;
}

int cmd_bd(const Overrides& o) {
  RunConfig c = load(o);
  const auto& b = c.bd;
  const SlabGeometry& g = c.geometry;
  const bool bulk = b.mode == "bulk";
  std::mt19937_64 rng(c.seed ^ 0x9e3779b97f4a7c15ULL);

  EwaldParams p{};
  std::unique_ptr<SlabSolver> solver;
  std::unique_ptr<TriplyPeriodicEwald> ewald;
  SurfaceCharge sb, st;
  BdBox box;
  if (bulk) {
    ewald = std::make_unique<TriplyPeriodicEwald>(b.L, g.eps, c.g_w, c.xi, c.delta);
    box = {b.L, b.L, b.L, true, 0.0, b.L, false};
  } else {
    make_surfaces(c, sb, st);
    p = plan_from_config(c);
    SolverOptions so = c.solver;
    so.compute_energy = false;
    solver = std::make_unique<SlabSolver>(g, p, so);
    const double band = c.solver.allow_wall_overlap ? 0.0 : p.n_sigma * c.g_w;
    box = {g.Lx, g.Ly, g.H, false, band, g.H - band, true};
  }

  ChargeSet q;
  if (b.init == "file") {
    if (c.charges_file.empty()) throw InputError("bd: bd.init = file needs charges.file or --charges");
    q = read_charges_csv(c.charges_file);
  } else if (b.init == "pnp") {
    if (bulk || c.surface.kind != "uniform" || c.surface.sigma_b != c.surface.sigma_t || b.n_neg != 0)
      throw InputError("bd: pnp initialization needs a slab, equal uniform wall charges and cations only");
    PnpProfile prof = pnp_profile(c.surface.sigma_b, g.eps, b.cfg.kT, g.H, b.steric.a);
    q = pnp_ions(b.n_pos, box, prof, rng);
  } else {
    double lo = bulk ? 0.0 : std::max(box.z_lo, b.steric.a), hi = bulk ? b.L : std::min(box.z_hi, g.H - b.steric.a);
    if (!(hi > lo)) throw InputError("bd: slab too thin for the ion radius");
    q = random_ions(b.n_pos, b.n_neg, box, lo, hi, rng);
  }

  ForceFn force;
  std::function<double(const ChargeSet&)> energy;
  if (bulk) {
    auto phi = std::make_shared<std::vector<double>>();
    auto E = std::make_shared<std::vector<std::array<double, 3>>>();
    force = [&, phi, E](const ChargeSet& cc, std::vector<std::array<double, 3>>& F) {
      ewald->compute(cc, *phi, *E);
      for (std::size_t i = 0; i < cc.size(); ++i)
        for (int d = 0; d < 3; ++d) F[i][d] = cc.q[i] * (*E)[i][d];
    };
    energy = [&, phi, E](const ChargeSet& cc) {
      ewald->compute(cc, *phi, *E);
      double U = 0.0;
      for (std::size_t i = 0; i < cc.size(); ++i) U += 0.5 * cc.q[i] * (*phi)[i];
      return U;
    };
  } else {
    force = [&](const ChargeSet& cc, std::vector<std::array<double, 3>>& F) {
      ChargeSet w = cc;
      SolveResult r = solver->solve(w, sb, st);
      for (std::size_t i = 0; i < cc.size(); ++i)
        for (int d = 0; d < 3; ++d) F[i][d] = cc.q[i] * r.E_bar[i][d];
    };
    energy = [&](const ChargeSet& cc) {
      ChargeSet w = cc;
      solver->options().compute_energy = true;
      SolveResult r = solver->solve(w, sb, st);
      solver->options().compute_energy = false;
      return r.U;
    };
  }

  BdIntegrator integ(box, b.steric, b.cfg);
  BdObservables obs(box, b.z_bin, b.r_bin, b.r_max);
  std::FILE* traj = open_out(c, "trajectory.csv");
  write_header(traj, c, bulk ? nullptr : &p);
  std::fprintf(traj, "step,time,U\n");
  std::fprintf(traj, "0,0,%.17g\n", energy(q));
  const long total = b.cfg.equil_steps + b.cfg.steps;
  for (long s = 1; s <= total; ++s) {
    integ.step(q, force);
    if (s % b.log_every == 0) std::fprintf(traj, "%ld,%.17g,%.17g\n", s, s * b.cfg.dt, energy(q));
    if (s > b.cfg.equil_steps && (s - b.cfg.equil_steps) % b.cfg.sample_every == 0) obs.sample(q);
  }
  std::fclose(traj);
  if (b.cfg.steps == 0) obs.sample(q);

  std::FILE* f = open_out(c, "density.csv");
  write_header(f, c, nullptr);
  std::fprintf(f, "z,n,n_pos,n_neg\n");
  auto zc = obs.z_centers();
  auto n = obs.density(), np = obs.density_of(1), nn = obs.density_of(-1);
  for (std::size_t i = 0; i < zc.size(); ++i)
    std::fprintf(f, "%.17g,%.17g,%.17g,%.17g\n", zc[i], n[i], np[i], nn[i]);
  std::fclose(f);
  if (b.r_max > 0.0) {
    f = open_out(c, "g2.csv");
    write_header(f, c, nullptr);
    std::fprintf(f, "r,g2_like,g2_unlike\n");
    auto rc = obs.r_centers();
    auto gl = obs.g2_like(), gu = obs.g2_unlike();
    for (std::size_t i = 0; i < rc.size(); ++i) std::fprintf(f, "%.17g,%.17g,%.17g\n", rc[i], gl[i], gu[i]);
    std::fclose(f);
  }
  {
    std::ofstream cf(fs::path(c.out_dir) / "final_charges.csv");
    write_charges_csv(cf, q);
  }
  ordered_json j;
  j["parameters"] = params_json(c);
  if (!bulk) j["ewald"] = ewald_json(p);
  j["n_charges"] = q.size();
  j["steps_taken"] = integ.steps_taken();
  j["total_retries"] = integ.total_retries();
  j["samples"] = obs.samples();
  j["trajectory_hash"] = position_hash(q);
  write_json(c, "summary.json", j);
  std::printf("bd: %ld steps, %ld retries, %ld samples, hash %s\n", integ.steps_taken(), integ.total_retries(),
              obs.samples(), position_hash(q).c_str());
  return 0;
}

int cmd_validate(const std::vector<std::string>& suites_in, const Overrides& o) {
  std::vector<std::string> suites = suites_in;
  if (suites.empty())
    for (const auto& s : suite_names())
      if (s != "bd") suites.push_back(s);
  for (const auto& s : suites)
    if (std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end())
      throw InputError("unknown validation suite '" + s + "'");
  if (o.threads) set_num_threads(*o.threads);
  BdSuiteOptions bd;
  if (o.seed) bd.seed = *o.seed;
  if (o.out) bd.out_dir = *o.out;
  ordered_json all = ordered_json::array();
  bool ok = true;
  for (const auto& s : suites) {
    SuiteReport r = run_suite(s, bd);
    for (const auto& n : r.notes) std::printf("  %s: %s\n", s.c_str(), n.c_str());
    ordered_json checks = ordered_json::array();
    for (const auto& ch : r.checks) {
      std::printf("%s %s.%s: %s\n", ch.pass ? "PASS" : "FAIL", s.c_str(), ch.name.c_str(), ch.detail.c_str());
      checks.push_back({{"name", ch.name}, {"pass", ch.pass}, {"detail", ch.detail}});
    }
    std::printf("%s %s (%.1f s)\n", r.pass() ? "PASS" : "FAIL", s.c_str(), r.seconds);
    std::fflush(stdout);
    ok = ok && r.pass();
    all.push_back({{"suite", s}, {"pass", r.pass()}, {"checks", checks}, {"notes", r.notes}});
  }
  if (o.out) {
    fs::create_directories(*o.out);
    std::ofstream f(fs::path(*o.out) / "validate.json");
    f << all.dump(2) << "\n";
  }
  return ok ? 0 : 1;
}

}  // namespace slabewald::cli
