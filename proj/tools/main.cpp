#include <CLI11.hpp>

#include <cstdio>
#include <exception>

#include "commands.hpp"
#include "slabewald/errors.hpp"

using namespace slabewald;

int main(int argc, char** argv) {
  CLI::App app{"Spectral Ewald electrostatics for dielectric slabs"};
  app.require_subcommand(1);
  cli::Overrides o;
  std::string charges, out;
  std::uint64_t seed = 0;
  int threads = 0;
  auto common = [&](CLI::App* sub, bool need_config) {
    auto* c = sub->add_option("--config", o.config, "config file (key = value, [section] headers)");
    if (need_config) c->required()->check(CLI::ExistingFile);
    sub->add_option("--charges", charges, "charges CSV (x,y,z,q); overrides charges.file");
    sub->add_option("--out", out, "output directory; overrides output.dir");
    sub->add_option("--seed", seed, "random seed; overrides run.seed");
    sub->add_option("--threads", threads, "worker threads; overrides run.threads")->check(CLI::PositiveNumber);
  };
  auto* tune = app.add_subcommand("tune", "derive Ewald parameters and check the constraints");
  common(tune, true);
  auto* solve = app.add_subcommand("solve", "fields and energy for a set of charges");
  common(solve, true);
  auto* bd = app.add_subcommand("bd", "Brownian dynamics run");
  common(bd, true);
  auto* val = app.add_subcommand("validate", "run validation suites");
  std::vector<std::string> suites;
  val->add_option("suites", suites, "freespace, xi, workcheck, bvp, kernels, properties, bd (default: all but bd)");
  common(val, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  if (!charges.empty()) o.charges = charges;
  if (!out.empty()) o.out = out;
  for (auto* s : {tune, solve, bd, val})
    if (s->count("--seed") > 0) o.seed = seed;
  if (threads > 0) o.threads = threads;

  try {
    if (*tune) return cli::cmd_tune(o);
    if (*solve) return cli::cmd_solve(o);
    if (*bd) return cli::cmd_bd(o);
    return cli::cmd_validate(suites, o);
  } catch (const InputError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const ConstraintError& e) {
    std::fprintf(stderr, "constraint violation (%s): %s\n", e.constraint.c_str(), e.what());
    return 3;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 4;
  }
}
