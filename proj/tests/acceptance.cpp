// Acceptance runner: `acceptance N` runs criterion N (1..8), `acceptance` runs all.
// Prints one PASS/FAIL line per criterion followed by indented check details.
// Exit code is 0 only if every requested criterion passes.

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "slabewald/validation.hpp"

using namespace slabewald;

namespace {

struct Criterion {
  int id;
  const char* title;
  std::vector<SuiteReport> (*run)();
};

std::vector<SuiteReport> one(SuiteReport r) { return {std::move(r)}; }

BdSuiteOptions bd_options() {
  BdSuiteOptions o;
  if (const char* d = std::getenv("SLABEWALD_BD_OUT")) o.out_dir = d;
  return o;
}

const Criterion kCriteria[] = {
    {1, "free-space slab agreement", [] { return one(validate_freespace()); }},
    {2, "xi independence", [] { return one(validate_xi()); }},
    {3, "energy-force consistency", [] { return one(validate_workcheck()); }},
    {4, "tuner constants", [] { return one(validate_tuner()); }},
    {5, "BVP solver", [] { return one(validate_bvp()); }},
    {6, "split identity", [] { return one(validate_split_identity()); }},
    {7, "BD physics",
     [] {
       auto o = bd_options();
       return std::vector<SuiteReport>{validate_bd_bulk(o), validate_bd_charged(o, 1.0),
                                       validate_bd_charged(o, 0.2)};
     }},
    {8, "property suites", [] { return one(validate_properties()); }},
};

bool run(const Criterion& c) {
  std::vector<SuiteReport> reports;
  try {
    reports = c.run();
  } catch (const std::exception& e) {
    std::printf("FAIL criterion %d (%s): exception: %s\n", c.id, c.title, e.what());
    return false;
  }
  bool ok = true;
  double secs = 0.0;
  for (const auto& r : reports) {
    ok = ok && r.pass();
    secs += r.seconds;
  }
  std::printf("%s criterion %d (%s) [%.1f s]\n", ok ? "PASS" : "FAIL", c.id, c.title, secs);
  for (const auto& r : reports) {
    for (const auto& k : r.checks)
      std::printf("    %s %s: %s\n", k.pass ? "ok  " : "FAIL", k.name.c_str(), k.detail.c_str());
    for (const auto& n : r.notes) std::printf("    note: %s\n", n.c_str());
  }
  std::fflush(stdout);
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) {
    int id = std::atoi(argv[i]);
    if (id < 1 || id > 8) {
      std::fprintf(stderr, "usage: acceptance [1..8]...\n");
      return 2;
    }
    ids.push_back(id);
  }
  if (ids.empty())
    for (int i = 1; i <= 8; ++i) ids.push_back(i);
  bool all = true;
  for (int id : ids) all = run(kCriteria[id - 1]) && all;
  return all ? 0 : 1;
}
