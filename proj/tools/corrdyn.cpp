// Copyright 2026 The corrdyn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "corrdyn/clump.hpp"
#include "corrdyn/correspondence.hpp"
#include "corrdyn/ellcurve.hpp"
#include "corrdyn/error.hpp"
#include "corrdyn/physgraph.hpp"
#include "corrdyn/treegen.hpp"

#ifndef CORRDYN_DATA_DIR
#define CORRDYN_DATA_DIR "data"
#endif

using namespace corrdyn;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kUsage = 1, kAssert = 2, kBudget = 3 };

struct RunConfig {
  std::string builtin;
  std::string file;
  Limb p = 0;
  unsigned m = 1;
  std::size_t budget = 0;  // 0: command default
  std::size_t size_cap = 0;
  std::size_t radius = 3;
  std::string format = "json";
  unsigned workers = 1;
  unsigned max_degree = 24;
  bool has_core = false;
  bool no_core = false;
  bool symmetric = false;
  bool distinct_sides = false;
};

const std::map<std::string, std::string>& builtins() {
  static const std::map<std::string, std::string> names{
      {"phi2", "phi2.bipoly"},         {"phi3", "phi3.bipoly"},   {"elkies", "elkies.bipoly"},
      {"sq", "sq.bipoly"},             {"identity", "identity.bipoly"}, {"parabola", "parabola.bipoly"}};
  return names;
}

std::string data_dir() {
  if (const char* env = std::getenv("CORRDYN_DATA"); env && *env) return env;
  return CORRDYN_DATA_DIR;
}

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string resolve_path(const RunConfig& cfg) {
  if (!cfg.file.empty()) {
    if (std::filesystem::exists(cfg.file)) return cfg.file;
    const std::string alt = data_dir() + "/" + cfg.file;
    if (std::filesystem::exists(alt)) return alt;
    return cfg.file;
  }
  const std::string name = cfg.builtin.empty() ? "phi2" : cfg.builtin;
  auto it = builtins().find(name);
  if (it == builtins().end()) throw UsageError("unknown builtin '" + name + "'");
  return data_dir() + "/" + it->second;
}

Correspondence load(const RunConfig& cfg) {
  if (cfg.m == 0) throw Error(ErrorCode::DegreeZero, "extension degree must be >= 1");
  if (cfg.p != 0 && !is_prime(cfg.p)) throw Error(ErrorCode::NotPrime, std::to_string(cfg.p) + " is not prime");
  Correspondence c = Correspondence::load(read_bipoly_file(resolve_path(cfg)), cfg.p);
  c.set_distinct_sides(cfg.distinct_sides);
  return c;
}

FieldPtr work_field(const Correspondence& c, unsigned m) { return make_field(c.ctx().p(), c.ctx().k() * m); }

std::size_t supersingular_count(Limb p) {
  if (p < 5 || p > 1024) return 0;
  return supersingular_set(p).count();
}

std::size_t default_size_cap(const Correspondence& c) {
  return 10 * std::max(c.d(), c.e()) * (supersingular_count(c.ctx().p()) + 1);
}

void emit(const RunConfig& cfg, const json& j, const std::string& text = "") {
  if (cfg.format == "text" && !text.empty()) {
    std::cout << text;
  } else {
    std::cout << j.dump(2) << "\n";
  }
}

// ---------------------------------------------------------------------------

int cmd_clump(const RunConfig& cfg) {
  const Correspondence c = load(cfg);
  SearchOptions opt;
  opt.size_cap = cfg.size_cap ? cfg.size_cap : default_size_cap(c);
  opt.clump.budget = cfg.budget ? cfg.budget : opt.size_cap;
  opt.clump.max_degree = cfg.max_degree;
  opt.clump.symmetric = cfg.symmetric;
  opt.workers = cfg.workers;
  opt.has_core = cfg.has_core;
  opt.assume_no_core = cfg.no_core;
  const ClumpSearch res = find_all_clumps(c, cfg.m, opt);
  json j;
  j["p"] = c.ctx().p();
  j["base_field"] = c.ctx().name();
  j["m"] = cfg.m;
  j["seed_field"] = res.seed_field->name();
  j["seeds"] = res.seeds;
  j["size_cap"] = opt.size_cap;
  j["budget"] = opt.clump.budget;
  j["unbounded_seeds"] = res.unbounded_seeds;
  j["oversize"] = res.oversize;
  j["has_core"] = res.has_core;
  j["no_core"] = res.no_core;
  j["etale_count"] = res.etale_count();
  j["verdict"] = res.verdict();
  json list = json::array();
  std::ostringstream text;
  for (const auto& f : res.clumps) {
    json r = clump_json(f.clump, c.ctx().k());
    r["seed"] = f.seed.to_string();
    list.push_back(r);
    text << (f.clump.etale ? "etale " : "ramified ") << "clump of " << f.clump.size() << " edges, x_image";
    for (const auto& x : r["x_image"]) text << " " << x.get<std::string>();
    text << "\n";
  }
  j["clumps"] = list;
  text << "verdict: " << res.verdict() << "\n";
  emit(cfg, j, text.str());
  return res.falsified() ? kAssert : kOk;
}

EdgePoint seed_edge(const Correspondence& c, unsigned m, const std::string& x, const std::string& y) {
  FieldPtr f = work_field(c, m);
  return EdgePoint{decode_point(*f, x), decode_point(*f, y)};
}

ColoredComponent explore_cfg(const RunConfig& cfg, const Correspondence& c, const std::string& x,
                             const std::string& y) {
  const std::size_t budget = cfg.budget ? cfg.budget : 5000;
  return explore(c, cfg.m, seed_edge(c, cfg.m, x, y), budget);
}

int cmd_volcano(const RunConfig& cfg, const std::string& x, const std::string& y) {
  const Correspondence c = load(cfg);
  const ColoredComponent comp = explore_cfg(cfg, c, x, y);
  if (cfg.format == "dot") {
    std::cout << component_dot(comp);
    return comp.truncated ? kBudget : kOk;
  }
  json j = component_json(comp);
  j["betti_spanning_tree"] = betti_spanning_tree(comp);
  if (comp.truncated) {
    emit(cfg, j);
    std::cerr << "component truncated at the edge budget\n";
    return kBudget;
  }
  const VolcanoReport v = volcano_classify(comp);
  j["tag"] = to_string(v.tag);
  j["rim"] = v.rim;
  j["rim_edges"] = v.rim_edges;
  json depth = json::object();
  for (const auto& [label, d] : v.depth) depth[label] = d;
  j["depth"] = depth;
  emit(cfg, j, std::string(to_string(v.tag)) + " betti " + std::to_string(comp.betti) + " rim " +
                   std::to_string(v.rim_edges) + "\n");
  return kOk;
}

int cmd_cover(const RunConfig& cfg, const std::string& x, const std::string& y) {
  const Correspondence c = load(cfg);
  const ColoredComponent comp = explore_cfg(cfg, c, x, y);
  if (comp.truncated) {
    std::cerr << "component truncated at the edge budget\n";
    return kBudget;
  }
  const CoverCertificate cert = cover_check(comp, c.d(), c.e());
  json j;
  j["seed"] = comp.seed.to_string();
  j["d"] = c.d();
  j["e"] = c.e();
  j["closed"] = comp.closed;
  j["covered"] = cert.covered;
  j["betti"] = cert.betti;
  j["failing"] = cert.failing;
  j["edge_count"] = comp.edge_count();
  emit(cfg, j, std::string(cert.covered ? "covered" : "not covered") + ", betti " + std::to_string(cert.betti) + "\n");
  return kOk;
}

int cmd_stats(const RunConfig& cfg) {
  const Correspondence c = load(cfg);
  const std::size_t budget = cfg.budget ? cfg.budget : 1000;
  const StatsReport rep = stats(c, cfg.m, cfg.radius, budget, cfg.workers, cfg.max_degree);
  json j = rep.to_json();
  j["p"] = c.ctx().p();
  j["m"] = cfg.m;
  j["budget"] = budget;
  j["note"] = "generic_up_to_r is a bounded-radius certificate, experimental evidence only";
  emit(cfg, j);
  return kOk;
}

int cmd_tutte(const RunConfig& cfg, const std::string& path, unsigned s_cap) {
  std::string file = path;
  if (!std::filesystem::exists(file) && std::filesystem::exists(data_dir() + "/" + path)) file = data_dir() + "/" + path;
  const FiniteGraph g = read_edge_list(file);
  const ArcReport rep = arc_transitivity(g, s_cap);
  json j = rep.to_json();
  j["graph"] = path;
  j["edges"] = g.edge_count();
  emit(cfg, j,
       "|Aut| " + std::to_string(rep.aut_order) + ", s_max " + std::to_string(rep.s_max) +
           (rep.sharp ? ", sharp\n" : ", not sharp\n"));
  if (!rep.counters_agree) return kAssert;
  if (rep.cubic && rep.s_max >= 1 && !rep.sharp) return kAssert;
  return kOk;
}

int cmd_supersingular(const RunConfig& cfg) {
  if (cfg.p == 0) throw UsageError("-p is required");
  const SupersingularReport r = supersingular_set(cfg.p);
  json j = json::parse(r.json());
  j["mass_check"] = r.mass_check;
  emit(cfg, j);
  return r.mass_check ? kOk : kAssert;
}

int cmd_orbit(const RunConfig& cfg, const std::optional<std::string>& x0) {
  const Correspondence c = load(cfg);
  FieldPtr f = work_field(c, cfg.m);
  const Correspondence cm = c.base_change(canonical_embedding(c.ctx(), *f));
  const std::size_t budget = cfg.budget ? cfg.budget : 1000;
  std::vector<PointP1> starts;
  if (x0) {
    starts.push_back(decode_point(*f, *x0));
  } else {
    if (!f->enumerable()) throw Error(ErrorCode::BoundExceeded, "field too large to enumerate");
    for (const auto& a : enumerate(*f)) starts.emplace_back(a);
    starts.push_back(PointP1::infinity());
  }
  json list = json::array();
  std::size_t bounded = 0, max_size = 0;
  for (const auto& s : starts) {
    const OrbitClosure o = orbit_closure(cm, s, budget);
    json xs = json::array(), ys = json::array();
    for (const auto& x : o.x_side) xs.push_back(encode_point(x));
    for (const auto& y : o.y_side) ys.push_back(encode_point(y));
    list.push_back({{"x0", encode_point(s)}, {"bounded", o.bounded}, {"x_side", xs}, {"y_side", ys}});
    if (o.bounded) {
      ++bounded;
      max_size = std::max(max_size, o.x_side.size());
    }
  }
  json j;
  j["p"] = c.ctx().p();
  j["m"] = cfg.m;
  j["starts"] = starts.size();
  j["bounded"] = bounded;
  j["bounded_fraction"] = starts.empty() ? 0.0 : static_cast<double>(bounded) / static_cast<double>(starts.size());
  j["max_bounded_size"] = max_size;
  j["orbits"] = list;
  emit(cfg, j);
  return kOk;
}

// Elliptic-curve oracle against the level-2 modular correspondence.
int cmd_validate(const RunConfig& cfg) {
  if (cfg.p == 0) throw UsageError("-p is required");
  RunConfig phi = cfg;
  phi.builtin = "phi2";
  phi.file.clear();
  phi.m = 1;
  const Correspondence c = load(phi);
  const Limb p = cfg.p;
  const SupersingularReport ss = supersingular_set(p);
  FieldPtr fp = make_field(p, 1);

  // Two-isogenous j versus fibers, over the 2-torsion splitting field.
  std::size_t checked = 0, isogeny_mismatch = 0;
  for (const auto& j : enumerate(*fp)) {
    if (j.is_zero() || j == fp->from_int(1728) || is_supersingular(j)) continue;
    const TwoIsogenies iso = two_isogenous_j(j);
    const Correspondence cf = c.base_change(canonical_embedding(c.ctx(), *iso.field));
    const Fiber fib = cf.forward(PointP1(canonical_embedding(*fp, *iso.field).apply(j)));
    std::vector<FieldElement> roots;
    for (const auto& [pt, mult] : fib.points)
      for (unsigned k = 0; k < mult; ++k) roots.push_back(pt.is_inf() ? iso.field->zero() : pt.value());
    std::sort(roots.begin(), roots.end());
    ++checked;
    if (fib.missing || roots != iso.js) ++isogeny_mismatch;
  }

  // Deuring criterion versus point counts.
  std::size_t deuring_checked = 0, deuring_mismatch = 0;
  const bool brute = p <= 37;
  if (brute) {
    FieldPtr f2 = make_field(p, 2);
    for (const auto& j : enumerate(*f2)) {
      const std::uint64_t n = count_points(curve_from_j(j));
      ++deuring_checked;
      if (is_supersingular(j) != (n % p == 1)) ++deuring_mismatch;
    }
  }

  // The unique etale clump against the supersingular set.
  SearchOptions opt;
  opt.size_cap = default_size_cap(c);
  opt.clump.budget = opt.size_cap;
  opt.workers = cfg.workers;
  const ClumpSearch res = find_all_clumps(c, 1, opt);
  json ss_js = json::parse(ss.json())["js"];
  json x_image = json::array();
  for (const auto& f : res.clumps)
    if (f.clump.etale) x_image = clump_json(f.clump, c.ctx().k())["x_image"];
  const bool clump_ok = res.etale_count() == 1 && x_image == ss_js;

  json out;
  out["p"] = p;
  out["ordinary_j_checked"] = checked;
  out["isogeny_mismatches"] = isogeny_mismatch;
  out["deuring_checked"] = deuring_checked;
  out["deuring_mismatches"] = deuring_mismatch;
  out["deuring_brute_force"] = brute;
  out["supersingular"] = ss_js;
  out["clump_x_image"] = x_image;
  out["etale_clumps"] = res.etale_count();
  out["clump_matches"] = clump_ok;
  const bool ok = isogeny_mismatch == 0 && deuring_mismatch == 0 && clump_ok && ss.mass_check;
  out["agree"] = ok;
  emit(cfg, out, ok ? "agree\n" : "DISAGREE\n");
  return ok ? kOk : kAssert;
}

void add_common(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--builtin", cfg.builtin, "Shipped correspondence (phi2, phi3, elkies, sq, identity, parabola)");
  sub->add_option("--file", cfg.file, "Bivariate polynomial file");
  sub->add_option("-p,--prime", cfg.p, "Characteristic (required for integer tables)");
  sub->add_option("-m,--ext", cfg.m, "Working extension degree over the base field");
  sub->add_option("--budget", cfg.budget, "Edge budget");
  sub->add_option("--format", cfg.format, "json, dot or text")->check(CLI::IsMember({"json", "dot", "text"}));
  sub->add_option("--workers", cfg.workers, "Worker threads");
  sub->add_option("--max-degree", cfg.max_degree, "Cap on the absolute field degree");
  sub->add_flag("--distinct-sides", cfg.distinct_sides, "Treat X and Y as different curves");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamics of correspondences of the projective line over finite fields"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string x, y, graph;
  std::optional<std::string> x0;
  unsigned s_cap = 8;

  auto* clump = app.add_subcommand("clump", "Exhaustive clump search and uniqueness check");
  add_common(clump, cfg);
  clump->add_option("--size-cap", cfg.size_cap, "Largest clump reported (default 10 max(d,e) (#ss + 1))");
  auto* core_flag =
      clump->add_flag("--has-core", cfg.has_core, "The correspondence has a core; uniqueness is not asserted");
  clump->add_flag("--no-core", cfg.no_core, "Assert uniqueness even when every seed closes up")->excludes(core_flag);
  clump->add_flag("--symmetric", cfg.symmetric, "Expand every reached point on both sides");

  auto* volcano = app.add_subcommand("volcano", "Physical component of a seed and its volcano shape");
  add_common(volcano, cfg);
  volcano->add_option("--x", x, "Seed x coordinate")->required();
  volcano->add_option("--y", y, "Seed y coordinate")->required();

  auto* cover = app.add_subcommand("cover", "Covering certificate of a seed's component");
  add_common(cover, cfg);
  cover->add_option("--x", x, "Seed x coordinate")->required();
  cover->add_option("--y", y, "Seed y coordinate")->required();

  auto* st = app.add_subcommand("stats", "Classification histogram of all rational edges");
  add_common(st, cfg);
  st->add_option("-r,--radius", cfg.radius, "Ball radius for the cycle test");

  auto* tutte = app.add_subcommand("tutte", "Arc transitivity of a finite graph");
  tutte->add_option("graph", graph, "Edge list file")->required();
  tutte->add_option("--s-cap", s_cap, "Largest s examined");
  tutte->add_option("--format", cfg.format, "json or text")->check(CLI::IsMember({"json", "text"}));

  auto* validate = app.add_subcommand("validate", "Cross-check the modular correspondence with elliptic curves");
  validate->add_option("-p,--prime", cfg.p, "Characteristic")->required();
  validate->add_option("--workers", cfg.workers, "Worker threads");
  validate->add_option("--format", cfg.format, "json or text")->check(CLI::IsMember({"json", "text"}));

  auto* ssc = app.add_subcommand("supersingular", "Supersingular j-invariants over F_{p^2}");
  ssc->add_option("-p,--prime", cfg.p, "Characteristic")->required();

  auto* orbit = app.add_subcommand("orbit", "Rational orbit closures");
  add_common(orbit, cfg);
  orbit->add_option("--x0", x0, "Start point (default: every rational point)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*clump) return cmd_clump(cfg);
    if (*volcano) return cmd_volcano(cfg, x, y);
    if (*cover) return cmd_cover(cfg, x, y);
    if (*st) return cmd_stats(cfg);
    if (*tutte) return cmd_tutte(cfg, graph, s_cap);
    if (*validate) return cmd_validate(cfg);
    if (*ssc) return cmd_supersingular(cfg);
    if (*orbit) return cmd_orbit(cfg, x0);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.code()) {
      case ErrorCode::BoundExceeded:
      case ErrorCode::BudgetTooSmall:
      case ErrorCode::Truncated:
        return kBudget;
      default:
        return kUsage;
    }
  }
  return kUsage;
}
