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

#include <doctest.h>

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "corrdyn/ellcurve.hpp"
#include "corrdyn/error.hpp"
#include "corrdyn/physgraph.hpp"

using namespace corrdyn;

namespace {

Correspondence builtin(const std::string& name, Limb p) {
  return Correspondence::load(read_bipoly_file(std::string(CORRDYN_TEST_DATA) + "/" + name + ".bipoly"), p);
}

Correspondence over(const Correspondence& c, unsigned k) {
  auto f = make_field(c.ctx().p(), k);
  return c.base_change(canonical_embedding(c.ctx(), *f));
}

PointP1 pt(const Correspondence& c, std::int64_t v) { return PointP1(c.ctx().from_int(v)); }

EdgePoint at(const Correspondence& c, std::int64_t x, std::int64_t y) { return EdgePoint{pt(c, x), pt(c, y)}; }

// E - V + (number of connected pieces), parallel edges counted, by plain DFS.
long betti_by_dfs(const ColoredComponent& comp) {
  std::map<std::pair<int, PointP1>, std::vector<std::pair<int, PointP1>>> adj;
  long e = 0;
  for (std::size_t i = 0; i < comp.edges.size(); ++i) {
    const auto& z = comp.edges[i];
    adj[{0, z.x}].push_back({1, z.y});
    adj[{1, z.y}].push_back({0, z.x});
    e += comp.locals[i].edge_count();
  }
  std::set<std::pair<int, PointP1>> seen;
  long pieces = 0;
  for (const auto& [v, _] : adj) {
    if (seen.count(v)) continue;
    ++pieces;
    std::deque<std::pair<int, PointP1>> q{v};
    seen.insert(v);
    while (!q.empty()) {
      auto u = q.front();
      q.pop_front();
      for (const auto& w : adj[u])
        if (seen.insert(w).second) q.push_back(w);
    }
  }
  return e - static_cast<long>(adj.size()) + pieces;
}

std::vector<Correspondence> sample_correspondences() {
  std::vector<Correspondence> cs;
  for (Limb p : {5, 7, 11, 13}) cs.push_back(over(builtin("phi2", p), 2));
  cs.push_back(over(builtin("phi3", 7), 2));
  cs.push_back(builtin("sq", 7));
  cs.push_back(over(builtin("elkies", 11), 2));
  cs.push_back(builtin("parabola", 11));
  cs.push_back(builtin("identity", 5));
  return cs;
}

}  // namespace

TEST_CASE("explore: the +-1 correspondence, the identity, the supersingular component") {
  auto sq = builtin("sq", 7);
  auto comp = explore(sq, at(sq, 3, 4), 100);
  CHECK(comp.blue == std::vector<PointP1>{pt(sq, 3), pt(sq, 4)});
  CHECK(comp.red == std::vector<PointP1>{pt(sq, 3), pt(sq, 4)});
  CHECK(comp.edges.size() == 4);
  CHECK(comp.betti == 1);
  CHECK(comp.closed);
  CHECK_FALSE(comp.truncated);

  auto id = builtin("identity", 5);
  auto one = explore(id, at(id, 2, 2), 100);
  CHECK(one.blue.size() == 1);
  CHECK(one.red.size() == 1);
  CHECK(one.edges.size() == 1);
  CHECK(one.betti == 0);

  auto phi = builtin("phi2", 11);
  auto ss = explore(phi, at(phi, 0, 1), 1000);
  std::vector<PointP1> want;
  for (const auto& j : supersingular_set(11).js) want.push_back(PointP1(make_field(11, 1)->from_int(j.coeffs()[0])));
  CHECK(ss.blue == want);
  CHECK(ss.red == want);
  CHECK(ss.closed);
  CHECK(ss.betti == 0);

  CHECK_THROWS_AS(explore(sq, at(sq, 3, 5), 10), Error);
}

TEST_CASE("explore flags truncation instead of throwing") {
  auto phi = builtin("phi2", 13);
  auto c2 = over(phi, 2);
  const auto comps = all_components(c2, 5000);
  const auto largest = *std::max_element(comps.begin(), comps.end(), [](const auto& a, const auto& b) {
    return a.edges.size() < b.edges.size();
  });
  REQUIRE(largest.edges.size() > 4);
  const EdgePoint seed = largest.seed;
  auto big = explore(phi, 2, seed, 5000);
  REQUIRE_FALSE(big.truncated);
  CHECK(big.edges == largest.edges);
  // a seed written over F_13 is lifted
  CHECK(explore(phi, 2, at(phi, 0, 11), 5000).m == 2);
  auto cut = explore(phi, 2, seed, 2);
  CHECK(cut.truncated);
  CHECK(cut.betti == -1);
  CHECK_FALSE(cut.closed);
  CHECK_THROWS_AS(volcano_classify(cut), Error);
}

TEST_CASE("betti by E - V + 1 matches the spanning forest and a DFS count") {
  std::size_t seen = 0;
  for (const auto& c : sample_correspondences()) {
    for (const auto& comp : all_components(c, 5000)) {
      REQUIRE_FALSE(comp.truncated);
      CHECK(comp.betti == betti_spanning_tree(comp));
      CHECK(comp.betti == betti_by_dfs(comp));
      CHECK(comp.betti >= 0);
      ++seen;
    }
  }
  CHECK(seen > 100);
}

TEST_CASE("components partition the rational edges; closed ones carry full fibers") {
  for (const auto& c : sample_correspondences()) {
    std::multiset<EdgePoint> all;
    for (const auto& comp : all_components(c, 5000)) {
      all.insert(comp.edges.begin(), comp.edges.end());
      CHECK(std::binary_search(comp.edges.begin(), comp.edges.end(), comp.seed));
      if (!comp.closed) continue;
      std::map<PointP1, unsigned> out, in;
      for (const auto& z : comp.edges) {
        out[z.x] += z.mult_f;
        in[z.y] += z.mult_g;
      }
      for (const auto& x : comp.blue) CHECK(out[x] == c.d());
      for (const auto& y : comp.red) CHECK(in[y] == c.e());
    }
    const auto rat = c.rational_edges();
    CHECK(std::vector<EdgePoint>(all.begin(), all.end()) == rat);
  }
}

TEST_CASE("volcano pruning: +-1 component, trees, the multi-cycle tag") {
  auto sq = builtin("sq", 7);
  auto v = volcano_classify(explore(sq, at(sq, 3, 4), 100));
  CHECK(v.tag == VolcanoTag::Volcano);
  CHECK(v.rim_edges == 4);
  CHECK(v.rim.size() == 4);
  for (const auto& [label, depth] : v.depth) CHECK(depth == 0);

  auto id = builtin("identity", 5);
  CHECK(volcano_classify(explore(id, at(id, 1, 1), 10)).tag == VolcanoTag::Tree);

  // Phi_2 over F_11: the supersingular component {0, 1728} closes up with
  // three edges, one cusp-like; over F_13 the supersingular component is
  // a single vertex pair joined by a node with extra loops.
  bool multi = false;
  for (Limb p : {13, 37}) {
    auto c = over(builtin("phi2", p), 2);
    for (const auto& comp : all_components(c, 5000)) {
      if (comp.betti >= 2) {
        CHECK(volcano_classify(comp).tag == VolcanoTag::MultiCycle);
        multi = true;
      }
    }
  }
  CHECK(multi);
}

TEST_CASE("ordinary components of Phi_2 over F_{p^2} have at most one cycle") {
  std::size_t volcanoes = 0;
  for (Limb p : {5, 7, 11, 13, 17, 19, 23}) {
    auto c = over(builtin("phi2", p), 2);
    std::set<PointP1> ss;
    for (const auto& j : supersingular_set(p).js) ss.insert(PointP1(j));
    for (const auto& comp : all_components(c, 5000)) {
      REQUIRE_FALSE(comp.truncated);
      bool ordinary = true;
      for (const auto* side : {&comp.blue, &comp.red})
        for (const auto& v : *side)
          if (v.is_inf() || ss.count(v)) ordinary = false;
      if (!ordinary) continue;
      CHECK(comp.betti <= 1);
      auto rep = volcano_classify(comp);
      CHECK(rep.tag != VolcanoTag::MultiCycle);
      if (rep.tag == VolcanoTag::Volcano) {
        ++volcanoes;
        // A single cycle: as many edges as vertices once the leaves are gone.
        CHECK(rep.rim.size() == rep.rim_edges);
        CHECK(rep.depth.size() == comp.blue.size() + comp.red.size());
        for (const auto& r : rep.rim) CHECK(rep.depth.at(r) == 0);
      } else {
        CHECK(rep.depth.empty());
      }
    }
  }
  CHECK(volcanoes > 0);
}

TEST_CASE("Frobenius permutes the components over F_{p^2} (property, 1e4 edges)") {
  std::size_t cases = 0;
  for (Limb p : {31, 37, 41, 43, 47, 53}) {
    auto c = over(builtin("phi2", p), 2);
    const auto comps = all_components(c, 5000);
    std::map<EdgePoint, std::size_t> owner;
    for (std::size_t i = 0; i < comps.size(); ++i)
      for (const auto& z : comps[i].edges) owner[z] = i;
    for (std::size_t i = 0; i < comps.size(); ++i) {
      std::set<EdgePoint> image;
      for (const auto& z : comps[i].edges) {
        EdgePoint w{z.x.frobenius(1), z.y.frobenius(1)};
        REQUIRE(owner.count(w));
        image.insert(w);
        ++cases;
      }
      const auto& target = comps[owner.at(*image.begin())];
      CHECK(std::vector<EdgePoint>(image.begin(), image.end()) == target.edges);
    }
  }
  CHECK(cases >= 10000);
}

TEST_CASE("classify_point certificates") {
  auto phi = builtin("phi2", 11);
  auto k = classify_point(phi, 1, at(phi, 0, 1), 3, 1000);
  CHECK(k.kind == PointClass::SpecialFinite);
  CHECK(k.label() == "special_finite");

  auto zero = classify_point(phi, 1, at(phi, 5, 5), 0, 10);
  CHECK(zero.kind == PointClass::GenericUpTo);
  CHECK(zero.label() == "generic_up_to_0");

  // An ordinary crater over F_121: the cycle shows up once the radius
  // reaches half the rim.
  auto c2 = over(phi, 2);
  bool found = false;
  for (const auto& comp : all_components(c2, 5000)) {
    if (comp.betti != 1 || comp.blue.front().is_inf()) continue;
    auto rep = volcano_classify(comp);
    for (const auto& z : comp.edges) {
      const std::string bx = "b:" + z.x.to_string(), ry = "r:" + z.y.to_string();
      if (!rep.depth.count(bx) || rep.depth.at(bx) != 0 || rep.depth.at(ry) != 0) continue;
      const std::size_t r = (rep.rim_edges + 1) / 2;
      CHECK(classify_point(phi, 2, z, r, 5000).kind == PointClass::SpecialCycle);
      found = true;
      break;
    }
  }
  CHECK(found);

  // Ordinary seeds grow a ball that does not fit a tiny budget.
  CHECK_THROWS_AS(classify_point(phi, 1, at(phi, 5, 5) , 6, 5), Error);
  try {
    auto p13 = builtin("phi2", 13);
    const auto fib = p13.forward(pt(p13, 12));
    classify_point(p13, 1, p13.edge(pt(p13, 12), fib.points.front().first), 3, 2000);
    FAIL("expected UnsupportedRamified");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnsupportedRamified);
  }
}

TEST_CASE("stats: core example, empty curve, worker determinism") {
  auto sq = builtin("sq", 7);
  auto s = stats(sq, 1, 2, 100);
  CHECK(s.edges == sq.rational_edges().size());
  CHECK(s.special_finite == s.edges);
  CHECK(s.generic_fraction() == 0.0);

  // 2 + y + y^2 + x + xy + x^2 + x^2 y^2 has no points over F_3 at all.
  auto f3 = make_field(3, 1);
  BiPoly g(*f3);
  for (auto [i, j, v] : std::vector<std::tuple<unsigned, unsigned, int>>{
           {0, 0, 2}, {0, 1, 1}, {0, 2, 1}, {1, 0, 1}, {1, 1, 1}, {2, 0, 1}, {2, 2, 1}})
    g.add(i, j, f3->from_int(v));
  auto empty = stats(Correspondence(g), 1, 2, 100);
  CHECK(empty.edges == 0);
  CHECK(empty.special_finite + empty.special_cycle + empty.generic + empty.ramified == 0);
  CHECK(empty.component_sizes.empty());

  auto phi = builtin("phi2", 11);
  auto a = stats(phi, 1, 2, 2000, 1);
  auto b = stats(phi, 1, 2, 2000, 4);
  CHECK(a.to_json().dump() == b.to_json().dump());
  CHECK(a.special_finite + a.special_cycle + a.generic + a.ramified + a.budget_too_small == a.edges);
  CHECK(a.special_finite >= 3);  // the supersingular edges
}

TEST_CASE("directed view and cycles") {
  auto id = builtin("identity", 5);
  auto v = directed_view(id, {id.edge(pt(id, 2), pt(id, 2))});
  REQUIRE(v.vertices.size() == 1);
  REQUIRE(v.arcs.size() == 1);
  CHECK(directed_cycles(v, 4).girth == 1);

  auto sq = builtin("sq", 7);
  auto comp = explore(sq, at(sq, 3, 4), 100);
  auto dv = directed_view(sq, comp.edges);
  CHECK(dv.out_degree() == std::vector<unsigned>{2, 2});
  CHECK(dv.in_degree() == std::vector<unsigned>{2, 2});
  auto cyc = directed_cycles(dv, 4);
  CHECK(cyc.girth == 1);
  CHECK(cyc.vertices_on_cycles == 2);

  // Shortest directed cycle over all of Phi_2 mod 11, against breadth-first
  // search from every vertex on the arc list.
  auto phi = builtin("phi2", 11);
  auto all = directed_view(phi, phi.rational_edges());
  std::vector<std::vector<std::size_t>> next(all.vertices.size());
  for (const auto& a : all.arcs) next[a.from].push_back(a.to);
  std::size_t girth = 0;
  std::size_t on_cycle = 0;
  for (std::size_t s = 0; s < next.size(); ++s) {
    std::vector<std::size_t> dist(next.size(), 0);
    std::deque<std::size_t> q{s};
    std::size_t best = 0;
    std::vector<bool> seen(next.size(), false);
    seen[s] = true;
    while (!q.empty() && !best) {
      auto u = q.front();
      q.pop_front();
      for (auto w : next[u]) {
        if (w == s) {
          best = dist[u] + 1;
          break;
        }
        if (!seen[w]) {
          seen[w] = true;
          dist[w] = dist[u] + 1;
          q.push_back(w);
        }
      }
    }
    if (best && best <= 8) {
      ++on_cycle;
      if (!girth || best < girth) girth = best;
    }
  }
  auto rep = directed_cycles(all, 8);
  CHECK(rep.girth == girth);
  CHECK(rep.vertices_on_cycles == on_cycle);

  auto distinct = builtin("sq", 7);
  distinct.set_distinct_sides(true);
  try {
    directed_view(distinct, comp.edges);
    FAIL("expected NotSelfCorrespondence");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotSelfCorrespondence);
  }
}

TEST_CASE("component reports") {
  auto sq = builtin("sq", 7);
  auto comp = explore(sq, at(sq, 3, 4), 100);
  auto j = component_json(comp);
  CHECK(j["betti"] == 1);
  CHECK(j["edge_count"] == 4);
  CHECK(j["blue"].size() == 2);
  CHECK(j["closed"] == true);
  const auto dot = component_dot(comp);
  CHECK(dot.rfind("graph", 0) == 0);
  CHECK(dot.find("shape=box") != std::string::npos);
  CHECK(directed_dot(directed_view(sq, comp.edges)).rfind("digraph", 0) == 0);
  CHECK(component_json(comp).dump() == j.dump());
}
