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
#include <functional>
#include <random>
#include <set>

#include "corrdyn/error.hpp"
#include "corrdyn/treegen.hpp"

using namespace corrdyn;

namespace {

Correspondence builtin(const std::string& name, Limb p) {
  return Correspondence::load(read_bipoly_file(std::string(CORRDYN_TEST_DATA) + "/" + name + ".bipoly"), p);
}

FiniteGraph corpus(const std::string& name) {
  return read_edge_list(std::string(CORRDYN_TEST_DATA) + "/corpus/" + name + ".edges");
}

FiniteGraph from_edges(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& es) {
  FiniteGraph g(n);
  for (auto [u, v] : es) g.add_edge(u, v);
  return g;
}

// Every automorphism, by assigning images vertex by vertex and checking
// adjacency against the vertices already placed.
std::vector<Perm> all_automorphisms(const FiniteGraph& g) {
  const std::size_t n = g.size();
  std::vector<Perm> out;
  Perm img(n);
  std::vector<bool> used(n, false);
  std::function<void(std::size_t)> place = [&](std::size_t v) {
    if (v == n) {
      out.push_back(img);
      return;
    }
    for (std::size_t w = 0; w < n; ++w) {
      if (used[w] || g.neighbors(v).size() != g.neighbors(w).size()) continue;
      bool ok = true;
      for (std::size_t u = 0; u < v && ok; ++u) ok = g.adjacent(u, v) == g.adjacent(img[u], w);
      if (!ok) continue;
      used[w] = true;
      img[v] = w;
      place(v + 1);
      used[w] = false;
    }
  };
  place(0);
  return out;
}

std::vector<std::vector<std::size_t>> all_arcs(const FiniteGraph& g, unsigned s) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> walk;
  std::function<void()> grow = [&] {
    if (walk.size() == s + 1) {
      out.push_back(walk);
      return;
    }
    for (auto w : g.neighbors(walk.back())) {
      if (walk.size() >= 2 && w == walk[walk.size() - 2]) continue;
      walk.push_back(w);
      grow();
      walk.pop_back();
    }
  };
  for (std::size_t v = 0; v < g.size(); ++v) {
    walk = {v};
    grow();
  }
  return out;
}

}  // namespace

TEST_CASE("tree balls: small examples") {
  auto t = tree_ball(3, 3, 2, Color::Blue);
  CHECK(t.vertex_count() == 10);
  CHECK(t.edges.size() == 9);
  CHECK(t.sphere == std::vector<std::size_t>{1, 3, 6});
  CHECK(t.color[0] == Color::Blue);
  CHECK(t.color[1] == Color::Red);
  CHECK(t.color[9] == Color::Blue);

  auto single = tree_ball(4, 2, 0, Color::Red);
  CHECK(single.vertex_count() == 1);
  CHECK(single.edges.empty());

  for (unsigned r = 0; r <= 6; ++r) {
    auto path = tree_ball(2, 2, r, Color::Blue);
    CHECK(path.vertex_count() == 2 * r + 1);
    std::vector<int> deg(path.vertex_count(), 0);
    for (auto [u, v] : path.edges) {
      ++deg[u];
      ++deg[v];
    }
    CHECK(std::count_if(deg.begin(), deg.end(), [](int d) { return d > 2; }) == 0);
    if (r > 0) CHECK(std::count(deg.begin(), deg.end(), 1) == 2);
  }
  CHECK_THROWS_AS(tree_ball(0, 3, 1, Color::Blue), Error);
}

TEST_CASE("tree ball counts follow the sphere recurrence up to 1e5 vertices") {
  std::size_t checked = 0;
  for (unsigned d = 1; d <= 6; ++d)
    for (unsigned e = 1; e <= 6; ++e)
      for (Color root : {Color::Blue, Color::Red})
        for (unsigned r = 0; r <= 40; ++r) {
          std::vector<std::size_t> want{1};
          std::size_t total = 1;
          bool blue = root == Color::Blue;
          bool fits = true;
          for (unsigned i = 0; i < r; ++i) {
            const unsigned deg = blue ? d : e;
            const std::size_t next = i == 0 ? deg : want.back() * (deg - 1);
            want.push_back(next);
            total += next;
            blue = !blue;
            if (total > 100000) fits = false;
          }
          if (!fits) break;
          auto t = tree_ball(d, e, r, root);
          CHECK(t.sphere == want);
          REQUIRE(t.vertex_count() == total);
          CHECK(t.edges.size() + 1 == total);
          // parent links and depths; non-leaf degrees
          std::vector<unsigned> deg(total, 0);
          for (auto [u, v] : t.edges) {
            ++deg[u];
            ++deg[v];
          }
          for (std::size_t v = 1; v < total; ++v) {
            REQUIRE(t.parent[v] >= 0);
            CHECK(t.depth[v] == t.depth[static_cast<std::size_t>(t.parent[v])] + 1);
            CHECK(t.color[v] != t.color[static_cast<std::size_t>(t.parent[v])]);
          }
          for (std::size_t v = 0; v < total; ++v) {
            if (t.depth[v] == r) continue;
            CHECK(deg[v] == (t.color[v] == Color::Blue ? d : e));
          }
          ++checked;
        }
  CHECK(checked > 500);
}

TEST_CASE("cover certificates") {
  auto id = builtin("identity", 5);
  auto one = explore(id, EdgePoint{PointP1(id.ctx().from_int(2)), PointP1(id.ctx().from_int(2))}, 10);
  auto c1 = cover_check(one, 1, 1);
  CHECK(c1.covered);
  CHECK(c1.betti == 0);

  // Over F_11 the supersingular component of Phi_2 passes through the
  // ramified point (0, 1728); the degree audit holds but the cover fails.
  auto phi = builtin("phi2", 11);
  auto ss = explore(phi, EdgePoint{PointP1(phi.ctx().from_int(0)), PointP1(phi.ctx().from_int(1))}, 100);
  auto c11 = cover_check(ss, 3, 3);
  CHECK_FALSE(c11.covered);
  CHECK(c11.failing.size() == 2);
  for (const auto& f : c11.failing) CHECK(f.rfind("edge:", 0) == 0);

  // Over F_169 the supersingular component avoids j = 0, 1728.
  auto p13 = builtin("phi2", 13);
  auto f169 = make_field(13, 2);
  auto c13 = p13.base_change(canonical_embedding(p13.ctx(), *f169));
  bool seen = false;
  for (const auto& comp : all_components(c13, 5000)) {
    if (!comp.closed || !comp.strictly_etale()) continue;
    auto cert = cover_check(comp, 3, 3);
    CHECK(cert.covered);
    CHECK(cert.betti == comp.betti);
    // covering means the radius-1 ball looks like the tree's
    const auto ball = tree_ball(3, 3, 1, Color::Blue);
    std::map<PointP1, unsigned> deg;
    for (const auto& z : comp.edges) deg[z.x] += z.mult_f;
    for (const auto& [x, k] : deg) CHECK(k == ball.sphere[1]);
    seen = true;
  }
  CHECK(seen);

  // An open component misses fiber points: the audit names the vertices.
  for (const auto& comp : all_components(c13, 5000)) {
    if (comp.closed) continue;
    auto cert = cover_check(comp, 3, 3);
    CHECK_FALSE(cert.covered);
    CHECK_FALSE(cert.failing.empty());
    break;
  }

  auto cut = explore(c13, all_components(c13, 5000).back().seed, 0);
  REQUIRE(cut.truncated);
  CHECK_THROWS_AS(cover_check(cut, 3, 3), Error);
}

TEST_CASE("finite graphs: parsing and validation") {
  auto g = parse_edge_list("# square\n0 1\n1 2\n\n2 3 # last side\n3 0\n");
  CHECK(g.size() == 4);
  CHECK(g.edge_count() == 4);
  CHECK(g.connected());
  CHECK(g.regular(2));
  CHECK_THROWS_AS(parse_edge_list("0 0\n"), Error);
  CHECK_THROWS_AS(parse_edge_list("0 1\n1 0\n"), Error);
  CHECK_THROWS_AS(parse_edge_list("0 x\n"), Error);
  CHECK_THROWS_AS(read_edge_list("/nonexistent/graph.edges"), Error);
}

TEST_CASE("automorphism groups against exhaustive backtracking") {
  CHECK(automorphisms(parse_edge_list("0 1\n1 2\n2 3\n3 0\n")).order == 8);
  CHECK(automorphisms(corpus("k4")).order == 24);
  CHECK(automorphisms(corpus("petersen")).order == 120);

  std::vector<FiniteGraph> graphs;
  for (const char* n : {"k4", "k33", "petersen", "heawood", "cube3"}) graphs.push_back(corpus(n));
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 60; ++i) {
    const std::size_t n = 4 + rng() % 6;
    FiniteGraph g(n);
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t v = u + 1; v < n; ++v)
        if (rng() % 3 == 0) g.add_edge(u, v);
    graphs.push_back(g);
  }
  for (const auto& g : graphs) {
    const auto brute = all_automorphisms(g);
    const auto grp = automorphisms(g);
    CHECK(grp.order == brute.size());
    for (const auto& gen : grp.generators) CHECK(std::find(brute.begin(), brute.end(), gen) != brute.end());
    // stabilizer of vertex 0 and of the pair {0, 1}
    for (std::vector<std::size_t> fixed : {std::vector<std::size_t>{0}, std::vector<std::size_t>{0, 1}}) {
      std::size_t count = 0;
      for (const auto& a : brute) {
        bool ok = true;
        for (auto v : fixed) ok = ok && a[v] == v;
        count += ok;
      }
      CHECK(stabilizer_order(g, fixed) == count);
    }
  }
}

TEST_CASE("Tutte sharpness on the corpus, against brute-force arc orbits") {
  struct Want {
    const char* name;
    std::uint64_t aut;
    int s_max;
  };
  for (const auto& w : std::vector<Want>{{"k4", 24, 2}, {"k33", 72, 3}, {"petersen", 120, 3},
                                         {"heawood", 336, 4}, {"cube3", 48, 2}}) {
    CAPTURE(w.name);
    const auto g = corpus(w.name);
    const auto rep = arc_transitivity(g);
    CHECK(rep.aut_order == w.aut);
    CHECK(rep.s_max == w.s_max);
    CHECK(rep.cubic);
    CHECK(rep.sharp);
    CHECK(rep.counters_agree);

    const auto brute = all_automorphisms(g);
    int s_max = -1;
    for (const auto& lvl : rep.levels) {
      const auto arcs = all_arcs(g, lvl.s);
      CHECK(lvl.arcs == arcs.size());
      if (lvl.s >= 1) CHECK(lvl.arcs == g.size() * 3 * (std::uint64_t{1} << (lvl.s - 1)));
      std::set<std::vector<std::size_t>> orbit;
      for (const auto& a : brute) {
        std::vector<std::size_t> im;
        for (auto v : arcs.front()) im.push_back(a[v]);
        orbit.insert(im);
      }
      const bool transitive = orbit.size() == arcs.size();
      CHECK(lvl.transitive == transitive);
      CHECK(lvl.orbit_of_first == orbit.size());
      if (transitive && s_max == static_cast<int>(lvl.s) - 1) s_max = static_cast<int>(lvl.s);
    }
    CHECK(rep.s_max == s_max);
    CHECK(rep.aut_order == g.size() * 3 * (std::uint64_t{1} << (s_max - 1)));
    for (std::size_t i = 1; i < rep.levels.size(); ++i)
      if (rep.levels[i].transitive) CHECK(rep.levels[i - 1].transitive);
    const auto j = rep.to_json();
    CHECK(j["s_max"] == s_max);
    CHECK(j["sharp"] == true);
  }
}

TEST_CASE("arc transitivity errors") {
  try {
    arc_transitivity(parse_edge_list("0 1\n2 3\n"));
    FAIL("expected Disconnected");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Disconnected);
  }
  FiniteGraph ring(65);
  for (std::size_t v = 0; v < 65; ++v) ring.add_edge(v, (v + 1) % 65);
  try {
    arc_transitivity(ring);
    FAIL("expected BoundExceeded");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BoundExceeded);
  }
  CHECK_THROWS_AS(automorphisms(ring), Error);
  // a cycle is not cubic: no sharpness claim
  auto hex = arc_transitivity(parse_edge_list("0 1\n1 2\n2 3\n3 4\n4 5\n5 0\n"), 4);
  CHECK_FALSE(hex.cubic);
  CHECK(hex.aut_order == 12);
}
