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

#include "corrdyn/treegen.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "corrdyn/error.hpp"

namespace corrdyn {

const char* to_string(Color c) { return c == Color::Blue ? "blue" : "red"; }

TreeBall tree_ball(unsigned d, unsigned e, unsigned radius, Color root) {
  if (d == 0 || e == 0) throw Error(ErrorCode::DegenerateComponent, "tree degrees must be positive");
  constexpr std::size_t cap = 1000000;
  TreeBall t;
  t.d = d;
  t.e = e;
  t.radius = radius;
  t.root = root;
  t.color.push_back(root);
  t.parent.push_back(-1);
  t.depth.push_back(0);
  t.sphere.push_back(1);
  std::size_t begin = 0, end = 1;
  for (unsigned r = 0; r < radius; ++r) {
    for (std::size_t v = begin; v < end; ++v) {
      const unsigned deg = t.color[v] == Color::Blue ? d : e;
      const unsigned kids = v == 0 ? deg : deg - 1;
      const Color child = t.color[v] == Color::Blue ? Color::Red : Color::Blue;
      for (unsigned i = 0; i < kids; ++i) {
        if (t.color.size() >= cap) throw Error(ErrorCode::BoundExceeded, "tree ball exceeds 10^6 vertices");
        t.edges.emplace_back(v, t.color.size());
        t.color.push_back(child);
        t.parent.push_back(static_cast<long>(v));
        t.depth.push_back(r + 1);
      }
    }
    begin = end;
    end = t.color.size();
    t.sphere.push_back(end - begin);
  }
  return t;
}

CoverCertificate cover_check(const ColoredComponent& comp, unsigned d, unsigned e) {
  if (comp.truncated) throw Error(ErrorCode::Truncated, "component was truncated");
  CoverCertificate cert;
  cert.betti = comp.betti;
  std::map<PointP1, unsigned> blue, red;
  for (const auto& b : comp.blue) blue[b] = 0;
  for (const auto& r : comp.red) red[r] = 0;
  for (std::size_t i = 0; i < comp.edges.size(); ++i) {
    const auto& z = comp.edges[i];
    blue[z.x] += z.mult_f;
    red[z.y] += z.mult_g;
    if (!comp.locals[i].etale()) cert.failing.push_back("edge:" + z.to_string());
  }
  for (const auto& [pt, deg] : blue)
    if (deg != d) cert.failing.push_back("b:" + pt.to_string());
  for (const auto& [pt, deg] : red)
    if (deg != e) cert.failing.push_back("r:" + pt.to_string());
  cert.covered = cert.failing.empty();
  return cert;
}

// ---------------------------------------------------------------------------
// Finite graphs

void FiniteGraph::add_edge(std::size_t u, std::size_t v) {
  if (u == v) throw Error(ErrorCode::ParseError, "loop at vertex " + std::to_string(u));
  const std::size_t need = std::max(u, v) + 1;
  if (adj_.size() < need) adj_.resize(need);
  if (adjacent(u, v))
    throw Error(ErrorCode::ParseError, "repeated edge " + std::to_string(u) + " " + std::to_string(v));
  adj_[u].insert(std::lower_bound(adj_[u].begin(), adj_[u].end(), v), v);
  adj_[v].insert(std::lower_bound(adj_[v].begin(), adj_[v].end(), u), u);
}

bool FiniteGraph::adjacent(std::size_t u, std::size_t v) const {
  return u < adj_.size() && std::binary_search(adj_[u].begin(), adj_[u].end(), v);
}

std::size_t FiniteGraph::edge_count() const {
  std::size_t n = 0;
  for (const auto& a : adj_) n += a.size();
  return n / 2;
}

bool FiniteGraph::connected() const {
  if (adj_.empty()) return true;
  std::vector<bool> seen(adj_.size(), false);
  std::deque<std::size_t> q{0};
  seen[0] = true;
  std::size_t count = 1;
  while (!q.empty()) {
    const std::size_t v = q.front();
    q.pop_front();
    for (std::size_t w : adj_[v])
      if (!seen[w]) {
        seen[w] = true;
        ++count;
        q.push_back(w);
      }
  }
  return count == adj_.size();
}

bool FiniteGraph::regular(unsigned degree) const {
  return std::all_of(adj_.begin(), adj_.end(), [&](const auto& a) { return a.size() == degree; });
}

FiniteGraph parse_edge_list(std::string_view text) {
  FiniteGraph g;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    long long u, v;
    if (!(ls >> u)) continue;
    std::string extra;
    if (!(ls >> v) || u < 0 || v < 0 || (ls >> extra))
      throw Error(ErrorCode::ParseError, "edge list line " + std::to_string(lineno) + ": expected 'u v'");
    g.add_edge(static_cast<std::size_t>(u), static_cast<std::size_t>(v));
  }
  return g;
}

FiniteGraph read_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_edge_list(ss.str());
}

// ---------------------------------------------------------------------------
// Automorphisms

namespace {

class Search {
 public:
  Search(const FiniteGraph& g, std::vector<std::size_t> order) : g_(g), order_(std::move(order)) {}

  // Automorphism with order_[i] -> prefix[i] for i < prefix.size().
  std::optional<Perm> find(const std::vector<std::size_t>& prefix) {
    const std::size_t n = g_.size();
    img_.assign(n, npos);
    used_.assign(n, false);
    for (std::size_t i = 0; i < prefix.size(); ++i) {
      if (!fits(order_[i], prefix[i])) return std::nullopt;
      img_[order_[i]] = prefix[i];
      used_[prefix[i]] = true;
    }
    if (!extend(prefix.size())) return std::nullopt;
    return Perm(img_.begin(), img_.end());
  }

 private:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  bool fits(std::size_t v, std::size_t c) const {
    if (used_[c] || g_.neighbors(v).size() != g_.neighbors(c).size()) return false;
    if (!g_.colors.empty() && g_.colors[v] != g_.colors[c]) return false;
    for (std::size_t w = 0; w < g_.size(); ++w)
      if (img_[w] != npos && g_.adjacent(v, w) != g_.adjacent(c, img_[w])) return false;
    return true;
  }

  bool extend(std::size_t pos) {
    if (pos == order_.size()) return true;
    const std::size_t v = order_[pos];
    // Candidates: neighbors of the image of an assigned neighbor, if any.
    const std::vector<std::size_t>* cands = nullptr;
    for (std::size_t w : g_.neighbors(v))
      if (img_[w] != npos) {
        cands = &g_.neighbors(img_[w]);
        break;
      }
    auto attempt = [&](std::size_t c) {
      if (!fits(v, c)) return false;
      img_[v] = c;
      used_[c] = true;
      if (extend(pos + 1)) return true;
      img_[v] = npos;
      used_[c] = false;
      return false;
    };
    if (cands) {
      for (std::size_t c : *cands)
        if (attempt(c)) return true;
    } else {
      for (std::size_t c = 0; c < g_.size(); ++c)
        if (attempt(c)) return true;
    }
    return false;
  }

  const FiniteGraph& g_;
  std::vector<std::size_t> order_;
  std::vector<std::size_t> img_;
  std::vector<bool> used_;
};

// Base: the fixed points, then BFS order from them (and from any vertex
// left over).
std::vector<std::size_t> base_order(const FiniteGraph& g, const std::vector<std::size_t>& fixed) {
  std::vector<std::size_t> order;
  std::vector<bool> seen(g.size(), false);
  std::deque<std::size_t> q;
  for (std::size_t v : fixed)
    if (!seen[v]) {
      seen[v] = true;
      order.push_back(v);
      q.push_back(v);
    }
  for (std::size_t root = 0; order.size() < g.size(); ++root) {
    if (q.empty()) {
      while (seen[root]) ++root;
      seen[root] = true;
      order.push_back(root);
      q.push_back(root);
    }
    while (!q.empty()) {
      const std::size_t v = q.front();
      q.pop_front();
      for (std::size_t w : g.neighbors(v))
        if (!seen[w]) {
          seen[w] = true;
          order.push_back(w);
          q.push_back(w);
        }
    }
  }
  return order;
}

AutGroup chain(const FiniteGraph& g, const std::vector<std::size_t>& fixed) {
  if (g.size() > 64) throw Error(ErrorCode::BoundExceeded, "automorphism search limited to 64 vertices");
  const std::vector<std::size_t> base = base_order(g, fixed);
  std::size_t nfixed = 0;
  {
    std::set<std::size_t> f(fixed.begin(), fixed.end());
    nfixed = f.size();
  }
  Search search(g, base);
  AutGroup grp;
  // Deepest level first so orbits at level i can use generators of the
  // deeper stabilizers.
  for (std::size_t i = base.size(); i-- > nfixed;) {
    const std::size_t bi = base[i];
    std::vector<bool> in_orbit(g.size(), false);
    std::vector<std::size_t> orbit{bi};
    in_orbit[bi] = true;
    auto close = [&] {
      for (std::size_t k = 0; k < orbit.size(); ++k)
        for (const auto& gen : grp.generators) {
          const std::size_t w = gen[orbit[k]];
          if (!in_orbit[w]) {
            in_orbit[w] = true;
            orbit.push_back(w);
          }
        }
    };
    close();
    std::vector<std::size_t> prefix(base.begin(), base.begin() + static_cast<long>(i));
    prefix.push_back(0);
    for (std::size_t v = 0; v < g.size(); ++v) {
      if (in_orbit[v]) continue;
      prefix.back() = v;
      if (auto perm = search.find(prefix)) {
        grp.generators.push_back(std::move(*perm));
        close();
      }
    }
    grp.order *= orbit.size();
  }
  return grp;
}

using Arc = std::vector<std::size_t>;

std::vector<Arc> enumerate_arcs(const FiniteGraph& g, unsigned s) {
  std::vector<Arc> cur;
  for (std::size_t v = 0; v < g.size(); ++v) cur.push_back({v});
  for (unsigned step = 0; step < s; ++step) {
    std::vector<Arc> next;
    for (const auto& a : cur)
      for (std::size_t w : g.neighbors(a.back())) {
        if (a.size() >= 2 && w == a[a.size() - 2]) continue;
        Arc b = a;
        b.push_back(w);
        next.push_back(std::move(b));
      }
    cur = std::move(next);
  }
  return cur;
}

}  // namespace

AutGroup automorphisms(const FiniteGraph& g) { return chain(g, {}); }

std::uint64_t stabilizer_order(const FiniteGraph& g, const std::vector<std::size_t>& fixed) {
  return chain(g, fixed).order;
}

ArcReport arc_transitivity(const FiniteGraph& g, unsigned s_cap) {
  if (g.size() > 64) throw Error(ErrorCode::BoundExceeded, "arc transitivity limited to 64 vertices");
  if (!g.connected()) throw Error(ErrorCode::Disconnected, "graph is not connected");
  ArcReport rep;
  rep.vertices = g.size();
  rep.cubic = g.regular(3);
  const AutGroup grp = automorphisms(g);
  rep.aut_order = grp.order;
  bool all_below = true;
  for (unsigned s = 0; s <= s_cap; ++s) {
    ArcLevel lvl;
    lvl.s = s;
    const std::vector<Arc> arcs = enumerate_arcs(g, s);
    lvl.arcs = arcs.size();
    if (!arcs.empty()) {
      std::map<Arc, std::size_t> id;
      for (std::size_t i = 0; i < arcs.size(); ++i) id.emplace(arcs[i], i);
      std::vector<bool> seen(arcs.size(), false);
      for (std::size_t start = 0; start < arcs.size(); ++start) {
        if (seen[start]) continue;
        ++lvl.orbits;
        seen[start] = true;
        std::deque<std::size_t> q{start};
        while (!q.empty()) {
          const Arc& a = arcs[q.front()];
          q.pop_front();
          for (const auto& gen : grp.generators) {
            Arc b(a.size());
            for (std::size_t k = 0; k < a.size(); ++k) b[k] = gen[a[k]];
            const std::size_t j = id.at(b);
            if (!seen[j]) {
              seen[j] = true;
              q.push_back(j);
            }
          }
        }
      }
      lvl.orbit_of_first = rep.aut_order / stabilizer_order(g, arcs.front());
    }
    lvl.transitive = lvl.orbits == 1;
    if (lvl.transitive != (lvl.orbit_of_first == lvl.arcs)) rep.counters_agree = false;
    all_below = all_below && lvl.transitive;
    if (all_below) rep.s_max = static_cast<int>(s);
    rep.levels.push_back(lvl);
  }
  if (rep.s_max >= 0) rep.sharp = rep.aut_order == rep.levels[static_cast<std::size_t>(rep.s_max)].arcs;
  return rep;
}

nlohmann::json ArcReport::to_json() const {
  nlohmann::json j;
  j["vertices"] = vertices;
  j["aut_order"] = aut_order;
  j["s_max"] = s_max;
  j["cubic"] = cubic;
  j["sharp"] = sharp;
  j["counters_agree"] = counters_agree;
  nlohmann::json lv = nlohmann::json::array();
  for (const auto& l : levels)
    lv.push_back({{"s", l.s},
                  {"arcs", l.arcs},
                  {"orbits", l.orbits},
                  {"orbit_of_first", l.orbit_of_first},
                  {"transitive", l.transitive}});
  j["levels"] = lv;
  return j;
}

}  // namespace corrdyn
