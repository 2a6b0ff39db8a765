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

#include "corrdyn/physgraph.hpp"

#include <algorithm>
#include <deque>
#include <exception>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include "corrdyn/error.hpp"

namespace corrdyn {

std::size_t ColoredComponent::edge_count() const {
  std::size_t n = 0;
  for (const auto& l : locals) n += l.edge_count();
  return n;
}

bool ColoredComponent::strictly_etale() const {
  return std::all_of(locals.begin(), locals.end(), [](const LocalStructure& l) { return l.etale(); });
}

ColoredComponent explore(const Correspondence& c, const EdgePoint& seed, std::size_t budget) {
  ColoredComponent comp;
  comp.field = make_field(c.ctx().p(), c.ctx().k());
  comp.seed = c.edge(seed.x, seed.y);
  std::set<PointP1> blue{comp.seed.x}, red{comp.seed.y};
  std::set<EdgePoint> edges{comp.seed};
  std::deque<std::pair<Side, PointP1>> queue{{Side::X, comp.seed.x}, {Side::Y, comp.seed.y}};
  bool closed = true;
  while (!queue.empty()) {
    const auto [side, pt] = queue.front();
    queue.pop_front();
    const Fiber fib = side == Side::X ? c.forward(pt) : c.backward(pt);
    if (fib.missing) closed = false;
    for (const auto& [q, mult] : fib.points) {
      const PointP1& x = side == Side::X ? pt : q;
      const PointP1& y = side == Side::X ? q : pt;
      if (edges.count(EdgePoint{x, y}) == 0) edges.insert(c.edge(x, y));
      auto& other = side == Side::X ? red : blue;
      if (other.insert(q).second) queue.emplace_back(side == Side::X ? Side::Y : Side::X, q);
    }
    if (edges.size() > budget) {
      comp.truncated = true;
      break;
    }
  }
  comp.blue.assign(blue.begin(), blue.end());
  comp.red.assign(red.begin(), red.end());
  comp.edges.assign(edges.begin(), edges.end());
  for (const auto& z : comp.edges) comp.locals.push_back(c.local(z));
  comp.closed = closed && !comp.truncated;
  if (!comp.truncated)
    comp.betti = static_cast<long>(comp.edge_count()) - static_cast<long>(blue.size() + red.size()) + 1;
  return comp;
}

ColoredComponent explore(const Correspondence& c, unsigned m, const EdgePoint& seed, std::size_t budget) {
  FieldPtr f = make_field(c.ctx().p(), c.ctx().k() * m);
  // Seeds may be written over any subfield of F_{q^m}.
  auto lift = [&](const PointP1& pt) {
    if (pt.is_inf() || pt.value().ctx_ptr() == f.get()) return pt;
    return pt.map(canonical_embedding(pt.value().ctx(), *f));
  };
  const EdgePoint s{lift(seed.x), lift(seed.y), seed.mult_f, seed.mult_g};
  ColoredComponent comp = explore(c.base_change(canonical_embedding(c.ctx(), *f)), s, budget);
  comp.m = m;
  return comp;
}

std::vector<ColoredComponent> all_components(const Correspondence& c, std::size_t budget) {
  std::vector<ColoredComponent> out;
  std::set<EdgePoint> seen;
  for (const auto& z : c.rational_edges()) {
    if (seen.count(z)) continue;
    out.push_back(explore(c, z, budget));
    seen.insert(out.back().edges.begin(), out.back().edges.end());
  }
  return out;
}

namespace {

// Vertex numbering shared by the graph algorithms below: blue first.
struct Indexed {
  std::vector<std::string> labels;
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // one entry per parallel edge
};

Indexed index_component(const ColoredComponent& comp) {
  Indexed g;
  std::map<PointP1, std::size_t> bi, ri;
  for (const auto& b : comp.blue) {
    bi.emplace(b, g.labels.size());
    g.labels.push_back("b:" + b.to_string());
  }
  for (const auto& r : comp.red) {
    ri.emplace(r, g.labels.size());
    g.labels.push_back("r:" + r.to_string());
  }
  for (std::size_t i = 0; i < comp.edges.size(); ++i) {
    const auto& z = comp.edges[i];
    auto u = bi.find(z.x), v = ri.find(z.y);
    if (u == bi.end() || v == ri.end()) continue;
    for (unsigned k = 0; k < comp.locals[i].edge_count(); ++k) g.edges.emplace_back(u->second, v->second);
  }
  return g;
}

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t v) {
  while (parent[v] != v) v = parent[v] = parent[parent[v]];
  return v;
}

}  // namespace

long betti_spanning_tree(const ColoredComponent& comp) {
  if (comp.truncated) return -1;
  const Indexed g = index_component(comp);
  std::vector<std::size_t> parent(g.labels.size());
  std::iota(parent.begin(), parent.end(), 0);
  long cycles = 0;
  for (const auto& [u, v] : g.edges) {
    const std::size_t a = find_root(parent, u), b = find_root(parent, v);
    if (a == b) {
      ++cycles;
    } else {
      parent[a] = b;
    }
  }
  return cycles;
}

const char* to_string(VolcanoTag t) {
  switch (t) {
    case VolcanoTag::Tree: return "tree";
    case VolcanoTag::Volcano: return "volcano";
    case VolcanoTag::MultiCycle: return "multi-cycle";
  }
  return "tree";
}

VolcanoReport volcano_classify(const ColoredComponent& comp) {
  if (comp.truncated) throw Error(ErrorCode::Truncated, "component was truncated");
  VolcanoReport rep;
  rep.tag = comp.betti <= 0 ? VolcanoTag::Tree : comp.betti == 1 ? VolcanoTag::Volcano : VolcanoTag::MultiCycle;
  const Indexed g = index_component(comp);
  const std::size_t n = g.labels.size();
  std::vector<std::vector<std::size_t>> adj(n);
  for (const auto& [u, v] : g.edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  std::vector<std::size_t> deg(n);
  std::vector<bool> removed(n, false);
  std::deque<std::size_t> leaves;
  for (std::size_t v = 0; v < n; ++v) {
    deg[v] = adj[v].size();
    if (deg[v] <= 1) leaves.push_back(v);
  }
  while (!leaves.empty()) {
    const std::size_t v = leaves.front();
    leaves.pop_front();
    if (removed[v]) continue;
    removed[v] = true;
    for (std::size_t w : adj[v])
      if (!removed[w] && --deg[w] == 1) leaves.push_back(w);
  }
  for (std::size_t v = 0; v < n; ++v)
    if (!removed[v]) rep.rim.push_back(g.labels[v]);
  for (const auto& [u, v] : g.edges)
    if (!removed[u] && !removed[v]) ++rep.rim_edges;
  if (rep.tag == VolcanoTag::Volcano) {
    std::vector<std::size_t> dist(n, SIZE_MAX);
    std::deque<std::size_t> q;
    for (std::size_t v = 0; v < n; ++v)
      if (!removed[v]) {
        dist[v] = 0;
        q.push_back(v);
      }
    while (!q.empty()) {
      const std::size_t v = q.front();
      q.pop_front();
      for (std::size_t w : adj[v])
        if (dist[w] == SIZE_MAX) {
          dist[w] = dist[v] + 1;
          q.push_back(w);
        }
    }
    for (std::size_t v = 0; v < n; ++v) rep.depth[g.labels[v]] = dist[v];
  }
  return rep;
}

const char* to_string(PointClass k) {
  switch (k) {
    case PointClass::GenericUpTo: return "generic_up_to_r";
    case PointClass::SpecialFinite: return "special_finite";
    case PointClass::SpecialCycle: return "special_cycle";
  }
  return "generic_up_to_r";
}

std::string Classification::label() const {
  if (kind == PointClass::GenericUpTo) return "generic_up_to_" + std::to_string(radius);
  return to_string(kind);
}

Classification classify_point(const Correspondence& c, unsigned m, const EdgePoint& seed, std::size_t radius,
                              std::size_t budget, unsigned max_degree) {
  Classification out;
  out.radius = radius;
  if (radius == 0) return out;
  FieldPtr fs = make_field(c.ctx().p(), c.ctx().k() * m);
  const GrowthLimits limits{budget, std::max(max_degree, fs->k())};
  {
    GeometricGraph closure(c, *fs, limits);
    closure.add_seed(seed.x, seed.y);
    if (closure.run(false)) {
      out.kind = PointClass::SpecialFinite;
      out.ball_edges = closure.edges().size();
      return out;
    }
  }
  GeometricGraph ball(c, *fs, limits);
  ball.add_seed(seed.x, seed.y);
  if (!ball.run(false, radius))
    throw Error(ErrorCode::BudgetTooSmall, std::string("ball of radius ") + std::to_string(radius) +
                                               " does not fit (" + to_string(ball.stop_reason()) + ")");
  std::set<std::pair<int, PointP1>> vertices;
  std::size_t edge_total = 0;
  for (const auto& z : ball.edges()) {
    const LocalStructure l = ball.corr().local(z);
    if (!l.etale()) throw Error(ErrorCode::UnsupportedRamified, "ramified point " + z.to_string() + " in the ball");
    edge_total += l.edge_count();
    vertices.emplace(0, z.x);
    vertices.emplace(1, z.y);
  }
  out.ball_edges = edge_total;
  const long betti = static_cast<long>(edge_total) - static_cast<long>(vertices.size()) + 1;
  out.kind = betti > 0 ? PointClass::SpecialCycle : PointClass::GenericUpTo;
  return out;
}

nlohmann::json StatsReport::to_json() const {
  nlohmann::json j;
  j["edges"] = edges;
  j["radius"] = radius;
  j["special_finite"] = special_finite;
  j["special_cycle"] = special_cycle;
  j["generic_up_to_r"] = generic;
  j["ramified"] = ramified;
  j["budget_too_small"] = budget_too_small;
  j["generic_fraction"] = generic_fraction();
  nlohmann::json rims = nlohmann::json::object(), sizes = nlohmann::json::object();
  for (const auto& [k, v] : rim_lengths) rims[std::to_string(k)] = v;
  for (const auto& [k, v] : component_sizes) sizes[std::to_string(k)] = v;
  j["rim_lengths"] = rims;
  j["component_sizes"] = sizes;
  j["truncated_components"] = truncated_components;
  return j;
}

StatsReport stats(const Correspondence& c, unsigned m, std::size_t radius, std::size_t budget, unsigned workers,
                  unsigned max_degree) {
  FieldPtr f = make_field(c.ctx().p(), c.ctx().k() * m);
  const Correspondence cm = c.base_change(canonical_embedding(c.ctx(), *f));
  const std::vector<EdgePoint> seeds = cm.rational_edges();
  StatsReport rep;
  rep.edges = seeds.size();
  rep.radius = radius;

  // 0 generic, 1 finite, 2 cycle, 3 ramified, 4 budget
  std::vector<int> kind(seeds.size(), 0);
  workers = std::max(1u, workers);
  std::vector<std::exception_ptr> failure(workers);
  auto work = [&](unsigned w) {
    for (std::size_t i = w; i < seeds.size(); i += workers) {
      try {
        const Classification k = classify_point(c, m, seeds[i], radius, budget, max_degree);
        kind[i] = k.kind == PointClass::GenericUpTo ? 0 : k.kind == PointClass::SpecialFinite ? 1 : 2;
      } catch (const Error& e) {
        if (e.code() == ErrorCode::UnsupportedRamified) {
          kind[i] = 3;
        } else if (e.code() == ErrorCode::BudgetTooSmall) {
          kind[i] = 4;
        } else {
          failure[w] = std::current_exception();
          return;
        }
      }
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : failure)
    if (e) std::rethrow_exception(e);
  for (int k : kind) {
    switch (k) {
      case 0: ++rep.generic; break;
      case 1: ++rep.special_finite; break;
      case 2: ++rep.special_cycle; break;
      case 3: ++rep.ramified; break;
      default: ++rep.budget_too_small; break;
    }
  }
  for (const auto& comp : all_components(cm, budget)) {
    if (comp.truncated) {
      ++rep.truncated_components;
      continue;
    }
    ++rep.component_sizes[comp.edge_count()];
    if (comp.betti == 1) ++rep.rim_lengths[volcano_classify(comp).rim_edges];
  }
  return rep;
}

std::vector<unsigned> DirectedView::out_degree() const {
  std::vector<unsigned> d(vertices.size(), 0);
  for (const auto& a : arcs) d[a.from] += a.mult_f;
  return d;
}

std::vector<unsigned> DirectedView::in_degree() const {
  std::vector<unsigned> d(vertices.size(), 0);
  for (const auto& a : arcs) d[a.to] += a.mult_g;
  return d;
}

DirectedView directed_view(const Correspondence& c, const std::vector<EdgePoint>& edges) {
  if (!c.self_correspondence()) throw Error(ErrorCode::NotSelfCorrespondence, "X and Y are declared distinct");
  DirectedView v;
  std::set<PointP1> pts;
  for (const auto& z : edges) {
    pts.insert(z.x);
    pts.insert(z.y);
  }
  v.vertices.assign(pts.begin(), pts.end());
  auto idx = [&](const PointP1& p) {
    return static_cast<std::size_t>(std::lower_bound(v.vertices.begin(), v.vertices.end(), p) - v.vertices.begin());
  };
  for (const auto& z : edges) v.arcs.push_back({idx(z.x), idx(z.y), z.mult_f, z.mult_g});
  return v;
}

CycleReport directed_cycles(const DirectedView& v, std::size_t max_length) {
  CycleReport rep;
  rep.max_length = max_length;
  const std::size_t n = v.vertices.size();
  std::vector<std::vector<std::size_t>> out(n);
  for (const auto& a : v.arcs) out[a.from].push_back(a.to);
  for (auto& o : out) {
    std::sort(o.begin(), o.end());
    o.erase(std::unique(o.begin(), o.end()), o.end());
  }
  for (std::size_t s = 0; s < n; ++s) {
    // BFS from s; the first arc back into s closes a shortest cycle through s.
    std::vector<std::size_t> dist(n, SIZE_MAX), parent(n, SIZE_MAX);
    std::deque<std::size_t> q{s};
    dist[s] = 0;
    std::size_t best = 0, last = SIZE_MAX;
    while (!q.empty() && !best) {
      const std::size_t u = q.front();
      q.pop_front();
      if (dist[u] + 1 > max_length) break;
      for (std::size_t w : out[u]) {
        if (w == s) {
          best = dist[u] + 1;
          last = u;
          break;
        }
        if (dist[w] == SIZE_MAX) {
          dist[w] = dist[u] + 1;
          parent[w] = u;
          q.push_back(w);
        }
      }
    }
    if (!best) continue;
    ++rep.vertices_on_cycles;
    if (rep.girth == 0 || best < rep.girth) {
      rep.girth = best;
      rep.example.clear();
      for (std::size_t u = last; u != SIZE_MAX; u = parent[u]) rep.example.push_back(u);
      std::reverse(rep.example.begin(), rep.example.end());
    }
  }
  return rep;
}

namespace {

nlohmann::json edge_json(const EdgePoint& z, const LocalStructure& l) {
  nlohmann::json br = nlohmann::json::array();
  for (const auto& b : l.branches) br.push_back({b.f_ram, b.g_ram});
  return {{"x", z.x.to_string()},
          {"y", z.y.to_string()},
          {"mult_f", z.mult_f},
          {"mult_g", z.mult_g},
          {"resolved", l.resolved},
          {"branches", br}};
}

}  // namespace

nlohmann::json component_json(const ColoredComponent& comp) {
  nlohmann::json j;
  j["field"] = comp.field->name();
  j["m"] = comp.m;
  j["seed"] = comp.seed.to_string();
  nlohmann::json blue = nlohmann::json::array(), red = nlohmann::json::array(), edges = nlohmann::json::array();
  for (const auto& b : comp.blue) blue.push_back(b.to_string());
  for (const auto& r : comp.red) red.push_back(r.to_string());
  for (std::size_t i = 0; i < comp.edges.size(); ++i) edges.push_back(edge_json(comp.edges[i], comp.locals[i]));
  j["blue"] = blue;
  j["red"] = red;
  j["edges"] = edges;
  j["edge_count"] = comp.edge_count();
  j["truncated"] = comp.truncated;
  j["closed"] = comp.closed;
  j["betti"] = comp.betti;
  return j;
}

std::string component_dot(const ColoredComponent& comp) {
  std::ostringstream os;
  os << "graph component {\n";
  for (std::size_t i = 0; i < comp.blue.size(); ++i)
    os << "  b" << i << " [shape=box,color=blue,label=\"" << comp.blue[i].to_string() << "\"];\n";
  for (std::size_t i = 0; i < comp.red.size(); ++i)
    os << "  r" << i << " [shape=circle,color=red,label=\"" << comp.red[i].to_string() << "\"];\n";
  for (std::size_t i = 0; i < comp.edges.size(); ++i) {
    const auto& z = comp.edges[i];
    auto bi = std::lower_bound(comp.blue.begin(), comp.blue.end(), z.x) - comp.blue.begin();
    auto ri = std::lower_bound(comp.red.begin(), comp.red.end(), z.y) - comp.red.begin();
    if (static_cast<std::size_t>(bi) >= comp.blue.size() || static_cast<std::size_t>(ri) >= comp.red.size()) continue;
    for (unsigned k = 0; k < comp.locals[i].edge_count(); ++k) os << "  b" << bi << " -- r" << ri << ";\n";
  }
  os << "}\n";
  return os.str();
}

std::string directed_dot(const DirectedView& v) {
  std::ostringstream os;
  os << "digraph view {\n";
  for (std::size_t i = 0; i < v.vertices.size(); ++i)
    os << "  v" << i << " [label=\"" << v.vertices[i].to_string() << "\"];\n";
  for (const auto& a : v.arcs) os << "  v" << a.from << " -> v" << a.to << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace corrdyn
