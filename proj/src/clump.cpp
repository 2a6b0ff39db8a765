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

#include "corrdyn/clump.hpp"

#include <algorithm>
#include <atomic>
#include <deque>
#include <exception>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <set>
#include <thread>

#include <boost/rational.hpp>

#include "corrdyn/error.hpp"

namespace corrdyn {

namespace {

using Weight = boost::rational<long long>;

FieldPtr intern(const FieldCtx& f) { return make_field(f.p(), f.k()); }

unsigned lcm_u(unsigned a, unsigned b) { return std::lcm(a, b); }

Clump build_clump(const GeometricGraph& g, const Correspondence& c, unsigned m) {
  Clump s;
  s.field = intern(g.field());
  s.m = m;
  s.edges.assign(g.edges().begin(), g.edges().end());
  for (const auto& z : s.edges) s.locals.push_back(g.corr().local(z));
  const auto xs = g.x_points(), ys = g.y_points();
  s.x_image.assign(xs.begin(), xs.end());
  s.y_image.assign(ys.begin(), ys.end());
  s.etale = weighted_etale(s.edges, s.locals, c.self_correspondence());
  s.strictly_etale = std::all_of(s.locals.begin(), s.locals.end(), [](const LocalStructure& l) { return l.etale(); });
  std::map<PointP1, unsigned> over_x, over_y;
  s.definition_degree = c.ctx().k();
  for (const auto& z : s.edges) {
    over_x[z.x] += z.mult_f;
    over_y[z.y] += z.mult_g;
    s.definition_degree = lcm_u(s.definition_degree, lcm_u(z.x.min_degree(), z.y.min_degree()));
  }
  s.regular = std::all_of(over_x.begin(), over_x.end(), [&](const auto& kv) { return kv.second == c.d(); }) &&
              std::all_of(over_y.begin(), over_y.end(), [&](const auto& kv) { return kv.second == c.e(); });
  s.seed_to_field = g.start_to_field();
  return s;
}

struct GraphRun {
  std::unique_ptr<GeometricGraph> graph;
  bool closed = false;
};

GraphRun run_closure(const Correspondence& c, const FieldCtx& start, const std::vector<EdgePoint>& seeds,
                     const ClumpOptions& opt) {
  GraphRun r;
  r.graph = std::make_unique<GeometricGraph>(c, start, GrowthLimits{opt.budget, std::max(opt.max_degree, start.k())});
  for (const auto& z : seeds) r.graph->add_seed_orbit(z.x, z.y);
  r.closed = r.graph->run(opt.symmetric);
  return r;
}

}  // namespace

bool Clump::contains(const PointP1& x_seed, const PointP1& y_seed) const {
  const EdgePoint key{x_seed.map(*seed_to_field), y_seed.map(*seed_to_field)};
  return std::binary_search(edges.begin(), edges.end(), key);
}

bool Clump::frobenius_stable(unsigned base_k) const {
  return std::all_of(edges.begin(), edges.end(), [&](const EdgePoint& z) {
    return std::binary_search(edges.begin(), edges.end(), EdgePoint{z.x.frobenius(base_k), z.y.frobenius(base_k)});
  });
}

bool weighted_etale(const std::vector<EdgePoint>& edges, const std::vector<LocalStructure>& locals, bool tie_sides) {
  // Vertex key: (side, point); sides collapse when X and Y are one line.
  using Key = std::pair<int, PointP1>;
  struct Link {
    Key to;
    Weight ratio;  // w(to) = w(from) * ratio
  };
  std::map<Key, std::vector<Link>> adj;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (!locals[i].resolved) return false;
    const Key kx{0, edges[i].x}, ky{tie_sides ? 0 : 1, edges[i].y};
    adj[kx];
    adj[ky];
    for (const auto& b : locals[i].branches) {
      // w(x) g = w(y) f
      adj[kx].push_back({ky, Weight(b.g_ram, b.f_ram)});
      adj[ky].push_back({kx, Weight(b.f_ram, b.g_ram)});
    }
  }
  std::map<Key, Weight> w;
  for (const auto& [start, links] : adj) {
    if (w.count(start)) continue;
    w[start] = 1;
    std::deque<Key> q{start};
    while (!q.empty()) {
      const Key u = q.front();
      q.pop_front();
      for (const auto& l : adj[u]) {
        const Weight want = w[u] * l.ratio;
        auto it = w.find(l.to);
        if (it == w.end()) {
          w.emplace(l.to, want);
          q.push_back(l.to);
        } else if (it->second != want) {
          return false;
        }
      }
    }
  }
  return true;
}

ClosureResult closure(const Correspondence& c, unsigned m, const std::vector<EdgePoint>& seeds,
                      const ClumpOptions& opt) {
  FieldPtr start = make_field(c.ctx().p(), c.ctx().k() * m);
  GraphRun r = run_closure(c, *start, seeds, opt);
  ClosureResult out;
  out.edges_seen = r.graph->edges().size();
  out.reason = r.graph->stop_reason();
  if (r.closed) out.clump = build_clump(*r.graph, c, m);
  return out;
}

ClumpCertificate is_clump(const Correspondence& c, const FieldCtx& field, const std::vector<EdgePoint>& s,
                          bool check_etale, const ClumpOptions& opt) {
  ClumpCertificate cert;
  const Correspondence cf = c.base_change(canonical_embedding(c.ctx(), field));
  std::vector<EdgePoint> edges;
  for (const auto& z : s) edges.push_back(cf.edge(z.x, z.y));
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  if (check_etale) {
    std::vector<LocalStructure> locals;
    for (const auto& z : edges) locals.push_back(cf.local(z));
    cert.etale = weighted_etale(edges, locals, c.self_correspondence());
    cert.strictly_etale = std::all_of(locals.begin(), locals.end(), [](const LocalStructure& l) { return l.etale(); });
    std::map<PointP1, unsigned> over_x, over_y;
    for (const auto& z : edges) {
      over_x[z.x] += z.mult_f;
      over_y[z.y] += z.mult_g;
    }
    cert.regular = std::all_of(over_x.begin(), over_x.end(), [&](const auto& kv) { return kv.second == c.d(); }) &&
                   std::all_of(over_y.begin(), over_y.end(), [&](const auto& kv) { return kv.second == c.e(); });
  }
  GeometricGraph g(c, field, GrowthLimits{std::max(opt.budget, edges.size()), std::max(opt.max_degree, field.k())});
  for (const auto& z : edges) g.add_seed(z.x, z.y);
  auto missing = g.missing_fiber_edges(opt.symmetric);
  if (!missing) {
    cert.decided = false;
    return cert;
  }
  std::set<PointP1> xs = g.x_points(), ys = g.y_points();
  if (opt.symmetric) {
    xs.insert(ys.begin(), ys.end());
    ys = xs;
  }
  cert.f_closed = cert.g_closed = true;
  for (const auto& z : *missing) {
    if (xs.count(z.x)) cert.f_closed = false;
    if (ys.count(z.y)) cert.g_closed = false;
  }
  cert.missing = std::move(*missing);
  return cert;
}

std::size_t ClumpSearch::etale_count() const {
  return static_cast<std::size_t>(
      std::count_if(clumps.begin(), clumps.end(), [](const FoundClump& f) { return f.clump.etale; }));
}

std::string ClumpSearch::verdict() const {
  if (falsified()) return "falsified";
  if (has_core) return "has-core";
  if (clumps.empty()) return "inconclusive";
  return "ok";
}

ClumpSearch find_all_clumps(const Correspondence& c, unsigned m, const SearchOptions& opt) {
  ClumpSearch out;
  out.seed_field = make_field(c.ctx().p(), c.ctx().k() * m);
  out.has_core = opt.has_core;
  const Correspondence cm = c.base_change(canonical_embedding(c.ctx(), *out.seed_field));
  const std::vector<EdgePoint> seeds = cm.rational_edges();
  out.seeds = seeds.size();

  struct Result {
    std::size_t index;
    std::optional<Clump> clump;
    std::shared_ptr<const GeometricGraph> graph;  // truncated closures
  };
  std::vector<Result> results;
  std::mutex mu;
  std::atomic<std::size_t> next{0};

  auto covered = [&](const EdgePoint& z) {
    std::lock_guard lock(mu);
    for (const auto& r : results) {
      if (r.clump ? r.clump->contains(z.x, z.y) : r.graph->contains(z.x, z.y)) return true;
    }
    return false;
  };
  auto work_seeds = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= seeds.size()) return;
      if (covered(seeds[i])) continue;
      GraphRun run = run_closure(c, *out.seed_field, {seeds[i]}, opt.clump);
      Result r{i, std::nullopt, nullptr};
      if (run.closed) {
        r.clump = build_clump(*run.graph, c, m);
      } else {
        r.graph = std::move(run.graph);
      }
      std::lock_guard lock(mu);
      results.push_back(std::move(r));
    }
  };
  std::exception_ptr failure;
  auto work = [&] {
    try {
      work_seeds();
    } catch (...) {
      std::lock_guard lock(mu);
      if (!failure) failure = std::current_exception();
      next = seeds.size();
    }
  };
  const unsigned workers = std::max(1u, opt.workers);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  // Deterministic merge: the smallest seed of each clump represents it.
  std::sort(results.begin(), results.end(), [](const Result& a, const Result& b) { return a.index < b.index; });
  std::vector<const Clump*> bounded;
  for (const auto& r : results) {
    if (!r.clump) continue;
    const EdgePoint& z = seeds[r.index];
    if (std::any_of(bounded.begin(), bounded.end(), [&](const Clump* b) { return b->contains(z.x, z.y); })) continue;
    bounded.push_back(&*r.clump);
    if (opt.size_cap && r.clump->size() > opt.size_cap) {
      ++out.oversize;
      continue;
    }
    out.clumps.push_back({r.index, z, *r.clump});
  }
  for (const auto& z : seeds) {
    if (std::none_of(bounded.begin(), bounded.end(), [&](const Clump* b) { return b->contains(z.x, z.y); }))
      ++out.unbounded_seeds;
  }
  out.no_core = !opt.has_core && (opt.assume_no_core || out.unbounded_seeds > 0);
  return out;
}

RegularView regular_subgraph_view(const Correspondence& c, const Clump& s) {
  if (c.d() != c.e()) throw Error(ErrorCode::TypeMismatch, "regular view needs a type (d,d) correspondence");
  if (!c.self_correspondence()) throw Error(ErrorCode::NotSelfCorrespondence, "X and Y are declared distinct");
  if (s.x_image != s.y_image) throw Error(ErrorCode::NotSymmetricClump, "x and y images differ");
  RegularView rv;
  rv.degree = c.d();
  rv.view = directed_view(c, s.edges);
  const auto out = rv.view.out_degree(), in = rv.view.in_degree();
  for (std::size_t v = 0; v < rv.view.vertices.size(); ++v)
    if (out[v] != rv.degree || in[v] != rv.degree) rv.bad_vertices.push_back(v);
  rv.regular = rv.bad_vertices.empty();
  return rv;
}

std::string encode_point(const PointP1& pt) {
  if (pt.is_inf()) return "inf";
  const FieldElement& a = pt.value();
  const unsigned md = a.min_degree();
  if (md == a.ctx().k()) return a.to_string();
  FieldPtr small = make_field(a.ctx().p(), md);
  return canonical_embedding(*small, a.ctx()).descend(a)->to_string();
}

nlohmann::json clump_json(const Clump& s, unsigned base_k) {
  const unsigned dd = lcm_u(s.definition_degree, base_k);
  FieldPtr fd = make_field(s.field->p(), dd);
  const Embedding& down = canonical_embedding(*fd, *s.field);
  auto lower = [&](const PointP1& pt) {
    if (pt.is_inf()) return pt;
    auto v = down.descend(pt.value());
    if (!v) throw Error(ErrorCode::CtxMismatch, "point outside the field of definition");
    return PointP1(*v);
  };
  struct Row {
    EdgePoint z;
    const LocalStructure* local;
  };
  std::vector<Row> rows;
  for (std::size_t i = 0; i < s.edges.size(); ++i)
    rows.push_back({EdgePoint{lower(s.edges[i].x), lower(s.edges[i].y), s.edges[i].mult_f, s.edges[i].mult_g},
                    &s.locals[i]});
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.z < b.z; });
  auto image = [&](const std::vector<PointP1>& pts) {
    std::vector<PointP1> low;
    for (const auto& p : pts) low.push_back(lower(p));
    std::sort(low.begin(), low.end());
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& p : low) arr.push_back(encode_point(p));
    return arr;
  };
  nlohmann::json j;
  j["p"] = s.field->p();
  j["field"] = fd->name();
  j["definition_degree"] = dd;
  j["m"] = s.m;
  j["size"] = s.size();
  j["etale"] = s.etale;
  j["strictly_etale"] = s.strictly_etale;
  j["regular"] = s.regular;
  j["frobenius_stable"] = s.frobenius_stable(base_k);
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json br = nlohmann::json::array();
    for (const auto& b : r.local->branches) br.push_back({b.f_ram, b.g_ram});
    edges.push_back({{"x", encode_point(r.z.x)},
                     {"y", encode_point(r.z.y)},
                     {"mult_f", r.z.mult_f},
                     {"mult_g", r.z.mult_g},
                     {"resolved", r.local->resolved},
                     {"branches", br}});
  }
  j["edges"] = edges;
  j["x_image"] = image(s.x_image);
  j["y_image"] = image(s.y_image);
  return j;
}

PointP1 decode_point(const FieldCtx& field, std::string_view text) {
  const std::string t(text);
  if (t == "inf" || t == "oo" || t == "infinity") return PointP1::infinity();
  if (t.find('@') == std::string::npos) return parse_point(field, t);
  const FieldElement a = parse_element(t);
  if (a.ctx().p() != field.p() || field.k() % a.ctx().k() != 0)
    throw Error(ErrorCode::CtxMismatch, "'" + t + "' does not embed in " + field.name());
  return PointP1(canonical_embedding(a.ctx(), field).apply(a));
}

IngestedClump ingest_clump(const nlohmann::json& report) {
  IngestedClump out;
  try {
    out.field = make_field(report.at("p").get<Limb>(), report.at("definition_degree").get<unsigned>());
    auto point = [&](const std::string& text) { return decode_point(*out.field, text); };
    for (const auto& e : report.at("edges"))
      out.edges.push_back(EdgePoint{point(e.at("x").get<std::string>()), point(e.at("y").get<std::string>())});
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::ParseError, std::string("clump report: ") + ex.what());
  }
  return out;
}

}  // namespace corrdyn
