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

#include "corrdyn/geometric.hpp"

#include <algorithm>

#include "corrdyn/error.hpp"

namespace corrdyn {

const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::None: return "none";
    case StopReason::EdgeBudget: return "edge_budget";
    case StopReason::FieldDegree: return "field_degree";
  }
  return "none";
}

namespace {

FieldPtr intern(const FieldCtx& f) { return make_field(f.p(), f.k()); }

}  // namespace

GeometricGraph::GeometricGraph(const Correspondence& base, const FieldCtx& start, GrowthLimits limits)
    : base_(&base),
      limits_(limits),
      cur_(intern(start)),
      corr_(base.base_change(canonical_embedding(base.ctx(), start))),
      base_to_cur_(canonical_embedding(base.ctx(), start)),
      start_to_cur_(Embedding::identity(start)) {}

bool GeometricGraph::grow(unsigned factor) {
  const unsigned k = cur_->k() * factor;
  if (k > limits_.max_degree) {
    stop_ = StopReason::FieldDegree;
    return false;
  }
  FieldPtr next = make_field(cur_->p(), k);
  const Embedding& e = canonical_embedding(*cur_, *next);
  base_to_cur_ = base_to_cur_->then(e);
  start_to_cur_ = start_to_cur_->then(e);
  corr_ = base_->base_change(*base_to_cur_);

  std::map<VKey, VertexInfo> vs;
  for (const auto& [key, info] : vertices_) vs.emplace(VKey{key.first, key.second.map(e)}, info);
  vertices_ = std::move(vs);
  std::set<EdgePoint> es;
  for (const auto& z : edges_) es.insert(EdgePoint{z.x.map(e), z.y.map(e), z.mult_f, z.mult_g});
  edges_ = std::move(es);
  for (auto& key : queue_) key.second = key.second.map(e);
  cur_ = next;
  return true;
}

std::optional<Fiber> GeometricGraph::geometric_fiber(Side s, PointP1& p) {
  while (true) {
    Fiber fib = s == Side::X ? corr_.forward(p) : corr_.backward(p);
    if (fib.missing == 0) return fib;
    const PointP1 old = p;
    const FieldCtx* before = cur_.get();
    if (!grow(fib.splitting_degree)) return std::nullopt;
    p = old.map(canonical_embedding(*before, *cur_));
  }
}

void GeometricGraph::add_vertex(Side s, const PointP1& p, std::size_t dist) {
  auto [it, inserted] = vertices_.emplace(VKey{s, p}, VertexInfo{false, dist});
  if (inserted) {
    queue_.emplace_back(s, p);
  } else if (dist < it->second.dist) {
    it->second.dist = dist;
  }
}

bool GeometricGraph::contains(const PointP1& x_start, const PointP1& y_start) const {
  return edges_.count(EdgePoint{import(x_start), import(y_start)}) > 0;
}

void GeometricGraph::add_seed(const PointP1& x_start, const PointP1& y_start, std::size_t dist) {
  const PointP1 x = import(x_start), y = import(y_start);
  edges_.insert(corr_.edge(x, y));
  add_vertex(Side::X, x, dist);
  add_vertex(Side::Y, y, dist);
}

void GeometricGraph::add_seed_orbit(const PointP1& x_start, const PointP1& y_start) {
  const unsigned step = base_->ctx().k();
  PointP1 x = import(x_start), y = import(y_start);
  const PointP1 x0 = x, y0 = y;
  do {
    edges_.insert(corr_.edge(x, y));
    add_vertex(Side::X, x, 0);
    add_vertex(Side::Y, y, 0);
    x = x.frobenius(step);
    y = y.frobenius(step);
  } while (!(x == x0 && y == y0));
}

bool GeometricGraph::run(bool symmetric, std::optional<std::size_t> max_dist) {
  while (!queue_.empty()) {
    VKey key = queue_.front();
    auto it = vertices_.find(key);
    if (it->second.expanded || (max_dist && it->second.dist >= *max_dist)) {
      queue_.pop_front();
      continue;
    }
    const std::size_t dist = it->second.dist;
    PointP1 p = key.second;
    auto fib = geometric_fiber(key.first, p);
    if (!fib) return false;
    queue_.pop_front();
    key.second = p;
    vertices_[key].expanded = true;
    if (symmetric) add_vertex(key.first == Side::X ? Side::Y : Side::X, p, dist);
    for (const auto& [q, mult] : fib->points) {
      const PointP1& x = key.first == Side::X ? p : q;
      const PointP1& y = key.first == Side::X ? q : p;
      if (edges_.count(EdgePoint{x, y}) == 0) edges_.insert(corr_.edge(x, y));
      add_vertex(key.first == Side::X ? Side::Y : Side::X, q, dist + 1);
      if (symmetric) add_vertex(key.first, q, dist + 1);
    }
    if (edges_.size() > limits_.max_edges) {
      stop_ = StopReason::EdgeBudget;
      return false;
    }
  }
  return true;
}

std::optional<std::vector<EdgePoint>> GeometricGraph::missing_fiber_edges(bool symmetric) {
  std::set<PointP1> xs = x_points(), ys = y_points();
  if (symmetric) {
    xs.insert(ys.begin(), ys.end());
    ys = xs;
  }
  std::vector<VKey> todo;
  for (const auto& x : xs) todo.emplace_back(Side::X, x);
  for (const auto& y : ys) todo.emplace_back(Side::Y, y);
  std::vector<EdgePoint> missing;
  for (std::size_t i = 0; i < todo.size(); ++i) {
    const FieldCtx* before = cur_.get();
    PointP1 p = todo[i].second;
    auto fib = geometric_fiber(todo[i].first, p);
    if (!fib) return std::nullopt;
    if (cur_.get() != before) {
      // Field grew: re-map the remaining worklist and what was found.
      const Embedding& e = canonical_embedding(*before, *cur_);
      for (std::size_t j = i + 1; j < todo.size(); ++j) todo[j].second = todo[j].second.map(e);
      for (auto& z : missing) z = EdgePoint{z.x.map(e), z.y.map(e), z.mult_f, z.mult_g};
    }
    for (const auto& [q, mult] : fib->points) {
      const PointP1& x = todo[i].first == Side::X ? p : q;
      const PointP1& y = todo[i].first == Side::X ? q : p;
      if (edges_.count(EdgePoint{x, y}) == 0) missing.push_back(corr_.edge(x, y));
    }
  }
  std::sort(missing.begin(), missing.end());
  missing.erase(std::unique(missing.begin(), missing.end()), missing.end());
  return missing;
}

std::set<PointP1> GeometricGraph::x_points() const {
  std::set<PointP1> out;
  for (const auto& z : edges_) out.insert(z.x);
  return out;
}

std::set<PointP1> GeometricGraph::y_points() const {
  std::set<PointP1> out;
  for (const auto& z : edges_) out.insert(z.y);
  return out;
}

std::size_t GeometricGraph::distance(Side s, const PointP1& p) const {
  auto it = vertices_.find(VKey{s, p});
  if (it == vertices_.end()) throw Error(ErrorCode::NotOnCurve, "vertex not explored");
  return it->second.dist;
}

}  // namespace corrdyn
