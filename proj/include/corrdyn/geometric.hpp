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

#ifndef CORRDYN_GEOMETRIC_HPP
#define CORRDYN_GEOMETRIC_HPP

#include <cstddef>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "corrdyn/correspondence.hpp"

namespace corrdyn {

enum class Side { X, Y };

struct GrowthLimits {
  std::size_t max_edges = 1000;
  /// Cap on the absolute degree over F_p of the working field.
  unsigned max_degree = 24;
};

enum class StopReason { None, EdgeBudget, FieldDegree };
const char* to_string(StopReason r);

/// Part of the physical graph over the algebraic closure, explored with a
/// working field that grows on demand. All state moves along one chain of
/// canonical embeddings, so points found at different times stay
/// comparable.
class GeometricGraph {
 public:
  GeometricGraph(const Correspondence& base, const FieldCtx& start, GrowthLimits limits);

  const FieldCtx& field() const { return *cur_; }
  const Correspondence& corr() const { return corr_; }
  const Embedding& start_to_field() const { return *start_to_cur_; }
  StopReason stop_reason() const { return stop_; }

  PointP1 import(const PointP1& p) const { return p.map(*start_to_cur_); }
  /// Edge with coordinates in the start field.
  bool contains(const PointP1& x_start, const PointP1& y_start) const;

  /// Adds an edge given in start-field coordinates and queues its ends.
  void add_seed(const PointP1& x_start, const PointP1& y_start, std::size_t dist = 0);
  /// Adds the q-Frobenius orbit (q = base field size) of the seed.
  void add_seed_orbit(const PointP1& x_start, const PointP1& y_start);

  /// Expands queued vertices until nothing is left (true) or a limit hits.
  /// symmetric: every point reached on one side is also expanded on the
  /// other. max_dist bounds the distance of expanded vertices.
  bool run(bool symmetric, std::optional<std::size_t> max_dist = std::nullopt);

  /// Checks that every vertex's geometric fiber lies in the edge set
  /// without adding anything. Returns the offending edges (in the current
  /// field); may grow the field. Empty optional when a limit hit.
  std::optional<std::vector<EdgePoint>> missing_fiber_edges(bool symmetric);

  const std::set<EdgePoint>& edges() const { return edges_; }
  std::set<PointP1> x_points() const;
  std::set<PointP1> y_points() const;
  std::size_t distance(Side s, const PointP1& p) const;

 private:
  struct VertexInfo {
    bool expanded = false;
    std::size_t dist = 0;
  };
  using VKey = std::pair<Side, PointP1>;

  bool grow(unsigned factor);
  void add_vertex(Side s, const PointP1& p, std::size_t dist);
  // Full geometric fiber of a vertex; the vertex is re-mapped when the
  // field grows. Empty optional when a limit hit.
  std::optional<Fiber> geometric_fiber(Side s, PointP1& p);

  const Correspondence* base_;
  GrowthLimits limits_;
  FieldPtr cur_;
  Correspondence corr_;
  std::optional<Embedding> base_to_cur_;
  std::optional<Embedding> start_to_cur_;
  StopReason stop_ = StopReason::None;

  std::map<VKey, VertexInfo> vertices_;
  std::set<EdgePoint> edges_;
  std::deque<VKey> queue_;
};

}  // namespace corrdyn

#endif  // CORRDYN_GEOMETRIC_HPP
