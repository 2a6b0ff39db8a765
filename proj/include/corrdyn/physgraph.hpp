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

#ifndef CORRDYN_PHYSGRAPH_HPP
#define CORRDYN_PHYSGRAPH_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "corrdyn/correspondence.hpp"
#include "corrdyn/geometric.hpp"

namespace corrdyn {

/// A connected piece of the physical graph over a fixed field F_{q^m}.
/// Blue vertices are X-points, red vertices Y-points, edges plane points;
/// a plane point with several branches counts as that many parallel edges.
struct ColoredComponent {
  FieldPtr field;
  unsigned m = 1;
  EdgePoint seed;
  std::vector<PointP1> blue;
  std::vector<PointP1> red;
  std::vector<EdgePoint> edges;
  std::vector<LocalStructure> locals;  // parallel to edges
  bool truncated = false;
  /// Every fiber of every vertex is rational over the field.
  bool closed = false;
  /// E - V + 1 with parallel edges; -1 when truncated.
  long betti = -1;

  std::size_t edge_count() const;
  bool strictly_etale() const;
};

/// Breadth-first fiber completion from the seed over the correspondence's
/// own field, canonical order. Never throws on budget; sets truncated.
ColoredComponent explore(const Correspondence& c, const EdgePoint& seed, std::size_t budget);
/// Same, with the seed in F_{q^m} and c over F_q.
ColoredComponent explore(const Correspondence& c, unsigned m, const EdgePoint& seed, std::size_t budget);
/// All components of the rational physical graph, ordered by smallest edge.
std::vector<ColoredComponent> all_components(const Correspondence& c, std::size_t budget);

/// Cycle-space dimension by spanning forest: the number of edges that close
/// a cycle when added one by one.
long betti_spanning_tree(const ColoredComponent& comp);

enum class VolcanoTag { Tree, Volcano, MultiCycle };
const char* to_string(VolcanoTag t);

struct VolcanoReport {
  VolcanoTag tag = VolcanoTag::Tree;
  /// Vertices left after leaf pruning, as ("b"|"r", point) labels.
  std::vector<std::string> rim;
  std::size_t rim_edges = 0;
  /// label -> distance to the rim (volcanoes only).
  std::map<std::string, std::size_t> depth;
};

/// Throws Truncated.
VolcanoReport volcano_classify(const ColoredComponent& comp);

enum class PointClass { GenericUpTo, SpecialFinite, SpecialCycle };
const char* to_string(PointClass k);

struct Classification {
  PointClass kind = PointClass::GenericUpTo;
  std::size_t radius = 0;
  std::size_t ball_edges = 0;
  std::string label() const;  // generic_up_to_r etc.
};

/// Bounded certificate of special/generic behaviour over the algebraic
/// closure. Throws UnsupportedRamified when a non-etale point sits in the
/// ball of an unbounded orbit, BudgetTooSmall when the ball does not fit.
Classification classify_point(const Correspondence& c, unsigned m, const EdgePoint& seed, std::size_t radius,
                              std::size_t budget, unsigned max_degree = 24);

struct StatsReport {
  std::size_t edges = 0;
  std::size_t special_finite = 0;
  std::size_t special_cycle = 0;
  std::size_t generic = 0;
  std::size_t ramified = 0;
  std::size_t budget_too_small = 0;
  std::size_t radius = 0;
  std::map<std::size_t, std::size_t> rim_lengths;      // rim edge count -> components
  std::map<std::size_t, std::size_t> component_sizes;  // edge count -> components
  std::size_t truncated_components = 0;

  double generic_fraction() const { return edges ? static_cast<double>(generic) / static_cast<double>(edges) : 0.0; }
  nlohmann::json to_json() const;
};

/// Classifies every edge over F_{q^m}. Seeds are spread over `workers`
/// threads; the merge is order-independent.
StatsReport stats(const Correspondence& c, unsigned m, std::size_t radius, std::size_t budget, unsigned workers = 1,
                  unsigned max_degree = 24);

/// Directed multigraph of a self-correspondence: one vertex per point, an
/// arc x -> y per edge. Degrees count multiplicities: out-degree sums
/// mult_f, in-degree sums mult_g.
struct DirectedView {
  std::vector<PointP1> vertices;
  struct Arc {
    std::size_t from, to;
    unsigned mult_f, mult_g;
  };
  std::vector<Arc> arcs;

  std::vector<unsigned> out_degree() const;
  std::vector<unsigned> in_degree() const;
};

struct CycleReport {
  std::size_t max_length = 0;
  /// Shortest directed cycle length, 0 when none within max_length.
  std::size_t girth = 0;
  std::size_t vertices_on_cycles = 0;
  std::vector<std::size_t> example;  // vertex indices
};

/// Throws NotSelfCorrespondence.
DirectedView directed_view(const Correspondence& c, const std::vector<EdgePoint>& edges);
CycleReport directed_cycles(const DirectedView& v, std::size_t max_length);

nlohmann::json component_json(const ColoredComponent& comp);
std::string component_dot(const ColoredComponent& comp);
std::string directed_dot(const DirectedView& v);

}  // namespace corrdyn

#endif  // CORRDYN_PHYSGRAPH_HPP
