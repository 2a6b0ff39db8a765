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

#ifndef CORRDYN_TREEGEN_HPP
#define CORRDYN_TREEGEN_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "corrdyn/physgraph.hpp"

namespace corrdyn {

enum class Color { Blue, Red };
const char* to_string(Color c);

struct TreeBall {
  unsigned d = 0, e = 0, radius = 0;
  Color root = Color::Blue;
  std::vector<Color> color;
  std::vector<long> parent;  // -1 at the root
  std::vector<unsigned> depth;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::vector<std::size_t> sphere;  // vertices at each distance

  std::size_t vertex_count() const { return color.size(); }
};

/// (d,e)-biregular colored tree ball; blue vertices have degree d, red e.
/// BFS labeling, children in order. Throws BoundExceeded past 10^6 vertices.
TreeBall tree_ball(unsigned d, unsigned e, unsigned radius, Color root);

struct CoverCertificate {
  bool covered = false;
  long betti = -1;
  std::vector<std::string> failing;  // vertex labels or ramified edges
};

/// Degree audit of a closed component against the (d,e)-biregular tree.
CoverCertificate cover_check(const ColoredComponent& comp, unsigned d, unsigned e);

class FiniteGraph {
 public:
  explicit FiniteGraph(std::size_t n = 0) : adj_(n) {}

  std::size_t size() const { return adj_.size(); }
  /// Rejects loops and repeated edges.
  void add_edge(std::size_t u, std::size_t v);
  bool adjacent(std::size_t u, std::size_t v) const;
  const std::vector<std::size_t>& neighbors(std::size_t v) const { return adj_[v]; }
  std::size_t edge_count() const;
  bool connected() const;
  bool regular(unsigned degree) const;

  std::vector<int> colors;  // optional 2-coloring, empty when absent

 private:
  std::vector<std::vector<std::size_t>> adj_;  // sorted
};

/// `u v` per line, 0-indexed; '#' starts a comment.
FiniteGraph parse_edge_list(std::string_view text);
FiniteGraph read_edge_list(const std::string& path);

using Perm = std::vector<std::size_t>;

struct AutGroup {
  std::vector<Perm> generators;
  std::uint64_t order = 1;
};

/// Full automorphism group by stabilizer-chain backtracking (n <= 64).
AutGroup automorphisms(const FiniteGraph& g);
/// Order of the pointwise stabilizer of `fixed`.
std::uint64_t stabilizer_order(const FiniteGraph& g, const std::vector<std::size_t>& fixed);

struct ArcLevel {
  unsigned s = 0;
  std::uint64_t arcs = 0;
  /// Orbits of s-arcs under the generated group (orbit search).
  std::size_t orbits = 0;
  /// |Aut| / |Stab(first arc)| (orbit-stabilizer count).
  std::uint64_t orbit_of_first = 0;
  bool transitive = false;
};

struct ArcReport {
  std::size_t vertices = 0;
  std::uint64_t aut_order = 0;
  std::vector<ArcLevel> levels;  // s = 0..s_cap
  int s_max = -1;
  bool cubic = false;
  /// |Aut| equals the number of s_max-arcs.
  bool sharp = false;
  /// Both counters agree at every level.
  bool counters_agree = true;

  nlohmann::json to_json() const;
};

/// s-arcs: v_0..v_s with consecutive vertices adjacent and v_{i+1} != v_{i-1}.
ArcReport arc_transitivity(const FiniteGraph& g, unsigned s_cap = 8);

}  // namespace corrdyn

#endif  // CORRDYN_TREEGEN_HPP
