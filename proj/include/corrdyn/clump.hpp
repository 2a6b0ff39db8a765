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

#ifndef CORRDYN_CLUMP_HPP
#define CORRDYN_CLUMP_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "corrdyn/correspondence.hpp"
#include "corrdyn/geometric.hpp"
#include "corrdyn/physgraph.hpp"

namespace corrdyn {

struct ClumpOptions {
  /// Edge budget for one closure run.
  std::size_t budget = 1000;
  unsigned max_degree = 24;
  /// Expand every reached point on both sides (for models where the two
  /// coordinates are the same modular function).
  bool symmetric = false;
};

struct Clump {
  FieldPtr field;  // working field holding every edge
  unsigned m = 1;  // seeds were given over F_{q^m}
  std::vector<EdgePoint> edges;        // sorted
  std::vector<LocalStructure> locals;  // parallel to edges
  std::vector<PointP1> x_image;
  std::vector<PointP1> y_image;
  /// Weighted (orbifold) balance: vertex weights w > 0 with
  /// w(x) g_ram = w(y) f_ram on every branch.
  bool etale = false;
  /// Every branch unramified in both directions.
  bool strictly_etale = false;
  /// Multiplicities over each x sum to d, over each y to e.
  bool regular = false;
  /// Absolute degree over F_p of the field of definition of the edge set.
  unsigned definition_degree = 1;
  /// Seed field -> working field.
  std::optional<Embedding> seed_to_field;

  std::size_t size() const { return edges.size(); }
  bool contains(const PointP1& x_seed, const PointP1& y_seed) const;
  /// Stable under the q-Frobenius of the base field (q = p^base_k).
  bool frobenius_stable(unsigned base_k) const;
};

/// Solves the orbifold balance system for a set of edges.
bool weighted_etale(const std::vector<EdgePoint>& edges, const std::vector<LocalStructure>& locals, bool tie_sides);

struct ClosureResult {
  std::optional<Clump> clump;
  StopReason reason = StopReason::None;
  std::size_t edges_seen = 0;
  bool bounded() const { return clump.has_value(); }
};

/// Least clump containing the Frobenius orbits of the seeds (given over
/// F_{q^m}). Unbounded when a budget or the field-degree cap hits.
ClosureResult closure(const Correspondence& c, unsigned m, const std::vector<EdgePoint>& seeds,
                      const ClumpOptions& opt = {});

struct ClumpCertificate {
  bool decided = true;  // false when the fiber check hit a limit
  bool f_closed = false;
  bool g_closed = false;
  bool etale = false;
  bool strictly_etale = false;
  bool regular = false;
  std::vector<EdgePoint> missing;  // in the grown field
  bool is_clump() const { return decided && f_closed && g_closed; }
};

/// Certifies f^-1 f(S) = S and g^-1 g(S) = S by full geometric fiber
/// expansion. `field` holds the edges of S.
ClumpCertificate is_clump(const Correspondence& c, const FieldCtx& field, const std::vector<EdgePoint>& s,
                          bool check_etale, const ClumpOptions& opt = {});

struct SearchOptions {
  ClumpOptions clump;
  /// Bounded closures larger than this are not reported (0: no cap).
  std::size_t size_cap = 0;
  unsigned workers = 1;
  bool has_core = false;
  /// Declares the absence of a core up front instead of inferring it from
  /// an unbounded seed.
  bool assume_no_core = false;
};

struct FoundClump {
  std::size_t seed_index = 0;
  EdgePoint seed;
  Clump clump;
};

struct ClumpSearch {
  FieldPtr seed_field;
  std::size_t seeds = 0;
  std::vector<FoundClump> clumps;  // ordered by representative seed
  std::size_t unbounded_seeds = 0;
  std::size_t oversize = 0;
  bool has_core = false;
  /// No core declared, and either none assumed or some seed unbounded.
  bool no_core = false;
  std::size_t etale_count() const;
  /// More than one weighted-etale clump while no core is assumed.
  bool falsified() const { return no_core && etale_count() > 1; }
  /// "ok", "falsified", "has-core" or "inconclusive" (no clump found).
  std::string verdict() const;
};

ClumpSearch find_all_clumps(const Correspondence& c, unsigned m, const SearchOptions& opt);

struct RegularView {
  DirectedView view;
  unsigned degree = 0;
  bool regular = false;
  std::vector<std::size_t> bad_vertices;
};

/// Induced directed graph on a symmetric etale clump of a (d,d)
/// self-correspondence, with in/out-degree audit.
RegularView regular_subgraph_view(const Correspondence& c, const Clump& s);

/// Field element / point text after descending to the smallest field;
/// prime-field members print as "a@p".
std::string encode_point(const PointP1& pt);

/// Inverse of encode_point: the point is embedded into `field` (bare
/// integers are read mod p).
PointP1 decode_point(const FieldCtx& field, std::string_view text);

/// Report with every point descended to F_{p^D}, D = definition degree.
nlohmann::json clump_json(const Clump& s, unsigned base_k);

struct IngestedClump {
  FieldPtr field;
  std::vector<EdgePoint> edges;
};

/// Reads the edge set back from clump_json output.
IngestedClump ingest_clump(const nlohmann::json& report);

}  // namespace corrdyn

#endif  // CORRDYN_CLUMP_HPP
