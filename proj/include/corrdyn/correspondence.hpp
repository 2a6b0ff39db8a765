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

#ifndef CORRDYN_CORRESPONDENCE_HPP
#define CORRDYN_CORRESPONDENCE_HPP

#include <compare>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "corrdyn/ffield.hpp"
#include "corrdyn/polyring.hpp"
#include "corrdyn/tower.hpp"

namespace corrdyn {

/// A point of P^1: a field element or infinity. Infinity sorts last.
class PointP1 {
 public:
  PointP1() = default;  // infinity
  explicit PointP1(FieldElement v) : v_(std::move(v)) {}
  static PointP1 infinity() { return PointP1(); }

  bool is_inf() const { return !v_.has_value(); }
  const FieldElement& value() const { return *v_; }

  PointP1 map(const Embedding& e) const { return is_inf() ? *this : PointP1(e.apply(*v_)); }
  PointP1 frobenius(unsigned i) const { return is_inf() ? *this : PointP1(v_->frobenius(i)); }
  /// Absolute degree over F_p of the smallest field containing the point.
  unsigned min_degree() const { return is_inf() ? 1 : v_->min_degree(); }

  /// `inf` or the element text encoding.
  std::string to_string() const { return is_inf() ? "inf" : v_->to_string(); }

  friend bool operator==(const PointP1& a, const PointP1& b) { return a.v_ == b.v_; }
  friend std::strong_ordering operator<=>(const PointP1& a, const PointP1& b);

 private:
  std::optional<FieldElement> v_;
};

/// Accepts `inf`, a full element encoding, or a bare integer.
PointP1 parse_point(const FieldCtx& ctx, std::string_view text);

/// A point of the plane model. mult_f is the multiplicity of y in the fiber
/// of f over x; mult_g that of x in the fiber of g over y.
struct EdgePoint {
  PointP1 x;
  PointP1 y;
  unsigned mult_f = 1;
  unsigned mult_g = 1;

  std::string to_string() const { return "(" + x.to_string() + "," + y.to_string() + ")"; }
  friend bool operator==(const EdgePoint& a, const EdgePoint& b) { return a.x == b.x && a.y == b.y; }
  friend std::strong_ordering operator<=>(const EdgePoint& a, const EdgePoint& b) {
    if (auto c = a.x <=> b.x; c != 0) return c;
    return a.y <=> b.y;
  }
};

/// Points of a fiber that are rational over the working field, with
/// multiplicity. `missing` counts the multiplicity of the rest;
/// `splitting_degree` is the extension degree over which the fiber splits.
struct Fiber {
  std::vector<std::pair<PointP1, unsigned>> points;
  unsigned missing = 0;
  unsigned splitting_degree = 1;

  unsigned total() const {
    unsigned t = missing;
    for (const auto& pm : points) t += pm.second;
    return t;
  }
};

/// Ramification of one branch of the normalization through a plane point:
/// f_ram over X, g_ram over Y.
struct Branch {
  unsigned f_ram;
  unsigned g_ram;
  friend bool operator==(const Branch&, const Branch&) = default;
  friend auto operator<=>(const Branch&, const Branch&) = default;
};

/// Branches through a plane point. `resolved` is false when the local
/// analysis gave up (wild ramification, non-reduced germ, depth limit).
struct LocalStructure {
  bool resolved = true;
  std::vector<Branch> branches;

  bool etale() const {
    if (!resolved) return false;
    for (const auto& b : branches)
      if (b.f_ram != 1 || b.g_ram != 1) return false;
    return true;
  }
  /// Parallel edges this point contributes to the physical graph.
  unsigned edge_count() const { return resolved ? static_cast<unsigned>(branches.size()) : 1; }
};

/// Branch analysis of a germ G with G(0, 0) = 0 by rational Newton-Puiseux
/// expansion, extending the coefficient field when edge polynomials do not
/// split. Exposed for testing.
LocalStructure analyze_germ(const BiPoly& germ);

struct SanityCheck {
  bool plausible = true;
  std::vector<std::string> warnings;
};

/// A correspondence on P^1 x P^1 given by a plane curve F(x, y) = 0:
/// f = projection to x of degree d = deg_y F, g = projection to y of degree
/// e = deg_x F.
class Correspondence {
 public:
  /// Validates: F nonzero, no factor depending on x alone or y alone.
  explicit Correspondence(BiPoly f);

  /// Instantiates a file (integer tables need `prime`).
  static Correspondence load(const BiPolyFile& file, Limb prime = 0);

  const FieldCtx& ctx() const { return poly_.ctx(); }
  const BiPoly& poly() const { return poly_; }
  unsigned d() const { return static_cast<unsigned>(poly_.deg_y()); }
  unsigned e() const { return static_cast<unsigned>(poly_.deg_x()); }

  bool minimal() const { return minimal_; }
  /// F(x, y) = u F(y, x) for a nonzero constant u.
  bool symmetric() const { return symmetric_; }
  /// X and Y are the same line unless declared otherwise.
  bool self_correspondence() const { return !distinct_sides_; }
  void set_distinct_sides(bool v) { distinct_sides_ = v; }

  /// Same correspondence with coefficients pushed along `e`.
  Correspondence base_change(const Embedding& e) const;

  Fiber forward(const PointP1& x) const;
  Fiber backward(const PointP1& y) const;

  bool on_curve(const PointP1& x, const PointP1& y) const;
  /// Builds the edge with both multiplicities. Throws NotOnCurve.
  EdgePoint edge(const PointP1& x, const PointP1& y) const;
  /// (simple over X, simple over Y).
  std::pair<bool, bool> etale_at(const EdgePoint& z) const;
  /// Germ of F at the point, moved to the origin (charts at infinity use
  /// coefficient reversal).
  BiPoly germ(const PointP1& x, const PointP1& y) const;
  LocalStructure local(const EdgePoint& z) const;

  /// All edges with both coordinates in the working field (or infinity),
  /// sorted. Throws BoundExceeded when the field is not enumerable.
  std::vector<EdgePoint> rational_edges() const;

  /// Affine point counts over small extensions compared with a
  /// single-component band. Warnings only.
  SanityCheck irreducibility_sanity() const;

 private:
  Correspondence(BiPoly f, bool minimal, bool symmetric, bool distinct);
  Fiber fiber(const Specialization& s) const;
  const BiPoly& chart(bool x_inf, bool y_inf) const;

  BiPoly poly_;
  BiPoly rev_x_;   // x^e F(1/x, y)
  BiPoly rev_y_;   // y^d F(x, 1/y)
  BiPoly rev_xy_;
  bool minimal_ = false;
  bool symmetric_ = false;
  bool distinct_sides_ = false;
};

struct OrbitClosure {
  std::vector<PointP1> x_side;
  std::vector<PointP1> y_side;
  bool bounded = true;
};

/// Least pair of point sets closed under forward and backward transfer that
/// contains x0, over the working field only (non-rational fiber points are
/// dropped). Breadth-first in canonical order; bounded = false once the
/// total exceeds `budget`.
OrbitClosure orbit_closure(const Correspondence& c, const PointP1& x0, std::size_t budget);

}  // namespace corrdyn

#endif  // CORRDYN_CORRESPONDENCE_HPP
