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

#ifndef CORRDYN_ELLCURVE_HPP
#define CORRDYN_ELLCURVE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "corrdyn/ffield.hpp"

namespace corrdyn {

/// y^2 = x^3 + a x + b over a field of characteristic at least 5.
class WeierstrassCurve {
 public:
  /// Throws SmallCharacteristic, SingularCurve, CtxMismatch.
  WeierstrassCurve(FieldElement a, FieldElement b);

  const FieldCtx& ctx() const { return a_.ctx(); }
  const FieldElement& a() const { return a_; }
  const FieldElement& b() const { return b_; }
  FieldElement discriminant() const;  // 4a^3 + 27b^2
  FieldElement j_invariant() const;

 private:
  FieldElement a_, b_;
};

/// a = 3j(1728 - j), b = 2j(1728 - j)^2, with j = 0 -> (0, 1) and
/// j = 1728 -> (1, 0).
WeierstrassCurve curve_from_j(const FieldElement& j);

/// #E(F_q) including the point at infinity. Brute force, q <= 2^16.
std::uint64_t count_points(const WeierstrassCurve& e);

/// Coefficient of x^(p-1) in (x^3 + a x + b)^((p-1)/2).
FieldElement hasse_invariant(const WeierstrassCurve& e);
bool is_supersingular(const FieldElement& j);

struct SupersingularReport {
  Limb p = 0;
  /// Sorted in canonical order of F_{p^2}.
  std::vector<FieldElement> js;
  /// floor(p/12) <= count <= floor(p/12) + 2
  bool mass_check = false;

  std::size_t count() const { return js.size(); }
  /// {"p":11,"js":["0@11","1@11"],"count":2}; prime-field members use the
  /// prime-field shorthand.
  std::string json() const;
};

/// Exhaustive Deuring scan over F_{p^2}; 5 <= p <= 2^10.
SupersingularReport supersingular_set(Limb p);

/// Text of an element of F_{p^2} in the smallest of F_p, F_{p^2} holding it.
std::string encode_small(const FieldElement& a);

struct TwoIsogenies {
  FieldPtr field;                // where the 2-torsion of E splits
  std::vector<FieldElement> js;  // three codomain j-invariants, sorted
};

/// Codomains of the three 2-isogenies from curve_from_j(j), by Velu's
/// formulas. Throws ExcludedJ for j in {0, 1728}.
TwoIsogenies two_isogenous_j(const FieldElement& j);

/// j-invariant of the curve at a point x != 0 of X_0(2) in the Hauptmodul
/// t = (eta(tau)/eta(2 tau))^24: j = (x + 256)^3 / x^2.
FieldElement level2_j(const FieldElement& x);

}  // namespace corrdyn

#endif  // CORRDYN_ELLCURVE_HPP
