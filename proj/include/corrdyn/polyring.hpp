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

#ifndef CORRDYN_POLYRING_HPP
#define CORRDYN_POLYRING_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "corrdyn/ffield.hpp"

namespace corrdyn {

/// Dense univariate polynomial over a finite field; normalized so the
/// highest stored coefficient is nonzero. The zero polynomial has degree -1.
class UniPoly {
 public:
  explicit UniPoly(const FieldCtx& ctx) : ctx_(&ctx) {}
  UniPoly(const FieldCtx& ctx, std::vector<FieldElement> coeffs);

  static UniPoly constant(const FieldElement& c);
  static UniPoly monomial(const FieldElement& c, unsigned degree);
  /// x - r
  static UniPoly linear(const FieldElement& r);
  static UniPoly x(const FieldCtx& ctx);

  const FieldCtx& ctx() const { return *ctx_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_constant() const { return c_.size() <= 1; }
  const std::vector<FieldElement>& coeffs() const { return c_; }
  FieldElement coeff(std::size_t i) const;
  FieldElement lead() const;

  FieldElement operator()(const FieldElement& x) const;
  UniPoly derivative() const;
  UniPoly monic() const;
  UniPoly scaled(const FieldElement& s) const;

  UniPoly& operator+=(const UniPoly& o);
  UniPoly& operator-=(const UniPoly& o);
  friend UniPoly operator+(UniPoly a, const UniPoly& b) { return a += b; }
  friend UniPoly operator-(UniPoly a, const UniPoly& b) { return a -= b; }
  friend UniPoly operator*(const UniPoly& a, const UniPoly& b);
  friend bool operator==(const UniPoly& a, const UniPoly& b) { return a.ctx_ == b.ctx_ && a.c_ == b.c_; }

  std::string to_string(char var = 'y') const;

 private:
  void normalize();
  void check_ctx(const UniPoly& o) const;

  const FieldCtx* ctx_;
  std::vector<FieldElement> c_;
};

/// Quotient and remainder. Throws ZeroModulus when b == 0.
std::pair<UniPoly, UniPoly> divmod(const UniPoly& a, const UniPoly& b);
UniPoly operator%(const UniPoly& a, const UniPoly& b);
/// Monic gcd; gcd(0, 0) = 0.
UniPoly gcd(const UniPoly& a, const UniPoly& b);
/// base^e mod m.
UniPoly powmod(const UniPoly& base, std::uint64_t e, const UniPoly& m);
/// h^(p^n) mod m, by n successive p-th powers.
UniPoly frobenius_powmod(const UniPoly& h, unsigned n, const UniPoly& m);

enum class UniOp { Add, Mul, Mod, Gcd };
UniPoly uni_arith(const UniPoly& a, const UniPoly& b, UniOp op);

struct Root {
  FieldElement value;
  unsigned multiplicity;
  friend bool operator==(const Root&, const Root&) = default;
};

/// All roots in the coefficient field with multiplicities, in canonical
/// element order. Exhaustive scan for fields of at most 2^16 elements,
/// otherwise gcd with x^q - x and deterministic equal-degree splitting.
/// Throws ZeroPolynomial.
std::vector<Root> roots(const UniPoly& f);
std::vector<Root> roots_exhaustive(const UniPoly& f);
std::vector<Root> roots_by_splitting(const UniPoly& f);
/// Number of times (x - r) divides f.
unsigned root_multiplicity(const UniPoly& f, const FieldElement& r);

bool is_squarefree(const UniPoly& f);
/// Product of the distinct monic irreducible factors.
UniPoly radical(const UniPoly& f);

struct DegreeFactor {
  unsigned degree;
  UniPoly product;  // product of all irreducible factors of that degree
};
/// Distinct-degree factorization of a squarefree polynomial.
std::vector<DegreeFactor> distinct_degree_factorization(const UniPoly& f);
/// lcm of the degrees of the irreducible factors of f (1 when f splits).
unsigned splitting_degree(const UniPoly& f);
bool is_irreducible(const UniPoly& f);

/// Lexicographically least (constant term compared first) monic irreducible
/// polynomial of degree k over F_p.
UniPoly irreducible_modulus(Limb p, unsigned k);
std::vector<Limb> irreducible_modulus_coeffs(Limb p, unsigned k);

// ---------------------------------------------------------------------------

enum class Var { X, Y };

/// Sparse bivariate polynomial sum c_ij x^i y^j. Zero coefficients are never
/// stored.
class BiPoly {
 public:
  using Key = std::pair<unsigned, unsigned>;

  explicit BiPoly(const FieldCtx& ctx) : ctx_(&ctx) {}

  const FieldCtx& ctx() const { return *ctx_; }
  bool is_zero() const { return terms_.empty(); }
  int deg_x() const { return deg_x_; }
  int deg_y() const { return deg_y_; }
  const std::map<Key, FieldElement>& terms() const { return terms_; }

  void set(unsigned i, unsigned j, const FieldElement& c);
  void add(unsigned i, unsigned j, const FieldElement& c);
  FieldElement coeff(unsigned i, unsigned j) const;
  FieldElement operator()(const FieldElement& x, const FieldElement& y) const;

  /// F(y, x).
  BiPoly transpose() const;
  BiPoly derivative(Var v) const;
  /// x^{deg_x} F(1/x, y) (Var::X) or y^{deg_y} F(x, 1/y) (Var::Y).
  BiPoly reversed(Var v) const;
  /// F(x + x0, y + y0).
  BiPoly shifted(const FieldElement& x0, const FieldElement& y0) const;
  /// F viewed in K[other][v]: entry j is the coefficient of v^j.
  std::vector<UniPoly> as_poly_in(Var v) const;
  BiPoly map_coeffs(const FieldCtx& target, const std::function<FieldElement(const FieldElement&)>& fn) const;

  std::string to_string() const;
  friend bool operator==(const BiPoly& a, const BiPoly& b) { return a.ctx_ == b.ctx_ && a.terms_ == b.terms_; }

 private:
  void recompute_degrees();

  const FieldCtx* ctx_;
  std::map<Key, FieldElement> terms_;
  int deg_x_ = -1;
  int deg_y_ = -1;
};

struct Specialization {
  UniPoly poly;
  /// Expected degree minus actual degree; each unit is a fiber point at
  /// infinity.
  unsigned degree_drop;
};

/// Substitutes `value` for `var`; the result is a polynomial in the other
/// variable.
Specialization specialize(const BiPoly& f, Var var, const FieldElement& value);

/// Squarefreeness in K[x, y]: no repeated factor, including univariate ones.
bool bi_is_squarefree(const BiPoly& f);
/// gcd over K[other] of the coefficients of f viewed in K[other][v].
UniPoly content(const BiPoly& f, Var v);

/// Contents of a `.bipoly` file. Integer tables (header prime 0) keep their
/// decimal coefficients until they are reduced for a concrete prime.
struct BiPolyFile {
  Limb p = 0;
  unsigned k = 1;
  int dx = 0;
  int dy = 0;
  std::vector<std::tuple<unsigned, unsigned, std::string>> terms;

  bool integer_table() const { return p == 0; }
  /// Builds the polynomial; `prime` is required for integer tables and must
  /// match the header otherwise (0 means "use the header").
  BiPoly instantiate(Limb prime = 0) const;
};

BiPolyFile parse_bipoly(std::istream& in);
BiPolyFile read_bipoly_file(const std::string& path);
void write_bipoly(std::ostream& out, const BiPoly& f);

}  // namespace corrdyn

#endif  // CORRDYN_POLYRING_HPP
