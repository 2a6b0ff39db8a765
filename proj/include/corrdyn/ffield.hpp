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

#ifndef CORRDYN_FFIELD_HPP
#define CORRDYN_FFIELD_HPP

#include <compare>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/container/small_vector.hpp>

namespace corrdyn {

using Limb = std::uint64_t;
using Coeffs = boost::container::small_vector<Limb, 4>;

class FieldCtx;
class FieldElement;
using FieldPtr = std::shared_ptr<const FieldCtx>;

/// Process-wide cap on p^k for operations that enumerate a whole field.
/// Defaults to 2^24.
std::uint64_t enumeration_bound();
void set_enumeration_bound(std::uint64_t bound);

bool is_prime(Limb n);

/// F_{p^k} = F_p[t]/(modulus). Contexts are interned: two calls to
/// make_field with the same (p, k) return the same object, so elements can be
/// compared by context identity. Immutable after construction.
class FieldCtx {
 public:
  Limb p() const { return p_; }
  unsigned k() const { return k_; }
  /// Monic, low-degree-first, length k + 1. For k == 1 this is t (modulus
  /// coefficients {0, 1}); prime-field arithmetic never consults it.
  const std::vector<Limb>& modulus() const { return modulus_; }

  /// p^k, saturating at UINT64_MAX.
  std::uint64_t size() const { return size_; }
  bool enumerable() const;

  FieldElement zero() const;
  FieldElement one() const;
  FieldElement from_int(std::int64_t value) const;
  FieldElement from_coeffs(std::span<const Limb> coeffs) const;
  /// The class of t; equals one() in a prime field.
  FieldElement generator() const;
  /// Element number `index` in canonical order (c0 varies fastest).
  FieldElement element_at(std::uint64_t index) const;

  std::string name() const;

 private:
  friend FieldPtr make_field(Limb p, unsigned k);
  friend class FieldElement;
  FieldCtx(Limb p, unsigned k, std::vector<Limb> modulus);

  void reduce_product(std::span<unsigned __int128> acc, Coeffs& out) const;

  Limb p_;
  unsigned k_;
  std::vector<Limb> modulus_;
  std::uint64_t size_;
  // Row j holds the coordinates of t^(j*p); Frobenius is the linear map
  // sending t^j to that row.
  std::vector<Coeffs> frobenius_rows_;
};

/// Builds (or returns the interned) F_{p^k} with its canonical modulus.
/// Throws NotPrime, DegreeZero. Fields larger than the enumeration bound are
/// still usable; only enumerate() and friends refuse them.
FieldPtr make_field(Limb p, unsigned k);

class FieldElement {
 public:
  FieldElement() = default;
  FieldElement(const FieldCtx* ctx, Coeffs coeffs) : ctx_(ctx), c_(std::move(coeffs)) {}

  const FieldCtx& ctx() const { return *ctx_; }
  const FieldCtx* ctx_ptr() const { return ctx_; }
  bool valid() const { return ctx_ != nullptr; }
  std::span<const Limb> coeffs() const { return {c_.data(), c_.size()}; }

  bool is_zero() const;
  bool is_one() const;

  FieldElement operator-() const;
  FieldElement& operator+=(const FieldElement& o);
  FieldElement& operator-=(const FieldElement& o);
  FieldElement& operator*=(const FieldElement& o);
  FieldElement& operator/=(const FieldElement& o);
  friend FieldElement operator+(FieldElement a, const FieldElement& b) { return a += b; }
  friend FieldElement operator-(FieldElement a, const FieldElement& b) { return a -= b; }
  friend FieldElement operator*(FieldElement a, const FieldElement& b) { return a *= b; }
  friend FieldElement operator/(FieldElement a, const FieldElement& b) { return a /= b; }

  FieldElement scaled(Limb s) const;
  FieldElement inverse() const;
  FieldElement pow(std::uint64_t e) const;
  /// a^(p^i).
  FieldElement frobenius(unsigned i = 1) const;
  /// Norm down to F_p, returned as an integer in [0, p).
  Limb norm() const;
  /// True iff a lies in the subfield F_{p^m}; m must divide k.
  bool in_subfield(unsigned m) const;
  /// Smallest divisor m of k with a in F_{p^m}.
  unsigned min_degree() const;

  /// Position in canonical order: sum c_i p^i. Requires p^k < 2^64.
  std::uint64_t index() const;

  /// `[c0,...,c_{k-1}]@p^k`, or `c@p` in a prime field.
  std::string to_string() const;

  friend bool operator==(const FieldElement& a, const FieldElement& b) {
    return a.ctx_ == b.ctx_ && a.c_ == b.c_;
  }
  /// Canonical order: c_{k-1} most significant. Contexts must agree.
  friend std::strong_ordering operator<=>(const FieldElement& a, const FieldElement& b);

 private:
  void check_ctx(const FieldElement& o) const;

  const FieldCtx* ctx_ = nullptr;
  Coeffs c_;
};

/// Parses the text encoding and interns the field it names.
FieldElement parse_element(std::string_view text);
/// Parses a coefficient in `ctx`: the full encoding (field must match) or a
/// bare signed decimal integer, reduced mod p.
FieldElement parse_element_in(const FieldCtx& ctx, std::string_view text);

enum class ArithOp { Add, Sub, Mul, Div };
FieldElement arith(const FieldElement& a, const FieldElement& b, ArithOp op);

/// All p^k elements in canonical order. Throws BoundExceeded.
std::vector<FieldElement> enumerate(const FieldCtx& ctx);

/// Reduces a signed decimal integer string modulo p.
Limb reduce_decimal(std::string_view digits, Limb p);

struct FieldElementHash {
  std::size_t operator()(const FieldElement& e) const noexcept;
};

}  // namespace corrdyn

#endif  // CORRDYN_FFIELD_HPP
