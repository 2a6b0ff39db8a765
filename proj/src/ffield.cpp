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

#include "corrdyn/ffield.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>

#include "corrdyn/error.hpp"
#include "corrdyn/polyring.hpp"

namespace corrdyn {

namespace {

std::atomic<std::uint64_t> g_enumeration_bound{std::uint64_t{1} << 24};

Limb mulmod(Limb a, Limb b, Limb p) { return static_cast<Limb>((static_cast<unsigned __int128>(a) * b) % p); }

Limb powmod(Limb a, std::uint64_t e, Limb p) {
  Limb r = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

Limb invmod(Limb a, Limb p) { return powmod(a, p - 2, p); }

}  // namespace

std::uint64_t enumeration_bound() { return g_enumeration_bound.load(); }
void set_enumeration_bound(std::uint64_t bound) { g_enumeration_bound.store(bound); }

bool is_prime(Limb n) {
  if (n < 2) return false;
  for (Limb d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotPrime: return "NotPrime";
    case ErrorCode::DegreeZero: return "DegreeZero";
    case ErrorCode::BoundExceeded: return "BoundExceeded";
    case ErrorCode::CtxMismatch: return "CtxMismatch";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ZeroPolynomial: return "ZeroPolynomial";
    case ErrorCode::ZeroModulus: return "ZeroModulus";
    case ErrorCode::DegenerateComponent: return "DegenerateComponent";
    case ErrorCode::NotOnCurve: return "NotOnCurve";
    case ErrorCode::SmallCharacteristic: return "SmallCharacteristic";
    case ErrorCode::SingularCurve: return "SingularCurve";
    case ErrorCode::ExcludedJ: return "ExcludedJ";
    case ErrorCode::Truncated: return "Truncated";
    case ErrorCode::UnsupportedRamified: return "UnsupportedRamified";
    case ErrorCode::BudgetTooSmall: return "BudgetTooSmall";
    case ErrorCode::NotSelfCorrespondence: return "NotSelfCorrespondence";
    case ErrorCode::NotSymmetricClump: return "NotSymmetricClump";
    case ErrorCode::TypeMismatch: return "TypeMismatch";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

// ---------------------------------------------------------------------------
// FieldCtx

FieldCtx::FieldCtx(Limb p, unsigned k, std::vector<Limb> modulus)
    : p_(p), k_(k), modulus_(std::move(modulus)) {
  std::uint64_t s = 1;
  for (unsigned i = 0; i < k; ++i) {
    if (s > UINT64_MAX / p) {
      s = UINT64_MAX;
      break;
    }
    s *= p;
  }
  size_ = s;
}

bool FieldCtx::enumerable() const { return size_ != UINT64_MAX && size_ <= enumeration_bound(); }

FieldElement FieldCtx::zero() const { return FieldElement(this, Coeffs(k_, 0)); }

FieldElement FieldCtx::one() const {
  Coeffs c(k_, 0);
  c[0] = 1;
  return FieldElement(this, std::move(c));
}

FieldElement FieldCtx::from_int(std::int64_t value) const {
  Coeffs c(k_, 0);
  auto m = static_cast<std::int64_t>(p_);
  c[0] = static_cast<Limb>(((value % m) + m) % m);
  return FieldElement(this, std::move(c));
}

FieldElement FieldCtx::from_coeffs(std::span<const Limb> coeffs) const {
  Coeffs c(k_, 0);
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (i < k_) {
      c[i] = coeffs[i] % p_;
    } else if (coeffs[i] % p_ != 0) {
      throw Error(ErrorCode::ParseError, "coefficient vector longer than extension degree");
    }
  }
  return FieldElement(this, std::move(c));
}

FieldElement FieldCtx::generator() const {
  if (k_ == 1) return one();
  Coeffs c(k_, 0);
  c[1] = 1;
  return FieldElement(this, std::move(c));
}

FieldElement FieldCtx::element_at(std::uint64_t index) const {
  Coeffs c(k_, 0);
  for (unsigned i = 0; i < k_; ++i) {
    c[i] = index % p_;
    index /= p_;
  }
  return FieldElement(this, std::move(c));
}

std::string FieldCtx::name() const {
  std::ostringstream os;
  os << "F_" << p_;
  if (k_ > 1) os << "^" << k_;
  return os.str();
}

// acc holds a product of length <= 2k-1 with entries already reduced mod p.
// acc holds unreduced sums of products (each term < p^2 < 2^62).
void FieldCtx::reduce_product(std::span<unsigned __int128> acc, Coeffs& out) const {
  for (std::size_t deg = acc.size(); deg-- > k_;) {
    const Limb c = static_cast<Limb>(acc[deg] % p_);
    if (c == 0) continue;
    const std::size_t base = deg - k_;
    const Limb neg = p_ - c;
    for (unsigned i = 0; i < k_; ++i) acc[base + i] += static_cast<unsigned __int128>(neg) * modulus_[i];
  }
  out.resize(k_);
  for (unsigned i = 0; i < k_; ++i) out[i] = i < acc.size() ? static_cast<Limb>(acc[i] % p_) : 0;
}

namespace {

struct Registry {
  std::mutex mu;
  std::map<std::pair<Limb, unsigned>, FieldPtr> fields;
};

Registry& registry() {
  static Registry r;
  return r;
}

}  // namespace

FieldPtr make_field(Limb p, unsigned k) {
  if (k == 0) throw Error(ErrorCode::DegreeZero, "extension degree must be >= 1");
  if (!is_prime(p)) throw Error(ErrorCode::NotPrime, std::to_string(p) + " is not prime");
  if (p >= (Limb{1} << 31)) throw Error(ErrorCode::NotPrime, "primes must be below 2^31");
  {
    std::lock_guard lock(registry().mu);
    auto it = registry().fields.find({p, k});
    if (it != registry().fields.end()) return it->second;
  }
  std::vector<Limb> modulus;
  if (k == 1) {
    modulus = {0, 1};
  } else {
    modulus = irreducible_modulus_coeffs(p, k);
  }
  std::shared_ptr<FieldCtx> ctx(new FieldCtx(p, k, std::move(modulus)));
  // Frobenius matrix: row j = t^(j p).
  ctx->frobenius_rows_.resize(k);
  if (k == 1) {
    ctx->frobenius_rows_[0] = Coeffs{1};
  } else {
    FieldElement tp = ctx->generator().pow(p);
    FieldElement cur = ctx->one();
    for (unsigned j = 0; j < k; ++j) {
      ctx->frobenius_rows_[j] = Coeffs(cur.coeffs().begin(), cur.coeffs().end());
      cur *= tp;
    }
  }
  std::lock_guard lock(registry().mu);
  auto [it, inserted] = registry().fields.emplace(std::make_pair(p, k), std::move(ctx));
  return it->second;
}

// ---------------------------------------------------------------------------
// FieldElement

void FieldElement::check_ctx(const FieldElement& o) const {
  if (ctx_ != o.ctx_ || ctx_ == nullptr)
    throw Error(ErrorCode::CtxMismatch, "operands live in different fields");
}

bool FieldElement::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](Limb v) { return v == 0; });
}

bool FieldElement::is_one() const {
  if (c_.empty() || c_[0] != 1) return false;
  return std::all_of(c_.begin() + 1, c_.end(), [](Limb v) { return v == 0; });
}

FieldElement FieldElement::operator-() const {
  FieldElement r = *this;
  const Limb p = ctx_->p();
  for (auto& v : r.c_) v = v == 0 ? 0 : p - v;
  return r;
}

FieldElement& FieldElement::operator+=(const FieldElement& o) {
  check_ctx(o);
  const Limb p = ctx_->p();
  for (std::size_t i = 0; i < c_.size(); ++i) {
    c_[i] += o.c_[i];
    if (c_[i] >= p) c_[i] -= p;
  }
  return *this;
}

FieldElement& FieldElement::operator-=(const FieldElement& o) {
  check_ctx(o);
  const Limb p = ctx_->p();
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] = c_[i] >= o.c_[i] ? c_[i] - o.c_[i] : c_[i] + p - o.c_[i];
  return *this;
}

FieldElement& FieldElement::operator*=(const FieldElement& o) {
  check_ctx(o);
  const Limb p = ctx_->p();
  const unsigned k = ctx_->k();
  if (k == 1) {
    c_[0] = mulmod(c_[0], o.c_[0], p);
    return *this;
  }
  thread_local std::vector<unsigned __int128> acc;
  acc.assign(2 * k - 1, 0);
  for (unsigned i = 0; i < k; ++i) {
    const Limb a = c_[i];
    if (a == 0) continue;
    for (unsigned j = 0; j < k; ++j) acc[i + j] += static_cast<unsigned __int128>(a) * o.c_[j];
  }
  ctx_->reduce_product(std::span<unsigned __int128>(acc.data(), acc.size()), c_);
  return *this;
}

FieldElement& FieldElement::operator/=(const FieldElement& o) {
  check_ctx(o);
  return *this *= o.inverse();
}

FieldElement FieldElement::scaled(Limb s) const {
  FieldElement r = *this;
  const Limb p = ctx_->p();
  s %= p;
  for (auto& v : r.c_) v = mulmod(v, s, p);
  return r;
}

FieldElement FieldElement::inverse() const {
  if (is_zero()) throw Error(ErrorCode::DivisionByZero, "inverse of zero");
  const Limb p = ctx_->p();
  if (ctx_->k() == 1) return FieldElement(ctx_, Coeffs{invmod(c_[0], p)});
  // a^{-1} = (a^p a^{p^2} ... a^{p^{k-1}}) / N(a)
  FieldElement conj_prod = ctx_->one();
  FieldElement cur = *this;
  for (unsigned i = 1; i < ctx_->k(); ++i) {
    cur = cur.frobenius(1);
    conj_prod *= cur;
  }
  FieldElement n = conj_prod * *this;  // lies in F_p
  return conj_prod.scaled(invmod(n.c_[0], p));
}

FieldElement FieldElement::pow(std::uint64_t e) const {
  FieldElement r = ctx_->one();
  FieldElement b = *this;
  while (e) {
    if (e & 1) r *= b;
    e >>= 1;
    if (e) b *= b;
  }
  return r;
}

FieldElement FieldElement::frobenius(unsigned i) const {
  const unsigned k = ctx_->k();
  if (k == 1) return *this;
  i %= k;
  FieldElement cur = *this;
  const Limb p = ctx_->p();
  for (unsigned it = 0; it < i; ++it) {
    thread_local std::vector<unsigned __int128> acc;
    acc.assign(k, 0);
    for (unsigned j = 0; j < k; ++j) {
      const Limb c = cur.c_[j];
      if (c == 0) continue;
      const auto& row = ctx_->frobenius_rows_[j];
      for (unsigned l = 0; l < k; ++l) acc[l] += static_cast<unsigned __int128>(c) * row[l];
    }
    for (unsigned l = 0; l < k; ++l) cur.c_[l] = static_cast<Limb>(acc[l] % p);
  }
  return cur;
}

Limb FieldElement::norm() const {
  FieldElement prod = *this;
  FieldElement cur = *this;
  for (unsigned i = 1; i < ctx_->k(); ++i) {
    cur = cur.frobenius(1);
    prod *= cur;
  }
  return prod.c_[0];
}

bool FieldElement::in_subfield(unsigned m) const {
  if (m == 0 || ctx_->k() % m != 0) return false;
  return frobenius(m) == *this;
}

unsigned FieldElement::min_degree() const {
  const unsigned k = ctx_->k();
  for (unsigned m = 1; m <= k; ++m)
    if (k % m == 0 && in_subfield(m)) return m;
  return k;
}

std::uint64_t FieldElement::index() const {
  if (ctx_->size() == UINT64_MAX) throw Error(ErrorCode::BoundExceeded, "field too large to index");
  std::uint64_t idx = 0;
  for (std::size_t i = c_.size(); i-- > 0;) idx = idx * ctx_->p() + c_[i];
  return idx;
}

std::string FieldElement::to_string() const {
  std::ostringstream os;
  if (ctx_->k() == 1) {
    os << c_[0] << "@" << ctx_->p();
  } else {
    os << "[";
    for (std::size_t i = 0; i < c_.size(); ++i) os << (i ? "," : "") << c_[i];
    os << "]@" << ctx_->p() << "^" << ctx_->k();
  }
  return os.str();
}

std::strong_ordering operator<=>(const FieldElement& a, const FieldElement& b) {
  a.check_ctx(b);
  for (std::size_t i = a.c_.size(); i-- > 0;) {
    if (a.c_[i] != b.c_[i]) return a.c_[i] <=> b.c_[i];
  }
  return std::strong_ordering::equal;
}

std::size_t FieldElementHash::operator()(const FieldElement& e) const noexcept {
  std::size_t h = reinterpret_cast<std::uintptr_t>(e.ctx_ptr());
  for (Limb v : e.coeffs()) h = h * 1000003u ^ static_cast<std::size_t>(v);
  return h;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

Limb parse_uint(std::string_view s) {
  Limb v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw Error(ErrorCode::ParseError, "bad integer '" + std::string(s) + "'");
  return v;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Limb reduce_decimal(std::string_view digits, Limb p) {
  digits = trim(digits);
  bool neg = false;
  if (!digits.empty() && (digits.front() == '-' || digits.front() == '+')) {
    neg = digits.front() == '-';
    digits.remove_prefix(1);
  }
  if (digits.empty()) throw Error(ErrorCode::ParseError, "empty integer");
  Limb r = 0;
  for (char ch : digits) {
    if (ch < '0' || ch > '9') throw Error(ErrorCode::ParseError, "bad digit in '" + std::string(digits) + "'");
    r = (r * 10 + static_cast<Limb>(ch - '0')) % p;
  }
  return neg && r ? p - r : r;
}

FieldElement parse_element(std::string_view text) {
  text = trim(text);
  const auto at = text.find('@');
  if (at == std::string_view::npos) throw Error(ErrorCode::ParseError, "missing '@' in '" + std::string(text) + "'");
  std::string_view body = text.substr(0, at);
  std::string_view field = text.substr(at + 1);
  Limb p = 0;
  unsigned k = 1;
  const auto caret = field.find('^');
  if (caret == std::string_view::npos) {
    p = parse_uint(field);
  } else {
    p = parse_uint(field.substr(0, caret));
    k = static_cast<unsigned>(parse_uint(field.substr(caret + 1)));
  }
  FieldPtr ctx = make_field(p, k);
  std::vector<Limb> coeffs;
  if (!body.empty() && body.front() == '[') {
    if (body.back() != ']') throw Error(ErrorCode::ParseError, "unterminated coefficient list");
    body = body.substr(1, body.size() - 2);
    while (true) {
      const auto comma = body.find(',');
      coeffs.push_back(parse_uint(trim(body.substr(0, comma))));
      if (comma == std::string_view::npos) break;
      body.remove_prefix(comma + 1);
    }
    if (coeffs.size() != k) throw Error(ErrorCode::ParseError, "coefficient count does not match extension degree");
  } else {
    if (caret != std::string_view::npos && k != 1)
      throw Error(ErrorCode::ParseError, "scalar shorthand only allowed for prime fields");
    coeffs.push_back(parse_uint(body));
  }
  for (Limb c : coeffs)
    if (c >= p) throw Error(ErrorCode::ParseError, "coefficient not reduced mod p");
  return ctx->from_coeffs(coeffs);
}

FieldElement parse_element_in(const FieldCtx& ctx, std::string_view text) {
  text = trim(text);
  if (text.find('@') != std::string_view::npos) {
    FieldElement e = parse_element(text);
    if (e.ctx_ptr() != &ctx) throw Error(ErrorCode::CtxMismatch, "element '" + std::string(text) + "' is not in " + ctx.name());
    return e;
  }
  return ctx.from_coeffs(std::vector<Limb>{reduce_decimal(text, ctx.p())});
}

FieldElement arith(const FieldElement& a, const FieldElement& b, ArithOp op) {
  switch (op) {
    case ArithOp::Add: return a + b;
    case ArithOp::Sub: return a - b;
    case ArithOp::Mul: return a * b;
    case ArithOp::Div:
      if (b.valid() && b.is_zero()) throw Error(ErrorCode::DivisionByZero, "division by zero");
      return a / b;
  }
  return a;
}

std::vector<FieldElement> enumerate(const FieldCtx& ctx) {
  if (!ctx.enumerable())
    throw Error(ErrorCode::BoundExceeded, ctx.name() + " exceeds the enumeration bound");
  std::vector<FieldElement> out;
  out.reserve(ctx.size());
  for (std::uint64_t i = 0; i < ctx.size(); ++i) out.push_back(ctx.element_at(i));
  return out;
}

}  // namespace corrdyn
