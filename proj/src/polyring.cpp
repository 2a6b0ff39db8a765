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

#include "corrdyn/polyring.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "corrdyn/error.hpp"

namespace corrdyn {

// ---------------------------------------------------------------------------
// UniPoly

UniPoly::UniPoly(const FieldCtx& ctx, std::vector<FieldElement> coeffs) : ctx_(&ctx), c_(std::move(coeffs)) {
  for (const auto& c : c_)
    if (c.ctx_ptr() != ctx_) throw Error(ErrorCode::CtxMismatch, "coefficient outside polynomial field");
  normalize();
}

UniPoly UniPoly::constant(const FieldElement& c) { return UniPoly(c.ctx(), {c}); }

UniPoly UniPoly::monomial(const FieldElement& c, unsigned degree) {
  std::vector<FieldElement> v(degree + 1, c.ctx().zero());
  v[degree] = c;
  return UniPoly(c.ctx(), std::move(v));
}

UniPoly UniPoly::linear(const FieldElement& r) { return UniPoly(r.ctx(), {-r, r.ctx().one()}); }

UniPoly UniPoly::x(const FieldCtx& ctx) { return UniPoly(ctx, {ctx.zero(), ctx.one()}); }

void UniPoly::normalize() {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

void UniPoly::check_ctx(const UniPoly& o) const {
  if (ctx_ != o.ctx_) throw Error(ErrorCode::CtxMismatch, "polynomials over different fields");
}

FieldElement UniPoly::coeff(std::size_t i) const { return i < c_.size() ? c_[i] : ctx_->zero(); }

FieldElement UniPoly::lead() const { return c_.empty() ? ctx_->zero() : c_.back(); }

FieldElement UniPoly::operator()(const FieldElement& x) const {
  FieldElement acc = ctx_->zero();
  for (std::size_t i = c_.size(); i-- > 0;) {
    acc *= x;
    acc += c_[i];
  }
  return acc;
}

UniPoly UniPoly::derivative() const {
  std::vector<FieldElement> d;
  for (std::size_t i = 1; i < c_.size(); ++i) d.push_back(c_[i].scaled(i % ctx_->p()));
  return UniPoly(*ctx_, std::move(d));
}

UniPoly UniPoly::monic() const {
  if (c_.empty()) return *this;
  return scaled(c_.back().inverse());
}

UniPoly UniPoly::scaled(const FieldElement& s) const {
  UniPoly r = *this;
  for (auto& c : r.c_) c *= s;
  r.normalize();
  return r;
}

UniPoly& UniPoly::operator+=(const UniPoly& o) {
  check_ctx(o);
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), ctx_->zero());
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
  normalize();
  return *this;
}

UniPoly& UniPoly::operator-=(const UniPoly& o) {
  check_ctx(o);
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), ctx_->zero());
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
  normalize();
  return *this;
}

UniPoly operator*(const UniPoly& a, const UniPoly& b) {
  a.check_ctx(b);
  if (a.is_zero() || b.is_zero()) return UniPoly(a.ctx());
  std::vector<FieldElement> out(a.c_.size() + b.c_.size() - 1, a.ctx().zero());
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
  }
  return UniPoly(a.ctx(), std::move(out));
}

std::string UniPoly::to_string(char var) const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = c_.size(); i-- > 0;) {
    if (c_[i].is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    os << "(" << c_[i].to_string() << ")";
    if (i >= 1) os << "*" << var;
    if (i >= 2) os << "^" << i;
  }
  return os.str();
}

std::pair<UniPoly, UniPoly> divmod(const UniPoly& a, const UniPoly& b) {
  if (b.is_zero()) throw Error(ErrorCode::ZeroModulus, "division by the zero polynomial");
  if (&a.ctx() != &b.ctx()) throw Error(ErrorCode::CtxMismatch, "polynomials over different fields");
  const FieldCtx& ctx = a.ctx();
  if (a.degree() < b.degree()) return {UniPoly(ctx), a};
  std::vector<FieldElement> rem = a.coeffs();
  const auto& bc = b.coeffs();
  const bool monic = b.lead().is_one();
  const FieldElement inv = monic ? b.lead() : b.lead().inverse();
  const std::size_t db = bc.size() - 1;
  std::vector<FieldElement> quo(rem.size() - db, ctx.zero());
  for (std::size_t i = rem.size(); i-- > db;) {
    if (rem[i].is_zero()) continue;
    FieldElement q = monic ? rem[i] : rem[i] * inv;
    quo[i - db] = q;
    for (std::size_t j = 0; j <= db; ++j) rem[i - db + j] -= q * bc[j];
  }
  rem.resize(db);
  return {UniPoly(ctx, std::move(quo)), UniPoly(ctx, std::move(rem))};
}

UniPoly operator%(const UniPoly& a, const UniPoly& b) { return divmod(a, b).second; }

UniPoly gcd(const UniPoly& a, const UniPoly& b) {
  UniPoly x = a, y = b;
  while (!y.is_zero()) {
    UniPoly r = x % y;
    x = std::move(y);
    y = std::move(r);
  }
  return x.monic();
}

UniPoly powmod(const UniPoly& base, std::uint64_t e, const UniPoly& modulus) {
  // Same residues modulo the monic associate; division skips inversions.
  const UniPoly m = modulus.monic();
  UniPoly r = UniPoly::constant(base.ctx().one()) % m;
  UniPoly b = base % m;
  while (e) {
    if (e & 1) r = (r * b) % m;
    e >>= 1;
    if (e) b = (b * b) % m;
  }
  return r;
}

namespace {

// h -> h^p mod m, by composing with x^p mod m: h^p = sum frob(c_i) (x^p)^i.
class PthPower {
 public:
  explicit PthPower(const UniPoly& m) : m_(m.monic()) {
    const UniPoly xp = powmod(UniPoly::x(m.ctx()), m.ctx().p(), m_);
    pows_.push_back(UniPoly::constant(m.ctx().one()) % m_);
    for (int i = 1; i < m_.degree(); ++i) pows_.push_back((pows_.back() * xp) % m_);
  }
  UniPoly operator()(const UniPoly& h) const {
    const UniPoly r = h % m_;
    UniPoly out(r.ctx());
    for (std::size_t i = 0; i < r.coeffs().size(); ++i) {
      const FieldElement& c = r.coeffs()[i];
      if (!c.is_zero()) out += pows_[i] * UniPoly::constant(c.frobenius(1));
    }
    return out;
  }
  const UniPoly& modulus() const { return m_; }

 private:
  UniPoly m_;
  std::vector<UniPoly> pows_;
};

}  // namespace

UniPoly frobenius_powmod(const UniPoly& h, unsigned n, const UniPoly& modulus) {
  const PthPower pth(modulus);
  UniPoly r = h % pth.modulus();
  for (unsigned i = 0; i < n; ++i) r = pth(r);
  return r;
}

UniPoly uni_arith(const UniPoly& a, const UniPoly& b, UniOp op) {
  switch (op) {
    case UniOp::Add: return a + b;
    case UniOp::Mul: return a * b;
    case UniOp::Mod: return a % b;
    case UniOp::Gcd: return gcd(a, b);
  }
  return a;
}

// ---------------------------------------------------------------------------
// Roots

unsigned root_multiplicity(const UniPoly& f, const FieldElement& r) {
  if (f.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "multiplicity in the zero polynomial");
  unsigned m = 0;
  std::vector<FieldElement> c = f.coeffs();
  while (c.size() > 1) {
    // synthetic division by (x - r)
    std::vector<FieldElement> q(c.size() - 1, f.ctx().zero());
    FieldElement acc = f.ctx().zero();
    for (std::size_t i = c.size(); i-- > 1;) {
      acc = acc * r + c[i];
      q[i - 1] = acc;
    }
    FieldElement rem = acc * r + c[0];
    if (!rem.is_zero()) break;
    ++m;
    c = std::move(q);
  }
  return m;
}

std::vector<Root> roots_exhaustive(const UniPoly& f) {
  if (f.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "roots of the zero polynomial");
  const FieldCtx& ctx = f.ctx();
  if (!ctx.enumerable()) throw Error(ErrorCode::BoundExceeded, ctx.name() + " too large for exhaustive root scan");
  std::vector<Root> out;
  if (f.degree() <= 0) return out;
  unsigned found = 0;
  for (std::uint64_t i = 0; i < ctx.size() && found < static_cast<unsigned>(f.degree()); ++i) {
    FieldElement a = ctx.element_at(i);
    if (f(a).is_zero()) {
      unsigned m = root_multiplicity(f, a);
      out.push_back({a, m});
      found += m;
    }
  }
  return out;
}

namespace {

// Deterministic trial polynomials for equal-degree splitting. Odd p: x^e + c
// with c running through the field in canonical order. p = 2: c x^e with c
// nonzero, since the absolute trace is blind to additive constants.
UniPoly trial_poly(const FieldCtx& ctx, std::uint64_t n) {
  const std::uint64_t per = std::min<std::uint64_t>(ctx.size(), 1024);
  if (ctx.p() == 2) {
    const unsigned e = static_cast<unsigned>(1 + n / (per - 1));
    return UniPoly::monomial(ctx.element_at(1 + n % (per - 1)), e);
  }
  // Shifting by the generator keeps the trials useful when every root lies
  // in a proper subfield (prime-field shifts are all squares there).
  const std::uint64_t per_p = std::min<std::uint64_t>(ctx.p(), 1024);
  const unsigned e = static_cast<unsigned>(1 + n / per_p);
  FieldElement c = ctx.element_at(n % per_p);
  if (ctx.k() > 1) c += ctx.generator();
  return UniPoly::monomial(ctx.one(), e) + UniPoly::constant(c);
}

// Splits a monic squarefree g whose irreducible factors all have degree r.
void equal_degree_split(const UniPoly& g, unsigned r, std::vector<UniPoly>& out) {
  if (g.degree() <= static_cast<int>(r)) {
    if (g.degree() > 0) out.push_back(g);
    return;
  }
  const FieldCtx& ctx = g.ctx();
  const Limb p = ctx.p();
  const unsigned n_frob = ctx.k() * r;
  const PthPower pth(g);
  for (std::uint64_t trial = 0;; ++trial) {
    UniPoly h = trial_poly(ctx, trial) % g;
    if (h.is_constant()) continue;
    UniPoly w(ctx);
    if (p == 2) {
      // absolute trace of h in F_{2^(k r)}
      UniPoly cur = h;
      w = h;
      for (unsigned i = 1; i < n_frob; ++i) {
        cur = (cur * cur) % g;
        w += cur;
      }
    } else {
      // h^((q^r - 1)/2) = (h h^p ... h^(p^(N-1)))^((p-1)/2)
      UniPoly prod = h;
      UniPoly cur = h;
      for (unsigned i = 1; i < n_frob; ++i) {
        cur = pth(cur);
        prod = (prod * cur) % g;
      }
      w = powmod(prod, (p - 1) / 2, g) - UniPoly::constant(ctx.one());
    }
    UniPoly d = gcd(w, g);
    if (d.degree() > 0 && d.degree() < g.degree()) {
      equal_degree_split(d, r, out);
      equal_degree_split(divmod(g, d).first.monic(), r, out);
      return;
    }
    if (trial > 100000) throw Error(ErrorCode::BoundExceeded, "equal-degree splitting did not converge");
  }
}

}  // namespace

std::vector<Root> roots_by_splitting(const UniPoly& f) {
  if (f.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "roots of the zero polynomial");
  const FieldCtx& ctx = f.ctx();
  std::vector<Root> out;
  if (f.degree() <= 0) return out;
  UniPoly m = f.monic();
  UniPoly xq = frobenius_powmod(UniPoly::x(ctx), ctx.k(), m);
  UniPoly lin = gcd(xq - UniPoly::x(ctx), m);
  std::vector<UniPoly> factors;
  equal_degree_split(lin, 1, factors);
  for (const auto& fac : factors) {
    FieldElement r = -fac.coeff(0);
    out.push_back({r, root_multiplicity(f, r)});
  }
  std::sort(out.begin(), out.end(), [](const Root& a, const Root& b) { return a.value < b.value; });
  return out;
}

std::vector<Root> roots(const UniPoly& f) {
  if (f.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "roots of the zero polynomial");
  if (f.degree() <= 0) return {};
  if (f.degree() == 1) {
    FieldElement r = -f.coeff(0) / f.coeff(1);
    return {{r, 1}};
  }
  if (f.ctx().size() <= (std::uint64_t{1} << 16)) return roots_exhaustive(f);
  return roots_by_splitting(f);
}

bool is_squarefree(const UniPoly& f) {
  if (f.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "squarefreeness of the zero polynomial");
  if (f.degree() <= 0) return true;
  return gcd(f, f.derivative()).degree() == 0;
}

namespace {

// g(x^p) -> g'(x) with g'(x)^p = g(x^p)
UniPoly pth_root(const UniPoly& f) {
  const FieldCtx& ctx = f.ctx();
  const Limb p = ctx.p();
  std::vector<FieldElement> c;
  for (std::size_t i = 0; i < f.coeffs().size(); i += p) c.push_back(f.coeffs()[i].frobenius(ctx.k() - 1));
  return UniPoly(ctx, std::move(c));
}

}  // namespace

UniPoly radical(const UniPoly& f) {
  if (f.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "radical of the zero polynomial");
  if (f.degree() <= 0) return UniPoly::constant(f.ctx().one());
  UniPoly d = f.derivative();
  if (d.is_zero()) return radical(pth_root(f.monic()));
  UniPoly g = gcd(f, d);
  UniPoly r = divmod(f.monic(), g).first;
  UniPoly rest = g;
  while (true) {
    UniPoly c = gcd(rest, r);
    if (c.degree() <= 0) break;
    rest = divmod(rest, c).first;
  }
  if (rest.degree() <= 0) return r.monic();
  return (r * radical(rest)).monic();
}

std::vector<DegreeFactor> distinct_degree_factorization(const UniPoly& f) {
  if (f.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "factorization of the zero polynomial");
  const FieldCtx& ctx = f.ctx();
  std::vector<DegreeFactor> out;
  UniPoly rest = f.monic();
  UniPoly h = UniPoly::x(ctx);
  const UniPoly x = UniPoly::x(ctx);
  for (unsigned i = 1; rest.degree() >= 2 * static_cast<int>(i); ++i) {
    h = frobenius_powmod(h, ctx.k(), rest);
    UniPoly g = gcd(h - x, rest);
    if (g.degree() > 0) {
      out.push_back({i, g});
      rest = divmod(rest, g).first;
      h = h % rest;
    }
  }
  if (rest.degree() > 0) out.push_back({static_cast<unsigned>(rest.degree()), rest});
  return out;
}

unsigned splitting_degree(const UniPoly& f) {
  if (f.degree() <= 1) return 1;
  unsigned l = 1;
  for (const auto& df : distinct_degree_factorization(radical(f))) l = std::lcm(l, df.degree);
  return l;
}

bool is_irreducible(const UniPoly& f) {
  if (f.degree() <= 0) return false;
  if (f.degree() == 1) return true;
  const FieldCtx& ctx = f.ctx();
  const UniPoly m = f.monic();
  const UniPoly x = UniPoly::x(ctx);
  const unsigned n = static_cast<unsigned>(f.degree());
  UniPoly h = x;
  for (unsigned i = 1; i <= n / 2; ++i) {
    h = frobenius_powmod(h, ctx.k(), m);
    if (gcd(h - x, m).degree() != 0) return false;
  }
  for (unsigned i = n / 2; i < n; ++i) h = frobenius_powmod(h, ctx.k(), m);
  return (h - x).is_zero();
}

std::vector<Limb> irreducible_modulus_coeffs(Limb p, unsigned k) {
  if (k == 1) return {0, 1};
  FieldPtr fp = make_field(p, 1);
  // Tuples (c0, ..., c_{k-1}) in lexicographic order with c0 most
  // significant; c0 = 0 is skipped since t then divides the candidate.
  std::vector<Limb> c(k, 0);
  c[0] = 1;
  while (true) {
    std::vector<FieldElement> coeffs;
    for (Limb v : c) coeffs.push_back(fp->from_int(static_cast<std::int64_t>(v)));
    coeffs.push_back(fp->one());
    UniPoly cand(*fp, coeffs);
    if (is_irreducible(cand)) {
      std::vector<Limb> out = c;
      out.push_back(1);
      return out;
    }
    // increment: last coordinate is least significant
    std::size_t i = k;
    while (i-- > 0) {
      if (++c[i] < p) break;
      c[i] = 0;
    }
  }
}

UniPoly irreducible_modulus(Limb p, unsigned k) {
  FieldPtr fp = make_field(p, 1);
  std::vector<FieldElement> coeffs;
  for (Limb v : irreducible_modulus_coeffs(p, k)) coeffs.push_back(fp->from_int(static_cast<std::int64_t>(v)));
  return UniPoly(*fp, std::move(coeffs));
}

// ---------------------------------------------------------------------------
// BiPoly

void BiPoly::recompute_degrees() {
  deg_x_ = deg_y_ = -1;
  for (const auto& [key, c] : terms_) {
    deg_x_ = std::max(deg_x_, static_cast<int>(key.first));
    deg_y_ = std::max(deg_y_, static_cast<int>(key.second));
  }
}

void BiPoly::set(unsigned i, unsigned j, const FieldElement& c) {
  if (c.ctx_ptr() != ctx_) throw Error(ErrorCode::CtxMismatch, "coefficient outside polynomial field");
  if (c.is_zero()) {
    terms_.erase({i, j});
  } else {
    terms_[{i, j}] = c;
  }
  recompute_degrees();
}

void BiPoly::add(unsigned i, unsigned j, const FieldElement& c) {
  auto it = terms_.find({i, j});
  set(i, j, it == terms_.end() ? c : it->second + c);
}

FieldElement BiPoly::coeff(unsigned i, unsigned j) const {
  auto it = terms_.find({i, j});
  return it == terms_.end() ? ctx_->zero() : it->second;
}

FieldElement BiPoly::operator()(const FieldElement& x, const FieldElement& y) const {
  std::vector<FieldElement> xp{ctx_->one()}, yp{ctx_->one()};
  for (int i = 0; i < deg_x_; ++i) xp.push_back(xp.back() * x);
  for (int j = 0; j < deg_y_; ++j) yp.push_back(yp.back() * y);
  FieldElement acc = ctx_->zero();
  for (const auto& [key, c] : terms_) acc += c * xp[key.first] * yp[key.second];
  return acc;
}

BiPoly BiPoly::transpose() const {
  BiPoly r(*ctx_);
  for (const auto& [key, c] : terms_) r.terms_[{key.second, key.first}] = c;
  r.recompute_degrees();
  return r;
}

BiPoly BiPoly::derivative(Var v) const {
  BiPoly r(*ctx_);
  for (const auto& [key, c] : terms_) {
    const unsigned e = v == Var::X ? key.first : key.second;
    if (e == 0) continue;
    FieldElement d = c.scaled(e % ctx_->p());
    if (d.is_zero()) continue;
    if (v == Var::X) {
      r.terms_[{key.first - 1, key.second}] = d;
    } else {
      r.terms_[{key.first, key.second - 1}] = d;
    }
  }
  r.recompute_degrees();
  return r;
}

BiPoly BiPoly::reversed(Var v) const {
  BiPoly r(*ctx_);
  for (const auto& [key, c] : terms_) {
    if (v == Var::X) {
      r.terms_[{static_cast<unsigned>(deg_x_) - key.first, key.second}] = c;
    } else {
      r.terms_[{key.first, static_cast<unsigned>(deg_y_) - key.second}] = c;
    }
  }
  r.recompute_degrees();
  return r;
}

namespace {

std::vector<std::vector<Limb>> binomials_mod(unsigned n, Limb p) {
  std::vector<std::vector<Limb>> c(n + 1);
  for (unsigned i = 0; i <= n; ++i) {
    c[i].assign(i + 1, 1);
    for (unsigned j = 1; j < i; ++j) c[i][j] = (c[i - 1][j - 1] + c[i - 1][j]) % p;
  }
  return c;
}

}  // namespace

BiPoly BiPoly::shifted(const FieldElement& x0, const FieldElement& y0) const {
  if (terms_.empty()) return *this;
  const auto binom = binomials_mod(static_cast<unsigned>(std::max(deg_x_, deg_y_)), ctx_->p());
  std::vector<FieldElement> xp{ctx_->one()}, yp{ctx_->one()};
  for (int i = 0; i < deg_x_; ++i) xp.push_back(xp.back() * x0);
  for (int j = 0; j < deg_y_; ++j) yp.push_back(yp.back() * y0);
  std::map<Key, FieldElement> acc;
  for (const auto& [key, c] : terms_) {
    const auto [i, j] = key;
    for (unsigned s = 0; s <= i; ++s) {
      const FieldElement cx = (c * xp[i - s]).scaled(binom[i][s]);
      if (cx.is_zero()) continue;
      for (unsigned t = 0; t <= j; ++t) {
        const FieldElement v = (cx * yp[j - t]).scaled(binom[j][t]);
        if (v.is_zero()) continue;
        auto it = acc.find({s, t});
        if (it == acc.end()) {
          acc.emplace(Key{s, t}, v);
        } else {
          it->second += v;
        }
      }
    }
  }
  BiPoly r(*ctx_);
  for (auto& [key, c] : acc)
    if (!c.is_zero()) r.terms_.emplace(key, std::move(c));
  r.recompute_degrees();
  return r;
}

std::vector<UniPoly> BiPoly::as_poly_in(Var v) const {
  const int deg = v == Var::X ? deg_x_ : deg_y_;
  const int other = v == Var::X ? deg_y_ : deg_x_;
  if (deg < 0) return {};
  std::vector<std::vector<FieldElement>> rows(deg + 1, std::vector<FieldElement>(other + 1, ctx_->zero()));
  for (const auto& [key, c] : terms_) {
    if (v == Var::X) {
      rows[key.first][key.second] = c;
    } else {
      rows[key.second][key.first] = c;
    }
  }
  std::vector<UniPoly> out;
  for (auto& r : rows) out.emplace_back(*ctx_, std::move(r));
  return out;
}

BiPoly BiPoly::map_coeffs(const FieldCtx& target,
                          const std::function<FieldElement(const FieldElement&)>& fn) const {
  BiPoly r(target);
  for (const auto& [key, c] : terms_) {
    FieldElement v = fn(c);
    if (!v.is_zero()) r.terms_.emplace(key, std::move(v));
  }
  r.recompute_degrees();
  return r;
}

std::string BiPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    if (!first) os << " + ";
    first = false;
    os << "(" << it->second.to_string() << ")";
    if (it->first.first) os << "*x^" << it->first.first;
    if (it->first.second) os << "*y^" << it->first.second;
  }
  return os.str();
}

Specialization specialize(const BiPoly& f, Var var, const FieldElement& value) {
  const FieldCtx& ctx = f.ctx();
  if (value.ctx_ptr() != &ctx) throw Error(ErrorCode::CtxMismatch, "specialization value outside polynomial field");
  const int out_deg = var == Var::X ? f.deg_y() : f.deg_x();
  const int in_deg = var == Var::X ? f.deg_x() : f.deg_y();
  if (out_deg < 0) return {UniPoly(ctx), 0};
  std::vector<FieldElement> pw{ctx.one()};
  for (int i = 0; i < in_deg; ++i) pw.push_back(pw.back() * value);
  std::vector<FieldElement> c(out_deg + 1, ctx.zero());
  for (const auto& [key, coef] : f.terms()) {
    const unsigned sub = var == Var::X ? key.first : key.second;
    const unsigned keep = var == Var::X ? key.second : key.first;
    c[keep] += coef * pw[sub];
  }
  UniPoly poly(ctx, std::move(c));
  const int deg = poly.degree();
  return {std::move(poly), static_cast<unsigned>(out_deg - std::max(deg, 0))};
}

namespace {

// Entries of `row` are polynomials in the "other" variable; the row itself is
// a polynomial in the main variable with those coefficients.
using Row = std::vector<UniPoly>;

void trim_row(Row& r) {
  while (!r.empty() && r.back().is_zero()) r.pop_back();
}

UniPoly row_content(const Row& r, const FieldCtx& ctx) {
  UniPoly g(ctx);
  for (const auto& c : r) g = gcd(g, c);
  return g;
}

Row primitive_part(Row r, const FieldCtx& ctx) {
  trim_row(r);
  if (r.empty()) return r;
  UniPoly g = row_content(r, ctx);
  for (auto& c : r) c = divmod(c, g).first;
  return r;
}

// Pseudo-remainder of a by b in K[other][main].
Row pseudo_rem(Row a, const Row& b) {
  trim_row(a);
  const UniPoly& lb = b.back();
  const std::size_t db = b.size() - 1;
  while (a.size() > db && !a.empty()) {
    const UniPoly la = a.back();
    const std::size_t shift = a.size() - 1 - db;
    for (auto& c : a) c = c * lb;
    for (std::size_t j = 0; j <= db; ++j) a[shift + j] -= la * b[j];
    trim_row(a);
  }
  return a;
}

// Degree (in the main variable) of the primitive gcd of a and b.
int primitive_gcd_degree(Row a, Row b, const FieldCtx& ctx) {
  a = primitive_part(std::move(a), ctx);
  b = primitive_part(std::move(b), ctx);
  if (a.size() < b.size()) std::swap(a, b);
  while (!b.empty()) {
    Row r = pseudo_rem(a, b);
    a = std::move(b);
    b = primitive_part(std::move(r), ctx);
  }
  return static_cast<int>(a.size()) - 1;
}

Row to_row(const BiPoly& f, Var main) { return f.as_poly_in(main); }

}  // namespace

UniPoly content(const BiPoly& f, Var v) { return row_content(f.as_poly_in(v), f.ctx()); }

bool bi_is_squarefree(const BiPoly& f) {
  if (f.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "squarefreeness of the zero polynomial");
  const FieldCtx& ctx = f.ctx();
  // Univariate contents must themselves be squarefree.
  UniPoly cy = content(f, Var::Y);
  UniPoly cx = content(f, Var::X);
  if (cy.degree() > 0 && !is_squarefree(cy)) return false;
  if (cx.degree() > 0 && !is_squarefree(cx)) return false;
  // A repeated factor involving both variables divides f and both partials;
  // one trivial partial gcd rules it out.
  bool any = false;
  for (Var main : {Var::Y, Var::X}) {
    BiPoly d = f.derivative(main);
    if (d.is_zero()) continue;
    any = true;
    if (primitive_gcd_degree(to_row(f, main), to_row(d, main), ctx) <= 0) return true;
  }
  // Both partials vanish: f is a p-th power.
  if (!any) return f.deg_x() <= 0 && f.deg_y() <= 0;
  return false;
}

// ---------------------------------------------------------------------------
// File format

BiPoly BiPolyFile::instantiate(Limb prime) const {
  Limb use_p = p;
  if (integer_table()) {
    if (prime == 0) throw Error(ErrorCode::ParseError, "integer table needs a prime");
    use_p = prime;
  } else if (prime != 0 && prime != p) {
    throw Error(ErrorCode::ParseError, "file is over p=" + std::to_string(p) + ", not " + std::to_string(prime));
  }
  FieldPtr ctx = make_field(use_p, integer_table() ? 1 : k);
  BiPoly f(*ctx);
  for (const auto& [i, j, text] : terms) f.set(i, j, parse_element_in(*ctx, text));
  return f;
}

BiPolyFile parse_bipoly(std::istream& in) {
  BiPolyFile file;
  std::string line;
  bool header = false;
  std::set<std::pair<unsigned, unsigned>> seen;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    if (!header) {
      long long p = -1, k = -1, dx = -1, dy = -1;
      if (!(ls >> p)) continue;
      if (!(ls >> k >> dx >> dy) || p < 0 || k < 1 || dx < 0 || dy < 0)
        throw Error(ErrorCode::ParseError, "bad header on line " + std::to_string(lineno));
      file.p = static_cast<Limb>(p);
      file.k = static_cast<unsigned>(k);
      file.dx = static_cast<int>(dx);
      file.dy = static_cast<int>(dy);
      if (file.p != 0 && !is_prime(file.p)) throw Error(ErrorCode::NotPrime, "header prime " + std::to_string(p));
      header = true;
      continue;
    }
    long long i = -1, j = -1;
    std::string c;
    if (!(ls >> i)) continue;
    if (!(ls >> j >> c) || i < 0 || j < 0)
      throw Error(ErrorCode::ParseError, "bad term on line " + std::to_string(lineno));
    std::string extra;
    if (ls >> extra) throw Error(ErrorCode::ParseError, "trailing data on line " + std::to_string(lineno));
    if (i > file.dx || j > file.dy)
      throw Error(ErrorCode::ParseError, "term exceeds declared degrees on line " + std::to_string(lineno));
    if (!seen.emplace(static_cast<unsigned>(i), static_cast<unsigned>(j)).second)
      throw Error(ErrorCode::ParseError, "duplicate monomial on line " + std::to_string(lineno));
    file.terms.emplace_back(static_cast<unsigned>(i), static_cast<unsigned>(j), c);
  }
  if (!header) throw Error(ErrorCode::ParseError, "missing header");
  return file;
}

BiPolyFile read_bipoly_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  return parse_bipoly(in);
}

void write_bipoly(std::ostream& out, const BiPoly& f) {
  out << f.ctx().p() << " " << f.ctx().k() << " " << std::max(f.deg_x(), 0) << " " << std::max(f.deg_y(), 0) << "\n";
  for (const auto& [key, c] : f.terms()) out << key.first << " " << key.second << " " << c.to_string() << "\n";
}

}  // namespace corrdyn
