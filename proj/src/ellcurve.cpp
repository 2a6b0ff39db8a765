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

#include "corrdyn/ellcurve.hpp"

#include <algorithm>
#include <sstream>

#include "corrdyn/error.hpp"
#include "corrdyn/polyring.hpp"
#include "corrdyn/tower.hpp"

namespace corrdyn {

namespace {

void require_large_char(const FieldCtx& ctx) {
  if (ctx.p() < 5) throw Error(ErrorCode::SmallCharacteristic, "characteristic must be at least 5");
}

}  // namespace

WeierstrassCurve::WeierstrassCurve(FieldElement a, FieldElement b) : a_(std::move(a)), b_(std::move(b)) {
  if (a_.ctx_ptr() != b_.ctx_ptr()) throw Error(ErrorCode::CtxMismatch, "curve coefficients in different fields");
  require_large_char(a_.ctx());
  if (discriminant().is_zero()) throw Error(ErrorCode::SingularCurve, "4a^3 + 27b^2 = 0");
}

FieldElement WeierstrassCurve::discriminant() const {
  return a_ * a_ * a_.scaled(4) + b_ * b_.scaled(27);
}

FieldElement WeierstrassCurve::j_invariant() const {
  const FieldElement a3 = (a_ * a_ * a_).scaled(4);
  return a3.scaled(1728) / discriminant();
}

WeierstrassCurve curve_from_j(const FieldElement& j) {
  const FieldCtx& ctx = j.ctx();
  require_large_char(ctx);
  const FieldElement k1728 = ctx.from_int(1728);
  if (j.is_zero()) return WeierstrassCurve(ctx.zero(), ctx.one());
  if (j == k1728) return WeierstrassCurve(ctx.one(), ctx.zero());
  const FieldElement c = k1728 - j;
  return WeierstrassCurve((j * c).scaled(3), (j * c * c).scaled(2));
}

std::uint64_t count_points(const WeierstrassCurve& e) {
  const FieldCtx& ctx = e.ctx();
  if (ctx.size() > (std::uint64_t{1} << 16))
    throw Error(ErrorCode::BoundExceeded, "point counting limited to q <= 2^16");
  const auto all = enumerate(ctx);
  std::vector<unsigned char> is_square(all.size(), 0);
  for (const auto& v : all) is_square[(v * v).index()] = 1;
  std::uint64_t n = 1;
  for (const auto& x : all) {
    const FieldElement rhs = x * x * x + e.a() * x + e.b();
    if (rhs.is_zero()) {
      n += 1;
    } else if (is_square[rhs.index()]) {
      n += 2;
    }
  }
  return n;
}

FieldElement hasse_invariant(const WeierstrassCurve& e) {
  const FieldCtx& ctx = e.ctx();
  const std::size_t p = ctx.p();
  // Polynomials truncated above degree p - 1.
  using Poly = std::vector<FieldElement>;
  auto mul = [&](const Poly& u, const Poly& v) {
    Poly r(p, ctx.zero());
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (u[i].is_zero()) continue;
      for (std::size_t k = 0; k < v.size() && i + k < p; ++k) r[i + k] += u[i] * v[k];
    }
    return r;
  };
  Poly base(p, ctx.zero());
  base[0] = e.b();
  if (p > 1) base[1] = e.a();
  if (p > 3) base[3] = ctx.one();
  Poly acc(p, ctx.zero());
  acc[0] = ctx.one();
  for (std::uint64_t n = (p - 1) / 2; n; n >>= 1) {
    if (n & 1) acc = mul(acc, base);
    if (n > 1) base = mul(base, base);
  }
  return acc[p - 1];
}

bool is_supersingular(const FieldElement& j) { return hasse_invariant(curve_from_j(j)).is_zero(); }

std::string encode_small(const FieldElement& a) {
  if (a.ctx().k() > 1 && a.in_subfield(1)) {
    FieldPtr fp = make_field(a.ctx().p(), 1);
    return canonical_embedding(*fp, a.ctx()).descend(a)->to_string();
  }
  return a.to_string();
}

std::string SupersingularReport::json() const {
  std::ostringstream os;
  os << "{\"p\":" << p << ",\"js\":[";
  for (std::size_t i = 0; i < js.size(); ++i) os << (i ? "," : "") << "\"" << encode_small(js[i]) << "\"";
  os << "],\"count\":" << js.size() << "}";
  return os.str();
}

SupersingularReport supersingular_set(Limb p) {
  if (p < 5) throw Error(ErrorCode::SmallCharacteristic, "characteristic must be at least 5");
  if (p > 1024) throw Error(ErrorCode::BoundExceeded, "exhaustive supersingular scan limited to p <= 2^10");
  FieldPtr f = make_field(p, 2);
  SupersingularReport out;
  out.p = p;
  for (const auto& j : enumerate(*f))
    if (is_supersingular(j)) out.js.push_back(j);
  const std::size_t lo = p / 12;
  out.mass_check = out.js.size() >= lo && out.js.size() <= lo + 2;
  return out;
}

TwoIsogenies two_isogenous_j(const FieldElement& j) {
  const FieldCtx& ctx = j.ctx();
  require_large_char(ctx);
  if (j.is_zero() || j == ctx.from_int(1728)) throw Error(ErrorCode::ExcludedJ, "j = 0 and j = 1728 are excluded");
  const WeierstrassCurve e = curve_from_j(j);
  const UniPoly cubic(ctx, {e.b(), e.a(), ctx.zero(), ctx.one()});
  const unsigned s = splitting_degree(cubic);
  TwoIsogenies out;
  out.field = make_field(ctx.p(), ctx.k() * s);
  const Embedding& emb = canonical_embedding(ctx, *out.field);
  const FieldElement a = emb.apply(e.a()), b = emb.apply(e.b());
  const UniPoly lifted(*out.field, {b, a, out.field->zero(), out.field->one()});
  for (const auto& r : roots(lifted)) {
    const FieldElement& x0 = r.value;
    const FieldElement t = x0 * x0 * out.field->from_int(3) + a;
    const FieldElement w = x0 * t;
    const WeierstrassCurve codomain(a - t.scaled(5), b - w.scaled(7));
    for (unsigned i = 0; i < r.multiplicity; ++i) out.js.push_back(codomain.j_invariant());
  }
  std::sort(out.js.begin(), out.js.end());
  return out;
}

FieldElement level2_j(const FieldElement& x) {
  const FieldElement s = x + x.ctx().from_int(256);
  return s * s * s / (x * x);
}

}  // namespace corrdyn
