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

#include "corrdyn/correspondence.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>
#include <set>

#include "corrdyn/error.hpp"

namespace corrdyn {

std::strong_ordering operator<=>(const PointP1& a, const PointP1& b) {
  if (a.is_inf() || b.is_inf()) return a.is_inf() <=> b.is_inf();
  return *a.v_ <=> *b.v_;
}

PointP1 parse_point(const FieldCtx& ctx, std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text == "inf" || text == "oo" || text == "infinity") return PointP1::infinity();
  return PointP1(parse_element_in(ctx, text));
}

// ---------------------------------------------------------------------------
// Local branches

namespace {

constexpr int kMaxDepth = 32;

int ord_y_at_x0(const BiPoly& g) {
  int best = -1;
  for (const auto& [key, c] : g.terms())
    if (key.first == 0 && (best < 0 || static_cast<int>(key.second) < best)) best = static_cast<int>(key.second);
  return best;
}

int ord_x_at_y0(const BiPoly& g) {
  int best = -1;
  for (const auto& [key, c] : g.terms())
    if (key.second == 0 && (best < 0 || static_cast<int>(key.first) < best)) best = static_cast<int>(key.first);
  return best;
}

struct Pt {
  long i, j;
};

// Cross product sign of (b - a) x (c - a).
long cross(const Pt& a, const Pt& b, const Pt& c) { return (b.i - a.i) * (c.j - a.j) - (b.j - a.j) * (c.i - a.i); }

std::vector<std::vector<Limb>> pascal(unsigned n, Limb p) {
  std::vector<std::vector<Limb>> c(n + 1);
  for (unsigned i = 0; i <= n; ++i) {
    c[i].assign(i + 1, 1);
    for (unsigned j = 1; j < i; ++j) c[i][j] = (c[i - 1][j - 1] + c[i - 1][j]) % p;
  }
  return c;
}

// G(xi^v X^q, X^m (xi^u + Y)) / X^L
BiPoly duval_substitute(const BiPoly& g, const FieldElement& xi, long q, long m, long u, long v, long L) {
  const FieldCtx& ctx = g.ctx();
  const auto binom = pascal(static_cast<unsigned>(std::max(g.deg_y(), 0)), ctx.p());
  const FieldElement xu = xi.pow(static_cast<std::uint64_t>(u));
  const FieldElement xv = xi.pow(static_cast<std::uint64_t>(v));
  std::vector<FieldElement> xu_pow{ctx.one()};
  for (int j = 0; j < g.deg_y(); ++j) xu_pow.push_back(xu_pow.back() * xu);
  BiPoly out(ctx);
  std::map<BiPoly::Key, FieldElement> acc;
  for (const auto& [key, c] : g.terms()) {
    const long i = key.first, j = key.second;
    const long ex = i * q + j * m - L;
    if (ex < 0) throw Error(ErrorCode::DegenerateComponent, "Newton polygon below its hull");
    const FieldElement base = c * xv.pow(static_cast<std::uint64_t>(i));
    for (long t = 0; t <= j; ++t) {
      const FieldElement term = (base * xu_pow[j - t]).scaled(binom[j][t]);
      if (term.is_zero()) continue;
      const BiPoly::Key k{static_cast<unsigned>(ex), static_cast<unsigned>(t)};
      auto it = acc.find(k);
      if (it == acc.end()) {
        acc.emplace(k, term);
      } else {
        it->second += term;
      }
    }
  }
  for (const auto& [k, c] : acc)
    if (!c.is_zero()) out.set(k.first, k.second, c);
  return out;
}

// Removes one factor Y.
BiPoly divide_by_y(const BiPoly& g) {
  BiPoly out(g.ctx());
  for (const auto& [key, c] : g.terms()) out.set(key.first, key.second - 1, c);
  return out;
}

// Branches of g at the origin. g_ram == 0 marks the branch Y = 0, whose
// ramification over Y is unbounded at this level.
LocalStructure analyze(const BiPoly& germ, int depth) {
  LocalStructure out;
  BiPoly g = germ;
  if (depth > kMaxDepth) {
    out.resolved = false;
    return out;
  }
  int ymin = -1;
  for (const auto& [key, c] : g.terms())
    if (ymin < 0 || static_cast<int>(key.second) < ymin) ymin = static_cast<int>(key.second);
  if (ymin >= 2) {
    out.resolved = false;  // non-reduced
    return out;
  }
  if (ymin == 1) {
    out.branches.push_back({1, 0});
    g = divide_by_y(g);
  }
  if (!g.coeff(0, 0).is_zero()) return out;

  const int a = ord_y_at_x0(g);
  const int b = ord_x_at_y0(g);
  if (a < 0) {
    out.resolved = false;  // X divides g
    return out;
  }
  if (a == 1) {
    out.branches.push_back({1, static_cast<unsigned>(b)});
    return out;
  }
  if (b == 1) {
    out.branches.push_back({static_cast<unsigned>(a), 1});
    return out;
  }

  // Lower hull from (0, a) to (b, 0).
  std::map<long, long> lowest;
  for (const auto& [key, c] : g.terms()) {
    const long i = key.first, j = key.second;
    if (i > b || j > a) continue;
    auto it = lowest.find(i);
    if (it == lowest.end() || j < it->second) lowest[i] = j;
  }
  std::vector<Pt> hull;
  for (const auto& [i, j] : lowest) {
    const Pt pt{i, j};
    while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), pt) <= 0) hull.pop_back();
    hull.push_back(pt);
  }

  const FieldCtx& ctx = g.ctx();
  struct Segment {
    long m, q, L;
    std::vector<Root> roots;
  };
  std::vector<Segment> segments;
  unsigned grow = 1;
  for (std::size_t s = 0; s + 1 < hull.size(); ++s) {
    const long dx = hull[s + 1].i - hull[s].i;
    const long dy = hull[s].j - hull[s + 1].j;
    const long gg = std::gcd(dx, dy);
    const long m = dx / gg, q = dy / gg;
    std::vector<FieldElement> phi(static_cast<std::size_t>(gg) + 1, ctx.zero());
    for (long k = 0; k <= gg; ++k)
      phi[static_cast<std::size_t>(gg - k)] =
          g.coeff(static_cast<unsigned>(hull[s].i + k * m), static_cast<unsigned>(hull[s].j - k * q));
    const UniPoly edge(ctx, phi);
    const auto rs = roots(edge);
    unsigned found = 0;
    for (const auto& r : rs) found += r.multiplicity;
    if (found < static_cast<unsigned>(gg)) grow = std::lcm(grow, splitting_degree(edge));
    segments.push_back({m, q, hull[s].i * q + hull[s].j * m, rs});
  }
  if (grow > 1) {
    // Redo everything over a field where every edge polynomial splits.
    FieldPtr big = make_field(ctx.p(), ctx.k() * grow);
    const Embedding& emb = canonical_embedding(ctx, *big);
    return analyze(germ.map_coeffs(*big, [&](const FieldElement& c) { return emb.apply(c); }), depth);
  }
  for (const auto& [m, q, L, rs] : segments) {
    // u q - v m = 1 with u, v >= 0
    long u = 1;
    while ((u * q - 1) % m != 0) ++u;
    const long v = (u * q - 1) / m;
    for (const auto& r : rs) {
      if (r.multiplicity == 1) {
        out.branches.push_back({static_cast<unsigned>(q), static_cast<unsigned>(m)});
        continue;
      }
      const BiPoly g1 = duval_substitute(g, r.value, q, m, u, v, L);
      const LocalStructure sub = analyze(g1, depth + 1);
      if (!sub.resolved) {
        out.resolved = false;
        return out;
      }
      for (const auto& br : sub.branches)
        out.branches.push_back({static_cast<unsigned>(q) * br.f_ram, static_cast<unsigned>(m) * br.f_ram});
    }
  }
  return out;
}

}  // namespace

LocalStructure analyze_germ(const BiPoly& germ) {
  if (germ.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "germ of the zero polynomial");
  if (!germ.coeff(0, 0).is_zero()) throw Error(ErrorCode::NotOnCurve, "germ does not vanish at the origin");
  const int a = ord_y_at_x0(germ);
  const int b = ord_x_at_y0(germ);
  LocalStructure ls = analyze(germ, 0);
  if (!ls.resolved) return ls;
  unsigned sf = 0, sg = 0;
  for (const auto& br : ls.branches) {
    if (br.g_ram == 0) {
      ls.resolved = false;
      return ls;
    }
    sf += br.f_ram;
    sg += br.g_ram;
  }
  if (a < 0 || b < 0 || sf != static_cast<unsigned>(a) || sg != static_cast<unsigned>(b)) ls.resolved = false;
  std::sort(ls.branches.begin(), ls.branches.end());
  return ls;
}

// ---------------------------------------------------------------------------
// Correspondence

Correspondence::Correspondence(BiPoly f, bool minimal, bool symmetric, bool distinct)
    : poly_(std::move(f)),
      rev_x_(poly_.reversed(Var::X)),
      rev_y_(poly_.reversed(Var::Y)),
      rev_xy_(rev_x_.reversed(Var::Y)),
      minimal_(minimal),
      symmetric_(symmetric),
      distinct_sides_(distinct) {}

Correspondence::Correspondence(BiPoly f) : Correspondence(std::move(f), false, false, false) {
  if (poly_.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "correspondence polynomial is zero");
  if (poly_.deg_x() < 1 || poly_.deg_y() < 1)
    throw Error(ErrorCode::DegenerateComponent, "polynomial must involve both x and y");
  if (content(poly_, Var::Y).degree() > 0)
    throw Error(ErrorCode::DegenerateComponent, "factor in x alone (vertical component)");
  if (content(poly_, Var::X).degree() > 0)
    throw Error(ErrorCode::DegenerateComponent, "factor in y alone (horizontal component)");
  minimal_ = bi_is_squarefree(poly_);
  const BiPoly t = poly_.transpose();
  if (t.deg_x() == poly_.deg_x() && t.terms().size() == poly_.terms().size()) {
    const auto& [k0, c0] = *poly_.terms().begin();
    const FieldElement tc = t.coeff(k0.first, k0.second);
    if (!tc.is_zero()) {
      const FieldElement u = c0 / tc;
      bool ok = true;
      for (const auto& [k, c] : poly_.terms())
        if (c != u * t.coeff(k.first, k.second)) {
          ok = false;
          break;
        }
      symmetric_ = ok;
    }
  }
}

Correspondence Correspondence::load(const BiPolyFile& file, Limb prime) {
  return Correspondence(file.instantiate(prime));
}

Correspondence Correspondence::base_change(const Embedding& e) const {
  if (&e.from() != &ctx()) throw Error(ErrorCode::CtxMismatch, "base change from the wrong field");
  BiPoly g = poly_.map_coeffs(e.to(), [&](const FieldElement& c) { return e.apply(c); });
  return Correspondence(std::move(g), minimal_, symmetric_, distinct_sides_);
}

Fiber Correspondence::fiber(const Specialization& s) const {
  Fiber out;
  unsigned found = 0;
  if (s.poly.degree() > 0) {
    for (const auto& r : roots(s.poly)) {
      out.points.emplace_back(PointP1(r.value), r.multiplicity);
      found += r.multiplicity;
    }
    out.missing = static_cast<unsigned>(s.poly.degree()) - found;
    if (out.missing) out.splitting_degree = splitting_degree(s.poly);
  }
  if (s.degree_drop) out.points.emplace_back(PointP1::infinity(), s.degree_drop);
  return out;
}

Fiber Correspondence::forward(const PointP1& x) const {
  if (x.is_inf()) return fiber(specialize(rev_x_, Var::X, ctx().zero()));
  return fiber(specialize(poly_, Var::X, x.value()));
}

Fiber Correspondence::backward(const PointP1& y) const {
  if (y.is_inf()) return fiber(specialize(rev_y_, Var::Y, ctx().zero()));
  return fiber(specialize(poly_, Var::Y, y.value()));
}

const BiPoly& Correspondence::chart(bool x_inf, bool y_inf) const {
  if (x_inf) return y_inf ? rev_xy_ : rev_x_;
  return y_inf ? rev_y_ : poly_;
}

bool Correspondence::on_curve(const PointP1& x, const PointP1& y) const {
  const FieldElement x0 = x.is_inf() ? ctx().zero() : x.value();
  const FieldElement y0 = y.is_inf() ? ctx().zero() : y.value();
  return chart(x.is_inf(), y.is_inf())(x0, y0).is_zero();
}

namespace {

unsigned multiplicity_in(const Specialization& s, const PointP1& pt) {
  if (pt.is_inf()) return s.degree_drop;
  if (s.poly.is_zero()) return 0;
  return root_multiplicity(s.poly, pt.value());
}

}  // namespace

EdgePoint Correspondence::edge(const PointP1& x, const PointP1& y) const {
  const Specialization sx = x.is_inf() ? specialize(rev_x_, Var::X, ctx().zero()) : specialize(poly_, Var::X, x.value());
  const Specialization sy = y.is_inf() ? specialize(rev_y_, Var::Y, ctx().zero()) : specialize(poly_, Var::Y, y.value());
  EdgePoint z{x, y, multiplicity_in(sx, y), multiplicity_in(sy, x)};
  if (z.mult_f == 0 || z.mult_g == 0) throw Error(ErrorCode::NotOnCurve, z.to_string() + " is not on the curve");
  return z;
}

std::pair<bool, bool> Correspondence::etale_at(const EdgePoint& z) const {
  const EdgePoint w = edge(z.x, z.y);
  return {w.mult_f == 1, w.mult_g == 1};
}

BiPoly Correspondence::germ(const PointP1& x, const PointP1& y) const {
  const FieldElement x0 = x.is_inf() ? ctx().zero() : x.value();
  const FieldElement y0 = y.is_inf() ? ctx().zero() : y.value();
  return chart(x.is_inf(), y.is_inf()).shifted(x0, y0);
}

LocalStructure Correspondence::local(const EdgePoint& z) const {
  if (z.mult_f == 1) return {true, {{1, z.mult_g}}};
  if (z.mult_g == 1) return {true, {{z.mult_f, 1}}};
  return analyze_germ(germ(z.x, z.y));
}

std::vector<EdgePoint> Correspondence::rational_edges() const {
  std::vector<PointP1> xs;
  for (auto& a : enumerate(ctx())) xs.emplace_back(std::move(a));
  xs.push_back(PointP1::infinity());
  std::vector<EdgePoint> out;
  for (const auto& x : xs)
    for (const auto& [y, mult] : forward(x).points) out.push_back(edge(x, y));
  return out;
}

SanityCheck Correspondence::irreducibility_sanity() const {
  SanityCheck out;
  const double deg = poly_.deg_x() + poly_.deg_y();
  const double genus_bound = (deg - 1) * (deg - 2) / 2;
  for (unsigned m = 1; m <= 3; ++m) {
    const long double size = std::pow(static_cast<long double>(ctx().size()), m);
    if (size > 65536) break;
    FieldPtr big = make_field(ctx().p(), ctx().k() * m);
    const Correspondence c = base_change(canonical_embedding(ctx(), *big));
    std::uint64_t n = 0;
    for (const auto& x : enumerate(*big))
      for (const auto& [y, mult] : c.forward(PointP1(x)).points)
        if (!y.is_inf()) ++n;
    const double q = static_cast<double>(size);
    const double tol = 2 * genus_bound * std::sqrt(q) + genus_bound + deg * deg + deg;
    if (std::abs(static_cast<double>(n) - q) > tol) {
      out.plausible = false;
      out.warnings.push_back("over " + big->name() + ": " + std::to_string(n) +
                             " affine points, outside the single-component band around " +
                             std::to_string(static_cast<std::uint64_t>(q)));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

OrbitClosure orbit_closure(const Correspondence& c, const PointP1& x0, std::size_t budget) {
  OrbitClosure out;
  std::set<PointP1> xs{x0}, ys;
  std::deque<std::pair<bool, PointP1>> queue{{true, x0}};  // (is X side, point)
  while (!queue.empty()) {
    auto [is_x, pt] = queue.front();
    queue.pop_front();
    const Fiber fib = is_x ? c.forward(pt) : c.backward(pt);
    for (const auto& [q, mult] : fib.points) {
      auto& target = is_x ? ys : xs;
      if (target.insert(q).second) queue.emplace_back(!is_x, q);
    }
    if (xs.size() + ys.size() > budget) {
      out.bounded = false;
      break;
    }
  }
  out.x_side.assign(xs.begin(), xs.end());
  out.y_side.assign(ys.begin(), ys.end());
  return out;
}

}  // namespace corrdyn
