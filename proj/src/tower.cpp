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

#include "corrdyn/tower.hpp"

#include <map>
#include <memory>
#include <mutex>

#include "corrdyn/error.hpp"
#include "corrdyn/polyring.hpp"

namespace corrdyn {

Embedding::Embedding(const FieldCtx& from, const FieldCtx& to, const FieldElement& gen_image)
    : from_(&from), to_(&to), gen_(gen_image) {
  if (from.p() != to.p() || to.k() % from.k() != 0)
    throw Error(ErrorCode::CtxMismatch, "no embedding " + from.name() + " -> " + to.name());
  if (gen_image.ctx_ptr() != &to) throw Error(ErrorCode::CtxMismatch, "generator image outside target field");
  pow_.push_back(to.one());
  for (unsigned i = 1; i < from.k(); ++i) pow_.push_back(pow_.back() * gen_image);
}

Embedding Embedding::identity(const FieldCtx& ctx) { return Embedding(ctx, ctx, ctx.generator()); }

FieldElement Embedding::apply(const FieldElement& a) const {
  if (a.ctx_ptr() != from_) throw Error(ErrorCode::CtxMismatch, "element outside embedding source");
  if (from_ == to_) return a;
  FieldElement r = to_->zero();
  const auto c = a.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i]) r += pow_[i].scaled(c[i]);
  return r;
}

Embedding Embedding::then(const Embedding& next) const {
  if (next.from_ != to_) throw Error(ErrorCode::CtxMismatch, "embeddings do not compose");
  return Embedding(*from_, *next.to_, next.apply(gen_));
}

std::optional<FieldElement> Embedding::descend(const FieldElement& b) const {
  if (b.ctx_ptr() != to_) throw Error(ErrorCode::CtxMismatch, "element outside embedding target");
  if (from_ == to_) return b;
  const Limb p = to_->p();
  const unsigned a = from_->k(), n = to_->k();
  // Solve sum_i c_i pow_[i] = b over F_p: n equations, a unknowns.
  std::vector<std::vector<Limb>> m(n, std::vector<Limb>(a + 1, 0));
  for (unsigned i = 0; i < a; ++i) {
    const auto col = pow_[i].coeffs();
    for (unsigned r = 0; r < n; ++r) m[r][i] = col[r];
  }
  const auto rhs = b.coeffs();
  for (unsigned r = 0; r < n; ++r) m[r][a] = rhs[r];
  auto inv = [p](Limb x) {
    Limb r = 1, e = p - 2;
    while (e) {
      if (e & 1) r = static_cast<Limb>((unsigned __int128)r * x % p);
      x = static_cast<Limb>((unsigned __int128)x * x % p);
      e >>= 1;
    }
    return r;
  };
  unsigned row = 0;
  std::vector<unsigned> pivot_col;
  for (unsigned c = 0; c < a && row < n; ++c) {
    unsigned piv = row;
    while (piv < n && m[piv][c] == 0) ++piv;
    if (piv == n) continue;
    std::swap(m[piv], m[row]);
    const Limb s = inv(m[row][c]);
    for (auto& v : m[row]) v = v * s % p;
    for (unsigned r = 0; r < n; ++r) {
      if (r == row || m[r][c] == 0) continue;
      const Limb f = m[r][c];
      for (unsigned j = 0; j <= a; ++j) m[r][j] = (m[r][j] + (p - f) * m[row][j]) % p;
    }
    pivot_col.push_back(c);
    ++row;
  }
  for (unsigned r = row; r < n; ++r)
    if (m[r][a] != 0) return std::nullopt;
  std::vector<Limb> out(a, 0);
  for (unsigned r = 0; r < row; ++r) out[pivot_col[r]] = m[r][a];
  return from_->from_coeffs(out);
}

namespace {

struct Cache {
  std::mutex mu;
  std::map<std::pair<const FieldCtx*, const FieldCtx*>, std::unique_ptr<Embedding>> map;
};

Cache& cache() {
  static Cache c;
  return c;
}

}  // namespace

const Embedding& canonical_embedding(const FieldCtx& from, const FieldCtx& to) {
  {
    std::lock_guard lock(cache().mu);
    auto it = cache().map.find({&from, &to});
    if (it != cache().map.end()) return *it->second;
  }
  if (from.p() != to.p() || to.k() % from.k() != 0)
    throw Error(ErrorCode::CtxMismatch, "no embedding " + from.name() + " -> " + to.name());
  FieldElement img = to.one();
  if (from.k() > 1) {
    std::vector<FieldElement> c;
    for (Limb v : from.modulus()) c.push_back(to.from_int(static_cast<std::int64_t>(v)));
    auto rs = roots(UniPoly(to, c));
    img = rs.front().value;
  }
  auto e = std::make_unique<Embedding>(from, to, img);
  std::lock_guard lock(cache().mu);
  auto [it, inserted] = cache().map.emplace(std::make_pair(&from, &to), std::move(e));
  return *it->second;
}

}  // namespace corrdyn
