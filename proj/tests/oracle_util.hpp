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

// Small independent reference routines shared by the unit tests. Nothing here
// calls into the library.
#ifndef CORRDYN_TESTS_ORACLE_UTIL_HPP
#define CORRDYN_TESTS_ORACLE_UTIL_HPP

#include <cstdint>
#include <vector>

namespace oracle {

using Poly = std::vector<std::int64_t>;  // low degree first, entries in [0, p)

inline void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline std::int64_t inv_mod(std::int64_t a, std::int64_t p) {
  std::int64_t r = 1, b = ((a % p) + p) % p, e = p - 2;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r;
}

inline Poly mul(const Poly& a, const Poly& b, std::int64_t p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  trim(r);
  return r;
}

inline Poly rem(Poly a, const Poly& m, std::int64_t p) {
  trim(a);
  const std::int64_t inv = inv_mod(m.back(), p);
  while (a.size() >= m.size()) {
    const std::int64_t q = a.back() * inv % p;
    const std::size_t s = a.size() - m.size();
    for (std::size_t j = 0; j < m.size(); ++j) a[s + j] = ((a[s + j] - q * m[j]) % p + p) % p;
    trim(a);
  }
  return a;
}

// Trial division by every monic polynomial of degree <= deg/2.
inline bool irreducible_by_trial(const Poly& f, std::int64_t p) {
  const int n = static_cast<int>(f.size()) - 1;
  for (int d = 1; d <= n / 2; ++d) {
    std::int64_t count = 1;
    for (int i = 0; i < d; ++i) count *= p;
    for (std::int64_t idx = 0; idx < count; ++idx) {
      Poly g(d + 1, 0);
      std::int64_t t = idx;
      for (int i = 0; i < d; ++i) {
        g[i] = t % p;
        t /= p;
      }
      g[d] = 1;
      if (rem(f, g, p).empty()) return false;
    }
  }
  return n >= 1;
}

// Least monic irreducible of degree k, comparing c0 first, then c1, ...
inline Poly least_irreducible(std::int64_t p, int k) {
  std::int64_t count = 1;
  for (int i = 0; i < k; ++i) count *= p;
  for (std::int64_t idx = 0; idx < count; ++idx) {
    Poly f(k + 1, 0);
    std::int64_t t = idx;
    for (int i = k - 1; i >= 0; --i) {
      f[i] = t % p;
      t /= p;
    }
    f[k] = 1;
    if (irreducible_by_trial(f, p)) return f;
  }
  return {};
}

}  // namespace oracle

#endif  // CORRDYN_TESTS_ORACLE_UTIL_HPP
