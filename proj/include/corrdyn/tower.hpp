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

#ifndef CORRDYN_TOWER_HPP
#define CORRDYN_TOWER_HPP

#include <optional>
#include <vector>

#include "corrdyn/ffield.hpp"

namespace corrdyn {

/// A field homomorphism F_{p^a} -> F_{p^b}, fixed by the image of the
/// generator t of the source.
class Embedding {
 public:
  Embedding(const FieldCtx& from, const FieldCtx& to, const FieldElement& gen_image);
  static Embedding identity(const FieldCtx& ctx);

  const FieldCtx& from() const { return *from_; }
  const FieldCtx& to() const { return *to_; }
  const FieldElement& gen_image() const { return pow_.size() > 1 ? pow_[1] : gen_; }

  FieldElement apply(const FieldElement& a) const;
  /// this followed by next.
  Embedding then(const Embedding& next) const;
  /// Preimage of b, if b lies in the image.
  std::optional<FieldElement> descend(const FieldElement& b) const;

 private:
  const FieldCtx* from_;
  const FieldCtx* to_;
  FieldElement gen_;
  std::vector<FieldElement> pow_;  // gen_image^i, i < from.k()
};

/// Canonical embedding: the source generator goes to the smallest root (in
/// canonical element order) of the source modulus inside the target. Throws
/// CtxMismatch unless the characteristics agree and a divides b. Cached.
const Embedding& canonical_embedding(const FieldCtx& from, const FieldCtx& to);

}  // namespace corrdyn

#endif  // CORRDYN_TOWER_HPP
