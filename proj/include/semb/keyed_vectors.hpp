// Copyright 2026 The semb Authors. All Rights Reserved.
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

#pragma once

#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "semb/keys.hpp"
#include "semb/math.hpp"

namespace semb {

/// Read-only table of key -> vector, the common currency of the evaluation
/// code. Rows keep file order. Sense and tagged keys are additionally
/// indexed by surface form so every variant of a word can be enumerated.
class KeyedVectors {
 public:
  using Scalar = float;
  using Index = Eigen::Index;

  KeyedVectors() = default;
  /// Throws DataError on duplicate keys or a row/key count mismatch.
  KeyedVectors(std::vector<std::string> keys, RowMatrix<Scalar> vectors,
               keys::KeyKind kind);

  Index size() const noexcept { return vectors_.rows(); }
  Index dim() const noexcept { return vectors_.cols(); }
  keys::KeyKind kind() const noexcept { return kind_; }

  const std::string& key(Index row) const { return keys_[row]; }
  const std::vector<std::string>& keys() const noexcept { return keys_; }
  const keys::KeyParts& parts(Index row) const { return parts_[row]; }
  const std::string& surface(Index row) const { return parts_[row].surface; }

  const RowMatrix<Scalar>& matrix() const noexcept { return vectors_; }
  auto vector(Index row) const { return vectors_.row(row); }
  /// Rows scaled to unit length; zero rows stay zero.
  const RowMatrix<Scalar>& unit() const noexcept { return unit_; }

  std::optional<Index> find(std::string_view key) const;
  /// Throws KeyNotFoundError.
  Index at(std::string_view key) const;
  /// All rows whose surface form equals `surface` (empty span if none).
  std::span<const Index> variants(std::string_view surface) const;

  /// Per-row cluster counts for sense tables; empty when unknown.
  const std::vector<std::uint64_t>& counts() const noexcept { return counts_; }
  void set_counts(std::vector<std::uint64_t> counts);

 private:
  std::vector<std::string> keys_;
  std::vector<keys::KeyParts> parts_;
  RowMatrix<Scalar> vectors_;
  RowMatrix<Scalar> unit_;
  keys::KeyKind kind_ = keys::KeyKind::plain;
  std::unordered_map<std::string, Index> index_;
  std::unordered_map<std::string, std::vector<Index>> by_surface_;
  std::vector<std::uint64_t> counts_;
};

/// Infers the key kind from the keys themselves: any sense key makes a
/// sense table, else any tagged key a tagged one.
keys::KeyKind infer_kind(const std::vector<std::string>& keys);

/// A sense table plus the global word vectors used to describe contexts.
struct SenseVectors {
  KeyedVectors senses;
  std::optional<KeyedVectors> context;
};

struct Neighbor {
  std::string key;
  double cosine;
};

/// Top-n keys by cosine to `query`, descending, ties by key order; the query
/// itself is excluded. Throws KeyNotFoundError.
std::vector<Neighbor> nearest_neighbors(const KeyedVectors& model,
                                        std::string_view query, std::size_t n);

}  // namespace semb
