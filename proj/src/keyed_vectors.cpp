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

#include "semb/keyed_vectors.hpp"

#include <algorithm>

#include "semb/error.hpp"

namespace semb {
namespace keys {

KeyParts parse(std::string_view key) {
  // Locate unescaped separators first, then unescape the pieces.
  std::size_t last_hash = std::string_view::npos;
  std::size_t last_bar = std::string_view::npos;
  for (std::size_t i = 0; i < key.size(); ++i) {
    if (key[i] == '\\') {
      ++i;
      continue;
    }
    if (key[i] == kSenseSeparator) last_hash = i;
    if (key[i] == kTagSeparator) last_bar = i;
  }
  auto unescape = [](std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] == '\\' && i + 1 < s.size()) ++i;
      out.push_back(s[i]);
    }
    return out;
  };

  KeyParts parts;
  std::string_view rest = key;
  if (last_hash != std::string_view::npos && last_hash + 1 < key.size() &&
      std::all_of(key.begin() + static_cast<long>(last_hash) + 1, key.end(),
                  [](char c) { return c >= '0' && c <= '9'; }) &&
      key.size() - last_hash - 1 <= 6) {
    parts.sense = std::stoi(std::string(key.substr(last_hash + 1)));
    rest = key.substr(0, last_hash);
  } else if (last_bar != std::string_view::npos && last_bar > 0 &&
             last_bar + 1 < key.size()) {
    parts.tag = unescape(key.substr(last_bar + 1));
    rest = key.substr(0, last_bar);
  }
  parts.surface = unescape(rest);
  return parts;
}

}  // namespace keys

KeyedVectors::KeyedVectors(std::vector<std::string> keys,
                           RowMatrix<Scalar> vectors, keys::KeyKind kind)
    : keys_(std::move(keys)), vectors_(std::move(vectors)), kind_(kind) {
  if (static_cast<Index>(keys_.size()) != vectors_.rows())
    throw DataError("key count " + std::to_string(keys_.size()) +
                    " does not match row count " +
                    std::to_string(vectors_.rows()));
  parts_.reserve(keys_.size());
  index_.reserve(keys_.size());
  for (Index r = 0; r < size(); ++r) {
    if (!index_.emplace(keys_[r], r).second)
      throw DataError("duplicate key: " + keys_[r]);
    parts_.push_back(keys::parse(keys_[r]));
    by_surface_[parts_.back().surface].push_back(r);
  }
  unit_ = vectors_;
  for (Index r = 0; r < size(); ++r) {
    const Scalar norm = unit_.row(r).norm();
    if (norm > Scalar(0)) unit_.row(r) /= norm;
  }
}

std::optional<KeyedVectors::Index> KeyedVectors::find(
    std::string_view key) const {
  auto it = index_.find(std::string(key));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

KeyedVectors::Index KeyedVectors::at(std::string_view key) const {
  if (auto row = find(key)) return *row;
  throw KeyNotFoundError(std::string(key));
}

std::span<const KeyedVectors::Index> KeyedVectors::variants(
    std::string_view surface) const {
  auto it = by_surface_.find(std::string(surface));
  if (it == by_surface_.end()) return {};
  return it->second;
}

void KeyedVectors::set_counts(std::vector<std::uint64_t> counts) {
  if (!counts.empty() && static_cast<Index>(counts.size()) != size())
    throw DataError("count table size does not match vector table");
  counts_ = std::move(counts);
}

keys::KeyKind infer_kind(const std::vector<std::string>& keys) {
  bool tagged = false;
  for (const auto& k : keys) {
    const auto parts = keys::parse(k);
    if (parts.is_sense()) return keys::KeyKind::sense;
    tagged = tagged || parts.is_tagged();
  }
  return tagged ? keys::KeyKind::tagged : keys::KeyKind::plain;
}

std::vector<Neighbor> nearest_neighbors(const KeyedVectors& model,
                                        std::string_view query,
                                        std::size_t n) {
  const auto q = model.at(query);
  const Vector<float> scores = model.unit() * model.unit().row(q).transpose();
  std::vector<KeyedVectors::Index> order;
  order.reserve(static_cast<std::size_t>(model.size()));
  for (KeyedVectors::Index r = 0; r < model.size(); ++r)
    if (r != q) order.push_back(r);
  const std::size_t take = std::min(n, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<long>(take),
                    order.end(), [&](auto a, auto b) {
                      if (scores[a] != scores[b]) return scores[a] > scores[b];
                      return model.key(a) < model.key(b);
                    });
  std::vector<Neighbor> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i)
    out.push_back({model.key(order[i]), static_cast<double>(scores[order[i]])});
  return out;
}

}  // namespace semb
