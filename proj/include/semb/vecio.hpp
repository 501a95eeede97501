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

// Vector file formats.
//
// Text (word2vec-compatible):
//   line 1      "V d"
//   lines 2..   "key v1 ... vd", single spaces, V rows
//
// Binary, all integers and floats little-endian:
//   "SEMB1" | u32 V | u32 d | u8 key_kind |
//   V x ( u16 key_bytes | key | d x f32 )
//
// A sense model is stored as three files next to each other:
//   <path>          sense rows "surface#k" (unassigned senses omitted)
//   <path>.ctx      global word vectors used to describe contexts
//   <path>.counts   "key<TAB>n" cluster counts for every sense row

#pragma once

#include <string>

#include "semb/keyed_vectors.hpp"
#include "semb/mssg.hpp"
#include "semb/sgns.hpp"

namespace semb::vecio {

inline constexpr char kMagic[] = "SEMB1";
inline constexpr int kDefaultPrecision = 9;

void save_text(const KeyedVectors& model, const std::string& path,
               int precision = kDefaultPrecision);
/// Throws ParseError (header, row arity, bad number, duplicate key) with the
/// offending line number, or StreamError.
KeyedVectors load_text(const std::string& path);

void save_binary(const KeyedVectors& model, const std::string& path);
/// Throws DataError on magic mismatch or truncation.
KeyedVectors load_binary(const std::string& path);

/// Dispatches on the leading magic bytes.
KeyedVectors load(const std::string& path);

bool is_binary(const std::string& path);

void save_counts(const KeyedVectors& model, const std::string& path);
/// Attaches counts read from `path` to `model` (rows not listed get 0).
void load_counts(KeyedVectors& model, const std::string& path);

inline std::string context_path(const std::string& path) { return path + ".ctx"; }
inline std::string counts_path(const std::string& path) {
  return path + ".counts";
}

/// Writes the three-file sense layout; `binary` selects the vector format.
void save_sense_vectors(const SenseVectors& model, const std::string& path,
                        bool binary = false,
                        int precision = kDefaultPrecision);
/// Loads `path` and, when present, its .ctx and .counts companions.
SenseVectors load_sense_vectors(const std::string& path);

template <typename Scalar>
KeyedVectors to_keyed(const EmbeddingModel<Scalar>& model) {
  std::vector<std::string> names;
  names.reserve(model.vocab->size());
  // Vocabulary tokens of tagged models are already encoded keys.
  for (const auto& e : model.vocab->entries())
    names.push_back(model.key_kind == keys::KeyKind::tagged
                        ? e.token
                        : keys::word_key(e.token));
  return KeyedVectors(std::move(names), model.input.template cast<float>(),
                      model.key_kind);
}

/// Sense rows for every assigned (w,k), with counts attached.
template <typename Scalar>
KeyedVectors sense_table(const SenseModel<Scalar>& model) {
  std::vector<std::string> names;
  std::vector<Eigen::Index> rows;
  std::vector<std::uint64_t> counts;
  for (Eigen::Index w = 0; w < model.words(); ++w) {
    for (int k = 0; k < model.senses; ++k) {
      const auto n = model.count(static_cast<WordId>(w), k);
      if (n == 0) continue;
      names.push_back(
          keys::sense_key(model.vocab->token(static_cast<WordId>(w)), k));
      rows.push_back(model.slot(static_cast<WordId>(w), k));
      counts.push_back(n);
    }
  }
  RowMatrix<float> m(static_cast<Eigen::Index>(rows.size()), model.dim());
  for (std::size_t i = 0; i < rows.size(); ++i)
    m.row(static_cast<Eigen::Index>(i)) =
        model.sense_vectors.row(rows[i]).template cast<float>();
  KeyedVectors table(std::move(names), std::move(m), keys::KeyKind::sense);
  table.set_counts(std::move(counts));
  return table;
}

/// Global word vectors G as a plain table.
template <typename Scalar>
KeyedVectors context_table(const SenseModel<Scalar>& model) {
  std::vector<std::string> names;
  RowMatrix<float> m(model.words(), model.dim());
  for (Eigen::Index w = 0; w < model.words(); ++w) {
    names.push_back(keys::word_key(model.vocab->token(static_cast<WordId>(w))));
    m.row(w) = model.global_vector(static_cast<WordId>(w)).template cast<float>();
  }
  return KeyedVectors(std::move(names), std::move(m), keys::KeyKind::plain);
}

template <typename Scalar>
SenseVectors to_sense_vectors(const SenseModel<Scalar>& model) {
  return SenseVectors{sense_table(model), context_table(model)};
}

}  // namespace semb::vecio
