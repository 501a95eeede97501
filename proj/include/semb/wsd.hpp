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

// Lexical-sample word sense disambiguation with sense embeddings.
//
// A target word's senses s_1..s_n are compared against the word vectors of
// its context. Each context word c_j is scored by how well it separates the
// senses, max_i cos(s_i, c_j) - min_i cos(s_i, c_j); only the p best
// context words vote, and the sense with the highest mean cosine to them
// wins.

#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "semb/corpus.hpp"
#include "semb/keyed_vectors.hpp"
#include "semb/math.hpp"

namespace semb::wsd {

struct DisambiguationConfig {
  std::size_t p = 5;
  /// Context radius around the target; whole sentence when unset.
  std::optional<std::size_t> window;
};

/// Spread of cosine similarities between the rows of `senses` and `c`.
template <typename S, typename C>
double discriminativeness(const Eigen::MatrixBase<S>& senses,
                          const Eigen::MatrixBase<C>& c) {
  double hi = -2.0, lo = 2.0;
  for (Eigen::Index i = 0; i < senses.rows(); ++i) {
    const double sim = static_cast<double>(cosine(senses.row(i), c));
    hi = std::max(hi, sim);
    lo = std::min(lo, sim);
  }
  return senses.rows() == 0 ? 0.0 : hi - lo;
}

/// Row indices of the `p` most discriminative rows of `context`, returned in
/// original order. Ties keep the earlier row.
template <typename S, typename C>
std::vector<std::size_t> filter_context(const Eigen::MatrixBase<S>& senses,
                                        const Eigen::MatrixBase<C>& context,
                                        std::size_t p) {
  const auto rows = static_cast<std::size_t>(context.rows());
  std::vector<std::pair<double, std::size_t>> scored;
  scored.reserve(rows);
  for (std::size_t j = 0; j < rows; ++j)
    scored.emplace_back(
        discriminativeness(senses, context.row(static_cast<Eigen::Index>(j))),
        j);
  std::stable_sort(scored.begin(), scored.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < std::min(p, rows); ++i)
    kept.push_back(scored[i].second);
  std::sort(kept.begin(), kept.end());
  return kept;
}

/// Sense rows of one word in a sense table, ordered by sense index.
struct SenseSet {
  std::vector<KeyedVectors::Index> rows;
  std::vector<int> senses;
};

/// Throws KeyNotFoundError when `word` has no sense rows.
SenseSet senses_of(const KeyedVectors& table, std::string_view word);

struct Decision {
  int sense = 0;
  KeyedVectors::Index row = 0;
  /// False when the result came from a fallback (single sense or no usable
  /// context).
  bool used_context = false;
};

/// `tokens` is the whole sentence and `target` the position of `word` in
/// it. Context words are looked up in `context_vectors`; with no usable
/// context the sense with the largest cluster count wins.
Decision disambiguate(std::string_view word,
                      std::span<const std::string> tokens, std::size_t target,
                      const KeyedVectors& senses,
                      const KeyedVectors& context_vectors,
                      const DisambiguationConfig& config = {});

/// Majority mapping from induced sense to inventory label. Ties go to the
/// label more frequent overall, then the lexicographically smaller one.
/// Senses listed in `all_senses` without instances map to the overall
/// majority label.
std::map<int, std::string> map_senses(std::span<const int> assignments,
                                      std::span<const std::string> golds,
                                      std::span<const int> all_senses = {});

/// Every instance gets the most frequent gold label (ties lexicographic).
std::vector<std::string> mfs_baseline(std::span<const std::string> golds);

/// sum_k support_k / N * precision_k over the gold classes; a class that is
/// never predicted has precision 0.
double weighted_precision(std::span<const std::string> preds,
                          std::span<const std::string> golds);

struct Instance {
  std::string lemma;
  std::string gold;
  std::size_t target = 0;
  std::vector<std::string> tokens;
};

/// "lemma<TAB>gold<TAB>target_index<TAB>tokens" per line.
std::vector<Instance> read_dataset(
    const std::string& path,
    const std::optional<corpus::NormalizationRules>& rules = std::nullopt);

struct WordRow {
  std::string word;
  std::size_t frequency = 0;
  std::size_t senses = 0;  // distinct gold labels
  double mfs_precision = 0.0;
  double method_precision = 0.0;
  bool valid_mapping = true;
};

struct Report {
  std::vector<WordRow> rows;  // first-appearance order
  double mfs_average = 0.0;
  double method_average = 0.0;
  std::size_t averaged = 0;

  void print(std::ostream& out) const;
};

/// `context_vectors` overrides the model's own context table.
Report evaluate(const SenseVectors& model,
                const std::vector<Instance>& instances,
                const DisambiguationConfig& config = {},
                const KeyedVectors* context_vectors = nullptr);

}  // namespace semb::wsd
