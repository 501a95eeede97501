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

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "semb/corpus.hpp"
#include "semb/math.hpp"

namespace semb {

/// Token -> dense id map. Ids are assigned by descending count, ties broken
/// by first occurrence in the corpus. Immutable once built.
class Vocabulary {
 public:
  struct Entry {
    std::string token;
    std::uint64_t count;
  };

  Vocabulary() = default;
  /// `entries` must already be in id order.
  explicit Vocabulary(std::vector<Entry> entries);

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  std::uint64_t total_tokens() const noexcept { return total_; }

  const std::string& token(WordId id) const { return entries_[id].token; }
  std::uint64_t count(WordId id) const { return entries_[id].count; }
  const std::vector<Entry>& entries() const noexcept { return entries_; }

  std::optional<WordId> find(std::string_view token) const;

  /// "token<TAB>count" per line, frequency-descending.
  void dump(std::ostream& out) const;

 private:
  std::vector<Entry> entries_;
  std::unordered_map<std::string, WordId> index_;
  std::uint64_t total_ = 0;
};

/// Incremental counter behind build_vocab.
class VocabularyBuilder {
 public:
  void add(const std::string& token);
  void add(std::span<const std::string> sentence) {
    for (const auto& t : sentence) add(t);
  }
  /// Throws EmptyVocabularyError when nothing reaches `min_count`.
  Vocabulary build(std::uint64_t min_count) const;

 private:
  struct Slot {
    std::uint64_t count = 0;
    std::uint64_t first_seen = 0;
  };
  std::unordered_map<std::string, Slot> counts_;
  std::uint64_t seen_ = 0;
};

Vocabulary build_vocab(std::span<const std::vector<std::string>> sentences,
                       std::uint64_t min_count);
Vocabulary build_vocab(const corpus::CorpusSource& source,
                       std::uint64_t min_count);

/// Probability of keeping one occurrence of a word with `count` out of
/// `total` tokens; threshold 0 disables subsampling.
double subsample_keep_prob(std::uint64_t count, std::uint64_t total,
                           double threshold);

/// Unigram^power noise distribution sampled by binary search over
/// cumulative weights.
class SamplingTable {
 public:
  SamplingTable(const Vocabulary& vocab, double power);

  double probability(WordId id) const;
  double total_weight() const noexcept { return cumulative_.back(); }
  const std::vector<double>& cumulative() const noexcept { return cumulative_; }

  /// `u` uniform in [0, 1).
  WordId sample(double u) const;

  template <typename Rng>
  WordId sample(Rng& rng) const {
    return sample(uniform01(rng));
  }

  template <typename Rng>
  static double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
  }

 private:
  std::vector<double> cumulative_;
};

}  // namespace semb
