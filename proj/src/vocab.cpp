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

#include "semb/vocab.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "semb/error.hpp"

namespace semb {

Vocabulary::Vocabulary(std::vector<Entry> entries)
    : entries_(std::move(entries)) {
  index_.reserve(entries_.size());
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    index_.emplace(entries_[i].token, static_cast<WordId>(i));
    total_ += entries_[i].count;
  }
}

std::optional<WordId> Vocabulary::find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void Vocabulary::dump(std::ostream& out) const {
  for (const auto& e : entries_) out << e.token << '\t' << e.count << '\n';
}

void VocabularyBuilder::add(const std::string& token) {
  auto [it, inserted] = counts_.try_emplace(token);
  if (inserted) it->second.first_seen = seen_;
  ++it->second.count;
  ++seen_;
}

Vocabulary VocabularyBuilder::build(std::uint64_t min_count) const {
  if (min_count < 1) throw UsageError("min_count must be >= 1");
  std::vector<std::pair<const std::string*, Slot>> kept;
  for (const auto& [token, slot] : counts_)
    if (slot.count >= min_count) kept.emplace_back(&token, slot);
  if (kept.empty()) throw EmptyVocabularyError();
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second.count != b.second.count) return a.second.count > b.second.count;
    return a.second.first_seen < b.second.first_seen;
  });
  std::vector<Vocabulary::Entry> entries;
  entries.reserve(kept.size());
  for (const auto& [token, slot] : kept) entries.push_back({*token, slot.count});
  return Vocabulary(std::move(entries));
}

Vocabulary build_vocab(std::span<const std::vector<std::string>> sentences,
                       std::uint64_t min_count) {
  VocabularyBuilder builder;
  for (const auto& s : sentences) builder.add(s);
  return builder.build(min_count);
}

Vocabulary build_vocab(const corpus::CorpusSource& source,
                       std::uint64_t min_count) {
  VocabularyBuilder builder;
  corpus::SentenceStream stream(source);
  std::vector<std::string> tokens;
  while (stream.next(tokens)) builder.add(tokens);
  return builder.build(min_count);
}

double subsample_keep_prob(std::uint64_t count, std::uint64_t total,
                           double threshold) {
  if (threshold <= 0.0 || total == 0) return 1.0;
  const double f = static_cast<double>(count) / static_cast<double>(total);
  return std::min(1.0, (std::sqrt(f / threshold) + 1.0) * threshold / f);
}

SamplingTable::SamplingTable(const Vocabulary& vocab, double power) {
  if (power < 0.0) throw UsageError("sampling power must be >= 0");
  if (vocab.empty()) throw EmptyVocabularyError();
  cumulative_.reserve(vocab.size());
  double acc = 0.0;
  for (const auto& e : vocab.entries()) {
    acc += std::pow(static_cast<double>(e.count), power);
    cumulative_.push_back(acc);
  }
}

double SamplingTable::probability(WordId id) const {
  const double prev = id == 0 ? 0.0 : cumulative_[id - 1];
  return (cumulative_[id] - prev) / cumulative_.back();
}

WordId SamplingTable::sample(double u) const {
  const double target = u * cumulative_.back();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
  if (it == cumulative_.end()) --it;
  return static_cast<WordId>(it - cumulative_.begin());
}

}  // namespace semb
