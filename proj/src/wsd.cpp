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

#include "semb/wsd.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "semb/error.hpp"

namespace semb::wsd {
namespace {

using Index = KeyedVectors::Index;

// Label with the highest count; ties go to the lexicographically smaller.
std::string majority(const std::map<std::string, std::size_t>& counts) {
  std::string best;
  std::size_t best_count = 0;
  for (const auto& [label, n] : counts) {
    if (n > best_count) {  // std::map iterates in lexicographic order
      best = label;
      best_count = n;
    }
  }
  return best;
}

std::map<std::string, std::size_t> histogram(std::span<const std::string> v) {
  std::map<std::string, std::size_t> h;
  for (const auto& s : v) ++h[s];
  return h;
}

}  // namespace

SenseSet senses_of(const KeyedVectors& table, std::string_view word) {
  SenseSet set;
  std::vector<std::pair<int, Index>> found;
  for (Index r : table.variants(word))
    if (table.parts(r).is_sense()) found.emplace_back(table.parts(r).sense, r);
  if (found.empty()) throw KeyNotFoundError(std::string(word));
  std::sort(found.begin(), found.end());
  for (auto [k, r] : found) {
    set.senses.push_back(k);
    set.rows.push_back(r);
  }
  return set;
}

Decision disambiguate(std::string_view word,
                      std::span<const std::string> tokens, std::size_t target,
                      const KeyedVectors& senses,
                      const KeyedVectors& context_vectors,
                      const DisambiguationConfig& config) {
  if (config.p < 1) throw UsageError("p must be >= 1");
  const SenseSet set = senses_of(senses, word);
  if (set.rows.size() == 1) return {set.senses[0], set.rows[0], false};

  std::size_t lo = 0, hi = tokens.size();
  if (config.window) {
    lo = target > *config.window ? target - *config.window : 0;
    hi = std::min(tokens.size(), target + *config.window + 1);
  }
  std::vector<Index> context_rows;
  for (std::size_t j = lo; j < hi; ++j) {
    if (j == target) continue;
    if (auto row = context_vectors.find(keys::word_key(tokens[j])))
      context_rows.push_back(*row);
  }

  if (context_rows.empty()) {
    std::size_t best = 0;
    if (!senses.counts().empty()) {
      for (std::size_t i = 1; i < set.rows.size(); ++i)
        if (senses.counts()[static_cast<std::size_t>(set.rows[i])] >
            senses.counts()[static_cast<std::size_t>(set.rows[best])])
          best = i;
    }
    return {set.senses[best], set.rows[best], false};
  }

  RowMatrix<float> s(static_cast<Index>(set.rows.size()), senses.dim());
  for (std::size_t i = 0; i < set.rows.size(); ++i)
    s.row(static_cast<Index>(i)) = senses.vector(set.rows[i]);
  RowMatrix<float> c(static_cast<Index>(context_rows.size()),
                     context_vectors.dim());
  for (std::size_t j = 0; j < context_rows.size(); ++j)
    c.row(static_cast<Index>(j)) = context_vectors.vector(context_rows[j]);
  if (s.cols() != c.cols())
    throw DataError("sense and context vectors differ in dimension");

  const auto kept = filter_context(s, c, config.p);
  std::size_t best = 0;
  double best_score = 0.0;
  for (std::size_t i = 0; i < set.rows.size(); ++i) {
    double sum = 0.0;
    for (std::size_t j : kept)
      sum += static_cast<double>(cosine(s.row(static_cast<Index>(i)),
                                        c.row(static_cast<Index>(j))));
    const double mean = sum / static_cast<double>(kept.size());
    if (i == 0 || mean > best_score) {
      best = i;
      best_score = mean;
    }
  }
  return {set.senses[best], set.rows[best], true};
}

std::map<int, std::string> map_senses(std::span<const int> assignments,
                                      std::span<const std::string> golds,
                                      std::span<const int> all_senses) {
  if (assignments.size() != golds.size() || golds.empty())
    throw DataError("map_senses needs equal, non-empty inputs");
  const auto global = histogram(golds);
  std::map<int, std::map<std::string, std::size_t>> per_sense;
  for (std::size_t i = 0; i < golds.size(); ++i)
    ++per_sense[assignments[i]][golds[i]];

  std::map<int, std::string> mapping;
  for (const auto& [sense, counts] : per_sense) {
    const std::string* best = nullptr;
    std::size_t best_n = 0;
    for (const auto& [label, n] : counts) {
      const bool wins =
          !best || n > best_n ||
          (n == best_n && global.at(label) > global.at(*best));
      if (wins) {
        best = &label;
        best_n = n;
      }
    }
    mapping[sense] = *best;
  }
  const std::string fallback = majority(global);
  for (int s : all_senses) mapping.try_emplace(s, fallback);
  return mapping;
}

std::vector<std::string> mfs_baseline(std::span<const std::string> golds) {
  if (golds.empty()) return {};
  return std::vector<std::string>(golds.size(), majority(histogram(golds)));
}

double weighted_precision(std::span<const std::string> preds,
                          std::span<const std::string> golds) {
  if (preds.size() != golds.size() || golds.empty())
    throw DataError("weighted_precision needs equal, non-empty inputs");
  std::map<std::string, std::size_t> support, predicted, hits;
  for (std::size_t i = 0; i < golds.size(); ++i) {
    ++support[golds[i]];
    ++predicted[preds[i]];
    if (preds[i] == golds[i]) ++hits[golds[i]];
  }
  const double n = static_cast<double>(golds.size());
  double total = 0.0;
  for (const auto& [label, sup] : support) {
    auto p = predicted.find(label);
    if (p == predicted.end()) continue;
    const double precision =
        static_cast<double>(hits[label]) / static_cast<double>(p->second);
    total += static_cast<double>(sup) * precision;
  }
  // Dividing once keeps the perfect case exactly 1: sum of supports is n.
  return total / n;
}

std::vector<Instance> read_dataset(
    const std::string& path,
    const std::optional<corpus::NormalizationRules>& rules) {
  std::ifstream in(path);
  if (!in) throw StreamError(path, "cannot open for reading");
  std::vector<Instance> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<std::string> f;
    std::size_t start = 0;
    for (int i = 0; i < 3; ++i) {
      const auto tab = line.find('\t', start);
      if (tab == std::string::npos)
        throw ParseError("expected 4 tab-separated fields", line_no);
      f.push_back(line.substr(start, tab - start));
      start = tab + 1;
    }
    f.push_back(line.substr(start));

    Instance inst;
    inst.lemma = f[0];
    inst.gold = f[1];
    const auto [ptr, ec] =
        std::from_chars(f[2].data(), f[2].data() + f[2].size(), inst.target);
    if (ec != std::errc() || ptr != f[2].data() + f[2].size())
      throw ParseError("bad target index '" + f[2] + "'", line_no);
    std::istringstream ss(f[3]);
    for (std::string t; ss >> t;) inst.tokens.push_back(std::move(t));
    if (inst.lemma.empty() || inst.gold.empty())
      throw ParseError("empty lemma or gold sense", line_no);
    if (inst.tokens.empty()) throw ParseError("empty context", line_no);
    if (inst.target >= inst.tokens.size())
      throw ParseError("target index out of range", line_no);
    if (rules) {
      inst.lemma = corpus::normalize_text(inst.lemma, *rules);
      for (auto& t : inst.tokens) t = corpus::normalize_text(t, *rules);
    }
    out.push_back(std::move(inst));
  }
  return out;
}

Report evaluate(const SenseVectors& model,
                const std::vector<Instance>& instances,
                const DisambiguationConfig& config,
                const KeyedVectors* context_vectors) {
  if (!context_vectors) {
    if (!model.context)
      throw DataError("no context vectors: the model has no .ctx table");
    context_vectors = &*model.context;
  }
  std::vector<std::string> order;
  std::map<std::string, std::vector<const Instance*>> by_word;
  for (const auto& inst : instances) {
    auto& bucket = by_word[inst.lemma];
    if (bucket.empty()) order.push_back(inst.lemma);
    bucket.push_back(&inst);
  }

  Report report;
  for (const auto& word : order) {
    const auto& items = by_word[word];
    const SenseSet set = senses_of(model.senses, word);
    std::vector<std::string> golds;
    std::vector<int> assignments;
    for (const Instance* inst : items) {
      golds.push_back(inst->gold);
      assignments.push_back(disambiguate(word, inst->tokens, inst->target,
                                         model.senses, *context_vectors, config)
                                .sense);
    }
    const auto mapping = map_senses(assignments, golds, set.senses);
    std::vector<std::string> preds;
    std::set<std::string> image;
    for (int a : assignments) {
      preds.push_back(mapping.at(a));
      image.insert(mapping.at(a));
    }
    const auto labels = histogram(golds);

    WordRow row;
    row.word = word;
    row.frequency = items.size();
    row.senses = labels.size();
    row.mfs_precision = weighted_precision(mfs_baseline(golds), golds);
    row.method_precision = weighted_precision(preds, golds);
    row.valid_mapping = image.size() == labels.size();
    report.rows.push_back(row);
  }
  for (const auto& row : report.rows) {
    if (!row.valid_mapping) continue;
    report.mfs_average += row.mfs_precision;
    report.method_average += row.method_precision;
    ++report.averaged;
  }
  if (report.averaged) {
    report.mfs_average /= static_cast<double>(report.averaged);
    report.method_average /= static_cast<double>(report.averaged);
  }
  return report;
}

void Report::print(std::ostream& out) const {
  char buf[200];
  std::snprintf(buf, sizeof buf, "%-20s %9s %6s %13s %16s\n", "word",
                "frequency", "senses", "MFS precision", "method precision");
  out << buf;
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%-20s %9zu %6zu %13.2f %16.2f%s\n",
                  r.word.c_str(), r.frequency, r.senses,
                  100.0 * r.mfs_precision, 100.0 * r.method_precision,
                  r.valid_mapping ? "" : "  (no valid mapping, excluded)");
    out << buf;
  }
  std::snprintf(buf, sizeof buf, "%-20s %9s %6s %13.2f %16.2f\n", "average",
                "", "", 100.0 * mfs_average, 100.0 * method_average);
  out << buf << '\n';
  out << "words=" << rows.size() << '\n'
      << "averaged=" << averaged << '\n'
      << "mfs_average=" << mfs_average << '\n'
      << "method_average=" << method_average << '\n';
}

}  // namespace semb::wsd
