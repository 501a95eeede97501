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

#include "semb/analogy.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include "semb/error.hpp"

namespace semb::analogy {
namespace {

constexpr std::array<std::string_view, 9> kSyntactic = {
    "adjective-to-adverb", "opposite",  "comparative",
    "superlative",         "present-participle", "nationality-adjective",
    "past-tense",          "plural",    "plural-verbs"};
constexpr std::array<std::string_view, 5> kSemantic = {
    "capital-common-countries", "capital-world", "currency", "city-in-state",
    "family"};

using Index = KeyedVectors::Index;

}  // namespace

Group category_group(std::string_view category) {
  // Google-style names carry a "gram<n>-" prefix on syntactic sections.
  std::string name(category);
  if (name.rfind("gram", 0) == 0) {
    const auto dash = name.find('-');
    if (dash != std::string::npos) name = name.substr(dash + 1);
  }
  if (std::find(kSyntactic.begin(), kSyntactic.end(), name) != kSyntactic.end())
    return Group::syntactic;
  if (std::find(kSemantic.begin(), kSemantic.end(), name) != kSemantic.end())
    return Group::semantic;
  return Group::other;
}

std::vector<Question> read_dataset(
    const std::string& path,
    const std::optional<corpus::NormalizationRules>& rules) {
  std::ifstream in(path);
  if (!in) throw StreamError(path, "cannot open for reading");
  std::vector<Question> out;
  std::string line, category = "uncategorized";
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (line[0] == ':') {
      std::istringstream ss(line.substr(1));
      if (!(ss >> category))
        throw ParseError("empty category header", line_no);
      continue;
    }
    std::istringstream ss(line);
    std::vector<std::string> words;
    for (std::string w; ss >> w;) words.push_back(std::move(w));
    if (words.size() != 4)
      throw ParseError("expected 4 tokens, found " +
                           std::to_string(words.size()),
                       line_no);
    if (rules)
      for (auto& w : words) w = corpus::normalize_text(w, *rules);
    out.push_back({words[0], words[1], words[2], words[3], category});
  }
  return out;
}

std::optional<Prediction> solve(const KeyedVectors& model, std::string_view a,
                                std::string_view b, std::string_view c) {
  const auto va = model.variants(a);
  const auto vb = model.variants(b);
  const auto vc = model.variants(c);
  if (va.empty() || vb.empty() || vc.empty()) return std::nullopt;

  std::vector<char> excluded(static_cast<std::size_t>(model.size()), 0);
  for (auto span : {va, vb, vc})
    for (Index r : span) excluded[static_cast<std::size_t>(r)] = 1;

  // dot(unit(x), v(r)) for every variant r, so each combination costs one
  // vector sum instead of a full matrix product.
  auto dots = [&](std::span<const Index> rows) {
    std::vector<Vector<float>> out;
    for (Index r : rows)
      out.push_back(model.unit() * model.vector(r).transpose());
    return out;
  };
  const auto da = dots(va), db = dots(vb), dc = dots(vc);

  Index best = -1;
  float best_score = 0.0f;
  auto better = [&](Index r, float score) {
    if (best < 0 || score > best_score) return true;
    return score == best_score && model.key(r) < model.key(best);
  };

  Vector<float> scores(model.size());
  for (std::size_t i = 0; i < va.size(); ++i) {
    for (std::size_t j = 0; j < vb.size(); ++j) {
      for (std::size_t k = 0; k < vc.size(); ++k) {
        const RowVector<float> target = model.vector(vb[j]) +
                                        model.vector(vc[k]) -
                                        model.vector(va[i]);
        const float norm = target.norm();
        if (norm > 0.0f)
          scores = (db[j] + dc[k] - da[i]) / norm;
        else
          scores.setZero();
        for (Index r = 0; r < model.size(); ++r) {
          if (excluded[static_cast<std::size_t>(r)]) continue;
          if (better(r, scores[r])) {
            best = r;
            best_score = scores[r];
          }
        }
      }
    }
  }
  if (best < 0) return std::nullopt;
  return Prediction{model.key(best), model.surface(best),
                    static_cast<double>(best_score)};
}

double Score::accuracy(bool coverage_only) const {
  const std::size_t denom = coverage_only ? attempted : total();
  return denom ? static_cast<double>(correct) / static_cast<double>(denom)
               : 0.0;
}

Score& Score::operator+=(const Score& other) {
  attempted += other.attempted;
  skipped += other.skipped;
  correct += other.correct;
  return *this;
}

Report evaluate(const KeyedVectors& model,
                const std::vector<Question>& questions,
                const Options& options) {
  // 0 = skipped, 1 = wrong, 2 = correct
  std::vector<char> outcome(questions.size(), 0);
  auto run = [&](std::size_t begin, std::size_t end) {
    for (std::size_t q = begin; q < end; ++q) {
      const auto& item = questions[q];
      const auto pred = solve(model, item.a, item.b, item.c);
      if (!pred) continue;
      outcome[q] = pred->surface == item.d ? 2 : 1;
    }
  };
  const auto workers = static_cast<std::size_t>(std::max(1, options.workers));
  if (workers == 1) {
    run(0, questions.size());
  } else {
    std::vector<std::jthread> threads;
    for (std::size_t w = 0; w < workers; ++w)
      threads.emplace_back(run, questions.size() * w / workers,
                           questions.size() * (w + 1) / workers);
  }

  Report report;
  report.coverage_only = options.coverage_only;
  for (std::size_t q = 0; q < questions.size(); ++q) {
    const auto& name = questions[q].category;
    auto it = std::find_if(report.categories.begin(), report.categories.end(),
                           [&](const Score& s) { return s.name == name; });
    if (it == report.categories.end()) {
      report.categories.push_back({name, category_group(name)});
      it = std::prev(report.categories.end());
    }
    if (outcome[q] == 0) {
      ++it->skipped;
    } else {
      ++it->attempted;
      if (outcome[q] == 2) ++it->correct;
    }
  }
  for (const auto& s : report.categories) {
    if (s.group == Group::syntactic) report.syntactic += s;
    if (s.group == Group::semantic) report.semantic += s;
    report.all += s;
  }
  return report;
}

void Report::print(std::ostream& out) const {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-28s %9s %8s %8s %9s\n", "category",
                "attempted", "skipped", "correct", "accuracy");
  out << buf;
  auto row = [&](const Score& s) {
    std::snprintf(buf, sizeof buf, "%-28s %9zu %8zu %8zu %8.1f%%\n",
                  s.name.c_str(), s.attempted, s.skipped, s.correct,
                  100.0 * s.accuracy(coverage_only));
    out << buf;
  };
  for (const auto& s : categories) row(s);
  out << std::string(66, '-') << '\n';
  row(syntactic);
  row(semantic);
  row(all);
}

}  // namespace semb::analogy
