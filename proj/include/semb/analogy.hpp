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

// Word analogy evaluation (a : b :: c : ?) by 3CosAdd: the answer is the
// key closest in cosine to v(b) + v(c) - v(a), never one of a, b, c.
//
// Multi-sense and tagged tables are handled by trying every variant of a,
// b and c and keeping the single best-scoring candidate; answers are
// compared by surface form.

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "semb/corpus.hpp"
#include "semb/keyed_vectors.hpp"

namespace semb::analogy {

struct Question {
  std::string a, b, c, d;
  std::string category;
};

enum class Group { syntactic, semantic, other };

/// Known category names map to their group; anything else is `other`.
Group category_group(std::string_view category);

/// ": category" header lines followed by four tokens per line. Tokens are
/// passed through `rules` when given.
std::vector<Question> read_dataset(
    const std::string& path,
    const std::optional<corpus::NormalizationRules>& rules = std::nullopt);

struct Prediction {
  std::string key;
  std::string surface;
  double cosine = 0.0;
};

/// nullopt when any of a, b, c has no vector.
std::optional<Prediction> solve(const KeyedVectors& model, std::string_view a,
                                std::string_view b, std::string_view c);

struct Score {
  std::string name;
  Group group = Group::other;
  std::size_t attempted = 0;
  std::size_t skipped = 0;
  std::size_t correct = 0;

  std::size_t total() const { return attempted + skipped; }
  /// Strict mode divides by every question; coverage mode by attempted only.
  double accuracy(bool coverage_only = false) const;
  Score& operator+=(const Score& other);
};

struct Report {
  std::vector<Score> categories;  // dataset order
  Score syntactic{"syntactic", Group::syntactic};
  Score semantic{"semantic", Group::semantic};
  Score all{"all", Group::other};
  bool coverage_only = false;

  void print(std::ostream& out) const;
};

struct Options {
  bool coverage_only = false;
  int workers = 1;
};

Report evaluate(const KeyedVectors& model,
                const std::vector<Question>& questions,
                const Options& options = {});

}  // namespace semb::analogy
