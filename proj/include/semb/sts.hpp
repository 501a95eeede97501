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

// Semantic textual similarity: compose sentence vectors, regress gold
// scores on their cosine, and report Pearson correlation, MSE and the
// t-test for the correlation.

#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "semb/corpus.hpp"
#include "semb/keyed_vectors.hpp"
#include "semb/wsd.hpp"

namespace semb::sts {

inline constexpr double kMinScore = 1.0;
inline constexpr double kMaxScore = 5.0;

struct SentencePair {
  std::string id;
  std::vector<std::string> s1, s2;
  std::optional<double> gold;
};

enum class PairFormat { tsv, assin_xml };

struct ReadOptions {
  PairFormat format = PairFormat::tsv;
  corpus::NormalizationRules rules;
  /// Sentences are PoS-tagged; tokens become surface|TAG keys.
  bool tagged = false;
  char tag_delimiter = '/';
};

/// TSV: "id<TAB>gold<TAB>sentence1<TAB>sentence2" with "-" for a missing
/// gold. assin-xml: <pair id=".." similarity=".."><t>..</t><h>..</h></pair>.
std::vector<SentencePair> read_pairs(const std::string& path,
                                     const ReadOptions& options = {});
std::vector<SentencePair> parse_assin_xml(std::string_view xml,
                                          const ReadOptions& options = {});

enum class Composition { mean, sum };

struct Strategy {
  Composition composition = Composition::mean;
  /// Adds token overlap and length ratio to the cosine feature.
  bool extra_features = false;
  bool clip = true;
  /// Context-filtering settings used to pick senses in sense tables.
  wsd::DisambiguationConfig disambiguation;
};

/// Vector table plus, for sense tables, the context vectors that let each
/// token's sense be chosen from the rest of its sentence.
struct Embedder {
  const KeyedVectors* model = nullptr;
  const KeyedVectors* context = nullptr;
};

struct SentenceEmbedding {
  Vector<double> vector;
  double oov_fraction = 0.0;
};

SentenceEmbedding sentence_embedding(std::span<const std::string> tokens,
                                     const Embedder& embedder,
                                     const Strategy& strategy = {});

/// Regression features for one pair given its two sentence vectors.
std::vector<double> features(const SentencePair& pair,
                             const Vector<double>& e1,
                             const Vector<double>& e2, const Strategy& strategy);

struct Regression {
  std::vector<double> weights;  // weights[0] multiplies the cosine
  double intercept = 0.0;

  double slope() const { return weights.at(0); }
  double raw(std::span<const double> x) const;
};

/// Ordinary least squares. Throws DataError when the design is degenerate
/// (fewer than 2 rows, or a constant / collinear feature).
Regression fit(const std::vector<std::vector<double>>& x,
               std::span<const double> y);
Regression fit(const std::vector<SentencePair>& train, const Embedder& embedder,
               const Strategy& strategy = {});

double predict(const Regression& regression, std::span<const double> x,
               bool clip = true);
double predict(const Regression& regression, const SentencePair& pair,
               const Embedder& embedder, const Strategy& strategy = {});

/// Throws DataError for n < 2, length mismatch or a constant series.
double pearson(std::span<const double> xs, std::span<const double> ys);
double mse(std::span<const double> preds, std::span<const double> golds);

struct Significance {
  double t = 0.0;
  double p = 1.0;
  bool exact_fit = false;
};

/// Two-sided t-test of H0: rho = 0 with n - 2 degrees of freedom.
Significance pearson_significance(double rho, std::size_t n);

/// I_x(a, b).
double regularized_incomplete_beta(double a, double b, double x);

struct Report {
  double rho = 0.0;
  double mse = 0.0;
  std::size_t n = 0;
  Significance significance;
  Regression regression;

  void print(std::ostream& out) const;
};

Report evaluate(const std::vector<SentencePair>& train,
                const std::vector<SentencePair>& test, const Embedder& embedder,
                const Strategy& strategy = {});

/// Scores externally computed sentence vectors. `vectors` holds one row per
/// sentence keyed "<pair id>:1" and "<pair id>:2".
Report evaluate_precomputed(const std::vector<SentencePair>& train,
                            const std::vector<SentencePair>& test,
                            const KeyedVectors& vectors,
                            const Strategy& strategy = {});

}  // namespace semb::sts
