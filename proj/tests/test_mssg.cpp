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

#include <doctest.h>

#include "semb/mssg.hpp"
#include "synthetic.hpp"

using namespace semb;

namespace {

// Two-word model with hand-set global vectors and K senses.
SenseModel<double> toy_model(int senses, const RowMatrix<double>& global) {
  SenseModel<double> m;
  m.senses = senses;
  const auto words = global.rows();
  std::vector<Vocabulary::Entry> entries;
  for (Eigen::Index w = 0; w < words; ++w)
    entries.push_back({"w" + std::string(1, static_cast<char>('a' + w)),
                       static_cast<std::uint64_t>(words - w)});
  m.vocab = std::make_shared<const Vocabulary>(std::move(entries));
  m.sense_vectors = RowMatrix<double>::Zero(words * senses, global.cols());
  m.centroids = RowMatrix<double>::Zero(words * senses, global.cols());
  m.counts.assign(static_cast<std::size_t>(words * senses), 0);
  m.output = RowMatrix<double>::Zero(words, global.cols());
  m.global = global;
  return m;
}

RowMatrix<double> rows(std::initializer_list<std::initializer_list<double>> r) {
  RowMatrix<double> m(static_cast<Eigen::Index>(r.size()),
                      static_cast<Eigen::Index>(r.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& row : r) {
    Eigen::Index j = 0;
    for (double x : row) m(i, j++) = x;
    ++i;
  }
  return m;
}

RowVector<double> vec(std::initializer_list<double> v) {
  RowVector<double> r(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) r(i++) = x;
  return r;
}

TrainingConfig small_config() {
  TrainingConfig c;
  c.dim = 12;
  c.window = 3;
  c.min_count = 1;
  c.negatives = 3;
  c.epochs = 2;
  c.subsample_t = 0.0;
  c.seed = 9;
  return c;
}

}  // namespace

TEST_SUITE("mssg") {

TEST_CASE("context vector averages global rows") {
  const auto m = toy_model(2, rows({{1, 0}, {0, 1}, {-1, 0}}));
  const WordId both[] = {0, 1};
  CHECK(context_vector<double>(both, m).isApprox(rows({{0.5, 0.5}})));
  const WordId one[] = {1};
  CHECK(context_vector<double>(one, m) == m.global.row(1));
  const WordId cancel[] = {0, 2};
  CHECK(context_vector<double>(cancel, m).isZero(0.0));
}

TEST_CASE("inverse-frequency weighting favours rare words") {
  auto m = toy_model(1, rows({{1, 0}, {0, 1}}));
  m.options.weighting = ContextWeighting::inverse_frequency;
  const WordId both[] = {0, 1};  // counts 2 and 1
  const RowVector<double> ctx = context_vector<double>(both, m);
  CHECK(ctx(0) == doctest::Approx(1.0 / 3.0));
  CHECK(ctx(1) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("predict_sense takes the closest centroid") {
  auto m = toy_model(2, rows({{1, 0}, {0, 1}}));
  m.centroid(0, 0) << 1, 0;
  m.centroid(0, 1) << 0, 1;
  m.counts = {3, 3, 0, 0};
  CHECK(predict_sense(0, vec({0.9, 0.1}), m) == 0);
  CHECK(predict_sense(0, vec({0.1, 0.9}), m) == 1);
}

TEST_CASE("all-empty clusters pick sense 0") {
  const auto m = toy_model(3, rows({{1, 0}, {0, 1}}));
  CHECK(predict_sense(0, vec({0.3, 0.7}), m) == 0);
}

TEST_CASE("a non-positive best similarity opens an empty cluster") {
  auto m = toy_model(2, rows({{1, 0}, {0, 1}}));
  m.centroid(0, 0) << 1, 0;
  m.counts = {5, 0, 0, 0};
  CHECK(predict_sense(0, vec({-1, 0}), m) == 1);
}

TEST_CASE("exact ties go to the lowest index") {
  auto m = toy_model(2, rows({{1, 0}, {0, 1}}));
  m.centroid(0, 0) << 1, 0;
  m.centroid(0, 1) << 0, 1;
  m.counts = {1, 1, 0, 0};
  CHECK(predict_sense(0, vec({1, 1}), m) == 0);
}

TEST_CASE("running-mean centroid updates") {
  auto m = toy_model(1, rows({{1, 0}}));
  update_centroid(0, 0, vec({2, 4}), m);
  CHECK(m.centroid(0, 0) == rows({{2, 4}}));
  CHECK(m.count(0, 0) == 1);

  m.centroid(0, 0) << 1, 0;
  update_centroid(0, 0, vec({0, 1}), m);
  CHECK(m.centroid(0, 0).isApprox(rows({{0.5, 0.5}})));
  CHECK(m.count(0, 0) == 2);
}

TEST_CASE("repeating one context is a fixed point") {
  auto m = toy_model(1, rows({{1, 0}}));
  const auto x = vec({0.3, -0.7});
  for (int i = 0; i < 50; ++i) update_centroid(0, 0, x, m);
  CHECK(m.centroid(0, 0) == x);
  m.options.centroid_update = CentroidUpdate::gradient;
  for (int i = 0; i < 50; ++i) update_centroid(0, 0, x, m, 0.3);
  CHECK(m.centroid(0, 0) == x);
}

TEST_CASE("gradient centroid mode steps toward the context") {
  auto m = toy_model(1, rows({{1, 0}}));
  m.options.centroid_update = CentroidUpdate::gradient;
  update_centroid(0, 0, vec({1, 0}), m, 0.25);
  update_centroid(0, 0, vec({0, 1}), m, 0.25);
  CHECK(m.centroid(0, 0).isApprox(rows({{0.75, 0.25}})));
}

TEST_CASE("sense neighbours rank global vectors") {
  auto m = toy_model(1, rows({{0, 0}, {0.99, 0.01}, {0, 1}}));
  m.sense(0, 0) << 1, 0;
  m.counts[0] = 1;
  const auto nn = sense_neighbors(0, 0, 1, m);
  REQUIRE(nn.size() == 1);
  CHECK(nn[0].token == "wb");
  CHECK(sense_neighbors(0, 0, 0, m).empty());
  const auto all = sense_neighbors(0, 0, 10, m);
  CHECK(all.size() == 2);
  for (const auto& n : all) CHECK(n.token != "wa");
  m.counts[0] = 0;
  CHECK_THROWS_AS(sense_neighbors(0, 0, 1, m), EmptySenseError);
}

TEST_CASE("zero epochs leaves clusters empty") {
  testing::TempFile f("c.txt");
  f.write("a b c\nc b a\n");
  auto cfg = small_config();
  cfg.epochs = 0;
  const auto m = train_mssg<double>(corpus::CorpusSource{f.path()}, cfg);
  for (auto n : m.counts) CHECK(n == 0);
  CHECK(m.centroids.isZero(0.0));
}

TEST_CASE("one sense reproduces skip-gram exactly") {
  testing::TempFile f("c.txt");
  testing::TopicCorpusSpec spec;
  spec.sentences_per_topic = 150;
  spec.words_per_topic = 25;
  testing::make_topic_corpus(spec).write(f.path());
  auto cfg = small_config();
  cfg.senses = 1;
  const corpus::CorpusSource src{f.path()};
  const auto sg = train<double>(src, cfg);
  for (auto matrix : {ContextMatrix::trained, ContextMatrix::tied}) {
    MssgOptions opts;
    opts.context_matrix = matrix;
    const auto ms = train_mssg<double>(src, cfg, opts);
    CHECK(ms.sense_vectors == sg.input);
    CHECK(ms.output == sg.output);
  }
}

TEST_CASE("tied mode materializes G as the mean of used senses") {
  testing::TempFile f("c.txt");
  f.write("a b c d\nd c b a\na c\n");
  auto cfg = small_config();
  cfg.senses = 2;
  MssgOptions opts;
  opts.context_matrix = ContextMatrix::tied;
  const auto m = train_mssg<double>(corpus::CorpusSource{f.path()}, cfg, opts);
  for (WordId w = 0; w < static_cast<WordId>(m.words()); ++w) {
    RowVector<double> acc = RowVector<double>::Zero(m.dim());
    int used = 0;
    for (int k = 0; k < m.senses; ++k)
      if (m.count(w, k) > 0) {
        acc += m.sense(w, k);
        ++used;
      }
    REQUIRE(used > 0);
    CHECK(m.global.row(w).isApprox(acc / used));
  }
}

TEST_CASE("infer_sense needs a context") {
  auto m = toy_model(2, rows({{1, 0}, {0, 1}}));
  const WordId alone[] = {0};
  CHECK(infer_sense(m, alone, 0, 5) == -1);
  const WordId pair[] = {0, 1};
  CHECK(infer_sense(m, pair, 0, 5) == 0);
}

TEST_CASE("multi-worker training keeps counts consistent") {
  testing::TempFile f("c.txt");
  testing::TopicCorpusSpec spec;
  spec.sentences_per_topic = 300;
  spec.pseudo_word = "zz";
  testing::make_topic_corpus(spec).write(f.path());
  auto cfg = small_config();
  cfg.senses = 2;
  cfg.workers = 3;
  cfg.epochs = 1;
  const auto m = train_mssg<float>(corpus::CorpusSource{f.path()}, cfg);
  std::uint64_t total = 0;
  for (auto n : m.counts) total += n;
  CHECK(total == m.stats.tokens_processed);
  CHECK(m.sense_vectors.allFinite());
}

}  // TEST_SUITE
