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

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "semb/sgns.hpp"
#include "synthetic.hpp"

using namespace semb;

namespace {

TrainingConfig small_config() {
  TrainingConfig c;
  c.dim = 16;
  c.window = 3;
  c.min_count = 1;
  c.negatives = 3;
  c.epochs = 2;
  c.subsample_t = 0.0;
  c.seed = 5;
  return c;
}

}  // namespace

TEST_SUITE("sgns") {

TEST_CASE("zero vectors with one negative lose 2 log 2") {
  RowMatrix<double> out = RowMatrix<double>::Zero(2, 4);
  RowVector<double> w = RowVector<double>::Zero(4), grad(4);
  const WordId neg[] = {1};
  const double loss = sgns_step<double>(w, out, 0, neg, 0.1, grad);
  CHECK(loss == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-12));
  CHECK(loss == doctest::Approx(1.3863).epsilon(1e-4));
}

TEST_CASE("hand-evaluated single update") {
  RowMatrix<double> out(1, 2);
  out << 0.1, 0.0;
  RowVector<double> w(2), grad(2);
  w << 0.1, 0.0;
  sgns_step<double>(w, out, 0, {}, 1.0, grad);
  const double g = 1.0 - 1.0 / (1.0 + std::exp(-0.01));
  CHECK(out(0, 0) == doctest::Approx(0.1 + g * 0.1).epsilon(1e-15));
  CHECK(out(0, 0) == doctest::Approx(0.14975).epsilon(1e-5));
  CHECK(out(0, 1) == 0.0);
  CHECK(w(0) == doctest::Approx(0.1 + g * 0.1).epsilon(1e-15));
}

TEST_CASE("analytic gradient matches finite differences") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const auto cfg = oracle::random_sgns_config(rng, 10);
    CHECK(oracle::sgns_gradient_error(cfg) < 1e-4);
  }
}

TEST_CASE("update_output=false leaves output untouched") {
  RowMatrix<double> out = RowMatrix<double>::Random(3, 4);
  const RowMatrix<double> before = out;
  RowVector<double> w = RowVector<double>::Random(4), grad(4);
  const WordId neg[] = {1, 2};
  sgns_step<double>(w, out, 0, neg, 0.5, grad, false);
  CHECK(out == before);
}

TEST_CASE("zero epochs returns the initialization") {
  testing::TempFile f("c.txt");
  f.write("a b c\nb c d\n");
  auto cfg = small_config();
  cfg.epochs = 0;
  const auto m = train<double>(corpus::CorpusSource{f.path()}, cfg);
  RowMatrix<double> init(m.input.rows(), m.input.cols());
  std::mt19937_64 rng(cfg.seed);
  init_uniform(init, rng);
  CHECK(m.input == init);
  CHECK(m.output.isZero(0.0));
}

TEST_CASE("single worker training is bit-reproducible") {
  testing::TempFile f("c.txt");
  testing::TopicCorpusSpec spec;
  spec.sentences_per_topic = 200;
  spec.words_per_topic = 30;
  testing::make_topic_corpus(spec).write(f.path());
  const auto cfg = small_config();
  const auto a = train<float>(corpus::CorpusSource{f.path()}, cfg);
  const auto b = train<float>(corpus::CorpusSource{f.path()}, cfg);
  CHECK(a.input == b.input);
  CHECK(a.output == b.output);
  CHECK(a.stats.epoch_loss == b.stats.epoch_loss);
}

TEST_CASE("topics separate in embedding space") {
  testing::TempFile f("topics.txt");
  testing::TopicCorpusSpec spec;
  spec.words_per_topic = 40;
  spec.sentences_per_topic = 1500;
  testing::make_topic_corpus(spec).write(f.path());
  auto cfg = small_config();
  cfg.dim = 50;
  cfg.epochs = 5;
  cfg.window = 5;
  cfg.negatives = 5;
  const auto m = train<double>(corpus::CorpusSource{f.path()}, cfg);
  double intra = 0.0, inter = 0.0;
  std::size_t n_intra = 0, n_inter = 0;
  for (WordId i = 0; i < static_cast<WordId>(m.vocab->size()); ++i) {
    for (WordId j = i + 1; j < static_cast<WordId>(m.vocab->size()); ++j) {
      const double c = cosine(m.input.row(i), m.input.row(j));
      if (testing::topic_of(m.vocab->token(i)) ==
          testing::topic_of(m.vocab->token(j))) {
        intra += c;
        ++n_intra;
      } else {
        inter += c;
        ++n_inter;
      }
    }
  }
  intra /= static_cast<double>(n_intra);
  inter /= static_cast<double>(n_inter);
  CHECK(intra - inter >= 0.2);
  CHECK(m.stats.epoch_loss.back() < m.stats.epoch_loss.front());
}

TEST_CASE("tagged training separates noun and verb readings") {
  testing::TempFile f("tagged.txt");
  f.write("o/ART relógio/N marca/V 00h/N\na/ART marca/N famosa/ADJ\n");
  auto cfg = small_config();
  const auto m = train_sense2vec<float>(corpus::CorpusSource{f.path()}, cfg);
  CHECK(m.key_kind == keys::KeyKind::tagged);
  const auto n = m.vocab->find("marca|N");
  const auto v = m.vocab->find("marca|V");
  REQUIRE(n);
  REQUIRE(v);
  CHECK(*n != *v);
  CHECK_FALSE(m.vocab->find("marca"));
}

TEST_CASE("untagged corpus in tagged mode is a parse error") {
  testing::TempFile f("raw.txt");
  f.write("sem etiquetas aqui\n");
  CHECK_THROWS_AS(
      train_sense2vec<float>(corpus::CorpusSource{f.path()}, small_config()),
      ParseError);
}

TEST_CASE("one shared tag reproduces plain training") {
  testing::TempFile plain("plain.txt"), tagged("tagged.txt");
  testing::TopicCorpusSpec spec;
  spec.sentences_per_topic = 100;
  spec.words_per_topic = 20;
  const auto corpus = testing::make_topic_corpus(spec);
  corpus.write(plain.path());
  {
    std::ofstream out(tagged.path());
    for (const auto& s : corpus.sentences) {
      for (std::size_t i = 0; i < s.size(); ++i)
        out << (i ? " " : "") << s[i] << "/T";
      out << '\n';
    }
  }
  const auto cfg = small_config();
  const auto a = train<double>(corpus::CorpusSource{plain.path()}, cfg);
  const auto b = train_sense2vec<double>(corpus::CorpusSource{tagged.path()}, cfg);
  REQUIRE(a.vocab->size() == b.vocab->size());
  for (WordId i = 0; i < static_cast<WordId>(a.vocab->size()); ++i)
    CHECK(b.vocab->token(i) == a.vocab->token(i) + "|T");
  CHECK(a.input == b.input);
  CHECK(a.output == b.output);
}

TEST_CASE("checkpoints fire every N tokens") {
  testing::TempFile f("c.txt");
  std::string text;
  for (int i = 0; i < 100; ++i) text += "a b c d e\n";
  f.write(text);
  auto cfg = small_config();
  cfg.epochs = 1;
  cfg.checkpoint_every = 100;
  std::vector<std::uint64_t> seen;
  TrainHooks<EmbeddingModel<float>> hooks;
  hooks.checkpoint = [&](const EmbeddingModel<float>&, std::uint64_t tokens) {
    seen.push_back(tokens);
  };
  train<float>(corpus::CorpusSource{f.path()}, cfg, hooks);
  CHECK(seen.size() == 5);
  CHECK(seen.front() == 100);
}

TEST_CASE("learning rate decays linearly to a floor") {
  TrainingConfig cfg;
  cfg.lr0 = 0.1;
  CHECK(cfg.learning_rate(0, 99) == doctest::Approx(0.1));
  CHECK(cfg.learning_rate(50, 99) == doctest::Approx(0.05));
  CHECK(cfg.learning_rate(100, 99) == doctest::Approx(0.1 * TrainingConfig::kLrFloor));
  cfg.lr_decay = LrDecay::constant;
  CHECK(cfg.learning_rate(100, 99) == 0.1);
}

TEST_CASE("invalid configuration is rejected") {
  TrainingConfig cfg;
  cfg.dim = 0;
  CHECK_THROWS_AS(cfg.validate(), UsageError);
  cfg = {};
  cfg.workers = 0;
  CHECK_THROWS_AS(cfg.validate(), UsageError);
}

TEST_CASE("divergence is reported with the step") {
  testing::TempFile f("c.txt");
  f.write("a b a b a b\n");
  auto cfg = small_config();
  cfg.lr0 = 1e30;
  cfg.lr_decay = LrDecay::constant;
  CHECK_THROWS_AS(train<float>(corpus::CorpusSource{f.path()}, cfg),
                  DivergedError);
}

TEST_CASE("several workers train without error") {
  testing::TempFile f("c.txt");
  testing::TopicCorpusSpec spec;
  spec.sentences_per_topic = 300;
  testing::make_topic_corpus(spec).write(f.path());
  auto cfg = small_config();
  cfg.workers = 3;
  const auto m = train<float>(corpus::CorpusSource{f.path()}, cfg);
  CHECK(m.input.allFinite());
  CHECK(m.stats.tokens_processed == 2u * 2 * 300 * 10);
}

}  // TEST_SUITE
