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

// Acceptance suite: one PASS/FAIL line per criterion A1..A10. Tolerances
// are pinned below. A9 measures multi-core scaling and is informative: its
// line is printed but it does not affect the exit status.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "analogy_fixture.hpp"
#include "oracles.hpp"
#include "semb/analogy.hpp"
#include "semb/corpus.hpp"
#include "semb/mssg.hpp"
#include "semb/sgns.hpp"
#include "semb/sts.hpp"
#include "semb/vecio.hpp"
#include "semb/wsd.hpp"
#include "sts_fixture.hpp"
#include "synthetic.hpp"
#include "wsd_fixture.hpp"

using namespace semb;

namespace {

// A1
constexpr int kGradConfigs = 100;
constexpr int kGradDim = 10;
constexpr double kGradRelError = 1e-4;
constexpr double kGradSeconds = 5.0;
// A2
constexpr int kSepSentencesPerTopic = 50'000;
constexpr int kSepWordsPerTopic = 200;
constexpr double kSepPurity = 0.90;
constexpr double kSepNeighborShare = 0.80;
constexpr double kSepSeconds = 120.0;
// A3
constexpr double kDegeneracyTolerance = 1e-12;
constexpr std::uint64_t kDegeneracyTokens = 100'000;
// A5
constexpr int kStsPairs = 1000;
constexpr double kStsNoise = 0.1;
constexpr double kStsRho = 0.95;
constexpr double kStsMse = 0.01;
// A6
constexpr double kWsdMethod = 0.80;
constexpr double kWsdMfs = 0.50;
// A7
constexpr int kFilterTrials = 1000;
// A8
constexpr double kCosineDrift = 1e-6;
constexpr double kCentroTolerance = 1e-12;
// A9
constexpr std::uint64_t kBenchTokens = 10'000'000;
constexpr double kBenchSpeedup = 2.5;
// A10
constexpr int kFuzzLines = 10'000;

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

Outcome a1_gradient() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2026);
  double worst = 0.0;
  for (int i = 0; i < kGradConfigs; ++i)
    worst = std::max(worst, oracle::sgns_gradient_error(
                                oracle::random_sgns_config(rng, kGradDim)));
  const double secs = seconds_since(t0);
  return {worst <= kGradRelError && secs < kGradSeconds,
          fmt("max relative error %.3g over %d configs, %.2fs", worst,
              kGradConfigs, secs)};
}

Outcome a2_sense_separation() {
  testing::TopicCorpusSpec spec;
  spec.topics = 2;
  spec.words_per_topic = kSepWordsPerTopic;
  spec.sentences_per_topic = kSepSentencesPerTopic;
  spec.pseudo_word = "pseudo";
  spec.seed = 17;
  const auto corpus = testing::make_topic_corpus(spec);
  testing::TempFile file("a2.txt");
  corpus.write(file.path());

  TrainingConfig cfg;
  cfg.dim = 50;
  cfg.senses = 2;
  cfg.epochs = 5;
  cfg.min_count = 1;
  cfg.subsample_t = 0.0;
  cfg.workers = 1;
  cfg.seed = 3;
  // One negative keeps within-topic dot products unshifted, so the two
  // topics' context means end up anti-correlated. With more negatives they
  // share a positive component and a second cluster is only opened by
  // contexts with similarity <= 0, so every occurrence stays in one sense.
  cfg.negatives = 1;
  const auto t0 = Clock::now();
  const auto model = train_mssg<float>(corpus::CorpusSource{file.path()}, cfg);
  const double secs = seconds_since(t0);

  const WordId pseudo = *model.vocab->find("pseudo");
  // counts[k][topic]
  std::vector<std::array<std::size_t, 2>> counts(2, {0, 0});
  std::vector<WordId> ids;
  for (std::size_t s = 0; s < corpus.sentences.size(); ++s) {
    ids.clear();
    for (const auto& t : corpus.sentences[s]) ids.push_back(*model.vocab->find(t));
    const int k = infer_sense(model, ids, corpus.position[s], cfg.window);
    if (k >= 0) ++counts[static_cast<std::size_t>(k)][static_cast<std::size_t>(corpus.topic[s])];
  }
  std::size_t agree = 0, total = 0;
  for (const auto& c : counts) {
    agree += std::max(c[0], c[1]);
    total += c[0] + c[1];
  }
  const double purity = static_cast<double>(agree) / static_cast<double>(total);

  double worst_share = 1.0;
  for (int k = 0; k < 2; ++k) {
    const auto& c = counts[static_cast<std::size_t>(k)];
    const int own = c[0] >= c[1] ? 0 : 1;
    if (model.count(pseudo, k) == 0) {
      worst_share = 0.0;
      continue;
    }
    const auto top = sense_neighbors(pseudo, k, 10, model);
    std::size_t same = 0;
    for (const auto& n : top) same += testing::topic_of(n.token) == own;
    worst_share = std::min(worst_share, static_cast<double>(same) /
                                            static_cast<double>(top.size()));
  }
  return {purity >= kSepPurity && worst_share >= kSepNeighborShare &&
              secs < kSepSeconds,
          fmt("purity %.4f, min own-topic neighbour share %.2f, training %.1fs",
              purity, worst_share, secs)};
}

Outcome a3_degeneracy() {
  testing::TopicCorpusSpec spec;
  spec.words_per_topic = 100;
  spec.sentences_per_topic =
      static_cast<int>(kDegeneracyTokens / (2 * static_cast<std::uint64_t>(spec.sentence_length)));
  testing::TempFile file("a3.txt");
  const auto corpus = testing::make_topic_corpus(spec);
  corpus.write(file.path());

  TrainingConfig cfg;
  cfg.dim = 32;
  cfg.senses = 1;
  cfg.epochs = 2;
  cfg.min_count = 1;
  cfg.workers = 1;
  const corpus::CorpusSource src{file.path()};
  const auto sg = train<double>(src, cfg);
  const auto ms = train_mssg<double>(src, cfg);
  const double d_in = (ms.sense_vectors - sg.input).cwiseAbs().maxCoeff();
  const double d_out = (ms.output - sg.output).cwiseAbs().maxCoeff();
  return {d_in <= kDegeneracyTolerance && d_out <= kDegeneracyTolerance &&
              sg.stats.tokens_processed >= 2 * kDegeneracyTokens,
          fmt("max |S - W_in| %.3g, max |W_out diff| %.3g over %zu tokens/epoch",
              d_in, d_out, corpus.tokens())};
}

Outcome a4_analogy() {
  const auto fx = analogy_fixture::build();
  testing::TempFile q("a4.txt"), mixed("a4m.txt");
  q.write(fx.questions);
  const auto questions = analogy::read_dataset(q.path());
  const auto report = analogy::evaluate(fx.vectors, questions);
  bool per_category = report.categories.size() >= 3 && questions.size() >= 20;
  for (const auto& c : report.categories) per_category &= c.accuracy(false) == 1.0;

  mixed.write(analogy_fixture::mixed_questions());
  const auto m = analogy::evaluate(fx.vectors, analogy::read_dataset(mixed.path()));
  const bool bookkeeping = m.all.total() == 10 && m.all.skipped == 3 &&
                           m.all.accuracy(false) ==
                               static_cast<double>(m.all.correct) / 10.0;
  return {per_category && bookkeeping,
          fmt("%zu questions in %zu categories at 100%%: %s; mixed file %zu/10 "
              "correct, %zu skipped, accuracy %.2f",
              questions.size(), report.categories.size(),
              per_category ? "yes" : "no", m.all.correct, m.all.skipped,
              m.all.accuracy(false))};
}

Outcome a5_sts() {
  const auto fx = sts_fixture::build(kStsPairs, kStsNoise, 5);
  const auto report = sts::evaluate(fx.pairs, fx.pairs, {&fx.vectors});
  const std::vector<double> xs{1, 2, 3, 4}, ys{1, 3, 2, 4};
  const double r = sts::pearson(xs, ys);
  const auto sig = sts::pearson_significance(0.5, 102);
  const bool ok = report.rho >= kStsRho && report.mse <= kStsMse && r == 0.8 &&
                  std::abs(sig.t - 5.7735) < 1e-4 && sig.p < 0.01;
  return {ok, fmt("rho %.4f, mse %.5f, pearson example %.17g, t %.4f p %.3g",
                  report.rho, report.mse, r, sig.t, sig.p)};
}

// MFS on a balanced two-sense sample labels exactly half the instances
// correctly; that hit rate is the 0.50 pinned here. Its weighted precision
// is 0.5 * 0.5 = 0.25 and is required to sit below the method's.
Outcome a6_wsd() {
  const auto fx = wsd_fixture::build(50, 0.2f, 6);
  const auto report = wsd::evaluate(fx.model, fx.instances);
  std::map<std::string, std::vector<std::string>> golds;
  for (const auto& inst : fx.instances) golds[inst.lemma].push_back(inst.gold);
  std::size_t hits = 0, total = 0;
  for (const auto& [word, g] : golds) {
    const auto mfs = wsd::mfs_baseline(g);
    for (std::size_t i = 0; i < g.size(); ++i) hits += mfs[i] == g[i];
    total += g.size();
  }
  const double mfs_hit_rate = static_cast<double>(hits) / static_cast<double>(total);
  return {report.method_average >= kWsdMethod && mfs_hit_rate == kWsdMfs &&
              report.mfs_average < report.method_average &&
              report.averaged == wsd_fixture::kTargetCount,
          fmt("method weighted precision %.4f, MFS hit rate %.4f, MFS weighted "
              "precision %.4f over %zu words",
              report.method_average, mfs_hit_rate, report.mfs_average,
              report.averaged)};
}

Outcome a7_filter_oracle() {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> senses(2, 5), ctx(1, 12), budget(1, 6),
      dim(2, 6);
  std::normal_distribution<double> g(0.0, 1.0);
  int mismatches = 0;
  for (int trial = 0; trial < kFilterTrials; ++trial) {
    const int n = senses(rng), m = ctx(rng), p = budget(rng), d = dim(rng);
    RowMatrix<double> sm(n, d), cm(m, d);
    std::vector<std::vector<double>> sv(static_cast<std::size_t>(n)),
        cv(static_cast<std::size_t>(m));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < d; ++j) sv[static_cast<std::size_t>(i)].push_back(sm(i, j) = g(rng));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < d; ++j) cv[static_cast<std::size_t>(i)].push_back(cm(i, j) = g(rng));
    const auto got = wsd::filter_context(sm, cm, static_cast<std::size_t>(p));
    if (std::set<std::size_t>(got.begin(), got.end()) !=
        oracle::brute_force_top_p(sv, cv, static_cast<std::size_t>(p)))
      ++mismatches;
  }
  return {mismatches == 0,
          fmt("%d mismatches in %d random instances", mismatches, kFilterTrials)};
}

Outcome a8_serialization() {
  std::mt19937_64 rng(8);
  std::normal_distribution<float> g(0.0f, 1.0f);
  const int rows = 200, dim = 50;
  std::vector<std::string> keys;
  RowMatrix<float> m(rows, dim);
  for (int r = 0; r < rows; ++r) {
    keys.push_back(keys::word_key("w" + std::to_string(r)));
    const float scale = std::pow(10.0f, static_cast<float>(r % 7 - 3));
    for (int c = 0; c < dim; ++c) m(r, c) = g(rng) * scale;
  }
  const KeyedVectors kv(keys, m, keys::KeyKind::plain);
  testing::TempFile text("a8.txt"), bin("a8.bin");
  vecio::save_text(kv, text.path(), 9);
  vecio::save_binary(kv, bin.path());
  const auto t = vecio::load_text(text.path());
  const auto b = vecio::load_binary(bin.path());

  const RowMatrix<double> u1 = kv.unit().cast<double>(), u2 = t.unit().cast<double>();
  const double drift = ((u1 * u1.transpose()) - (u2 * u2.transpose())).cwiseAbs().maxCoeff();
  const bool exact = b.keys() == kv.keys() &&
                     std::memcmp(b.matrix().data(), kv.matrix().data(),
                                 sizeof(float) * static_cast<std::size_t>(m.size())) == 0;
  std::vector<std::string> golds(12, "A"), preds(14, "A");
  golds.insert(golds.end(), 2, "B");
  const double wp = wsd::weighted_precision(preds, golds);
  const double want = (12.0 / 14.0) * (12.0 / 14.0);
  return {drift <= kCosineDrift && exact && std::abs(wp - want) <= kCentroTolerance,
          fmt("max cosine drift %.3g, binary bit-exact: %s, weighted precision "
              "%.12f (want %.12f)",
              drift, exact ? "yes" : "no", wp, want)};
}

Outcome a9_throughput() {
  // Written line by line: the token list would not fit comfortably in RAM.
  testing::TempFile file("a9.txt");
  {
    std::ofstream out(file.path());
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<int> word(0, 4999);
    constexpr int kLength = 10;
    for (std::uint64_t s = 0; s < kBenchTokens / kLength; ++s) {
      const int topic = static_cast<int>(s % 2);
      for (int i = 0; i < kLength; ++i)
        out << (i ? " " : "") << testing::topic_word(topic, word(rng));
      out << '\n';
    }
  }
  const corpus::CorpusSource src{file.path()};
  auto vocab = std::make_shared<const Vocabulary>(build_vocab(src, 1));

  TrainingConfig cfg;
  cfg.dim = 100;
  cfg.epochs = 1;
  cfg.min_count = 1;
  cfg.subsample_t = 0.0;
  cfg.workers = 1;
  const auto one = train<float>(src, vocab, cfg).stats;
  cfg.workers = 4;
  const auto four = train<float>(src, vocab, cfg).stats;
  const double speedup = four.tokens_per_second() / one.tokens_per_second();
  return {speedup >= kBenchSpeedup,
          fmt("1 worker %.0f tok/s, 4 workers %.0f tok/s, speedup %.2fx on %u "
              "hardware threads",
              one.tokens_per_second(), four.tokens_per_second(), speedup,
              std::thread::hardware_concurrency())};
}

Outcome a10_preprocessing() {
  using corpus::normalize_text;
  bool forms = normalize_text("relógio marca 10h") == "relógio marca 00h" &&
               corpus::tokenize(normalize_text("O relógio marca 10h."),
                                corpus::NormalizationRules{}) ==
                   std::vector<std::string>{"o", "relógio", "marca", "00h", "."};
  const auto tagged = corpus::read_tagged_line("famosa/ADJ de/PREP");
  forms &= tagged.size() == 2 && tagged[0].surface == "famosa" &&
           tagged[0].tag == "ADJ" && tagged[1].tag == "PREP";
  const auto noun = corpus::read_tagged_line("marca/N");
  forms &= noun.size() == 1 && noun[0].surface == "marca" && noun[0].tag == "N";

  const std::vector<std::string> pieces = {
      "a", "Z", "ç", "Ã", "É", "ü", "Ж", "7", "0", "19", " ", "  ", "@", ".",
      "-", "/", ":", "http", "://", "https://", "www.", "ex", ".com", ".br",
      "URL", "EMAIL", "'", ",", "\t", "mailto:", "_", "h", "Marca"};
  std::mt19937_64 rng(10);
  int failures = 0;
  for (int line = 0; line < kFuzzLines; ++line) {
    std::string s;
    const auto len = rng() % 24;
    for (std::uint64_t i = 0; i < len; ++i) s += pieces[rng() % pieces.size()];
    const std::string once = normalize_text(s);
    failures += normalize_text(once) != once;
  }
  return {forms && failures == 0,
          fmt("surface forms %s, %d idempotence failures in %d lines",
              forms ? "match" : "differ", failures, kFuzzLines)};
}

struct Criterion {
  const char* id;
  const char* name;
  bool gating;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  // Optional arguments select criteria by id, e.g. `semb_acceptance A2 A9`.
  const std::set<std::string> only(argv + 1, argv + argc);
  const std::vector<Criterion> criteria = {
      {"A1", "gradient correctness", true, a1_gradient},
      {"A2", "sense separation", true, a2_sense_separation},
      {"A3", "single-sense degeneracy", true, a3_degeneracy},
      {"A4", "analogy oracle", true, a4_analogy},
      {"A5", "similarity pipeline", true, a5_sts},
      {"A6", "disambiguation beats baseline", true, a6_wsd},
      {"A7", "context filter oracle", true, a7_filter_oracle},
      {"A8", "serialization", true, a8_serialization},
      {"A9", "throughput scaling (informative)", false, a9_throughput},
      {"A10", "preprocessing conformance", true, a10_preprocessing},
  };
  int gating_failures = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass && c.gating) ++gating_failures;
    std::printf("%-4s %s  %s: %s\n", c.id, o.pass ? "PASS" : "FAIL", c.name,
                o.detail.c_str());
    std::fflush(stdout);
  }
  return gating_failures == 0 ? 0 : 1;
}
