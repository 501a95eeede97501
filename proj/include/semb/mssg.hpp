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

// Multiple-Sense Skip-Gram with a fixed number of senses per word.
//
// Every word w carries K sense vectors S(w,k) and K context-cluster
// centroids mu(w,k) with assignment counts n(w,k). For each occurrence the
// context is summarised by averaging global word vectors G of the
// surrounding words; the sense whose centroid is most similar to that
// summary is selected, its centroid absorbs the context, and S(w,k) takes
// an ordinary SGNS step against the shared output matrix U.
//
// Invariants: n(w,k) == 0 iff mu(w,k) was never assigned (zero vector), and
// sum_k n(w,k) equals the number of processed occurrences of w that had a
// non-empty context.

#pragma once

#include <algorithm>
#include <atomic>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "semb/sgns.hpp"

namespace semb {

enum class ContextMatrix { trained, tied };
enum class CentroidUpdate { running_mean, gradient };
enum class ContextWeighting { uniform, inverse_frequency };

struct MssgOptions {
  ContextMatrix context_matrix = ContextMatrix::trained;
  CentroidUpdate centroid_update = CentroidUpdate::running_mean;
  ContextWeighting weighting = ContextWeighting::uniform;
};

class EmptySenseError : public DataError {
 public:
  EmptySenseError(const std::string& word, int sense)
      : DataError("sense " + std::to_string(sense) + " of '" + word +
                  "' was never assigned") {}
};

template <typename Scalar>
struct SenseModel {
  int senses = 1;
  RowMatrix<Scalar> sense_vectors;    // S, (V*K) x dim, row w*K + k
  RowMatrix<Scalar> centroids;        // mu, (V*K) x dim
  std::vector<std::uint64_t> counts;  // n, V*K
  RowMatrix<Scalar> output;           // U, V x dim
  RowMatrix<Scalar> global;           // G, V x dim
  std::shared_ptr<const Vocabulary> vocab;
  MssgOptions options;
  TrainingStats stats;

  Eigen::Index dim() const { return output.cols(); }
  Eigen::Index words() const { return output.rows(); }
  Eigen::Index slot(WordId w, int k) const {
    return static_cast<Eigen::Index>(w) * senses + k;
  }
  auto sense(WordId w, int k) { return sense_vectors.row(slot(w, k)); }
  auto sense(WordId w, int k) const { return sense_vectors.row(slot(w, k)); }
  auto centroid(WordId w, int k) { return centroids.row(slot(w, k)); }
  auto centroid(WordId w, int k) const { return centroids.row(slot(w, k)); }
  std::uint64_t count(WordId w, int k) const {
    return counts[static_cast<std::size_t>(slot(w, k))];
  }

  /// G(w). In tied mode this is the mean of w's assigned sense vectors (all
  /// K of them while none is assigned), computed on demand.
  RowVector<Scalar> global_vector(WordId w) const {
    if (options.context_matrix == ContextMatrix::trained) return global.row(w);
    RowVector<Scalar> acc = RowVector<Scalar>::Zero(dim());
    int used = 0;
    for (int k = 0; k < senses; ++k) {
      if (count(w, k) == 0) continue;
      acc += sense(w, k);
      ++used;
    }
    if (used == 0) {
      for (int k = 0; k < senses; ++k) acc += sense(w, k);
      used = senses;
    }
    return acc / static_cast<Scalar>(used);
  }
};

/// Average of the context words' global vectors. Uniform weights by
/// default; inverse-frequency weights when requested. `context` must be
/// non-empty.
template <typename Scalar>
RowVector<Scalar> context_vector(std::span<const WordId> context,
                                 const SenseModel<Scalar>& model) {
  RowVector<Scalar> ctx = RowVector<Scalar>::Zero(model.dim());
  if (model.options.weighting == ContextWeighting::uniform) {
    for (WordId c : context) ctx += model.global_vector(c);
    return ctx / static_cast<Scalar>(context.size());
  }
  Scalar total(0);
  for (WordId c : context) {
    const Scalar weight =
        Scalar(1) / static_cast<Scalar>(model.vocab->count(c));
    ctx += weight * model.global_vector(c);
    total += weight;
  }
  return ctx / total;
}

/// argmax_k cos(mu(w,k), ctx), lowest index on ties. When the best
/// similarity is <= 0 and some cluster is still empty, the lowest-index
/// empty cluster wins instead.
template <typename Scalar, typename Derived>
int predict_sense(WordId w, const Eigen::MatrixBase<Derived>& ctx,
                  const SenseModel<Scalar>& model) {
  int best = 0;
  Scalar best_sim = cosine(model.centroid(w, 0), ctx);
  for (int k = 1; k < model.senses; ++k) {
    const Scalar sim = cosine(model.centroid(w, k), ctx);
    if (sim > best_sim) {
      best_sim = sim;
      best = k;
    }
  }
  if (best_sim <= Scalar(0)) {
    for (int k = 0; k < model.senses; ++k)
      if (model.count(w, k) == 0) return k;
  }
  return best;
}

/// Folds `ctx` into cluster (w,k) and increments n(w,k). Running-mean mode:
/// mu <- (n mu + ctx) / (n + 1). Gradient mode: the first assignment copies
/// ctx, later ones move mu by lr (ctx - mu).
template <typename Scalar, typename Derived>
void update_centroid(WordId w, int k, const Eigen::MatrixBase<Derived>& ctx,
                     SenseModel<Scalar>& model, Scalar lr = Scalar(0)) {
  auto& slot_count = model.counts[static_cast<std::size_t>(model.slot(w, k))];
  const std::uint64_t n =
      std::atomic_ref<std::uint64_t>(slot_count).fetch_add(
          1, std::memory_order_relaxed);
  auto mu = model.centroid(w, k);
  if (n == 0) {
    mu = ctx;
  } else if (model.options.centroid_update == CentroidUpdate::running_mean) {
    mu += (ctx - mu) / static_cast<Scalar>(n + 1);
  } else {
    mu += lr * (ctx - mu);
  }
}

namespace detail {

template <typename Scalar>
void collect_context(std::span<const WordId> sentence, std::size_t pos,
                     int span, std::vector<WordId>& out) {
  out.clear();
  for_each_context(sentence, pos, span, [&](WordId c) { out.push_back(c); });
}

}  // namespace detail

/// Sense of the word at `pos` given a full (non-shrunk) window of `window`
/// words on each side; -1 when the window holds no other word.
template <typename Scalar>
int infer_sense(const SenseModel<Scalar>& model,
                std::span<const WordId> sentence, std::size_t pos,
                int window) {
  std::vector<WordId> context;
  detail::collect_context<Scalar>(sentence, pos, window, context);
  if (context.empty()) return -1;
  return predict_sense(sentence[pos], context_vector<Scalar>(context, model),
                       model);
}

template <typename Scalar>
SenseModel<Scalar> train_mssg(const corpus::CorpusSource& source,
                              std::shared_ptr<const Vocabulary> vocab,
                              const TrainingConfig& config,
                              const MssgOptions& options = {},
                              const TrainHooks<SenseModel<Scalar>>& hooks = {}) {
  config.validate();
  if (!vocab || vocab->empty()) throw EmptyVocabularyError();

  SenseModel<Scalar> model;
  model.senses = config.senses;
  model.vocab = vocab;
  model.options = options;
  const auto words = static_cast<Eigen::Index>(vocab->size());
  const Eigen::Index slots = words * config.senses;
  model.sense_vectors.resize(slots, config.dim);
  model.centroids.setZero(slots, config.dim);
  model.counts.assign(static_cast<std::size_t>(slots), 0);
  model.output.setZero(words, config.dim);
  // Same stream and order as the SGNS input matrix, so K = 1 reproduces it.
  std::mt19937_64 init_rng(config.seed);
  init_uniform(model.sense_vectors, init_rng);
  if (options.context_matrix == ContextMatrix::trained) {
    model.global.resize(words, config.dim);
    std::mt19937_64 global_rng(config.seed ^ 0xC6A4A7935BD1E995ULL);
    init_uniform(model.global, global_rng);
  }

  struct Scratch {
    RowVector<Scalar> grad;
    RowVector<Scalar> global_grad;
    std::vector<WordId> context;
  };
  std::vector<Scratch> scratch(static_cast<std::size_t>(config.workers));
  for (auto& s : scratch) {
    s.grad.resize(config.dim);
    s.global_grad.resize(config.dim);
  }
  const bool trained_global = options.context_matrix == ContextMatrix::trained;

  auto visit = [&](detail::WorkerState& w, std::span<const WordId> sentence,
                   std::size_t pos, int span, double lr) {
    auto& s = scratch[w.index];
    const WordId center = sentence[pos];
    detail::collect_context<Scalar>(sentence, pos, span, s.context);
    if (s.context.empty()) return;
    const RowVector<Scalar> ctx = context_vector<Scalar>(s.context, model);
    const int k = predict_sense(center, ctx, model);
    update_centroid(center, k, ctx, model, static_cast<Scalar>(lr));
    for (WordId c : s.context) {
      w.draw_negatives(c);
      if (trained_global)
        sgns_step<Scalar>(model.global.row(center), model.output, c,
                          w.negatives, static_cast<Scalar>(lr), s.global_grad,
                          /*update_output=*/false);
      w.record(sgns_step<Scalar>(model.sense(center, k), model.output, c,
                                 w.negatives, static_cast<Scalar>(lr), s.grad));
    }
  };
  std::function<void(std::uint64_t)> checkpoint;
  if (hooks.checkpoint)
    checkpoint = [&](std::uint64_t tokens) { hooks.checkpoint(model, tokens); };
  model.stats = detail::run_skipgram(source, *vocab, config, visit, checkpoint);

  if (!trained_global) {
    model.global.resize(words, config.dim);
    for (Eigen::Index w = 0; w < words; ++w)
      model.global.row(w) = model.global_vector(static_cast<WordId>(w));
    model.options.context_matrix = ContextMatrix::trained;
  }
  return model;
}

template <typename Scalar>
SenseModel<Scalar> train_mssg(const corpus::CorpusSource& source,
                              const TrainingConfig& config,
                              const MssgOptions& options = {},
                              const TrainHooks<SenseModel<Scalar>>& hooks = {}) {
  auto vocab =
      std::make_shared<const Vocabulary>(build_vocab(source, config.min_count));
  return train_mssg<Scalar>(source, std::move(vocab), config, options, hooks);
}

struct SenseNeighbor {
  std::string token;
  double cosine;
};

/// Top-n words by cos(S(w,k), G(u)), u != w; ties by vocabulary id.
template <typename Scalar>
std::vector<SenseNeighbor> sense_neighbors(WordId w, int k, std::size_t n,
                                           const SenseModel<Scalar>& model) {
  if (model.count(w, k) == 0) throw EmptySenseError(model.vocab->token(w), k);
  if (n == 0) return {};
  const auto s = model.sense(w, k);
  std::vector<std::pair<Scalar, WordId>> scored;
  scored.reserve(static_cast<std::size_t>(model.words()));
  for (Eigen::Index u = 0; u < model.words(); ++u) {
    if (u == w) continue;
    scored.emplace_back(cosine(s, model.global_vector(static_cast<WordId>(u))),
                        static_cast<WordId>(u));
  }
  const std::size_t take = std::min(n, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<long>(take),
                    scored.end(), [](const auto& a, const auto& b) {
                      if (a.first != b.first) return a.first > b.first;
                      return a.second < b.second;
                    });
  std::vector<SenseNeighbor> out;
  for (std::size_t i = 0; i < take; ++i)
    out.push_back({model.vocab->token(scored[i].second),
                   static_cast<double>(scored[i].first)});
  return out;
}

}  // namespace semb
