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

// Skip-gram with negative sampling. Running the same trainer over tagged
// keys (surface|TAG) gives sense2vec.

#pragma once

#include <memory>
#include <span>

#include "semb/keys.hpp"
#include "semb/skipgram_driver.hpp"

namespace semb {

template <typename Scalar>
struct EmbeddingModel {
  RowMatrix<Scalar> input;   // W, V x dim
  RowMatrix<Scalar> output;  // U, V x dim
  std::shared_ptr<const Vocabulary> vocab;
  keys::KeyKind key_kind = keys::KeyKind::plain;
  TrainingStats stats;

  Eigen::Index dim() const { return input.cols(); }
};

/// One SGD step on
///   L = log s(u_ctx . w) + sum_neg log s(-u_neg . w)
/// at rate `lr`. Updates `center` and, unless `update_output` is false, the
/// touched rows of `output`. Every update uses pre-step values as long as
/// the output ids are distinct. Returns -L before the update. `grad` is
/// scratch space of length dim.
template <typename Scalar>
Scalar sgns_step(Eigen::Ref<RowVector<Scalar>> center,
                 RowMatrix<Scalar>& output, WordId context,
                 std::span<const WordId> negatives, Scalar lr,
                 RowVector<Scalar>& grad, bool update_output = true) {
  grad.setZero(center.size());
  Scalar loss(0);

  auto accumulate = [&](WordId id, Scalar label) {
    auto row = output.row(id);
    const Scalar score = row.dot(center);
    // d(-L)/d(score) = sigma(score) - label
    const Scalar g = label - sigmoid(score);
    loss -= log_sigmoid(label > Scalar(0) ? score : -score);
    grad.noalias() += g * row;
    if (update_output) row.noalias() += (lr * g) * center;
  };

  accumulate(context, Scalar(1));
  for (WordId neg : negatives) accumulate(neg, Scalar(0));
  center.noalias() += lr * grad;
  return loss;
}

template <typename Scalar>
Scalar sgns_step(EmbeddingModel<Scalar>& model, WordId center, WordId context,
                 std::span<const WordId> negatives, Scalar lr) {
  RowVector<Scalar> grad(model.dim());
  return sgns_step<Scalar>(model.input.row(center), model.output, context,
                           negatives, lr, grad);
}

/// Uniform in [-0.5/dim, 0.5/dim], row-major order from `rng`.
template <typename Scalar, typename Rng>
void init_uniform(RowMatrix<Scalar>& m, Rng& rng) {
  const double scale = 1.0 / static_cast<double>(m.cols());
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      m(r, c) =
          static_cast<Scalar>((SamplingTable::uniform01(rng) - 0.5) * scale);
}

template <typename Scalar>
EmbeddingModel<Scalar> train(const corpus::CorpusSource& source,
                             std::shared_ptr<const Vocabulary> vocab,
                             const TrainingConfig& config,
                             const TrainHooks<EmbeddingModel<Scalar>>& hooks = {}) {
  config.validate();
  if (!vocab || vocab->empty()) throw EmptyVocabularyError();

  EmbeddingModel<Scalar> model;
  model.vocab = vocab;
  model.key_kind = source.mode == corpus::Mode::tagged ? keys::KeyKind::tagged
                                                       : keys::KeyKind::plain;
  const auto rows = static_cast<Eigen::Index>(vocab->size());
  model.input.resize(rows, config.dim);
  model.output.setZero(rows, config.dim);
  std::mt19937_64 init_rng(config.seed);
  init_uniform(model.input, init_rng);

  struct Scratch {
    RowVector<Scalar> grad;
  };
  std::vector<Scratch> scratch(static_cast<std::size_t>(config.workers));
  for (auto& s : scratch) s.grad.resize(config.dim);

  auto visit = [&](detail::WorkerState& w, std::span<const WordId> sentence,
                   std::size_t pos, int span, double lr) {
    const WordId center = sentence[pos];
    auto& grad = scratch[w.index].grad;
    detail::for_each_context(sentence, pos, span, [&](WordId ctx) {
      w.draw_negatives(ctx);
      w.record(sgns_step<Scalar>(model.input.row(center), model.output, ctx,
                                 w.negatives, static_cast<Scalar>(lr), grad));
    });
  };
  std::function<void(std::uint64_t)> checkpoint;
  if (hooks.checkpoint)
    checkpoint = [&](std::uint64_t tokens) { hooks.checkpoint(model, tokens); };
  model.stats = detail::run_skipgram(source, *vocab, config, visit, checkpoint);
  return model;
}

template <typename Scalar>
EmbeddingModel<Scalar> train(const corpus::CorpusSource& source,
                             const TrainingConfig& config,
                             const TrainHooks<EmbeddingModel<Scalar>>& hooks = {}) {
  auto vocab =
      std::make_shared<const Vocabulary>(build_vocab(source, config.min_count));
  return train<Scalar>(source, std::move(vocab), config, hooks);
}

/// Skip-gram over surface|TAG keys: one vector per (surface, tag) pair.
template <typename Scalar>
EmbeddingModel<Scalar> train_sense2vec(corpus::CorpusSource source,
                                       const TrainingConfig& config,
                                       const TrainHooks<EmbeddingModel<Scalar>>& hooks = {}) {
  source.mode = corpus::Mode::tagged;
  return train<Scalar>(source, config, hooks);
}

}  // namespace semb
