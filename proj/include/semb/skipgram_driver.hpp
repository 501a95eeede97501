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

// Corpus traversal shared by the SGNS and MSSG trainers: file partitioning
// across workers, subsampling, dynamic windows, learning-rate schedule and
// per-epoch loss bookkeeping. The trainers only supply what happens at one
// center position.
//
// Workers update shared parameters without locks (Hogwild-style); with
// workers == 1 the whole run is deterministic given the seed.

#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <random>
#include <span>
#include <thread>
#include <vector>

#include "semb/corpus.hpp"
#include "semb/error.hpp"
#include "semb/math.hpp"
#include "semb/vocab.hpp"

namespace semb {

enum class LrDecay { linear_to_floor, constant };

struct TrainingConfig {
  int dim = 300;
  int window = 5;
  double lr0 = 0.025;
  std::uint64_t min_count = 10;
  int negatives = 5;
  int epochs = 5;
  int senses = 3;
  double subsample_t = 1e-5;
  double sampling_power = 0.75;
  std::uint64_t seed = 1;
  int workers = 1;
  LrDecay lr_decay = LrDecay::linear_to_floor;
  std::uint64_t checkpoint_every = 0;  // tokens; 0 disables

  /// Final learning rate as a fraction of lr0 under linear decay.
  static constexpr double kLrFloor = 1e-4;

  void validate() const {
    if (dim < 1) throw UsageError("dim must be >= 1");
    if (window < 1) throw UsageError("window must be >= 1");
    if (!(lr0 > 0.0)) throw UsageError("learning rate must be > 0");
    if (min_count < 1) throw UsageError("min_count must be >= 1");
    if (negatives < 0) throw UsageError("negatives must be >= 0");
    if (epochs < 0) throw UsageError("epochs must be >= 0");
    if (senses < 1) throw UsageError("senses must be >= 1");
    if (subsample_t < 0.0) throw UsageError("subsample threshold must be >= 0");
    if (workers < 1) throw UsageError("workers must be >= 1");
  }

  double learning_rate(std::uint64_t processed, std::uint64_t planned) const {
    if (lr_decay == LrDecay::constant) return lr0;
    const double progress =
        static_cast<double>(processed) / static_cast<double>(planned + 1);
    return lr0 * std::max(kLrFloor, 1.0 - progress);
  }
};

struct TrainingStats {
  std::vector<double> epoch_loss;  // mean loss per SGD step, one per epoch
  std::uint64_t tokens_processed = 0;
  std::uint64_t steps = 0;
  double seconds = 0.0;

  double tokens_per_second() const {
    return seconds > 0.0 ? static_cast<double>(tokens_processed) / seconds
                         : 0.0;
  }
};

template <typename Model>
struct TrainHooks {
  /// Called every `checkpoint_every` processed tokens with the live model.
  std::function<void(const Model&, std::uint64_t tokens)> checkpoint;
};

namespace detail {

inline constexpr int kNegativeRetries = 8;

struct WorkerState {
  std::size_t index = 0;
  std::mt19937_64 rng;
  const SamplingTable* table = nullptr;
  int negative_count = 0;
  std::vector<WordId> negatives;
  double loss_sum = 0.0;
  std::uint64_t steps = 0;           // this epoch
  std::uint64_t lifetime_steps = 0;  // whole run, for error reports

  /// Fills `negatives` with draws != context; a draw that still collides
  /// after kNegativeRetries resamples is dropped.
  void draw_negatives(WordId context) {
    negatives.clear();
    for (int i = 0; i < negative_count; ++i) {
      for (int attempt = 0; attempt <= kNegativeRetries; ++attempt) {
        const WordId id = table->sample(rng);
        if (id != context) {
          negatives.push_back(id);
          break;
        }
      }
    }
  }

  void record(double loss) {
    ++steps;
    ++lifetime_steps;
    if (!std::isfinite(loss)) throw DivergedError(lifetime_steps);
    loss_sum += loss;
  }
};

/// Calls fn(context_id) for every position within `span` of `pos`, left to
/// right, skipping `pos` itself.
template <typename Fn>
void for_each_context(std::span<const WordId> sentence, std::size_t pos,
                      int span, Fn&& fn) {
  const std::size_t lo = pos >= static_cast<std::size_t>(span) ? pos - span : 0;
  const std::size_t hi = std::min(sentence.size(), pos + span + 1);
  for (std::size_t j = lo; j < hi; ++j)
    if (j != pos) fn(sentence[j]);
}

template <typename Visit>
TrainingStats run_skipgram(const corpus::CorpusSource& source,
                           const Vocabulary& vocab,
                           const TrainingConfig& config, Visit&& visit,
                           const std::function<void(std::uint64_t)>& checkpoint) {
  const auto started = std::chrono::steady_clock::now();
  const SamplingTable table(vocab, config.sampling_power);
  std::vector<double> keep(vocab.size());
  for (std::size_t i = 0; i < vocab.size(); ++i)
    keep[i] = subsample_keep_prob(vocab.entries()[i].count, vocab.total_tokens(),
                                  config.subsample_t);

  const auto workers = static_cast<std::size_t>(config.workers);
  const auto bounds = corpus::partition_file(source.path, workers);
  const std::uint64_t planned =
      static_cast<std::uint64_t>(config.epochs) * vocab.total_tokens();

  std::vector<WorkerState> states(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    states[w].index = w;
    states[w].rng.seed(config.seed + 0x9E3779B97F4A7C15ULL * (w + 1));
    states[w].table = &table;
    states[w].negative_count = config.negatives;
    states[w].negatives.reserve(static_cast<std::size_t>(config.negatives));
  }

  std::atomic<std::uint64_t> processed{0};
  std::atomic<bool> stop{false};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::mutex checkpoint_mutex;

  auto work = [&](WorkerState& state) {
    try {
      corpus::SentenceStream stream(source, bounds[state.index],
                                    bounds[state.index + 1]);
      std::vector<std::string> tokens;
      std::vector<WordId> ids;
      while (!stop.load(std::memory_order_relaxed) && stream.next(tokens)) {
        ids.clear();
        std::uint64_t in_vocab = 0;
        for (const auto& t : tokens) {
          const auto id = vocab.find(t);
          if (!id) continue;
          ++in_vocab;
          if (keep[*id] < 1.0 && SamplingTable::uniform01(state.rng) > keep[*id])
            continue;
          ids.push_back(*id);
        }
        const std::uint64_t before = processed.fetch_add(in_vocab);
        const double lr = config.learning_rate(before, planned);
        for (std::size_t pos = 0; pos < ids.size(); ++pos) {
          const int span = 1 + static_cast<int>(
                                   state.rng() %
                                   static_cast<std::uint64_t>(config.window));
          visit(state, std::span<const WordId>(ids), pos, span, lr);
        }
        if (checkpoint && config.checkpoint_every > 0 &&
            before / config.checkpoint_every !=
                (before + in_vocab) / config.checkpoint_every) {
          std::lock_guard lock(checkpoint_mutex);
          checkpoint(before + in_vocab);
        }
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      stop = true;
    }
  };

  TrainingStats stats;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    for (auto& s : states) {
      s.loss_sum = 0.0;
      s.steps = 0;
    }
    if (workers == 1) {
      work(states[0]);
    } else {
      std::vector<std::jthread> threads;
      threads.reserve(workers);
      for (auto& s : states) threads.emplace_back([&work, &s] { work(s); });
    }
    if (failure) std::rethrow_exception(failure);
    double loss = 0.0;
    std::uint64_t steps = 0;
    for (const auto& s : states) {
      loss += s.loss_sum;
      steps += s.steps;
    }
    stats.epoch_loss.push_back(steps ? loss / static_cast<double>(steps) : 0.0);
    stats.steps += steps;
  }
  stats.tokens_processed = processed.load();
  stats.seconds = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - started)
                      .count();
  return stats;
}

}  // namespace detail
}  // namespace semb
