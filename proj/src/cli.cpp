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

#include "semb/cli.hpp"

#include <sys/resource.h>

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <type_traits>

#include "semb/analogy.hpp"
#include "semb/corpus.hpp"
#include "semb/error.hpp"
#include "semb/mssg.hpp"
#include "semb/sgns.hpp"
#include "semb/sts.hpp"
#include "semb/vecio.hpp"
#include "semb/wsd.hpp"

namespace semb::cli {
namespace {

namespace fs = std::filesystem;

struct CorpusFlags {
  bool lowercase = true;
  corpus::HyphenPolicy hyphen_policy = corpus::HyphenPolicy::keep;
  corpus::Encoding encoding = corpus::Encoding::utf8;
  char tag_delimiter = '/';
  bool strict_tags = true;
  bool map_digits = true;
  bool map_urls = true;
  bool map_emails = true;

  corpus::NormalizationRules rules() const {
    corpus::NormalizationRules r;
    r.lowercase = lowercase;
    r.hyphen_policy = hyphen_policy;
    r.encoding = encoding;
    r.map_digits_to_zero = map_digits;
    r.map_urls = map_urls;
    r.map_emails = map_emails;
    return r;
  }
};

enum class ModelKind { word2vec, sense2vec, mssg };

struct Options {
  CorpusFlags corpus;
  bool tagged_input = false;

  // train / bench
  ModelKind model = ModelKind::word2vec;
  TrainingConfig training;
  MssgOptions mssg;
  bool binary = false;
  int precision = vecio::kDefaultPrecision;
  std::vector<int> bench_workers{1, 2, 4};

  // evaluation
  bool coverage_only = false;
  sts::PairFormat pair_format = sts::PairFormat::tsv;
  sts::Strategy strategy;
  bool precomputed = false;
  std::string context_vectors;
  std::size_t p = 5;
  std::size_t window = 0;  // 0 = whole sentence
  std::size_t neighbors = 10;

  std::string input1, input2, input3;
  std::vector<std::string> inputs;  // non-empty positionals, in order
  std::string output;
  std::vector<std::string> queries;
};

struct ConfigEntry {
  std::string key;
  std::string value;
  std::size_t line = 0;
};

/// Registers the options of one subcommand and remembers how to print each
/// option's value, so the configuration in effect can be echoed.
class Binder {
 public:
  explicit Binder(CLI::App* app) : app_(app) {}

  CLI::App* app() const { return app_; }

  template <typename T>
  CLI::Option* value(const std::string& name, T& var, const std::string& desc) {
    auto* opt = app_->add_option(name, var, desc);
    if constexpr (!std::is_same_v<T, std::string>) opt->capture_default_str();
    getters_.emplace_back(opt, [&var] { return text(var); });
    return opt;
  }

  template <typename E>
  CLI::Option* choice(const std::string& name, E& var,
                      std::vector<std::pair<std::string, E>> names,
                      const std::string& desc) {
    std::map<std::string, E> table(names.begin(), names.end());
    std::string alternatives;
    for (const auto& [label, e] : names)
      alternatives += (alternatives.empty() ? "" : "|") + label;
    auto* opt = app_->add_option(name, var, desc + ": " + alternatives)
                    ->transform(CLI::CheckedTransformer(table, CLI::ignore_case))
                    ->option_text("ENUM");
    getters_.emplace_back(opt, [&var, names] {
      for (const auto& [label, e] : names)
        if (e == var) return label;
      return std::string("?");
    });
    return opt;
  }

  CLI::Option* flag(const std::string& name, bool& var,
                    const std::string& desc) {
    auto* opt = app_->add_flag(name, var, desc);
    getters_.emplace_back(opt, [&var] { return std::string(var ? "true" : "false"); });
    return opt;
  }

  /// Fills options not given on the command line from config entries.
  void apply(const std::vector<ConfigEntry>& entries) const {
    for (const auto& e : entries) {
      CLI::Option* target = nullptr;
      for (const auto& [opt, get] : getters_) {
        const auto& names = opt->get_lnames();
        if (std::find(names.begin(), names.end(), e.key) != names.end())
          target = opt;
      }
      if (!target)
        throw UsageError("config line " + std::to_string(e.line) +
                         ": unknown key '" + e.key + "' for " +
                         app_->get_name());
      if (target->count() > 0) continue;  // the command line wins
      try {
        target->add_result(e.value);
        target->run_callback();
      } catch (const CLI::Error& err) {
        throw UsageError("config line " + std::to_string(e.line) + ": " +
                         err.what());
      }
    }
  }

  void echo(std::ostream& err) const {
    err << "# effective configuration\n[" << app_->get_name() << "]\n";
    for (const auto& [opt, get] : getters_)
      err << (opt->get_lnames().empty() ? opt->get_name()
                                        : opt->get_lnames().front())
          << " = " << get() << '\n';
  }

 private:
  template <typename T>
  static std::string text(const T& v) {
    std::ostringstream ss;
    if constexpr (std::is_same_v<T, std::vector<int>>) {
      for (std::size_t i = 0; i < v.size(); ++i) ss << (i ? "," : "") << v[i];
    } else {
      ss << v;
    }
    return ss.str();
  }

  CLI::App* app_;
  std::vector<std::pair<CLI::Option*, std::function<std::string()>>> getters_;
};

/// "key = value" lines with # comments. Keys under a [section] header apply
/// only to the subcommand of that name.
std::vector<ConfigEntry> read_config(const std::string& path,
                                     const std::string& subcommand) {
  std::ifstream in(path);
  if (!in) throw StreamError(path, "cannot open config file");
  std::vector<ConfigEntry> entries;
  std::string line, section;
  std::size_t line_no = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::string body = trim(line);
    if (body.empty() || body[0] == '#' || body[0] == ';') continue;
    if (body.front() == '[' && body.back() == ']') {
      section = trim(body.substr(1, body.size() - 2));
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      throw ParseError(path + ": expected key = value", line_no);
    std::string key = trim(body.substr(0, eq));
    std::string value = trim(body.substr(eq + 1));
    if (!value.empty() && (value[0] == '"' || value[0] == '\'')) {
      const auto close = value.find(value[0], 1);
      if (close == std::string::npos)
        throw ParseError(path + ": unterminated quote", line_no);
      value = value.substr(1, close - 1);
    } else if (const auto hash = value.find(" #"); hash != std::string::npos) {
      value = trim(value.substr(0, hash));
    }
    while (!key.empty() && key[0] == '-') key.erase(0, 1);
    if (key.empty()) throw ParseError(path + ": empty key", line_no);
    if (section.empty() || section == subcommand)
      entries.push_back({key, value, line_no});
  }
  return entries;
}

void add_corpus_flags(Binder& b, CorpusFlags& f) {
  b.flag("--lowercase,!--no-lowercase", f.lowercase,
         "Lowercase text (default on)");
  b.choice("--hyphen-policy", f.hyphen_policy,
           {{"keep", corpus::HyphenPolicy::keep},
            {"split", corpus::HyphenPolicy::split}},
           "Hyphens between letters");
  b.choice("--encoding", f.encoding,
           {{"utf8", corpus::Encoding::utf8},
            {"latin1", corpus::Encoding::latin1}},
           "Input encoding");
  b.value("--tag-delimiter", f.tag_delimiter,
          "Single-character word/tag delimiter");
  b.flag("--strict-tags,!--lenient-tags", f.strict_tags,
         "Reject untagged tokens instead of tagging them X (default on)");
  b.flag("--map-digits,!--keep-digits", f.map_digits,
         "Map every digit to 0 (default on)");
  b.flag("--map-urls,!--keep-urls", f.map_urls,
         "Replace URLs with a placeholder (default on)");
  b.flag("--map-emails,!--keep-emails", f.map_emails,
         "Replace e-mail addresses with a placeholder (default on)");
}

void add_training_flags(Binder& b, Options& o) {
  TrainingConfig& c = o.training;
  b.choice("--model", o.model,
           {{"word2vec", ModelKind::word2vec},
            {"sense2vec", ModelKind::sense2vec},
            {"mssg", ModelKind::mssg}},
           "Model");
  b.value("--dim", c.dim, "Embedding dimension");
  b.value("--window", c.window, "Maximum context window");
  b.value("--lr", c.lr0, "Initial learning rate");
  b.value("--min-count", c.min_count, "Minimum token frequency");
  b.value("--negatives", c.negatives, "Negative samples per pair");
  b.value("--epochs", c.epochs, "Passes over the corpus");
  b.value("--senses", c.senses, "Senses per word (mssg)");
  b.value("--subsample", c.subsample_t, "Subsampling threshold, 0 disables");
  b.value("--sampling-power", c.sampling_power,
          "Exponent of the negative-sampling distribution");
  b.value("--seed", c.seed, "Random seed");
  b.value("--workers", c.workers, "Training threads")->envname("SEMB_THREADS");
  b.choice("--lr-decay", c.lr_decay,
           {{"linear", LrDecay::linear_to_floor},
            {"constant", LrDecay::constant}},
           "Learning-rate schedule");
  b.choice("--context-matrix", o.mssg.context_matrix,
           {{"trained", ContextMatrix::trained}, {"tied", ContextMatrix::tied}},
           "Global context vectors for mssg");
  b.choice("--centroid-update", o.mssg.centroid_update,
           {{"running-mean", CentroidUpdate::running_mean},
            {"gradient", CentroidUpdate::gradient}},
           "Cluster centroid rule for mssg");
  b.choice("--context-weighting", o.mssg.weighting,
           {{"uniform", ContextWeighting::uniform},
            {"inverse-frequency", ContextWeighting::inverse_frequency}},
           "Context averaging for mssg");
  b.flag("--tagged", o.tagged_input,
         "Corpus is word/TAG tagged (implied by sense2vec)");
}

void add_sense_eval_flags(Binder& b, Options& o) {
  b.value("--p", o.p, "Context words kept by the filter");
  b.value("--context-window", o.window,
          "Context radius around the target, 0 = whole sentence");
  b.value("--context-vectors", o.context_vectors,
          "Word vectors used for context words (default: model .ctx)");
}

void require_readable(const std::string& path) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec))
    throw StreamError(path, "no such file");
  std::ifstream probe(path);
  if (!probe) throw StreamError(path, "cannot open for reading");
}

void require_writable(const std::string& path) {
  const fs::path parent = fs::path(path).parent_path();
  std::error_code ec;
  if (!parent.empty() && !fs::is_directory(parent, ec))
    throw StreamError(path, "output directory does not exist");
}

corpus::CorpusSource make_source(const Options& o, const std::string& path) {
  corpus::CorpusSource src;
  src.path = path;
  src.rules = o.corpus.rules();
  src.tag_delimiter = o.corpus.tag_delimiter;
  src.strict_tags = o.corpus.strict_tags;
  src.mode = o.tagged_input || o.model == ModelKind::sense2vec
                 ? corpus::Mode::tagged
                 : corpus::Mode::raw;
  return src;
}

void print_stats(const TrainingStats& s, std::ostream& err) {
  err << "tokens=" << s.tokens_processed << " steps=" << s.steps
      << " seconds=" << s.seconds << " tokens/sec=" << s.tokens_per_second()
      << '\n';
  for (std::size_t e = 0; e < s.epoch_loss.size(); ++e)
    err << "epoch " << (e + 1) << " mean loss " << s.epoch_loss[e] << '\n';
}

void save_vectors(const KeyedVectors& kv, const std::string& path,
                  const Options& o) {
  if (o.binary)
    vecio::save_binary(kv, path);
  else
    vecio::save_text(kv, path, o.precision);
}

int run_preprocess(const Options& o, std::ostream& err) {
  const std::string& in_path = o.inputs.at(0);
  std::ifstream in(in_path, std::ios::binary);
  if (!in) throw StreamError(in_path, "cannot open for reading");
  std::ofstream out(o.output, std::ios::binary);
  if (!out) throw StreamError(o.output, "cannot open for writing");
  const auto rules = o.corpus.rules();
  corpus::TagParseOptions tag_opts{o.corpus.tag_delimiter,
                                   o.corpus.strict_tags, 0};
  std::string line;
  std::size_t lines = 0;
  while (std::getline(in, line)) {
    ++lines;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (o.tagged_input) {
      tag_opts.line_number = lines;
      const std::string text = rules.encoding == corpus::Encoding::latin1
                                   ? corpus::latin1_to_utf8(line)
                                   : line;
      auto tokens = corpus::read_tagged_line(text, tag_opts);
      auto utf8 = rules;
      utf8.encoding = corpus::Encoding::utf8;
      for (auto& t : tokens) t.surface = corpus::normalize_text(t.surface, utf8);
      out << corpus::serialize_tagged(tokens, o.corpus.tag_delimiter) << '\n';
    } else {
      std::string normalized;
      try {
        normalized = corpus::normalize_text(line, rules);
      } catch (const DecodeError& e) {
        throw DataError(in_path + ":" + std::to_string(lines) + ": " + e.what());
      }
      const auto tokens = corpus::tokenize(normalized, rules);
      for (std::size_t i = 0; i < tokens.size(); ++i)
        out << (i ? " " : "") << tokens[i];
      out << '\n';
    }
  }
  if (!out) throw StreamError(o.output, "write failed");
  err << "preprocessed " << lines << " lines\n";
  return kOk;
}

int run_train(const Options& o, std::ostream& err) {
  o.training.validate();
  const auto source = make_source(o, o.inputs.at(0));
  const std::string checkpoint_path = o.output + ".ckpt";
  if (o.model == ModelKind::mssg) {
    TrainHooks<SenseModel<float>> hooks;
    if (o.training.checkpoint_every)
      hooks.checkpoint = [&](const SenseModel<float>& m, std::uint64_t tokens) {
        vecio::save_text(vecio::sense_table(m), checkpoint_path, o.precision);
        err << "checkpoint at " << tokens << " tokens -> " << checkpoint_path
            << '\n';
      };
    const auto model = train_mssg<float>(source, o.training, o.mssg, hooks);
    print_stats(model.stats, err);
    vecio::save_sense_vectors(vecio::to_sense_vectors(model), o.output,
                              o.binary, o.precision);
    return kOk;
  }
  TrainHooks<EmbeddingModel<float>> hooks;
  if (o.training.checkpoint_every)
    hooks.checkpoint = [&](const EmbeddingModel<float>& m, std::uint64_t tokens) {
      vecio::save_text(vecio::to_keyed(m), checkpoint_path, o.precision);
      err << "checkpoint at " << tokens << " tokens -> " << checkpoint_path
          << '\n';
    };
  const auto model = train<float>(source, o.training, hooks);
  print_stats(model.stats, err);
  save_vectors(vecio::to_keyed(model), o.output, o);
  return kOk;
}

int run_analogy(const Options& o, std::ostream& out) {
  const auto model = vecio::load(o.inputs.at(0));
  const auto questions = analogy::read_dataset(o.inputs.at(1), o.corpus.rules());
  analogy::Options opts;
  opts.coverage_only = o.coverage_only;
  opts.workers = o.training.workers;
  analogy::evaluate(model, questions, opts).print(out);
  return kOk;
}

std::optional<KeyedVectors> load_context(const Options& o,
                                         const std::string& model_path) {
  if (!o.context_vectors.empty()) return vecio::load(o.context_vectors);
  if (fs::exists(vecio::context_path(model_path)))
    return vecio::load(vecio::context_path(model_path));
  return std::nullopt;
}

wsd::DisambiguationConfig disambiguation(const Options& o) {
  wsd::DisambiguationConfig cfg;
  cfg.p = o.p;
  if (o.window) cfg.window = o.window;
  return cfg;
}

int run_sts(const Options& o, std::ostream& out) {
  sts::ReadOptions read;
  read.format = o.pair_format;
  read.rules = o.corpus.rules();
  read.tagged = o.tagged_input;
  read.tag_delimiter = o.corpus.tag_delimiter;
  const auto train = sts::read_pairs(o.inputs.at(1), read);
  const auto test = sts::read_pairs(o.inputs.at(2), read);
  sts::Strategy strategy = o.strategy;
  strategy.disambiguation = disambiguation(o);

  if (o.precomputed) {
    const auto vectors = vecio::load(o.inputs.at(0));
    sts::evaluate_precomputed(train, test, vectors, strategy).print(out);
    return kOk;
  }
  auto model = vecio::load(o.inputs.at(0));
  if (fs::exists(vecio::counts_path(o.inputs.at(0))))
    vecio::load_counts(model, vecio::counts_path(o.inputs.at(0)));
  std::optional<KeyedVectors> context;
  if (model.kind() == keys::KeyKind::sense) context = load_context(o, o.inputs.at(0));
  sts::Embedder embedder{&model, context ? &*context : nullptr};
  sts::evaluate(train, test, embedder, strategy).print(out);
  return kOk;
}

int run_wsd(const Options& o, std::ostream& out) {
  auto model = vecio::load_sense_vectors(o.inputs.at(0));
  if (model.senses.kind() != keys::KeyKind::sense)
    throw DataError(o.inputs.at(0) + ": not a sense table (expected word#k keys)");
  const auto instances = wsd::read_dataset(o.inputs.at(1), o.corpus.rules());
  std::optional<KeyedVectors> override_ctx;
  if (!o.context_vectors.empty()) override_ctx = vecio::load(o.context_vectors);
  wsd::evaluate(model, instances, disambiguation(o),
                override_ctx ? &*override_ctx : nullptr)
      .print(out);
  return kOk;
}

int run_nn(const Options& o, std::ostream& out) {
  const auto model = vecio::load(o.inputs.at(0));
  for (const auto& query : o.queries) {
    if (o.queries.size() > 1) out << "# " << query << '\n';
    std::vector<std::string> targets;
    if (model.find(query)) {
      targets.push_back(query);
    } else {
      for (auto r : model.variants(query)) targets.push_back(model.key(r));
      if (targets.empty()) throw KeyNotFoundError(query);
    }
    for (const auto& key : targets) {
      if (targets.size() > 1) out << "## " << key << '\n';
      for (const auto& n : nearest_neighbors(model, key, o.neighbors))
        out << n.key << '\t' << n.cosine << '\n';
    }
  }
  return kOk;
}

double peak_rss_mib() {
  rusage usage{};
  getrusage(RUSAGE_SELF, &usage);
  return static_cast<double>(usage.ru_maxrss) / 1024.0;  // KiB on Linux
}

int run_bench(const Options& o, std::ostream& out, std::ostream& err) {
  o.training.validate();
  const auto source = make_source(o, o.inputs.at(0));
  auto vocab = std::make_shared<const Vocabulary>(
      build_vocab(source, o.training.min_count));
  err << "vocabulary " << vocab->size() << " words, " << vocab->total_tokens()
      << " tokens\n";

  const std::uint64_t planned =
      vocab->total_tokens() * static_cast<std::uint64_t>(o.training.epochs);
  out << "lr schedule (" << (o.training.lr_decay == LrDecay::constant
                                 ? "constant"
                                 : "linear")
      << "):";
  for (int q = 0; q <= 4; ++q)
    out << ' ' << (q * 25) << "%="
        << o.training.learning_rate(planned * static_cast<std::uint64_t>(q) / 4,
                                    planned);
  out << '\n';

  char buf[160];
  std::snprintf(buf, sizeof buf, "%-8s %14s %10s %9s %14s\n", "workers",
                "tokens/sec", "seconds", "speedup", "peak_rss_mib");
  out << buf;
  double base = 0.0;
  for (int workers : o.bench_workers) {
    TrainingConfig cfg = o.training;
    cfg.workers = workers;
    cfg.validate();
    TrainingStats stats;
    if (o.model == ModelKind::mssg) {
      stats = train_mssg<float>(source, vocab, cfg, o.mssg).stats;
    } else {
      stats = train<float>(source, vocab, cfg).stats;
    }
    const double tps = stats.tokens_per_second();
    if (base == 0.0) base = tps;
    std::snprintf(buf, sizeof buf, "%-8d %14.0f %10.3f %8.2fx %14.1f\n",
                  workers, tps, stats.seconds, base > 0.0 ? tps / base : 0.0,
                  peak_rss_mib());
    out << buf;
    out.flush();
  }
  return kOk;
}


}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
  Options o;
  CLI::App app{"semb: word and sense embeddings: training and evaluation",
               "semb"};
  app.require_subcommand(1, 1);

  std::vector<std::unique_ptr<Binder>> binders;
  auto sub = [&](const std::string& name, const std::string& desc) -> Binder& {
    binders.push_back(std::make_unique<Binder>(app.add_subcommand(name, desc)));
    return *binders.back();
  };

  auto& pre = sub("preprocess", "Normalize and tokenize a corpus");
  pre.value("input", o.input1, "Input corpus")->required();
  pre.value("output", o.output, "Output file")->required();
  pre.flag("--tagged", o.tagged_input, "Input is word/TAG tagged");
  add_corpus_flags(pre, o.corpus);

  auto& tr = sub("train", "Train word2vec, sense2vec or MSSG");
  tr.value("corpus", o.input1, "Training corpus")->required();
  tr.value("output", o.output, "Output vectors")->required();
  add_training_flags(tr, o);
  add_corpus_flags(tr, o.corpus);
  tr.value("--checkpoint-every", o.training.checkpoint_every,
           "Write <output>.ckpt every N tokens, 0 disables");
  tr.flag("--binary", o.binary, "Write the binary vector format");
  tr.value("--precision", o.precision, "Significant digits in the text format");

  auto& an = sub("eval-analogy", "Word analogy accuracy");
  an.value("model", o.input1, "Vectors")->required();
  an.value("questions", o.input2, "Analogy questions")->required();
  an.flag("--coverage-only", o.coverage_only,
          "Divide by attempted questions instead of all questions");
  an.value("--workers", o.training.workers, "Evaluation threads")
      ->envname("SEMB_THREADS");
  add_corpus_flags(an, o.corpus);

  auto& st = sub("eval-sts", "Semantic textual similarity");
  st.value("model", o.input1, "Vectors (or sentence vectors)")->required();
  st.value("train", o.input2, "Training pairs")->required();
  st.value("test", o.input3, "Test pairs")->required();
  st.choice("--format", o.pair_format,
            {{"tsv", sts::PairFormat::tsv},
             {"assin-xml", sts::PairFormat::assin_xml}},
            "Pair file format");
  st.choice("--strategy", o.strategy.composition,
            {{"mean", sts::Composition::mean}, {"sum", sts::Composition::sum}},
            "Sentence composition");
  st.flag("--extra-features", o.strategy.extra_features,
          "Add token overlap and length ratio features");
  st.flag("--clip,!--no-clip", o.strategy.clip,
          "Clip predictions to [1, 5] (default on)");
  st.flag("--precomputed", o.precomputed,
          "Model file holds sentence vectors keyed <id>:1 and <id>:2");
  st.flag("--tagged-pairs", o.tagged_input, "Sentences are word/TAG tagged");
  add_sense_eval_flags(st, o);
  add_corpus_flags(st, o.corpus);

  auto& wd = sub("eval-wsd", "Lexical-sample sense disambiguation");
  wd.value("model", o.input1, "Sense vectors")->required();
  wd.value("dataset", o.input2, "Lexical sample")->required();
  add_sense_eval_flags(wd, o);
  add_corpus_flags(wd, o.corpus);

  auto& nn = sub("nn", "Nearest neighbours by cosine");
  nn.value("model", o.input1, "Vectors")->required();
  nn.app()->add_option("query", o.queries, "Keys or words")->required();
  nn.value("-n,--count", o.neighbors, "Neighbours per query");

  auto& be = sub("bench", "Training throughput per worker count");
  be.value("corpus", o.input1, "Benchmark corpus")->required();
  add_training_flags(be, o);
  add_corpus_flags(be, o.corpus);
  be.value("--worker-counts", o.bench_workers, "Worker counts to time")
      ->delimiter(',');

  // The config file is read by hand so that any flag can come from it.
  std::string config_path;
  std::vector<std::string> cli_args;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config_path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
    } else {
      cli_args.push_back(args[i]);
    }
  }
  for (const auto& b : binders)
    b->app()->add_option("--config", config_path,
                         "key = value configuration file; flags take priority");

  std::vector<std::string> reversed(cli_args.rbegin(), cli_args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    const auto subs = app.get_subcommands();
    out << (subs.empty() ? app.help() : subs.front()->help());
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return kUsage;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  const Binder& binder = **std::find_if(
      binders.begin(), binders.end(),
      [&](const auto& b) { return b->app()->get_name() == name; });

  try {
    if (!config_path.empty()) binder.apply(read_config(config_path, name));
    binder.echo(err);

    for (const auto* in : {&o.input1, &o.input2, &o.input3})
      if (!in->empty()) o.inputs.push_back(*in);
    for (const auto& path : o.inputs) require_readable(path);
    if (!o.context_vectors.empty()) require_readable(o.context_vectors);
    if (!o.output.empty()) require_writable(o.output);
    if (o.precision < 1 || o.precision > 17)
      throw UsageError("precision must be in [1, 17]");
    if (o.p < 1) throw UsageError("p must be >= 1");

    if (name == "preprocess") return run_preprocess(o, err);
    if (name == "train") return run_train(o, err);
    if (name == "eval-analogy") return run_analogy(o, out);
    if (name == "eval-sts") return run_sts(o, out);
    if (name == "eval-wsd") return run_wsd(o, out);
    if (name == "nn") return run_nn(o, out);
    if (name == "bench") return run_bench(o, out, err);
    throw UsageError("unknown subcommand " + name);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kData;
  } catch (const DivergedError& e) {
    err << "diverged: " << e.what() << '\n';
    return kDiverged;
  } catch (const std::bad_alloc&) {
    err << "data error: out of memory\n";
    return kData;
  }
}

int dispatch(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + std::min(argc, 1), argv + argc);
  return dispatch(args, std::cout, std::cerr);
}

}  // namespace semb::cli
