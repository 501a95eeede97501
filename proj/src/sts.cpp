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

#include "semb/sts.hpp"

#include <Eigen/QR>
#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

#include "semb/error.hpp"

namespace semb::sts {
namespace {

std::vector<std::string> sentence_tokens(const std::string& text,
                                         const ReadOptions& options,
                                         std::size_t line_no) {
  if (!options.tagged)
    return corpus::tokenize(corpus::normalize_text(text, options.rules),
                            options.rules);
  corpus::TagParseOptions tag_opts{options.tag_delimiter, true, line_no};
  std::vector<std::string> out;
  for (const auto& tok : corpus::read_tagged_line(text, tag_opts))
    out.push_back(keys::tagged_key(
        corpus::normalize_text(tok.surface, options.rules), tok.tag));
  return out;
}

std::optional<double> parse_gold(const std::string& text, std::size_t line_no) {
  if (text == "-") return std::nullopt;
  double gold = 0.0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), gold);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw ParseError("bad gold score '" + text + "'", line_no);
  if (!(gold >= kMinScore && gold <= kMaxScore))
    throw ParseError("gold score " + text + " outside [1, 5]", line_no);
  return gold;
}

std::size_t line_of(std::string_view text, std::size_t offset) {
  return 1 + static_cast<std::size_t>(
                 std::count(text.begin(), text.begin() + static_cast<long>(offset), '\n'));
}

std::string xml_unescape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '&') {
      out.push_back(s[i]);
      continue;
    }
    static constexpr std::pair<std::string_view, char> kEntities[] = {
        {"&amp;", '&'}, {"&lt;", '<'}, {"&gt;", '>'}, {"&quot;", '"'},
        {"&apos;", '\''}};
    bool matched = false;
    for (auto [name, ch] : kEntities) {
      if (s.substr(i, name.size()) == name) {
        out.push_back(ch);
        i += name.size() - 1;
        matched = true;
        break;
      }
    }
    if (!matched) out.push_back('&');
  }
  return out;
}

std::optional<std::string> attribute(std::string_view tag,
                                     std::string_view name) {
  std::size_t pos = 0;
  while ((pos = tag.find(name, pos)) != std::string_view::npos) {
    const bool boundary = pos > 0 && (tag[pos - 1] == ' ' || tag[pos - 1] == '\t' ||
                                      tag[pos - 1] == '\n' || tag[pos - 1] == '\r');
    std::size_t eq = pos + name.size();
    while (eq < tag.size() && tag[eq] == ' ') ++eq;
    if (boundary && eq < tag.size() && tag[eq] == '=') {
      std::size_t q = eq + 1;
      while (q < tag.size() && tag[q] == ' ') ++q;
      if (q < tag.size() && (tag[q] == '"' || tag[q] == '\'')) {
        const auto close = tag.find(tag[q], q + 1);
        if (close == std::string_view::npos) return std::nullopt;
        return xml_unescape(tag.substr(q + 1, close - q - 1));
      }
    }
    pos += name.size();
  }
  return std::nullopt;
}

// Text content of the first <name>..</name> inside [begin, end).
std::optional<std::string> element(std::string_view xml, std::string_view name,
                                   std::size_t begin, std::size_t end) {
  const std::string open = "<" + std::string(name);
  std::size_t at = begin;
  while ((at = xml.find(open, at)) != std::string_view::npos && at < end) {
    const char next = xml[at + open.size()];
    if (next == '>' || next == ' ' || next == '\t' || next == '\n') break;
    at += open.size();
  }
  if (at == std::string_view::npos || at >= end) return std::nullopt;
  const auto content = xml.find('>', at);
  const std::string close = "</" + std::string(name) + ">";
  const auto stop = xml.find(close, content);
  if (content == std::string_view::npos || stop == std::string_view::npos ||
      stop > end)
    return std::nullopt;
  return xml_unescape(xml.substr(content + 1, stop - content - 1));
}

Vector<double> mean_of_rows(const KeyedVectors& model,
                            std::span<const KeyedVectors::Index> rows) {
  Vector<double> acc = Vector<double>::Zero(model.dim());
  for (auto r : rows) acc += model.vector(r).transpose().cast<double>();
  return acc / static_cast<double>(rows.size());
}

// Vector for tokens[i], or nullopt when out of vocabulary.
std::optional<Vector<double>> token_vector(std::span<const std::string> tokens,
                                           std::size_t i,
                                           const Embedder& embedder,
                                           const Strategy& strategy) {
  const KeyedVectors& model = *embedder.model;
  const std::string& token = tokens[i];
  if (model.kind() == keys::KeyKind::sense) {
    std::vector<KeyedVectors::Index> rows;
    for (auto r : model.variants(token))
      if (model.parts(r).is_sense()) rows.push_back(r);
    if (rows.empty()) return std::nullopt;
    if (embedder.context) {
      const auto d = wsd::disambiguate(token, tokens, i, model,
                                       *embedder.context,
                                       strategy.disambiguation);
      if (d.used_context || rows.size() == 1)
        return Vector<double>(model.vector(d.row).transpose().cast<double>());
    }
    return mean_of_rows(model, rows);
  }
  if (auto r = model.find(keys::word_key(token)))
    return Vector<double>(model.vector(*r).transpose().cast<double>());
  if (auto r = model.find(token))
    return Vector<double>(model.vector(*r).transpose().cast<double>());
  auto rows = model.variants(token);
  if (rows.empty()) rows = model.variants(keys::surface_of(token));
  if (rows.empty()) return std::nullopt;
  return mean_of_rows(model, rows);
}

double cosine_or_zero(const Vector<double>& a, const Vector<double>& b) {
  return cosine(a, b);
}

}  // namespace

std::vector<SentencePair> parse_assin_xml(std::string_view xml,
                                          const ReadOptions& options) {
  std::vector<SentencePair> out;
  std::size_t at = 0;
  while ((at = xml.find("<pair", at)) != std::string_view::npos) {
    const char next = at + 5 < xml.size() ? xml[at + 5] : '\0';
    if (next != ' ' && next != '>' && next != '\t' && next != '\n' &&
        next != '\r') {
      at += 5;
      continue;
    }
    const std::size_t line_no = line_of(xml, at);
    const auto tag_end = xml.find('>', at);
    if (tag_end == std::string_view::npos)
      throw ParseError("unterminated <pair> tag", line_no);
    const auto close = xml.find("</pair>", tag_end);
    if (close == std::string_view::npos)
      throw ParseError("<pair> without </pair>", line_no);
    const std::string_view tag = xml.substr(at, tag_end - at);

    SentencePair pair;
    pair.id = attribute(tag, "id").value_or(std::to_string(out.size() + 1));
    if (auto sim = attribute(tag, "similarity"))
      pair.gold = parse_gold(*sim, line_no);
    const auto t = element(xml, "t", tag_end, close);
    const auto h = element(xml, "h", tag_end, close);
    if (!t || !h)
      throw ParseError("<pair> needs <t> and <h> children", line_no);
    pair.s1 = sentence_tokens(*t, options, line_no);
    pair.s2 = sentence_tokens(*h, options, line_no);
    out.push_back(std::move(pair));
    at = close + 7;
  }
  return out;
}

std::vector<SentencePair> read_pairs(const std::string& path,
                                     const ReadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StreamError(path, "cannot open for reading");
  if (options.format == PairFormat::assin_xml) {
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_assin_xml(ss.str(), options);
  }
  std::vector<SentencePair> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::size_t start = 0;
    while (true) {
      const auto tab = line.find('\t', start);
      f.push_back(line.substr(start, tab == std::string::npos
                                         ? std::string::npos
                                         : tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (f.size() != 4)
      throw ParseError("expected 4 tab-separated fields, found " +
                           std::to_string(f.size()),
                       line_no);
    SentencePair pair;
    pair.id = f[0];
    pair.gold = parse_gold(f[1], line_no);
    pair.s1 = sentence_tokens(f[2], options, line_no);
    pair.s2 = sentence_tokens(f[3], options, line_no);
    out.push_back(std::move(pair));
  }
  return out;
}

SentenceEmbedding sentence_embedding(std::span<const std::string> tokens,
                                     const Embedder& embedder,
                                     const Strategy& strategy) {
  if (!embedder.model) throw UsageError("sentence_embedding needs a model");
  SentenceEmbedding out;
  out.vector = Vector<double>::Zero(embedder.model->dim());
  std::size_t found = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (auto v = token_vector(tokens, i, embedder, strategy)) {
      out.vector += *v;
      ++found;
    }
  }
  if (found == 0) {
    out.oov_fraction = 1.0;
    return out;
  }
  if (strategy.composition == Composition::mean)
    out.vector /= static_cast<double>(found);
  out.oov_fraction = static_cast<double>(tokens.size() - found) /
                     static_cast<double>(tokens.size());
  return out;
}

std::vector<double> features(const SentencePair& pair, const Vector<double>& e1,
                             const Vector<double>& e2,
                             const Strategy& strategy) {
  std::vector<double> x{cosine_or_zero(e1, e2)};
  if (strategy.extra_features) {
    const std::set<std::string> a(pair.s1.begin(), pair.s1.end());
    const std::set<std::string> b(pair.s2.begin(), pair.s2.end());
    std::size_t common = 0;
    for (const auto& t : a) common += b.count(t);
    const std::size_t unite = a.size() + b.size() - common;
    x.push_back(unite ? static_cast<double>(common) / static_cast<double>(unite)
                      : 0.0);
    const std::size_t lo = std::min(pair.s1.size(), pair.s2.size());
    const std::size_t hi = std::max(pair.s1.size(), pair.s2.size());
    x.push_back(hi ? static_cast<double>(lo) / static_cast<double>(hi) : 0.0);
  }
  return x;
}

double Regression::raw(std::span<const double> x) const {
  double y = intercept;
  for (std::size_t i = 0; i < weights.size(); ++i) y += weights[i] * x[i];
  return y;
}

Regression fit(const std::vector<std::vector<double>>& x,
               std::span<const double> y) {
  if (x.size() != y.size()) throw DataError("feature/gold length mismatch");
  if (x.size() < 2) throw DataError("degenerate design: fewer than 2 pairs");
  const std::size_t n = x.size();
  const std::size_t p = x[0].size();

  Vector<double> means = Vector<double>::Zero(static_cast<Eigen::Index>(p));
  double y_mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < p; ++j) means[static_cast<Eigen::Index>(j)] += x[i][j];
    y_mean += y[i];
  }
  means /= static_cast<double>(n);
  y_mean /= static_cast<double>(n);

  Regression reg;
  if (p == 1) {
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double dx = x[i][0] - means[0];
      sxx += dx * dx;
      sxy += dx * (y[i] - y_mean);
    }
    if (sxx == 0.0) throw DataError("degenerate design: constant feature");
    reg.weights = {sxy / sxx};
    reg.intercept = y_mean - reg.weights[0] * means[0];
    return reg;
  }

  Eigen::MatrixXd a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  Vector<double> b(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < p; ++j)
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          x[i][j] - means[static_cast<Eigen::Index>(j)];
    b[static_cast<Eigen::Index>(i)] = y[i] - y_mean;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  qr.setThreshold(1e-12);
  if (qr.rank() < static_cast<Eigen::Index>(p))
    throw DataError("degenerate design: collinear or constant features");
  const Vector<double> w = qr.solve(b);
  reg.weights.assign(w.data(), w.data() + w.size());
  reg.intercept = y_mean - w.dot(means);
  return reg;
}

namespace {

struct Featurized {
  std::vector<std::vector<double>> x;
  std::vector<double> gold;
};

Featurized featurize(const std::vector<SentencePair>& pairs,
                     const Embedder& embedder, const Strategy& strategy,
                     bool need_gold) {
  Featurized out;
  for (const auto& pair : pairs) {
    if (need_gold && !pair.gold)
      throw DataError("pair '" + pair.id + "' has no gold score");
    const auto e1 = sentence_embedding(pair.s1, embedder, strategy);
    const auto e2 = sentence_embedding(pair.s2, embedder, strategy);
    out.x.push_back(features(pair, e1.vector, e2.vector, strategy));
    out.gold.push_back(pair.gold.value_or(0.0));
  }
  return out;
}

Report score(const Featurized& train, const Featurized& test,
             const Strategy& strategy) {
  Report report;
  report.regression = fit(train.x, train.gold);
  std::vector<double> preds;
  for (const auto& x : test.x)
    preds.push_back(predict(report.regression, x, strategy.clip));
  report.n = preds.size();
  report.mse = mse(preds, test.gold);
  report.rho = pearson(preds, test.gold);
  report.significance = pearson_significance(report.rho, report.n);
  return report;
}

}  // namespace

Regression fit(const std::vector<SentencePair>& train, const Embedder& embedder,
               const Strategy& strategy) {
  const auto data = featurize(train, embedder, strategy, true);
  return fit(data.x, data.gold);
}

double predict(const Regression& regression, std::span<const double> x,
               bool clip) {
  const double y = regression.raw(x);
  return clip ? std::clamp(y, kMinScore, kMaxScore) : y;
}

double predict(const Regression& regression, const SentencePair& pair,
               const Embedder& embedder, const Strategy& strategy) {
  const auto e1 = sentence_embedding(pair.s1, embedder, strategy);
  const auto e2 = sentence_embedding(pair.s2, embedder, strategy);
  return predict(regression, features(pair, e1.vector, e2.vector, strategy),
                 strategy.clip);
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw DataError("pearson: length mismatch");
  if (xs.size() < 2) throw DataError("pearson: need at least 2 points");
  // Single pass with running co-moments.
  double mx = 0.0, my = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double n = static_cast<double>(i + 1);
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    mx += dx / n;
    my += dy / n;
    sxx += dx * (xs[i] - mx);
    syy += dy * (ys[i] - my);
    sxy += dx * (ys[i] - my);
  }
  if (sxx <= 0.0 || syy <= 0.0)
    throw DataError("pearson: correlation undefined for a constant series");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double mse(std::span<const double> preds, std::span<const double> golds) {
  if (preds.size() != golds.size() || preds.empty())
    throw DataError("mse: lengths must match and be >= 1");
  double sum = 0.0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const double d = preds[i] - golds[i];
    sum += d * d;
  }
  return sum / static_cast<double>(preds.size());
}

double regularized_incomplete_beta(double a, double b, double x) {
  if (a <= 0.0 || b <= 0.0) throw UsageError("incomplete beta: a, b must be > 0");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return boost::math::ibeta(a, b, x);
}

Significance pearson_significance(double rho, std::size_t n) {
  if (n < 3) throw DataError("significance test needs n >= 3");
  Significance s;
  if (std::fabs(rho) >= 1.0) {
    s.exact_fit = true;
    s.p = 0.0;
    s.t = std::copysign(std::numeric_limits<double>::infinity(), rho);
    return s;
  }
  const double df = static_cast<double>(n - 2);
  s.t = rho * std::sqrt(df / (1.0 - rho * rho));
  s.p = std::clamp(
      regularized_incomplete_beta(df / 2.0, 0.5, df / (df + s.t * s.t)), 0.0,
      1.0);
  return s;
}

Report evaluate(const std::vector<SentencePair>& train,
                const std::vector<SentencePair>& test, const Embedder& embedder,
                const Strategy& strategy) {
  return score(featurize(train, embedder, strategy, true),
               featurize(test, embedder, strategy, true), strategy);
}

Report evaluate_precomputed(const std::vector<SentencePair>& train,
                            const std::vector<SentencePair>& test,
                            const KeyedVectors& vectors,
                            const Strategy& strategy) {
  auto run = [&](const std::vector<SentencePair>& pairs) {
    Featurized out;
    for (const auto& pair : pairs) {
      if (!pair.gold) throw DataError("pair '" + pair.id + "' has no gold score");
      const Vector<double> e1 =
          vectors.vector(vectors.at(pair.id + ":1")).transpose().cast<double>();
      const Vector<double> e2 =
          vectors.vector(vectors.at(pair.id + ":2")).transpose().cast<double>();
      out.x.push_back(features(pair, e1, e2, strategy));
      out.gold.push_back(*pair.gold);
    }
    return out;
  };
  return score(run(train), run(test), strategy);
}

void Report::print(std::ostream& out) const {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-10s %12s\n", "metric", "value");
  out << buf;
  auto row = [&](const char* name, double v) {
    std::snprintf(buf, sizeof buf, "%-10s %12.6f\n", name, v);
    out << buf;
  };
  row("pearson", rho);
  row("mse", mse);
  std::snprintf(buf, sizeof buf, "%-10s %12zu\n", "n", n);
  out << buf;
  row("t", significance.t);
  std::snprintf(buf, sizeof buf, "%-10s %12.3g%s\n", "p", significance.p,
                significance.exact_fit ? "  (exact fit)" : "");
  out << buf << '\n';
  out << "rho=" << rho << '\n'
      << "mse=" << mse << '\n'
      << "n=" << n << '\n'
      << "t=" << significance.t << '\n'
      << "p=" << significance.p << '\n';
}

}  // namespace semb::sts
