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

// Independent reference computations used to check the library. Nothing
// here calls into the code under test except where noted.

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "semb/sgns.hpp"

namespace semb::oracle {

struct SgnsConfig {
  std::vector<double> center;
  std::vector<std::vector<double>> rows;  // rows[0] is the context
};

inline SgnsConfig random_sgns_config(std::mt19937_64& rng, int dim) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> negs(0, 6);
  SgnsConfig c;
  c.center.resize(static_cast<std::size_t>(dim));
  for (auto& x : c.center) x = u(rng);
  c.rows.resize(static_cast<std::size_t>(1 + negs(rng)));
  for (auto& r : c.rows) {
    r.resize(static_cast<std::size_t>(dim));
    for (auto& x : r) x = u(rng);
  }
  return c;
}

/// -log s(u_0 . w) - sum_{j>0} log s(-u_j . w), in long double.
inline long double sgns_loss(const std::vector<double>& w,
                             const std::vector<std::vector<double>>& rows) {
  long double loss = 0.0L;
  for (std::size_t j = 0; j < rows.size(); ++j) {
    long double dot = 0.0L;
    for (std::size_t i = 0; i < w.size(); ++i)
      dot += static_cast<long double>(w[i]) * rows[j][i];
    const long double x = j == 0 ? dot : -dot;
    loss += std::log1p(std::exp(-x));
  }
  return loss;
}

/// Largest relative error between the step's parameter change at lr = 1
/// (the ascent direction -dLoss) and a central finite difference with
/// h = 1e-5. Calls sgns_step once.
inline double sgns_gradient_error(const SgnsConfig& c, double h = 1e-5) {
  const auto dim = static_cast<Eigen::Index>(c.center.size());
  const auto n = static_cast<Eigen::Index>(c.rows.size());
  RowMatrix<double> out(n, dim);
  RowVector<double> w(dim), grad(dim);
  for (Eigen::Index i = 0; i < dim; ++i) w(i) = c.center[static_cast<std::size_t>(i)];
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < dim; ++i)
      out(j, i) = c.rows[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
  std::vector<WordId> negatives;
  for (Eigen::Index j = 1; j < n; ++j) negatives.push_back(static_cast<WordId>(j));
  const RowVector<double> w0 = w;
  const RowMatrix<double> out0 = out;
  sgns_step<double>(w, out, 0, negatives, 1.0, grad);

  auto rel = [](double a, double b) {
    const double scale = std::max({std::abs(a), std::abs(b), 1e-8});
    return std::abs(a - b) / scale;
  };
  double worst = 0.0;
  auto probe = [&](double& param, double analytic, auto& w_ref, auto& rows_ref) {
    const double saved = param;
    param = saved + h;
    const long double plus = sgns_loss(w_ref, rows_ref);
    param = saved - h;
    const long double minus = sgns_loss(w_ref, rows_ref);
    param = saved;
    const double numeric = -static_cast<double>((plus - minus) / (2.0L * h));
    worst = std::max(worst, rel(analytic, numeric));
  };
  auto w_ref = c.center;
  auto rows_ref = c.rows;
  for (Eigen::Index i = 0; i < dim; ++i)
    probe(w_ref[static_cast<std::size_t>(i)], w(i) - w0(i), w_ref, rows_ref);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < dim; ++i)
      probe(rows_ref[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)],
            out(j, i) - out0(j, i), w_ref, rows_ref);
  return worst;
}

inline double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  return na == 0.0 || nb == 0.0 ? 0.0 : dot / std::sqrt(na * nb);
}

/// Top-p context rows by max_i cos(s_i, c) - min_i cos(s_i, c), found by
/// enumerating every subset of size min(p, |C|) and keeping one that no
/// outside row beats (earlier row wins ties).
inline std::set<std::size_t> brute_force_top_p(
    const std::vector<std::vector<double>>& senses,
    const std::vector<std::vector<double>>& context, std::size_t p) {
  const std::size_t m = context.size();
  std::vector<double> score(m);
  for (std::size_t j = 0; j < m; ++j) {
    double hi = -2.0, lo = 2.0;
    for (const auto& s : senses) {
      const double c = cosine(s, context[j]);
      hi = std::max(hi, c);
      lo = std::min(lo, c);
    }
    score[j] = hi - lo;
  }
  auto beats = [&](std::size_t a, std::size_t b) {
    return score[a] > score[b] || (score[a] == score[b] && a < b);
  };
  const std::size_t k = std::min(p, m);
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) != k) continue;
    bool ok = true;
    for (std::size_t in = 0; in < m && ok; ++in) {
      if (!(mask >> in & 1u)) continue;
      for (std::size_t out = 0; out < m && ok; ++out)
        if (!(mask >> out & 1u) && beats(out, in)) ok = false;
    }
    if (!ok) continue;
    std::set<std::size_t> chosen;
    for (std::size_t j = 0; j < m; ++j)
      if (mask >> j & 1u) chosen.insert(j);
    return chosen;
  }
  return {};
}

}  // namespace semb::oracle
