#pragma once
// Independent reference implementations and generators shared by the unit
// tests and the acceptance runner. Nothing here calls into the library's
// algorithms.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "surveyforge/corpus.hpp"
#include "surveyforge/sentence.hpp"

namespace oracle {

using Tokens = std::vector<std::string>;

struct Prf {
  double p = 0, r = 0, f = 0;
};

inline Prf prf(double overlap, double cand, double ref) {
  Prf out;
  out.p = cand > 0 ? overlap / cand : 0.0;
  out.r = ref > 0 ? overlap / ref : 0.0;
  out.f = out.p + out.r > 0 ? 2 * out.p * out.r / (out.p + out.r) : 0.0;
  return out;
}

inline std::map<Tokens, int> ngram_counts(const Tokens& t, std::size_t n) {
  std::map<Tokens, int> c;
  for (std::size_t i = 0; i + n <= t.size(); ++i) c[Tokens(t.begin() + i, t.begin() + i + n)]++;
  return c;
}

inline Prf rouge_n(const Tokens& cand, const Tokens& ref, std::size_t n) {
  const auto cc = ngram_counts(cand, n);
  const auto rc = ngram_counts(ref, n);
  double overlap = 0, ct = 0, rt = 0;
  for (const auto& [g, k] : cc) {
    ct += k;
    auto it = rc.find(g);
    if (it != rc.end()) overlap += std::min(k, it->second);
  }
  for (const auto& [g, k] : rc) rt += k;
  return prf(overlap, ct, rt);
}

inline std::size_t lcs_dp(const Tokens& a, const Tokens& b) {
  std::vector<std::vector<std::size_t>> t(a.size() + 1, std::vector<std::size_t>(b.size() + 1, 0));
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      t[i][j] = a[i - 1] == b[j - 1] ? t[i - 1][j - 1] + 1 : std::max(t[i - 1][j], t[i][j - 1]);
    }
  }
  return t[a.size()][b.size()];
}

inline Prf rouge_l(const Tokens& cand, const Tokens& ref) {
  return prf(static_cast<double>(lcs_dp(cand, ref)), static_cast<double>(cand.size()),
             static_cast<double>(ref.size()));
}

struct Frag {
  std::size_t s, d, len;
};

// Greedy longest match at each summary position, checking every doc start.
inline std::vector<Frag> fragments(const Tokens& doc, const Tokens& sum) {
  std::vector<Frag> out;
  std::size_t i = 0;
  while (i < sum.size()) {
    std::size_t best = 0, best_d = 0;
    for (std::size_t d = 0; d < doc.size(); ++d) {
      std::size_t k = 0;
      while (i + k < sum.size() && d + k < doc.size() && sum[i + k] == doc[d + k]) ++k;
      if (k > best) {
        best = k;
        best_d = d;
      }
    }
    if (best > 0) {
      out.push_back({i, best_d, best});
      i += best;
    } else {
      ++i;
    }
  }
  return out;
}

// Principal left eigenvector of a row-stochastic matrix, normalized to sum 1.
inline std::vector<double> stationary(const std::vector<double>& row_major, std::size_t n) {
  Eigen::MatrixXd m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = row_major[i * n + j];
  Eigen::EigenSolver<Eigen::MatrixXd> es(m.transpose());
  Eigen::Index best = 0;
  for (Eigen::Index k = 1; k < es.eigenvalues().size(); ++k) {
    if (std::abs(es.eigenvalues()[k] - 1.0) < std::abs(es.eigenvalues()[best] - 1.0)) best = k;
  }
  Eigen::VectorXd v = es.eigenvectors().col(best).real();
  v /= v.sum();
  return {v.data(), v.data() + n};
}

// Damped walk matrix built from scratch: row-normalized weights, uniform
// rows for isolated nodes, teleport (1-d)/n.
inline std::vector<double> damped_matrix(const std::vector<std::vector<double>>& w, double d) {
  const std::size_t n = w.size();
  std::vector<double> m(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    double out = 0;
    for (double x : w[i]) out += x;
    for (std::size_t j = 0; j < n; ++j) {
      const double walk = out > 0 ? w[i][j] / out : 1.0 / n;
      m[i * n + j] = d * walk + (1 - d) / n;
    }
  }
  return m;
}

inline double fleiss(const std::vector<std::vector<int>>& t) {
  const double N = static_cast<double>(t.size());
  const std::size_t k = t[0].size();
  double n = 0;
  for (int x : t[0]) n += x;
  double pbar = 0;
  for (const auto& row : t) {
    double s = 0;
    for (int x : row) s += static_cast<double>(x) * (x - 1);
    pbar += s / (n * (n - 1));
  }
  pbar /= N;
  double pe = 0;
  for (std::size_t j = 0; j < k; ++j) {
    double col = 0;
    for (const auto& row : t) col += row[j];
    const double pj = col / (N * n);
    pe += pj * pj;
  }
  return (pbar - pe) / (1 - pe);
}

}  // namespace oracle

namespace gen {

inline std::vector<std::string> tokens(std::mt19937_64& rng, std::size_t max_len, int vocab,
                                       std::size_t min_len = 0) {
  std::uniform_int_distribution<std::size_t> len(min_len, max_len);
  std::uniform_int_distribution<int> w(0, vocab - 1);
  std::vector<std::string> out(len(rng));
  for (auto& t : out) t = "w" + std::to_string(w(rng));
  return out;
}

inline surveyforge::SentenceRecord sentence(const std::vector<std::string>& toks) {
  std::string text;
  for (const auto& t : toks) {
    if (!text.empty()) text += ' ';
    text += t;
  }
  return surveyforge::SentenceRecord::from_text(text);
}

}  // namespace gen
