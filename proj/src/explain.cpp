#include "anchor/explain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "anchor/error.hpp"
#include "anchor/random.hpp"
#include "anchor/utf8.hpp"

namespace anchor {

void ExplainOptions::validate() const {
  if (n_samples < 1) throw UsageError("n_samples must be at least 1");
  if (!(kernel_width > 0.0)) throw UsageError("kernel width must be positive");
  if (!(ridge >= 0.0)) throw UsageError("ridge must be non-negative");
  if (top_k < 0) throw UsageError("top_k must be non-negative");
}

std::vector<std::string> explain_tokens(std::string_view text, const NormalizationConfig& normalization,
                                        const SeedInventory* inventory) {
  static const SeedInventory empty;
  const SeedInventory& inv = inventory != nullptr ? *inventory : empty;
  std::vector<std::string> tokens;
  for (auto& tok : tokenize(normalize(text, normalization))) {
    const std::u32string cps = utf8::decode(tok);
    if (!cps.empty() && emoji_sequence_length(cps, 0) == cps.size()) {
      tokens.push_back(":" + inv.alias(strip_modifiers(cps)) + ":");
    } else {
      tokens.push_back(std::move(tok));
    }
  }
  return tokens;
}

std::string masked_text(std::span<const std::string> tokens, std::span<const std::uint8_t> mask) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (mask[i] == 0) continue;
    if (!out.empty()) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

std::vector<std::uint8_t> sample_masks(std::size_t n_tokens, const ExplainOptions& opt) {
  const auto n = static_cast<std::size_t>(opt.n_samples);
  std::vector<std::uint8_t> masks(n * n_tokens, 1);
  Rng rng(opt.seed);
  for (std::size_t s = 1; s < n; ++s) {
    for (std::size_t j = 0; j < n_tokens; ++j) masks[s * n_tokens + j] = static_cast<std::uint8_t>(rng.next() >> 63);
  }
  return masks;
}

Explanation fit_surrogate(std::span<const std::string> tokens, std::span<const std::uint8_t> masks,
                          std::span<const double> scores, const ExplainOptions& opt) {
  const std::size_t m = tokens.size();
  const std::size_t n = scores.size();
  if (m == 0) throw UsageError("nothing to explain: no tokens");
  if (masks.size() != n * m) throw UsageError("mask matrix does not match the sample count");

  Eigen::MatrixXd Z(n, m);
  Eigen::VectorXd f(n);
  Eigen::VectorXd pi(n);
  const double width2 = opt.kernel_width * opt.kernel_width;
  for (std::size_t s = 0; s < n; ++s) {
    std::size_t masked = 0;
    for (std::size_t j = 0; j < m; ++j) {
      Z(s, j) = masks[s * m + j];
      masked += masks[s * m + j] == 0 ? 1 : 0;
    }
    const double d = static_cast<double>(masked) / static_cast<double>(m);
    pi(s) = std::exp(-d * d / width2);
    f(s) = scores[s];
  }
  const double total = pi.sum();
  const Eigen::RowVectorXd zbar = (pi.transpose() * Z) / total;
  const double fbar = pi.dot(f) / total;
  const Eigen::MatrixXd Zc = Z.rowwise() - zbar;
  const Eigen::VectorXd fc = f.array() - fbar;
  const Eigen::MatrixXd ZtW = Zc.transpose() * pi.asDiagonal();
  Eigen::MatrixXd A = ZtW * Zc;
  for (std::size_t j = 0; j < m; ++j) {
    const double var = A(j, j) / total;
    A(j, j) += opt.ridge * (var > 0.0 ? var : 1.0);
  }
  const Eigen::VectorXd beta = A.ldlt().solve(ZtW * fc);

  Explanation e;
  e.tokens.assign(tokens.begin(), tokens.end());
  e.weights.assign(beta.data(), beta.data() + m);
  e.intercept = fbar - zbar.dot(beta);
  e.score_full = scores[0];

  const Eigen::VectorXd resid = fc - Zc * beta;
  const double ss_res = pi.dot(resid.cwiseProduct(resid));
  const double ss_tot = pi.dot(fc.cwiseProduct(fc));
  e.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;

  e.top.resize(m);
  std::iota(e.top.begin(), e.top.end(), 0);
  std::stable_sort(e.top.begin(), e.top.end(),
                   [&](std::size_t a, std::size_t b) { return std::abs(e.weights[a]) > std::abs(e.weights[b]); });
  e.top.resize(std::min(m, static_cast<std::size_t>(opt.top_k)));
  return e;
}

Explanation explain(const ScoreFn& score, std::span<const std::string> tokens, const ExplainOptions& opt) {
  opt.validate();
  if (tokens.empty()) throw UsageError("nothing to explain: the text has no tokens");
  const std::size_t m = tokens.size();
  const auto masks = sample_masks(m, opt);
  std::vector<double> scores(static_cast<std::size_t>(opt.n_samples));
  const auto n = static_cast<std::int64_t>(opt.n_samples);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t s = 0; s < n; ++s) {
    scores[s] = score(masked_text(tokens, std::span(masks).subspan(s * m, m)));
  }
  return fit_surrogate(tokens, masks, scores, opt);
}

Explanation explain(const Classifier& classifier, std::string_view text, const ExplainOptions& opt,
                    const SeedInventory* inventory) {
  const auto tokens = explain_tokens(text, classifier.space.config().normalization, inventory);
  return explain([&](std::string_view t) { return classifier.score(t); }, tokens, opt);
}

}  // namespace anchor
