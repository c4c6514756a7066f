#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "anchor/classifier.hpp"
#include "anchor/emoji.hpp"
#include "anchor/normalize.hpp"

namespace anchor {

struct ExplainOptions {
  int n_samples = 1000;
  double kernel_width = 0.25;
  double ridge = 1.0;
  int top_k = 10;
  std::uint64_t seed = 0;

  void validate() const;
};

struct Explanation {
  std::vector<std::string> tokens;
  std::vector<double> weights;  // one attribution per token
  double intercept = 0.0;
  std::vector<std::size_t> top;  // token indices by |weight| desc, then index
  double r2 = 0.0;               // weighted fit quality of the surrogate
  double score_full = 0.0;
};

// Must be safe to call concurrently.
using ScoreFn = std::function<double(std::string_view)>;

// Tokens the explanation is expressed over: mentions, links, newlines and
// letter runs handled by `normalization`, each emoji replaced by its
// ":alias:" token (names from the inventory when it has one).
std::vector<std::string> explain_tokens(std::string_view text, const NormalizationConfig& normalization,
                                        const SeedInventory* inventory = nullptr);

// Masked text: kept tokens joined by single spaces.
std::string masked_text(std::span<const std::string> tokens, std::span<const std::uint8_t> mask);

// Row-major n_samples x n_tokens masks. Row 0 keeps every token; the others
// keep each token independently with probability 1/2.
std::vector<std::uint8_t> sample_masks(std::size_t n_tokens, const ExplainOptions& opt);

// Weighted ridge surrogate over the mask indicators. Each sample is weighted
// exp(-d^2 / width^2), d the fraction of masked tokens. The penalty on a
// coefficient is ridge times the weighted variance of its indicator (ridge
// alone when that variance is 0); the intercept is not penalized.
Explanation fit_surrogate(std::span<const std::string> tokens, std::span<const std::uint8_t> masks,
                          std::span<const double> scores, const ExplainOptions& opt);

// Throws UsageError when there are no tokens.
Explanation explain(const ScoreFn& score, std::span<const std::string> tokens, const ExplainOptions& opt);

Explanation explain(const Classifier& classifier, std::string_view text, const ExplainOptions& opt,
                    const SeedInventory* inventory = nullptr);

}  // namespace anchor
