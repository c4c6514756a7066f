#pragma once

// Serial reference implementations of the parallel kernels. They favour
// obviousness over speed and are used by tests and benchmarks.

#include <span>
#include <string>
#include <vector>

#include "anchor/emoji.hpp"
#include "anchor/explain.hpp"
#include "anchor/features.hpp"
#include "anchor/lexicon.hpp"
#include "anchor/normalize.hpp"

namespace anchor::reference {

TermCounts count_terms(std::span<const Document> corpus, std::span<const char> positive,
                       const NormalizationConfig& cfg);

std::vector<Document> filter_by_seeds(std::span<const Document> corpus, const SeedInventory& inventory);

std::vector<EmojiStat> emoji_stats(std::span<const Document> corpus, std::span<const LabelRecord> labels);

std::vector<SparseVector> vectorize_batch(const FeatureSpace& space, std::span<const std::string> texts);

// O(n^2) scan against every kept document.
DedupResult dedup(std::span<const Document> corpus, const NearDupPolicy& policy);

Explanation explain(const ScoreFn& score, std::span<const std::string> tokens, const ExplainOptions& opt);

}  // namespace anchor::reference
