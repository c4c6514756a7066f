#include "anchor/reference.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "anchor/error.hpp"

namespace anchor::reference {

TermCounts count_terms(std::span<const Document> corpus, std::span<const char> positive,
                       const NormalizationConfig& cfg) {
  TermCounts counts;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    for (const auto& t : tokenize(normalize(corpus[i].text, cfg))) counts.add(t, positive[i] != 0);
  }
  return counts;
}

std::vector<Document> filter_by_seeds(std::span<const Document> corpus, const SeedInventory& inventory) {
  if (inventory.empty()) throw UsageError("seed inventory is empty");
  std::vector<Document> out;
  for (const auto& d : corpus) {
    for (const auto& c : extract_emojis(d.text)) {
      if (inventory.contains(c.base)) {
        out.push_back(d);
        break;
      }
    }
  }
  return out;
}

std::vector<EmojiStat> emoji_stats(std::span<const Document> corpus, std::span<const LabelRecord> labels) {
  const auto joined = join_labels(corpus, labels);
  std::map<std::u32string, EmojiStat> by_base;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    std::set<std::u32string> seen;
    for (const auto& c : extract_emojis(corpus[i].text)) seen.insert(c.base);
    for (const auto& base : seen) {
      EmojiStat& s = by_base[base];
      s.base = base;
      ++s.n_total;
      s.n_offensive += joined[i]->offensive ? 1 : 0;
      s.n_hate += joined[i]->hate() ? 1 : 0;
    }
  }
  std::vector<EmojiStat> stats;
  for (auto& [base, s] : by_base) stats.push_back(s);
  std::stable_sort(stats.begin(), stats.end(), [](const EmojiStat& a, const EmojiStat& b) {
    const auto lhs = static_cast<unsigned __int128>(a.n_offensive) * b.n_total;
    const auto rhs = static_cast<unsigned __int128>(b.n_offensive) * a.n_total;
    if (lhs != rhs) return lhs > rhs;
    return a.n_total > b.n_total;
  });
  return stats;
}

std::vector<SparseVector> vectorize_batch(const FeatureSpace& space, std::span<const std::string> texts) {
  std::vector<SparseVector> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(space.vectorize(t));
  return out;
}

DedupResult dedup(std::span<const Document> corpus, const NearDupPolicy& policy) {
  policy.validate();
  DedupResult result;
  std::vector<std::vector<std::string>> kept_tokens;
  std::vector<std::vector<std::string>> kept_shingles;
  for (const auto& doc : corpus) {
    const auto tokens = content_tokens(doc.text, policy);
    if (tokens.size() < static_cast<std::size_t>(policy.min_tokens)) {
      result.dropped.emplace_back(doc.id, DropReason::short_text);
      continue;
    }
    if (std::find(kept_tokens.begin(), kept_tokens.end(), tokens) != kept_tokens.end()) {
      result.dropped.emplace_back(doc.id, DropReason::exact);
      continue;
    }
    const auto sh = shingles(tokens, policy.shingle_size);
    const bool near = std::any_of(kept_shingles.begin(), kept_shingles.end(), [&](const auto& other) {
      return jaccard(sh, other) >= policy.jaccard_threshold;
    });
    if (near) {
      result.dropped.emplace_back(doc.id, DropReason::near);
      continue;
    }
    kept_tokens.push_back(tokens);
    kept_shingles.push_back(sh);
    result.kept.push_back(doc);
  }
  return result;
}

Explanation explain(const ScoreFn& score, std::span<const std::string> tokens, const ExplainOptions& opt) {
  opt.validate();
  if (tokens.empty()) throw UsageError("nothing to explain: the text has no tokens");
  const std::size_t m = tokens.size();
  const auto masks = sample_masks(m, opt);
  std::vector<double> scores;
  for (std::size_t s = 0; s < static_cast<std::size_t>(opt.n_samples); ++s) {
    scores.push_back(score(masked_text(tokens, std::span(masks).subspan(s * m, m))));
  }
  return fit_surrogate(tokens, masks, scores, opt);
}

}  // namespace anchor::reference
