#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "anchor/corpus.hpp"

namespace anchor {

struct NormalizationConfig {
  bool map_alef = true;          // أ إ آ -> ا
  bool map_taa = true;           // ة -> ه
  bool map_yaa = true;           // ى -> ي
  bool strip_diacritics = true;  // harakat, tanween, shadda, sukun, dagger alef, tatweel
  int squash_repeats_over = 2;   // letter runs longer than this are cut to this length
  std::string replace_mentions_with = "@USER";
  std::string replace_urls_with = "URL";
  bool newline_to_space = true;  // also rewrites the literal "<LF>" marker

  void validate() const;
  bool operator==(const NormalizationConfig&) const = default;
};

// Flat key=value text; unknown keys are errors, '#' starts a comment.
NormalizationConfig parse_normalization_config(std::istream& in, NormalizationConfig base = {});
std::string to_config_text(const NormalizationConfig& cfg);

// Idempotent; never increases length when squashing is on.
std::string normalize(std::string_view text, const NormalizationConfig& cfg);

bool is_letter(char32_t cp);

// Splits on whitespace and punctuation. Each emoji sequence is a token of its
// own. '@' and '_' are word characters so "@USER" survives.
std::vector<std::string> tokenize(std::string_view text);

// Contiguous n-grams, n in [n_min, n_max], in generation order (by n, then
// position). Word n-grams are space-joined; character n-grams count
// codepoints. Throws UsageError on an invalid range.
std::vector<std::string> word_ngrams(std::span<const std::string> tokens, int n_min, int n_max);
std::vector<std::string> char_ngrams(std::string_view text, int n_min, int n_max);

struct NearDupPolicy {
  int shingle_size = 2;
  double jaccard_threshold = 0.8;
  int min_tokens = 3;
  NormalizationConfig normalization;

  void validate() const;
};

enum class DropReason { exact, near, short_text };
std::string_view to_string(DropReason r);

struct DedupResult {
  std::vector<Document> kept;
  std::vector<std::pair<std::string, DropReason>> dropped;
};

// Normalized tokens minus mention/URL placeholders.
std::vector<std::string> content_tokens(std::string_view text, const NearDupPolicy& policy);

// Distinct token shingles; a text shorter than the shingle size yields its
// whole token sequence as one shingle.
std::vector<std::string> shingles(std::span<const std::string> tokens, int size);

// |A ∩ B| / |A ∪ B| over sorted, distinct inputs; 0 when both are empty.
double jaccard(std::span<const std::string> a, std::span<const std::string> b);

// Left-to-right, first occurrence wins. A document is dropped as short
// (fewer than min_tokens content tokens), exact (same normalized content as a
// kept document) or near (shingle Jaccard >= threshold with a kept document),
// checked in that order.
DedupResult dedup(std::span<const Document> corpus, const NearDupPolicy& policy);

}  // namespace anchor
