#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "anchor/normalize.hpp"

namespace anchor {

enum class FeatureMode { char_only, word_only, char_word };
std::string_view to_string(FeatureMode m);
FeatureMode parse_feature_mode(std::string_view s);

struct FeatureConfig {
  FeatureMode mode = FeatureMode::char_word;
  int char_min = 2;
  int char_max = 5;
  int word_min = 1;
  int word_max = 3;
  bool normalize_text = true;
  NormalizationConfig normalization;

  void validate() const;
};

struct SparseVector {
  std::size_t dim = 0;
  std::vector<std::uint32_t> index;  // strictly increasing
  std::vector<double> value;

  std::size_t nnz() const { return index.size(); }
  double dot(std::span<const double> dense) const;
  double dot(const SparseVector& other) const;
  double squared_norm() const;
};

// tf-idf vocabulary fitted on training texts. Columns are ordered by term so
// the space is independent of input order. Word terms are prefixed "w:" and
// character terms "c:".
class FeatureSpace {
 public:
  FeatureSpace() = default;

  // Throws DataError if the training texts yield no terms.
  static FeatureSpace fit(std::span<const std::string> texts, const FeatureConfig& cfg);
  // Rebuild from a stored vocabulary (model files).
  static FeatureSpace from_parts(FeatureConfig cfg, std::vector<std::string> terms, std::vector<double> idf,
                                 std::size_t n_docs);

  // Raw term occurrences of a text, prefixed; unknown terms included.
  std::vector<std::string> extract_terms(std::string_view text) const;

  // tf * idf, L2-normalized; unseen terms are dropped, so a text with no
  // known term gives the zero vector.
  SparseVector vectorize(std::string_view text) const;
  std::vector<SparseVector> vectorize_batch(std::span<const std::string> texts) const;

  std::size_t size() const { return terms_.size(); }
  std::size_t n_docs() const { return n_docs_; }
  const FeatureConfig& config() const { return cfg_; }
  const std::vector<std::string>& terms() const { return terms_; }
  const std::vector<double>& idf() const { return idf_; }
  // Column of a term, or -1.
  std::int64_t column(const std::string& term) const;

 private:
  FeatureConfig cfg_;
  std::vector<std::string> terms_;
  std::vector<double> idf_;
  std::unordered_map<std::string, std::uint32_t> index_;
  std::size_t n_docs_ = 0;
};

// ln((1 + n_docs) / (1 + df)) + 1
double smooth_idf(std::size_t n_docs, std::size_t df);

}  // namespace anchor
