#include "anchor/features.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <omp.h>

#include "anchor/error.hpp"

namespace anchor {

std::string_view to_string(FeatureMode m) {
  switch (m) {
    case FeatureMode::char_only: return "char";
    case FeatureMode::word_only: return "word";
    case FeatureMode::char_word: return "char+word";
  }
  return "?";
}

FeatureMode parse_feature_mode(std::string_view s) {
  if (s == "char" || s == "C") return FeatureMode::char_only;
  if (s == "word" || s == "W") return FeatureMode::word_only;
  if (s == "char+word" || s == "C+W") return FeatureMode::char_word;
  throw UsageError("unknown feature mode '" + std::string(s) + "' (expected char, word or char+word)");
}

void FeatureConfig::validate() const {
  if (char_min < 1 || char_min > char_max) throw UsageError("invalid character n-gram range");
  if (word_min < 1 || word_min > word_max) throw UsageError("invalid word n-gram range");
  normalization.validate();
}

double SparseVector::dot(std::span<const double> dense) const {
  double s = 0.0;
  for (std::size_t k = 0; k < index.size(); ++k) s += value[k] * dense[index[k]];
  return s;
}

double SparseVector::dot(const SparseVector& other) const {
  double s = 0.0;
  for (std::size_t i = 0, j = 0; i < index.size() && j < other.index.size();) {
    if (index[i] < other.index[j]) {
      ++i;
    } else if (other.index[j] < index[i]) {
      ++j;
    } else {
      s += value[i++] * other.value[j++];
    }
  }
  return s;
}

double SparseVector::squared_norm() const {
  double s = 0.0;
  for (double v : value) s += v * v;
  return s;
}

double smooth_idf(std::size_t n_docs, std::size_t df) {
  return std::log((1.0 + static_cast<double>(n_docs)) / (1.0 + static_cast<double>(df))) + 1.0;
}

std::vector<std::string> FeatureSpace::extract_terms(std::string_view text) const {
  const std::string prepared = cfg_.normalize_text ? normalize(text, cfg_.normalization) : std::string(text);
  std::vector<std::string> terms;
  if (cfg_.mode != FeatureMode::word_only) {
    for (auto& g : char_ngrams(prepared, cfg_.char_min, cfg_.char_max)) terms.push_back("c:" + g);
  }
  if (cfg_.mode != FeatureMode::char_only) {
    const auto tokens = tokenize(prepared);
    for (auto& g : word_ngrams(tokens, cfg_.word_min, cfg_.word_max)) terms.push_back("w:" + g);
  }
  return terms;
}

FeatureSpace FeatureSpace::fit(std::span<const std::string> texts, const FeatureConfig& cfg) {
  cfg.validate();
  if (texts.empty()) throw DataError("cannot fit features on an empty training set");
  FeatureSpace space;
  space.cfg_ = cfg;
  space.n_docs_ = texts.size();

  std::unordered_map<std::string, std::size_t> df;
  const auto n = static_cast<std::int64_t>(texts.size());
#pragma omp parallel
  {
    std::unordered_map<std::string, std::size_t> local;
#pragma omp for schedule(dynamic, 64) nowait
    for (std::int64_t i = 0; i < n; ++i) {
      auto terms = space.extract_terms(texts[i]);
      std::sort(terms.begin(), terms.end());
      terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
      for (auto& t : terms) ++local[std::move(t)];
    }
#pragma omp critical(anchor_df_merge)
    for (auto& [t, c] : local) df[t] += c;
  }
  if (df.empty()) throw DataError("empty vocabulary: training texts produced no n-grams");

  space.terms_.reserve(df.size());
  for (const auto& [t, c] : df) space.terms_.push_back(t);
  std::sort(space.terms_.begin(), space.terms_.end());
  space.idf_.reserve(space.terms_.size());
  for (std::size_t col = 0; col < space.terms_.size(); ++col) {
    space.idf_.push_back(smooth_idf(space.n_docs_, df.at(space.terms_[col])));
    space.index_.emplace(space.terms_[col], static_cast<std::uint32_t>(col));
  }
  return space;
}

FeatureSpace FeatureSpace::from_parts(FeatureConfig cfg, std::vector<std::string> terms, std::vector<double> idf,
                                      std::size_t n_docs) {
  cfg.validate();
  if (terms.size() != idf.size()) throw DataError("vocabulary and idf table differ in size");
  if (terms.empty()) throw DataError("empty vocabulary");
  FeatureSpace space;
  space.cfg_ = std::move(cfg);
  space.terms_ = std::move(terms);
  space.idf_ = std::move(idf);
  space.n_docs_ = n_docs;
  for (std::size_t col = 0; col < space.terms_.size(); ++col) {
    if (!(space.idf_[col] > 0.0)) throw DataError("idf must be positive");
    if (!space.index_.emplace(space.terms_[col], static_cast<std::uint32_t>(col)).second) {
      throw DataError("duplicate vocabulary term");
    }
  }
  return space;
}

std::int64_t FeatureSpace::column(const std::string& term) const {
  auto it = index_.find(term);
  return it == index_.end() ? -1 : static_cast<std::int64_t>(it->second);
}

SparseVector FeatureSpace::vectorize(std::string_view text) const {
  std::map<std::uint32_t, double> tf;
  for (const auto& t : extract_terms(text)) {
    if (auto it = index_.find(t); it != index_.end()) tf[it->second] += 1.0;
  }
  SparseVector v;
  v.dim = terms_.size();
  v.index.reserve(tf.size());
  v.value.reserve(tf.size());
  double norm2 = 0.0;
  for (const auto& [col, count] : tf) {
    const double w = count * idf_[col];
    v.index.push_back(col);
    v.value.push_back(w);
    norm2 += w * w;
  }
  if (norm2 > 0.0) {
    const double inv = 1.0 / std::sqrt(norm2);
    for (double& x : v.value) x *= inv;
  }
  return v;
}

std::vector<SparseVector> FeatureSpace::vectorize_batch(std::span<const std::string> texts) const {
  std::vector<SparseVector> out(texts.size());
  const auto n = static_cast<std::int64_t>(texts.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t i = 0; i < n; ++i) out[i] = vectorize(texts[i]);
  return out;
}

}  // namespace anchor
