#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "anchor/features.hpp"
#include "anchor/linear_svm.hpp"

namespace anchor {

// A fitted feature space plus the linear model over its columns.
struct Classifier {
  FeatureSpace space;
  LinearModel model;

  double score(std::string_view text) const;
  Prediction predict(std::string_view text) const;
  // Parallel over texts; identical to calling predict on each.
  std::vector<Prediction> predict_batch(std::span<const std::string> texts) const;
};

// labels are 0/1.
Classifier train_classifier(std::span<const std::string> texts, std::span<const int> labels,
                            const FeatureConfig& features, const TrainOptions& options);

// Versioned TSV dump: "anchor-linear-model v1", key/value header, then one
// row per column (term, idf, weight). Doubles are written with 17 significant
// digits so a reload scores identically.
void write_classifier(std::ostream& out, const Classifier& c);
Classifier read_classifier(std::istream& in);
void save_classifier(const std::filesystem::path& path, const Classifier& c);
Classifier load_classifier(const std::filesystem::path& path);

}  // namespace anchor
