#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace anchor {

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::int64_t support = 0;
};

// Binary report; index 0 is the negative class, 1 the positive class.
struct EvalReport {
  std::int64_t n = 0;
  double accuracy = 0.0;
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
  std::array<ClassMetrics, 2> per_class{};
  std::array<std::array<std::int64_t, 2>, 2> confusion{};  // [gold][pred]
};

// Throws UsageError if lengths differ or the lists are empty.
EvalReport evaluate(std::span<const int> gold, std::span<const int> predicted);

struct PredictionRow {
  std::string doc_id;
  int label = 0;
  double score = 0.0;
};

// TSV with header doc_id<TAB>label<TAB>score; labels are 0/1.
std::vector<PredictionRow> parse_predictions(std::istream& in);
std::vector<PredictionRow> load_predictions(const std::string& path);
void write_predictions(std::ostream& out, std::span<const PredictionRow> rows);

// Scores an external predictions file against a labels file for one task
// (offensive, hate, vulgar, violence). Every predicted id must have a gold
// label and vice versa.
EvalReport evaluate_predictions(const std::string& labels_path, const std::string& predictions_path,
                                const std::string& task);

void write_report(std::ostream& out, const EvalReport& r);

}  // namespace anchor
