#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "anchor/corpus.hpp"

namespace anchor {

// Job names used when building LabelRecords.
inline constexpr std::string_view kJobOffensive = "offensive";
inline constexpr std::string_view kJobHate = "hate";
inline constexpr std::string_view kJobVulgar = "vulgar";
inline constexpr std::string_view kJobViolence = "violence";

struct Judgment {
  std::string doc_id;
  std::string annotator_id;
  std::string job;
  std::string label;  // "0"/"1" for binary jobs, a target token (or "none") for hate
  std::string timestamp;

  bool operator==(const Judgment&) const = default;
};

// Columns doc_id, annotator_id, job, label, timestamp with a header row.
// Rejects a second judgment for the same (doc_id, annotator_id, job).
std::vector<Judgment> parse_judgments(std::istream& in);
std::vector<Judgment> load_judgments(const std::filesystem::path& path);

struct QCGate {
  std::map<std::string, std::string> test_answers;  // doc_id -> gold label
  double pass_threshold = 0.80;

  void validate() const;
};

// "doc_id<TAB>label" with a header row.
std::map<std::string, std::string> parse_test_answers(std::istream& in);

struct GateResult {
  std::size_t n_test = 0;
  std::size_t n_correct = 0;
  double accuracy = 0.0;
  bool pass = false;
};

// Accuracy on the gate's test documents among this annotator's judgments.
// Judgments on non-test documents are ignored. Throws DataError if the
// annotator judged no test document.
GateResult gate_annotator(std::span<const Judgment> judgments, const QCGate& gate);

// Gate result for every annotator who judged at least one test document of `job`.
std::map<std::string, GateResult> gate_all(std::span<const Judgment> judgments, std::string_view job,
                                           const QCGate& gate);

enum class Agreement { full, majority, tie };
std::string_view to_string(Agreement a);
Agreement parse_agreement(std::string_view s);

struct Vote {
  std::string label;  // modal label; for ties the smallest tied label
  Agreement agreement = Agreement::full;
  std::size_t n_judgments = 0;

  bool operator==(const Vote&) const = default;
};

// Order-independent. Throws UsageError on an empty list.
Vote majority_vote(std::span<const std::string> labels);

struct AggregatedDoc {
  std::string doc_id;
  std::string job;
  Vote vote;
};

// One entry per (doc, job), in order of first appearance.
std::vector<AggregatedDoc> aggregate(std::span<const Judgment> judgments);

struct AgreementStats {
  std::size_t n_docs = 0;
  double full = 0.0;
  double majority = 0.0;
  double tie = 0.0;
};
AgreementStats agreement_stats(std::span<const AggregatedDoc> docs, std::string_view job);

// Cohen's kappa for two aligned label sequences. Throws DataError on length
// mismatch, fewer than 2 items, or p_e = 1 (kappa undefined).
double cohen_kappa(std::span<const std::string> a, std::span<const std::string> b);

struct PairwiseKappa {
  double mean = 0.0;
  std::size_t n_pairs = 0;    // pairs contributing to the mean
  std::size_t n_skipped = 0;  // qualifying pairs with undefined kappa
};

// Unweighted mean of Cohen's kappa over annotator pairs sharing at least
// min_shared documents of `job`. Throws DataError if no pair qualifies.
PairwiseKappa avg_pairwise_kappa(std::span<const Judgment> judgments, std::string_view job,
                                 std::size_t min_shared = 20);

struct QueueItem {
  std::string doc_id;
  std::string job;
  std::string label;
  Agreement agreement = Agreement::majority;
  std::string override_label;  // empty = keep
};

// Every non-unanimous document, in input order.
std::vector<QueueItem> adjudication_queue(std::span<const AggregatedDoc> docs);

// Columns doc_id, job, label, agreement, override.
void write_queue(std::ostream& out, std::span<const QueueItem> queue);
std::vector<QueueItem> parse_queue(std::istream& in);

// Replaces the label of every (doc, job) with a non-empty override; the
// agreement is left as it was. Returns the number of labels changed.
std::size_t apply_overrides(std::vector<AggregatedDoc>& docs, std::span<const QueueItem> adjudicated);

// Builds layered labels from the offensive/hate/vulgar/violence jobs. A
// document needs an offensive decision; secondary labels on a non-offensive
// document are dropped so the result always satisfies label monotonicity.
std::vector<LabelRecord> build_label_records(std::span<const AggregatedDoc> docs);

}  // namespace anchor
