#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace anchor {

// One social-media text item.
struct Document {
  std::string id;
  std::string text;
  std::int64_t created_at = 0;  // UTC, seconds since epoch
  std::string lang;

  bool operator==(const Document&) const = default;
};

enum class HateTarget : std::uint8_t {
  gender,
  race,
  ideology,
  social_class,
  religion,
  disability,
};

std::string_view to_string(HateTarget t);
// Throws DataError for unknown tokens.
HateTarget parse_hate_target(std::string_view token);

// Layered gold labels. Hate, vulgar and violence are only annotated on
// offensive items, so any of them implies offensive.
struct LabelRecord {
  std::string doc_id;
  bool offensive = false;
  std::set<HateTarget> hate_targets;  // empty = not hate speech
  bool vulgar = false;
  bool violence = false;

  bool hate() const { return !hate_targets.empty(); }
  bool monotone() const { return offensive || (!hate() && !vulgar && !violence); }

  bool operator==(const LabelRecord&) const = default;
};

struct DatasetSplit {
  std::vector<std::string> train;
  std::vector<std::string> dev;
  std::vector<std::string> test;
  std::uint64_t seed = 0;
};

struct SplitRatios {
  double train = 0.70;
  double dev = 0.10;
  double test = 0.20;
};

enum class CorpusFormat { jsonl, tsv };

CorpusFormat parse_corpus_format(std::string_view name);
// Picks the format from the file extension (".tsv" or anything else -> jsonl).
CorpusFormat guess_corpus_format(const std::filesystem::path& path);

// Documents in file order. Errors carry the 1-based line number.
std::vector<Document> parse_corpus(std::istream& in, CorpusFormat format);
std::vector<Document> load_corpus(const std::filesystem::path& path, CorpusFormat format);
void write_corpus_jsonl(std::ostream& out, std::span<const Document> docs);

std::vector<LabelRecord> parse_labels(std::istream& in);
std::vector<LabelRecord> load_labels(const std::filesystem::path& path);
void write_labels(std::ostream& out, std::span<const LabelRecord> labels);

// Label for each document, in corpus order. Throws DataError naming the first
// unlabeled document.
std::vector<const LabelRecord*> join_labels(std::span<const Document> corpus,
                                            std::span<const LabelRecord> labels);

// Stratified on the offensive label. Split sizes are round(ratio * N) for dev
// and test, remainder to train; per class the counts are floor/ceil of
// ratio * class size (largest remainder). Classes with fewer than 3 members go
// entirely to train and produce a warning. Ids keep input order within a split.
DatasetSplit stratified_split(std::span<const LabelRecord> labels, SplitRatios ratios,
                              std::uint64_t seed, std::vector<std::string>* warnings = nullptr);

void write_split(std::ostream& out, const DatasetSplit& split);
DatasetSplit parse_split(std::istream& in);

// ISO-8601 "YYYY-MM-DDTHH:MM:SS[.fff][Z|+HH:MM|-HH:MM]" (also accepts a space
// separator and a bare date). Fractional seconds are truncated.
std::int64_t parse_iso8601(std::string_view s);
std::string format_iso8601(std::int64_t epoch_seconds);

// TSV field escaping: backslash, tab, newline, carriage return.
std::string tsv_escape(std::string_view s);
std::string tsv_unescape(std::string_view s);
std::vector<std::string_view> split_tabs(std::string_view line);

}  // namespace anchor
