#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "anchor/corpus.hpp"
#include "anchor/normalize.hpp"

namespace anchor {

struct TermCount {
  std::uint64_t off = 0;  // occurrences in the positive (offensive) partition
  std::uint64_t cln = 0;  // occurrences in the negative (clean) partition

  bool operator==(const TermCount&) const = default;
};

// Token-occurrence counts per partition. total_off / total_cln are the
// occurrences of all terms, so they equal the column sums.
struct TermCounts {
  std::unordered_map<std::string, TermCount> terms;
  std::uint64_t total_off = 0;
  std::uint64_t total_cln = 0;

  void add(const std::string& term, bool positive, std::uint64_t n = 1);
  void merge(const TermCounts& other);
  bool operator==(const TermCounts&) const = default;
};

// 2 * r_off / (r_off + r_cln) - 1 with r_off = off / total_off and
// r_cln = cln / total_cln, evaluated as the equivalent exact-integer ratio
// (off*total_cln - cln*total_off) / (off*total_cln + cln*total_off).
// Throws DataError if a partition total is zero or the term is unseen.
double valence(const TermCount& c, std::uint64_t total_off, std::uint64_t total_cln);
double valence(const std::string& term, const TermCounts& counts);

// Counts normalized tokens of every document; positive[i] selects the
// partition of corpus[i].
TermCounts count_terms(std::span<const Document> corpus, std::span<const char> positive,
                       const NormalizationConfig& cfg);

struct LexiconEntry {
  std::string term;
  double valence = 0.0;
  std::uint64_t n_off = 0;
  std::uint64_t n_cln = 0;

  std::uint64_t freq() const { return n_off + n_cln; }
  bool operator==(const LexiconEntry&) const = default;
};

struct LexiconThresholds {
  double min_valence = 0.8;
  std::uint64_t min_freq = 5;
};

// Entries passing both thresholds, by valence desc, freq desc, then term.
std::vector<LexiconEntry> rank_lexicon(const TermCounts& counts, LexiconThresholds thresholds);

std::vector<LexiconEntry> mine_lexicon(std::span<const Document> corpus, std::span<const LabelRecord> labels,
                                       const NormalizationConfig& cfg, LexiconThresholds thresholds = {});

enum class LabelClass { offensive, hate, vulgar, violence };
LabelClass parse_label_class(std::string_view name);
std::string_view to_string(LabelClass c);
bool has_class(const LabelRecord& rec, LabelClass c);

// Positive partition = documents of the class, negative = every other document.
std::vector<LexiconEntry> mine_class_lexicon(std::span<const Document> corpus, std::span<const LabelRecord> labels,
                                             LabelClass positive_class, const NormalizationConfig& cfg,
                                             LexiconThresholds thresholds = {});

void write_lexicon(std::ostream& out, std::span<const LexiconEntry> entries);

// Group name -> normalized terms.
struct Gazetteer {
  std::map<std::string, std::set<std::string>> groups;
};

// "group<TAB>term1,term2,..." per line; terms are normalized with cfg.
Gazetteer parse_gazetteer(std::istream& in, const NormalizationConfig& cfg);
Gazetteer load_gazetteer(const std::filesystem::path& path, const NormalizationConfig& cfg);

struct GroupShare {
  std::string group;
  std::size_t count = 0;
  double fraction = 0.0;  // of all hate documents

  bool operator==(const GroupShare&) const = default;
};

// A hate document counts toward every group with a term among its normalized
// tokens. Groups in gazetteer order.
std::vector<GroupShare> target_distribution(std::span<const Document> corpus, std::span<const LabelRecord> labels,
                                            const Gazetteer& gazetteer, const NormalizationConfig& cfg);

}  // namespace anchor
