#include "anchor/lexicon.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

#include <omp.h>

#include "anchor/error.hpp"

namespace anchor {

void TermCounts::add(const std::string& term, bool positive, std::uint64_t n) {
  TermCount& c = terms[term];
  if (positive) {
    c.off += n;
    total_off += n;
  } else {
    c.cln += n;
    total_cln += n;
  }
}

void TermCounts::merge(const TermCounts& other) {
  for (const auto& [term, c] : other.terms) {
    TermCount& mine = terms[term];
    mine.off += c.off;
    mine.cln += c.cln;
  }
  total_off += other.total_off;
  total_cln += other.total_cln;
}

double valence(const TermCount& c, std::uint64_t total_off, std::uint64_t total_cln) {
  if (total_off == 0 || total_cln == 0) throw DataError("valence undefined: a partition has no tokens");
  if (c.off == 0 && c.cln == 0) throw DataError("valence undefined: term unseen in both partitions");
  const auto a = static_cast<unsigned __int128>(c.off) * total_cln;
  const auto b = static_cast<unsigned __int128>(c.cln) * total_off;
  const double num = a >= b ? static_cast<double>(a - b) : -static_cast<double>(b - a);
  return num / static_cast<double>(a + b);
}

double valence(const std::string& term, const TermCounts& counts) {
  auto it = counts.terms.find(term);
  if (it == counts.terms.end()) throw DataError("valence undefined: term '" + term + "' unseen");
  return valence(it->second, counts.total_off, counts.total_cln);
}

TermCounts count_terms(std::span<const Document> corpus, std::span<const char> positive,
                       const NormalizationConfig& cfg) {
  if (positive.size() != corpus.size()) throw UsageError("partition flags do not match corpus size");
  TermCounts merged;
  const auto n = static_cast<std::int64_t>(corpus.size());
#pragma omp parallel
  {
    TermCounts local;
#pragma omp for schedule(dynamic, 128) nowait
    for (std::int64_t i = 0; i < n; ++i) {
      for (const auto& tok : tokenize(normalize(corpus[i].text, cfg))) local.add(tok, positive[i] != 0);
    }
#pragma omp critical(anchor_term_merge)
    merged.merge(local);
  }
  return merged;
}

std::vector<LexiconEntry> rank_lexicon(const TermCounts& counts, LexiconThresholds thresholds) {
  std::vector<LexiconEntry> entries;
  for (const auto& [term, c] : counts.terms) {
    if (c.off + c.cln < thresholds.min_freq) continue;
    const double v = valence(c, counts.total_off, counts.total_cln);
    if (v < thresholds.min_valence) continue;
    entries.push_back({term, v, c.off, c.cln});
  }
  std::sort(entries.begin(), entries.end(), [](const LexiconEntry& a, const LexiconEntry& b) {
    if (a.valence != b.valence) return a.valence > b.valence;
    if (a.freq() != b.freq()) return a.freq() > b.freq();
    return a.term < b.term;
  });
  return entries;
}

LabelClass parse_label_class(std::string_view name) {
  if (name == "offensive") return LabelClass::offensive;
  if (name == "hate") return LabelClass::hate;
  if (name == "vulgar") return LabelClass::vulgar;
  if (name == "violence") return LabelClass::violence;
  throw UsageError("unknown class '" + std::string(name) + "' (expected offensive, hate, vulgar or violence)");
}

std::string_view to_string(LabelClass c) {
  switch (c) {
    case LabelClass::offensive: return "offensive";
    case LabelClass::hate: return "hate";
    case LabelClass::vulgar: return "vulgar";
    case LabelClass::violence: return "violence";
  }
  return "?";
}

bool has_class(const LabelRecord& rec, LabelClass c) {
  switch (c) {
    case LabelClass::offensive: return rec.offensive;
    case LabelClass::hate: return rec.hate();
    case LabelClass::vulgar: return rec.vulgar;
    case LabelClass::violence: return rec.violence;
  }
  return false;
}

std::vector<LexiconEntry> mine_class_lexicon(std::span<const Document> corpus, std::span<const LabelRecord> labels,
                                             LabelClass positive_class, const NormalizationConfig& cfg,
                                             LexiconThresholds thresholds) {
  const auto joined = join_labels(corpus, labels);
  std::vector<char> positive(corpus.size());
  std::size_t n_pos = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    positive[i] = has_class(*joined[i], positive_class) ? 1 : 0;
    n_pos += positive[i];
  }
  if (n_pos == 0) throw DataError("no documents of class " + std::string(to_string(positive_class)));
  if (n_pos == corpus.size()) {
    throw DataError("every document is of class " + std::string(to_string(positive_class)) +
                    "; the contrast partition is empty");
  }
  const TermCounts counts = count_terms(corpus, positive, cfg);
  if (counts.total_off == 0 || counts.total_cln == 0) throw DataError("a partition contains no tokens");
  return rank_lexicon(counts, thresholds);
}

std::vector<LexiconEntry> mine_lexicon(std::span<const Document> corpus, std::span<const LabelRecord> labels,
                                       const NormalizationConfig& cfg, LexiconThresholds thresholds) {
  return mine_class_lexicon(corpus, labels, LabelClass::offensive, cfg, thresholds);
}

void write_lexicon(std::ostream& out, std::span<const LexiconEntry> entries) {
  out << "term\tn_off\tn_cln\tvalence\n";
  char buf[32];
  for (const auto& e : entries) {
    std::snprintf(buf, sizeof(buf), "%.6f", e.valence);
    out << tsv_escape(e.term) << '\t' << e.n_off << '\t' << e.n_cln << '\t' << buf << '\n';
  }
}

Gazetteer parse_gazetteer(std::istream& in, const NormalizationConfig& cfg) {
  Gazetteer gaz;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto cols = split_tabs(line);
    if (cols.size() != 2 || cols[0].empty()) {
      throw DataError("gazetteer line " + std::to_string(line_no) + ": expected group<TAB>term1,term2,...");
    }
    auto& terms = gaz.groups[std::string(cols[0])];
    std::string_view rest = cols[1];
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      for (auto& tok : tokenize(normalize(rest.substr(0, comma), cfg))) terms.insert(std::move(tok));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (terms.empty()) {
      throw DataError("gazetteer line " + std::to_string(line_no) + ": group " + std::string(cols[0]) +
                      " has no terms");
    }
  }
  return gaz;
}

Gazetteer load_gazetteer(const std::filesystem::path& path, const NormalizationConfig& cfg) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open gazetteer " + path.string());
  return parse_gazetteer(in, cfg);
}

std::vector<GroupShare> target_distribution(std::span<const Document> corpus, std::span<const LabelRecord> labels,
                                            const Gazetteer& gazetteer, const NormalizationConfig& cfg) {
  if (gazetteer.groups.empty()) throw UsageError("gazetteer is empty");
  const auto joined = join_labels(corpus, labels);
  std::vector<GroupShare> shares;
  for (const auto& [group, terms] : gazetteer.groups) shares.push_back({group, 0, 0.0});

  std::size_t n_hate = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (!joined[i]->hate()) continue;
    ++n_hate;
    auto tokens = tokenize(normalize(corpus[i].text, cfg));
    std::sort(tokens.begin(), tokens.end());
    std::size_t g = 0;
    for (const auto& [group, terms] : gazetteer.groups) {
      const bool hit = std::any_of(terms.begin(), terms.end(), [&](const std::string& t) {
        return std::binary_search(tokens.begin(), tokens.end(), t);
      });
      if (hit) ++shares[g].count;
      ++g;
    }
  }
  for (auto& s : shares) {
    s.fraction = n_hate ? static_cast<double>(s.count) / static_cast<double>(n_hate) : 0.0;
  }
  return shares;
}

}  // namespace anchor
