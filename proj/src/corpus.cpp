#include "anchor/corpus.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <unordered_set>

#include <json.hpp>

#include "anchor/error.hpp"
#include "anchor/random.hpp"
#include "anchor/utf8.hpp"

namespace anchor {
namespace {

constexpr std::array<std::string_view, 6> kHateTargetNames = {
    "gender", "race", "ideology", "social_class", "religion", "disability"};

std::string line_prefix(std::size_t line_no) { return "line " + std::to_string(line_no) + ": "; }

void check_text(const std::string& text, std::size_t line_no) {
  if (text.find('\0') != std::string::npos) {
    throw DataError(line_prefix(line_no) + "text contains NUL");
  }
  if (!utf8::is_valid(text)) {
    throw DataError(line_prefix(line_no) + "text is not valid UTF-8");
  }
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

bool blank(std::string_view line) {
  return line.find_first_not_of(" \t\r") == std::string_view::npos;
}

Document parse_jsonl_line(const std::string& line, std::size_t line_no) {
  nlohmann::json obj;
  try {
    obj = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(line_prefix(line_no) + "invalid JSON (" + e.what() + ")");
  }
  if (!obj.is_object()) throw DataError(line_prefix(line_no) + "expected a JSON object");
  auto field = [&](const char* key, bool required) -> std::string {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) {
      if (required) throw DataError(line_prefix(line_no) + "missing field " + key);
      return {};
    }
    if (!it->is_string()) {
      throw DataError(line_prefix(line_no) + "field " + key + " must be a string");
    }
    return it->get<std::string>();
  };
  Document doc;
  doc.id = field("id", true);
  doc.text = field("text", true);
  const std::string created = field("created_at", true);
  doc.lang = field("lang", false);
  try {
    doc.created_at = parse_iso8601(created);
  } catch (const DataError& e) {
    throw DataError(line_prefix(line_no) + e.what());
  }
  return doc;
}

bool parse_bit(std::string_view s, std::size_t line_no, std::string_view column) {
  if (s == "1") return true;
  if (s == "0") return false;
  throw DataError(line_prefix(line_no) + "column " + std::string(column) + " must be 0 or 1, got '" +
                  std::string(s) + "'");
}

int parse_fixed(std::string_view s, std::size_t pos, std::size_t len) {
  if (pos + len > s.size()) throw DataError("truncated timestamp '" + std::string(s) + "'");
  int v = 0;
  for (std::size_t i = pos; i < pos + len; ++i) {
    if (s[i] < '0' || s[i] > '9') throw DataError("bad timestamp '" + std::string(s) + "'");
    v = v * 10 + (s[i] - '0');
  }
  return v;
}

}  // namespace

std::string_view to_string(HateTarget t) { return kHateTargetNames[static_cast<std::size_t>(t)]; }

HateTarget parse_hate_target(std::string_view token) {
  for (std::size_t i = 0; i < kHateTargetNames.size(); ++i) {
    if (kHateTargetNames[i] == token) return static_cast<HateTarget>(i);
  }
  throw DataError("unknown hate target '" + std::string(token) + "'");
}

CorpusFormat parse_corpus_format(std::string_view name) {
  if (name == "jsonl") return CorpusFormat::jsonl;
  if (name == "tsv") return CorpusFormat::tsv;
  throw UsageError("unknown corpus format '" + std::string(name) + "' (expected jsonl or tsv)");
}

CorpusFormat guess_corpus_format(const std::filesystem::path& path) {
  return path.extension() == ".tsv" ? CorpusFormat::tsv : CorpusFormat::jsonl;
}

std::vector<Document> parse_corpus(std::istream& in, CorpusFormat format) {
  std::vector<Document> docs;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  bool has_lang = false;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (blank(line)) continue;
    Document doc;
    if (format == CorpusFormat::jsonl) {
      doc = parse_jsonl_line(line, line_no);
    } else {
      const auto cols = split_tabs(line);
      if (!header_seen) {
        if (cols.size() < 3 || cols[0] != "id" || cols[1] != "text" || cols[2] != "created_at") {
          throw DataError(line_prefix(line_no) + "expected header 'id<TAB>text<TAB>created_at[<TAB>lang]'");
        }
        has_lang = cols.size() > 3 && cols[3] == "lang";
        header_seen = true;
        continue;
      }
      const std::size_t expected = has_lang ? 4 : 3;
      if (cols.size() != expected) {
        throw DataError(line_prefix(line_no) + "expected " + std::to_string(expected) + " columns, got " +
                        std::to_string(cols.size()));
      }
      doc.id = tsv_unescape(cols[0]);
      doc.text = tsv_unescape(cols[1]);
      try {
        doc.created_at = parse_iso8601(cols[2]);
      } catch (const DataError& e) {
        throw DataError(line_prefix(line_no) + e.what());
      }
      if (has_lang) doc.lang = tsv_unescape(cols[3]);
    }
    if (doc.id.empty()) throw DataError(line_prefix(line_no) + "empty id");
    check_text(doc.text, line_no);
    if (!seen.insert(doc.id).second) {
      throw DataError(line_prefix(line_no) + "duplicate id " + doc.id);
    }
    docs.push_back(std::move(doc));
  }
  return docs;
}

std::vector<Document> load_corpus(const std::filesystem::path& path, CorpusFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open corpus file " + path.string());
  return parse_corpus(in, format);
}

void write_corpus_jsonl(std::ostream& out, std::span<const Document> docs) {
  for (const auto& d : docs) {
    nlohmann::ordered_json obj;
    obj["id"] = d.id;
    obj["text"] = d.text;
    obj["created_at"] = format_iso8601(d.created_at);
    if (!d.lang.empty()) obj["lang"] = d.lang;
    out << obj.dump() << '\n';
  }
}

std::vector<LabelRecord> parse_labels(std::istream& in) {
  std::vector<LabelRecord> labels;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (blank(line)) continue;
    const auto cols = split_tabs(line);
    if (!header_seen) {
      if (cols.size() != 5 || cols[0] != "doc_id" || cols[1] != "offensive") {
        throw DataError(line_prefix(line_no) +
                        "expected header 'doc_id<TAB>offensive<TAB>hate_targets<TAB>vulgar<TAB>violence'");
      }
      header_seen = true;
      continue;
    }
    if (cols.size() != 5) {
      throw DataError(line_prefix(line_no) + "expected 5 columns, got " + std::to_string(cols.size()));
    }
    LabelRecord rec;
    rec.doc_id = tsv_unescape(cols[0]);
    if (rec.doc_id.empty()) throw DataError(line_prefix(line_no) + "empty doc_id");
    rec.offensive = parse_bit(cols[1], line_no, "offensive");
    std::string_view targets = cols[2];
    while (!targets.empty()) {
      const auto comma = targets.find(',');
      const auto token = targets.substr(0, comma);
      if (!token.empty()) {
        try {
          rec.hate_targets.insert(parse_hate_target(token));
        } catch (const DataError& e) {
          throw DataError(line_prefix(line_no) + e.what());
        }
      }
      if (comma == std::string_view::npos) break;
      targets.remove_prefix(comma + 1);
    }
    rec.vulgar = parse_bit(cols[3], line_no, "vulgar");
    rec.violence = parse_bit(cols[4], line_no, "violence");
    if (!rec.monotone()) {
      throw DataError(line_prefix(line_no) + "document " + rec.doc_id +
                      " has hate/vulgar/violence labels but is not offensive");
    }
    if (!seen.insert(rec.doc_id).second) {
      throw DataError(line_prefix(line_no) + "duplicate doc_id " + rec.doc_id);
    }
    labels.push_back(std::move(rec));
  }
  return labels;
}

std::vector<LabelRecord> load_labels(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open labels file " + path.string());
  return parse_labels(in);
}

void write_labels(std::ostream& out, std::span<const LabelRecord> labels) {
  out << "doc_id\toffensive\thate_targets\tvulgar\tviolence\n";
  for (const auto& rec : labels) {
    out << tsv_escape(rec.doc_id) << '\t' << (rec.offensive ? 1 : 0) << '\t';
    bool first = true;
    for (HateTarget t : rec.hate_targets) {
      if (!first) out << ',';
      out << to_string(t);
      first = false;
    }
    out << '\t' << (rec.vulgar ? 1 : 0) << '\t' << (rec.violence ? 1 : 0) << '\n';
  }
}

std::vector<const LabelRecord*> join_labels(std::span<const Document> corpus,
                                            std::span<const LabelRecord> labels) {
  std::unordered_map<std::string_view, const LabelRecord*> by_id;
  by_id.reserve(labels.size());
  for (const auto& rec : labels) by_id.emplace(rec.doc_id, &rec);
  std::vector<const LabelRecord*> joined;
  joined.reserve(corpus.size());
  for (const auto& doc : corpus) {
    auto it = by_id.find(doc.id);
    if (it == by_id.end()) throw DataError("unlabeled document " + doc.id);
    joined.push_back(it->second);
  }
  return joined;
}

DatasetSplit stratified_split(std::span<const LabelRecord> labels, SplitRatios ratios,
                              std::uint64_t seed, std::vector<std::string>* warnings) {
  if (labels.empty()) throw DataError("cannot split an empty corpus");
  if (ratios.train < 0 || ratios.dev < 0 || ratios.test < 0 ||
      std::abs(ratios.train + ratios.dev + ratios.test - 1.0) > 1e-9) {
    throw UsageError("split ratios must be non-negative and sum to 1");
  }

  // Class 0 = not offensive, class 1 = offensive.
  std::array<std::vector<std::size_t>, 2> members;
  for (std::size_t i = 0; i < labels.size(); ++i) members[labels[i].offensive ? 1 : 0].push_back(i);

  std::array<bool, 2> eligible{};
  std::size_t n_eligible = 0;
  for (int c = 0; c < 2; ++c) {
    const std::size_t n = members[c].size();
    eligible[c] = n >= 3;
    if (eligible[c]) {
      n_eligible += n;
    } else if (n > 0 && warnings != nullptr) {
      warnings->push_back("class " + std::string(c == 1 ? "offensive" : "not_offensive") + " has only " +
                          std::to_string(n) + " member(s); all assigned to train");
    }
  }

  // Split sizes over the eligible items, then a largest-remainder allocation
  // of the positives across all three splits so each split, train included,
  // is within one item of the corpus proportion.
  const auto n_dev_total = static_cast<std::size_t>(std::llround(ratios.dev * static_cast<double>(n_eligible)));
  const auto n_test_total = std::min(n_eligible - std::min(n_dev_total, n_eligible),
                                     static_cast<std::size_t>(std::llround(ratios.test * static_cast<double>(n_eligible))));
  const std::array<std::size_t, 3> sizes{n_eligible - n_dev_total - n_test_total, n_dev_total, n_test_total};

  std::array<std::array<std::size_t, 3>, 2> alloc{};  // [class][split]
  if (eligible[0] && eligible[1]) {
    const std::size_t n_pos = members[1].size();
    std::array<double, 3> frac{};
    std::size_t assigned = 0;
    for (int s = 0; s < 3; ++s) {
      const double ideal = static_cast<double>(sizes[s]) * static_cast<double>(n_pos) / static_cast<double>(n_eligible);
      alloc[1][s] = static_cast<std::size_t>(std::floor(ideal));
      frac[s] = ideal - std::floor(ideal);
      assigned += alloc[1][s];
    }
    std::array<int, 3> order{0, 1, 2};
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return frac[a] > frac[b]; });
    for (int s : order) {
      if (assigned >= n_pos) break;
      if (alloc[1][s] < sizes[s]) {
        ++alloc[1][s];
        ++assigned;
      }
    }
    for (int s = 0; s < 3; ++s) alloc[0][s] = sizes[s] - alloc[1][s];
  } else {
    for (int c = 0; c < 2; ++c) {
      if (eligible[c]) alloc[c] = sizes;
    }
  }
  const std::array<std::size_t, 2> dev_alloc{alloc[0][1], alloc[1][1]};
  const std::array<std::size_t, 2> test_alloc{alloc[0][2], alloc[1][2]};

  // 0 = train, 1 = dev, 2 = test
  std::vector<int> assignment(labels.size(), 0);
  Rng rng(seed);
  for (int c = 0; c < 2; ++c) {
    if (!eligible[c]) continue;
    std::vector<std::size_t> order = members[c];
    rng.shuffle(std::span<std::size_t>(order));
    const std::size_t n_dev = std::min(dev_alloc[c], order.size());
    const std::size_t n_test = std::min(test_alloc[c], order.size() - n_dev);
    for (std::size_t k = 0; k < n_dev; ++k) assignment[order[k]] = 1;
    for (std::size_t k = n_dev; k < n_dev + n_test; ++k) assignment[order[k]] = 2;
  }

  DatasetSplit split;
  split.seed = seed;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto& bucket = assignment[i] == 0 ? split.train : assignment[i] == 1 ? split.dev : split.test;
    bucket.push_back(labels[i].doc_id);
  }
  return split;
}

void write_split(std::ostream& out, const DatasetSplit& split) {
  auto section = [&](std::string_view name, const std::vector<std::string>& ids) {
    out << name << ":\n";
    for (const auto& id : ids) out << id << '\n';
  };
  section("train", split.train);
  section("dev", split.dev);
  section("test", split.test);
}

DatasetSplit parse_split(std::istream& in) {
  DatasetSplit split;
  std::vector<std::string>* current = nullptr;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    if (line == "train:") {
      current = &split.train;
    } else if (line == "dev:") {
      current = &split.dev;
    } else if (line == "test:") {
      current = &split.test;
    } else if (current == nullptr) {
      throw DataError(line_prefix(line_no) + "doc id before any 'train:'/'dev:'/'test:' header");
    } else {
      current->push_back(line);
    }
  }
  return split;
}

std::int64_t parse_iso8601(std::string_view s) {
  using namespace std::chrono;
  const int y = parse_fixed(s, 0, 4);
  if (s.size() < 10 || s[4] != '-' || s[7] != '-') throw DataError("bad timestamp '" + std::string(s) + "'");
  const int mo = parse_fixed(s, 5, 2);
  const int d = parse_fixed(s, 8, 2);
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) throw DataError("bad date in timestamp '" + std::string(s) + "'");
  std::int64_t secs = sys_days{ymd}.time_since_epoch().count() * std::int64_t{86400};
  if (s.size() == 10) return secs;
  if (s[10] != 'T' && s[10] != ' ') throw DataError("bad timestamp '" + std::string(s) + "'");
  if (s.size() < 19 || s[13] != ':' || s[16] != ':') throw DataError("bad time in '" + std::string(s) + "'");
  const int hh = parse_fixed(s, 11, 2);
  const int mm = parse_fixed(s, 14, 2);
  const int ss = parse_fixed(s, 17, 2);
  if (hh > 23 || mm > 59 || ss > 60) throw DataError("bad time in '" + std::string(s) + "'");
  secs += hh * 3600 + mm * 60 + ss;
  std::size_t pos = 19;
  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
  }
  if (pos == s.size()) return secs;
  if (s[pos] == 'Z' && pos + 1 == s.size()) return secs;
  if ((s[pos] == '+' || s[pos] == '-') && pos + 6 == s.size() && s[pos + 3] == ':') {
    const int oh = parse_fixed(s, pos + 1, 2);
    const int om = parse_fixed(s, pos + 4, 2);
    const std::int64_t offset = oh * 3600 + om * 60;
    return s[pos] == '+' ? secs - offset : secs + offset;
  }
  throw DataError("bad timezone in '" + std::string(s) + "'");
}

std::string format_iso8601(std::int64_t epoch_seconds) {
  using namespace std::chrono;
  const sys_seconds tp{seconds{epoch_seconds}};
  const auto day_point = floor<days>(tp);
  const year_month_day ymd{day_point};
  const hh_mm_ss hms{tp - day_point};
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

std::string tsv_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string tsv_unescape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '\\' || i + 1 == s.size()) {
      out.push_back(s[i]);
      continue;
    }
    switch (s[++i]) {
      case 't': out.push_back('\t'); break;
      case 'n': out.push_back('\n'); break;
      case 'r': out.push_back('\r'); break;
      case '\\': out.push_back('\\'); break;
      default:
        out.push_back('\\');
        out.push_back(s[i]);
    }
  }
  return out;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> cols;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      cols.push_back(line.substr(start));
      break;
    }
    cols.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return cols;
}

}  // namespace anchor
