#include "anchor/annotation.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <tuple>
#include <unordered_map>

#include "anchor/error.hpp"

namespace anchor {
namespace {

std::string where(std::size_t line_no) { return "line " + std::to_string(line_no) + ": "; }

// Kappa from integer counts; nullopt when p_e = 1.
std::optional<double> kappa_counts(std::span<const std::string> a, std::span<const std::string> b) {
  const auto n = static_cast<std::int64_t>(a.size());
  std::map<std::string_view, std::pair<std::int64_t, std::int64_t>> marginals;
  std::int64_t matches = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++marginals[a[i]].first;
    ++marginals[b[i]].second;
    matches += a[i] == b[i] ? 1 : 0;
  }
  std::int64_t expected = 0;  // p_e * n^2
  for (const auto& [label, m] : marginals) expected += m.first * m.second;
  const std::int64_t n2 = n * n;
  if (expected == n2) return std::nullopt;
  return static_cast<double>(n * matches - expected) / static_cast<double>(n2 - expected);
}

bool is_no_hate(std::string_view label) { return label.empty() || label == "none" || label == "0"; }

bool parse_binary_label(const std::string& label, const std::string& doc_id, std::string_view job) {
  if (label == "1") return true;
  if (label == "0") return false;
  throw DataError("document " + doc_id + ": job " + std::string(job) + " expects 0/1, got '" + label + "'");
}

}  // namespace

std::vector<Judgment> parse_judgments(std::istream& in) {
  std::vector<Judgment> out;
  std::set<std::tuple<std::string, std::string, std::string>> seen;
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cols = split_tabs(line);
    if (!header) {
      if (cols.size() < 4 || cols[0] != "doc_id" || cols[1] != "annotator_id") {
        throw DataError(where(line_no) + "expected header 'doc_id<TAB>annotator_id<TAB>job<TAB>label<TAB>timestamp'");
      }
      header = true;
      continue;
    }
    if (cols.size() != 5 && cols.size() != 4) {
      throw DataError(where(line_no) + "expected 5 columns, got " + std::to_string(cols.size()));
    }
    Judgment j{std::string(cols[0]), std::string(cols[1]), std::string(cols[2]), std::string(cols[3]),
               cols.size() == 5 ? std::string(cols[4]) : std::string()};
    if (j.doc_id.empty() || j.annotator_id.empty() || j.job.empty()) {
      throw DataError(where(line_no) + "doc_id, annotator_id and job must be non-empty");
    }
    if (!seen.emplace(j.doc_id, j.annotator_id, j.job).second) {
      throw DataError(where(line_no) + "second judgment by " + j.annotator_id + " on " + j.doc_id + " for job " +
                      j.job);
    }
    out.push_back(std::move(j));
  }
  return out;
}

std::vector<Judgment> load_judgments(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open judgments file " + path.string());
  return parse_judgments(in);
}

void QCGate::validate() const {
  if (!(pass_threshold > 0.0 && pass_threshold <= 1.0)) throw UsageError("pass threshold must be in (0, 1]");
}

std::map<std::string, std::string> parse_test_answers(std::istream& in) {
  std::map<std::string, std::string> answers;
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cols = split_tabs(line);
    if (!header) {
      header = true;
      if (cols.size() == 2 && cols[0] == "doc_id") continue;
      throw DataError(where(line_no) + "expected header 'doc_id<TAB>label'");
    }
    if (cols.size() != 2) throw DataError(where(line_no) + "expected doc_id<TAB>label");
    if (!answers.emplace(std::string(cols[0]), std::string(cols[1])).second) {
      throw DataError(where(line_no) + "duplicate test document " + std::string(cols[0]));
    }
  }
  return answers;
}

GateResult gate_annotator(std::span<const Judgment> judgments, const QCGate& gate) {
  gate.validate();
  GateResult r;
  for (const auto& j : judgments) {
    auto it = gate.test_answers.find(j.doc_id);
    if (it == gate.test_answers.end()) continue;
    ++r.n_test;
    r.n_correct += j.label == it->second ? 1 : 0;
  }
  if (r.n_test == 0) throw DataError("annotator judged no test documents");
  r.accuracy = static_cast<double>(r.n_correct) / static_cast<double>(r.n_test);
  r.pass = r.accuracy >= gate.pass_threshold;
  return r;
}

std::map<std::string, GateResult> gate_all(std::span<const Judgment> judgments, std::string_view job,
                                           const QCGate& gate) {
  std::map<std::string, std::vector<Judgment>> by_annotator;
  for (const auto& j : judgments) {
    if (j.job == job && gate.test_answers.contains(j.doc_id)) by_annotator[j.annotator_id].push_back(j);
  }
  std::map<std::string, GateResult> out;
  for (const auto& [annotator, js] : by_annotator) out.emplace(annotator, gate_annotator(js, gate));
  return out;
}

std::string_view to_string(Agreement a) {
  switch (a) {
    case Agreement::full: return "full";
    case Agreement::majority: return "majority";
    case Agreement::tie: return "tie";
  }
  return "?";
}

Agreement parse_agreement(std::string_view s) {
  if (s == "full") return Agreement::full;
  if (s == "majority") return Agreement::majority;
  if (s == "tie") return Agreement::tie;
  throw DataError("unknown agreement '" + std::string(s) + "'");
}

Vote majority_vote(std::span<const std::string> labels) {
  if (labels.empty()) throw UsageError("majority vote over no judgments");
  std::map<std::string_view, std::size_t> counts;
  for (const auto& l : labels) ++counts[l];
  std::size_t best = 0;
  std::size_t n_best = 0;
  std::string_view label;
  for (const auto& [l, c] : counts) {  // ascending label order
    if (c > best) {
      best = c;
      n_best = 1;
      label = l;
    } else if (c == best) {
      ++n_best;
    }
  }
  Vote v;
  v.label = std::string(label);
  v.n_judgments = labels.size();
  v.agreement = counts.size() == 1 ? Agreement::full : n_best > 1 ? Agreement::tie : Agreement::majority;
  return v;
}

std::vector<AggregatedDoc> aggregate(std::span<const Judgment> judgments) {
  std::vector<std::pair<std::string, std::string>> order;
  std::map<std::pair<std::string, std::string>, std::vector<std::string>> groups;
  for (const auto& j : judgments) {
    auto key = std::make_pair(j.doc_id, j.job);
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.push_back(j.label);
  }
  std::vector<AggregatedDoc> out;
  out.reserve(order.size());
  for (const auto& key : order) out.push_back({key.first, key.second, majority_vote(groups.at(key))});
  return out;
}

AgreementStats agreement_stats(std::span<const AggregatedDoc> docs, std::string_view job) {
  AgreementStats s;
  std::size_t full = 0;
  std::size_t majority = 0;
  std::size_t tie = 0;
  for (const auto& d : docs) {
    if (d.job != job) continue;
    ++s.n_docs;
    full += d.vote.agreement == Agreement::full;
    majority += d.vote.agreement == Agreement::majority;
    tie += d.vote.agreement == Agreement::tie;
  }
  if (s.n_docs > 0) {
    const auto n = static_cast<double>(s.n_docs);
    s.full = static_cast<double>(full) / n;
    s.majority = static_cast<double>(majority) / n;
    s.tie = static_cast<double>(tie) / n;
  }
  return s;
}

double cohen_kappa(std::span<const std::string> a, std::span<const std::string> b) {
  if (a.size() != b.size()) throw DataError("kappa: label sequences differ in length");
  if (a.size() < 2) throw DataError("kappa: need at least 2 items");
  const auto k = kappa_counts(a, b);
  if (!k) throw DataError("kappa undefined: expected agreement is 1 (both raters constant on the same label)");
  return *k;
}

PairwiseKappa avg_pairwise_kappa(std::span<const Judgment> judgments, std::string_view job,
                                 std::size_t min_shared) {
  std::map<std::string, std::map<std::string, std::string>> by_annotator;
  for (const auto& j : judgments) {
    if (j.job == job) by_annotator[j.annotator_id][j.doc_id] = j.label;
  }
  PairwiseKappa result;
  double sum = 0.0;
  for (auto a = by_annotator.begin(); a != by_annotator.end(); ++a) {
    for (auto b = std::next(a); b != by_annotator.end(); ++b) {
      std::vector<std::string> la;
      std::vector<std::string> lb;
      for (const auto& [doc, label] : a->second) {
        if (auto it = b->second.find(doc); it != b->second.end()) {
          la.push_back(label);
          lb.push_back(it->second);
        }
      }
      if (la.size() < std::max<std::size_t>(min_shared, 2)) continue;
      if (const auto k = kappa_counts(la, lb)) {
        sum += *k;
        ++result.n_pairs;
      } else {
        ++result.n_skipped;
      }
    }
  }
  if (result.n_pairs == 0) {
    throw DataError("no annotator pair shares " + std::to_string(min_shared) + " documents with a defined kappa");
  }
  result.mean = sum / static_cast<double>(result.n_pairs);
  return result;
}

std::vector<QueueItem> adjudication_queue(std::span<const AggregatedDoc> docs) {
  std::vector<QueueItem> queue;
  for (const auto& d : docs) {
    if (d.vote.agreement != Agreement::full) queue.push_back({d.doc_id, d.job, d.vote.label, d.vote.agreement, {}});
  }
  return queue;
}

void write_queue(std::ostream& out, std::span<const QueueItem> queue) {
  out << "doc_id\tjob\tlabel\tagreement\toverride\n";
  for (const auto& q : queue) {
    out << q.doc_id << '\t' << q.job << '\t' << q.label << '\t' << to_string(q.agreement) << '\t'
        << q.override_label << '\n';
  }
}

std::vector<QueueItem> parse_queue(std::istream& in) {
  std::vector<QueueItem> out;
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cols = split_tabs(line);
    if (!header) {
      if (cols.empty() || cols[0] != "doc_id") {
        throw DataError(where(line_no) + "expected header 'doc_id<TAB>job<TAB>label<TAB>agreement<TAB>override'");
      }
      header = true;
      continue;
    }
    if (cols.size() != 4 && cols.size() != 5) throw DataError(where(line_no) + "expected 5 columns");
    QueueItem q{std::string(cols[0]), std::string(cols[1]), std::string(cols[2]), parse_agreement(cols[3]),
                cols.size() == 5 ? std::string(cols[4]) : std::string()};
    out.push_back(std::move(q));
  }
  return out;
}

std::size_t apply_overrides(std::vector<AggregatedDoc>& docs, std::span<const QueueItem> adjudicated) {
  std::map<std::pair<std::string_view, std::string_view>, std::string_view> overrides;
  for (const auto& q : adjudicated) {
    if (!q.override_label.empty()) overrides[{q.doc_id, q.job}] = q.override_label;
  }
  std::size_t changed = 0;
  for (auto& d : docs) {
    auto it = overrides.find({d.doc_id, d.job});
    if (it == overrides.end()) continue;
    if (d.vote.label != it->second) {
      d.vote.label = std::string(it->second);
      ++changed;
    }
  }
  return changed;
}

std::vector<LabelRecord> build_label_records(std::span<const AggregatedDoc> docs) {
  std::vector<LabelRecord> records;
  std::unordered_map<std::string, std::size_t> index;
  for (const auto& d : docs) {
    if (d.job != kJobOffensive) continue;
    if (index.contains(d.doc_id)) continue;
    index.emplace(d.doc_id, records.size());
    LabelRecord rec;
    rec.doc_id = d.doc_id;
    rec.offensive = parse_binary_label(d.vote.label, d.doc_id, d.job);
    records.push_back(std::move(rec));
  }
  for (const auto& d : docs) {
    if (d.job == kJobOffensive) continue;
    auto it = index.find(d.doc_id);
    if (it == index.end()) {
      throw DataError("document " + d.doc_id + " has a " + d.job + " judgment but no offensive decision");
    }
    LabelRecord& rec = records[it->second];
    if (d.job == kJobHate) {
      if (!is_no_hate(d.vote.label)) rec.hate_targets.insert(parse_hate_target(d.vote.label));
    } else if (d.job == kJobVulgar) {
      rec.vulgar = parse_binary_label(d.vote.label, d.doc_id, d.job);
    } else if (d.job == kJobViolence) {
      rec.violence = parse_binary_label(d.vote.label, d.doc_id, d.job);
    } else {
      throw DataError("unknown job '" + d.job + "'");
    }
  }
  for (auto& rec : records) {
    if (!rec.offensive) {
      rec.hate_targets.clear();
      rec.vulgar = false;
      rec.violence = false;
    }
  }
  return records;
}

}  // namespace anchor
