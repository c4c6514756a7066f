#include "anchor/metrics.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>

#include "anchor/corpus.hpp"
#include "anchor/error.hpp"
#include "anchor/lexicon.hpp"

namespace anchor {
namespace {

double ratio(std::int64_t num, std::int64_t den) { return den == 0 ? 0.0 : static_cast<double>(num) / den; }

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

EvalReport evaluate(std::span<const int> gold, std::span<const int> predicted) {
  if (gold.size() != predicted.size()) {
    throw UsageError("gold has " + std::to_string(gold.size()) + " labels but predictions have " +
                     std::to_string(predicted.size()));
  }
  if (gold.empty()) throw UsageError("cannot evaluate an empty label list");
  EvalReport r;
  r.n = static_cast<std::int64_t>(gold.size());
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if ((gold[i] != 0 && gold[i] != 1) || (predicted[i] != 0 && predicted[i] != 1)) {
      throw UsageError("labels must be 0 or 1");
    }
    ++r.confusion[gold[i]][predicted[i]];
  }
  for (int c = 0; c < 2; ++c) {
    const std::int64_t tp = r.confusion[c][c];
    const std::int64_t pred_c = r.confusion[0][c] + r.confusion[1][c];
    const std::int64_t gold_c = r.confusion[c][0] + r.confusion[c][1];
    auto& m = r.per_class[c];
    m.support = gold_c;
    m.precision = ratio(tp, pred_c);
    m.recall = ratio(tp, gold_c);
    m.f1 = m.precision + m.recall == 0.0 ? 0.0 : 2.0 * m.precision * m.recall / (m.precision + m.recall);
  }
  r.accuracy = ratio(r.confusion[0][0] + r.confusion[1][1], r.n);
  r.macro_precision = (r.per_class[0].precision + r.per_class[1].precision) / 2.0;
  r.macro_recall = (r.per_class[0].recall + r.per_class[1].recall) / 2.0;
  r.macro_f1 = (r.per_class[0].f1 + r.per_class[1].f1) / 2.0;
  return r;
}

std::vector<PredictionRow> parse_predictions(std::istream& in) {
  std::vector<PredictionRow> rows;
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto f = split_tabs(line);
    if (!header) {
      if (f.size() < 3 || f[0] != "doc_id" || f[1] != "label" || f[2] != "score") {
        throw DataError("predictions line 1: expected header doc_id<TAB>label<TAB>score");
      }
      header = true;
      continue;
    }
    if (f.size() != 3) throw DataError("predictions line " + std::to_string(lineno) + ": expected 3 columns");
    PredictionRow row;
    row.doc_id = tsv_unescape(f[0]);
    if (f[1] == "1") {
      row.label = 1;
    } else if (f[1] == "0") {
      row.label = 0;
    } else {
      throw DataError("predictions line " + std::to_string(lineno) + ": label must be 0 or 1");
    }
    try {
      std::size_t used = 0;
      row.score = std::stod(std::string(f[2]), &used);
      if (used != f[2].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw DataError("predictions line " + std::to_string(lineno) + ": bad score '" + std::string(f[2]) + "'");
    }
    rows.push_back(std::move(row));
  }
  if (!header) throw DataError("predictions file is empty");
  return rows;
}

std::vector<PredictionRow> load_predictions(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open predictions file " + path);
  return parse_predictions(in);
}

void write_predictions(std::ostream& out, std::span<const PredictionRow> rows) {
  out << "doc_id\tlabel\tscore\n";
  char buf[40];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g", r.score);
    out << tsv_escape(r.doc_id) << '\t' << r.label << '\t' << buf << '\n';
  }
}

EvalReport evaluate_predictions(const std::string& labels_path, const std::string& predictions_path,
                                const std::string& task) {
  const LabelClass cls = parse_label_class(task);
  const auto labels = load_labels(labels_path);
  const auto preds = load_predictions(predictions_path);
  std::unordered_map<std::string, const LabelRecord*> by_id;
  for (const auto& l : labels) by_id.emplace(l.doc_id, &l);
  if (preds.size() != labels.size()) {
    throw DataError("labels file has " + std::to_string(labels.size()) + " records but predictions have " +
                    std::to_string(preds.size()));
  }
  std::vector<int> gold;
  std::vector<int> pred;
  gold.reserve(preds.size());
  pred.reserve(preds.size());
  std::unordered_map<std::string, bool> seen;
  for (const auto& p : preds) {
    auto it = by_id.find(p.doc_id);
    if (it == by_id.end()) throw DataError("prediction for unknown doc_id " + p.doc_id);
    if (!seen.emplace(p.doc_id, true).second) throw DataError("duplicate prediction for doc_id " + p.doc_id);
    gold.push_back(has_class(*it->second, cls) ? 1 : 0);
    pred.push_back(p.label);
  }
  return evaluate(gold, pred);
}

void write_report(std::ostream& out, const EvalReport& r) {
  out << "n\t" << r.n << '\n';
  out << "accuracy\t" << fmt(r.accuracy) << '\n';
  out << "macro_precision\t" << fmt(r.macro_precision) << '\n';
  out << "macro_recall\t" << fmt(r.macro_recall) << '\n';
  out << "macro_f1\t" << fmt(r.macro_f1) << '\n';
  for (int c = 0; c < 2; ++c) {
    const auto& m = r.per_class[c];
    out << "class_" << c << "\tprecision=" << fmt(m.precision) << "\trecall=" << fmt(m.recall)
        << "\tf1=" << fmt(m.f1) << "\tsupport=" << m.support << '\n';
  }
  out << "confusion\tgold0_pred0=" << r.confusion[0][0] << "\tgold0_pred1=" << r.confusion[0][1]
      << "\tgold1_pred0=" << r.confusion[1][0] << "\tgold1_pred1=" << r.confusion[1][1] << '\n';
}

}  // namespace anchor
