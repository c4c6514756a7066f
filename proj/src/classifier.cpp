#include "anchor/classifier.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "anchor/corpus.hpp"
#include "anchor/error.hpp"

namespace anchor {
namespace {

constexpr std::string_view kMagic = "anchor-linear-model v1";

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(std::string_view s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(std::string(s), &used);
    if (used != s.size()) throw std::invalid_argument(what);
    return v;
  } catch (const std::exception&) {
    throw DataError("model file: bad " + what + " '" + std::string(s) + "'");
  }
}

long long parse_int(std::string_view s, const std::string& what) {
  long long v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw DataError("model file: bad " + what + " '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

double Classifier::score(std::string_view text) const { return model.decision(space.vectorize(text)); }

Prediction Classifier::predict(std::string_view text) const { return anchor::predict(model, space.vectorize(text)); }

std::vector<Prediction> Classifier::predict_batch(std::span<const std::string> texts) const {
  std::vector<Prediction> out(texts.size());
  const auto n = static_cast<std::int64_t>(texts.size());
#pragma omp parallel for schedule(dynamic, 32)
  for (std::int64_t i = 0; i < n; ++i) out[i] = predict(texts[i]);
  return out;
}

Classifier train_classifier(std::span<const std::string> texts, std::span<const int> labels,
                            const FeatureConfig& features, const TrainOptions& options) {
  if (texts.size() != labels.size()) throw UsageError("text and label counts differ");
  Classifier c;
  c.space = FeatureSpace::fit(texts, features);
  const auto X = c.space.vectorize_batch(texts);
  std::vector<int> y(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) y[i] = labels[i] != 0 ? 1 : -1;
  c.model = train_linear_svm(X, y, options);
  return c;
}

void write_classifier(std::ostream& out, const Classifier& c) {
  const auto& cfg = c.space.config();
  out << kMagic << '\n';
  out << "mode\t" << to_string(cfg.mode) << '\n';
  out << "char_range\t" << cfg.char_min << '\t' << cfg.char_max << '\n';
  out << "word_range\t" << cfg.word_min << '\t' << cfg.word_max << '\n';
  out << "normalize_text\t" << (cfg.normalize_text ? "true" : "false") << '\n';
  std::istringstream norm(to_config_text(cfg.normalization));
  for (std::string line; std::getline(norm, line);) out << "normalization\t" << tsv_escape(line) << '\n';
  out << "n_docs\t" << c.space.n_docs() << '\n';
  out << "bias\t" << g17(c.model.bias) << '\n';
  out << "C\t" << g17(c.model.C) << '\n';
  out << "seed\t" << c.model.train_seed << '\n';
  out << "objective\t" << g17(c.model.objective_value) << '\n';
  out << "epochs\t" << c.model.epochs << '\n';
  out << "n_terms\t" << c.space.size() << '\n';
  out << "term\tidf\tweight\n";
  const auto& terms = c.space.terms();
  const auto& idf = c.space.idf();
  for (std::size_t col = 0; col < terms.size(); ++col) {
    out << tsv_escape(terms[col]) << '\t' << g17(idf[col]) << '\t' << g17(c.model.weights[col]) << '\n';
  }
}

Classifier read_classifier(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kMagic) throw DataError("not an anchor model file (bad magic line)");
  FeatureConfig cfg;
  std::string norm_text;
  LinearModel model;
  std::size_t n_docs = 0;
  long long n_terms = -1;
  while (std::getline(in, line)) {
    auto f = split_tabs(line);
    if (f.empty()) continue;
    const std::string_view key = f[0];
    auto need = [&](std::size_t k) {
      if (f.size() != k) throw DataError("model file: malformed line '" + std::string(key) + "'");
    };
    if (key == "term") break;
    if (key == "mode") {
      need(2);
      cfg.mode = parse_feature_mode(f[1]);
    } else if (key == "char_range") {
      need(3);
      cfg.char_min = static_cast<int>(parse_int(f[1], "char_min"));
      cfg.char_max = static_cast<int>(parse_int(f[2], "char_max"));
    } else if (key == "word_range") {
      need(3);
      cfg.word_min = static_cast<int>(parse_int(f[1], "word_min"));
      cfg.word_max = static_cast<int>(parse_int(f[2], "word_max"));
    } else if (key == "normalize_text") {
      need(2);
      cfg.normalize_text = f[1] == "true";
    } else if (key == "normalization") {
      need(2);
      norm_text += tsv_unescape(f[1]);
      norm_text += '\n';
    } else if (key == "n_docs") {
      need(2);
      n_docs = static_cast<std::size_t>(parse_int(f[1], "n_docs"));
    } else if (key == "bias") {
      need(2);
      model.bias = parse_double(f[1], "bias");
    } else if (key == "C") {
      need(2);
      model.C = parse_double(f[1], "C");
    } else if (key == "seed") {
      need(2);
      model.train_seed = static_cast<std::uint64_t>(std::stoull(std::string(f[1])));
    } else if (key == "objective") {
      need(2);
      model.objective_value = parse_double(f[1], "objective");
    } else if (key == "epochs") {
      need(2);
      model.epochs = static_cast<int>(parse_int(f[1], "epochs"));
    } else if (key == "n_terms") {
      need(2);
      n_terms = parse_int(f[1], "n_terms");
    } else {
      throw DataError("model file: unknown key '" + std::string(key) + "'");
    }
  }
  std::istringstream norm(norm_text);
  cfg.normalization = parse_normalization_config(norm);
  std::vector<std::string> terms;
  std::vector<double> idf;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto f = split_tabs(line);
    if (f.size() != 3) throw DataError("model file: term rows need 3 columns");
    terms.push_back(tsv_unescape(f[0]));
    idf.push_back(parse_double(f[1], "idf"));
    model.weights.push_back(parse_double(f[2], "weight"));
  }
  if (n_terms < 0 || static_cast<std::size_t>(n_terms) != terms.size()) {
    throw DataError("model file: n_terms does not match the number of term rows (truncated file?)");
  }
  Classifier c;
  c.space = FeatureSpace::from_parts(cfg, std::move(terms), std::move(idf), n_docs);
  c.model = std::move(model);
  c.model.converged = true;
  return c;
}

void save_classifier(const std::filesystem::path& path, const Classifier& c) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write model file " + path.string());
  write_classifier(out, c);
}

Classifier load_classifier(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model file " + path.string());
  return read_classifier(in);
}

}  // namespace anchor
