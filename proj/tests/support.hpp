#pragma once

#include <string>
#include <vector>

#include "anchor/corpus.hpp"
#include "anchor/random.hpp"

namespace anchor::testing {

inline Document doc(std::string id, std::string text) {
  Document d;
  d.id = std::move(id);
  d.text = std::move(text);
  return d;
}

inline LabelRecord label(std::string id, bool offensive, bool hate = false) {
  LabelRecord r;
  r.doc_id = std::move(id);
  r.offensive = offensive || hate;
  if (hate) r.hate_targets.insert(HateTarget::religion);
  return r;
}

// Small random corpus over a tiny vocabulary so terms repeat. Both label
// classes are always present when n_docs >= 2.
struct RandomCorpus {
  std::vector<Document> docs;
  std::vector<LabelRecord> labels;
};

inline RandomCorpus random_corpus(Rng& rng, std::size_t n_docs, std::size_t max_tokens) {
  static const std::vector<std::string> vocab = {"كلب",  "خنزير", "يا",   "والله", "حلو",  "اليوم", "أمة",  "أنت",
                                                 "ابن",  "قهوة",  "جميل", "غبي",   "مبروك", "سلام", "🐷",   "😡",
                                                 "ok",   "go",    "Hi",   "hi",    "إلى",  "ى",     "خلللاص", "@x"};
  RandomCorpus c;
  for (std::size_t i = 0; i < n_docs; ++i) {
    const std::size_t len = 1 + rng.below(max_tokens);
    std::string text;
    for (std::size_t k = 0; k < len; ++k) {
      if (k > 0) text.push_back(rng.bernoulli(0.1) ? ',' : ' ');
      text += vocab[rng.below(vocab.size())];
    }
    const std::string id = "d" + std::to_string(i);
    c.docs.push_back(doc(id, text));
    bool off = i < 2 ? i == 0 : rng.bernoulli(0.4);
    c.labels.push_back(label(id, off, off && rng.bernoulli(0.3)));
  }
  return c;
}

}  // namespace anchor::testing
