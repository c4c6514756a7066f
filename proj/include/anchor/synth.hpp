#pragma once

#include <cstdint>
#include <vector>

#include "anchor/corpus.hpp"
#include "anchor/emoji.hpp"

namespace anchor {

// Generator for labeled test corpora. Offensive and clean documents draw from
// disjoint vocabularies, so the offensive label is linearly separable.
struct SynthOptions {
  std::size_t n_docs = 10000;
  double offensive_rate = 0.02;         // over the whole corpus
  double seed_emoji_rate = 0.02;        // documents carrying a seed emoji
  double offensive_given_seed = 0.6;    // P(offensive | seed emoji)
  double hate_given_offensive = 0.3;
  double vulgar_given_offensive = 0.15;
  double violence_given_offensive = 0.1;
  double duplicate_rate = 0.02;  // exact copies of an earlier text under a new id
  double short_rate = 0.01;      // one- or two-word documents
  std::uint64_t seed = 0;

  // Throws UsageError when the rates cannot be met together.
  void validate() const;
};

struct SynthCorpus {
  std::vector<Document> docs;
  std::vector<LabelRecord> labels;
};

// Seed emojis are drawn from the inventory, which must not be empty.
SynthCorpus generate_synthetic(const SynthOptions& options, const SeedInventory& inventory);

}  // namespace anchor
