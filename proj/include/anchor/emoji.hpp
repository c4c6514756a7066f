#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "anchor/corpus.hpp"

namespace anchor {

// A single emoji sequence as it appears in text.
struct EmojiCluster {
  std::u32string codepoints;
  std::string display;
  // Codepoints with skin-tone modifiers (U+1F3FB..1F3FF) and variation
  // selectors (U+FE0E, U+FE0F) removed.
  std::u32string base;

  bool operator==(const EmojiCluster&) const = default;
};

bool is_extended_pictographic(char32_t cp);
bool is_regional_indicator(char32_t cp);
bool is_skin_tone(char32_t cp);

// Length in codepoints of the emoji sequence starting at `pos`, or 0 if none
// starts there. Handles flags, keycaps, modifier, tag and ZWJ sequences.
std::size_t emoji_sequence_length(std::u32string_view text, std::size_t pos);

std::u32string strip_modifiers(std::u32string_view cps);

std::vector<EmojiCluster> extract_emojis(std::string_view text);

// "1F595 1F3FD" style keys, used in inventory and stats files.
std::string hex_key(std::u32string_view cps);
std::u32string parse_hex_key(std::string_view key);

enum class EmojiCategory : std::uint8_t {
  animal_dehumanization,
  anger_disgust_face,
  disrespect_symbol,
  violence_symbol,
  adult,
  other,
};

std::string_view to_string(EmojiCategory c);
EmojiCategory parse_emoji_category(std::string_view name);

struct SeedEntry {
  EmojiCategory category = EmojiCategory::other;
  std::string comment;
};

// Seed emojis keyed by base form.
class SeedInventory {
 public:
  SeedInventory() = default;

  // Keys are reduced to base form; duplicate bases are rejected.
  void add(std::u32string_view codepoints, SeedEntry entry);

  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  bool contains(std::u32string_view base) const;
  const SeedEntry* find(std::u32string_view base) const;
  const std::map<std::u32string, SeedEntry, std::less<>>& entries() const { return entries_; }

  // Short textual name for a base, e.g. "middle_finger": the first word of the
  // comment column when present, else "emoji_<hex>".
  std::string alias(std::u32string_view base) const;

  static SeedInventory parse(std::istream& in);
  static SeedInventory load(const std::filesystem::path& path);

 private:
  std::map<std::u32string, SeedEntry, std::less<>> entries_;
};

// Documents (stable order) containing at least one cluster whose base is an
// inventory key. Throws UsageError on an empty inventory.
std::vector<Document> filter_by_seeds(std::span<const Document> corpus, const SeedInventory& inventory);

// Distinct bases of a text, sorted.
std::vector<std::u32string> distinct_bases(std::string_view text);

struct EmojiStat {
  std::u32string base;
  std::size_t n_total = 0;
  std::size_t n_offensive = 0;
  std::size_t n_hate = 0;

  double offensive_pct() const { return n_total ? static_cast<double>(n_offensive) / n_total : 0.0; }
  double hate_pct() const { return n_total ? static_cast<double>(n_hate) / n_total : 0.0; }
  bool operator==(const EmojiStat&) const = default;
};

// Per-document counts for every base that occurs in the corpus, sorted by
// offensive_pct descending, then n_total descending, then base. Throws
// DataError naming any unlabeled document.
std::vector<EmojiStat> emoji_stats(std::span<const Document> corpus, std::span<const LabelRecord> labels);

void write_emoji_stats(std::ostream& out, std::span<const EmojiStat> stats, const SeedInventory* inventory);

// Up to k distinct documents per inventory base, in corpus order. Selection is
// seeded per base so adding a base does not disturb the others.
std::map<std::u32string, std::vector<Document>> sample_per_emoji(std::span<const Document> corpus,
                                                                 const SeedInventory& inventory, std::size_t k,
                                                                 std::uint64_t seed);

}  // namespace anchor
