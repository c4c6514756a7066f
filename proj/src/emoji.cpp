#include "anchor/emoji.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>

#include <omp.h>

#include "anchor/error.hpp"
#include "anchor/random.hpp"
#include "anchor/utf8.hpp"

namespace anchor {
namespace {

struct Range {
  char32_t lo;
  char32_t hi;
};

// Extended_Pictographic (Unicode emoji-data). Skin-tone modifiers are not in
// this property and are handled separately.
constexpr Range kExtendedPictographic[] = {
    {0x00A9, 0x00A9},   {0x00AE, 0x00AE},   {0x203C, 0x203C},   {0x2049, 0x2049},   {0x2122, 0x2122},
    {0x2139, 0x2139},   {0x2194, 0x2199},   {0x21A9, 0x21AA},   {0x231A, 0x231B},   {0x2328, 0x2328},
    {0x2388, 0x2388},   {0x23CF, 0x23CF},   {0x23E9, 0x23F3},   {0x23F8, 0x23FA},   {0x24C2, 0x24C2},
    {0x25AA, 0x25AB},   {0x25B6, 0x25B6},   {0x25C0, 0x25C0},   {0x25FB, 0x25FE},   {0x2600, 0x2605},
    {0x2607, 0x2612},   {0x2614, 0x2685},   {0x2690, 0x2705},   {0x2708, 0x2712},   {0x2714, 0x2714},
    {0x2716, 0x2716},   {0x271D, 0x271D},   {0x2721, 0x2721},   {0x2728, 0x2728},   {0x2733, 0x2734},
    {0x2744, 0x2744},   {0x2747, 0x2747},   {0x274C, 0x274C},   {0x274E, 0x274E},   {0x2753, 0x2755},
    {0x2757, 0x2757},   {0x2763, 0x2767},   {0x2795, 0x2797},   {0x27A1, 0x27A1},   {0x27B0, 0x27B0},
    {0x27BF, 0x27BF},   {0x2934, 0x2935},   {0x2B05, 0x2B07},   {0x2B1B, 0x2B1C},   {0x2B50, 0x2B50},
    {0x2B55, 0x2B55},   {0x3030, 0x3030},   {0x303D, 0x303D},   {0x3297, 0x3297},   {0x3299, 0x3299},
    {0x1F000, 0x1F0FF}, {0x1F10D, 0x1F10F}, {0x1F12F, 0x1F12F}, {0x1F16C, 0x1F171}, {0x1F17E, 0x1F17F},
    {0x1F18E, 0x1F18E}, {0x1F191, 0x1F19A}, {0x1F1AD, 0x1F1E5}, {0x1F201, 0x1F20F}, {0x1F21A, 0x1F21A},
    {0x1F22F, 0x1F22F}, {0x1F232, 0x1F23A}, {0x1F23C, 0x1F23F}, {0x1F249, 0x1F3FA}, {0x1F400, 0x1F53D},
    {0x1F546, 0x1F64F}, {0x1F680, 0x1F6FF}, {0x1F774, 0x1F77F}, {0x1F7D5, 0x1F7FF}, {0x1F80C, 0x1F80F},
    {0x1F848, 0x1F84F}, {0x1F85A, 0x1F85F}, {0x1F888, 0x1F88F}, {0x1F8AE, 0x1F8FF}, {0x1F90C, 0x1F93A},
    {0x1F93C, 0x1F945}, {0x1F947, 0x1FAFF}, {0x1FC00, 0x1FFFD},
};

constexpr char32_t kZwj = 0x200D;
constexpr char32_t kVs15 = 0xFE0E;
constexpr char32_t kVs16 = 0xFE0F;
constexpr char32_t kKeycap = 0x20E3;

constexpr std::array<std::string_view, 6> kCategoryNames = {
    "animal_dehumanization", "anger_disgust_face", "disrespect_symbol", "violence_symbol", "adult", "other"};

bool is_keycap_base(char32_t cp) { return (cp >= '0' && cp <= '9') || cp == '#' || cp == '*'; }

bool is_tag(char32_t cp) { return cp >= 0xE0020 && cp <= 0xE007F; }

bool is_extender(char32_t cp) { return cp == kVs15 || cp == kVs16 || is_skin_tone(cp) || is_tag(cp) || cp == kKeycap; }

}  // namespace

bool is_extended_pictographic(char32_t cp) {
  const auto* end = std::end(kExtendedPictographic);
  const auto* it = std::upper_bound(std::begin(kExtendedPictographic), end, cp,
                                    [](char32_t v, const Range& r) { return v < r.lo; });
  if (it == std::begin(kExtendedPictographic)) return false;
  --it;
  return cp <= it->hi;
}

bool is_regional_indicator(char32_t cp) { return cp >= 0x1F1E6 && cp <= 0x1F1FF; }

bool is_skin_tone(char32_t cp) { return cp >= 0x1F3FB && cp <= 0x1F3FF; }

std::size_t emoji_sequence_length(std::u32string_view t, std::size_t pos) {
  const std::size_t n = t.size();
  if (pos >= n) return 0;
  const char32_t c = t[pos];
  if (is_regional_indicator(c)) {
    return pos + 1 < n && is_regional_indicator(t[pos + 1]) ? 2 : 1;
  }
  if (is_keycap_base(c)) {
    std::size_t k = pos + 1;
    if (k < n && t[k] == kVs16) ++k;
    return k < n && t[k] == kKeycap ? k + 1 - pos : 0;
  }
  if (!is_extended_pictographic(c) && !is_skin_tone(c)) return 0;
  std::size_t k = pos + 1;
  while (k < n && is_extender(t[k])) ++k;
  while (k + 1 < n && t[k] == kZwj && is_extended_pictographic(t[k + 1])) {
    k += 2;
    while (k < n && is_extender(t[k])) ++k;
  }
  return k - pos;
}

std::u32string strip_modifiers(std::u32string_view cps) {
  std::u32string base;
  base.reserve(cps.size());
  for (char32_t cp : cps) {
    if (!is_skin_tone(cp) && cp != kVs15 && cp != kVs16) base.push_back(cp);
  }
  // A lone modifier stays as its own base.
  if (base.empty()) base.assign(cps);
  return base;
}

std::vector<EmojiCluster> extract_emojis(std::string_view text) {
  std::vector<EmojiCluster> clusters;
  const std::u32string cps = utf8::decode(text);
  for (std::size_t pos = 0; pos < cps.size();) {
    const std::size_t len = emoji_sequence_length(cps, pos);
    if (len == 0) {
      ++pos;
      continue;
    }
    EmojiCluster cluster;
    cluster.codepoints = cps.substr(pos, len);
    cluster.display = utf8::encode(cluster.codepoints);
    cluster.base = strip_modifiers(cluster.codepoints);
    clusters.push_back(std::move(cluster));
    pos += len;
  }
  return clusters;
}

std::string hex_key(std::u32string_view cps) {
  std::string out;
  char buf[16];
  for (std::size_t i = 0; i < cps.size(); ++i) {
    std::snprintf(buf, sizeof(buf), i == 0 ? "%X" : " %X", static_cast<unsigned>(cps[i]));
    out += buf;
  }
  return out;
}

std::u32string parse_hex_key(std::string_view key) {
  std::u32string cps;
  std::size_t i = 0;
  while (i < key.size()) {
    if (key[i] == ' ') {
      ++i;
      continue;
    }
    std::size_t j = i;
    char32_t v = 0;
    while (j < key.size() && key[j] != ' ') {
      const char c = key[j];
      int digit = -1;
      if (c >= '0' && c <= '9') digit = c - '0';
      if (c >= 'a' && c <= 'f') digit = c - 'a' + 10;
      if (c >= 'A' && c <= 'F') digit = c - 'A' + 10;
      if (c == 'U' || c == 'u' || c == '+') {
        ++j;
        continue;
      }
      if (digit < 0 || v > 0x10FFFF) throw DataError("bad codepoint list '" + std::string(key) + "'");
      v = v * 16 + static_cast<char32_t>(digit);
      ++j;
    }
    if (v > 0x10FFFF) throw DataError("codepoint out of range in '" + std::string(key) + "'");
    cps.push_back(v);
    i = j;
  }
  return cps;
}

std::string_view to_string(EmojiCategory c) { return kCategoryNames[static_cast<std::size_t>(c)]; }

EmojiCategory parse_emoji_category(std::string_view name) {
  for (std::size_t i = 0; i < kCategoryNames.size(); ++i) {
    if (kCategoryNames[i] == name) return static_cast<EmojiCategory>(i);
  }
  throw DataError("unknown emoji category '" + std::string(name) + "'");
}

void SeedInventory::add(std::u32string_view codepoints, SeedEntry entry) {
  if (codepoints.empty()) throw DataError("empty seed codepoint list");
  std::u32string base = strip_modifiers(codepoints);
  const std::string key = hex_key(base);
  if (!entries_.emplace(std::move(base), std::move(entry)).second) {
    throw DataError("duplicate seed emoji " + key);
  }
}

bool SeedInventory::contains(std::u32string_view base) const { return entries_.find(base) != entries_.end(); }

const SeedEntry* SeedInventory::find(std::u32string_view base) const {
  auto it = entries_.find(base);
  return it == entries_.end() ? nullptr : &it->second;
}

std::string SeedInventory::alias(std::u32string_view base) const {
  if (const SeedEntry* e = find(base); e != nullptr && !e->comment.empty()) {
    const auto word_end = e->comment.find_first_of(" \t");
    return e->comment.substr(0, word_end);
  }
  std::string name = "emoji";
  for (char32_t cp : base) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "_%x", static_cast<unsigned>(cp));
    name += buf;
  }
  return name;
}

SeedInventory SeedInventory::parse(std::istream& in) {
  SeedInventory inv;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto cols = split_tabs(line);
    if (cols.size() < 2) {
      throw DataError("seed inventory line " + std::to_string(line_no) + ": expected codepoints<TAB>category");
    }
    if (cols[0] == "codepoints") continue;  // optional header
    try {
      SeedEntry entry{parse_emoji_category(cols[1]), cols.size() > 2 ? std::string(cols[2]) : std::string()};
      inv.add(parse_hex_key(cols[0]), std::move(entry));
    } catch (const DataError& e) {
      throw DataError("seed inventory line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return inv;
}

SeedInventory SeedInventory::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open seed inventory " + path.string());
  return parse(in);
}

std::vector<std::u32string> distinct_bases(std::string_view text) {
  std::vector<std::u32string> bases;
  for (auto& c : extract_emojis(text)) bases.push_back(std::move(c.base));
  std::sort(bases.begin(), bases.end());
  bases.erase(std::unique(bases.begin(), bases.end()), bases.end());
  return bases;
}

std::vector<Document> filter_by_seeds(std::span<const Document> corpus, const SeedInventory& inventory) {
  if (inventory.empty()) throw UsageError("seed inventory is empty");
  const auto n = static_cast<std::int64_t>(corpus.size());
  std::vector<char> keep(corpus.size(), 0);
#pragma omp parallel for schedule(dynamic, 256)
  for (std::int64_t i = 0; i < n; ++i) {
    for (const auto& cluster : extract_emojis(corpus[i].text)) {
      if (inventory.contains(cluster.base)) {
        keep[i] = 1;
        break;
      }
    }
  }
  std::vector<Document> out;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (keep[i]) out.push_back(corpus[i]);
  }
  return out;
}

std::vector<EmojiStat> emoji_stats(std::span<const Document> corpus, std::span<const LabelRecord> labels) {
  const auto joined = join_labels(corpus, labels);
  using Counts = std::unordered_map<std::u32string, EmojiStat>;
  Counts merged;
  const auto n = static_cast<std::int64_t>(corpus.size());
#pragma omp parallel
  {
    Counts local;
#pragma omp for schedule(dynamic, 256) nowait
    for (std::int64_t i = 0; i < n; ++i) {
      const LabelRecord& rec = *joined[i];
      for (auto& base : distinct_bases(corpus[i].text)) {
        EmojiStat& s = local[base];
        ++s.n_total;
        s.n_offensive += rec.offensive ? 1 : 0;
        s.n_hate += rec.hate() ? 1 : 0;
      }
    }
#pragma omp critical(anchor_emoji_stats_merge)
    for (auto& [base, s] : local) {
      EmojiStat& m = merged[base];
      m.n_total += s.n_total;
      m.n_offensive += s.n_offensive;
      m.n_hate += s.n_hate;
    }
  }
  std::vector<EmojiStat> stats;
  stats.reserve(merged.size());
  for (auto& [base, s] : merged) {
    s.base = base;
    stats.push_back(s);
  }
  // Compare fractions by cross-multiplication so ordering is exact.
  std::sort(stats.begin(), stats.end(), [](const EmojiStat& a, const EmojiStat& b) {
    const auto lhs = static_cast<unsigned __int128>(a.n_offensive) * b.n_total;
    const auto rhs = static_cast<unsigned __int128>(b.n_offensive) * a.n_total;
    if (lhs != rhs) return lhs > rhs;
    if (a.n_total != b.n_total) return a.n_total > b.n_total;
    return a.base < b.base;
  });
  return stats;
}

void write_emoji_stats(std::ostream& out, std::span<const EmojiStat> stats, const SeedInventory* inventory) {
  out << "base\tcategory\tn_total\tn_offensive\toffensive_pct\tn_hate\thate_pct\n";
  char buf[64];
  for (const auto& s : stats) {
    const SeedEntry* entry = inventory ? inventory->find(s.base) : nullptr;
    out << hex_key(s.base) << '\t' << (entry ? to_string(entry->category) : std::string_view("uncategorized"))
        << '\t' << s.n_total << '\t' << s.n_offensive << '\t';
    std::snprintf(buf, sizeof(buf), "%.6f", s.offensive_pct());
    out << buf << '\t' << s.n_hate << '\t';
    std::snprintf(buf, sizeof(buf), "%.6f", s.hate_pct());
    out << buf << '\n';
  }
}

std::map<std::u32string, std::vector<Document>> sample_per_emoji(std::span<const Document> corpus,
                                                                 const SeedInventory& inventory, std::size_t k,
                                                                 std::uint64_t seed) {
  if (k == 0) throw UsageError("sample size k must be >= 1");
  std::vector<std::vector<std::u32string>> doc_bases(corpus.size());
  const auto n = static_cast<std::int64_t>(corpus.size());
#pragma omp parallel for schedule(dynamic, 256)
  for (std::int64_t i = 0; i < n; ++i) doc_bases[i] = distinct_bases(corpus[i].text);

  std::map<std::u32string, std::vector<Document>> out;
  for (const auto& [base, entry] : inventory.entries()) {
    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      if (std::binary_search(doc_bases[i].begin(), doc_bases[i].end(), base)) candidates.push_back(i);
    }
    if (candidates.size() > k) {
      Rng rng(seed ^ Rng::hash(hex_key(base)));
      // Partial Fisher-Yates: the first k slots become a uniform k-subset.
      for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + rng.below(candidates.size() - i);
        std::swap(candidates[i], candidates[j]);
      }
      candidates.resize(k);
      std::sort(candidates.begin(), candidates.end());
    }
    auto& docs = out[base];
    for (std::size_t i : candidates) docs.push_back(corpus[i]);
  }
  return out;
}

}  // namespace anchor
