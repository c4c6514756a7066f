#include "anchor/normalize.hpp"

#include <algorithm>
#include <cstdint>
#include <istream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <omp.h>

#include "anchor/emoji.hpp"
#include "anchor/error.hpp"
#include "anchor/utf8.hpp"

namespace anchor {
namespace {

constexpr char32_t kAlefHamzaAbove = 0x0623;
constexpr char32_t kAlefHamzaBelow = 0x0625;
constexpr char32_t kAlefMadda = 0x0622;
constexpr char32_t kAlef = 0x0627;
constexpr char32_t kTaaMarbuta = 0x0629;
constexpr char32_t kHaa = 0x0647;
constexpr char32_t kAlefMaqsura = 0x0649;
constexpr char32_t kYaa = 0x064A;

bool is_diacritic(char32_t cp) {
  return (cp >= 0x0610 && cp <= 0x061A) || (cp >= 0x064B && cp <= 0x065F) || cp == 0x0670 ||
         (cp >= 0x06D6 && cp <= 0x06ED) || cp == 0x0640;
}

bool is_ascii_word(char32_t cp) {
  return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z') || (cp >= '0' && cp <= '9') || cp == '_';
}

bool is_space(char32_t cp) {
  return cp == ' ' || (cp >= 0x09 && cp <= 0x0D) || cp == 0x85 || cp == 0xA0 || cp == 0x1680 ||
         (cp >= 0x2000 && cp <= 0x200A) || cp == 0x2028 || cp == 0x2029 || cp == 0x202F || cp == 0x205F ||
         cp == 0x3000;
}

bool is_punct(char32_t cp) {
  if (cp < 0x80) {
    return cp > 0x20 && cp < 0x7F && !is_ascii_word(cp) && cp != '@';
  }
  return (cp >= 0xA1 && cp <= 0xBF && cp != 0xAA && cp != 0xB5 && cp != 0xBA) || cp == 0xD7 || cp == 0xF7 ||
         (cp >= 0x2010 && cp <= 0x2027) || (cp >= 0x2030 && cp <= 0x205E) || cp == 0x060C || cp == 0x061B ||
         cp == 0x061E || cp == 0x061F || (cp >= 0x066A && cp <= 0x066D) || cp == 0x06D4 || cp == 0xFD3E ||
         cp == 0xFD3F || (cp >= 0x3001 && cp <= 0x3003) || (cp >= 0x3008 && cp <= 0x3011) ||
         (cp >= 0xFF01 && cp <= 0xFF0F) || (cp >= 0xFF1A && cp <= 0xFF20) || (cp >= 0xFF3B && cp <= 0xFF40) ||
         (cp >= 0xFF5B && cp <= 0xFF65);
}

// Invisible joiners that carry no token boundary of their own.
bool is_format(char32_t cp) { return cp == 0x200D || cp == 0xFE0E || cp == 0xFE0F; }

char32_t ascii_lower(char32_t cp) { return (cp >= 'A' && cp <= 'Z') ? cp + 32 : cp; }

bool starts_with_ci(std::u32string_view s, std::size_t pos, std::string_view prefix) {
  if (pos + prefix.size() > s.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (ascii_lower(s[pos + i]) != static_cast<char32_t>(prefix[i])) return false;
  }
  return true;
}

std::u32string map_letters(std::u32string_view in, const NormalizationConfig& cfg) {
  std::u32string out;
  out.reserve(in.size());
  for (char32_t cp : in) {
    if (cfg.strip_diacritics && is_diacritic(cp)) continue;
    if (cfg.map_alef && (cp == kAlefHamzaAbove || cp == kAlefHamzaBelow || cp == kAlefMadda)) cp = kAlef;
    if (cfg.map_taa && cp == kTaaMarbuta) cp = kHaa;
    if (cfg.map_yaa && cp == kAlefMaqsura) cp = kYaa;
    out.push_back(cp);
  }
  return out;
}

// Newlines, URLs and mentions. Boundaries are checked against the output so
// the pass is stable when re-applied.
std::u32string replace_markup(std::u32string_view in, const NormalizationConfig& cfg,
                              const std::u32string& mention, const std::u32string& url) {
  std::u32string out;
  out.reserve(in.size());
  auto after_word = [&] { return !out.empty() && is_ascii_word(out.back()); };
  for (std::size_t i = 0; i < in.size();) {
    const char32_t c = in[i];
    if (cfg.newline_to_space) {
      if (c == '\n' || c == '\r') {
        out.push_back(' ');
        ++i;
        continue;
      }
      if (in.substr(i, 4) == U"<LF>") {
        out.push_back(' ');
        i += 4;
        continue;
      }
    }
    if (!after_word() && (starts_with_ci(in, i, "http://") || starts_with_ci(in, i, "https://") ||
                          starts_with_ci(in, i, "www."))) {
      while (i < in.size() && !is_space(in[i])) ++i;
      out += url;
      continue;
    }
    if (c == '@' && i + 1 < in.size() && is_ascii_word(in[i + 1]) && !after_word()) {
      ++i;
      while (i < in.size() && is_ascii_word(in[i])) ++i;
      out += mention;
      continue;
    }
    out.push_back(c);
    ++i;
  }
  return out;
}

std::u32string squash(std::u32string_view in, int keep) {
  std::u32string out;
  out.reserve(in.size());
  int run = 0;
  for (std::size_t i = 0; i < in.size(); ++i) {
    run = (i > 0 && in[i] == in[i - 1]) ? run + 1 : 1;
    if (run <= keep || !is_letter(in[i])) out.push_back(in[i]);
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw UsageError("config key " + key + ": expected a boolean, got '" + v + "'");
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

void NormalizationConfig::validate() const {
  if (squash_repeats_over < 2) throw UsageError("squash_repeats_over must be >= 2");
}

NormalizationConfig parse_normalization_config(std::istream& in, NormalizationConfig cfg) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = trim(line.substr(0, line.find('#')));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw UsageError("config line " + std::to_string(line_no) + ": expected key=value");
    }
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (key == "map_alef") {
      cfg.map_alef = parse_bool(key, value);
    } else if (key == "map_taa") {
      cfg.map_taa = parse_bool(key, value);
    } else if (key == "map_yaa") {
      cfg.map_yaa = parse_bool(key, value);
    } else if (key == "strip_diacritics") {
      cfg.strip_diacritics = parse_bool(key, value);
    } else if (key == "squash_repeats_over") {
      try {
        cfg.squash_repeats_over = std::stoi(value);
      } catch (const std::exception&) {
        throw UsageError("config key squash_repeats_over: expected an integer, got '" + value + "'");
      }
    } else if (key == "replace_mentions_with") {
      cfg.replace_mentions_with = value;
    } else if (key == "replace_urls_with") {
      cfg.replace_urls_with = value;
    } else if (key == "newline_to_space") {
      cfg.newline_to_space = parse_bool(key, value);
    } else {
      throw UsageError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

std::string to_config_text(const NormalizationConfig& cfg) {
  std::ostringstream out;
  auto b = [](bool v) { return v ? "true" : "false"; };
  out << "map_alef=" << b(cfg.map_alef) << '\n'
      << "map_taa=" << b(cfg.map_taa) << '\n'
      << "map_yaa=" << b(cfg.map_yaa) << '\n'
      << "strip_diacritics=" << b(cfg.strip_diacritics) << '\n'
      << "squash_repeats_over=" << cfg.squash_repeats_over << '\n'
      << "replace_mentions_with=" << cfg.replace_mentions_with << '\n'
      << "replace_urls_with=" << cfg.replace_urls_with << '\n'
      << "newline_to_space=" << b(cfg.newline_to_space) << '\n';
  return out.str();
}

bool is_letter(char32_t cp) {
  return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z') ||
         (cp >= 0xC0 && cp <= 0x24F && cp != 0xD7 && cp != 0xF7) || (cp >= 0x0370 && cp <= 0x03FF) ||
         (cp >= 0x0400 && cp <= 0x04FF) || (cp >= 0x0620 && cp <= 0x064A) || (cp >= 0x066E && cp <= 0x066F) ||
         (cp >= 0x0671 && cp <= 0x06D3) || (cp >= 0x06FA && cp <= 0x06FC) || (cp >= 0x0980 && cp <= 0x09FF);
}

std::string normalize(std::string_view text, const NormalizationConfig& cfg) {
  cfg.validate();
  const std::u32string mention = utf8::decode(cfg.replace_mentions_with);
  const std::u32string url = utf8::decode(cfg.replace_urls_with);
  std::u32string s = map_letters(utf8::decode(text), cfg);
  s = replace_markup(s, cfg, mention, url);
  s = squash(s, cfg.squash_repeats_over);
  // Squashing can turn e.g. "htttp://" into a URL; catch those too.
  s = replace_markup(s, cfg, mention, url);
  return utf8::encode(s);
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  const std::u32string cps = utf8::decode(text);
  std::u32string current;
  auto flush = [&] {
    if (!current.empty()) {
      tokens.push_back(utf8::encode(current));
      current.clear();
    }
  };
  for (std::size_t i = 0; i < cps.size();) {
    if (const std::size_t len = emoji_sequence_length(cps, i); len > 0) {
      flush();
      tokens.push_back(utf8::encode(std::u32string_view(cps).substr(i, len)));
      i += len;
      continue;
    }
    const char32_t c = cps[i++];
    if (is_space(c) || is_punct(c)) {
      flush();
    } else if (!is_format(c)) {
      current.push_back(c);
    }
  }
  flush();
  return tokens;
}

std::vector<std::string> word_ngrams(std::span<const std::string> tokens, int n_min, int n_max) {
  if (n_min < 1 || n_min > n_max) throw UsageError("invalid n-gram range");
  std::vector<std::string> grams;
  for (int n = n_min; n <= n_max; ++n) {
    const auto un = static_cast<std::size_t>(n);
    for (std::size_t i = 0; i + un <= tokens.size(); ++i) {
      std::string g = tokens[i];
      for (std::size_t k = 1; k < un; ++k) {
        g.push_back(' ');
        g += tokens[i + k];
      }
      grams.push_back(std::move(g));
    }
  }
  return grams;
}

std::vector<std::string> char_ngrams(std::string_view text, int n_min, int n_max) {
  if (n_min < 1 || n_min > n_max) throw UsageError("invalid n-gram range");
  const std::u32string cps = utf8::decode(text);
  std::vector<std::string> grams;
  for (int n = n_min; n <= n_max; ++n) {
    const auto un = static_cast<std::size_t>(n);
    for (std::size_t i = 0; i + un <= cps.size(); ++i) {
      grams.push_back(utf8::encode(std::u32string_view(cps).substr(i, un)));
    }
  }
  return grams;
}

void NearDupPolicy::validate() const {
  if (shingle_size < 1) throw UsageError("shingle_size must be >= 1");
  if (!(jaccard_threshold > 0.0 && jaccard_threshold <= 1.0)) {
    throw UsageError("jaccard_threshold must be in (0, 1]");
  }
  if (min_tokens < 0) throw UsageError("min_tokens must be >= 0");
  normalization.validate();
}

std::string_view to_string(DropReason r) {
  switch (r) {
    case DropReason::exact: return "exact";
    case DropReason::near: return "near";
    case DropReason::short_text: return "short";
  }
  return "?";
}

std::vector<std::string> content_tokens(std::string_view text, const NearDupPolicy& policy) {
  auto tokens = tokenize(normalize(text, policy.normalization));
  const auto& cfg = policy.normalization;
  std::erase_if(tokens, [&](const std::string& t) {
    return t == cfg.replace_mentions_with || t == cfg.replace_urls_with;
  });
  return tokens;
}

std::vector<std::string> shingles(std::span<const std::string> tokens, int size) {
  if (tokens.empty()) return {};
  const auto n = std::min(static_cast<std::size_t>(size), tokens.size());
  auto grams = word_ngrams(tokens, static_cast<int>(n), static_cast<int>(n));
  std::sort(grams.begin(), grams.end());
  grams.erase(std::unique(grams.begin(), grams.end()), grams.end());
  return grams;
}

double jaccard(std::span<const std::string> a, std::span<const std::string> b) {
  if (a.empty() && b.empty()) return 0.0;
  std::size_t inter = 0;
  for (std::size_t i = 0, j = 0; i < a.size() && j < b.size();) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      ++inter;
      ++i;
      ++j;
    }
  }
  return static_cast<double>(inter) / static_cast<double>(a.size() + b.size() - inter);
}

DedupResult dedup(std::span<const Document> corpus, const NearDupPolicy& policy) {
  policy.validate();
  struct Prepared {
    std::size_t n_tokens = 0;
    std::string key;
    std::vector<std::string> shingles;
  };
  std::vector<Prepared> prepared(corpus.size());
  const auto n = static_cast<std::int64_t>(corpus.size());
#pragma omp parallel for schedule(dynamic, 128)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto tokens = content_tokens(corpus[i].text, policy);
    Prepared& p = prepared[i];
    p.n_tokens = tokens.size();
    for (const auto& t : tokens) {
      p.key += t;
      p.key.push_back(' ');
    }
    p.shingles = shingles(tokens, policy.shingle_size);
  }

  // Sequential first-wins scan. Near-duplicate candidates come from an
  // inverted index over kept shingles; documents sharing no shingle have
  // Jaccard 0, below any valid threshold.
  DedupResult result;
  std::unordered_set<std::string_view> exact_keys;
  std::unordered_map<std::string_view, std::vector<std::uint32_t>> index;
  std::vector<std::size_t> kept_ids;
  std::unordered_map<std::uint32_t, std::uint32_t> overlap;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const Prepared& p = prepared[i];
    if (p.n_tokens < static_cast<std::size_t>(policy.min_tokens)) {
      result.dropped.emplace_back(corpus[i].id, DropReason::short_text);
      continue;
    }
    if (exact_keys.contains(p.key)) {
      result.dropped.emplace_back(corpus[i].id, DropReason::exact);
      continue;
    }
    overlap.clear();
    for (const auto& s : p.shingles) {
      if (auto it = index.find(s); it != index.end()) {
        for (std::uint32_t k : it->second) ++overlap[k];
      }
    }
    bool near = false;
    for (const auto& [k, inter] : overlap) {
      const auto& other = prepared[kept_ids[k]].shingles;
      const double j = static_cast<double>(inter) /
                       static_cast<double>(p.shingles.size() + other.size() - inter);
      if (j >= policy.jaccard_threshold) {
        near = true;
        break;
      }
    }
    if (near) {
      result.dropped.emplace_back(corpus[i].id, DropReason::near);
      continue;
    }
    const auto slot = static_cast<std::uint32_t>(kept_ids.size());
    kept_ids.push_back(i);
    exact_keys.insert(p.key);
    for (const auto& s : p.shingles) index[s].push_back(slot);
    result.kept.push_back(corpus[i]);
  }
  return result;
}

}  // namespace anchor
