#include "anchor/violence.hpp"

#include <algorithm>
#include <istream>

#include "anchor/error.hpp"

namespace anchor {
namespace {

constexpr std::string_view kTaaMarbuta = "ة";
constexpr std::string_view kHaa = "ه";
constexpr std::string_view kTaa = "ت";
constexpr std::string_view kOnPrefix = "عال";
constexpr std::string_view kOn = "على";

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

// Codepoint count of a UTF-8 string.
std::size_t cp_length(std::string_view s) {
  return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [](char c) { return (c & 0xC0) != 0x80; }));
}

std::set<std::string> noun_with_suffixes(std::string_view stem, const ExpansionTable& table) {
  std::set<std::string> out{std::string(stem)};
  std::vector<std::string> bases;
  if (ends_with(stem, kTaaMarbuta)) {
    bases.push_back(std::string(stem.substr(0, stem.size() - kTaaMarbuta.size())) + std::string(kTaa));
  } else if (ends_with(stem, kHaa)) {
    bases.emplace_back(stem);
    bases.push_back(std::string(stem.substr(0, stem.size() - kHaa.size())) + std::string(kTaa));
  } else {
    bases.emplace_back(stem);
  }
  for (const auto& b : bases) {
    for (const auto& s : table.noun_suffixes) out.insert(b + s);
  }
  return out;
}

std::vector<std::string> split_commas(std::string_view s) {
  std::vector<std::string> out;
  while (!s.empty()) {
    const auto comma = s.find(',');
    auto item = s.substr(0, comma);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (!item.empty()) out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

bool contains(const std::set<std::string>& set, const std::string& s) { return set.find(s) != set.end(); }

}  // namespace

ExpansionTable ExpansionTable::defaults() {
  ExpansionTable t;
  t.person_markers = {"ي", "ت", "ن", "أ"};
  t.verb_prefixes = {"و", "ف", "س", "ب", "ح", "وس", "فس", "وب", "فب", "وح", "فح"};
  t.noun_prefixes = {"و", "ف", "ال", "بال", "عال"};
  t.noun_suffixes = {"ك", "كم", "كن", "ه", "ها", "هم", "ي", "نا"};
  t.object_pronouns = {"ك", "كم", "كن", "ه", "ها", "هم"};
  return t;
}

std::set<std::string> expand(std::string_view stem, const ExpansionTable& table, WordKind kind) {
  if (stem.empty()) throw UsageError("cannot expand an empty stem");
  std::set<std::string> out{std::string(stem)};
  if (kind == WordKind::verb) {
    std::set<std::string> persons{std::string(stem)};
    std::string core;
    for (const auto& marker : table.person_markers) {
      if (stem.starts_with(marker) && cp_length(stem) >= 3) {
        core = std::string(stem.substr(marker.size()));
        for (const auto& m : table.person_markers) persons.insert(m + core);
        break;
      }
    }
    out.insert(persons.begin(), persons.end());
    for (const auto& p : table.verb_prefixes) {
      for (const auto& f : persons) out.insert(p + f);
      // Dialectal ب/ح before a first-person verb drop its hamza: بقطع = بأقطع.
      if (!core.empty() && (p.ends_with("ب") || p.ends_with("ح"))) out.insert(p + core);
    }
  } else {
    const auto suffixed = noun_with_suffixes(stem, table);
    out.insert(suffixed.begin(), suffixed.end());
    for (const auto& p : table.noun_prefixes) {
      for (const auto& f : suffixed) out.insert(p + f);
    }
  }
  return out;
}

ClassTable default_classes() {
  return {
      {"head", {"رأس", "دماغ", "وجه", "رقبة"}},
      {"body", {"رأس", "دماغ", "وجه", "رقبة", "عين", "خشم", "أسنان", "بطن"}},
      {"human", {"أنت", "انتي", "أنتم", "انتو", "إياك"}},
      {"verb_kill", {"يقتل", "يذبح", "يدبح"}},
      {"verb_hit", {"يدوس", "يدعس", "يجلد", "يطعن", "يضرب", "يكسر"}},
      {"verb_cut", {"يقطع", "يفتح", "يطير"}},
      {"hit_noun", {"كف", "جزمة", "صفعة"}},
  };
}

std::vector<PatternRule> default_rules() {
  return {
      {"kill_human", RuleShape::verb_then_object, "verb_kill", {"human"}, 2},
      {"hit_human_or_body", RuleShape::verb_then_object, "verb_hit", {"human", "body"}, 2},
      {"cut_head", RuleShape::verb_then_object, "verb_cut", {"head"}, 2},
      {"hit_on_body", RuleShape::hitnoun_on_body, "hit_noun", {"body"}, 2},
  };
}

ClassTable parse_classes(std::istream& in) {
  ClassTable classes;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto cols = split_tabs(line);
    if (cols.size() != 2 || cols[0].empty()) {
      throw DataError("classes line " + std::to_string(line_no) + ": expected class<TAB>member1,member2,...");
    }
    auto& members = classes[std::string(cols[0])];
    for (auto& m : split_commas(cols[1])) members.push_back(std::move(m));
  }
  return classes;
}

std::vector<PatternRule> parse_rules(std::istream& in) {
  std::vector<PatternRule> rules;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto cols = split_tabs(line);
    const std::string where = "rules line " + std::to_string(line_no) + ": ";
    if (cols.size() != 5) throw DataError(where + "expected 5 tab-separated columns");
    PatternRule rule;
    rule.name = std::string(cols[0]);
    if (cols[1] == "V_then_O") {
      rule.shape = RuleShape::verb_then_object;
    } else if (cols[1] == "HITNOUN_ON_BODY") {
      rule.shape = RuleShape::hitnoun_on_body;
    } else {
      throw DataError(where + "unknown shape '" + std::string(cols[1]) + "'");
    }
    rule.verb_class = std::string(cols[2]);
    rule.object_classes = split_commas(cols[3]);
    try {
      rule.max_gap = std::stoi(std::string(cols[4]));
    } catch (const std::exception&) {
      throw DataError(where + "max_gap must be an integer");
    }
    if (rule.max_gap < 0 || rule.object_classes.empty()) throw DataError(where + "invalid rule");
    rules.push_back(std::move(rule));
  }
  return rules;
}

ViolenceMatcher::ViolenceMatcher(ClassTable classes, std::vector<PatternRule> rules, ExpansionTable table,
                                 NormalizationConfig cfg)
    : cfg_(std::move(cfg)), rules_(std::move(rules)) {
  cfg_.validate();
  for (const auto& [name, members] : classes) {
    const WordKind kind = name.starts_with("verb_") ? WordKind::verb : WordKind::noun;
    auto& forms = forms_[name];
    auto& with_pronoun = pronoun_forms_[name];
    for (const auto& raw : members) {
      if (raw.empty()) continue;
      for (const auto& f : expand(raw, table, kind)) {
        forms.insert(normalize(f, cfg_));
        if (kind == WordKind::verb) {
          for (const auto& p : table.object_pronouns) with_pronoun.insert(normalize(f + p, cfg_));
        }
      }
      if (kind == WordKind::noun) {
        for (const auto& f : noun_with_suffixes(raw, table)) {
          on_prefixed_body_.insert(normalize(std::string(kOnPrefix) + f, cfg_));
        }
      }
    }
  }
  on_ = normalize(kOn, cfg_);

  if (forms_.contains("head") && forms_.contains("body")) {
    const auto& head = forms_.at("head");
    const auto& body = forms_.at("body");
    if (!std::includes(body.begin(), body.end(), head.begin(), head.end())) {
      throw DataError("class body must include every member of class head");
    }
  }

  for (const auto& rule : rules_) {
    if (!forms_.contains(rule.verb_class)) {
      throw DataError("rule " + rule.name + " references unknown class " + rule.verb_class);
    }
    Compiled c{&rule, &forms_.at(rule.verb_class), nullptr, {}};
    for (const auto& obj : rule.object_classes) {
      if (!forms_.contains(obj)) throw DataError("rule " + rule.name + " references unknown class " + obj);
      c.objects.push_back(&forms_.at(obj));
      if (obj == "human" && rule.shape == RuleShape::verb_then_object) {
        c.verbs_with_pronoun = &pronoun_forms_.at(rule.verb_class);
      }
    }
    compiled_.push_back(std::move(c));
  }
  // Only keep "on the <body>" forms belonging to some object class of a hit rule.
  std::set<std::string> keep;
  for (const auto& c : compiled_) {
    if (c.rule->shape != RuleShape::hitnoun_on_body) continue;
    for (const auto* obj : c.objects) {
      for (const auto& f : *obj) {
        if (contains(on_prefixed_body_, f)) keep.insert(f);
      }
    }
  }
  on_prefixed_body_ = std::move(keep);
}

bool ViolenceMatcher::is_object(const Compiled& c, const std::string& token) const {
  return std::any_of(c.objects.begin(), c.objects.end(), [&](const auto* set) { return contains(*set, token); });
}

std::vector<ViolenceMatch> ViolenceMatcher::match(std::span<const std::string> tokens) const {
  std::vector<ViolenceMatch> out;
  const std::size_t n = tokens.size();
  for (const auto& c : compiled_) {
    const auto gap = static_cast<std::size_t>(c.rule->max_gap);
    for (std::size_t i = 0; i < n; ++i) {
      const std::string& tok = tokens[i];
      if (c.rule->shape == RuleShape::verb_then_object) {
        if (contains(*c.verbs, tok)) {
          for (std::size_t j = i + 1; j < n && j <= i + 1 + gap; ++j) {
            if (is_object(c, tokens[j])) {
              out.push_back({c.rule->name, i, j});
              break;
            }
          }
        } else if (c.verbs_with_pronoun != nullptr && contains(*c.verbs_with_pronoun, tok)) {
          out.push_back({c.rule->name, i, i});
        }
        continue;
      }
      if (!contains(*c.verbs, tok)) continue;
      for (std::size_t k = i + 1; k < n && k <= i + 1 + gap; ++k) {
        if (tokens[k] == on_ && k + 1 < n && is_object(c, tokens[k + 1])) {
          out.push_back({c.rule->name, i, k + 1});
          break;
        }
        if (contains(on_prefixed_body_, tokens[k]) && is_object(c, tokens[k])) {
          out.push_back({c.rule->name, i, k});
          break;
        }
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const ViolenceMatch& a, const ViolenceMatch& b) {
    if (a.first != b.first) return a.first < b.first;
    if (a.last != b.last) return a.last < b.last;
    return a.rule < b.rule;
  });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<ViolenceMatch> ViolenceMatcher::match_text(std::string_view text) const {
  const auto tokens = tokenize(normalize(text, cfg_));
  return match(tokens);
}

const std::set<std::string>& ViolenceMatcher::forms(const std::string& class_name) const {
  auto it = forms_.find(class_name);
  if (it == forms_.end()) throw UsageError("unknown class " + class_name);
  return it->second;
}

const std::set<std::string>& ViolenceMatcher::pronoun_forms(const std::string& class_name) const {
  auto it = pronoun_forms_.find(class_name);
  if (it == pronoun_forms_.end()) throw UsageError("unknown class " + class_name);
  return it->second;
}

}  // namespace anchor
