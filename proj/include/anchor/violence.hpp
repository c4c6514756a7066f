#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "anchor/normalize.hpp"

namespace anchor {

// Class name -> stems. Well-known names: head, body, human, verb_kill,
// verb_hit, verb_cut, hit_noun. "human" is also satisfied by an object
// pronoun attached to the verb ("سأقتلك").
using ClassTable = std::map<std::string, std::vector<std::string>>;

enum class RuleShape { verb_then_object, hitnoun_on_body };

struct PatternRule {
  std::string name;
  RuleShape shape = RuleShape::verb_then_object;
  std::string verb_class;
  std::vector<std::string> object_classes;
  int max_gap = 2;  // tokens allowed between verb and object
};

struct ExpansionTable {
  // Imperfect person markers swapped at the head of a verb stem (يقتل -> اقتل, تقتل, نقتل).
  std::vector<std::string> person_markers;
  // Conjunction / tense prefixes and their combinations (و, س, وس, ...).
  std::vector<std::string> verb_prefixes;
  std::vector<std::string> noun_prefixes;
  // Attached possessive pronouns.
  std::vector<std::string> noun_suffixes;
  // Object pronouns attached to verbs; these stand in for <human>.
  std::vector<std::string> object_pronouns;

  static ExpansionTable defaults();
};

enum class WordKind { verb, noun };

// Surface forms of a stem, always including the stem itself. Nouns ending in
// ة take ت before a suffix; nouns ending in ه (a normalized ة or a genuine ه)
// get both variants.
std::set<std::string> expand(std::string_view stem, const ExpansionTable& table, WordKind kind);

struct ViolenceMatch {
  std::string rule;
  std::size_t first = 0;  // token span, inclusive
  std::size_t last = 0;

  bool operator==(const ViolenceMatch&) const = default;
};

ClassTable default_classes();
std::vector<PatternRule> default_rules();

// "class<TAB>member1,member2,..." per line.
ClassTable parse_classes(std::istream& in);
// "name<TAB>shape<TAB>verb_class<TAB>object_classes(comma)<TAB>max_gap";
// shape is V_then_O or HITNOUN_ON_BODY.
std::vector<PatternRule> parse_rules(std::istream& in);

// Compiled rules. Construction expands and normalizes every class member once;
// matching is then read-only and safe to share across threads.
class ViolenceMatcher {
 public:
  ViolenceMatcher(ClassTable classes, std::vector<PatternRule> rules,
                  ExpansionTable table = ExpansionTable::defaults(), NormalizationConfig cfg = {});

  // Tokens must already be normalized with the matcher's config.
  std::vector<ViolenceMatch> match(std::span<const std::string> tokens) const;
  std::vector<ViolenceMatch> match_text(std::string_view text) const;

  const std::set<std::string>& forms(const std::string& class_name) const;
  // Verb forms carrying an attached object pronoun.
  const std::set<std::string>& pronoun_forms(const std::string& class_name) const;
  const std::vector<PatternRule>& rules() const { return rules_; }
  const NormalizationConfig& normalization() const { return cfg_; }

 private:
  struct Compiled {
    const PatternRule* rule;
    const std::set<std::string>* verbs;
    const std::set<std::string>* verbs_with_pronoun;  // null unless human is an object
    std::vector<const std::set<std::string>*> objects;
  };

  bool is_object(const Compiled& c, const std::string& token) const;

  NormalizationConfig cfg_;
  std::vector<PatternRule> rules_;
  std::map<std::string, std::set<std::string>> forms_;
  std::map<std::string, std::set<std::string>> pronoun_forms_;
  std::set<std::string> on_prefixed_body_;  // body forms carrying the attached "on the" prefix
  std::string on_;                          // normalized "على"
  std::vector<Compiled> compiled_;
};

}  // namespace anchor
