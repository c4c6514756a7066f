#include <doctest.h>

#include <set>
#include <sstream>

#include "anchor/error.hpp"
#include "anchor/normalize.hpp"
#include "anchor/utf8.hpp"
#include "support.hpp"

using namespace anchor;
using anchor::testing::doc;

namespace {

// Jaccard of word-bigram sets, computed directly from token lists.
double bigram_jaccard(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  auto grams = [](const std::vector<std::string>& t) {
    std::set<std::pair<std::string, std::string>> s;
    for (std::size_t i = 0; i + 1 < t.size(); ++i) s.emplace(t[i], t[i + 1]);
    return s;
  };
  const auto ga = grams(a), gb = grams(b);
  std::size_t inter = 0;
  for (const auto& g : ga) inter += gb.count(g);
  const std::size_t uni = ga.size() + gb.size() - inter;
  return uni == 0 ? 0.0 : static_cast<double>(inter) / uni;
}

}  // namespace

TEST_CASE("normalize examples") {
  const NormalizationConfig cfg;
  CHECK(normalize("أمة", cfg) == "امه");
  CHECK(normalize("", cfg) == "");
  CHECK(normalize("خلللاص", cfg) == "خللاص");
  CHECK(normalize("@someone http://x.y hi", cfg) == "@USER URL hi");
  CHECK(normalize("إلى آخر", cfg) == "الي اخر");
  CHECK(normalize("مَرْحَبًا", cfg) == "مرحبا");
  CHECK(normalize("line1\nline2<LF>line3", cfg) == "line1 line2 line3");
  CHECK(normalize("email a@b.c and https://t.co/abc?x=1.", cfg) == "email a@b.c and URL");

  NormalizationConfig off = cfg;
  off.map_alef = off.map_taa = off.map_yaa = off.strip_diacritics = false;
  CHECK(normalize("أمة", off) == "أمة");
}

TEST_CASE("normalize is idempotent and never longer") {
  Rng rng(17);
  const std::vector<std::string> pieces = {"أ", "ة", "ى", "َ", "ـ", "ل", "ل", "ل", "a", "a", "@", "x", " ", "\n",
                                           "<LF>", "http://", "www.", ".", "🐷", "\U0001F3FD", "ه", "_", "U", "R", "L"};
  NormalizationConfig cfg;
  for (int trial = 0; trial < 2000; ++trial) {
    std::string s;
    const std::size_t len = rng.below(25);
    for (std::size_t k = 0; k < len; ++k) s += pieces[rng.below(pieces.size())];
    cfg.squash_repeats_over = 2 + static_cast<int>(rng.below(3));
    const std::string once = normalize(s, cfg);
    CAPTURE(s);
    CHECK(normalize(once, cfg) == once);
    CHECK(utf8::decode(once).size() <= utf8::decode(s).size() + 4 * 8);
  }
}

TEST_CASE("normalize shortens letter runs") {
  NormalizationConfig cfg;
  CHECK(normalize("ههههههه", cfg) == "هه");
  CHECK(normalize("goooood", cfg) == "good");
  cfg.squash_repeats_over = 3;
  CHECK(normalize("goooood", cfg) == "goood");
  CHECK(utf8::decode(normalize("جمييييييل", cfg)).size() <= utf8::decode("جمييييييل").size());
}

TEST_CASE("normalization config text") {
  NormalizationConfig cfg;
  std::istringstream in("# c\nsquash_repeats_over = 3\nmap_taa=false # trailing\nreplace_urls_with=<url>\n");
  const auto parsed = parse_normalization_config(in);
  CHECK(parsed.squash_repeats_over == 3);
  CHECK_FALSE(parsed.map_taa);
  CHECK(parsed.replace_urls_with == "<url>");
  std::istringstream round(to_config_text(cfg));
  CHECK(parse_normalization_config(round) == cfg);
  std::istringstream unknown("colour=blue\n");
  CHECK_THROWS_AS(parse_normalization_config(unknown), UsageError);
  std::istringstream small("squash_repeats_over=1\n");
  CHECK_THROWS(parse_normalization_config(small));
}

TEST_CASE("tokenize examples") {
  CHECK(tokenize("يا كلب🐷") == std::vector<std::string>{"يا", "كلب", "🐷"});
  CHECK(tokenize("").empty());
  CHECK(tokenize("a,b") == std::vector<std::string>{"a", "b"});
  CHECK(tokenize("@USER URL hi!") == std::vector<std::string>{"@USER", "URL", "hi"});
  CHECK(tokenize("\U0001F595\U0001F3FD\U0001F595") ==
        std::vector<std::string>{"\U0001F595\U0001F3FD", "\U0001F595"});
  CHECK(tokenize("؟،  x") == std::vector<std::string>{"x"});
}

TEST_CASE("n-gram examples") {
  const std::vector<std::string> ab{"a", "b"};
  CHECK(word_ngrams(ab, 1, 2) == std::vector<std::string>{"a", "b", "a b"});
  CHECK(char_ngrams("ab", 2, 2) == std::vector<std::string>{"ab"});
  const auto abc = char_ngrams("abc", 2, 3);
  CHECK(std::multiset<std::string>(abc.begin(), abc.end()) == std::multiset<std::string>{"ab", "bc", "abc"});
  CHECK(char_ngrams("أمه", 2, 2) == std::vector<std::string>{"أم", "مه"});
  CHECK_THROWS_AS(word_ngrams(ab, 2, 1), UsageError);
  CHECK_THROWS_AS(char_ngrams("x", 0, 2), UsageError);

  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::string> t(rng.below(12), "w");
    const int n = 1 + static_cast<int>(rng.below(4));
    CHECK(word_ngrams(t, n, n).size() == (t.size() >= static_cast<std::size_t>(n) ? t.size() - n + 1 : 0));
  }
}

TEST_CASE("dedup examples") {
  NearDupPolicy policy;
  SUBCASE("exact") {
    const auto r = dedup(std::vector<Document>{doc("a", "one two three four"), doc("b", "one two three four")}, policy);
    REQUIRE(r.dropped.size() == 1);
    CHECK(r.dropped[0] == std::pair<std::string, DropReason>{"b", DropReason::exact});
  }
  SUBCASE("short") {
    const auto r = dedup(std::vector<Document>{doc("a", "يا 🐷"), doc("b", "@x http://t.co hi there")}, policy);
    REQUIRE(r.dropped.size() == 2);
    CHECK(r.dropped[0].second == DropReason::short_text);
    CHECK(r.dropped[1].second == DropReason::short_text);
    CHECK(to_string(DropReason::short_text) == "short");
  }
  SUBCASE("one token changed in ten") {
    const std::vector<std::string> base{"w0", "w1", "w2", "w3", "w4", "w5", "w6", "w7", "w8", "w9"};
    for (std::size_t pos = 0; pos < base.size(); ++pos) {
      auto changed = base;
      changed[pos] = "zz";
      std::string ta, tb;
      for (std::size_t k = 0; k < base.size(); ++k) {
        ta += base[k] + " ";
        tb += changed[k] + " ";
      }
      const double j = bigram_jaccard(base, changed);
      const auto r = dedup(std::vector<Document>{doc("a", ta), doc("b", tb)}, policy);
      CAPTURE(pos);
      CHECK(r.kept.size() == (j >= 0.8 ? 1u : 2u));
    }
  }
}

TEST_CASE("dedup agrees with the pairwise definition") {
  Rng rng(2024);
  const std::vector<std::string> vocab = {"a", "b", "c", "d", "e", "أمة", "امه", "🐷"};
  for (int trial = 0; trial < 40; ++trial) {
    NearDupPolicy policy;
    policy.jaccard_threshold = std::vector<double>{0.3, 0.5, 0.8, 1.0}[rng.below(4)];
    std::vector<Document> corpus;
    const std::size_t n = 20 + rng.below(180);
    for (std::size_t i = 0; i < n; ++i) {
      std::string text;
      const std::size_t len = 1 + rng.below(7);
      for (std::size_t k = 0; k < len; ++k) text += vocab[rng.below(vocab.size())] + " ";
      corpus.push_back(doc("d" + std::to_string(i), text));
    }
    const auto r = dedup(corpus, policy);
    CHECK(r.kept.size() + r.dropped.size() == corpus.size());
    // No kept pair reaches the threshold.
    std::vector<std::vector<std::string>> sh;
    for (const auto& d : r.kept) sh.push_back(shingles(content_tokens(d.text, policy), policy.shingle_size));
    for (std::size_t i = 0; i < sh.size(); ++i) {
      for (std::size_t j = i + 1; j < sh.size(); ++j) CHECK(jaccard(sh[i], sh[j]) < policy.jaccard_threshold);
    }
  }
}

TEST_CASE("jaccard and shingles") {
  const std::vector<std::string> t{"a", "b", "a", "b"};
  CHECK(shingles(t, 2) == std::vector<std::string>{"a b", "b a"});
  CHECK(shingles(std::vector<std::string>{"x"}, 2) == std::vector<std::string>{"x"});
  CHECK(jaccard({}, {}) == 0.0);
  const std::vector<std::string> a{"1", "2", "3"}, b{"2", "3", "4"};
  CHECK(jaccard(a, b) == 0.5);
  NearDupPolicy bad;
  bad.jaccard_threshold = 0.0;
  CHECK_THROWS(bad.validate());
}
