#include <doctest.h>

#include <set>
#include <sstream>

#include "anchor/emoji.hpp"
#include "anchor/error.hpp"
#include "anchor/utf8.hpp"
#include "emoji_vectors.hpp"
#include "support.hpp"

using namespace anchor;
using anchor::testing::doc;
using anchor::testing::label;

namespace {

SeedInventory pig_inventory() {
  SeedInventory inv;
  inv.add(U"\U0001F437", {EmojiCategory::animal_dehumanization, "pig_face"});
  inv.add(U"\U0001F595\U0001F3FD", {EmojiCategory::disrespect_symbol, "middle_finger"});
  return inv;
}

}  // namespace

TEST_CASE("emoji vector suite") {
  for (const auto& c : testdata::emoji_cases()) {
    CAPTURE(c.name);
    const auto clusters = extract_emojis(c.text);
    REQUIRE(clusters.size() == c.clusters.size());
    for (std::size_t i = 0; i < clusters.size(); ++i) {
      CHECK(hex_key(clusters[i].codepoints) == c.clusters[i]);
      CHECK(hex_key(clusters[i].base) == c.bases[i]);
      CHECK(clusters[i].display == utf8::encode(clusters[i].codepoints));
      // Every cluster is a substring of the input.
      CHECK(c.text.find(clusters[i].display) != std::string::npos);
    }
  }
}

TEST_CASE("hex keys") {
  CHECK(hex_key(U"\U0001F595\U0001F3FD") == "1F595 1F3FD");
  CHECK(parse_hex_key("1F595 1F3FD") == U"\U0001F595\U0001F3FD");
  CHECK(parse_hex_key("U+1f437") == U"\U0001F437");
  CHECK_THROWS_AS(parse_hex_key("zz"), DataError);
}

TEST_CASE("seed inventory file") {
  std::istringstream in(
      "# comment\n"
      "codepoints\tcategory\tcomment\n"
      "1F437\tanimal_dehumanization\tpig_face\n"
      "1F595 1F3FD\tdisrespect_symbol\tmiddle_finger rude\n"
      "2764 FE0F\tother\n");
  const auto inv = SeedInventory::parse(in);
  CHECK(inv.size() == 3);
  CHECK(inv.contains(U"\U0001F595"));
  CHECK(inv.contains(U"❤"));
  CHECK(inv.alias(U"\U0001F595") == "middle_finger");
  CHECK(inv.alias(U"❤") == "emoji_2764");
  std::istringstream dup("1F437\tother\n1F437\tadult\n");
  CHECK_THROWS_AS(SeedInventory::parse(dup), DataError);
  std::istringstream badcat("1F437\tcute\n");
  CHECK_THROWS_AS(SeedInventory::parse(badcat), DataError);
}

TEST_CASE("filter_by_seeds examples") {
  const auto inv = pig_inventory();
  CHECK(filter_by_seeds(std::vector<Document>{doc("a", "no emoji here"), doc("b", "نص")}, inv).empty());

  std::vector<Document> corpus;
  for (int i = 0; i < 10; ++i) corpus.push_back(doc("d" + std::to_string(i), "text " + std::to_string(i)));
  corpus[2].text += " \U0001F595\U0001F3FB";
  corpus[5].text += " \U0001F595\U0001F3FF!";
  corpus[7].text = "\U0001F437\U0001F3FD x";  // lone-tone pig still matches
  corpus[8].text += " ❤️";           // non-seed
  const auto kept = filter_by_seeds(corpus, inv);
  REQUIRE(kept.size() == 3);
  CHECK(kept[0].id == "d2");
  CHECK(kept[1].id == "d5");
  CHECK(kept[2].id == "d7");

  CHECK_THROWS_AS(filter_by_seeds(corpus, SeedInventory{}), UsageError);
}

TEST_CASE("filter_by_seeds is tone invariant") {
  const auto inv = pig_inventory();
  for (char32_t tone = 0x1F3FB; tone <= 0x1F3FF; ++tone) {
    std::u32string toned = U"\U0001F595";
    toned.push_back(tone);
    const std::vector<Document> a{doc("x", "hey " + utf8::encode(toned))};
    const std::vector<Document> b{doc("x", "hey \U0001F595")};
    CHECK(filter_by_seeds(a, inv).size() == filter_by_seeds(b, inv).size());
  }
}

TEST_CASE("emoji_stats examples") {
  std::vector<Document> corpus{doc("1", "\U0001F437"), doc("2", "\U0001F437\U0001F437 x"), doc("3", "y \U0001F437"),
                               doc("4", "\U0001F437 \U0001F436"), doc("5", "nothing")};
  std::vector<LabelRecord> labels{label("1", true), label("2", true, true), label("3", false), label("4", true),
                                  label("5", true)};
  const auto stats = emoji_stats(corpus, labels);
  REQUIRE(stats.size() == 2);
  CHECK(stats[0].base == U"\U0001F436");
  CHECK(stats[0].offensive_pct() == 1.0);
  CHECK(stats[1].base == U"\U0001F437");
  CHECK(stats[1].n_total == 4);
  CHECK(stats[1].n_offensive == 3);
  CHECK(stats[1].offensive_pct() == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(stats[1].n_hate == 1);

  labels.pop_back();
  CHECK_THROWS_WITH_AS(emoji_stats(corpus, labels), doctest::Contains("5"), DataError);

  std::ostringstream out;
  write_emoji_stats(out, stats, nullptr);
  CHECK(out.str().find("1F437\tuncategorized\t4\t3\t0.750000\t1\t0.250000\n") != std::string::npos);
}

TEST_CASE("sample_per_emoji") {
  SeedInventory inv;
  inv.add(U"\U0001F437", {EmojiCategory::animal_dehumanization, "pig"});
  inv.add(U"\U0001F436", {EmojiCategory::animal_dehumanization, "dog"});
  std::vector<Document> corpus;
  for (int i = 0; i < 150; ++i) corpus.push_back(doc("p" + std::to_string(i), "pig \U0001F437 " + std::to_string(i)));
  for (int i = 0; i < 20; ++i) corpus.push_back(doc("g" + std::to_string(i), "dog \U0001F436\U0001F3FB"));

  const auto all = sample_per_emoji(corpus, inv, 200, 1);
  CHECK(all.at(U"\U0001F437").size() == 150);

  const auto five = sample_per_emoji(corpus, inv, 5, 42);
  const auto& dogs = five.at(U"\U0001F436");
  REQUIRE(dogs.size() == 5);
  std::set<std::string> ids;
  for (const auto& d : dogs) {
    ids.insert(d.id);
    const auto bases = distinct_bases(d.text);
    CHECK(std::find(bases.begin(), bases.end(), U"\U0001F436") != bases.end());
  }
  CHECK(ids.size() == 5);

  const auto one_a = sample_per_emoji(corpus, inv, 1, 7);
  const auto one_b = sample_per_emoji(corpus, inv, 1, 7);
  CHECK(one_a.at(U"\U0001F437")[0].id == one_b.at(U"\U0001F437")[0].id);
  CHECK_THROWS_AS(sample_per_emoji(corpus, inv, 0, 7), UsageError);
}

TEST_CASE("stats conservation") {
  Rng rng(5);
  const auto c = testing::random_corpus(rng, 200, 12);
  const auto stats = emoji_stats(c.docs, c.labels);
  std::size_t n_off_docs = 0, max_bases = 0, sum_off = 0;
  for (std::size_t i = 0; i < c.docs.size(); ++i) {
    n_off_docs += c.labels[i].offensive;
    max_bases = std::max(max_bases, distinct_bases(c.docs[i].text).size());
  }
  for (const auto& s : stats) {
    CHECK(s.n_offensive <= s.n_total);
    sum_off += s.n_offensive;
  }
  CHECK(sum_off <= n_off_docs * max_bases);
}
