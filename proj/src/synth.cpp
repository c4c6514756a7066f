#include "anchor/synth.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <string_view>

#include "anchor/error.hpp"
#include "anchor/random.hpp"
#include "anchor/utf8.hpp"

namespace anchor {
namespace {

constexpr std::array<std::string_view, 40> kClean = {
    "صباح",   "الخير",  "جميل",   "مباراة", "اليوم",   "فريق",  "الهلال", "النصر", "الجو",   "حلو",
    "شكرا",   "مبروك",  "يحفظك",  "رمضان",  "كريم",    "قهوة",  "سفر",    "العيد", "ناس",    "طيبين",
    "الحمدلله", "عمل",  "جديد",   "كتاب",   "مدرسة",   "اصدقاء", "بيت",   "ليلة",  "سعيدة",  "مطر",
    "شمس",    "بحر",    "طريق",   "سيارة",  "اكل",     "لذيذ",  "صورة",   "فيديو", "اغنية",  "حفلة"};

constexpr std::array<std::string_view, 12> kOffensive = {"حقير", "وسخ",   "غبي",  "تافه", "حمار",  "خنزير",
                                                         "منحط", "قذر",   "واطي", "زبالة", "جاهل", "نذل"};

constexpr std::array<std::string_view, 4> kVulgar = {"يلعن", "ابوك", "انقلع", "ملعون"};

constexpr std::array<std::string_view, 4> kViolence = {"يذبحك", "يقتلك", "يضرب راسك", "كف على وجهك"};

struct TargetTerm {
  HateTarget target;
  std::string_view term;
};

constexpr std::array<TargetTerm, 6> kTargets = {{{HateTarget::religion, "اليهود"},
                                                 {HateTarget::race, "الهنود"},
                                                 {HateTarget::gender, "النسوان"},
                                                 {HateTarget::ideology, "الليبراليين"},
                                                 {HateTarget::social_class, "الخدم"},
                                                 {HateTarget::disability, "المعاقين"}}};

// Emojis never used as seeds.
constexpr std::array<char32_t, 5> kNeutralEmoji = {0x1F602, 0x2764, 0x1F339, 0x1F44D, 0x1F64F};

template <typename A>
std::string_view pick(Rng& rng, const A& arr) {
  return arr[rng.below(arr.size())];
}

double non_seed_rate(const SynthOptions& o) {
  return (o.offensive_rate - o.seed_emoji_rate * o.offensive_given_seed) / (1.0 - o.seed_emoji_rate);
}

}  // namespace

void SynthOptions::validate() const {
  auto unit = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (n_docs == 0) throw UsageError("n_docs must be positive");
  if (!unit(offensive_rate) || !unit(offensive_given_seed) || !unit(hate_given_offensive) ||
      !unit(vulgar_given_offensive) || !unit(violence_given_offensive) || !unit(duplicate_rate) ||
      !unit(short_rate)) {
    throw UsageError("rates must lie in [0, 1]");
  }
  if (!(seed_emoji_rate >= 0.0 && seed_emoji_rate < 1.0)) throw UsageError("seed emoji rate must lie in [0, 1)");
  const double q = non_seed_rate(*this);
  if (q < -1e-12 || q > 1.0 + 1e-12) {
    throw UsageError("offensive rate cannot be met with the given seed emoji rate and P(offensive | seed)");
  }
}

SynthCorpus generate_synthetic(const SynthOptions& options, const SeedInventory& inventory) {
  options.validate();
  if (inventory.empty()) throw UsageError("seed inventory is empty");
  std::vector<std::u32string> seeds;
  for (const auto& [base, entry] : inventory.entries()) seeds.push_back(base);
  const double q = std::clamp(non_seed_rate(options), 0.0, 1.0);

  Rng rng(options.seed);
  SynthCorpus out;
  out.docs.reserve(options.n_docs);
  out.labels.reserve(options.n_docs);
  for (std::size_t i = 0; i < options.n_docs; ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "s%06zu", i);
    Document doc;
    doc.id = id;
    doc.created_at = 1577836800 + static_cast<std::int64_t>(rng.below(366 * 86400));
    doc.lang = "ar";
    LabelRecord label;
    label.doc_id = doc.id;

    if (i > 0 && rng.bernoulli(options.duplicate_rate)) {
      const std::size_t src = rng.below(i);
      doc.text = out.docs[src].text;
      label = out.labels[src];
      label.doc_id = doc.id;
      out.docs.push_back(std::move(doc));
      out.labels.push_back(std::move(label));
      continue;
    }
    if (rng.bernoulli(options.short_rate)) {
      doc.text = std::string(pick(rng, kClean));
      if (rng.bernoulli(0.5)) doc.text += " " + std::string(pick(rng, kClean));
      out.docs.push_back(std::move(doc));
      out.labels.push_back(std::move(label));
      continue;
    }

    const bool has_seed = rng.bernoulli(options.seed_emoji_rate);
    label.offensive = rng.bernoulli(has_seed ? options.offensive_given_seed : q);
    std::vector<std::string> words;
    const std::size_t n_clean = 4 + rng.below(6);
    for (std::size_t k = 0; k < n_clean; ++k) words.emplace_back(pick(rng, kClean));
    if (label.offensive) {
      const std::size_t n_off = 2 + rng.below(2);
      for (std::size_t k = 0; k < n_off; ++k) words.emplace_back(pick(rng, kOffensive));
      if (rng.bernoulli(options.hate_given_offensive)) {
        const auto& t = kTargets[rng.below(kTargets.size())];
        label.hate_targets.insert(t.target);
        words.emplace_back(t.term);
      }
      if (rng.bernoulli(options.vulgar_given_offensive)) {
        label.vulgar = true;
        words.emplace_back(pick(rng, kVulgar));
      }
      if (rng.bernoulli(options.violence_given_offensive)) {
        label.violence = true;
        words.emplace_back(pick(rng, kViolence));
      }
    }
    rng.shuffle(std::span<std::string>(words));
    if (rng.bernoulli(0.05)) {
      // Elongate the last letter of one word.
      auto& w = words[rng.below(words.size())];
      std::u32string cps = utf8::decode(w);
      cps.append(3, cps.back());
      w = utf8::encode(cps);
    }
    if (has_seed) {
      const auto& s = seeds[rng.below(seeds.size())];
      words.insert(words.begin() + static_cast<std::ptrdiff_t>(rng.below(words.size() + 1)), utf8::encode(s));
    }
    if (rng.bernoulli(0.1)) {
      words.push_back(utf8::encode(std::u32string(1, kNeutralEmoji[rng.below(kNeutralEmoji.size())])));
    }
    std::string text;
    if (rng.bernoulli(0.1)) text = "@user" + std::to_string(rng.below(1000)) + " ";
    for (std::size_t k = 0; k < words.size(); ++k) {
      if (k > 0) text.push_back(' ');
      text += words[k];
    }
    if (rng.bernoulli(0.05)) text += " https://t.co/" + std::to_string(rng.next() % 1000000);
    doc.text = std::move(text);
    out.docs.push_back(std::move(doc));
    out.labels.push_back(std::move(label));
  }
  return out;
}

}  // namespace anchor
