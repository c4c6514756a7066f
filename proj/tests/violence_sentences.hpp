#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace anchor::testdata {

struct ViolenceCase {
  std::string text;
  std::string rule;
};

// One or more sentences per pattern row, covering every verb and hit noun.
inline const std::vector<ViolenceCase>& violence_cases() {
  static const std::vector<ViolenceCase> cases = {
      {"سأقتلك يا حقير", "kill_human"},
      {"والله راح اذبحك", "kill_human"},
      {"ندبحك والله", "kill_human"},
      {"سوف يقتل انتم كلكم", "kill_human"},
      {"سأضرب رأسك", "hit_human_or_body"},
      {"ادوس على وجهك", "hit_human_or_body"},
      {"ندعس راسك", "hit_human_or_body"},
      {"اجلدك قدام الناس", "hit_human_or_body"},
      {"سأطعن بطنك", "hit_human_or_body"},
      {"اكسر أسنانك", "hit_human_or_body"},
      {"حيضربك ابوي", "hit_human_or_body"},
      {"اكسر خشمك", "hit_human_or_body"},
      {"اطعن عينك", "hit_human_or_body"},
      {"اقطع رقبتك", "cut_head"},
      {"افتح راسك", "cut_head"},
      {"اطير دماغك", "cut_head"},
      {"بقطع وجهك", "cut_head"},
      {"كف على وجهك", "hit_on_body"},
      {"جزمة على راسك", "hit_on_body"},
      {"صفعة عالخشم", "hit_on_body"},
  };
  return cases;
}

inline std::vector<std::string> clean_fillers() {
  static const char* words[] = {"صباح", "الخير", "جميل",  "مباراة", "اليوم", "فريق", "الهلال", "النصر",
                                "الجو", "حلو",   "شكرا",  "مبروك",  "رمضان", "كريم", "قهوة",   "سفر",
                                "العيد", "ناس",  "طيبين", "كتاب",   "مدرسة", "بيت",  "ليلة",   "مطر"};
  constexpr std::size_t kWords = sizeof(words) / sizeof(words[0]);
  std::vector<std::string> out;
  std::uint64_t state = 12345;
  for (int s = 0; s < 50; ++s) {
    std::string sentence;
    const int len = 3 + s % 5;
    for (int k = 0; k < len; ++k) {
      state = state * 6364136223846793005ULL + 1442695040888963407ULL;
      if (k > 0) sentence.push_back(' ');
      sentence += words[(state >> 33) % kWords];
    }
    out.push_back(sentence);
  }
  return out;
}

}  // namespace anchor::testdata
