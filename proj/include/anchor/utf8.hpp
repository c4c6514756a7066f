#pragma once

#include <string>
#include <string_view>

namespace anchor::utf8 {

// Strict decoder: rejects overlongs, surrogates and truncated sequences.
bool is_valid(std::string_view bytes);

// Throws DataError on invalid input.
std::u32string decode(std::string_view bytes);

void append(std::string& out, char32_t cp);
std::string encode(std::u32string_view cps);

}  // namespace anchor::utf8
