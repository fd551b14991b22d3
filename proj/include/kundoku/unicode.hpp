#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace kundoku {

// Splits UTF-8 text into one std::string per Unicode scalar. Malformed
// bytes are passed through as single-byte units so that corpus lines with
// encoding damage still produce a diagnosable token stream.
std::vector<std::string> split_scalars(std::string_view text);

// Number of Unicode scalars in a UTF-8 string.
std::size_t scalar_length(std::string_view text);

// True if the scalar is a kana (hiragana or katakana, including the
// prolonged sound mark).
bool is_kana(std::string_view scalar);

// True if the scalar is whitespace (ASCII or ideographic space).
bool is_space(std::string_view scalar);

// True if the scalar is punctuation stripped by the character-level
// metrics: Kutōten, CJK brackets and common ASCII punctuation.
bool is_punctuation(std::string_view scalar);

}  // namespace kundoku
