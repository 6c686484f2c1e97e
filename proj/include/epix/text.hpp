#pragma once

// Small byte-level text helpers shared by the parsers. Everything here treats
// input as UTF-8 and only folds ASCII; non-ASCII bytes are word characters.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace epix::text {

inline bool is_ascii_alpha(char c) noexcept {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}
inline bool is_ascii_digit(char c) noexcept { return c >= '0' && c <= '9'; }
inline bool is_space(char c) noexcept {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}
// Letters, digits and any byte of a multi-byte UTF-8 sequence.
inline bool is_word_byte(char c) noexcept {
  return is_ascii_alpha(c) || is_ascii_digit(c) || static_cast<unsigned char>(c) >= 0x80;
}

std::string to_lower(std::string_view s);
bool iequals(std::string_view a, std::string_view b) noexcept;
std::string_view trim(std::string_view s) noexcept;

// Word tokens with byte offsets into the source text.
struct Token {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::string_view text;
};

// Splits on every non-word byte. "COVID-19" yields "COVID", "19".
std::vector<Token> word_tokens(std::string_view s);

// Case- and punctuation-insensitive key: lowercase word tokens joined by a
// single space. "Ebola  Virus-Disease!" -> "ebola virus disease".
std::string fold_key(std::string_view s);

// Number of UTF-8 code points.
std::size_t utf8_length(std::string_view s) noexcept;

// Longest prefix of s holding at most max_code_points code points, never
// splitting a multi-byte sequence.
std::string_view utf8_prefix(std::string_view s, std::size_t max_code_points) noexcept;

// Largest prefix length <= max_bytes that ends on a code point boundary.
std::size_t utf8_floor(std::string_view s, std::size_t max_bytes) noexcept;

}  // namespace epix::text
