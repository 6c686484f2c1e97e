#pragma once

// Private tokenizer for the date and count scanners. Unlike
// text::word_tokens it keeps punctuation and splits letters from digits, so
// "May 19-21, 2018" becomes Word Number Punct Number Punct Number.

#include <cstddef>
#include <string_view>
#include <vector>

namespace epix::detail {

struct Lexeme {
  enum class Kind { Word, Number, Punct };
  Kind kind;
  std::size_t begin;
  std::size_t end;
  std::string_view text;  // en and em dashes are reported as "-"
  bool space_before;
};

std::vector<Lexeme> lex(std::string_view s);

}  // namespace epix::detail
