#include "lexer.hpp"

#include "epix/text.hpp"

namespace epix::detail {

namespace {

// U+2013 and U+2014.
std::size_t dash_length(std::string_view s, std::size_t i) {
  if (s.size() - i >= 3 && static_cast<unsigned char>(s[i]) == 0xE2 &&
      static_cast<unsigned char>(s[i + 1]) == 0x80 &&
      (static_cast<unsigned char>(s[i + 2]) == 0x93 || static_cast<unsigned char>(s[i + 2]) == 0x94)) {
    return 3;
  }
  return 0;
}

bool is_letter_byte(std::string_view s, std::size_t i) {
  char c = s[i];
  return text::is_ascii_alpha(c) || (static_cast<unsigned char>(c) >= 0x80 && dash_length(s, i) == 0);
}

}  // namespace

std::vector<Lexeme> lex(std::string_view s) {
  std::vector<Lexeme> out;
  bool space = true;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (text::is_space(c)) {
      space = true;
      ++i;
      continue;
    }
    std::size_t j = i;
    Lexeme::Kind kind;
    std::string_view tok;
    if (text::is_ascii_digit(c)) {
      while (j < s.size() && text::is_ascii_digit(s[j])) ++j;
      kind = Lexeme::Kind::Number;
      tok = s.substr(i, j - i);
    } else if (std::size_t d = dash_length(s, i)) {
      j = i + d;
      kind = Lexeme::Kind::Punct;
      tok = "-";
    } else if (is_letter_byte(s, i)) {
      while (j < s.size() && is_letter_byte(s, j)) ++j;
      kind = Lexeme::Kind::Word;
      tok = s.substr(i, j - i);
    } else {
      j = i + 1;
      kind = Lexeme::Kind::Punct;
      tok = s.substr(i, 1);
    }
    out.push_back({kind, i, j, tok, space});
    space = false;
    i = j;
  }
  return out;
}

}  // namespace epix::detail
