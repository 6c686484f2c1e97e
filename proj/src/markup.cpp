#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "epix/corpus.hpp"
#include "epix/text.hpp"

namespace epix {

namespace {

bool opens_tag(std::string_view s, std::size_t i) {
  if (i + 1 >= s.size() || s[i] != '<') return false;
  char c = s[i + 1];
  return text::is_ascii_alpha(c) || c == '/' || c == '!' || c == '?';
}

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp == 0 || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) cp = 0xFFFD;
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

struct NamedEntity {
  std::string_view name;
  std::uint32_t cp;
};

constexpr NamedEntity kEntities[] = {
    {"amp", '&'},     {"lt", '<'},       {"gt", '>'},       {"quot", '"'},     {"apos", '\''},
    {"nbsp", ' '},    {"ndash", 0x2013}, {"mdash", 0x2014}, {"lsquo", 0x2018}, {"rsquo", 0x2019},
    {"ldquo", 0x201C}, {"rdquo", 0x201D}, {"hellip", 0x2026}, {"deg", 0xB0},   {"eacute", 0xE9},
    {"egrave", 0xE8}, {"ocirc", 0xF4},   {"uuml", 0xFC},    {"ouml", 0xF6},    {"auml", 0xE4},
    {"ccedil", 0xE7}, {"aacute", 0xE1},  {"iacute", 0xED},  {"oacute", 0xF3},  {"uacute", 0xFA},
    {"ntilde", 0xF1}, {"middot", 0xB7},  {"bull", 0x2022},  {"copy", 0xA9},    {"reg", 0xAE},
};

// Decodes one character reference at s[i] == '&'. Returns the number of
// bytes consumed, or 0 when this is not a reference.
std::size_t decode_entity(std::string_view s, std::size_t i, std::string& out) {
  auto semi = s.find(';', i);
  if (semi == std::string_view::npos || semi - i > 10 || semi == i + 1) return 0;
  auto name = s.substr(i + 1, semi - i - 1);
  if (name[0] == '#') {
    std::uint32_t cp = 0;
    bool hex = name.size() > 1 && (name[1] == 'x' || name[1] == 'X');
    auto digits = name.substr(hex ? 2 : 1);
    if (digits.empty()) return 0;
    for (char c : digits) {
      int v;
      if (text::is_ascii_digit(c)) {
        v = c - '0';
      } else if (hex && ((c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F'))) {
        v = (c | 0x20) - 'a' + 10;
      } else {
        return 0;
      }
      cp = cp * (hex ? 16 : 10) + static_cast<std::uint32_t>(v);
      if (cp > 0x10FFFF) cp = 0x110000;
    }
    if (cp == 0xA0) cp = ' ';
    append_utf8(out, cp);
    return semi - i + 1;
  }
  for (const auto& e : kEntities) {
    if (name == e.name) {
      append_utf8(out, e.cp);
      return semi - i + 1;
    }
  }
  return 0;
}

std::string decode_once(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size();) {
    if (s[i] == '&') {
      if (auto n = decode_entity(s, i, out)) {
        i += n;
        continue;
      }
    }
    out.push_back(s[i++]);
  }
  return out;
}

bool is_block(std::string_view name) {
  static constexpr std::string_view kBlocks[] = {
      "p",     "div",  "br",     "li",      "ul",     "ol",     "tr",     "table", "tbody",
      "thead", "tfoot", "h1",    "h2",      "h3",     "h4",     "h5",     "h6",    "section",
      "article", "header", "footer", "blockquote", "pre", "hr", "dl",   "dt",    "dd",
      "nav",   "aside", "main",  "figure",  "figcaption", "form", "title", "caption"};
  for (auto b : kBlocks)
    if (name == b) return true;
  return false;
}

bool is_cell(std::string_view name) { return name == "td" || name == "th"; }

bool is_raw_text(std::string_view name) {
  return name == "script" || name == "style" || name == "noscript" || name == "template";
}

// Collapses horizontal whitespace, trims lines, and keeps at most one blank
// line between paragraphs.
std::string normalize_whitespace(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t pending_newlines = 0;
  bool pending_space = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    // U+00A0 no-break space
    if (static_cast<unsigned char>(c) == 0xC2 && i + 1 < s.size() &&
        static_cast<unsigned char>(s[i + 1]) == 0xA0) {
      ++i;
      c = ' ';
    }
    if (c == '\n') {
      ++pending_newlines;
      pending_space = false;
    } else if (text::is_space(c)) {
      pending_space = true;
    } else {
      if (!out.empty()) {
        if (pending_newlines) {
          out.append(pending_newlines >= 2 ? "\n\n" : "\n");
        } else if (pending_space) {
          out.push_back(' ');
        }
      }
      pending_newlines = 0;
      pending_space = false;
      out.push_back(c);
    }
  }
  return out;
}

}  // namespace

StrippedText strip_markup(std::string_view raw) {
  StrippedText result;
  std::string plain;
  plain.reserve(raw.size());
  std::string lowered_name;
  std::size_t i = 0;
  while (i < raw.size()) {
    if (raw[i] == '\r') {
      ++i;
      continue;
    }
    if (!opens_tag(raw, i)) {
      plain.push_back(raw[i++]);
      continue;
    }
    if (raw.compare(i, 4, "<!--") == 0) {
      auto end = raw.find("-->", i + 4);
      if (end == std::string_view::npos) {
        result.malformed = true;
        break;
      }
      i = end + 3;
      continue;
    }
    // Find the closing '>' outside quoted attribute values.
    std::size_t j = i + 1;
    char quote = 0;
    while (j < raw.size()) {
      char c = raw[j];
      if (quote) {
        if (c == quote) quote = 0;
      } else if (c == '"' || c == '\'') {
        quote = c;
      } else if (c == '>') {
        break;
      } else if (c == '<' && opens_tag(raw, j)) {
        break;  // unterminated tag followed by another tag
      }
      ++j;
    }
    if (j >= raw.size() || raw[j] != '>') {
      // Unterminated tag: keep its text, neutralizing the '<'.
      result.malformed = true;
      plain.append("< ");
      ++i;
      continue;
    }
    std::size_t n = i + 1;
    bool closing = false;
    if (raw[n] == '/') {
      closing = true;
      ++n;
    }
    std::size_t name_end = n;
    while (name_end < j && (text::is_ascii_alpha(raw[name_end]) || text::is_ascii_digit(raw[name_end]))) {
      ++name_end;
    }
    lowered_name = text::to_lower(raw.substr(n, name_end - n));
    i = j + 1;
    if (!closing && is_raw_text(lowered_name)) {
      auto close = text::to_lower(raw.substr(i)).find("</" + lowered_name);
      if (close == std::string::npos) {
        result.malformed = true;
        break;
      }
      i += close;
      auto gt = raw.find('>', i);
      i = gt == std::string_view::npos ? raw.size() : gt + 1;
      continue;
    }
    if (lowered_name == "br" || lowered_name == "li" || lowered_name == "tr" || lowered_name == "dt" ||
        lowered_name == "dd") {
      // Line items start a line; their end tags add nothing.
      if (!closing) plain.push_back('\n');
    } else if (is_block(lowered_name)) {
      plain.append("\n\n");
    } else if (is_cell(lowered_name)) {
      plain.push_back(' ');
    }
  }

  // Decode to a fixpoint so a second pass never finds a reference left over.
  std::string decoded = std::move(plain);
  for (int round = 0; round < 8; ++round) {
    auto next = decode_once(decoded);
    if (next == decoded) break;
    decoded = std::move(next);
  }

  std::string safe;
  safe.reserve(decoded.size());
  for (std::size_t k = 0; k < decoded.size(); ++k) {
    safe.push_back(decoded[k]);
    if (decoded[k] == '<' && opens_tag(decoded, k)) safe.push_back(' ');
  }
  result.text = normalize_whitespace(safe);
  return result;
}

}  // namespace epix
