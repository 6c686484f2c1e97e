#include <algorithm>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "epix/normalize.hpp"
#include "epix/text.hpp"
#include "lexer.hpp"

namespace epix {

std::string_view to_string(CountAttribute a) noexcept {
  switch (a) {
    case CountAttribute::Case: return "CASE";
    case CountAttribute::Death: return "DEATH";
    case CountAttribute::Unknown: return "UNKNOWN";
  }
  return "UNKNOWN";
}

std::optional<CountAttribute> count_attribute_from_string(std::string_view s) noexcept {
  if (text::iequals(s, "CASE")) return CountAttribute::Case;
  if (text::iequals(s, "DEATH")) return CountAttribute::Death;
  if (text::iequals(s, "UNKNOWN")) return CountAttribute::Unknown;
  return std::nullopt;
}

namespace {

using detail::Lexeme;
using Kind = Lexeme::Kind;

constexpr std::string_view kUnits[] = {"zero",    "one",       "two",      "three",    "four",
                                       "five",    "six",       "seven",    "eight",    "nine",
                                       "ten",     "eleven",    "twelve",   "thirteen", "fourteen",
                                       "fifteen", "sixteen",   "seventeen", "eighteen", "nineteen"};
constexpr std::string_view kTens[] = {"twenty", "thirty",  "forty",  "fifty",
                                      "sixty",  "seventy", "eighty", "ninety"};

std::optional<int> unit_value(std::string_view w) {
  for (std::size_t i = 0; i < std::size(kUnits); ++i)
    if (text::iequals(w, kUnits[i])) return static_cast<int>(i);
  return std::nullopt;
}

std::optional<int> tens_value(std::string_view w) {
  for (std::size_t i = 0; i < std::size(kTens); ++i)
    if (text::iequals(w, kTens[i])) return static_cast<int>(20 + 10 * i);
  return std::nullopt;
}

bool is_number_word(std::string_view w) {
  return unit_value(w) || tens_value(w) || text::iequals(w, "hundred");
}

std::optional<CountAttribute> keyword(std::string_view w) {
  static constexpr std::string_view kCase[] = {"cases", "case", "infections", "infection", "infected"};
  static constexpr std::string_view kDeath[] = {"deaths", "death", "fatalities", "fatality",
                                                "died",   "dead",  "deceased"};
  for (auto k : kCase)
    if (text::iequals(w, k)) return CountAttribute::Case;
  for (auto k : kDeath)
    if (text::iequals(w, k)) return CountAttribute::Death;
  return std::nullopt;
}

struct Number {
  std::uint64_t value;
  std::size_t next;
  bool words;
};

class Scanner {
 public:
  Scanner(std::string_view text, const std::vector<Lexeme>& lx, const CountScanOptions& opt)
      : text_(text), lx_(lx), opt_(opt) {}

  // Attempts a count expression starting at lexeme i.
  std::optional<std::pair<CountMention, std::size_t>> at(std::size_t i) const {
    std::size_t start = i;
    bool approximate = false;
    if (auto h = hedge(i)) {
      approximate = true;
      i = *h;
    }
    auto num = number(i);
    if (!num) return std::nullopt;
    std::size_t end_index = num->next;  // one past the last lexeme of the expression

    CountAttribute attribute = CountAttribute::Unknown;
    bool keyword_found = false;
    std::size_t j = num->next;
    for (int qualifiers = 0; qualifiers <= 3 && j < lx_.size(); ++qualifiers) {
      if (lx_[j].kind != Kind::Word) break;
      if (auto k = keyword(lx_[j].text)) {
        attribute = *k;
        keyword_found = true;
        end_index = j + 1;
        break;
      }
      if (is_number_word(lx_[j].text)) break;
      ++j;
      // Hyphenated qualifiers ("laboratory-confirmed").
      if (j + 1 < lx_.size() && lx_[j].kind == Kind::Punct && lx_[j].text == "-" &&
          !lx_[j].space_before && lx_[j + 1].kind == Kind::Word && !lx_[j + 1].space_before) {
        j += 2;
      }
    }

    if (num->words && !keyword_found && opt_.number_words_need_keyword) return std::nullopt;
    if (!num->words && !keyword_found && !approximate && looks_like_year(i, *num)) return std::nullopt;

    CountMention m;
    m.begin = lx_[start].begin;
    m.end = lx_[end_index - 1].end;
    m.count = CaseCount{num->value, approximate, attribute};
    return std::pair{m, end_index};
  }

 private:
  bool excluded(std::size_t i) const {
    auto b = lx_[i].begin;
    return std::any_of(opt_.excluded.begin(), opt_.excluded.end(),
                       [&](const auto& r) { return b >= r.first && b < r.second; });
  }

  bool word(std::size_t i, std::string_view w) const {
    return i < lx_.size() && lx_[i].kind == Kind::Word && text::iequals(lx_[i].text, w);
  }

  std::optional<std::size_t> hedge(std::size_t i) const {
    static constexpr std::string_view kSingle[] = {"about",  "approximately", "around", "nearly",
                                                   "almost", "roughly",       "over",   "circa",
                                                   "approx", "estimated",     "some"};
    if (word(i, "more") && word(i + 1, "than")) return i + 2;
    if (word(i, "greater") && word(i + 1, "than")) return i + 2;
    if (word(i, "at") && word(i + 1, "least")) return i + 2;
    if (word(i, "up") && word(i + 1, "to")) return i + 2;
    for (auto h : kSingle)
      if (word(i, h)) return i + 1;
    return std::nullopt;
  }

  std::optional<Number> number(std::size_t i) const {
    if (i >= lx_.size() || excluded(i)) return std::nullopt;
    if (lx_[i].kind == Kind::Number) return digits(i);
    if (lx_[i].kind == Kind::Word) return words(i);
    return std::nullopt;
  }

  // 15, 1,234. Numbers glued to letters ("H5N1", "COVID-19", "31st") and
  // decimals or percentages are not counts.
  std::optional<Number> digits(std::size_t i) const {
    if (!lx_[i].space_before && i > 0) {
      const auto& prev = lx_[i - 1];
      if (prev.kind == Kind::Word) return std::nullopt;
      if (prev.kind == Kind::Punct && (prev.text == "-" || prev.text == "." || prev.text == "/" ||
                                       prev.text == ":" || prev.text == "$")) {
        return std::nullopt;
      }
    }
    std::string acc(lx_[i].text);
    std::size_t j = i + 1;
    while (j + 1 < lx_.size() && lx_[j].text == "," && !lx_[j].space_before &&
           lx_[j + 1].kind == Kind::Number && !lx_[j + 1].space_before && lx_[j + 1].text.size() == 3 &&
           acc.size() <= 15) {
      acc += lx_[j + 1].text;
      j += 2;
    }
    // Space-grouped thousands ("55 000"): a lead of at most three digits and
    // groups of exactly three, each separated by one space.
    auto groupable = [&](std::size_t k) {
      if (k >= lx_.size() || lx_[k].kind != Kind::Number || lx_[k].text.size() != 3) return false;
      if (text_.substr(lx_[k - 1].end, lx_[k].begin - lx_[k - 1].end) != " ") return false;
      if (k + 1 >= lx_.size() || lx_[k + 1].space_before) return true;
      const auto& after = lx_[k + 1];
      if (after.kind == Kind::Word || after.text == "%") return false;
      return !(after.kind == Kind::Punct && k + 2 < lx_.size() && lx_[k + 2].kind == Kind::Number &&
               !lx_[k + 2].space_before);
    };
    if (j == i + 1 && acc.size() <= 3) {
      while (groupable(j) && acc.size() <= 15) {
        acc += lx_[j].text;
        ++j;
      }
    }
    if (j < lx_.size() && !lx_[j].space_before) {
      const auto& next = lx_[j];
      if (next.kind == Kind::Word) return std::nullopt;
      if (next.kind == Kind::Punct) {
        if (next.text == "%") return std::nullopt;
        if ((next.text == "." || next.text == "/" || next.text == ":" || next.text == "-") &&
            j + 1 < lx_.size() && lx_[j + 1].kind == Kind::Number && !lx_[j + 1].space_before) {
          return std::nullopt;
        }
      }
    }
    if (acc.size() > 18) return std::nullopt;
    std::uint64_t v = 0;
    for (char c : acc) v = v * 10 + static_cast<std::uint64_t>(c - '0');
    return Number{v, j, false};
  }

  // English number words up to 999: "thirteen", "twenty-one", "one hundred and five".
  std::optional<Number> words(std::size_t i) const {
    std::size_t j = i;
    int total = 0;
    bool any = false;
    if (j < lx_.size() && lx_[j].kind == Kind::Word) {
      auto u = unit_value(lx_[j].text);
      if (u && *u >= 1 && *u <= 9 && word(j + 1, "hundred")) {
        total = *u * 100;
        j += 2;
        any = true;
        if (word(j, "and") && j + 1 < lx_.size() && lx_[j + 1].kind == Kind::Word &&
            (unit_value(lx_[j + 1].text) || tens_value(lx_[j + 1].text))) {
          ++j;
        }
      }
    }
    if (j < lx_.size() && lx_[j].kind == Kind::Word) {
      if (auto t = tens_value(lx_[j].text)) {
        total += *t;
        ++j;
        any = true;
        std::size_t k = j;
        if (k < lx_.size() && lx_[k].text == "-" && !lx_[k].space_before) ++k;
        if (k < lx_.size() && lx_[k].kind == Kind::Word) {
          auto u = unit_value(lx_[k].text);
          if (u && *u >= 1 && *u <= 9) {
            total += *u;
            j = k + 1;
          }
        }
      } else if (auto u = unit_value(lx_[j].text)) {
        total += *u;
        ++j;
        any = true;
      }
    }
    if (!any) return std::nullopt;
    if (j < lx_.size() && word(j, "hundred")) return std::nullopt;  // beyond the supported range
    return Number{static_cast<std::uint64_t>(total), j, true};
  }

  // A bare four-digit number between 1900 and 2099 reads as a year.
  bool looks_like_year(std::size_t i, const Number& n) const {
    return n.next == i + 1 && lx_[i].text.size() == 4 && n.value >= 1900 && n.value <= 2099;
  }

  std::string_view text_;
  const std::vector<Lexeme>& lx_;
  const CountScanOptions& opt_;
};

}  // namespace

std::vector<CountMention> find_counts(std::string_view text, const CountScanOptions& options) {
  auto lx = detail::lex(text);
  Scanner scan(text, lx, options);
  std::vector<CountMention> out;
  std::size_t i = 0;
  while (i < lx.size()) {
    if (auto m = scan.at(i)) {
      out.push_back(m->first);
      i = m->second;
    } else {
      ++i;
    }
  }
  return out;
}

std::optional<CaseCount> parse_count_expression(std::string_view raw) {
  CountScanOptions opt;
  opt.number_words_need_keyword = false;
  for (const auto& d : find_dates(raw)) opt.excluded.emplace_back(d.begin, d.end);
  auto found = find_counts(raw, opt);
  if (found.empty()) return std::nullopt;
  return found.front().count;
}

}  // namespace epix
