#include <array>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "epix/normalize.hpp"
#include "epix/text.hpp"
#include "lexer.hpp"

namespace epix {

bool IsoDate::valid(int year, int month, int day) noexcept {
  if (year < 1 || year > 9999 || month < 1 || month > 12 || day < 1) return false;
  static constexpr std::array<int, 12> kDays{31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  int limit = kDays[static_cast<std::size_t>(month - 1)];
  bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
  if (month == 2 && leap) limit = 29;
  return day <= limit;
}

std::optional<IsoDate> IsoDate::make(int year, int month, int day) noexcept {
  if (!valid(year, month, day)) return std::nullopt;
  return IsoDate{year, month, day};
}

std::optional<IsoDate> IsoDate::parse(std::string_view s) noexcept {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
  auto digits = [&](std::size_t from, std::size_t n) -> int {
    int v = 0;
    for (std::size_t i = from; i < from + n; ++i) {
      if (!text::is_ascii_digit(s[i])) return -1;
      v = v * 10 + (s[i] - '0');
    }
    return v;
  };
  int y = digits(0, 4), m = digits(5, 2), d = digits(8, 2);
  if (y < 0 || m < 0 || d < 0) return std::nullopt;
  return make(y, m, d);
}

std::string IsoDate::to_string() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
  return buf;
}

namespace {

using detail::Lexeme;
using Kind = Lexeme::Kind;

struct Names {
  std::string_view name;
  int month;
};

constexpr Names kMonths[] = {
    {"january", 1},  {"jan", 1},   {"february", 2}, {"feb", 2},     {"march", 3},   {"mar", 3},
    {"april", 4},    {"apr", 4},   {"may", 5},      {"june", 6},    {"jun", 6},     {"july", 7},
    {"jul", 7},      {"august", 8}, {"aug", 8},     {"september", 9}, {"sept", 9},  {"sep", 9},
    {"october", 10}, {"oct", 10},  {"november", 11}, {"nov", 11},   {"december", 12}, {"dec", 12},
};

struct Match {
  IsoDate date;
  std::size_t next;  // index of the first lexeme after the mention
};

class Scanner {
 public:
  Scanner(const std::vector<Lexeme>& lx, std::optional<int> anchor) : lx_(lx), anchor_(anchor) {}

  std::optional<Match> at(std::size_t i) const {
    if (auto m = iso(i)) return m;
    if (auto m = slashed(i)) return m;
    if (auto m = day_first(i)) return m;
    if (auto m = month_first(i)) return m;
    return std::nullopt;
  }

 private:
  bool has(std::size_t i) const { return i < lx_.size(); }

  bool punct(std::size_t i, char c, bool glued) const {
    return has(i) && lx_[i].kind == Kind::Punct && lx_[i].text.size() == 1 && lx_[i].text[0] == c &&
           (!glued || !lx_[i].space_before);
  }

  std::optional<int> number(std::size_t i, std::size_t min_digits, std::size_t max_digits,
                            bool glued = false) const {
    if (!has(i) || lx_[i].kind != Kind::Number) return std::nullopt;
    if (glued && lx_[i].space_before) return std::nullopt;
    auto t = lx_[i].text;
    if (t.size() < min_digits || t.size() > max_digits) return std::nullopt;
    int v = 0;
    for (char c : t) v = v * 10 + (c - '0');
    return v;
  }

  // Day number with an optional glued ordinal suffix ("31st").
  std::optional<std::pair<int, std::size_t>> day(std::size_t i) const {
    auto d = number(i, 1, 2);
    if (!d || *d < 1 || *d > 31) return std::nullopt;
    std::size_t j = i + 1;
    if (has(j) && lx_[j].kind == Kind::Word && !lx_[j].space_before) {
      auto w = text::to_lower(lx_[j].text);
      if (w == "st" || w == "nd" || w == "rd" || w == "th") {
        ++j;
      } else {
        return std::nullopt;
      }
    }
    if (has(j) && lx_[j].kind == Kind::Number && !lx_[j].space_before) return std::nullopt;
    return std::pair{*d, j};
  }

  std::optional<std::pair<int, std::size_t>> month(std::size_t i) const {
    if (!has(i) || lx_[i].kind != Kind::Word) return std::nullopt;
    auto raw = lx_[i].text;
    auto w = text::to_lower(raw);
    for (const auto& m : kMonths) {
      if (w != m.name) continue;
      // "may" is a month only when capitalized.
      if (m.name == "may" && raw[0] != 'M') return std::nullopt;
      std::size_t j = i + 1;
      if (w.size() <= 4 && w != "may" && w != "june" && w != "july" && punct(j, '.', true)) ++j;
      return std::pair{m.month, j};
    }
    return std::nullopt;
  }

  std::optional<std::pair<int, std::size_t>> year(std::size_t i) const {
    std::size_t j = punct(i, ',', false) ? i + 1 : i;
    auto y = number(j, 4, 4);
    if (!y) return std::nullopt;
    if (has(j + 1) && !lx_[j + 1].space_before &&
        (lx_[j + 1].kind == Kind::Number || lx_[j + 1].kind == Kind::Word)) {
      return std::nullopt;
    }
    return std::pair{*y, j + 1};
  }

  std::optional<std::size_t> range_separator(std::size_t i) const {
    if (punct(i, '-', false)) return i + 1;
    if (has(i) && lx_[i].kind == Kind::Word) {
      auto w = text::to_lower(lx_[i].text);
      if (w == "to" || w == "and" || w == "through" || w == "till" || w == "until") return i + 1;
    }
    return std::nullopt;
  }

  std::optional<Match> finish(int y, int m, int d, std::size_t next) const {
    if (auto date = IsoDate::make(y, m, d)) return Match{*date, next};
    return std::nullopt;
  }

  std::optional<Match> anchored(int m, int d, std::size_t next) const {
    if (!anchor_) return std::nullopt;
    return finish(*anchor_, m, d, next);
  }

  // 2018-05-31
  std::optional<Match> iso(std::size_t i) const {
    auto y = number(i, 4, 4);
    if (!y || !punct(i + 1, '-', true)) return std::nullopt;
    auto m = number(i + 2, 1, 2, true);
    if (!m || !punct(i + 3, '-', true)) return std::nullopt;
    auto d = number(i + 4, 1, 2, true);
    if (!d) return std::nullopt;
    return finish(*y, *m, *d, i + 5);
  }

  // 31/05/2018
  std::optional<Match> slashed(std::size_t i) const {
    auto d = number(i, 1, 2);
    if (!d || !punct(i + 1, '/', true)) return std::nullopt;
    auto m = number(i + 2, 1, 2, true);
    if (!m || !punct(i + 3, '/', true)) return std::nullopt;
    auto y = number(i + 4, 4, 4, true);
    if (!y) return std::nullopt;
    return finish(*y, *m, *d, i + 5);
  }

  // 31 May 2018, 31st of May, 2018, 28 April - 3 May 2018, 3 and 17 October 2022
  std::optional<Match> day_first(std::size_t i) const {
    auto d1 = day(i);
    if (!d1) return std::nullopt;
    std::size_t j = d1->second;
    if (has(j) && text::iequals(lx_[j].text, "of")) ++j;
    if (auto m1 = month(j)) {
      if (auto y = year(m1->second)) return finish(y->first, m1->first, d1->first, y->second);
      if (auto k = range_separator(m1->second)) {
        if (auto d2 = day(*k)) {
          if (auto m2 = month(d2->second)) {
            if (auto y = year(m2->second)) return finish(y->first, m1->first, d1->first, y->second);
          }
        }
      }
      return anchored(m1->first, d1->first, m1->second);
    }
    if (auto k = range_separator(j)) {
      if (auto d2 = day(*k)) {
        if (auto m2 = month(d2->second)) {
          if (auto y = year(m2->second)) return finish(y->first, m2->first, d1->first, y->second);
          return anchored(m2->first, d1->first, m2->second);
        }
      }
    }
    return std::nullopt;
  }

  // May 31, 2018, May 19-21, 2018, April 28 - May 3, 2018
  std::optional<Match> month_first(std::size_t i) const {
    auto m1 = month(i);
    if (!m1) return std::nullopt;
    auto d1 = day(m1->second);
    if (!d1) return std::nullopt;
    if (auto y = year(d1->second)) return finish(y->first, m1->first, d1->first, y->second);
    if (auto k = range_separator(d1->second)) {
      std::size_t j = *k;
      if (auto m2 = month(j)) j = m2->second;
      if (auto d2 = day(j)) {
        if (auto y = year(d2->second)) return finish(y->first, m1->first, d1->first, y->second);
      }
    }
    return anchored(m1->first, d1->first, d1->second);
  }

  const std::vector<Lexeme>& lx_;
  std::optional<int> anchor_;
};

}  // namespace

std::vector<DateMention> find_dates(std::string_view text, std::optional<int> anchor_year) {
  auto lx = detail::lex(text);
  Scanner scan(lx, anchor_year);
  std::vector<DateMention> out;
  std::size_t i = 0;
  while (i < lx.size()) {
    if (auto m = scan.at(i)) {
      out.push_back({lx[i].begin, lx[m->next - 1].end, m->date});
      i = m->next;
    } else {
      ++i;
    }
  }
  return out;
}

std::optional<IsoDate> normalize_date(std::string_view raw, std::optional<int> anchor_year) {
  auto found = find_dates(raw, anchor_year);
  if (found.empty()) return std::nullopt;
  return found.front().date;
}

}  // namespace epix
