#pragma once

// Canonical value types for the four extracted fields and the functions that
// turn raw strings (annotator spans, model answers, gold files) into them.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace epix {

class Gazetteer;

// A proleptic Gregorian calendar date. Always valid once constructed through
// make() or parse().
struct IsoDate {
  int year = 1970;
  int month = 1;
  int day = 1;

  static bool valid(int year, int month, int day) noexcept;
  static std::optional<IsoDate> make(int year, int month, int day) noexcept;
  // Strict "YYYY-MM-DD".
  static std::optional<IsoDate> parse(std::string_view iso) noexcept;

  std::string to_string() const;

  auto operator<=>(const IsoDate&) const = default;
};

struct CountryCode {
  std::string alpha3;
  std::string display_name;

  bool operator==(const CountryCode& o) const { return alpha3 == o.alpha3; }
};

struct CanonicalDisease {
  std::string canonical_id;
  std::string display_name;

  bool operator==(const CanonicalDisease& o) const { return canonical_id == o.canonical_id; }
};

enum class CountAttribute { Case, Death, Unknown };

struct CaseCount {
  std::uint64_t value = 0;
  bool approximate = false;
  CountAttribute attribute = CountAttribute::Unknown;

  bool operator==(const CaseCount&) const = default;
};

std::string_view to_string(CountAttribute a) noexcept;
std::optional<CountAttribute> count_attribute_from_string(std::string_view s) noexcept;

enum class Field { Disease, Country, Date, Count };

inline constexpr Field kAllFields[] = {Field::Disease, Field::Country, Field::Date, Field::Count};

std::string_view to_string(Field f) noexcept;
std::optional<Field> field_from_string(std::string_view s) noexcept;

using FieldValue = std::variant<CanonicalDisease, CountryCode, IsoDate, CaseCount>;

// ISO-3166 names plus a hand-kept alias table ("USA", "UK", "DRC", ...).
// Immutable after construction.
class CountryTable {
 public:
  struct Row {
    std::string alpha3;
    std::string display_name;
    std::string alias;
  };

  CountryTable() = default;
  // Tab-separated alpha3, display_name, alias. '#' lines and blank lines are
  // skipped. origin is used in error messages only.
  static CountryTable from_tsv(std::string_view content, std::string_view origin = "<memory>");
  static CountryTable load(const std::filesystem::path& path);
  static const CountryTable& bundled();

  // Alias or display name, case- and punctuation-insensitive.
  std::optional<CountryCode> lookup(std::string_view name) const;
  // Exact alpha-3 code, case-insensitive.
  std::optional<CountryCode> by_alpha3(std::string_view code) const;

  const std::vector<Row>& rows() const noexcept { return rows_; }
  std::size_t country_count() const noexcept { return by_code_.size(); }

 private:
  std::vector<Row> rows_;
  std::unordered_map<std::string, std::size_t> by_alias_;  // folded alias -> row
  std::unordered_map<std::string, std::size_t> by_code_;   // alpha3 -> first row
};

// Dates ----------------------------------------------------------------------

struct DateMention {
  std::size_t begin = 0;
  std::size_t end = 0;
  IsoDate date;
};

// Every resolvable date mention in text, left to right and non-overlapping.
// Recognized: YYYY-MM-DD, DD/MM/YYYY, DD Month YYYY, Month DD, YYYY, and day
// ranges of the last two shapes ("May 19-21, 2018", "3 to 17 October 2022"),
// which resolve to the range start. Day-month mentions without a year use
// anchor_year and are skipped when it is absent.
std::vector<DateMention> find_dates(std::string_view text,
                                    std::optional<int> anchor_year = std::nullopt);

// First date found in raw, if any. Never throws.
std::optional<IsoDate> normalize_date(std::string_view raw,
                                      std::optional<int> anchor_year = std::nullopt);

// Countries and diseases -----------------------------------------------------

std::optional<CountryCode> normalize_country(std::string_view raw,
                                             const CountryTable& table = CountryTable::bundled());

std::optional<CanonicalDisease> normalize_disease(std::string_view raw, const Gazetteer& gazetteer);

// Counts ---------------------------------------------------------------------

struct CountMention {
  std::size_t begin = 0;
  std::size_t end = 0;
  CaseCount count;
};

struct CountScanOptions {
  // Number words ("thirteen") only count when an attribute keyword follows.
  // Digits always count.
  bool number_words_need_keyword = true;
  // Spans the scanner must not take numbers from (typically date mentions).
  std::vector<std::pair<std::size_t, std::size_t>> excluded;
};

// Every maximal count expression in text: optional hedge ("about", "more
// than", ...), a number in digits or English words up to 999, up to three
// qualifier words, and an optional attribute keyword.
std::vector<CountMention> find_counts(std::string_view text, const CountScanOptions& options = {});

// First count expression in raw. Number words are accepted without a keyword
// and date-shaped numbers are ignored.
std::optional<CaseCount> parse_count_expression(std::string_view raw);

// Equality -------------------------------------------------------------------

// disease: canonical id; country: alpha-3; date: exact; count: integer value
// only (approximate flag and attribute ignored). A value whose alternative
// does not belong to field never matches.
bool values_match(Field field, const FieldValue& a, const FieldValue& b) noexcept;

// Renders the comparable part of a value ("ebola-virus-disease", "IND",
// "2018-05-31", "15").
std::string value_key(const FieldValue& v);

}  // namespace epix
