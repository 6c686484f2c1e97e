#include <doctest.h>

#include <chrono>
#include <cstdio>

#include "epix/error.hpp"
#include "epix/gazetteer.hpp"
#include "epix/normalize.hpp"
#include "generators.hpp"

using namespace epix;

namespace {

const char* kMonths[] = {"January", "February", "March",     "April",   "May",      "June",
                         "July",    "August",   "September", "October", "November", "December"};

std::optional<IsoDate> d(std::string_view raw, std::optional<int> anchor = std::nullopt) {
  return normalize_date(raw, anchor);
}

IsoDate ymd(int y, int m, int dd) { return *IsoDate::make(y, m, dd); }

}  // namespace

TEST_SUITE("normalize.date") {
  TEST_CASE("documented examples") {
    CHECK(d("31 May 2018") == ymd(2018, 5, 31));
    CHECK(d("May 19-21, 2018") == ymd(2018, 5, 19));
    CHECK_FALSE(d("next Tuesday"));
  }

  TEST_CASE("each recognized shape") {
    CHECK(d("2018-05-31") == ymd(2018, 5, 31));
    CHECK(d("31/05/2018") == ymd(2018, 5, 31));
    CHECK(d("May 31, 2018") == ymd(2018, 5, 31));
    CHECK(d("May 31 2018") == ymd(2018, 5, 31));
    CHECK(d("31st of May, 2018") == ymd(2018, 5, 31));
    CHECK(d("1 Sept. 2019") == ymd(2019, 9, 1));
    CHECK(d("3 Jan 2020") == ymd(2020, 1, 3));
    CHECK(d("reported on 12 June 2018 by the ministry") == ymd(2018, 6, 12));
  }

  TEST_CASE("ranges resolve to their start") {
    CHECK(d("3 to 17 October 2022") == ymd(2022, 10, 3));
    CHECK(d("27 April - 3 July 2017") == ymd(2017, 4, 27));
    CHECK(d("28 February–2 March 2019") == ymd(2019, 2, 28));
    CHECK(d("May 30-June 2, 2018") == ymd(2018, 5, 30));
  }

  TEST_CASE("month-day without a year needs an anchor") {
    CHECK_FALSE(d("19 May"));
    CHECK(d("19 May", 2018) == ymd(2018, 5, 19));
    CHECK(d("on June 3 the team", 2021) == ymd(2021, 6, 3));
  }

  TEST_CASE("invalid calendar dates and non-dates are absent") {
    CHECK_FALSE(d("2018-02-30"));
    CHECK_FALSE(d("31 April 2018"));
    CHECK_FALSE(d("29 February 2019"));
    CHECK(d("29 February 2020") == ymd(2020, 2, 29));
    CHECK_FALSE(d("it may rain in 2018"));
    CHECK_FALSE(d(""));
    CHECK_FALSE(d("15 cases"));
    CHECK_FALSE(d("H5N1"));
  }

  TEST_CASE("IsoDate parse is strict") {
    CHECK(IsoDate::parse("2018-05-31") == ymd(2018, 5, 31));
    CHECK_FALSE(IsoDate::parse("2018-5-31"));
    CHECK_FALSE(IsoDate::parse("2018-05-31 "));
    CHECK_FALSE(IsoDate::parse("0000-01-01"));
    CHECK(ymd(7, 3, 9).to_string() == "0007-03-09");
  }

  TEST_CASE("validity agrees with std::chrono calendar") {
    using namespace std::chrono;
    testing::Gen g(11);
    for (int i = 0; i < 20000; ++i) {
      int y = g.range(1, 9999), m = g.range(1, 12), dd = g.range(1, 31);
      bool oracle = year_month_day{year{y}, month{static_cast<unsigned>(m)}, day{static_cast<unsigned>(dd)}}.ok();
      REQUIRE(IsoDate::valid(y, m, dd) == oracle);
    }
  }

  TEST_CASE("property: round-trip through its own string and textual forms") {
    testing::Gen g(20240531);
    for (int i = 0; i < 1000; ++i) {
      auto date = g.date();
      REQUIRE(normalize_date(date.to_string()) == date);
      if (date.year < 1000) continue;
      char buf[64];
      switch (g.range(0, 2)) {
        case 0: std::snprintf(buf, sizeof buf, "%d %s %d", date.day, kMonths[date.month - 1], date.year); break;
        case 1: std::snprintf(buf, sizeof buf, "%s %d, %d", kMonths[date.month - 1], date.day, date.year); break;
        default: std::snprintf(buf, sizeof buf, "%02d/%02d/%04d", date.day, date.month, date.year); break;
      }
      INFO(buf);
      REQUIRE(normalize_date(buf) == date);
    }
  }

  TEST_CASE("find_dates reports offsets of each mention") {
    std::string s = "From 1 August to 22 November 2017 and on 2018-01-05.";
    auto found = find_dates(s);
    REQUIRE(found.size() == 2);
    CHECK(found[0].date == ymd(2017, 8, 1));
    CHECK(s.substr(found[0].begin, found[0].end - found[0].begin) == "1 August to 22 November 2017");
    CHECK(found[1].date == ymd(2018, 1, 5));
  }
}

TEST_SUITE("normalize.country") {
  TEST_CASE("documented examples") {
    auto india = normalize_country("India");
    REQUIRE(india);
    CHECK(india->alpha3 == "IND");
    auto usa = normalize_country("usa");
    REQUIRE(usa);
    CHECK(usa->alpha3 == "USA");
    CHECK(usa->display_name == "United States of America");
    CHECK_FALSE(normalize_country("Atlantis"));
  }

  TEST_CASE("aliases and folding") {
    CHECK(normalize_country("UK")->alpha3 == "GBR");
    CHECK(normalize_country("DRC")->alpha3 == "COD");
    CHECK(normalize_country("democratic republic of the congo")->alpha3 == "COD");
    CHECK(normalize_country(" U.S.A. ")->alpha3 == "USA");
    CHECK(normalize_country("COD")->alpha3 == "COD");
    CHECK_FALSE(normalize_country("XYZ"));
    CHECK_FALSE(normalize_country(""));
  }

  TEST_CASE("table loading validates rows") {
    auto t = CountryTable::from_tsv("# comment\nFRA\tFrance\tFrance\nFRA\tFrance\tRépublique française\n");
    CHECK(t.country_count() == 1);
    CHECK(t.lookup("république française")->alpha3 == "FRA");
    CHECK_THROWS_AS(CountryTable::from_tsv("fr\tFrance\tFrance\n"), SchemaError);
    CHECK_THROWS_AS(CountryTable::from_tsv("FRA\tFrance\n"), SchemaError);
  }

  TEST_CASE("every bundled display name resolves to its own row") {
    const auto& t = CountryTable::bundled();
    CHECK(t.country_count() >= 249);
    for (const auto& row : t.rows()) {
      auto c = t.lookup(row.display_name);
      REQUIRE(c);
      CHECK(c->alpha3 == row.alpha3);
    }
  }
}

TEST_SUITE("normalize.disease") {
  static const Gazetteer& gaz() { return Gazetteer::bundled(); }

  TEST_CASE("documented examples") {
    auto nipah = normalize_disease("NIPAH Virus", gaz());
    REQUIRE(nipah);
    CHECK(nipah->display_name == "Nipah virus");
    auto evd = normalize_disease("EVD", gaz());
    REQUIRE(evd);
    CHECK(evd->display_name == "Ebola virus disease");
    CHECK_FALSE(normalize_disease("common cold", gaz()));
  }

  TEST_CASE("punctuation-insensitive") {
    CHECK(normalize_disease("ebola-virus disease!", gaz())->display_name == "Ebola virus disease");
    CHECK(normalize_disease("MERS-CoV", gaz())->canonical_id == normalize_disease("MERS", gaz())->canonical_id);
  }
}

TEST_SUITE("normalize.count") {
  TEST_CASE("documented examples") {
    auto a = parse_count_expression("about 15 cases");
    REQUIRE(a);
    CHECK(*a == CaseCount{15, true, CountAttribute::Case});
    auto b = parse_count_expression("thirteen deaths");
    REQUIRE(b);
    CHECK(*b == CaseCount{13, false, CountAttribute::Death});
    CHECK_FALSE(parse_count_expression("no numbers here"));
  }

  TEST_CASE("hedges, separators and number words") {
    CHECK(*parse_count_expression("more than 1,500 deaths") == CaseCount{1500, true, CountAttribute::Death});
    CHECK(*parse_count_expression("over 200 infections") == CaseCount{200, true, CountAttribute::Case});
    CHECK(*parse_count_expression("approximately 55 000 cases") == CaseCount{55000, true, CountAttribute::Case});
    CHECK(*parse_count_expression("one hundred and five") == CaseCount{105, false, CountAttribute::Unknown});
    CHECK(*parse_count_expression("twenty-one confirmed cases") == CaseCount{21, false, CountAttribute::Case});
    CHECK(*parse_count_expression("62") == CaseCount{62, false, CountAttribute::Unknown});
    CHECK(*parse_count_expression("0") == CaseCount{0, false, CountAttribute::Unknown});
  }

  TEST_CASE("numbers that are not counts") {
    CHECK_FALSE(parse_count_expression("H5N1"));
    CHECK_FALSE(parse_count_expression("COVID-19"));
    CHECK_FALSE(parse_count_expression("45%"));
    CHECK_FALSE(parse_count_expression("2.5"));
    CHECK_FALSE(parse_count_expression("2018-05-31"));
    CHECK_FALSE(parse_count_expression("in 2018"));
    CHECK(parse_count_expression("2018 cases")->value == 2018);
  }

  TEST_CASE("annotation scan requires keywords for number words") {
    auto found = find_counts("Fifteen people attended; 15 cases and 13 deaths were reported.");
    REQUIRE(found.size() == 2);
    CHECK(found[0].count == CaseCount{15, false, CountAttribute::Case});
    CHECK(found[1].count == CaseCount{13, false, CountAttribute::Death});
  }

  TEST_CASE("property: rendered counts parse back and are never negative") {
    testing::Gen g(99);
    const std::vector<std::string> hedges = {"", "about ", "approximately ", "more than ", "over ", "nearly "};
    const std::vector<std::pair<std::string, CountAttribute>> keywords = {
        {"", CountAttribute::Unknown}, {" cases", CountAttribute::Case}, {" infections", CountAttribute::Case},
        {" deaths", CountAttribute::Death}, {" fatalities", CountAttribute::Death}};
    for (int i = 0; i < 1000; ++i) {
      std::uint64_t v = g.u64() % 5'000'000;
      const auto& h = g.pick(hedges);
      const auto& [kw, attr] = g.pick(keywords);
      std::string digits = std::to_string(v);
      if (g.coin() && digits.size() > 3) {
        std::string grouped;
        int n = 0;
        for (auto it = digits.rbegin(); it != digits.rend(); ++it, ++n) {
          if (n && n % 3 == 0) grouped.insert(grouped.begin(), ',');
          grouped.insert(grouped.begin(), *it);
        }
        digits = grouped;
      }
      bool year_like = h.empty() && kw.empty() && v >= 1900 && v <= 2099 && digits.find(',') == std::string::npos;
      std::string raw = h + digits + kw;
      INFO(raw);
      auto c = parse_count_expression(raw);
      if (year_like) {
        REQUIRE_FALSE(c);
        continue;
      }
      REQUIRE(c);
      CHECK(c->value == v);
      CHECK(c->approximate == !h.empty());
      CHECK(c->attribute == attr);
    }
  }
}

TEST_SUITE("normalize.values_match") {
  static const Gazetteer& gaz() { return Gazetteer::bundled(); }

  TEST_CASE("documented examples") {
    FieldValue evd = *normalize_disease("EVD", gaz());
    FieldValue ebola = *normalize_disease("Ebola virus disease", gaz());
    CHECK(values_match(Field::Disease, evd, ebola));
    CHECK_FALSE(values_match(Field::Date, ymd(2018, 5, 31), ymd(2018, 5, 19)));
    CHECK(values_match(Field::Count, CaseCount{15, true, CountAttribute::Case},
                       CaseCount{15, false, CountAttribute::Case}));
  }

  TEST_CASE("values of another field never match") {
    CHECK_FALSE(values_match(Field::Date, CaseCount{15}, CaseCount{15}));
    CHECK_FALSE(values_match(Field::Count, ymd(2018, 1, 1), CaseCount{15}));
  }

  TEST_CASE("property: reflexive and symmetric for every field") {
    testing::Gen g(7);
    const auto& countries = CountryTable::bundled();
    for (int i = 0; i < 1000; ++i) {
      for (auto f : kAllFields) {
        auto a = *g.field_value(f, gaz(), countries);
        auto b = g.coin(0.3) ? a : *g.field_value(f, gaz(), countries);
        REQUIRE(values_match(f, a, a));
        REQUIRE(values_match(f, a, b) == values_match(f, b, a));
        REQUIRE(values_match(f, a, b) == (value_key(a) == value_key(b)));
      }
    }
  }
}
