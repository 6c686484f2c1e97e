#include <doctest.h>

#include "ensemble_props.hpp"
#include "epix/ensemble.hpp"
#include "epix/error.hpp"

using namespace epix;

namespace {

std::optional<FieldValue> dz(const char* id) { return CanonicalDisease{id, id}; }

EnsembleConfig three(TieBreak tb = TieBreak::PriorityOrder) {
  EnsembleConfig c;
  c.id = "ens";
  c.members = {"m1", "m2", "m3"};
  c.policy.tie_break = tb;
  c.policy.priority = c.members;
  return c;
}

ExtractionRecord rec(std::string member, const char* disease, const char* date, std::uint64_t count) {
  ExtractionRecord r;
  r.document_id = "d1";
  r.extractor_id = std::move(member);
  if (disease) r.set(Field::Disease, disease, *dz(disease));
  if (date) r.set(Field::Date, date, *IsoDate::parse(date));
  r.set(Field::Count, std::to_string(count), CaseCount{count, false, CountAttribute::Case});
  return r;
}

}  // namespace

TEST_SUITE("ensemble") {
  TEST_CASE("vote examples") {
    using V = std::vector<std::optional<FieldValue>>;
    V c = {dz("ebola"), dz("ebola"), std::nullopt};
    CHECK(testing::key_of(vote_field(Field::Disease, c, three())) == "ebola");
    c = {std::nullopt, std::nullopt, dz("zika")};
    CHECK_FALSE(vote_field(Field::Disease, c, three()));
    c = {dz("ebola"), dz("zika"), std::nullopt};
    CHECK(testing::key_of(vote_field(Field::Disease, c, three())) == "ebola");
    CHECK_FALSE(vote_field(Field::Disease, c, three(TieBreak::Abstain)));

    auto reversed = three();
    reversed.policy.priority = {"m3", "m2", "m1"};
    c = {dz("ebola"), dz("zika"), dz("cholera")};
    CHECK(testing::key_of(vote_field(Field::Disease, c, reversed)) == "cholera");
  }

  TEST_CASE("vote reports the agreeing group and its representative") {
    std::vector<std::optional<FieldValue>> c = {dz("zika"), dz("ebola"), dz("ebola")};
    auto cfg = three();
    cfg.policy.priority = {"m3", "m1", "m2"};
    auto r = vote(Field::Disease, c, cfg);
    CHECK(r.group == std::vector<std::size_t>{1, 2});
    CHECK(r.representative == 2u);
  }

  TEST_CASE("counts agree on value regardless of flags") {
    std::vector<std::optional<FieldValue>> c = {CaseCount{15, true, CountAttribute::Case},
                                                CaseCount{15, false, CountAttribute::Death},
                                                CaseCount{16, false, CountAttribute::Case}};
    auto v = vote_field(Field::Count, c, three());
    REQUIRE(v);
    CHECK(std::get<CaseCount>(*v).value == 15);
  }

  TEST_CASE("configuration errors") {
    std::vector<std::optional<FieldValue>> two = {dz("a"), dz("a")};
    CHECK_THROWS_AS(vote_field(Field::Disease, two, three()), ConfigError);

    auto c = three();
    c.members = {"m1"};
    c.policy.priority.clear();
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = three();
    c.members = {"m1", "m1", "m2"};
    c.policy.priority.clear();
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = three();
    c.policy.min_agreement = 4;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = three();
    c.policy.min_agreement = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = three();
    c.policy.priority = {"m1", "m2"};
    CHECK_THROWS_AS(c.validate(), ConfigError);
    CHECK_NOTHROW(three().validate());
    CHECK_NOTHROW(EnsembleConfig::open_ensemble().validate());
  }

  TEST_CASE("open ensemble defaults") {
    auto c = EnsembleConfig::open_ensemble();
    CHECK(c.members == std::vector<std::string>{"llama-2-70b-chat", "mistral-7b-openorca", "zephyr-7b-alpha"});
    CHECK(c.policy.min_agreement == 2);
    CHECK(c.policy.tie_break == TieBreak::PriorityOrder);
  }

  TEST_CASE("ensemble_records votes per field") {
    std::vector<ExtractionRecord> rs = {rec("m1", "ebola", "2018-05-30", 10), rec("m2", "ebola", "2018-05-31", 12),
                                        rec("m3", "zika", "2018-05-31", 12)};
    rs[2].set(Field::Date, "31 May 2018", *IsoDate::parse("2018-05-31"));
    auto e = ensemble_records(rs, three());
    CHECK(e.extractor_id == "ens");
    CHECK(e.document_id == "d1");
    CHECK(testing::key_of(e.value(Field::Disease)) == "ebola");
    CHECK(testing::key_of(e.value(Field::Date)) == "2018-05-31");
    CHECK(e.raw(Field::Date) == "2018-05-31");  // m2 outranks m3
    CHECK(testing::key_of(e.value(Field::Count)) == "12");
    CHECK_FALSE(e.has(Field::Country));
  }

  TEST_CASE("ensemble_records: full disagreement under abstain, records in any order") {
    std::vector<ExtractionRecord> rs = {rec("m3", "cholera", nullptr, 1), rec("m1", "ebola", nullptr, 1),
                                        rec("m2", "zika", nullptr, 1)};
    auto e = ensemble_records(rs, three(TieBreak::Abstain));
    CHECK_FALSE(e.has(Field::Disease));
    CHECK(testing::key_of(e.value(Field::Count)) == "1");
    e = ensemble_records(rs, three());
    CHECK(testing::key_of(e.value(Field::Disease)) == "ebola");
  }

  TEST_CASE("ensemble_records member errors") {
    std::vector<ExtractionRecord> rs = {rec("m1", "a", nullptr, 1), rec("m2", "a", nullptr, 1)};
    CHECK_THROWS_AS(ensemble_records(rs, three()), ConfigError);
    rs.push_back(rec("m4", "a", nullptr, 1));
    CHECK_THROWS_AS(ensemble_records(rs, three()), ConfigError);
    rs.back() = rec("m1", "a", nullptr, 1);
    CHECK_THROWS_AS(ensemble_records(rs, three()), ConfigError);
    rs.back() = rec("m3", "a", nullptr, 1);
    rs.back().document_id = "d2";
    CHECK_THROWS_AS(ensemble_records(rs, three()), ConfigError);
  }

  TEST_CASE("property: vote agrees with the reference voter") {
    auto r = testing::prop_matches_reference(0xE1, 3000);
    INFO(r.first_failure);
    CHECK(r.ok());
  }

  TEST_CASE("property: unanimity, permutation, idempotence, stable majority") {
    const auto& gaz = Gazetteer::bundled();
    const auto& ct = CountryTable::bundled();
    for (auto r : {testing::prop_unanimity(0xE2, 1000), testing::prop_abstain_permutation(0xE3, 1000),
                   testing::prop_idempotence(0xE4, 1000, gaz, ct), testing::prop_majority_stable(0xE5, 1000)}) {
      INFO(r.first_failure);
      CHECK(r.ok());
      CHECK(r.cases == 1000);
    }
  }
}
