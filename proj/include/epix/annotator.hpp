#pragma once

// Rule-based baseline extractor: gazetteer keyword spans, count spans and
// date spans over a document body, reduced to one key entity per class by
// mention frequency.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "epix/corpus.hpp"
#include "epix/gazetteer.hpp"
#include "epix/normalize.hpp"
#include "epix/record.hpp"

namespace epix {

// [begin, end) are byte offsets into Document::body and
// body.substr(begin, end - begin) == surface.
struct EntitySpan {
  EntityClass entity_class = EntityClass::Disease;
  std::size_t begin = 0;
  std::size_t end = 0;
  std::string surface;
  std::string canonical_id;
  std::string display_name;
};

template <class T>
struct KeyEntity {
  T value;
  std::string surface;       // text of the representative mention
  std::size_t mentions = 0;  // mentions sharing the winning canonical value
  std::size_t first_offset = 0;
};

struct KeyEntitySet {
  std::optional<KeyEntity<CanonicalDisease>> disease;
  std::optional<KeyEntity<CountryCode>> country;
  std::optional<KeyEntity<IsoDate>> date;
  std::optional<KeyEntity<CaseCount>> count;
};

// Longest match wins; a shorter surface form overlapping a longer match is
// suppressed. Matches never cross a line break.
std::vector<EntitySpan> annotate_entities(const Document& doc, const Gazetteer& gazetteer);

// Count expressions in the body. Numbers inside date mentions are skipped.
std::vector<CountMention> annotate_counts(const Document& doc);

// Date mentions in the body; day-month mentions take the publication year.
std::vector<DateMention> annotate_dates(const Document& doc);

// Per class, the canonical value with the most mentions wins. Ties go to the
// value mentioned first. For counts, at equal frequency CASE beats DEATH
// beats UNKNOWN before the first-mention rule applies.
KeyEntitySet filter_key_entities(std::span<const EntitySpan> entities, std::span<const CountMention> counts,
                                 std::span<const DateMention> dates, std::string_view body = {});

inline constexpr std::string_view kRuleBasedExtractorId = "epitator";

ExtractionRecord extract_rule_based(const Document& doc, const Gazetteer& gazetteer,
                                    std::string_view extractor_id = kRuleBasedExtractorId);

}  // namespace epix
