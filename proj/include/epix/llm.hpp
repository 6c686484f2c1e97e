#pragma once

// Prompted extraction: messages -> model text -> JSON island -> record.

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "epix/corpus.hpp"
#include "epix/gazetteer.hpp"
#include "epix/normalize.hpp"
#include "epix/prompt.hpp"
#include "epix/record.hpp"
#include "epix/transport.hpp"

namespace epix {

using FieldMap = std::map<std::string, std::string>;

// The first balanced {...} region of text that parses as a JSON object.
// Keys are lowercased; string values are returned as-is, null becomes
// "None", anything else its compact JSON text. Throws NoIsland.
FieldMap extract_json_island(std::string_view text);

// Lookup tables used to normalize model answers.
struct Lexicon {
  const Gazetteer* gazetteer = &Gazetteer::bundled();
  const CountryTable* countries = &CountryTable::bundled();
};

struct FieldParseOptions {
  std::string absent_marker = "None";
  std::optional<int> anchor_year;  // for month-day answers without a year
};

// virus|disease -> disease, country -> country, date -> date,
// cases|count -> count. A missing key or the absent marker (any case) gives
// an absent field; a value that does not normalize is dropped with a
// warning "<field>: unparseable '<raw>'".
ExtractionRecord parse_fields(const FieldMap& fields, std::string_view document_id, std::string_view extractor_id,
                              const Lexicon& lexicon = {}, const FieldParseOptions& options = {});

struct LlmExtractor {
  std::string id;
  ModelProfile model;
  PromptTemplate prompt;
  Sampling sampling;
};

// build_messages -> complete -> extract_json_island -> parse_fields. A reply
// without a JSON object yields an all-absent record flagged parse_failure.
// Transport errors propagate.
ExtractionRecord extract_with_llm(const Document& doc, const LlmExtractor& extractor, Transport& transport,
                                  const Lexicon& lexicon = {});

}  // namespace epix
