#include "epix/llm.hpp"

#include <nlohmann/json.hpp>

#include "epix/annotator.hpp"
#include "epix/error.hpp"
#include "epix/text.hpp"

namespace epix {

using json = nlohmann::json;

namespace {

// Index one past the '}' closing the object opened at text[open], or npos.
std::size_t balanced_end(std::string_view text, std::size_t open) {
  int depth = 0;
  bool in_string = false;
  for (std::size_t i = open; i < text.size(); ++i) {
    char c = text[i];
    if (in_string) {
      if (c == '\\') {
        ++i;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '{') {
      ++depth;
    } else if (c == '}') {
      if (--depth == 0) return i + 1;
    }
  }
  return std::string_view::npos;
}

}  // namespace

FieldMap extract_json_island(std::string_view text) {
  for (auto open = text.find('{'); open != std::string_view::npos; open = text.find('{', open + 1)) {
    auto end = balanced_end(text, open);
    if (end == std::string_view::npos) continue;
    auto candidate = json::parse(text.substr(open, end - open), nullptr, false);
    if (candidate.is_discarded() || !candidate.is_object()) continue;
    FieldMap out;
    for (const auto& [k, v] : candidate.items()) {
      std::string value;
      if (v.is_string()) {
        value = v.get<std::string>();
      } else if (v.is_null()) {
        value = "None";
      } else {
        value = v.dump(-1, ' ', false, json::error_handler_t::replace);
      }
      out[text::to_lower(text::trim(k))] = std::move(value);
    }
    return out;
  }
  throw NoIsland("no JSON object found in model response");
}

namespace {

std::optional<std::string> pick(const FieldMap& fields, std::initializer_list<std::string_view> keys) {
  for (auto k : keys) {
    auto it = fields.find(std::string(k));
    if (it != fields.end()) return it->second;
  }
  return std::nullopt;
}

bool is_absent(std::string_view v, std::string_view marker) {
  auto t = text::trim(v);
  return t.empty() || text::iequals(t, marker) || text::iequals(t, "null");
}

// First gazetteer entity of class cls mentioned anywhere in raw.
const EntitySpan* first_entity(const std::vector<EntitySpan>& spans, EntityClass cls) {
  for (const auto& s : spans)
    if (s.entity_class == cls) return &s;
  return nullptr;
}

}  // namespace

ExtractionRecord parse_fields(const FieldMap& fields, std::string_view document_id, std::string_view extractor_id,
                              const Lexicon& lexicon, const FieldParseOptions& options) {
  ExtractionRecord r;
  r.document_id = std::string(document_id);
  r.extractor_id = std::string(extractor_id);

  auto unparseable = [&](Field f, const std::string& raw) {
    r.warnings.push_back(std::string(to_string(f)) + ": unparseable '" + raw + "'");
  };
  auto scan = [&](const std::string& raw) {
    Document probe;
    probe.body = raw;
    return annotate_entities(probe, *lexicon.gazetteer);
  };

  if (auto raw = pick(fields, {"virus", "disease"}); raw && !is_absent(*raw, options.absent_marker)) {
    auto value = normalize_disease(*raw, *lexicon.gazetteer);
    if (!value) {
      // "Nipah virus (NiV)", "an Ebola outbreak": fall back to a gazetteer scan.
      auto spans = scan(*raw);
      if (const auto* s = first_entity(spans, EntityClass::Disease)) value = CanonicalDisease{s->canonical_id, s->display_name};
    }
    if (value) {
      r.disease = Extracted<CanonicalDisease>{*raw, *value};
    } else {
      unparseable(Field::Disease, *raw);
    }
  }

  if (auto raw = pick(fields, {"country"}); raw && !is_absent(*raw, options.absent_marker)) {
    auto value = normalize_country(*raw, *lexicon.countries);
    if (!value) {
      auto spans = scan(*raw);
      if (const auto* s = first_entity(spans, EntityClass::Country)) {
        value = lexicon.countries->by_alpha3(s->canonical_id);
      }
    }
    if (value) {
      r.country = Extracted<CountryCode>{*raw, *value};
    } else {
      unparseable(Field::Country, *raw);
    }
  }

  if (auto raw = pick(fields, {"date"}); raw && !is_absent(*raw, options.absent_marker)) {
    if (auto value = normalize_date(*raw, options.anchor_year)) {
      r.date = Extracted<IsoDate>{*raw, *value};
    } else {
      unparseable(Field::Date, *raw);
    }
  }

  if (auto raw = pick(fields, {"cases", "count"}); raw && !is_absent(*raw, options.absent_marker)) {
    if (auto value = parse_count_expression(*raw)) {
      if (value->attribute == CountAttribute::Unknown) value->attribute = CountAttribute::Case;
      r.count = Extracted<CaseCount>{*raw, *value};
    } else {
      unparseable(Field::Count, *raw);
    }
  }
  return r;
}

ExtractionRecord extract_with_llm(const Document& doc, const LlmExtractor& extractor, Transport& transport,
                                  const Lexicon& lexicon) {
  auto prompt = build_messages(doc, extractor.prompt, extractor.model);
  auto reply = transport.complete(extractor.model, prompt.messages, extractor.sampling);

  FieldParseOptions options;
  options.absent_marker = extractor.prompt.absent_marker;
  if (doc.published) options.anchor_year = doc.published->year;

  ExtractionRecord r;
  try {
    r = parse_fields(extract_json_island(reply), doc.id, extractor.id, lexicon, options);
  } catch (const NoIsland&) {
    r = ExtractionRecord{};
    r.document_id = doc.id;
    r.extractor_id = extractor.id;
    r.flags.parse_failure = true;
    r.warnings.emplace_back("response contains no JSON object");
  }
  r.flags.truncated_input = prompt.truncated;
  return r;
}

}  // namespace epix
