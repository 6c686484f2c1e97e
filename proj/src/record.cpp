#include "epix/record.hpp"

#include <nlohmann/json.hpp>

#include <stdexcept>

#include "epix/error.hpp"
#include "epix/io.hpp"
#include "epix/text.hpp"

namespace epix {

using ordered_json = nlohmann::ordered_json;
using json = nlohmann::json;

std::optional<FieldValue> ExtractionRecord::value(Field f) const {
  switch (f) {
    case Field::Disease: return disease ? std::optional<FieldValue>(disease->value) : std::nullopt;
    case Field::Country: return country ? std::optional<FieldValue>(country->value) : std::nullopt;
    case Field::Date: return date ? std::optional<FieldValue>(date->value) : std::nullopt;
    case Field::Count: return count ? std::optional<FieldValue>(count->value) : std::nullopt;
  }
  return std::nullopt;
}

std::optional<std::string> ExtractionRecord::raw(Field f) const {
  switch (f) {
    case Field::Disease: return disease ? std::optional(disease->raw) : std::nullopt;
    case Field::Country: return country ? std::optional(country->raw) : std::nullopt;
    case Field::Date: return date ? std::optional(date->raw) : std::nullopt;
    case Field::Count: return count ? std::optional(count->raw) : std::nullopt;
  }
  return std::nullopt;
}

namespace {

template <class T>
void assign(std::optional<Extracted<T>>& slot, std::string raw, const FieldValue& v, Field f) {
  const T* typed = std::get_if<T>(&v);
  if (!typed) throw std::invalid_argument("value does not belong to field " + std::string(to_string(f)));
  slot = Extracted<T>{std::move(raw), *typed};
}

}  // namespace

void ExtractionRecord::set(Field f, std::string raw_text, const FieldValue& v) {
  switch (f) {
    case Field::Disease: assign(disease, std::move(raw_text), v, f); break;
    case Field::Country: assign(country, std::move(raw_text), v, f); break;
    case Field::Date: assign(date, std::move(raw_text), v, f); break;
    case Field::Count: assign(count, std::move(raw_text), v, f); break;
  }
}

void ExtractionRecord::clear(Field f) {
  switch (f) {
    case Field::Disease: disease.reset(); break;
    case Field::Country: country.reset(); break;
    case Field::Date: date.reset(); break;
    case Field::Count: count.reset(); break;
  }
}

std::string record_to_json(const ExtractionRecord& r) {
  ordered_json j;
  j["document_id"] = r.document_id;
  j["extractor_id"] = r.extractor_id;
  if (r.disease) {
    j["disease"] = {{"raw", r.disease->raw},
                    {"canonical_id", r.disease->value.canonical_id},
                    {"display_name", r.disease->value.display_name}};
  } else {
    j["disease"] = nullptr;
  }
  if (r.country) {
    j["country"] = {{"raw", r.country->raw},
                    {"alpha3", r.country->value.alpha3},
                    {"display_name", r.country->value.display_name}};
  } else {
    j["country"] = nullptr;
  }
  if (r.date) {
    j["date"] = {{"raw", r.date->raw}, {"value", r.date->value.to_string()}};
  } else {
    j["date"] = nullptr;
  }
  if (r.count) {
    j["count"] = {{"raw", r.count->raw},
                  {"value", r.count->value.value},
                  {"approximate", r.count->value.approximate},
                  {"attribute", std::string(to_string(r.count->value.attribute))}};
  } else {
    j["count"] = nullptr;
  }
  j["flags"] = {{"parse_failure", r.flags.parse_failure}, {"truncated_input", r.flags.truncated_input}};
  j["warnings"] = r.warnings;
  return j.dump(-1, ' ', false, json::error_handler_t::replace);
}

namespace {

std::string str(const json& obj, const char* key, std::size_t line_no) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) throw SchemaError(std::string("'") + key + "' must be a string", line_no);
  return it->get<std::string>();
}

const json* sub(const json& obj, const char* key, std::size_t line_no) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return nullptr;
  if (!it->is_object()) throw SchemaError(std::string("'") + key + "' must be an object or null", line_no);
  return &*it;
}

}  // namespace

ExtractionRecord record_from_json(std::string_view line, std::size_t line_no) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw SchemaError("expected a JSON object", line_no);
  ExtractionRecord r;
  r.document_id = str(j, "document_id", line_no);
  r.extractor_id = str(j, "extractor_id", line_no);
  if (r.document_id.empty() || r.extractor_id.empty()) throw SchemaError("empty document_id or extractor_id", line_no);
  if (const auto* d = sub(j, "disease", line_no)) {
    r.disease = Extracted<CanonicalDisease>{str(*d, "raw", line_no),
                                            {str(*d, "canonical_id", line_no), str(*d, "display_name", line_no)}};
  }
  if (const auto* c = sub(j, "country", line_no)) {
    r.country = Extracted<CountryCode>{str(*c, "raw", line_no),
                                       {str(*c, "alpha3", line_no), str(*c, "display_name", line_no)}};
  }
  if (const auto* d = sub(j, "date", line_no)) {
    auto v = IsoDate::parse(str(*d, "value", line_no));
    if (!v) throw SchemaError("'date.value' is not a valid date", line_no);
    r.date = Extracted<IsoDate>{str(*d, "raw", line_no), *v};
  }
  if (const auto* c = sub(j, "count", line_no)) {
    auto v = c->find("value");
    if (v == c->end() || !v->is_number_unsigned()) throw SchemaError("'count.value' must be a non-negative integer", line_no);
    auto attr = count_attribute_from_string(str(*c, "attribute", line_no));
    if (!attr) throw SchemaError("unknown count attribute", line_no);
    auto approx = c->find("approximate");
    CaseCount cc{v->get<std::uint64_t>(), approx != c->end() && approx->is_boolean() && approx->get<bool>(), *attr};
    r.count = Extracted<CaseCount>{str(*c, "raw", line_no), cc};
  }
  if (const auto* f = sub(j, "flags", line_no)) {
    r.flags.parse_failure = f->value("parse_failure", false);
    r.flags.truncated_input = f->value("truncated_input", false);
  }
  if (auto w = j.find("warnings"); w != j.end() && w->is_array()) {
    for (const auto& x : *w)
      if (x.is_string()) r.warnings.push_back(x.get<std::string>());
  }
  return r;
}

std::vector<ExtractionRecord> load_predictions(const std::filesystem::path& path) {
  auto content = io::read_file(path);
  std::vector<ExtractionRecord> out;
  io::for_each_line(content, [&](std::string_view line, std::size_t line_no) {
    if (text::trim(line).empty()) return;
    out.push_back(record_from_json(line, line_no));
  });
  return out;
}

void save_predictions(std::span<const ExtractionRecord> records, const std::filesystem::path& path) {
  std::string out;
  for (const auto& r : records) {
    out += record_to_json(r);
    out.push_back('\n');
  }
  io::write_file_atomic(path, out);
}

}  // namespace epix
