#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "epix/normalize.hpp"

namespace epix {

// A normalized value together with the text it came from.
template <class T>
struct Extracted {
  std::string raw;
  T value;

  bool operator==(const Extracted&) const = default;
};

struct RecordFlags {
  bool parse_failure = false;
  bool truncated_input = false;

  bool operator==(const RecordFlags&) const = default;
};

// The four fields one extractor produced for one document.
struct ExtractionRecord {
  std::string document_id;
  std::string extractor_id;
  std::optional<Extracted<CanonicalDisease>> disease;
  std::optional<Extracted<CountryCode>> country;
  std::optional<Extracted<IsoDate>> date;
  std::optional<Extracted<CaseCount>> count;
  RecordFlags flags;
  std::vector<std::string> warnings;

  std::optional<FieldValue> value(Field f) const;
  std::optional<std::string> raw(Field f) const;
  bool has(Field f) const { return value(f).has_value(); }

  // Throws std::invalid_argument when the alternative held by value does not
  // belong to f.
  void set(Field f, std::string raw, const FieldValue& value);
  void clear(Field f);

  bool operator==(const ExtractionRecord&) const = default;
};

// One JSON object, keys: document_id, extractor_id, disease, country, date,
// count, flags, warnings. Absent fields are null.
std::string record_to_json(const ExtractionRecord& r);
ExtractionRecord record_from_json(std::string_view line, std::size_t line_no = 0);

std::vector<ExtractionRecord> load_predictions(const std::filesystem::path& path);
void save_predictions(std::span<const ExtractionRecord> records, const std::filesystem::path& path);

}  // namespace epix
