#include "epix/normalize.hpp"

#include <algorithm>

#include "epix/gazetteer.hpp"
#include "epix/text.hpp"

namespace epix {

std::string_view to_string(Field f) noexcept {
  switch (f) {
    case Field::Disease: return "disease";
    case Field::Country: return "country";
    case Field::Date: return "date";
    case Field::Count: return "count";
  }
  return "disease";
}

std::optional<Field> field_from_string(std::string_view s) noexcept {
  for (auto f : kAllFields)
    if (text::iequals(s, to_string(f))) return f;
  return std::nullopt;
}

std::optional<CountryCode> normalize_country(std::string_view raw, const CountryTable& table) {
  if (auto c = table.lookup(raw)) return c;
  // Bare alpha-3 codes are accepted only in uppercase; "can" is not Canada.
  auto t = text::trim(raw);
  if (t.size() == 3 && std::all_of(t.begin(), t.end(), [](char c) { return c >= 'A' && c <= 'Z'; })) {
    return table.by_alpha3(t);
  }
  return std::nullopt;
}

std::optional<CanonicalDisease> normalize_disease(std::string_view raw, const Gazetteer& gazetteer) {
  const auto* e = gazetteer.lookup(raw, EntityClass::Disease);
  if (!e) return std::nullopt;
  return CanonicalDisease{e->canonical_id, e->display_name};
}

bool values_match(Field field, const FieldValue& a, const FieldValue& b) noexcept {
  switch (field) {
    case Field::Disease: {
      auto* x = std::get_if<CanonicalDisease>(&a);
      auto* y = std::get_if<CanonicalDisease>(&b);
      return x && y && x->canonical_id == y->canonical_id;
    }
    case Field::Country: {
      auto* x = std::get_if<CountryCode>(&a);
      auto* y = std::get_if<CountryCode>(&b);
      return x && y && x->alpha3 == y->alpha3;
    }
    case Field::Date: {
      auto* x = std::get_if<IsoDate>(&a);
      auto* y = std::get_if<IsoDate>(&b);
      return x && y && *x == *y;
    }
    case Field::Count: {
      auto* x = std::get_if<CaseCount>(&a);
      auto* y = std::get_if<CaseCount>(&b);
      return x && y && x->value == y->value;
    }
  }
  return false;
}

std::string value_key(const FieldValue& v) {
  struct Visitor {
    std::string operator()(const CanonicalDisease& d) const { return d.canonical_id; }
    std::string operator()(const CountryCode& c) const { return c.alpha3; }
    std::string operator()(const IsoDate& d) const { return d.to_string(); }
    std::string operator()(const CaseCount& c) const { return std::to_string(c.value); }
  };
  return std::visit(Visitor{}, v);
}

}  // namespace epix
