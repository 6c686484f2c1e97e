#include "epix/annotator.hpp"

#include <algorithm>
#include <map>

#include "epix/text.hpp"

namespace epix {

namespace {

// Characters allowed between two tokens of one surface form: "A(H5N1)",
// "Hand, foot and mouth disease", "Legionnaires' disease".
bool joinable_gap(std::string_view gap) {
  if (gap.size() > 3) return false;
  return std::all_of(gap.begin(), gap.end(), [](char c) {
    return c == ' ' || c == '\t' || c == '-' || c == '\'' || c == '.' || c == ',' || c == '(' || c == ')' ||
           c == '/';
  });
}

std::optional<int> anchor_year(const Document& doc) {
  if (doc.published) return doc.published->year;
  return std::nullopt;
}

}  // namespace

std::vector<EntitySpan> annotate_entities(const Document& doc, const Gazetteer& gazetteer) {
  std::vector<EntitySpan> spans;
  const std::string_view body = doc.body;
  auto tokens = text::word_tokens(body);
  std::vector<std::string> lowered;
  lowered.reserve(tokens.size());
  for (const auto& t : tokens) lowered.push_back(text::to_lower(t.text));

  const std::size_t max_n = std::max<std::size_t>(1, gazetteer.max_surface_tokens());
  std::size_t i = 0;
  while (i < tokens.size()) {
    std::size_t reach = 1;  // how many tokens can be joined starting at i
    while (reach < max_n && i + reach < tokens.size() &&
           joinable_gap(body.substr(tokens[i + reach - 1].end, tokens[i + reach].begin - tokens[i + reach - 1].end))) {
      ++reach;
    }
    bool matched = false;
    for (std::size_t n = reach; n >= 1 && !matched; --n) {
      std::string key = lowered[i];
      for (std::size_t k = 1; k < n; ++k) {
        key.push_back(' ');
        key += lowered[i + k];
      }
      for (auto cls : {EntityClass::Disease, EntityClass::Country}) {
        const auto* e = gazetteer.lookup(key, cls);
        if (!e) continue;
        EntitySpan s;
        s.entity_class = cls;
        s.begin = tokens[i].begin;
        s.end = tokens[i + n - 1].end;
        s.surface = std::string(body.substr(s.begin, s.end - s.begin));
        s.canonical_id = e->canonical_id;
        s.display_name = e->display_name;
        spans.push_back(std::move(s));
        i += n;
        matched = true;
        break;
      }
    }
    if (!matched) ++i;
  }
  return spans;
}

std::vector<DateMention> annotate_dates(const Document& doc) { return find_dates(doc.body, anchor_year(doc)); }

std::vector<CountMention> annotate_counts(const Document& doc) {
  CountScanOptions opt;
  for (const auto& d : annotate_dates(doc)) opt.excluded.emplace_back(d.begin, d.end);
  return find_counts(doc.body, opt);
}

namespace {

struct Tally {
  std::size_t mentions = 0;
  std::size_t first = 0;
  std::size_t representative = 0;  // index into the input span list
  int rank = 0;                    // lower is preferred; counts only
};

// Winner: most mentions, then lowest rank, then earliest first offset.
template <class Key>
const Tally* pick(const std::map<Key, Tally>& tallies) {
  const Tally* best = nullptr;
  for (const auto& [key, t] : tallies) {
    if (!best || t.mentions > best->mentions ||
        (t.mentions == best->mentions &&
         (t.rank < best->rank || (t.rank == best->rank && t.first < best->first)))) {
      best = &t;
    }
  }
  return best;
}

int attribute_rank(CountAttribute a) {
  switch (a) {
    case CountAttribute::Case: return 0;
    case CountAttribute::Death: return 1;
    case CountAttribute::Unknown: return 2;
  }
  return 2;
}

std::string slice(std::string_view body, std::size_t b, std::size_t e) {
  if (body.empty() || e > body.size() || b >= e) return {};
  return std::string(body.substr(b, e - b));
}

}  // namespace

KeyEntitySet filter_key_entities(std::span<const EntitySpan> entities, std::span<const CountMention> counts,
                                 std::span<const DateMention> dates, std::string_view body) {
  KeyEntitySet out;

  for (auto cls : {EntityClass::Disease, EntityClass::Country}) {
    std::map<std::string, Tally> tallies;
    for (std::size_t i = 0; i < entities.size(); ++i) {
      const auto& s = entities[i];
      if (s.entity_class != cls) continue;
      auto [it, fresh] = tallies.try_emplace(s.canonical_id, Tally{0, s.begin, i, 0});
      auto& t = it->second;
      ++t.mentions;
      if (s.begin < t.first) {
        t.first = s.begin;
        t.representative = i;
      }
    }
    if (const auto* w = pick(tallies)) {
      const auto& s = entities[w->representative];
      if (cls == EntityClass::Disease) {
        out.disease = KeyEntity<CanonicalDisease>{{s.canonical_id, s.display_name}, s.surface, w->mentions, w->first};
      } else {
        out.country = KeyEntity<CountryCode>{{s.canonical_id, s.display_name}, s.surface, w->mentions, w->first};
      }
    }
  }

  {
    std::map<IsoDate, Tally> tallies;
    for (std::size_t i = 0; i < dates.size(); ++i) {
      auto [it, fresh] = tallies.try_emplace(dates[i].date, Tally{0, dates[i].begin, i, 0});
      auto& t = it->second;
      ++t.mentions;
      if (dates[i].begin < t.first) {
        t.first = dates[i].begin;
        t.representative = i;
      }
    }
    if (const auto* w = pick(tallies)) {
      const auto& d = dates[w->representative];
      out.date = KeyEntity<IsoDate>{d.date, slice(body, d.begin, d.end), w->mentions, w->first};
    }
  }

  {
    std::map<std::uint64_t, Tally> tallies;
    for (std::size_t i = 0; i < counts.size(); ++i) {
      const auto& c = counts[i];
      int rank = attribute_rank(c.count.attribute);
      auto [it, fresh] = tallies.try_emplace(c.count.value, Tally{0, c.begin, i, rank});
      auto& t = it->second;
      ++t.mentions;
      t.first = std::min(t.first, c.begin);
      // The representative mention carries the preferred attribute, earliest first.
      const auto& rep = counts[t.representative];
      if (rank < t.rank || (rank == t.rank && c.begin < rep.begin)) {
        t.rank = rank;
        t.representative = i;
      }
    }
    if (const auto* w = pick(tallies)) {
      const auto& c = counts[w->representative];
      out.count = KeyEntity<CaseCount>{c.count, slice(body, c.begin, c.end), w->mentions, w->first};
    }
  }
  return out;
}

ExtractionRecord extract_rule_based(const Document& doc, const Gazetteer& gazetteer, std::string_view extractor_id) {
  auto entities = annotate_entities(doc, gazetteer);
  auto dates = annotate_dates(doc);
  CountScanOptions opt;
  for (const auto& d : dates) opt.excluded.emplace_back(d.begin, d.end);
  auto counts = find_counts(doc.body, opt);
  auto key = filter_key_entities(entities, counts, dates, doc.body);

  ExtractionRecord r;
  r.document_id = doc.id;
  r.extractor_id = std::string(extractor_id);
  if (key.disease) r.disease = Extracted<CanonicalDisease>{key.disease->surface, key.disease->value};
  if (key.country) r.country = Extracted<CountryCode>{key.country->surface, key.country->value};
  if (key.date) r.date = Extracted<IsoDate>{key.date->surface, key.date->value};
  if (key.count) r.count = Extracted<CaseCount>{key.count->surface, key.count->value};
  return r;
}

}  // namespace epix
