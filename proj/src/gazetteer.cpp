#include "epix/gazetteer.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "epix/error.hpp"
#include "epix/normalize.hpp"
#include "epix/resources.hpp"
#include "epix/text.hpp"

namespace epix {

std::string_view to_string(EntityClass c) noexcept {
  return c == EntityClass::Disease ? "DISEASE" : "COUNTRY";
}

void Gazetteer::add(EntityClass cls, std::string_view canonical_id, std::string_view display_name,
                    std::string_view surface_form) {
  auto key_id = std::pair{static_cast<int>(cls), std::string(canonical_id)};
  auto found = ids_.find(key_id);
  std::size_t index;
  if (found == ids_.end()) {
    index = entries_.size();
    entries_.push_back({cls, std::string(canonical_id), std::string(display_name)});
    ids_.emplace(std::move(key_id), index);
    auto display_key = text::fold_key(display_name);
    if (!display_key.empty()) {
      surfaces_[class_index(cls)].try_emplace(display_key, index);
      max_tokens_ = std::max(max_tokens_, text::word_tokens(display_name).size());
    }
  } else {
    index = found->second;
  }
  auto key = text::fold_key(surface_form);
  if (key.empty()) return;
  surfaces_[class_index(cls)].try_emplace(key, index);
  max_tokens_ = std::max(max_tokens_, text::word_tokens(surface_form).size());
}

void Gazetteer::add_countries(const CountryTable& table) {
  for (const auto& row : table.rows()) add(EntityClass::Country, row.alpha3, row.display_name, row.alias);
}

Gazetteer Gazetteer::from_tsv(std::string_view content, std::string_view origin) {
  Gazetteer g;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= content.size()) {
    auto nl = content.find('\n', pos);
    auto line = content.substr(pos, nl == std::string_view::npos ? content.npos : nl - pos);
    pos = nl == std::string_view::npos ? content.size() + 1 : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (text::trim(line).empty() || line.front() == '#') continue;
    std::string_view cols[4];
    std::size_t n = 0, start = 0;
    while (n < 4) {
      auto tab = line.find('\t', start);
      cols[n++] = line.substr(start, tab == line.npos ? line.npos : tab - start);
      if (tab == line.npos) break;
      start = tab + 1;
    }
    if (n != 4 || line.find('\t', start) != line.npos) {
      throw SchemaError(std::string(origin) + ": expected 4 tab-separated columns", line_no);
    }
    auto cls_name = text::trim(cols[0]);
    EntityClass cls;
    if (text::iequals(cls_name, "DISEASE")) {
      cls = EntityClass::Disease;
    } else if (text::iequals(cls_name, "COUNTRY")) {
      cls = EntityClass::Country;
    } else {
      throw SchemaError(std::string(origin) + ": unknown class '" + std::string(cls_name) + "'", line_no);
    }
    auto id = text::trim(cols[1]);
    auto display = text::trim(cols[2]);
    auto surface = text::trim(cols[3]);
    if (id.empty() || display.empty() || text::fold_key(surface).empty()) {
      throw SchemaError(std::string(origin) + ": empty canonical id, display name or surface form", line_no);
    }
    g.add(cls, id, display, surface);
  }
  return g;
}

Gazetteer Gazetteer::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read gazetteer " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_tsv(ss.str(), path.string());
}

const Gazetteer& Gazetteer::bundled() {
  static const Gazetteer g = [] {
    auto out = from_tsv(*bundled_resource("gazetteer.tsv"), "gazetteer.tsv");
    out.add_countries(CountryTable::bundled());
    return out;
  }();
  return g;
}

const GazetteerEntry* Gazetteer::lookup(std::string_view surface, EntityClass cls) const {
  const auto& m = surfaces_[class_index(cls)];
  auto it = m.find(text::fold_key(surface));
  return it == m.end() ? nullptr : &entries_[it->second];
}

const GazetteerEntry* Gazetteer::find_id(EntityClass cls, std::string_view canonical_id) const {
  auto it = ids_.find(std::pair{static_cast<int>(cls), std::string(canonical_id)});
  return it == ids_.end() ? nullptr : &entries_[it->second];
}

}  // namespace epix
