#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace epix {

class CountryTable;

enum class EntityClass { Disease, Country };

std::string_view to_string(EntityClass c) noexcept;

struct GazetteerEntry {
  EntityClass entity_class = EntityClass::Disease;
  std::string canonical_id;
  std::string display_name;
};

// Flat surface-form table: every synonym of an entity resolves to one
// canonical id. Surface forms are matched on their folded key (lowercase word
// tokens), so lookups ignore case and punctuation.
//
// File format: UTF-8, tab-separated columns class, canonical_id,
// display_name, surface_form; one surface form per line; '#' comments.
class Gazetteer {
 public:
  Gazetteer() = default;

  static Gazetteer from_tsv(std::string_view content, std::string_view origin = "<memory>");
  static Gazetteer load(const std::filesystem::path& path);
  // Bundled disease table merged with the bundled country table.
  static const Gazetteer& bundled();

  // Registers a surface form. The display name is registered as a surface form
  // of its own entry the first time the entry is seen. A surface form already
  // bound to another entity of the same class keeps its first binding.
  void add(EntityClass cls, std::string_view canonical_id, std::string_view display_name,
           std::string_view surface_form);
  // Adds one COUNTRY entry per alpha-3 code, canonical id = alpha-3.
  void add_countries(const CountryTable& table);

  const GazetteerEntry* lookup(std::string_view surface, EntityClass cls) const;
  const GazetteerEntry* find_id(EntityClass cls, std::string_view canonical_id) const;

  // Longest surface form, in word tokens, across both classes.
  std::size_t max_surface_tokens() const noexcept { return max_tokens_; }
  std::size_t entry_count() const noexcept { return entries_.size(); }
  const std::vector<GazetteerEntry>& entries() const noexcept { return entries_; }

 private:
  std::size_t class_index(EntityClass c) const noexcept { return c == EntityClass::Disease ? 0 : 1; }

  std::vector<GazetteerEntry> entries_;
  std::unordered_map<std::string, std::size_t> surfaces_[2];
  std::map<std::pair<int, std::string>, std::size_t, std::less<>> ids_;
  std::size_t max_tokens_ = 0;
};

}  // namespace epix
