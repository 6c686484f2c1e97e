#include <algorithm>
#include <fstream>
#include <sstream>

#include "epix/error.hpp"
#include "epix/normalize.hpp"
#include "epix/resources.hpp"
#include "epix/text.hpp"

namespace epix {

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> cols;
  std::size_t start = 0;
  while (true) {
    auto tab = line.find('\t', start);
    cols.push_back(line.substr(start, tab == std::string_view::npos ? line.npos : tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return cols;
}

}  // namespace

CountryTable CountryTable::from_tsv(std::string_view content, std::string_view origin) {
  CountryTable t;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= content.size()) {
    auto nl = content.find('\n', pos);
    auto line = content.substr(pos, nl == std::string_view::npos ? content.npos : nl - pos);
    pos = nl == std::string_view::npos ? content.size() + 1 : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (text::trim(line).empty() || line.front() == '#') continue;
    auto cols = split_tabs(line);
    if (cols.size() != 3) {
      throw SchemaError(std::string(origin) + ": expected 3 tab-separated columns", line_no);
    }
    auto code = text::trim(cols[0]);
    auto display = text::trim(cols[1]);
    auto alias = text::trim(cols[2]);
    if (code.size() != 3 || !std::all_of(code.begin(), code.end(), [](char c) { return c >= 'A' && c <= 'Z'; })) {
      throw SchemaError(std::string(origin) + ": alpha3 must be three uppercase letters", line_no);
    }
    if (display.empty() || alias.empty()) {
      throw SchemaError(std::string(origin) + ": empty display name or alias", line_no);
    }
    std::size_t row = t.rows_.size();
    t.rows_.push_back({std::string(code), std::string(display), std::string(alias)});
    t.by_code_.try_emplace(std::string(code), row);
    t.by_alias_.try_emplace(text::fold_key(alias), row);
    t.by_alias_.try_emplace(text::fold_key(display), row);
  }
  return t;
}

CountryTable CountryTable::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read country table " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_tsv(ss.str(), path.string());
}

const CountryTable& CountryTable::bundled() {
  static const CountryTable table = from_tsv(*bundled_resource("iso3166.tsv"), "iso3166.tsv");
  return table;
}

std::optional<CountryCode> CountryTable::lookup(std::string_view name) const {
  auto key = text::fold_key(name);
  if (key.empty()) return std::nullopt;
  auto it = by_alias_.find(key);
  if (it == by_alias_.end()) return std::nullopt;
  const auto& r = rows_[it->second];
  return CountryCode{r.alpha3, r.display_name};
}

std::optional<CountryCode> CountryTable::by_alpha3(std::string_view code) const {
  auto c = text::trim(code);
  if (c.size() != 3) return std::nullopt;
  std::string upper(c);
  for (auto& ch : upper) {
    if (ch >= 'a' && ch <= 'z') ch = static_cast<char>(ch - 'a' + 'A');
  }
  auto it = by_code_.find(upper);
  if (it == by_code_.end()) return std::nullopt;
  const auto& r = rows_[it->second];
  return CountryCode{r.alpha3, r.display_name};
}

}  // namespace epix
