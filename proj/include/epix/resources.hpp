#pragma once

#include <optional>
#include <string_view>
#include <vector>

namespace epix {

// Files under resources/ compiled into the library, addressed by their path
// relative to that directory ("iso3166.tsv", "prompts/extraction-v1.txt").
std::optional<std::string_view> bundled_resource(std::string_view name) noexcept;
std::vector<std::string_view> bundled_resource_names();

}  // namespace epix
