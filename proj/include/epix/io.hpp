#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace epix::io {

// Whole file as bytes. Throws IoError.
std::string read_file(const std::filesystem::path& path);

// Writes to a sibling temporary file and renames it over path, creating
// parent directories as needed. Throws IoError.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

// Calls fn(line, line_no) for every line; line_no is 1-based and a trailing
// '\r' is removed.
template <class Fn>
void for_each_line(std::string_view content, Fn&& fn) {
  std::size_t pos = 0, line_no = 0;
  while (pos < content.size()) {
    auto nl = content.find('\n', pos);
    auto line = content.substr(pos, nl == std::string_view::npos ? content.npos : nl - pos);
    pos = nl == std::string_view::npos ? content.size() : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    fn(line, line_no);
  }
}

}  // namespace epix::io
