#include "epix/corpus.hpp"

#include <nlohmann/json.hpp>

#include <set>
#include <sstream>

#include "epix/digest.hpp"
#include "epix/error.hpp"
#include "epix/io.hpp"
#include "epix/text.hpp"

namespace epix {

using ordered_json = nlohmann::ordered_json;
using json = nlohmann::json;

std::string_view to_string(Source s) noexcept {
  switch (s) {
    case Source::Promed: return "PROMED";
    case Source::WhoDon: return "WHO_DON";
    case Source::Other: return "OTHER";
  }
  return "OTHER";
}

std::optional<Source> source_from_string(std::string_view s) noexcept {
  if (text::iequals(s, "PROMED")) return Source::Promed;
  if (text::iequals(s, "WHO_DON")) return Source::WhoDon;
  if (text::iequals(s, "OTHER")) return Source::Other;
  return std::nullopt;
}

std::size_t Document::char_count() const noexcept { return text::utf8_length(body); }

namespace {

constexpr std::size_t kTitleFallbackChars = 120;

std::string one_line(std::string_view s) {
  std::string out;
  bool space = false;
  for (char c : s) {
    if (text::is_space(c)) {
      space = true;
    } else {
      if (space && !out.empty()) out.push_back(' ');
      space = false;
      out.push_back(c);
    }
  }
  return out;
}

std::string fallback_title(std::string_view body) {
  return one_line(text::utf8_prefix(body, kTitleFallbackChars));
}

std::vector<std::string_view> split_lines(std::string_view s) {
  std::vector<std::string_view> lines;
  io::for_each_line(s, [&](std::string_view line, std::size_t) { lines.push_back(line); });
  return lines;
}

// "Subject: x" -> "x" when line is a header line with the given key.
std::optional<std::string_view> header_value(std::string_view line, std::string_view key) {
  auto t = text::trim(line);
  if (t.size() <= key.size() || !text::iequals(t.substr(0, key.size()), key)) return std::nullopt;
  auto rest = t.substr(key.size());
  if (rest.empty() || rest.front() != ':') return std::nullopt;
  return text::trim(rest.substr(1));
}

std::string join_lines(const std::vector<std::string_view>& lines) {
  std::string out;
  for (auto l : lines) {
    if (!out.empty()) out.push_back('\n');
    out.append(l);
  }
  return std::string(text::trim(out));
}

// Attribute value inside a single start tag, case-insensitive name.
std::optional<std::string> attribute(std::string_view tag, std::string_view name) {
  auto lower = text::to_lower(tag);
  std::string needle = text::to_lower(name) + "=";
  std::size_t pos = 0;
  while ((pos = lower.find(needle, pos)) != std::string::npos) {
    if (pos > 0 && !text::is_space(lower[pos - 1])) {
      pos += needle.size();
      continue;
    }
    std::size_t v = pos + needle.size();
    if (v >= tag.size()) return std::nullopt;
    char q = tag[v];
    if (q == '"' || q == '\'') {
      auto end = tag.find(q, v + 1);
      if (end == std::string_view::npos) return std::nullopt;
      return std::string(tag.substr(v + 1, end - v - 1));
    }
    auto end = v;
    while (end < tag.size() && !text::is_space(tag[end]) && tag[end] != '>') ++end;
    return std::string(tag.substr(v, end - v));
  }
  return std::nullopt;
}

// Start tags named name, in document order.
std::vector<std::string_view> start_tags(std::string_view html, std::string_view name) {
  std::vector<std::string_view> out;
  auto lower = text::to_lower(html);
  std::string needle = "<" + text::to_lower(name);
  std::size_t pos = 0;
  while ((pos = lower.find(needle, pos)) != std::string::npos) {
    std::size_t after = pos + needle.size();
    if (after < lower.size() && (text::is_space(lower[after]) || lower[after] == '>' || lower[after] == '/')) {
      auto end = html.find('>', after);
      if (end == std::string_view::npos) break;
      out.push_back(html.substr(pos, end - pos + 1));
      pos = end;
    } else {
      pos = after;
    }
  }
  return out;
}

// Inner text of the first <name>...</name> element.
std::optional<std::string> element_text(std::string_view html, std::string_view name) {
  auto tags = start_tags(html, name);
  if (tags.empty()) return std::nullopt;
  std::size_t begin = static_cast<std::size_t>(tags.front().data() - html.data()) + tags.front().size();
  auto lower = text::to_lower(html.substr(begin));
  auto close = lower.find("</" + text::to_lower(name));
  auto inner = html.substr(begin, close == std::string::npos ? html.npos : close);
  auto t = one_line(strip_markup(inner).text);
  if (t.empty()) return std::nullopt;
  return t;
}

std::optional<IsoDate> don_published(std::string_view html, std::string_view body) {
  for (auto tag : start_tags(html, "time")) {
    if (auto dt = attribute(tag, "datetime")) {
      if (auto d = IsoDate::parse(std::string_view(*dt).substr(0, 10))) return d;
      if (auto d = normalize_date(*dt)) return d;
    }
  }
  for (auto tag : start_tags(html, "meta")) {
    auto key = attribute(tag, "name");
    if (!key) key = attribute(tag, "property");
    if (!key) continue;
    auto k = text::to_lower(*key);
    if (k.find("date") == std::string::npos && k.find("published") == std::string::npos) continue;
    if (auto content = attribute(tag, "content")) {
      if (auto d = IsoDate::parse(std::string_view(*content).substr(0, 10))) return d;
      if (auto d = normalize_date(*content)) return d;
    }
  }
  // Header region: the first few non-empty lines of the article text.
  int seen = 0;
  for (auto line : split_lines(body)) {
    if (text::trim(line).empty()) continue;
    if (auto d = normalize_date(line)) return d;
    if (++seen == 5) break;
  }
  return std::nullopt;
}

std::string id_from_url(std::string_view url) {
  auto cut = url.find_first_of("?#");
  auto path = url.substr(0, cut);
  while (!path.empty() && path.back() == '/') path.remove_suffix(1);
  auto slash = path.rfind('/');
  auto last = slash == std::string_view::npos ? path : path.substr(slash + 1);
  if (auto dot = last.rfind('.'); dot != std::string_view::npos && dot > 0) last = last.substr(0, dot);
  if (path.find("://") != std::string_view::npos && slash != std::string_view::npos &&
      path.find('/', path.find("://") + 3) == std::string_view::npos) {
    return {};  // bare host, no path segment
  }
  return std::string(last);
}

const json& member(const json& obj, const char* key) {
  static const json null_value;
  auto it = obj.find(key);
  return it == obj.end() ? null_value : *it;
}

std::optional<std::string> optional_string(const json& obj, const char* key, std::size_t line_no) {
  const auto& v = member(obj, key);
  if (v.is_null()) return std::nullopt;
  if (!v.is_string()) throw SchemaError(std::string("'") + key + "' must be a string or null", line_no);
  return v.get<std::string>();
}

std::optional<IsoDate> optional_date(const json& obj, const char* key, std::size_t line_no) {
  auto s = optional_string(obj, key, line_no);
  if (!s) return std::nullopt;
  auto d = IsoDate::parse(*s);
  if (!d) throw SchemaError(std::string("'") + key + "' is not a valid YYYY-MM-DD date", line_no);
  return d;
}

json parse_object(std::string_view line, std::size_t line_no) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded()) throw SchemaError("invalid JSON", line_no);
  if (!j.is_object()) throw SchemaError("expected a JSON object", line_no);
  return j;
}

}  // namespace

Document parse_promed_post(std::string_view raw, const SourceHint& hint) {
  if (text::trim(raw).empty()) throw EmptyInput("empty ProMED post");
  auto stripped = strip_markup(raw);

  Document doc;
  doc.source = Source::Promed;
  doc.url = hint.url;
  doc.published = hint.published;
  if (stripped.malformed) doc.warnings.emplace_back("malformed-markup");

  auto lines = split_lines(stripped.text);
  std::optional<std::string> archive;
  bool have_subject = false;
  std::vector<std::size_t> header_lines;
  // Header lines sit before the first blank line; look at most 12 lines deep.
  // Recognized ones are metadata and leave the body.
  for (std::size_t i = 0; i < lines.size() && i < 12; ++i) {
    if (text::trim(lines[i]).empty()) break;
    if (auto v = header_value(lines[i], "Subject")) {
      if (!have_subject) doc.title = one_line(*v);
      have_subject = true;
    } else if (auto a = header_value(lines[i], "Archive Number")) {
      if (!archive) archive = std::string(*a);
    } else if (auto p = header_value(lines[i], "Published Date")) {
      if (!doc.published) doc.published = normalize_date(*p);
    } else if (auto d = header_value(lines[i], "Date")) {
      if (!doc.published) doc.published = normalize_date(*d);
    } else {
      continue;
    }
    header_lines.push_back(i);
  }
  for (auto it = header_lines.rbegin(); it != header_lines.rend(); ++it) {
    lines.erase(lines.begin() + static_cast<std::ptrdiff_t>(*it));
  }
  doc.body = join_lines(lines);
  if (doc.title.empty()) doc.title = fallback_title(doc.body);
  if (doc.title.empty() && doc.body.empty()) throw EmptyInput("ProMED post has no text after markup stripping");

  if (hint.id) {
    doc.id = *hint.id;
  } else if (archive && !archive->empty()) {
    doc.id = "promed-" + *archive;
  } else {
    doc.id = "promed-" + sha256_hex(raw).substr(0, 16);
  }
  return doc;
}

Document parse_don_article(std::string_view raw, std::string_view url) {
  if (text::trim(raw).empty()) throw EmptyInput("empty DON article");
  Document doc;
  doc.source = Source::WhoDon;
  if (!url.empty()) doc.url = std::string(url);

  auto title = element_text(raw, "title");
  if (!title) title = element_text(raw, "h1");

  // Prefer the article element when there is one; page chrome is noise.
  std::string_view content = raw;
  if (auto articles = start_tags(raw, "article"); !articles.empty()) {
    std::size_t begin = static_cast<std::size_t>(articles.front().data() - raw.data());
    auto close = text::to_lower(raw).rfind("</article");
    if (close != std::string::npos && close > begin) content = raw.substr(begin, close - begin);
  }
  auto stripped = strip_markup(content);
  if (stripped.malformed) doc.warnings.emplace_back("malformed-markup");
  doc.body = std::move(stripped.text);
  doc.title = title ? *title : fallback_title(doc.body);
  doc.published = don_published(raw, doc.body);

  doc.id = id_from_url(url);
  if (doc.id.empty()) doc.id = "don-" + sha256_hex(raw).substr(0, 16);
  return doc;
}

std::string document_to_json(const Document& doc) {
  ordered_json j;
  j["id"] = doc.id;
  j["source"] = std::string(to_string(doc.source));
  j["url"] = doc.url ? ordered_json(*doc.url) : ordered_json(nullptr);
  j["published"] = doc.published ? ordered_json(doc.published->to_string()) : ordered_json(nullptr);
  j["title"] = doc.title;
  j["body"] = doc.body;
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

Document document_from_json(std::string_view line, std::size_t line_no) {
  auto j = parse_object(line, line_no);
  Document doc;
  const auto& id = member(j, "id");
  if (!id.is_string() || id.get_ref<const std::string&>().empty()) {
    throw SchemaError("'id' must be a non-empty string", line_no);
  }
  doc.id = id.get<std::string>();
  const auto& source = member(j, "source");
  if (!source.is_string()) throw SchemaError("'source' must be a string", line_no);
  auto src = source_from_string(source.get_ref<const std::string&>());
  if (!src) throw SchemaError("unknown source '" + source.get<std::string>() + "'", line_no);
  doc.source = *src;
  doc.url = optional_string(j, "url", line_no);
  doc.published = optional_date(j, "published", line_no);
  const auto& title = member(j, "title");
  const auto& body = member(j, "body");
  if (!title.is_string()) throw SchemaError("'title' must be a string", line_no);
  if (!body.is_string()) throw SchemaError("'body' must be a string", line_no);
  doc.title = title.get<std::string>();
  doc.body = body.get<std::string>();
  return doc;
}

std::vector<Document> load_corpus(const std::filesystem::path& path) {
  auto content = io::read_file(path);
  std::vector<Document> docs;
  std::set<std::string, std::less<>> ids;
  io::for_each_line(content, [&](std::string_view line, std::size_t line_no) {
    if (text::trim(line).empty()) return;
    auto doc = document_from_json(line, line_no);
    if (!ids.insert(doc.id).second) throw SchemaError("duplicate document id '" + doc.id + "'", line_no);
    docs.push_back(std::move(doc));
  });
  return docs;
}

void save_corpus(std::span<const Document> docs, const std::filesystem::path& path) {
  std::string out;
  for (const auto& d : docs) {
    out += document_to_json(d);
    out.push_back('\n');
  }
  io::write_file_atomic(path, out);
}

std::string gold_to_json(const GoldAnnotation& g) {
  ordered_json j;
  j["document_id"] = g.document_id;
  j["disease"] = g.disease ? ordered_json(*g.disease) : ordered_json(nullptr);
  j["country"] = g.country ? ordered_json(*g.country) : ordered_json(nullptr);
  j["date"] = g.date ? ordered_json(g.date->to_string()) : ordered_json(nullptr);
  j["count"] = g.count ? ordered_json(*g.count) : ordered_json(nullptr);
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

GoldAnnotation gold_from_json(std::string_view line, std::size_t line_no) {
  auto j = parse_object(line, line_no);
  GoldAnnotation g;
  const auto& id = member(j, "document_id");
  if (!id.is_string() || id.get_ref<const std::string&>().empty()) {
    throw SchemaError("'document_id' must be a non-empty string", line_no);
  }
  g.document_id = id.get<std::string>();
  g.disease = optional_string(j, "disease", line_no);
  g.country = optional_string(j, "country", line_no);
  if ((g.disease && g.disease->empty()) || (g.country && g.country->empty())) {
    throw SchemaError("absent values must be null, not empty strings", line_no);
  }
  g.date = optional_date(j, "date", line_no);
  const auto& count = member(j, "count");
  if (!count.is_null()) {
    if (count.is_number_unsigned()) {
      g.count = count.get<std::uint64_t>();
    } else if (count.is_number_integer() && count.get<std::int64_t>() >= 0) {
      g.count = static_cast<std::uint64_t>(count.get<std::int64_t>());
    } else {
      throw SchemaError("'count' must be a non-negative integer or null", line_no);
    }
  }
  return g;
}

std::vector<GoldAnnotation> load_gold(const std::filesystem::path& path) {
  auto content = io::read_file(path);
  std::vector<GoldAnnotation> out;
  std::set<std::string, std::less<>> ids;
  io::for_each_line(content, [&](std::string_view line, std::size_t line_no) {
    if (text::trim(line).empty()) return;
    auto g = gold_from_json(line, line_no);
    if (!ids.insert(g.document_id).second) {
      throw SchemaError("duplicate document_id '" + g.document_id + "'", line_no);
    }
    out.push_back(std::move(g));
  });
  return out;
}

void save_gold(std::span<const GoldAnnotation> golds, const std::filesystem::path& path) {
  std::string out;
  for (const auto& g : golds) {
    out += gold_to_json(g);
    out.push_back('\n');
  }
  io::write_file_atomic(path, out);
}

}  // namespace epix
