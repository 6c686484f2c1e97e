#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "epix/normalize.hpp"

namespace epix {

enum class Source { Promed, WhoDon, Other };

std::string_view to_string(Source s) noexcept;
std::optional<Source> source_from_string(std::string_view s) noexcept;

// One outbreak-news item with markup removed.
struct Document {
  std::string id;
  Source source = Source::Other;
  std::optional<std::string> url;
  std::optional<IsoDate> published;
  std::string title;
  std::string body;
  // Ingestion notes such as "malformed-markup". Not persisted.
  std::vector<std::string> warnings;

  std::size_t char_count() const noexcept;

  // Compares the persisted fields only.
  bool operator==(const Document& o) const {
    return id == o.id && source == o.source && url == o.url && published == o.published &&
           title == o.title && body == o.body;
  }
};

// Expert-labelled ground truth for one document. Absent fields are nullopt.
struct GoldAnnotation {
  std::string document_id;
  std::optional<std::string> disease;
  std::optional<std::string> country;
  std::optional<IsoDate> date;
  std::optional<std::uint64_t> count;

  bool operator==(const GoldAnnotation&) const = default;
};

// Optional metadata supplied alongside a raw post.
struct SourceHint {
  std::optional<std::string> id;
  std::optional<std::string> url;
  std::optional<IsoDate> published;
};

struct StrippedText {
  std::string text;
  bool malformed = false;
};

// Removes tags, comments, script/style content and decodes character
// references. Block elements become line breaks; runs of spaces collapse,
// lines are trimmed and at most one blank line is kept between paragraphs.
// The output never contains '<' followed by a letter, '/', '!' or '?', so
// stripping is idempotent. Never throws.
StrippedText strip_markup(std::string_view raw);

// ProMED mail post, plain text or HTML. The title is taken from a
// "Subject:" header line, which is removed from the body; otherwise it is
// the first 120 characters of the body. Throws EmptyInput on whitespace-only
// input.
Document parse_promed_post(std::string_view raw, const SourceHint& hint = {});

// WHO Disease Outbreak News article (HTML). Publication date comes from a
// <time datetime>, a date-like <meta>, or the first date in the article
// header. Throws EmptyInput on whitespace-only input.
Document parse_don_article(std::string_view raw, std::string_view url);

// Line-delimited JSON, one object per line with keys id, source, url,
// published, title, body. Blank lines are ignored. Throws IoError or a
// SchemaError naming the offending line (including duplicate ids).
std::vector<Document> load_corpus(const std::filesystem::path& path);
void save_corpus(std::span<const Document> docs, const std::filesystem::path& path);

std::string document_to_json(const Document& doc);
// Throws SchemaError tagged with line.
Document document_from_json(std::string_view line, std::size_t line_no = 0);

// Line-delimited JSON with keys document_id, disease, country, date, count.
std::vector<GoldAnnotation> load_gold(const std::filesystem::path& path);
void save_gold(std::span<const GoldAnnotation> golds, const std::filesystem::path& path);

std::string gold_to_json(const GoldAnnotation& gold);
GoldAnnotation gold_from_json(std::string_view line, std::size_t line_no = 0);

}  // namespace epix
