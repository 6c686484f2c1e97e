#pragma once

// Declarative run configuration. One JSON document describes the corpus,
// gold file, transport, model profiles and extractors of a run; relative
// paths are resolved against the directory holding the config file.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "epix/ensemble.hpp"
#include "epix/eval.hpp"
#include "epix/prompt.hpp"
#include "epix/transport.hpp"

namespace epix {

enum class ExtractorKind { RuleBased, Llm, Ensemble };

std::string_view to_string(ExtractorKind k) noexcept;
std::optional<ExtractorKind> extractor_kind_from_string(std::string_view s) noexcept;

struct ExtractorConfig {
  std::string id;
  ExtractorKind kind = ExtractorKind::RuleBased;
  // Llm only.
  std::string model;
  std::string prompt_template = "extraction-v1";
  std::size_t shots = 0;
  // Ensemble only; ensemble.id mirrors id.
  EnsembleConfig ensemble;
};

struct TransportConfig {
  TransportMode mode = TransportMode::Replay;
  std::filesystem::path cache_dir;
  RetryPolicy retry;
  std::string endpoint;  // default for profiles without one
};

struct RunConfig {
  std::filesystem::path source;  // config file, empty when built in code
  std::filesystem::path corpus;
  std::filesystem::path gold;
  std::filesystem::path output_dir;
  TransportConfig transport;
  MatchMode match_mode = MatchMode::StrictValue;
  // When set, predicted counts of another attribute are scored as absent.
  std::optional<CountAttribute> count_attribute;
  std::size_t concurrency = 4;
  std::filesystem::path gazetteer;   // empty = bundled
  std::filesystem::path countries;   // empty = bundled
  std::filesystem::path prompt_dir;  // <template>.txt and <template>.demos.jsonl; empty = bundled
  std::vector<ModelProfile> models;  // added to or overriding the seeded registry
  std::vector<ExtractorConfig> extractors;

  const ExtractorConfig* find_extractor(std::string_view id) const;
  ModelRegistry registry() const;
  PromptTemplate prompt(const ExtractorConfig& extractor) const;

  std::filesystem::path predictions_dir() const { return output_dir / "predictions"; }
  std::filesystem::path predictions_path(std::string_view extractor_id) const;
  std::filesystem::path reports_dir() const { return output_dir / "reports"; }

  // Structural checks: unique ids, kind-specific fields, ensemble members
  // declared (and not ensembles themselves), models known. Throws ConfigError.
  void validate() const;
  // Throws ConfigError when a referenced input path does not exist.
  void require_corpus() const;
  void require_gold() const;
};

// Throws ConfigError (bad values, dangling references) or SchemaError (not
// JSON). Paths are made absolute relative to the file's directory.
RunConfig load_run_config(const std::filesystem::path& path);
RunConfig run_config_from_json(std::string_view content, const std::filesystem::path& base_dir);

}  // namespace epix
