#pragma once

// Command implementations behind the epix executable. Each returns a process
// exit status and writes progress to out and diagnostics to err.

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "epix/config.hpp"
#include "epix/corpus.hpp"
#include "epix/eval.hpp"
#include "epix/gazetteer.hpp"
#include "epix/llm.hpp"

namespace epix {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitTransport = 3;
inline constexpr int kExitEvaluation = 4;

// Gazetteer and country table of a run; bundled unless the config names files.
class RunResources {
 public:
  explicit RunResources(const RunConfig& config);
  const Gazetteer& gazetteer() const noexcept { return *gazetteer_; }
  const CountryTable& countries() const noexcept { return *countries_; }
  Lexicon lexicon() const noexcept { return {gazetteer_, countries_}; }

 private:
  std::unique_ptr<Gazetteer> owned_gazetteer_;
  std::unique_ptr<CountryTable> owned_countries_;
  const Gazetteer* gazetteer_;
  const CountryTable* countries_;
};

struct IngestOptions {
  Source source = Source::Promed;
  std::filesystem::path input;   // one raw file or a directory of them
  std::filesystem::path output;  // corpus file to write
};

// Files of a directory are read in name order; hidden files are skipped.
// DON document ids come from the canonical link, else the file stem.
int cmd_ingest(const IngestOptions& options, std::ostream& out, std::ostream& err);

// Runs the selected extractors (all when filter is empty) over the corpus.
// Documents already present in an extractor's predictions file are skipped;
// ensemble members are brought up to date before their ensemble. On a
// transport failure the completed records are still written.
int cmd_extract(const RunConfig& config, const std::vector<std::string>& filter, std::ostream& out,
                std::ostream& err);

// Scores every configured extractor and writes all report formats to
// config.reports_dir().
int cmd_evaluate(const RunConfig& config, std::ostream& out, std::ostream& err);

// Re-renders a saved report.json. Writes to output, or to out when empty.
int cmd_report(const std::filesystem::path& report, ReportFormat format, const std::filesystem::path& output,
               std::ostream& out, std::ostream& err);

// Builds the evaluation report without writing anything. Throws
// AlignmentError or IoError when predictions are missing.
EvaluationReport build_report(const RunConfig& config, const RunResources& resources);

}  // namespace epix
