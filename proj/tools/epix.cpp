// epix: ingest outbreak reports, run extractors, score them against gold.

#include <CLI11.hpp>

#include <iostream>

#include "epix/app.hpp"
#include "epix/error.hpp"

namespace {

int with_config(const std::string& path, const std::string& output, const std::string& mode,
                epix::RunConfig& config) {
  if (path.empty()) {
    std::cerr << "error: --config is required\n";
    return epix::kExitInput;
  }
  try {
    config = epix::load_run_config(path);
  } catch (const epix::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return epix::kExitInput;
  }
  if (!output.empty()) {
    bool default_cache = config.transport.cache_dir == config.output_dir / "cache";
    config.output_dir = std::filesystem::absolute(output);
    if (default_cache) config.transport.cache_dir = config.output_dir / "cache";
  }
  if (!mode.empty()) config.transport.mode = *epix::transport_mode_from_string(mode);
  return epix::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Epidemic fact extraction and evaluation"};
  app.require_subcommand(1);

  std::string config_path, output_dir, mode;
  app.add_option("--config", config_path, "Run configuration (JSON)");
  app.add_option("--output", output_dir, "Output directory, overrides the config");
  app.add_option("--mode", mode, "Transport mode, overrides the config")
      ->check(CLI::IsMember({"live", "record", "replay"}));

  auto* ingest = app.add_subcommand("ingest", "Parse raw reports into a corpus file");
  std::string source = "promed", input, corpus_out;
  ingest->add_option("--source", source, "Feed format")->check(CLI::IsMember({"promed", "don"}));
  ingest->add_option("input", input, "Raw file or directory")->required();
  ingest->add_option("--corpus", corpus_out, "Corpus file to write (default: the config corpus)");

  auto* extract = app.add_subcommand("extract", "Run extractors over the corpus");
  std::vector<std::string> only;
  extract->add_option("--extractor", only, "Only these extractor ids (repeatable)");

  auto* evaluate = app.add_subcommand("evaluate", "Score predictions against the gold file");

  auto* report = app.add_subcommand("report", "Re-render a saved report");
  std::string report_path, format = "text", report_out;
  report->add_option("report", report_path, "report.json from an evaluate run")->required();
  report->add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"text", "csv", "jsonl", "plot", "json"}));
  report->add_option("-o,--out", report_out, "Write here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help and --version exit 0; usage errors are input errors.
    return app.exit(e) == 0 ? epix::kExitOk : epix::kExitInput;
  }

  if (*ingest) {
    epix::IngestOptions opts;
    opts.source = source == "don" ? epix::Source::WhoDon : epix::Source::Promed;
    opts.input = input;
    if (!corpus_out.empty()) {
      opts.output = corpus_out;
    } else {
      epix::RunConfig config;
      if (int rc = with_config(config_path, output_dir, mode, config)) return rc;
      opts.output = config.corpus.empty() ? config.output_dir / "corpus.jsonl" : config.corpus;
    }
    return epix::cmd_ingest(opts, std::cout, std::cerr);
  }
  if (*report) {
    return epix::cmd_report(report_path, *epix::report_format_from_string(format), report_out, std::cout,
                            std::cerr);
  }

  epix::RunConfig config;
  if (int rc = with_config(config_path, output_dir, mode, config)) return rc;
  if (*extract) return epix::cmd_extract(config, only, std::cout, std::cerr);
  if (*evaluate) return epix::cmd_evaluate(config, std::cout, std::cerr);
  return epix::kExitFailure;
}
