#include "epix/app.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <ostream>
#include <regex>
#include <set>
#include <thread>

#include "epix/annotator.hpp"
#include "epix/digest.hpp"
#include "epix/ensemble.hpp"
#include "epix/error.hpp"
#include "epix/io.hpp"
#include "epix/resources.hpp"

namespace epix {

namespace fs = std::filesystem;

RunResources::RunResources(const RunConfig& config) {
  if (config.gazetteer.empty() && config.countries.empty()) {
    gazetteer_ = &Gazetteer::bundled();
    countries_ = &CountryTable::bundled();
    return;
  }
  if (config.countries.empty()) {
    countries_ = &CountryTable::bundled();
  } else {
    owned_countries_ = std::make_unique<CountryTable>(CountryTable::load(config.countries));
    countries_ = owned_countries_.get();
  }
  if (config.gazetteer.empty()) {
    auto tsv = bundled_resource("gazetteer.tsv");
    owned_gazetteer_ = std::make_unique<Gazetteer>(Gazetteer::from_tsv(tsv.value_or(""), "gazetteer.tsv"));
  } else {
    owned_gazetteer_ = std::make_unique<Gazetteer>(Gazetteer::load(config.gazetteer));
  }
  owned_gazetteer_->add_countries(*countries_);
  gazetteer_ = owned_gazetteer_.get();
}

// ---------------------------------------------------------------- ingest

namespace {

std::optional<std::string> canonical_link(const std::string& html) {
  static const std::regex rel_first(R"(<link\b[^>]*\brel\s*=\s*["']canonical["'][^>]*\bhref\s*=\s*["']([^"']+)["'])",
                                    std::regex::icase);
  static const std::regex href_first(R"(<link\b[^>]*\bhref\s*=\s*["']([^"']+)["'][^>]*\brel\s*=\s*["']canonical["'])",
                                     std::regex::icase);
  std::smatch m;
  if (std::regex_search(html, m, rel_first) || std::regex_search(html, m, href_first)) return m[1].str();
  return std::nullopt;
}

std::vector<fs::path> input_files(const fs::path& input) {
  std::error_code ec;
  auto status = fs::status(input, ec);
  if (ec || !fs::exists(status)) throw IoError("cannot read " + input.string() + ": no such file or directory");
  if (!fs::is_directory(status)) return {input};
  std::vector<fs::path> files;
  fs::directory_iterator it(input, ec);
  if (ec) throw IoError("cannot read directory " + input.string() + ": " + ec.message());
  for (const auto& entry : it) {
    auto name = entry.path().filename().string();
    if (name.empty() || name.front() == '.') continue;
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace

int cmd_ingest(const IngestOptions& options, std::ostream& out, std::ostream& err) {
  try {
    auto files = input_files(options.input);
    std::vector<Document> docs;
    std::set<std::string> ids;
    for (const auto& file : files) {
      auto raw = io::read_file(file);
      Document doc;
      try {
        if (options.source == Source::WhoDon) {
          auto url = canonical_link(raw);
          doc = parse_don_article(raw, url.value_or(""));
          if (!url) doc.id = file.stem().string();
        } else {
          doc = parse_promed_post(raw);
          doc.source = options.source;
        }
      } catch (const EmptyInput&) {
        err << "warning: " << file.string() << " is empty; skipped\n";
        continue;
      }
      for (const auto& w : doc.warnings) err << "warning: " << file.filename().string() << ": " << w << "\n";
      if (!ids.insert(doc.id).second) {
        throw SchemaError("duplicate document id '" + doc.id + "' from " + file.string());
      }
      docs.push_back(std::move(doc));
    }
    if (docs.empty()) err << "warning: no documents found in " << options.input.string() << "\n";
    save_corpus(docs, options.output);
    out << "ingested " << docs.size() << " documents into " << options.output.string() << "\n";
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
}

// ---------------------------------------------------------------- extract

namespace {

struct Failure {
  std::string document_id;
  std::string message;
  int code = kExitTransport;
};

// Runs fn(i) for i in [0, n) on up to `workers` threads. fn must not throw.
template <class Fn>
void parallel_for(std::size_t n, std::size_t workers, Fn&& fn) {
  workers = std::max<std::size_t>(1, std::min(workers, n));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

std::map<std::string, ExtractionRecord> existing_records(const fs::path& path) {
  std::map<std::string, ExtractionRecord> out;
  if (!fs::exists(path)) return out;
  for (auto& r : load_predictions(path)) {
    auto id = r.document_id;
    out.insert_or_assign(std::move(id), std::move(r));
  }
  return out;
}

// Records in corpus order, so the file content never depends on scheduling.
std::vector<ExtractionRecord> in_corpus_order(const std::vector<Document>& corpus,
                                              std::map<std::string, ExtractionRecord>& by_id) {
  std::vector<ExtractionRecord> out;
  for (const auto& d : corpus) {
    auto it = by_id.find(d.id);
    if (it != by_id.end()) out.push_back(it->second);
  }
  return out;
}

class Extraction {
 public:
  Extraction(const RunConfig& config, std::ostream& out, std::ostream& err)
      : config_(config), out_(out), err_(err), resources_(config), registry_(config.registry()) {}

  int run(const std::vector<std::string>& filter) {
    auto order = plan(filter);
    corpus_ = load_corpus(config_.corpus);
    int status = kExitOk;
    for (const auto* e : order) {
      int s = e->kind == ExtractorKind::Ensemble ? run_ensemble(*e) : run_single(*e);
      status = std::max(status, s);
    }
    return status;
  }

 private:
  // Selected extractors plus the members of selected ensembles, members first.
  std::vector<const ExtractorConfig*> plan(const std::vector<std::string>& filter) {
    std::set<std::string> wanted;
    for (const auto& id : filter) {
      const auto* e = config_.find_extractor(id);
      if (!e) throw ConfigError("unknown extractor '" + id + "'");
      wanted.insert(id);
      if (e->kind == ExtractorKind::Ensemble) wanted.insert(e->ensemble.members.begin(), e->ensemble.members.end());
    }
    std::vector<const ExtractorConfig*> singles, ensembles;
    for (const auto& e : config_.extractors) {
      if (!filter.empty() && !wanted.count(e.id)) continue;
      (e.kind == ExtractorKind::Ensemble ? ensembles : singles).push_back(&e);
    }
    singles.insert(singles.end(), ensembles.begin(), ensembles.end());
    return singles;
  }

  Transport& transport() {
    if (!transport_) {
      transport_ = std::make_unique<Transport>(config_.transport.mode, config_.transport.cache_dir,
                                               config_.transport.retry);
      transport_->set_default_endpoint(config_.transport.endpoint);
    }
    return *transport_;
  }

  int run_single(const ExtractorConfig& e) {
    const auto path = config_.predictions_path(e.id);
    auto records = existing_records(path);
    std::vector<const Document*> todo;
    for (const auto& d : corpus_)
      if (!records.count(d.id)) todo.push_back(&d);

    std::optional<LlmExtractor> llm;
    if (e.kind == ExtractorKind::Llm) {
      llm = LlmExtractor{e.id, *registry_.find(e.model), config_.prompt(e), {}};
    }

    std::vector<std::optional<ExtractionRecord>> results(todo.size());
    std::vector<std::optional<Failure>> failures(todo.size());
    std::atomic<bool> stop{false};
    auto work = [&](std::size_t i) {
      if (stop) return;
      const auto& doc = *todo[i];
      try {
        if (llm) {
          results[i] = extract_with_llm(doc, *llm, transport(), resources_.lexicon());
        } else {
          results[i] = extract_rule_based(doc, resources_.gazetteer(), e.id);
        }
      } catch (const TransportError& ex) {
        failures[i] = Failure{doc.id, ex.what(), kExitTransport};
        stop = true;
      } catch (const BudgetExhausted& ex) {
        failures[i] = Failure{doc.id, ex.what(), kExitInput};
        stop = true;
      } catch (const std::exception& ex) {
        failures[i] = Failure{doc.id, ex.what(), kExitFailure};
        stop = true;
      }
    };
    if (llm) transport();  // created before the workers share it
    parallel_for(todo.size(), llm ? config_.concurrency : 1, work);

    std::size_t added = 0;
    for (auto& r : results) {
      if (!r) continue;
      auto id = r->document_id;
      records.insert_or_assign(std::move(id), std::move(*r));
      ++added;
    }
    auto ordered = in_corpus_order(corpus_, records);
    save_predictions(ordered, path);
    out_ << e.id << ": " << ordered.size() << " records (" << added << " new) -> " << path.string() << "\n";

    for (const auto& f : failures) {
      if (!f) continue;
      err_ << "error: extractor '" << e.id << "' failed on document '" << f->document_id << "': " << f->message
           << "\n";
      return f->code;
    }
    return kExitOk;
  }

  int run_ensemble(const ExtractorConfig& e) {
    std::vector<std::map<std::string, ExtractionRecord>> member_records;
    for (const auto& m : e.ensemble.members) member_records.push_back(existing_records(config_.predictions_path(m)));
    std::vector<ExtractionRecord> out;
    std::size_t skipped = 0;
    for (const auto& d : corpus_) {
      std::vector<ExtractionRecord> rs;
      for (const auto& by_id : member_records) {
        auto it = by_id.find(d.id);
        if (it == by_id.end()) break;
        rs.push_back(it->second);
      }
      if (rs.size() != member_records.size()) {
        ++skipped;
        continue;
      }
      out.push_back(ensemble_records(rs, e.ensemble));
    }
    const auto path = config_.predictions_path(e.id);
    save_predictions(out, path);
    out_ << e.id << ": " << out.size() << " records -> " << path.string() << "\n";
    if (skipped) {
      err_ << "warning: ensemble '" << e.id << "' skipped " << skipped
           << " documents lacking member predictions\n";
    }
    return kExitOk;
  }

  const RunConfig& config_;
  std::ostream& out_;
  std::ostream& err_;
  RunResources resources_;
  ModelRegistry registry_;
  std::vector<Document> corpus_;
  std::unique_ptr<Transport> transport_;
};

}  // namespace

int cmd_extract(const RunConfig& config, const std::vector<std::string>& filter, std::ostream& out,
                std::ostream& err) {
  try {
    config.validate();
    config.require_corpus();
    Extraction run(config, out, err);
    return run.run(filter);
  } catch (const TransportError& e) {
    err << "error: " << e.what() << "\n";
    return kExitTransport;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
}

// ---------------------------------------------------------------- evaluate

namespace {

std::string display_path(const RunConfig& config, const fs::path& p) {
  if (config.source.empty()) return p.filename().string();
  auto rel = p.lexically_relative(config.source.parent_path());
  return rel.empty() ? p.string() : rel.generic_string();
}

void apply_count_attribute(std::vector<ExtractionRecord>& records, std::optional<CountAttribute> wanted) {
  if (!wanted) return;
  for (auto& r : records) {
    if (r.count && r.count->value.attribute != *wanted && r.count->value.attribute != CountAttribute::Unknown) {
      r.clear(Field::Count);
    }
  }
}

}  // namespace

EvaluationReport build_report(const RunConfig& config, const RunResources& resources) {
  config.require_gold();
  auto golds = resolve_gold(load_gold(config.gold), resources.lexicon());
  std::map<std::string, std::vector<ExtractionRecord>> predictions;
  std::vector<std::string> order;
  for (const auto& e : config.extractors) {
    auto path = config.predictions_path(e.id);
    if (!fs::is_regular_file(path)) {
      throw AlignmentError("no predictions for extractor '" + e.id + "' (" + path.string() + ")");
    }
    auto records = load_predictions(path);
    apply_count_attribute(records, config.count_attribute);
    predictions.emplace(e.id, std::move(records));
    order.push_back(e.id);
  }
  auto report = evaluate(predictions, golds, config.match_mode, order);
  report.metadata.gold_path = display_path(config, config.gold);
  if (!config.corpus.empty() && fs::is_regular_file(config.corpus)) {
    report.metadata.corpus_digest = sha256_hex(io::read_file(config.corpus));
  }
  report.metadata.timestamp = utc_timestamp();
  return report;
}

int cmd_evaluate(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    config.validate();
    RunResources resources(config);
    auto report = build_report(config, resources);
    for (auto f : {ReportFormat::Text, ReportFormat::Csv, ReportFormat::Jsonl, ReportFormat::Plot,
                   ReportFormat::Json}) {
      io::write_file_atomic(config.reports_dir() / file_name(f), render_report(report, f));
    }
    out << render_report(report, ReportFormat::Text);
    out << "reports written to " << config.reports_dir().string() << "\n";
    return kExitOk;
  } catch (const AlignmentError& e) {
    err << "error: " << e.what() << "\n";
    return kExitEvaluation;
  } catch (const SchemaError& e) {
    // Unresolvable gold values and malformed prediction files.
    err << "error: " << e.what() << "\n";
    return kExitEvaluation;
  } catch (const EmptyReport& e) {
    err << "error: " << e.what() << "\n";
    return kExitEvaluation;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
}

// ---------------------------------------------------------------- report

int cmd_report(const fs::path& report_path, ReportFormat format, const fs::path& output, std::ostream& out,
               std::ostream& err) {
  try {
    auto report = load_report(report_path);
    auto text = render_report(report, format);
    if (output.empty()) {
      out << text;
    } else {
      io::write_file_atomic(output, text);
    }
    return kExitOk;
  } catch (const EmptyReport& e) {
    err << "error: " << e.what() << "\n";
    return kExitEvaluation;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
}

}  // namespace epix
