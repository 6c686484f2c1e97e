#include "epix/eval.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <iomanip>
#include <set>
#include <sstream>
#include <unordered_map>

#include "epix/error.hpp"
#include "epix/io.hpp"
#include "epix/text.hpp"

namespace epix {

using ordered_json = nlohmann::ordered_json;
using json = nlohmann::json;

std::string_view to_string(MatchMode m) noexcept {
  return m == MatchMode::StrictValue ? "strict_value" : "detection_only";
}

std::optional<MatchMode> match_mode_from_string(std::string_view s) noexcept {
  if (text::iequals(s, "strict_value") || text::iequals(s, "strict")) return MatchMode::StrictValue;
  if (text::iequals(s, "detection_only") || text::iequals(s, "detection")) return MatchMode::DetectionOnly;
  return std::nullopt;
}

void ConfusionCounts::add(Outcome o) noexcept {
  switch (o) {
    case Outcome::TP: ++tp; break;
    case Outcome::FP: ++fp; break;
    case Outcome::FN: ++fn; break;
    case Outcome::TN: ++tn; break;
  }
}

Outcome classify_pair(const std::optional<FieldValue>& gold, const std::optional<FieldValue>& pred, Field field,
                      MatchMode mode) {
  if (!gold) return pred ? Outcome::FP : Outcome::TN;
  if (!pred) return Outcome::FN;
  if (mode == MatchMode::DetectionOnly) return Outcome::TP;
  return values_match(field, *gold, *pred) ? Outcome::TP : Outcome::FP;
}

double precision(const ConfusionCounts& c) noexcept {
  if (c.tp + c.fp > 0) return static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
  return (c.fn == 0 && c.tn > 0) ? 1.0 : 0.0;
}

double recall(const ConfusionCounts& c) noexcept {
  if (c.tp + c.fn > 0) return static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
  return (c.fp == 0 && c.tn > 0) ? 1.0 : 0.0;
}

double f1(double p, double r) noexcept {
  if (p + r <= 0) return 0.0;
  return 2.0 * p * r / (p + r);
}

MetricTriple metrics(const ConfusionCounts& c) noexcept {
  MetricTriple m;
  m.precision = precision(c);
  m.recall = recall(c);
  m.f1 = f1(m.precision, m.recall);
  return m;
}

const std::optional<FieldValue>& ResolvedGold::value(Field f) const {
  switch (f) {
    case Field::Disease: return disease;
    case Field::Country: return country;
    case Field::Date: return date;
    case Field::Count: return count;
  }
  return disease;
}

ResolvedGold resolve_gold(const GoldAnnotation& gold, const Lexicon& lexicon) {
  ResolvedGold r;
  r.document_id = gold.document_id;
  if (gold.disease) {
    auto d = normalize_disease(*gold.disease, *lexicon.gazetteer);
    if (!d) {
      throw SchemaError("gold disease '" + *gold.disease + "' for " + gold.document_id +
                        " is not in the gazetteer");
    }
    r.disease = *d;
  }
  if (gold.country) {
    auto c = normalize_country(*gold.country, *lexicon.countries);
    if (!c) {
      throw SchemaError("gold country '" + *gold.country + "' for " + gold.document_id +
                        " is not in the country table");
    }
    r.country = *c;
  }
  if (gold.date) r.date = *gold.date;
  if (gold.count) r.count = CaseCount{*gold.count, false, CountAttribute::Case};
  return r;
}

std::vector<ResolvedGold> resolve_gold(std::span<const GoldAnnotation> golds, const Lexicon& lexicon) {
  std::vector<ResolvedGold> out;
  out.reserve(golds.size());
  for (const auto& g : golds) out.push_back(resolve_gold(g, lexicon));
  return out;
}

ConfusionCounts accumulate_confusion(std::span<const ResolvedGold> golds, std::span<const ExtractionRecord> preds,
                                     Field field, MatchMode mode) {
  std::unordered_map<std::string_view, const ExtractionRecord*> by_id;
  std::set<std::string_view> gold_ids;
  for (const auto& g : golds) {
    if (!gold_ids.insert(g.document_id).second) {
      throw AlignmentError("duplicate gold document id '" + g.document_id + "'");
    }
  }
  for (const auto& p : preds) {
    if (!gold_ids.count(p.document_id)) continue;
    if (!by_id.emplace(p.document_id, &p).second) {
      throw AlignmentError("duplicate prediction for document '" + p.document_id + "' from " + p.extractor_id);
    }
  }
  ConfusionCounts c;
  for (const auto& g : golds) {
    auto it = by_id.find(g.document_id);
    if (it == by_id.end()) throw AlignmentError("no prediction for gold document '" + g.document_id + "'");
    c.add(classify_pair(g.value(field), it->second->value(field), field, mode));
  }
  return c;
}

const ReportCell* EvaluationReport::cell(std::string_view extractor, Field field) const {
  for (const auto& c : cells)
    if (c.extractor == extractor && c.field == field) return &c;
  return nullptr;
}

EvaluationReport evaluate(const std::map<std::string, std::vector<ExtractionRecord>>& predictions,
                          std::span<const ResolvedGold> golds, MatchMode mode, std::vector<std::string> order) {
  if (order.empty()) {
    for (const auto& [id, _] : predictions) order.push_back(id);
  }
  EvaluationReport report;
  report.metadata.mode = mode;
  report.extractors = order;
  for (const auto& id : order) {
    auto it = predictions.find(id);
    if (it == predictions.end()) throw AlignmentError("no predictions for extractor '" + id + "'");
    for (auto field : kAllFields) {
      ReportCell cell;
      cell.extractor = id;
      cell.field = field;
      cell.counts = accumulate_confusion(golds, it->second, field, mode);
      cell.metrics = metrics(cell.counts);
      report.cells.push_back(std::move(cell));
    }
  }
  return report;
}

std::string utc_timestamp() {
  std::time_t t;
  if (const char* sde = std::getenv("SOURCE_DATE_EPOCH"); sde && *sde) {
    t = static_cast<std::time_t>(std::strtoll(sde, nullptr, 10));
  } else {
    t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string_view to_string(ReportFormat f) noexcept {
  switch (f) {
    case ReportFormat::Text: return "text";
    case ReportFormat::Csv: return "csv";
    case ReportFormat::Jsonl: return "jsonl";
    case ReportFormat::Plot: return "plot";
    case ReportFormat::Json: return "json";
  }
  return "text";
}

std::optional<ReportFormat> report_format_from_string(std::string_view s) noexcept {
  for (auto f : {ReportFormat::Text, ReportFormat::Csv, ReportFormat::Jsonl, ReportFormat::Plot, ReportFormat::Json})
    if (text::iequals(s, to_string(f))) return f;
  return std::nullopt;
}

std::string_view file_name(ReportFormat f) noexcept {
  switch (f) {
    case ReportFormat::Text: return "report.txt";
    case ReportFormat::Csv: return "report.csv";
    case ReportFormat::Jsonl: return "report.jsonl";
    case ReportFormat::Plot: return "report_plot.csv";
    case ReportFormat::Json: return "report.json";
  }
  return "report.txt";
}

std::string format_metric(double v) {
  char buf[32];
  // Nudge exact binary halves (0.0005 stored as 0.000499...) to round half up.
  std::snprintf(buf, sizeof buf, "%.3f", v + (v >= 0 ? 1e-12 : -1e-12));
  return buf;
}

namespace {

std::string csv_escape(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

ordered_json cell_json(const ReportCell& c) {
  ordered_json j;
  j["extractor"] = c.extractor;
  j["field"] = std::string(to_string(c.field));
  j["tp"] = c.counts.tp;
  j["fp"] = c.counts.fp;
  j["fn"] = c.counts.fn;
  j["tn"] = c.counts.tn;
  // Rounded values are written as numbers parsed from their 3-decimal text.
  j["precision"] = std::stod(format_metric(c.metrics.precision));
  j["recall"] = std::stod(format_metric(c.metrics.recall));
  j["f1"] = std::stod(format_metric(c.metrics.f1));
  return j;
}

std::string render_text(const EvaluationReport& r) {
  std::size_t width = std::string_view("extractor").size();
  for (const auto& e : r.extractors) width = std::max(width, text::utf8_length(e));
  std::ostringstream out;
  out << "# mode: " << to_string(r.metadata.mode) << "\n";
  out << "# gold: " << r.metadata.gold_path << "\n";
  out << "# corpus: " << r.metadata.corpus_digest << "\n";
  out << "# timestamp: " << r.metadata.timestamp << "\n";
  auto pad = [](std::string s, std::size_t w, bool left) {
    auto len = text::utf8_length(s);
    if (len >= w) return s;
    return left ? s + std::string(w - len, ' ') : std::string(w - len, ' ') + s;
  };
  out << pad("extractor", width, true) << "  " << pad("field", 7, true) << "  " << pad("tp", 5, false) << " "
      << pad("fp", 5, false) << " " << pad("fn", 5, false) << " " << pad("tn", 5, false) << "  "
      << pad("prec", 5, false) << "  " << pad("rec", 5, false) << "  " << pad("f1", 5, false) << "\n";
  for (const auto& c : r.cells) {
    out << pad(c.extractor, width, true) << "  " << pad(std::string(to_string(c.field)), 7, true) << "  "
        << pad(std::to_string(c.counts.tp), 5, false) << " " << pad(std::to_string(c.counts.fp), 5, false) << " "
        << pad(std::to_string(c.counts.fn), 5, false) << " " << pad(std::to_string(c.counts.tn), 5, false) << "  "
        << format_metric(c.metrics.precision) << "  " << format_metric(c.metrics.recall) << "  "
        << format_metric(c.metrics.f1) << "\n";
  }
  return out.str();
}

}  // namespace

std::string render_report(const EvaluationReport& r, ReportFormat format) {
  if (r.extractors.empty()) throw EmptyReport("report has no extractors");
  std::ostringstream out;
  switch (format) {
    case ReportFormat::Text: return render_text(r);
    case ReportFormat::Csv:
      out << "extractor,field,tp,fp,fn,tn,precision,recall,f1\n";
      for (const auto& c : r.cells) {
        out << csv_escape(c.extractor) << ',' << to_string(c.field) << ',' << c.counts.tp << ',' << c.counts.fp
            << ',' << c.counts.fn << ',' << c.counts.tn << ',' << format_metric(c.metrics.precision) << ','
            << format_metric(c.metrics.recall) << ',' << format_metric(c.metrics.f1) << '\n';
      }
      return out.str();
    case ReportFormat::Jsonl:
      for (const auto& c : r.cells) out << cell_json(c).dump() << '\n';
      return out.str();
    case ReportFormat::Plot:
      out << "extractor,field,metric,value\n";
      for (const auto& c : r.cells) {
        const std::pair<const char*, double> series[] = {
            {"precision", c.metrics.precision}, {"recall", c.metrics.recall}, {"f1", c.metrics.f1}};
        for (const auto& [name, v] : series) {
          out << csv_escape(c.extractor) << ',' << to_string(c.field) << ',' << name << ',' << format_metric(v)
              << '\n';
        }
      }
      return out.str();
    case ReportFormat::Json: {
      ordered_json j;
      j["metadata"] = {{"mode", std::string(to_string(r.metadata.mode))},
                       {"gold_path", r.metadata.gold_path},
                       {"corpus_digest", r.metadata.corpus_digest},
                       {"timestamp", r.metadata.timestamp}};
      j["extractors"] = r.extractors;
      j["cells"] = ordered_json::array();
      for (const auto& c : r.cells) {
        auto cj = cell_json(c);
        // Full precision here so re-rendering never rounds twice.
        cj["precision"] = c.metrics.precision;
        cj["recall"] = c.metrics.recall;
        cj["f1"] = c.metrics.f1;
        j["cells"].push_back(std::move(cj));
      }
      return j.dump(2) + "\n";
    }
  }
  return {};
}

EvaluationReport report_from_json(std::string_view content) {
  auto j = json::parse(content, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw SchemaError("report is not a JSON object");
  EvaluationReport r;
  try {
    const auto& meta = j.at("metadata");
    auto mode = match_mode_from_string(meta.at("mode").get<std::string>());
    if (!mode) throw SchemaError("unknown match mode in report");
    r.metadata.mode = *mode;
    r.metadata.gold_path = meta.value("gold_path", "");
    r.metadata.corpus_digest = meta.value("corpus_digest", "");
    r.metadata.timestamp = meta.value("timestamp", "");
    r.extractors = j.at("extractors").get<std::vector<std::string>>();
    for (const auto& cj : j.at("cells")) {
      ReportCell c;
      c.extractor = cj.at("extractor").get<std::string>();
      auto field = field_from_string(cj.at("field").get<std::string>());
      if (!field) throw SchemaError("unknown field in report");
      c.field = *field;
      c.counts = {cj.at("tp").get<std::size_t>(), cj.at("fp").get<std::size_t>(), cj.at("fn").get<std::size_t>(),
                  cj.at("tn").get<std::size_t>()};
      c.metrics = {cj.at("precision").get<double>(), cj.at("recall").get<double>(), cj.at("f1").get<double>()};
      r.cells.push_back(std::move(c));
    }
  } catch (const json::exception& e) {
    throw SchemaError(std::string("malformed report: ") + e.what());
  }
  return r;
}

EvaluationReport load_report(const std::filesystem::path& path) { return report_from_json(io::read_file(path)); }

}  // namespace epix
