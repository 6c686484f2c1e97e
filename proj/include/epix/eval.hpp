#pragma once

// Binary-classification scoring of extraction records against gold
// annotations. A field is "positive" when it holds a value; absence is the
// negative class.

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "epix/corpus.hpp"
#include "epix/llm.hpp"
#include "epix/normalize.hpp"
#include "epix/record.hpp"

namespace epix {

enum class MatchMode { StrictValue, DetectionOnly };

std::string_view to_string(MatchMode m) noexcept;
std::optional<MatchMode> match_mode_from_string(std::string_view s) noexcept;

enum class Outcome { TP, FP, FN, TN };

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  std::size_t total() const noexcept { return tp + fp + fn + tn; }
  void add(Outcome o) noexcept;

  bool operator==(const ConfusionCounts&) const = default;
};

struct MetricTriple {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
};

// gold absent:  pred absent -> TN, pred present -> FP.
// gold present: pred absent -> FN; pred present -> TP under DETECTION_ONLY,
// and under STRICT_VALUE TP when the values match, FP otherwise.
Outcome classify_pair(const std::optional<FieldValue>& gold, const std::optional<FieldValue>& pred, Field field,
                      MatchMode mode);

// tp / (tp + fp). With no positive predictions: 1 when the run was a clean
// all-negative one (fn == 0 and tn > 0), 0 otherwise.
double precision(const ConfusionCounts& c) noexcept;
// tp / (tp + fn). With no positive gold: 1 when fp == 0 and tn > 0, 0 otherwise.
double recall(const ConfusionCounts& c) noexcept;
// Harmonic mean; 0 when precision + recall == 0.
double f1(double precision, double recall) noexcept;

MetricTriple metrics(const ConfusionCounts& c) noexcept;

// Gold annotation with its string values resolved to canonical values.
struct ResolvedGold {
  std::string document_id;
  std::optional<FieldValue> disease;
  std::optional<FieldValue> country;
  std::optional<FieldValue> date;
  std::optional<FieldValue> count;

  const std::optional<FieldValue>& value(Field f) const;
};

// Throws SchemaError when a gold disease or country is not in the lexicon.
ResolvedGold resolve_gold(const GoldAnnotation& gold, const Lexicon& lexicon = {});
std::vector<ResolvedGold> resolve_gold(std::span<const GoldAnnotation> golds, const Lexicon& lexicon = {});

// Scores one field over the gold documents. Every gold id needs exactly one
// prediction; predictions for documents outside the gold set are ignored.
// Throws AlignmentError on a missing or duplicated id.
ConfusionCounts accumulate_confusion(std::span<const ResolvedGold> golds, std::span<const ExtractionRecord> preds,
                                     Field field, MatchMode mode);

struct ReportCell {
  std::string extractor;
  Field field = Field::Disease;
  ConfusionCounts counts;
  MetricTriple metrics;
};

struct ReportMetadata {
  MatchMode mode = MatchMode::StrictValue;
  std::string gold_path;
  std::string corpus_digest;
  std::string timestamp;  // ISO-8601 UTC
};

struct EvaluationReport {
  ReportMetadata metadata;
  std::vector<std::string> extractors;  // in evaluation order
  std::vector<ReportCell> cells;        // extractor-major, fields in kAllFields order

  const ReportCell* cell(std::string_view extractor, Field field) const;
};

// predictions: extractor id -> its records. Extractors are reported in the
// order given by order (all keys of predictions when empty).
EvaluationReport evaluate(const std::map<std::string, std::vector<ExtractionRecord>>& predictions,
                          std::span<const ResolvedGold> golds, MatchMode mode,
                          std::vector<std::string> order = {});

// Current time as YYYY-MM-DDTHH:MM:SSZ, or SOURCE_DATE_EPOCH when set.
std::string utc_timestamp();

enum class ReportFormat { Text, Csv, Jsonl, Plot, Json };

std::string_view to_string(ReportFormat f) noexcept;
std::optional<ReportFormat> report_format_from_string(std::string_view s) noexcept;
std::string_view file_name(ReportFormat f) noexcept;

// Text: aligned table with a metadata header. Csv: header
// extractor,field,tp,fp,fn,tn,precision,recall,f1. Jsonl: one object per
// cell, same keys. Plot: extractor,field,metric,value. Json: the whole
// report including metadata, readable by load_report. Metrics are rendered
// with three decimals. Throws EmptyReport when there are no extractors.
std::string render_report(const EvaluationReport& report, ReportFormat format);

// Three-decimal rendering used by every format ("0.705").
std::string format_metric(double v);

// Reads the Json format back. Throws SchemaError.
EvaluationReport load_report(const std::filesystem::path& path);
EvaluationReport report_from_json(std::string_view content);

}  // namespace epix
