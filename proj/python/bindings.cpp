// Python bindings. Structured values cross the boundary as JSON text and are
// decoded by the pure-Python wrappers in epix/__init__.py.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "epix/annotator.hpp"
#include "epix/corpus.hpp"
#include "epix/ensemble.hpp"
#include "epix/error.hpp"
#include "epix/eval.hpp"
#include "epix/llm.hpp"
#include "epix/normalize.hpp"
#include "epix/record.hpp"

#include <nlohmann/json.hpp>

namespace py = pybind11;
using namespace epix;

namespace {

std::optional<IsoDate> parse_iso(const std::optional<std::string>& s) {
  if (!s) return std::nullopt;
  auto d = IsoDate::parse(*s);
  if (!d) throw py::value_error("not a YYYY-MM-DD date: " + *s);
  return d;
}

Field parse_field(const std::string& s) {
  auto f = field_from_string(s);
  if (!f) throw py::value_error("unknown field: " + s);
  return *f;
}

// Raw answer text to a canonical value, as the model-answer parser does.
std::optional<FieldValue> normalize_raw(Field f, const std::string& raw) {
  switch (f) {
    case Field::Disease:
      if (auto v = normalize_disease(raw, Gazetteer::bundled())) return *v;
      break;
    case Field::Country:
      if (auto v = normalize_country(raw)) return *v;
      break;
    case Field::Date:
      if (auto v = normalize_date(raw)) return *v;
      break;
    case Field::Count:
      if (auto v = parse_count_expression(raw)) return *v;
      break;
  }
  throw py::value_error("cannot normalize " + std::string(to_string(f)) + " value: " + raw);
}

std::string count_json(const CaseCount& c) {
  return nlohmann::json{{"value", c.value}, {"approximate", c.approximate}, {"attribute", to_string(c.attribute)}}
      .dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Native core of the epix toolkit";

  // Translators run newest first, so the base class is registered first.
  auto& base = py::register_exception<Error>(m, "EpixError");
  py::register_exception<NoIsland>(m, "NoIsland", base.ptr());
  py::register_exception<SchemaError>(m, "SchemaError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<AlignmentError>(m, "AlignmentError", base.ptr());
  py::register_exception<EmptyReport>(m, "EmptyReport", base.ptr());
  py::register_exception<EmptyInput>(m, "EmptyInput", base.ptr());
  py::register_exception<IoError>(m, "IoError", base.ptr());

  m.def(
      "normalize_date",
      [](const std::string& raw, std::optional<int> anchor_year) -> std::optional<std::string> {
        if (auto d = normalize_date(raw, anchor_year)) return d->to_string();
        return std::nullopt;
      },
      py::arg("raw"), py::arg("anchor_year") = py::none());

  m.def(
      "normalize_country",
      [](const std::string& raw) -> std::optional<std::pair<std::string, std::string>> {
        if (auto c = normalize_country(raw)) return std::pair{c->alpha3, c->display_name};
        return std::nullopt;
      },
      py::arg("raw"));

  m.def(
      "normalize_disease",
      [](const std::string& raw) -> std::optional<std::pair<std::string, std::string>> {
        if (auto d = normalize_disease(raw, Gazetteer::bundled())) return std::pair{d->canonical_id, d->display_name};
        return std::nullopt;
      },
      py::arg("raw"));

  m.def(
      "parse_count_expression_json",
      [](const std::string& raw) -> std::optional<std::string> {
        if (auto c = parse_count_expression(raw)) return count_json(*c);
        return std::nullopt;
      },
      py::arg("raw"));

  m.def(
      "values_match",
      [](const std::string& field, const std::string& a, const std::string& b) {
        auto f = parse_field(field);
        return values_match(f, *normalize_raw(f, a), *normalize_raw(f, b));
      },
      py::arg("field"), py::arg("a"), py::arg("b"));

  m.def("extract_json_island", &extract_json_island, py::arg("text"));

  m.def(
      "precision",
      [](std::size_t tp, std::size_t fp, std::size_t fn, std::size_t tn) { return precision({tp, fp, fn, tn}); },
      py::arg("tp"), py::arg("fp"), py::arg("fn"), py::arg("tn") = 0);
  m.def(
      "recall", [](std::size_t tp, std::size_t fp, std::size_t fn, std::size_t tn) { return recall({tp, fp, fn, tn}); },
      py::arg("tp"), py::arg("fp"), py::arg("fn"), py::arg("tn") = 0);
  m.def("f1", static_cast<double (*)(double, double)>(&f1), py::arg("precision"), py::arg("recall"));

  m.def(
      "parse_promed_post_json",
      [](const std::string& raw, std::optional<std::string> id) {
        SourceHint hint;
        hint.id = std::move(id);
        return document_to_json(parse_promed_post(raw, hint));
      },
      py::arg("raw"), py::arg("id") = py::none());

  m.def(
      "parse_don_article_json",
      [](const std::string& raw, const std::string& url) { return document_to_json(parse_don_article(raw, url)); },
      py::arg("raw"), py::arg("url"));

  m.def(
      "extract_rule_based_json",
      [](const std::string& body, std::optional<std::string> published, const std::string& id) {
        Document doc;
        doc.id = id;
        doc.body = body;
        doc.published = parse_iso(published);
        return record_to_json(extract_rule_based(doc, Gazetteer::bundled()));
      },
      py::arg("body"), py::arg("published") = py::none(), py::arg("id") = "doc");

  m.def(
      "vote",
      [](const std::string& field, const std::vector<std::optional<std::string>>& candidates, int min_agreement,
         const std::string& tie_break) -> std::optional<std::string> {
        auto f = parse_field(field);
        auto tb = tie_break_from_string(tie_break);
        if (!tb) throw py::value_error("unknown tie_break: " + tie_break);
        EnsembleConfig cfg;
        cfg.id = "python";
        for (std::size_t i = 0; i < candidates.size(); ++i) cfg.members.push_back("m" + std::to_string(i + 1));
        cfg.policy.min_agreement = min_agreement;
        cfg.policy.tie_break = *tb;
        cfg.validate();
        std::vector<std::optional<FieldValue>> values;
        for (const auto& c : candidates) values.push_back(c ? normalize_raw(f, *c) : std::nullopt);
        auto v = vote_field(f, values, cfg);
        if (!v) return std::nullopt;
        return value_key(*v);
      },
      py::arg("field"), py::arg("candidates"), py::arg("min_agreement") = 2, py::arg("tie_break") = "priority_order");

  m.def(
      "evaluate_files_json",
      [](const std::filesystem::path& gold, const std::map<std::string, std::filesystem::path>& predictions,
         const std::string& mode) {
        auto mm = match_mode_from_string(mode);
        if (!mm) throw py::value_error("unknown match mode: " + mode);
        auto golds = resolve_gold(load_gold(gold));
        std::map<std::string, std::vector<ExtractionRecord>> preds;
        std::vector<std::string> order;
        for (const auto& [id, path] : predictions) {
          preds[id] = load_predictions(path);
          order.push_back(id);
        }
        auto report = evaluate(preds, golds, *mm, order);
        report.metadata.gold_path = gold.string();
        report.metadata.timestamp = utc_timestamp();
        return render_report(report, ReportFormat::Json);
      },
      py::arg("gold"), py::arg("predictions"), py::arg("mode") = "strict_value");

  m.def(
      "render_report",
      [](const std::string& report_json, const std::string& format) {
        auto f = report_format_from_string(format);
        if (!f) throw py::value_error("unknown report format: " + format);
        return render_report(report_from_json(report_json), *f);
      },
      py::arg("report_json"), py::arg("format"));

  m.attr("__version__") = "0.1.0";
}
