#include <doctest.h>

#include <nlohmann/json.hpp>

#include <sstream>

#include "e2e.hpp"
#include "epix/app.hpp"
#include "epix/config.hpp"
#include "epix/error.hpp"
#include "epix/record.hpp"
#include "support.hpp"

using namespace epix;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json base_config() {
  return json::parse(R"({
    "corpus": "corpus.jsonl",
    "gold": "gold.jsonl",
    "models": [{"name": "m", "context_length": 4096}],
    "extractors": [
      {"id": "rules", "kind": "rule_based"},
      {"id": "a", "kind": "llm", "model": "m"},
      {"id": "b", "kind": "llm", "model": "Zephyr-7b-alpha", "shots": 3},
      {"id": "ens", "kind": "ensemble", "members": ["rules", "a", "b"]}
    ]
  })");
}

RunConfig parse(const json& j) { return run_config_from_json(j.dump(), "/base"); }

// Drops every line starting with "# timestamp" and every "timestamp" key.
std::string without_timestamp(std::string s) {
  std::string out;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) {
    if (line.rfind("# timestamp", 0) == 0) continue;
    auto k = line.find("\"timestamp\"");
    if (k != std::string::npos) {
      auto end = line.find('"', line.find('"', line.find(':', k) + 1) + 1);
      line.erase(k, end + 1 - k);
    }
    out += line + "\n";
  }
  return out;
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("valid config resolves paths and defaults") {
    auto c = parse(base_config());
    CHECK(c.corpus == fs::path("/base/corpus.jsonl"));
    CHECK(c.output_dir == fs::path("/base/out"));
    CHECK(c.transport.mode == TransportMode::Replay);
    CHECK(c.match_mode == MatchMode::StrictValue);
    CHECK(c.concurrency == 4);
    REQUIRE(c.find_extractor("b"));
    CHECK(c.find_extractor("b")->shots == 3);
    CHECK(c.find_extractor("ens")->ensemble.members.size() == 3);
    CHECK(c.registry().find("m"));
    CHECK(c.registry().find("Pythia-12b"));
    CHECK(c.predictions_path("a") == fs::path("/base/out/predictions/a.jsonl"));
  }

  TEST_CASE("rejected configs") {
    auto bad = [](auto mutate) {
      auto j = base_config();
      mutate(j);
      return j;
    };
    CHECK_THROWS_AS(parse(bad([](json& j) { j["extractors"][3]["members"][2] = "ghost"; })), ConfigError);
    CHECK_THROWS_AS(parse(bad([](json& j) { j["extractors"][1]["id"] = "rules"; })), ConfigError);
    CHECK_THROWS_AS(parse(bad([](json& j) { j["extractors"][1]["model"] = "unknown-model"; })), ConfigError);
    CHECK_THROWS_AS(parse(bad([](json& j) { j["extractors"][0]["model"] = "m"; })), ConfigError);
    CHECK_THROWS_AS(parse(bad([](json& j) { j["extractors"][0]["id"] = "bad id"; })), ConfigError);
    CHECK_THROWS_AS(parse(bad([](json& j) { j["unknown_key"] = 1; })), ConfigError);
    CHECK_THROWS_AS(parse(bad([](json& j) { j["concurrency"] = 0; })), ConfigError);
    CHECK_THROWS_AS(parse(bad([](json& j) { j["match_mode"] = "fuzzy"; })), ConfigError);
    CHECK_THROWS_AS(parse(bad([](json& j) { j["transport"] = {{"mode", "sometimes"}}; })), ConfigError);
    CHECK_THROWS_AS(parse(bad([](json& j) { j["models"][0]["context_length"] = 0; })), ConfigError);
    CHECK_THROWS_AS(parse(bad([](json& j) {
                      j["extractors"].push_back({{"id", "meta"}, {"kind", "ensemble"}, {"members", {"ens", "a"}}});
                    })),
                    ConfigError);
    CHECK_THROWS_AS(parse(bad([](json& j) { j["extractors"][3]["policy"] = {{"min_agreement", 5}}; })),
                    ConfigError);
    CHECK_THROWS_AS(run_config_from_json("{not json", "/base"), SchemaError);
  }

  TEST_CASE("load_run_config reports missing files as config errors") {
    testing::TempDir dir;
    CHECK_THROWS_AS(load_run_config(dir / "missing.json"), ConfigError);
    testing::spit(dir / "c.json", base_config().dump());
    auto c = load_run_config(dir / "c.json");
    CHECK(c.gold == dir / "gold.jsonl");
    CHECK_THROWS_AS(c.require_gold(), ConfigError);
  }
}

TEST_SUITE("cli") {
  TEST_CASE("ingest three DON pages") {
    testing::TempDir dir;
    fs::create_directories(dir / "raw");
    for (auto name : {"d01.html", "d02.html", "d03.html"})
      fs::copy_file(testing::fixture("e2e/raw") / name, dir / "raw" / name);
    std::ostringstream out, err;
    CHECK(cmd_ingest({Source::WhoDon, dir / "raw", dir / "corpus.jsonl"}, out, err) == kExitOk);
    CHECK(out.str().find("ingested 3 documents") != std::string::npos);
    auto docs = load_corpus(dir / "corpus.jsonl");
    REQUIRE(docs.size() == 3);
    CHECK(docs[0].id == "d01");
    CHECK(docs[0].source == Source::WhoDon);
    CHECK(docs[0].published.has_value());
  }

  TEST_CASE("ingest an empty directory and a missing path") {
    testing::TempDir dir;
    fs::create_directories(dir / "empty");
    std::ostringstream out, err;
    CHECK(cmd_ingest({Source::Promed, dir / "empty", dir / "corpus.jsonl"}, out, err) == kExitOk);
    CHECK(out.str().find("ingested 0 documents") != std::string::npos);
    CHECK(err.str().find("warning") != std::string::npos);
    CHECK((!fs::exists(dir / "corpus.jsonl") || fs::file_size(dir / "corpus.jsonl") == 0));

    std::ostringstream out2, err2;
    CHECK(cmd_ingest({Source::Promed, dir / "nope", dir / "c2.jsonl"}, out2, err2) == kExitInput);
    CHECK_FALSE(err2.str().empty());
  }

  TEST_CASE("ingest ProMED posts") {
    testing::TempDir dir;
    std::ostringstream out, err;
    CHECK(cmd_ingest({Source::Promed, testing::fixture("promed"), dir / "corpus.jsonl"}, out, err) == kExitOk);
    CHECK(load_corpus(dir / "corpus.jsonl").size() == 3);
  }

  TEST_CASE("rule-based extraction, resume, and evaluation") {
    testing::TempDir dir;
    auto config = load_run_config(testing::copy_e2e_fixture(dir));
    std::ostringstream out, err;
    REQUIRE(cmd_ingest({Source::WhoDon, dir / "raw", config.corpus}, out, err) == kExitOk);
    CHECK(cmd_extract(config, {"epitator"}, out, err) == kExitOk);
    auto preds = load_predictions(config.predictions_path("epitator"));
    CHECK(preds.size() == 10);
    CHECK_FALSE(fs::exists(config.predictions_path("alpha")));

    std::ostringstream again, err2;
    CHECK(cmd_extract(config, {"epitator"}, again, err2) == kExitOk);
    CHECK(again.str().find("(0 new)") != std::string::npos);
    CHECK(load_predictions(config.predictions_path("epitator")) == preds);

    std::ostringstream eval_out, eval_err;
    CHECK(cmd_evaluate(config, eval_out, eval_err) == kExitEvaluation);  // llm predictions missing
    CHECK(eval_err.str().find("alpha") != std::string::npos);
  }

  TEST_CASE("replay without a cache entry exits 3 and names the document") {
    testing::TempDir dir;
    auto config = load_run_config(testing::copy_e2e_fixture(dir));
    std::ostringstream out, err;
    REQUIRE(cmd_ingest({Source::WhoDon, dir / "raw", config.corpus}, out, err) == kExitOk);
    // Remove the cache entry that d04 needs by changing d04's body.
    auto docs = load_corpus(config.corpus);
    docs[3].body += " Additional paragraph.";
    save_corpus(docs, config.corpus);
    config.concurrency = 1;
    CHECK(cmd_extract(config, {"alpha"}, out, err) == kExitTransport);
    CHECK(err.str().find("'d04'") != std::string::npos);
    // Completed records survive the failure.
    auto partial = load_predictions(config.predictions_path("alpha"));
    CHECK(partial.size() == 3);
  }

  TEST_CASE("full replay pipeline is repeatable") {
    testing::TempDir dir;
    auto config = load_run_config(testing::copy_e2e_fixture(dir));
    auto first = testing::run_pipeline(config, dir / "raw");
    INFO(first.err);
    REQUIRE(first.ok());
    auto report_csv = testing::slurp(config.reports_dir() / "report.csv");
    auto report_json = testing::slurp(config.reports_dir() / "report.json");
    auto ensemble = testing::slurp(config.predictions_path("ensemble"));

    fs::remove_all(config.output_dir);
    auto second = testing::run_pipeline(config, dir / "raw");
    REQUIRE(second.ok());
    CHECK(testing::slurp(config.reports_dir() / "report.csv") == report_csv);
    CHECK(testing::slurp(config.predictions_path("ensemble")) == ensemble);
    CHECK(without_timestamp(testing::slurp(config.reports_dir() / "report.json")) == without_timestamp(report_json));

    // Ensemble is perfect on this fixture; the beta member is not.
    auto report = load_report(config.reports_dir() / "report.json");
    for (auto f : kAllFields) CHECK(report.cell("ensemble", f)->metrics.f1 == 1.0);
    CHECK(report.cell("beta", Field::Date)->metrics.f1 < 1.0);
  }

  TEST_CASE("report conversions") {
    testing::TempDir dir;
    auto config = load_run_config(testing::copy_e2e_fixture(dir));
    REQUIRE(testing::run_pipeline(config, dir / "raw").ok());
    auto saved = config.reports_dir() / "report.json";
    for (auto f : {ReportFormat::Csv, ReportFormat::Plot, ReportFormat::Jsonl, ReportFormat::Text}) {
      std::ostringstream out, err;
      CHECK(cmd_report(saved, f, dir / "converted", out, err) == kExitOk);
      CHECK(testing::slurp(dir / "converted") == testing::slurp(config.reports_dir() / std::string(file_name(f))));
    }
    std::ostringstream out, err;
    CHECK(cmd_report(saved, ReportFormat::Csv, {}, out, err) == kExitOk);
    CHECK(out.str() == testing::slurp(config.reports_dir() / "report.csv"));

    std::ostringstream o2, e2;
    CHECK(cmd_report(dir / "missing.json", ReportFormat::Csv, {}, o2, e2) == kExitInput);
    testing::spit(dir / "empty.json", R"({"metadata":{"mode":"strict_value","gold_path":"","corpus_digest":"","timestamp":""},"extractors":[],"cells":[]})");
    std::ostringstream o3, e3;
    CHECK(cmd_report(dir / "empty.json", ReportFormat::Csv, {}, o3, e3) == kExitEvaluation);
  }
}
