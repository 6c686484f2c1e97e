#include "epix/config.hpp"

#include <nlohmann/json.hpp>

#include <set>

#include "epix/error.hpp"
#include "epix/io.hpp"
#include "epix/text.hpp"

namespace epix {

namespace fs = std::filesystem;
using json = nlohmann::json;

std::string_view to_string(ExtractorKind k) noexcept {
  switch (k) {
    case ExtractorKind::RuleBased: return "rule_based";
    case ExtractorKind::Llm: return "llm";
    case ExtractorKind::Ensemble: return "ensemble";
  }
  return "rule_based";
}

std::optional<ExtractorKind> extractor_kind_from_string(std::string_view s) noexcept {
  for (auto k : {ExtractorKind::RuleBased, ExtractorKind::Llm, ExtractorKind::Ensemble})
    if (text::iequals(s, to_string(k))) return k;
  return std::nullopt;
}

const ExtractorConfig* RunConfig::find_extractor(std::string_view id) const {
  for (const auto& e : extractors)
    if (e.id == id) return &e;
  return nullptr;
}

ModelRegistry RunConfig::registry() const {
  auto r = ModelRegistry::seeded();
  for (const auto& m : models) r.put(m);
  return r;
}

PromptTemplate RunConfig::prompt(const ExtractorConfig& e) const {
  if (prompt_dir.empty()) return PromptTemplate::bundled(e.prompt_template, e.shots);
  auto instruction = prompt_dir / (e.prompt_template + ".txt");
  auto demos = prompt_dir / (e.prompt_template + ".demos.jsonl");
  if (!fs::exists(demos)) demos.clear();
  return PromptTemplate::load(e.prompt_template, instruction, demos, e.shots);
}

fs::path RunConfig::predictions_path(std::string_view extractor_id) const {
  return predictions_dir() / (std::string(extractor_id) + ".jsonl");
}

namespace {

bool valid_id(std::string_view id) {
  if (id.empty()) return false;
  for (char c : id) {
    if (!(text::is_ascii_alpha(c) || text::is_ascii_digit(c) || c == '-' || c == '_' || c == '.')) return false;
  }
  return id != "." && id != "..";
}

}  // namespace

void RunConfig::validate() const {
  if (concurrency == 0) throw ConfigError("concurrency must be at least 1");
  if (extractors.empty()) throw ConfigError("no extractors configured");
  std::set<std::string> ids;
  for (const auto& e : extractors) {
    if (!valid_id(e.id)) throw ConfigError("extractor id '" + e.id + "' must be non-empty [A-Za-z0-9._-]");
    if (!ids.insert(e.id).second) throw ConfigError("duplicate extractor id '" + e.id + "'");
  }
  const auto reg = registry();
  for (const auto& e : extractors) {
    switch (e.kind) {
      case ExtractorKind::RuleBased: break;
      case ExtractorKind::Llm:
        if (e.model.empty()) throw ConfigError("extractor '" + e.id + "' needs a model");
        if (!reg.find(e.model)) throw ConfigError("extractor '" + e.id + "' uses unknown model '" + e.model + "'");
        if (e.prompt_template.empty()) throw ConfigError("extractor '" + e.id + "' needs a template");
        break;
      case ExtractorKind::Ensemble:
        if (e.ensemble.id != e.id) throw ConfigError("ensemble id mismatch for '" + e.id + "'");
        e.ensemble.validate();
        for (const auto& m : e.ensemble.members) {
          const auto* member = find_extractor(m);
          if (!member) throw ConfigError("ensemble '" + e.id + "' references undeclared extractor '" + m + "'");
          if (member->kind == ExtractorKind::Ensemble) {
            throw ConfigError("ensemble '" + e.id + "' member '" + m + "' is itself an ensemble");
          }
        }
        break;
    }
  }
}

void RunConfig::require_corpus() const {
  if (corpus.empty()) throw ConfigError("no corpus path configured");
  if (!fs::is_regular_file(corpus)) throw ConfigError("corpus not found: " + corpus.string());
}

void RunConfig::require_gold() const {
  if (gold.empty()) throw ConfigError("no gold path configured");
  if (!fs::is_regular_file(gold)) throw ConfigError("gold file not found: " + gold.string());
}

namespace {

void check_keys(const json& j, std::string_view where, std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) throw ConfigError(std::string(where) + " must be an object");
  for (const auto& [k, _] : j.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || k == a;
    if (!ok) throw ConfigError("unknown key '" + k + "' in " + std::string(where));
  }
}

std::string get_string(const json& j, const char* key, std::string_view where) {
  const auto& v = j.at(key);
  if (!v.is_string()) throw ConfigError(std::string(where) + "." + key + " must be a string");
  return v.get<std::string>();
}

std::optional<std::string> opt_string(const json& j, const char* key, std::string_view where) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return get_string(j, key, where);
}

std::uint64_t get_uint(const json& j, const char* key, std::string_view where) {
  const auto& v = j.at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    throw ConfigError(std::string(where) + "." + key + " must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

fs::path resolve(const fs::path& base, const std::string& p) {
  if (p.empty()) return {};
  fs::path path(p);
  return (path.is_absolute() ? path : base / path).lexically_normal();
}

std::vector<std::string> string_list(const json& j, const char* key, std::string_view where) {
  const auto& v = j.at(key);
  if (!v.is_array()) throw ConfigError(std::string(where) + "." + key + " must be an array of strings");
  std::vector<std::string> out;
  for (const auto& s : v) {
    if (!s.is_string()) throw ConfigError(std::string(where) + "." + key + " must be an array of strings");
    out.push_back(s.get<std::string>());
  }
  return out;
}

ModelProfile parse_model(const json& j) {
  check_keys(j, "models[]", {"name", "context_length", "parameters", "endpoint", "kind", "api_name"});
  ModelProfile m;
  m.name = get_string(j, "name", "models[]");
  std::string where = "model '" + m.name + "'";
  if (!j.contains("context_length")) throw ConfigError(where + " needs context_length");
  m.context_length = get_uint(j, "context_length", where);
  if (j.contains("parameters") && !j["parameters"].is_null()) m.parameters = get_uint(j, "parameters", where);
  m.endpoint = opt_string(j, "endpoint", where).value_or("");
  m.api_name = opt_string(j, "api_name", where).value_or("");
  if (auto k = opt_string(j, "kind", where)) {
    auto kind = model_kind_from_string(*k);
    if (!kind) throw ConfigError(where + ": kind must be OPEN or COMMERCIAL");
    m.kind = *kind;
  }
  return m;
}

ExtractorConfig parse_extractor(const json& j) {
  check_keys(j, "extractors[]", {"id", "kind", "model", "template", "shots", "members", "policy"});
  ExtractorConfig e;
  e.id = get_string(j, "id", "extractors[]");
  std::string where = "extractor '" + e.id + "'";
  auto kind = extractor_kind_from_string(get_string(j, "kind", where));
  if (!kind) throw ConfigError(where + ": kind must be rule_based, llm or ensemble");
  e.kind = *kind;

  auto forbid = [&](std::initializer_list<const char*> keys) {
    for (auto k : keys)
      if (j.contains(k)) throw ConfigError(where + ": key '" + k + "' does not apply to kind " +
                                           std::string(to_string(e.kind)));
  };
  switch (e.kind) {
    case ExtractorKind::RuleBased: forbid({"model", "template", "shots", "members", "policy"}); break;
    case ExtractorKind::Llm:
      forbid({"members", "policy"});
      if (!j.contains("model")) throw ConfigError(where + " needs a model");
      e.model = get_string(j, "model", where);
      if (auto t = opt_string(j, "template", where)) e.prompt_template = *t;
      if (j.contains("shots")) e.shots = get_uint(j, "shots", where);
      break;
    case ExtractorKind::Ensemble: {
      forbid({"model", "template", "shots"});
      if (!j.contains("members")) throw ConfigError(where + " needs members");
      e.ensemble.id = e.id;
      e.ensemble.members = string_list(j, "members", where);
      if (j.contains("policy")) {
        const auto& p = j["policy"];
        check_keys(p, where + ".policy", {"min_agreement", "tie_break", "priority"});
        if (p.contains("min_agreement")) {
          e.ensemble.policy.min_agreement = static_cast<int>(get_uint(p, "min_agreement", where + ".policy"));
        }
        if (auto t = opt_string(p, "tie_break", where + ".policy")) {
          auto tb = tie_break_from_string(*t);
          if (!tb) throw ConfigError(where + ": tie_break must be priority_order or abstain");
          e.ensemble.policy.tie_break = *tb;
        }
        if (p.contains("priority")) e.ensemble.policy.priority = string_list(p, "priority", where + ".policy");
      }
      break;
    }
  }
  return e;
}

}  // namespace

RunConfig run_config_from_json(std::string_view content, const fs::path& base_dir) {
  auto j = json::parse(content, nullptr, false);
  if (j.is_discarded()) throw SchemaError("config is not valid JSON");
  RunConfig c;
  try {
    check_keys(j, "config", {"corpus", "gold", "output_dir", "transport", "match_mode", "count_attribute",
                             "concurrency", "resources", "models", "extractors"});
    if (auto s = opt_string(j, "corpus", "config")) c.corpus = resolve(base_dir, *s);
    if (auto s = opt_string(j, "gold", "config")) c.gold = resolve(base_dir, *s);
    c.output_dir = resolve(base_dir, opt_string(j, "output_dir", "config").value_or("out"));
    c.transport.cache_dir = c.output_dir / "cache";
    if (j.contains("transport")) {
      const auto& t = j["transport"];
      check_keys(t, "transport", {"mode", "cache_dir", "max_attempts", "backoff_base_ms", "endpoint"});
      if (auto m = opt_string(t, "mode", "transport")) {
        auto mode = transport_mode_from_string(*m);
        if (!mode) throw ConfigError("transport.mode must be live, record or replay");
        c.transport.mode = *mode;
      }
      if (auto s = opt_string(t, "cache_dir", "transport")) c.transport.cache_dir = resolve(base_dir, *s);
      if (t.contains("max_attempts")) {
        c.transport.retry.max_attempts = static_cast<int>(get_uint(t, "max_attempts", "transport"));
        if (c.transport.retry.max_attempts < 1) throw ConfigError("transport.max_attempts must be >= 1");
      }
      if (t.contains("backoff_base_ms")) {
        c.transport.retry.backoff_base = std::chrono::milliseconds(get_uint(t, "backoff_base_ms", "transport"));
      }
      c.transport.endpoint = opt_string(t, "endpoint", "transport").value_or("");
    }
    if (auto m = opt_string(j, "match_mode", "config")) {
      auto mode = match_mode_from_string(*m);
      if (!mode) throw ConfigError("match_mode must be strict_value or detection_only");
      c.match_mode = *mode;
    }
    if (auto a = opt_string(j, "count_attribute", "config")) {
      if (text::iequals(*a, "any")) {
        c.count_attribute.reset();
      } else if (text::iequals(*a, "case")) {
        c.count_attribute = CountAttribute::Case;
      } else if (text::iequals(*a, "death")) {
        c.count_attribute = CountAttribute::Death;
      } else {
        throw ConfigError("count_attribute must be any, case or death");
      }
    }
    if (j.contains("concurrency")) c.concurrency = get_uint(j, "concurrency", "config");
    if (j.contains("resources")) {
      const auto& r = j["resources"];
      check_keys(r, "resources", {"gazetteer", "countries", "prompt_dir"});
      if (auto s = opt_string(r, "gazetteer", "resources")) c.gazetteer = resolve(base_dir, *s);
      if (auto s = opt_string(r, "countries", "resources")) c.countries = resolve(base_dir, *s);
      if (auto s = opt_string(r, "prompt_dir", "resources")) c.prompt_dir = resolve(base_dir, *s);
    }
    if (j.contains("models")) {
      if (!j["models"].is_array()) throw ConfigError("models must be an array");
      for (const auto& m : j["models"]) c.models.push_back(parse_model(m));
    }
    if (!j.contains("extractors") || !j["extractors"].is_array()) {
      throw ConfigError("extractors must be an array");
    }
    for (const auto& e : j["extractors"]) c.extractors.push_back(parse_extractor(e));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  for (const auto& p : {c.gazetteer, c.countries}) {
    if (!p.empty() && !fs::is_regular_file(p)) throw ConfigError("resource not found: " + p.string());
  }
  if (!c.prompt_dir.empty() && !fs::is_directory(c.prompt_dir)) {
    throw ConfigError("prompt_dir not found: " + c.prompt_dir.string());
  }
  c.validate();
  return c;
}

RunConfig load_run_config(const fs::path& path) {
  std::string content;
  try {
    content = io::read_file(path);
  } catch (const IoError& e) {
    throw ConfigError(e.what());
  }
  auto base = fs::absolute(path).parent_path();
  auto c = run_config_from_json(content, base);
  c.source = fs::absolute(path);
  return c;
}

}  // namespace epix
