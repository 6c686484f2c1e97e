#include "epix/prompt.hpp"

#include <nlohmann/json.hpp>

#include "epix/error.hpp"
#include "epix/io.hpp"
#include "epix/resources.hpp"
#include "epix/text.hpp"

namespace epix {

std::string_view to_string(ModelKind k) noexcept { return k == ModelKind::Open ? "OPEN" : "COMMERCIAL"; }

std::optional<ModelKind> model_kind_from_string(std::string_view s) noexcept {
  if (text::iequals(s, "OPEN")) return ModelKind::Open;
  if (text::iequals(s, "COMMERCIAL")) return ModelKind::Commercial;
  return std::nullopt;
}

ModelRegistry ModelRegistry::seeded() {
  constexpr std::uint64_t kB = 1'000'000'000ULL;
  ModelRegistry r;
  r.put({"Pythia-12b", 4096, 12 * kB, "", ModelKind::Open, ""});
  r.put({"Mpt-30b-chat", 8192, 30 * kB, "", ModelKind::Open, ""});
  r.put({"Llama-2-70b-chat", 4096, 70 * kB, "", ModelKind::Open, ""});
  r.put({"Mistral-7b-openorca", 4096, 7 * kB, "", ModelKind::Open, ""});
  // Context length not published alongside the parameter count; uses the
  // 4,096-token window of its Mistral base.
  r.put({"Zephyr-7b-alpha", 4096, 7 * kB, "", ModelKind::Open, ""});
  r.put({"Gpt-35-turbo-16k", 16384, std::nullopt, "", ModelKind::Commercial, ""});
  r.put({"Gpt-4-32k", 32768, std::nullopt, "", ModelKind::Commercial, ""});
  return r;
}

void ModelRegistry::put(ModelProfile profile) {
  if (profile.name.empty()) throw ConfigError("model profile needs a name");
  if (profile.context_length == 0) throw ConfigError("model '" + profile.name + "' needs context_length > 0");
  for (auto& p : profiles_) {
    if (text::iequals(p.name, profile.name)) {
      p = std::move(profile);
      return;
    }
  }
  profiles_.push_back(std::move(profile));
}

const ModelProfile* ModelRegistry::find(std::string_view name) const {
  for (const auto& p : profiles_)
    if (text::iequals(p.name, name)) return &p;
  return nullptr;
}

void PromptTemplate::validate() const {
  if (output_keys.empty()) throw ConfigError("prompt '" + name + "' has no output keys");
  for (std::size_t i = 0; i < demonstrations.size(); ++i) {
    const auto& d = demonstrations[i];
    bool same = d.answer.size() == output_keys.size();
    for (std::size_t k = 0; same && k < output_keys.size(); ++k) same = d.answer[k].first == output_keys[k];
    if (!same) {
      throw ConfigError("prompt '" + name + "': demonstration " + std::to_string(i + 1) +
                        " must answer exactly the output keys in order");
    }
  }
}

PromptTemplate PromptTemplate::from_text(std::string name, std::string instruction,
                                         std::string_view demonstrations_jsonl, std::size_t shots) {
  PromptTemplate t;
  t.name = std::move(name);
  t.instruction = std::string(text::trim(instruction));
  std::vector<Demonstration> all;
  io::for_each_line(demonstrations_jsonl, [&](std::string_view line, std::size_t line_no) {
    if (text::trim(line).empty()) return;
    auto j = nlohmann::ordered_json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("excerpt") || !j["excerpt"].is_string() ||
        !j.contains("answer") || !j["answer"].is_object()) {
      throw SchemaError("demonstration must be {\"excerpt\": string, \"answer\": object}", line_no);
    }
    Demonstration d;
    d.excerpt = j["excerpt"].get<std::string>();
    for (const auto& [k, v] : j["answer"].items()) {
      if (!v.is_string()) throw SchemaError("demonstration answer values must be strings", line_no);
      d.answer.emplace_back(k, v.get<std::string>());
    }
    all.push_back(std::move(d));
  });
  if (shots > all.size()) {
    throw ConfigError("prompt '" + t.name + "' has " + std::to_string(all.size()) + " demonstrations, " +
                      std::to_string(shots) + " requested");
  }
  all.resize(shots);
  t.demonstrations = std::move(all);
  t.validate();
  return t;
}

PromptTemplate PromptTemplate::bundled(std::string_view name, std::size_t shots) {
  auto instruction = bundled_resource("prompts/" + std::string(name) + ".txt");
  if (!instruction) throw ConfigError("no bundled prompt named '" + std::string(name) + "'");
  auto demos = bundled_resource("prompts/" + std::string(name) + ".demos.jsonl");
  return from_text(std::string(name), std::string(*instruction), demos.value_or(""), shots);
}

PromptTemplate PromptTemplate::load(std::string name, const std::filesystem::path& instruction,
                                    const std::filesystem::path& demonstrations, std::size_t shots) {
  std::string demos = demonstrations.empty() ? std::string() : io::read_file(demonstrations);
  return from_text(std::move(name), io::read_file(instruction), demos, shots);
}

std::size_t estimate_tokens(std::string_view s) noexcept {
  return (text::utf8_length(s) + kCharsPerToken - 1) / kCharsPerToken;
}

std::string render_answer(const std::vector<std::pair<std::string, std::string>>& answer) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [k, v] : answer) j[k] = v;
  return j.dump();
}

Prompt build_messages(const Document& doc, const PromptTemplate& prompt, const ModelProfile& model) {
  prompt.validate();
  Prompt out;
  out.messages.push_back({"system", prompt.instruction});
  for (const auto& d : prompt.demonstrations) {
    out.messages.push_back({"user", std::string(kQueryPrefix) + d.excerpt});
    out.messages.push_back({"assistant", render_answer(d.answer)});
  }

  std::size_t overhead = estimate_tokens(kQueryPrefix);
  for (const auto& m : out.messages) overhead += estimate_tokens(m.content);
  overhead += kMessageOverheadTokens * (out.messages.size() + 1);
  const std::size_t used = kAnswerReserveTokens + overhead;
  if (used >= model.context_length) {
    throw BudgetExhausted("instruction and demonstrations need " + std::to_string(used) + " of " +
                          std::to_string(model.context_length) + " tokens for model " + model.name);
  }
  out.body_budget_chars = (model.context_length - used) * kCharsPerToken;
  auto kept = text::utf8_prefix(doc.body, out.body_budget_chars);
  out.truncated = kept.size() < doc.body.size();
  out.messages.push_back({"user", std::string(kQueryPrefix) + std::string(kept)});
  return out;
}

}  // namespace epix
