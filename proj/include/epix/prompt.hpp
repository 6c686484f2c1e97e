#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "epix/corpus.hpp"

namespace epix {

enum class ModelKind { Open, Commercial };

std::string_view to_string(ModelKind k) noexcept;
std::optional<ModelKind> model_kind_from_string(std::string_view s) noexcept;

struct ModelProfile {
  std::string name;
  std::size_t context_length = 0;           // tokens, > 0
  std::optional<std::uint64_t> parameters;  // unpublished for the commercial models
  std::string endpoint;                     // chat-completion URL; empty = use the run default
  ModelKind kind = ModelKind::Open;
  std::string api_name;                     // "model" value on the wire; empty = name

  const std::string& wire_name() const noexcept { return api_name.empty() ? name : api_name; }
};

// Named model profiles. Lookups are case-insensitive.
class ModelRegistry {
 public:
  // Pythia-12b, Mpt-30b-chat, Llama-2-70b-chat, Mistral-7b-openorca,
  // Zephyr-7b-alpha, Gpt-35-turbo-16k, Gpt-4-32k.
  static ModelRegistry seeded();

  // Adds or replaces by name. Throws ConfigError when context_length is 0.
  void put(ModelProfile profile);
  const ModelProfile* find(std::string_view name) const;
  const std::vector<ModelProfile>& profiles() const noexcept { return profiles_; }

 private:
  std::vector<ModelProfile> profiles_;
};

struct Message {
  std::string role;
  std::string content;

  bool operator==(const Message&) const = default;
};

// One worked example: a short report and its answer, keys in output order.
struct Demonstration {
  std::string excerpt;
  std::vector<std::pair<std::string, std::string>> answer;
};

struct PromptTemplate {
  std::string name;
  std::string instruction;
  std::vector<std::string> output_keys{"virus", "country", "date", "cases"};
  std::vector<Demonstration> demonstrations;
  std::string absent_marker = "None";

  // Throws ConfigError unless every demonstration answers exactly output_keys.
  void validate() const;

  // Bundled template by name ("extraction-v1") with the first shots
  // demonstrations; shots must not exceed the bundled count.
  static PromptTemplate bundled(std::string_view name = "extraction-v1", std::size_t shots = 0);
  // instruction: plain text file. demonstrations: line-delimited JSON objects
  // {"excerpt": ..., "answer": {...}}.
  static PromptTemplate load(std::string name, const std::filesystem::path& instruction,
                             const std::filesystem::path& demonstrations, std::size_t shots);
  static PromptTemplate from_text(std::string name, std::string instruction, std::string_view demonstrations_jsonl,
                                  std::size_t shots);
};

inline constexpr std::size_t kAnswerReserveTokens = 512;
inline constexpr std::size_t kCharsPerToken = 4;
inline constexpr std::size_t kMessageOverheadTokens = 4;
inline constexpr std::string_view kQueryPrefix = "Report:\n";

std::size_t estimate_tokens(std::string_view s) noexcept;

struct Prompt {
  std::vector<Message> messages;
  bool truncated = false;
  std::size_t body_budget_chars = 0;  // characters of body the query could hold
};

// Instruction as the system message, each demonstration as a user/assistant
// pair, then the query built from the document body. The body keeps its head
// and is cut to (context_length - answer reserve - overhead) * 4 characters,
// where overhead counts the fixed messages, the query prefix, and 4 tokens of
// framing per message. Throws BudgetExhausted when nothing of the body fits.
Prompt build_messages(const Document& doc, const PromptTemplate& prompt, const ModelProfile& model);

// Demonstration answer rendered as a JSON object in output-key order.
std::string render_answer(const std::vector<std::pair<std::string, std::string>>& answer);

}  // namespace epix
