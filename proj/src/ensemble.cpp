#include "epix/ensemble.hpp"

#include <algorithm>
#include <set>

#include "epix/error.hpp"
#include "epix/text.hpp"

namespace epix {

std::string_view to_string(TieBreak t) noexcept {
  return t == TieBreak::PriorityOrder ? "priority_order" : "abstain";
}

std::optional<TieBreak> tie_break_from_string(std::string_view s) noexcept {
  if (text::iequals(s, "priority_order")) return TieBreak::PriorityOrder;
  if (text::iequals(s, "abstain")) return TieBreak::Abstain;
  return std::nullopt;
}

void EnsembleConfig::validate() const {
  if (members.size() < 2) throw ConfigError("ensemble '" + id + "' needs at least two members");
  std::set<std::string> seen(members.begin(), members.end());
  if (seen.size() != members.size()) throw ConfigError("ensemble '" + id + "' has duplicate members");
  if (policy.min_agreement < 1 || static_cast<std::size_t>(policy.min_agreement) > members.size()) {
    throw ConfigError("ensemble '" + id + "': min_agreement must be between 1 and the member count");
  }
  if (!policy.priority.empty()) {
    std::set<std::string> prio(policy.priority.begin(), policy.priority.end());
    if (prio != seen || policy.priority.size() != members.size()) {
      throw ConfigError("ensemble '" + id + "': priority must list every member exactly once");
    }
  }
}

EnsembleConfig EnsembleConfig::open_ensemble(std::string id) {
  EnsembleConfig c;
  c.id = std::move(id);
  c.members = {"llama-2-70b-chat", "mistral-7b-openorca", "zephyr-7b-alpha"};
  c.policy.priority = c.members;
  return c;
}

namespace {

// Priority rank per member index, 0 = highest.
std::vector<std::size_t> ranks(const EnsembleConfig& config) {
  std::vector<std::size_t> rank(config.members.size());
  for (std::size_t i = 0; i < config.members.size(); ++i) {
    rank[i] = i;
    if (!config.policy.priority.empty()) {
      auto it = std::find(config.policy.priority.begin(), config.policy.priority.end(), config.members[i]);
      rank[i] = static_cast<std::size_t>(it - config.policy.priority.begin());
    }
  }
  return rank;
}

}  // namespace

VoteResult vote(Field field, std::span<const std::optional<FieldValue>> candidates, const EnsembleConfig& config) {
  if (candidates.size() != config.members.size()) {
    throw ConfigError("ensemble '" + config.id + "': " + std::to_string(candidates.size()) +
                      " candidates for " + std::to_string(config.members.size()) + " members");
  }
  // Groups of member indices; the first member of a group is its representative value.
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    auto same = std::find_if(groups.begin(), groups.end(), [&](const auto& g) {
      const auto& a = candidates[g.front()];
      const auto& b = candidates[i];
      if (!a || !b) return !a && !b;
      return values_match(field, *a, *b);
    });
    if (same == groups.end()) {
      groups.push_back({i});
    } else {
      same->push_back(i);
    }
  }

  std::size_t largest = 0;
  for (const auto& g : groups) largest = std::max(largest, g.size());
  std::vector<const std::vector<std::size_t>*> top;
  for (const auto& g : groups)
    if (g.size() == largest) top.push_back(&g);

  const auto rank = ranks(config);
  auto best_member = [&](const std::vector<std::size_t>& g) {
    return *std::min_element(g.begin(), g.end(), [&](auto a, auto b) { return rank[a] < rank[b]; });
  };

  const std::vector<std::size_t>* winner = nullptr;
  bool decisive = top.size() == 1 && largest >= static_cast<std::size_t>(config.policy.min_agreement);
  if (decisive) {
    winner = top.front();
  } else if (config.policy.tie_break == TieBreak::PriorityOrder) {
    winner = *std::min_element(top.begin(), top.end(),
                               [&](auto* a, auto* b) { return rank[best_member(*a)] < rank[best_member(*b)]; });
  }

  VoteResult result;
  if (!winner) return result;
  result.group = *winner;
  result.representative = best_member(*winner);
  result.value = candidates[*result.representative];
  return result;
}

std::optional<FieldValue> vote_field(Field field, std::span<const std::optional<FieldValue>> candidates,
                                     const EnsembleConfig& config) {
  return vote(field, candidates, config).value;
}

ExtractionRecord ensemble_records(std::span<const ExtractionRecord> records, const EnsembleConfig& config) {
  config.validate();
  if (records.size() != config.members.size()) {
    throw ConfigError("ensemble '" + config.id + "' expects " + std::to_string(config.members.size()) +
                      " member records, got " + std::to_string(records.size()));
  }
  std::vector<const ExtractionRecord*> ordered(config.members.size(), nullptr);
  for (const auto& r : records) {
    auto it = std::find(config.members.begin(), config.members.end(), r.extractor_id);
    if (it == config.members.end()) {
      throw ConfigError("ensemble '" + config.id + "' got a record from non-member '" + r.extractor_id + "'");
    }
    auto& slot = ordered[static_cast<std::size_t>(it - config.members.begin())];
    if (slot) throw ConfigError("ensemble '" + config.id + "' got two records from '" + r.extractor_id + "'");
    slot = &r;
  }
  const auto& doc_id = ordered.front()->document_id;
  for (const auto* r : ordered) {
    if (r->document_id != doc_id) {
      throw ConfigError("ensemble '" + config.id + "' member records refer to different documents");
    }
  }

  ExtractionRecord out;
  out.document_id = doc_id;
  out.extractor_id = config.id;
  std::vector<std::optional<FieldValue>> candidates(ordered.size());
  for (auto field : kAllFields) {
    for (std::size_t i = 0; i < ordered.size(); ++i) candidates[i] = ordered[i]->value(field);
    auto result = vote(field, candidates, config);
    if (result.value) out.set(field, *ordered[*result.representative]->raw(field), *result.value);
  }
  for (const auto* r : ordered) {
    out.flags.truncated_input = out.flags.truncated_input || r->flags.truncated_input;
  }
  return out;
}

}  // namespace epix
