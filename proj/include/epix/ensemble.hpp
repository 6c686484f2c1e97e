#pragma once

// Per-field majority voting over the records of several extractors.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "epix/normalize.hpp"
#include "epix/record.hpp"

namespace epix {

enum class TieBreak { PriorityOrder, Abstain };

std::string_view to_string(TieBreak t) noexcept;
std::optional<TieBreak> tie_break_from_string(std::string_view s) noexcept;

struct VotePolicy {
  int min_agreement = 2;
  TieBreak tie_break = TieBreak::PriorityOrder;
  std::vector<std::string> priority;  // extractor ids, highest first; empty = member order
};

struct EnsembleConfig {
  std::string id;
  std::vector<std::string> members;  // ordered extractor ids
  VotePolicy policy;

  // >= 2 distinct members, 1 <= min_agreement <= members, and a priority
  // list, when given, that is a permutation of the members. Throws
  // ConfigError.
  void validate() const;

  // The three open-model members in their published order, 2-of-3 agreement,
  // priority in member order.
  static EnsembleConfig open_ensemble(std::string id = "open-ensemble");
};

struct VoteResult {
  std::optional<FieldValue> value;
  std::vector<std::size_t> group;  // member indices agreeing with the winner
  std::optional<std::size_t> representative;  // highest-priority member of the winning group
};

// Candidates are grouped by values_match equivalence; absent candidates form
// their own group. The largest group reaching min_agreement wins. When no
// group reaches it, or several largest groups tie, PRIORITY_ORDER picks the
// largest group holding the highest-priority member and ABSTAIN returns
// absent. An absent winning group yields an absent value.
//
// candidates[i] belongs to config.members[i]; throws ConfigError on a size
// mismatch.
VoteResult vote(Field field, std::span<const std::optional<FieldValue>> candidates, const EnsembleConfig& config);

std::optional<FieldValue> vote_field(Field field, std::span<const std::optional<FieldValue>> candidates,
                                     const EnsembleConfig& config);

// Votes each field independently. The winner's raw text comes from the
// highest-priority member of the winning group. records may arrive in any
// order but must hold exactly one record per member, all for one document.
ExtractionRecord ensemble_records(std::span<const ExtractionRecord> records, const EnsembleConfig& config);

}  // namespace epix
