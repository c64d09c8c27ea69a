#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pgather/ring.hpp"

namespace pgather {

struct NoneMissing {
  bool operator==(const NoneMissing&) const = default;
};

struct FixedLink {
  LinkIndex link = 0;
  bool operator==(const FixedLink&) const = default;
};

/// Removes nothing with probability p_none, otherwise a uniform link. The
/// choice for a round depends only on (seed, round).
struct RandomUniform {
  std::uint64_t seed = 0;
  double p_none = 0.25;
  bool operator==(const RandomUniform&) const = default;
};

/// Entry `round` of the schedule, none once exhausted.
struct Scripted {
  std::vector<std::optional<LinkIndex>> schedule;
  bool operator==(const Scripted&) const = default;
};

enum class BlockerPolicy : std::uint8_t { BlockFrontOfLargest, IsolateSmallest, SplitMajority };

struct AdaptiveBlocker {
  BlockerPolicy policy = BlockerPolicy::BlockFrontOfLargest;
  bool operator==(const AdaptiveBlocker&) const = default;
};

using AdversarySpec = std::variant<NoneMissing, FixedLink, RandomUniform, Scripted, AdaptiveBlocker>;

const char* to_string(BlockerPolicy policy);
std::optional<BlockerPolicy> parse_blocker_policy(const std::string& name);

/// Short stable label, e.g. "fixed(7)" or "random(3,0.25)".
std::string describe(const AdversarySpec& spec);

/// Throws InvalidArgument if the spec names links outside a ring of size n or
/// has p_none outside [0,1].
void validate(const AdversarySpec& spec, int n);

/// Missing link for the round about to start in `config`.
std::optional<LinkIndex> choose_missing(const AdversarySpec& spec, const Configuration& config);

/// Two handcrafted schedules for ring size n. S1 alternates e_0 and e_{n/2}
/// every n rounds; S2 is a blocker that advances one link every two rounds.
Scripted scripted_alternating(int n);
Scripted scripted_crawler(int n);

}  // namespace pgather
