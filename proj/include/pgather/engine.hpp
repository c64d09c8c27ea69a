#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pgather/adversary.hpp"
#include "pgather/protocol.hpp"
#include "pgather/ring.hpp"

namespace pgather {

/// Order in which agents act within a round: ascending id, or a per-round
/// permutation drawn from (seed, round).
struct OrderPolicy {
  bool shuffled = false;
  std::uint64_t seed = 0;
  bool operator==(const OrderPolicy&) const = default;
};

/// Indices into config.agents in activation order for the current round.
std::vector<std::size_t> activation_order(const OrderPolicy& policy, const Configuration& config);

/// One whiteboard field that changed during an action. `id` is the only field
/// that can be unset.
struct FieldDelta {
  NodeIndex node = 0;
  std::string field;
  std::optional<std::int64_t> before;
  std::optional<std::int64_t> after;
  bool operator==(const FieldDelta&) const = default;
};

struct AgentRecord {
  AgentId id = 0;
  NodeIndex position = 0;  // after the action
  Phase phase = Phase::Selection;
  int intent = 0;
  bool blocked = false;
  std::vector<FieldDelta> deltas;
  bool operator==(const AgentRecord&) const = default;
};

struct RoundRecord {
  int round = 0;
  std::optional<LinkIndex> missing;
  std::vector<AgentRecord> agents;
  bool operator==(const RoundRecord&) const = default;
};

/// Appends the deltas between two states of board `node`.
void diff_board(NodeIndex node, const Whiteboard& before, const Whiteboard& after, std::vector<FieldDelta>& out);

using LinkPasses = std::vector<std::array<int, kPhaseCount>>;

enum class Outcome : std::uint8_t { AllTerminated, RoundLimitExceeded };
const char* to_string(Outcome outcome);

struct ExecutionResult {
  Configuration final;
  int rounds_elapsed = 0;
  long long total_moves = 0;
  LinkPasses link_passes;
  std::vector<RoundRecord> trace;
  Outcome outcome = Outcome::RoundLimitExceeded;
};

/// Adds the successful moves of one round to `passes`; returns how many.
long long tally_moves(const RoundRecord& record, const RingTopology& topology, LinkPasses& passes);

/// One synchronous round. Every live agent acts once; each action reads its
/// node's board as it stood when the round began.
Configuration step(const Configuration& config, const ProtocolVariant& variant, std::optional<LinkIndex> missing,
                   const OrderPolicy& order = {}, RoundRecord* record = nullptr);

/// Default safety budget: 20n + 3n*ceil(log2 g).
int default_round_limit(int n, int g);

using RoundObserver = std::function<void(const Configuration&)>;

/// Runs rounds until every agent has terminated or `round_limit` rounds have
/// elapsed. The observer sees the initial configuration and every round
/// boundary after it.
ExecutionResult run(const Configuration& initial, const ProtocolVariant& variant, const AdversarySpec& adversary,
                    int round_limit, const OrderPolicy& order = {}, const RoundObserver& observer = {});

/// One NDJSON line per round record.
std::string serialize_trace(const std::vector<RoundRecord>& trace);

inline constexpr int kTraceSchemaVersion = 1;

}  // namespace pgather
