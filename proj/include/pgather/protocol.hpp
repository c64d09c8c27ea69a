#pragma once

#include <optional>
#include <span>

#include "pgather/ring.hpp"

namespace pgather {

enum class Variant : std::uint8_t { B1, B2, B3 };

const char* to_string(Variant v);

/// Selected algorithm plus the parameters every agent knows.
struct ProtocolVariant {
  Variant tag = Variant::B2;
  int n = 1;
  int k = 1;
  int g = 1;

  bool operator==(const ProtocolVariant&) const = default;
};

/// Raised for k <= 2g, where partial gathering cannot be solved on a
/// 1-interval connected ring.
class Unsolvable : public GatheringError {
 public:
  using GatheringError::GatheringError;
};

class IllegalPc : public GatheringError {
 public:
  using GatheringError::GatheringError;
};

/// B1 for 2g+1 <= k <= 3g-2, B2 for 3g-1 <= k <= 8g-4, B3 for k >= 8g-3.
ProtocolVariant dispatch(int n, int k, int g);

/// Program counter an agent starts from under the given variant.
Pc start_pc(Variant v);

/// Ceil(log2(x)) for x >= 1.
int ceil_log2(int x);

struct TransitionOutput {
  AgentState next;
  BoardWrite origin_writes;   // applied at the current node
  BoardWrite arrival_writes;  // applied at the destination if the move succeeds
  BoardWrite blocked_writes;  // applied at the current node if the move is blocked
  int intent = 0;             // -1, 0 or +1
};

/// One atomic action: pure function of the agent's state and the view of its
/// current whiteboard. `view` is the board as it stood at the start of the round.
TransitionOutput agent_transition(const ProtocolVariant& variant, const AgentState& state, const Whiteboard& view);

// Rank rules, exposed for direct testing.

/// B1 split: 0 stays, +1 joins the forward group, -1 the backward group.
/// `n_agents` is the count at the node when splitting starts (>= g+2).
int more_split_direction(int rank, int n_agents, int g);

/// Sweep launch: +1 or -1 for the two sweep groups, nullopt for agents that
/// terminate in place.
std::optional<int> more2_direction(int rank, int n_agents, int g);

/// Semi-selection candidate test on an observed id sequence: at least 8g-3
/// entries and entry 4g-2 is the strict minimum of the first 8g-3.
bool semi_selection_candidate(std::span<const AgentId> ids, int g);

/// Leg identity used by the phase-synchrony invariant: all live agents of a
/// run share it at every round boundary.
struct Leg {
  Phase phase = Phase::Selection;
  int iteration = 0;
  int index = 0;
  bool operator==(const Leg&) const = default;
};
Leg leg_of(const AgentState& state);

}  // namespace pgather
