#pragma once

#include <array>
#include <optional>

#include "pgather/engine.hpp"

namespace pgather {

/// True iff every agent has terminated and every occupied node holds at least
/// g agents.
bool check_partial_gathering(const Configuration& config, int g);

struct PhaseBound {
  int observed = 0;           // max passes over a single link
  std::optional<int> cap;     // none if the phase is not capped
  bool operator==(const PhaseBound&) const = default;
};

struct BoundReport {
  int rounds_elapsed = 0;
  int round_cap = 0;
  std::array<PhaseBound, kPhaseCount> per_phase{};
  long long total_moves = 0;
  long long move_cap = 0;
  bool pass = false;
};

int round_cap(const ProtocolVariant& v);
long long move_cap(const ProtocolVariant& v);
std::optional<int> link_pass_cap(const ProtocolVariant& v, Phase phase);

BoundReport check_bounds(const ExecutionResult& result, const ProtocolVariant& variant);

/// a_0 at v_0, a_1..a_{k-1} at v_{n-k+1}..v_{n-1}.
std::vector<NodeIndex> clustered_placement(int n, int k);

/// Runs the dispatched variant on the clustered placement with link e_{n-1}
/// missing in every round.
ExecutionResult lower_bound_demo(int n, int k, int g);

}  // namespace pgather
