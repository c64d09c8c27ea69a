#pragma once

#include "pgather/engine.hpp"

namespace pgather {

/// Independent simulator: each agent runs as a resumable script that reads
/// like the pseudocode, driven by its own round loop. Produces the same trace,
/// rounds, moves and link passes as run(). In the final configuration only
/// id, position, phase, n_visited and terminated are filled in per agent.
ExecutionResult reference_run(const Configuration& initial, const ProtocolVariant& variant,
                              const AdversarySpec& adversary, int round_limit, const OrderPolicy& order = {});

}  // namespace pgather
