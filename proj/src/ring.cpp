#include "pgather/ring.hpp"

#include <algorithm>
#include <set>

namespace pgather {

RingTopology::RingTopology(int n) : n_(n) {
  if (n < 1) throw InvalidArgument("ring needs at least one node");
}

NodeIndex RingTopology::neighbor(NodeIndex node, int dir) const { return mod(static_cast<long long>(node) + dir); }

LinkIndex RingTopology::link_between(NodeIndex node, int dir) const { return dir > 0 ? node : mod(node - 1); }

int RingTopology::distance(NodeIndex i, NodeIndex j) const { return std::min(mod(j - i), mod(i - j)); }

int Whiteboard::rank_of(AgentId agent) const {
  auto it = std::lower_bound(registry.begin(), registry.end(), agent);
  if (it == registry.end() || *it != agent) return 0;
  return static_cast<int>(it - registry.begin()) + 1;
}

void Whiteboard::add_occupant(AgentId agent) {
  auto it = std::lower_bound(registry.begin(), registry.end(), agent);
  if (it != registry.end() && *it == agent) throw InconsistentState("agent registered twice on one board");
  registry.insert(it, agent);
  n_agents = static_cast<int>(registry.size());
}

void Whiteboard::remove_occupant(AgentId agent) {
  auto it = std::lower_bound(registry.begin(), registry.end(), agent);
  if (it == registry.end() || *it != agent) throw InconsistentState("departing agent missing from registry");
  registry.erase(it);
  n_agents = static_cast<int>(registry.size());
}

void BoardWrite::apply_to(Whiteboard& board) const {
  if (id) board.id = *id;
  if (dir) board.dir = *dir;
  if (waiting) board.waiting = *waiting;
  if (f_marked) board.f_marked = *f_marked;
  if (b_marked) board.b_marked = *b_marked;
  if (candi) board.candi = *candi;
}

const char* to_string(Pc pc) {
  switch (pc) {
    case Pc::SelectionStart: return "selection_start";
    case Pc::SelectionMove: return "selection";
    case Pc::Gather: return "gather";
    case Pc::SplitMove: return "more_moving";
    case Pc::LessWait: return "less_wait";
    case Pc::LatterFirst: return "latter_first";
    case Pc::LatterSecond: return "latter_second";
    case Pc::Sweep: return "moving2";
    case Pc::Wait2: return "less2";
    case Pc::SemiSelectionStart: return "semi_selection_start";
    case Pc::SemiSelection: return "semi_selection";
    case Pc::SemiDecided: return "semi_decided";
    case Pc::SemiGather: return "semi_gathering";
    case Pc::Final: return "final";
  }
  return "?";
}

const char* to_string(Phase phase) {
  switch (phase) {
    case Phase::Selection: return "selection";
    case Phase::Gathering: return "gathering";
    case Phase::Splitting: return "splitting";
    case Phase::Sweep: return "sweep";
    case Phase::SemiSelection: return "semi_selection";
    case Phase::SemiGathering: return "semi_gathering";
    case Phase::Achievement: return "achievement";
  }
  return "?";
}

Configuration init_configuration(int n, std::span<const NodeIndex> placements, std::span<const AgentId> ids, Pc start) {
  if (n < 1) throw InvalidArgument("n must be positive");
  if (placements.size() != ids.size()) throw InvalidArgument("placements and ids differ in length");
  if (placements.empty()) throw InvalidArgument("at least one agent is required");
  if (placements.size() > static_cast<std::size_t>(n)) throw TooManyAgents("more agents than nodes");

  std::set<NodeIndex> seen_nodes;
  std::set<AgentId> seen_ids;
  for (std::size_t i = 0; i < placements.size(); ++i) {
    if (placements[i] < 0 || placements[i] >= n) throw InvalidArgument("placement outside the ring");
    if (!seen_nodes.insert(placements[i]).second) throw DuplicatePlacement("two agents share a starting node");
    if (!seen_ids.insert(ids[i]).second) throw DuplicateId("agent identifiers must be distinct");
  }

  Configuration config;
  config.topology = RingTopology(n);
  config.boards.assign(n, Whiteboard{});
  config.agents.reserve(placements.size());
  for (std::size_t i = 0; i < placements.size(); ++i) {
    AgentSlot slot;
    slot.state.id = ids[i];
    slot.state.pc = start;
    slot.state.phase = start == Pc::SemiSelectionStart ? Phase::SemiSelection : Phase::Selection;
    slot.position = placements[i];
    config.boards[placements[i]].add_occupant(ids[i]);
    config.agents.push_back(std::move(slot));
  }
  return config;
}

void check_consistency(const Configuration& config) {
  const int n = config.n();
  if (static_cast<int>(config.boards.size()) != n) throw InconsistentState("board count differs from ring size");
  std::vector<std::vector<AgentId>> expected(n);
  for (const auto& slot : config.agents) {
    if (slot.position < 0 || slot.position >= n) throw InconsistentState("agent positioned outside the ring");
    expected[slot.position].push_back(slot.state.id);
  }
  for (int v = 0; v < n; ++v) {
    auto& want = expected[v];
    std::sort(want.begin(), want.end());
    const auto& board = config.boards[v];
    if (board.registry != want) throw InconsistentState("registry of node " + std::to_string(v) + " out of sync");
    if (board.n_agents != static_cast<int>(want.size()))
      throw InconsistentState("nAgents of node " + std::to_string(v) + " out of sync");
  }
  if (config.missing && (*config.missing < 0 || *config.missing >= n))
    throw InconsistentState("missing link outside the ring");
}

}  // namespace pgather
