#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pgather {

using AgentId = std::uint64_t;
using NodeIndex = int;
using LinkIndex = int;

/// Base class for every error raised by the library.
class GatheringError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DuplicatePlacement : public GatheringError {
 public:
  using GatheringError::GatheringError;
};
class DuplicateId : public GatheringError {
 public:
  using GatheringError::GatheringError;
};
class TooManyAgents : public GatheringError {
 public:
  using GatheringError::GatheringError;
};
class InconsistentState : public GatheringError {
 public:
  using GatheringError::GatheringError;
};
class InvalidArgument : public GatheringError {
 public:
  using GatheringError::GatheringError;
};

/// Cycle v_0 .. v_{n-1}; link e_j joins v_j and v_{j+1 mod n}.
class RingTopology {
 public:
  explicit RingTopology(int n);

  int size() const { return n_; }

  /// Node reached from `node` by one step in `dir` (+1 forward, -1 backward).
  NodeIndex neighbor(NodeIndex node, int dir) const;
  /// Link traversed by a move from `node` in `dir`.
  LinkIndex link_between(NodeIndex node, int dir) const;
  /// Shorter-arc distance between two nodes.
  int distance(NodeIndex i, NodeIndex j) const;
  /// Forward (clockwise) steps from i to j.
  int forward_distance(NodeIndex i, NodeIndex j) const { return mod(j - i); }

  int mod(long long v) const {
    const long long r = v % n_;
    return static_cast<int>(r < 0 ? r + n_ : r);
  }

  bool operator==(const RingTopology&) const = default;

 private:
  int n_;
};

inline NodeIndex neighbor(const RingTopology& t, NodeIndex node, int dir) { return t.neighbor(node, dir); }
inline LinkIndex link_between(const RingTopology& t, NodeIndex node, int dir) { return t.link_between(node, dir); }
inline int distance(const RingTopology& t, NodeIndex i, NodeIndex j) { return t.distance(i, j); }

/// Per-node whiteboard. `registry` holds the ids of agents currently at the
/// node in ascending order; n_agents mirrors its size at round boundaries.
struct Whiteboard {
  std::optional<AgentId> id;
  int n_agents = 0;
  int dir = 0;
  bool waiting = false;
  bool f_marked = false;
  bool b_marked = false;
  bool candi = false;
  std::vector<AgentId> registry;

  /// 1-based position of `agent` in the registry, 0 if absent.
  int rank_of(AgentId agent) const;
  void add_occupant(AgentId agent);
  void remove_occupant(AgentId agent);

  bool operator==(const Whiteboard&) const = default;
};

/// Partial whiteboard update. Unset fields are left untouched.
struct BoardWrite {
  std::optional<AgentId> id;
  std::optional<int> dir;
  std::optional<bool> waiting;
  std::optional<bool> f_marked;
  std::optional<bool> b_marked;
  std::optional<bool> candi;

  bool empty() const { return !id && !dir && !waiting && !f_marked && !b_marked && !candi; }
  void apply_to(Whiteboard& board) const;

  bool operator==(const BoardWrite&) const = default;
};

/// Protocol program counter. Each value is a resume point of an agent program.
enum class Pc : std::uint8_t {
  SelectionStart,
  SelectionMove,
  Gather,
  SplitMove,      // B1 splitting: first leg of a crowded node
  LessWait,       // B1 splitting: n-round wait of a sparse node
  LatterFirst,    // B1 splitting: second leg
  LatterSecond,   // B1 splitting: reversed third leg
  Sweep,          // forward/backward sweep group
  Wait2,          // waiting for a sweep to pass
  SemiSelectionStart,
  SemiSelection,
  SemiDecided,
  SemiGather,
  Final,
};

/// Coarse phase tag used for traces and per-phase link-pass accounting.
enum class Phase : std::uint8_t {
  Selection,
  Gathering,
  Splitting,
  Sweep,
  SemiSelection,
  SemiGathering,
  Achievement,
};

const char* to_string(Pc pc);
const char* to_string(Phase phase);
inline constexpr int kPhaseCount = 7;

struct AgentState {
  AgentId id = 0;
  int rounds = 1;
  int n_ids = 0;
  int n_visited = 0;
  int rank = 0;
  int dir = 0;
  std::vector<AgentId> ids;
  Pc pc = Pc::SelectionStart;
  Phase phase = Phase::Selection;
  int iteration = 0;  // B1 splitting iterations started
  bool terminated = false;

  std::optional<AgentId> min_id;  // v_gather identifier
  bool last_moved = false;        // set by the engine after each action
  int last_intent = 0;

  bool operator==(const AgentState&) const = default;
};

struct AgentSlot {
  AgentState state;
  NodeIndex position = 0;

  bool operator==(const AgentSlot&) const = default;
};

struct Configuration {
  int round = 0;
  RingTopology topology{1};
  std::vector<Whiteboard> boards;
  std::vector<AgentSlot> agents;
  std::optional<LinkIndex> missing;

  int n() const { return topology.size(); }
  int k() const { return static_cast<int>(agents.size()); }

  bool operator==(const Configuration&) const = default;
};

/// Builds the round-0 configuration: default whiteboards with registries
/// seeded from the placement, every agent in its initial state.
Configuration init_configuration(int n, std::span<const NodeIndex> placements, std::span<const AgentId> ids,
                                 Pc start = Pc::SelectionStart);

/// Throws InconsistentState unless every board's registry matches the agents
/// positioned there and n_agents equals the registry size.
void check_consistency(const Configuration& config);

}  // namespace pgather
