#include "pgather/protocol.hpp"

#include <algorithm>
#include <string>

namespace pgather {

const char* to_string(Variant v) {
  switch (v) {
    case Variant::B1: return "B1";
    case Variant::B2: return "B2";
    case Variant::B3: return "B3";
  }
  return "?";
}

int ceil_log2(int x) {
  int bits = 0;
  while ((1LL << bits) < x) ++bits;
  return bits;
}

ProtocolVariant dispatch(int n, int k, int g) {
  if (g < 1) throw InvalidArgument("g must be at least 1");
  if (k < 1 || k > n) throw InvalidArgument("need 1 <= k <= n");
  if (k <= 2 * g)
    throw Unsolvable("k=" + std::to_string(k) + " <= 2g=" + std::to_string(2 * g) +
                     ": g-partial gathering is unsolvable on 1-interval connected rings");
  Variant tag = Variant::B3;
  if (k <= 3 * g - 2)
    tag = Variant::B1;
  else if (k <= 8 * g - 4)
    tag = Variant::B2;
  return ProtocolVariant{tag, n, k, g};
}

Pc start_pc(Variant v) { return v == Variant::B3 ? Pc::SemiSelectionStart : Pc::SelectionStart; }

int more_split_direction(int rank, int n_agents, int g) {
  const int c = n_agents - g;
  if (rank <= g) return 0;
  if (rank <= g + c / 2) return 1;
  return -1;
}

std::optional<int> more2_direction(int rank, int n_agents, int g) {
  if (rank <= g) return 1;
  if (n_agents < 3 * g || rank <= 2 * g) return -1;
  return std::nullopt;
}

bool semi_selection_candidate(std::span<const AgentId> ids, int g) {
  const auto window = static_cast<std::size_t>(8 * g - 3);
  const auto self = static_cast<std::size_t>(4 * g - 2);
  if (ids.size() < window) return false;
  for (std::size_t h = 0; h < window; ++h)
    if (h != self && !(ids[self] < ids[h])) return false;
  return true;
}

Leg leg_of(const AgentState& s) {
  switch (s.pc) {
    case Pc::SelectionStart:
    case Pc::SelectionMove: return {Phase::Selection, 0, 0};
    case Pc::Gather: return {Phase::Gathering, 0, 0};
    case Pc::SplitMove:
    case Pc::LessWait: return {Phase::Splitting, s.iteration, 0};
    case Pc::LatterFirst: return {Phase::Splitting, s.iteration, 1};
    case Pc::LatterSecond: return {Phase::Splitting, s.iteration, 2};
    case Pc::Sweep:
    case Pc::Wait2: return {s.phase, 0, 0};
    case Pc::SemiSelectionStart:
    case Pc::SemiSelection: return {Phase::SemiSelection, 0, 0};
    case Pc::SemiDecided: return {Phase::SemiSelection, 0, 1};
    case Pc::SemiGather: return {Phase::SemiGathering, 0, 0};
    case Pc::Final: break;
  }
  return {s.phase, -1, -1};
}

namespace {

// One atomic action in progress. The view starts as the round-start board and
// absorbs the agent's own writes so later steps of the same action see them.
class Action {
 public:
  Action(const ProtocolVariant& variant, const AgentState& state, const Whiteboard& view)
      : v(variant), view_(view) {
    out_.next = state;
  }

  const ProtocolVariant& v;

  AgentState& s() { return out_.next; }
  const Whiteboard& view() const { return view_; }
  int rank() const { return view_.rank_of(out_.next.id); }

  void write_id(AgentId id) {
    view_.id = id;
    out_.origin_writes.id = id;
  }
  void set_waiting(bool on) {
    view_.waiting = on;
    out_.origin_writes.waiting = on;
  }
  void set_candi() {
    view_.candi = true;
    out_.origin_writes.candi = true;
  }
  void stamp_mark(int dir) {
    if (dir > 0) {
      view_.f_marked = true;
      out_.origin_writes.f_marked = true;
    } else {
      view_.b_marked = true;
      out_.origin_writes.b_marked = true;
    }
  }

  TransitionOutput move(int dir, BoardWrite arrival = {}) {
    out_.intent = dir;
    out_.arrival_writes = arrival;
    out_.next.last_intent = dir;
    return out_;
  }
  TransitionOutput stay() { return move(0); }
  TransitionOutput terminate() {
    out_.next.terminated = true;
    out_.next.pc = Pc::Final;
    return move(0);
  }

 private:
  Whiteboard view_;
  TransitionOutput out_;
};

Phase sweep_phase(const ProtocolVariant& v) { return v.tag == Variant::B3 ? Phase::Achievement : Phase::Sweep; }

// ---- selection, shared by B1 and B2 ----

TransitionOutput gather_enter(Action& a);

TransitionOutput selection_start(Action& a) {
  auto& s = a.s();
  a.write_id(s.id);
  s.ids.assign(1, s.id);
  s.n_ids = 1;
  s.rounds = 1;
  s.pc = Pc::SelectionMove;
  s.phase = Phase::Selection;
  return a.move(+1);
}

TransitionOutput selection_resume(Action& a) {
  auto& s = a.s();
  const int n = a.v.n;
  if (s.last_moved && a.view().id && s.n_ids < a.v.k) {
    s.ids.push_back(*a.view().id);
    ++s.n_ids;
  }
  ++s.rounds;
  if (s.rounds <= 3 * n) return a.move(+1);
  if (s.n_visited < n) return a.terminate();
  if (a.view().n_agents == s.n_ids) return a.terminate();
  s.min_id = *std::min_element(s.ids.begin(), s.ids.end());
  return gather_enter(a);
}

// ---- gathering leg ----

TransitionOutput gather_body(Action& a) {
  if (a.view().id != a.s().min_id) return a.move(+1);
  return a.stay();
}

TransitionOutput gather_enter(Action& a) {
  auto& s = a.s();
  s.rounds = 1;
  s.pc = Pc::Gather;
  s.phase = Phase::Gathering;
  return gather_body(a);
}

TransitionOutput b1_decide(Action& a);
TransitionOutput b2_decide(Action& a);

TransitionOutput gather_resume(Action& a) {
  auto& s = a.s();
  ++s.rounds;
  if (s.rounds <= 3 * a.v.n) return gather_body(a);
  return a.v.tag == Variant::B1 ? b1_decide(a) : b2_decide(a);
}

// ---- B1 splitting ----

TransitionOutput moving_body(Action& a) {
  const int dir = a.s().dir;
  if (dir == 0 || a.view().waiting) return a.stay();
  return a.move(dir);
}

TransitionOutput more_enter(Action& a) {
  auto& s = a.s();
  ++s.iteration;
  s.phase = Phase::Splitting;
  if (a.view().waiting) a.set_waiting(false);
  s.rank = a.rank();
  s.dir = more_split_direction(s.rank, a.view().n_agents, a.v.g);
  s.rounds = 1;
  s.pc = Pc::SplitMove;
  return moving_body(a);
}

TransitionOutput less_enter(Action& a) {
  auto& s = a.s();
  ++s.iteration;
  s.phase = Phase::Splitting;
  a.set_waiting(true);
  s.dir = 0;
  s.rounds = 1;
  s.pc = Pc::LessWait;
  return a.stay();
}

TransitionOutput latter_enter(Action& a) {
  auto& s = a.s();
  s.rounds = 1;
  s.pc = Pc::LatterFirst;
  return moving_body(a);
}

TransitionOutput b1_decide(Action& a) {
  const int na = a.view().n_agents;
  const int g = a.v.g;
  const int k = a.v.k;
  if (na >= g && (k - na >= g || na == k)) return a.terminate();
  if (na >= g + 2) return more_enter(a);
  return less_enter(a);
}

TransitionOutput split_resume(Action& a) {
  auto& s = a.s();
  ++s.rounds;
  if (s.rounds <= a.v.n) return moving_body(a);
  if (a.view().waiting) {
    s.dir = -1;
    a.set_waiting(false);
  } else if (a.view().n_agents < a.v.g) {
    s.dir = 0;
    a.set_waiting(true);
  } else {
    s.dir = 1;
  }
  return latter_enter(a);
}

TransitionOutput less_resume(Action& a) {
  auto& s = a.s();
  ++s.rounds;
  if (s.rounds <= a.v.n) return a.stay();
  s.dir = -1;
  a.set_waiting(false);
  return latter_enter(a);
}

TransitionOutput latter_first_resume(Action& a) {
  auto& s = a.s();
  ++s.rounds;
  if (s.rounds <= a.v.n) return moving_body(a);
  s.dir = -s.dir;
  s.rounds = 1;
  s.pc = Pc::LatterSecond;
  return moving_body(a);
}

TransitionOutput latter_second_resume(Action& a) {
  auto& s = a.s();
  ++s.rounds;
  if (s.rounds <= a.v.n) return moving_body(a);
  return b1_decide(a);
}

// ---- sweeps: the B2 tail and the B3 achievement phase ----

TransitionOutput sweep_body(Action& a) {
  auto& s = a.s();
  if (s.rounds > a.v.n) return a.terminate();
  ++s.rounds;
  a.stamp_mark(s.dir);
  BoardWrite arrival;
  if (s.dir > 0)
    arrival.f_marked = true;
  else
    arrival.b_marked = true;
  arrival.dir = s.dir;
  return a.move(s.dir, arrival);
}

bool surplus(Action& a) {
  auto& s = a.s();
  s.rank = a.rank();
  return a.view().n_agents >= 2 * a.v.g && s.rank >= a.v.g + 1;
}

TransitionOutput sweep_resume(Action& a) {
  auto& s = a.s();
  if (s.last_moved) {
    const bool opposite = s.dir > 0 ? a.view().b_marked : a.view().f_marked;
    if (opposite) return a.terminate();
    if (a.view().waiting && surplus(a)) return a.terminate();
  }
  return sweep_body(a);
}

TransitionOutput more2_enter(Action& a) {
  auto& s = a.s();
  s.phase = sweep_phase(a.v);
  s.rank = a.rank();
  const auto dir = more2_direction(s.rank, a.view().n_agents, a.v.g);
  if (!dir) return a.terminate();
  s.dir = *dir;
  s.rounds = 1;
  s.pc = Pc::Sweep;
  return sweep_body(a);
}

TransitionOutput wait2_check(Action& a) {
  auto& s = a.s();
  const auto& view = a.view();
  if (view.f_marked && view.b_marked) return a.terminate();
  if (!view.f_marked && !view.b_marked) return a.stay();
  if (surplus(a)) return a.terminate();
  if (view.dir == 0) throw InconsistentState("sweep mark without a direction");
  s.dir = view.dir;
  s.pc = Pc::Sweep;
  return sweep_body(a);
}

TransitionOutput less2_enter(Action& a) {
  auto& s = a.s();
  s.phase = sweep_phase(a.v);
  s.rounds = 1;
  a.set_waiting(true);
  s.pc = Pc::Wait2;
  return wait2_check(a);
}

TransitionOutput wait2_resume(Action& a) {
  ++a.s().rounds;
  return wait2_check(a);
}

TransitionOutput b2_decide(Action& a) {
  const int na = a.view().n_agents;
  const int g = a.v.g;
  if (na >= g && na <= 2 * g - 1) return a.terminate();
  if (na >= 2 * g) return more2_enter(a);
  return less2_enter(a);
}

// ---- B3 semi-selection and semi-gathering ----

TransitionOutput semisel_body(Action& a) {
  if (a.s().n_ids < 10 * a.v.g - 4 && a.view().n_agents < 2 * a.v.g) return a.move(+1);
  return a.stay();
}

TransitionOutput semisel_start(Action& a) {
  auto& s = a.s();
  a.write_id(s.id);
  s.ids.assign(1, s.id);
  s.n_ids = 1;
  s.rounds = 1;
  s.pc = Pc::SemiSelection;
  s.phase = Phase::SemiSelection;
  return semisel_body(a);
}

TransitionOutput semisel_resume(Action& a) {
  auto& s = a.s();
  if (s.last_moved && a.view().id) {
    s.ids.push_back(*a.view().id);
    ++s.n_ids;
  }
  ++s.rounds;
  if (s.rounds <= 3 * a.v.n) return semisel_body(a);
  if (a.view().n_agents >= 2 * a.v.g || semi_selection_candidate(s.ids, a.v.g)) a.set_candi();
  s.pc = Pc::SemiDecided;
  return a.stay();
}

TransitionOutput semigather_body(Action& a) {
  const auto& s = a.s();
  if (s.n_ids != 4 * a.v.g - 1 && !a.view().candi) return a.move(+1);
  return a.stay();
}

TransitionOutput semigather_enter(Action& a) {
  auto& s = a.s();
  s.phase = Phase::SemiGathering;
  s.rounds = 1;
  s.n_ids = 1;
  s.pc = Pc::SemiGather;
  return semigather_body(a);
}

TransitionOutput semigather_resume(Action& a) {
  auto& s = a.s();
  if (s.last_intent != 0) {
    if (s.last_moved && a.view().id) ++s.n_ids;
    if (a.view().n_agents >= 2 * a.v.g) a.set_candi();
  }
  ++s.rounds;
  if (s.rounds <= 3 * a.v.n) return semigather_body(a);
  s.phase = Phase::Achievement;
  return b2_decide(a);
}

bool pc_allowed(Variant v, Pc pc) {
  switch (pc) {
    case Pc::SelectionStart:
    case Pc::SelectionMove:
    case Pc::Gather: return v != Variant::B3;
    case Pc::SplitMove:
    case Pc::LessWait:
    case Pc::LatterFirst:
    case Pc::LatterSecond: return v == Variant::B1;
    case Pc::Sweep:
    case Pc::Wait2: return v != Variant::B1;
    case Pc::SemiSelectionStart:
    case Pc::SemiSelection:
    case Pc::SemiDecided:
    case Pc::SemiGather: return v == Variant::B3;
    case Pc::Final: return false;
  }
  return false;
}

}  // namespace

TransitionOutput agent_transition(const ProtocolVariant& variant, const AgentState& state, const Whiteboard& view) {
  if (state.terminated) {
    TransitionOutput out;
    out.next = state;
    return out;
  }
  if (!pc_allowed(variant.tag, state.pc))
    throw IllegalPc(std::string("pc ") + to_string(state.pc) + " is not part of variant " + to_string(variant.tag));

  Action a(variant, state, view);
  switch (state.pc) {
    case Pc::SelectionStart: return selection_start(a);
    case Pc::SelectionMove: return selection_resume(a);
    case Pc::Gather: return gather_resume(a);
    case Pc::SplitMove: return split_resume(a);
    case Pc::LessWait: return less_resume(a);
    case Pc::LatterFirst: return latter_first_resume(a);
    case Pc::LatterSecond: return latter_second_resume(a);
    case Pc::Sweep: return sweep_resume(a);
    case Pc::Wait2: return wait2_resume(a);
    case Pc::SemiSelectionStart: return semisel_start(a);
    case Pc::SemiSelection: return semisel_resume(a);
    case Pc::SemiDecided: return semigather_enter(a);
    case Pc::SemiGather: return semigather_resume(a);
    case Pc::Final: break;
  }
  throw IllegalPc("unreachable program counter");
}

}  // namespace pgather
