#include "pgather/reference.hpp"

#include <algorithm>
#include <coroutine>
#include <exception>
#include <memory>

namespace pgather {
namespace {

struct Step {
  int intent = 0;
  BoardWrite arrival;
};

class Script {
 public:
  struct promise_type {
    Step current;
    std::exception_ptr error;

    Script get_return_object() { return Script{std::coroutine_handle<promise_type>::from_promise(*this)}; }
    std::suspend_always initial_suspend() noexcept { return {}; }
    std::suspend_always final_suspend() noexcept { return {}; }
    std::suspend_always yield_value(Step s) {
      current = std::move(s);
      return {};
    }
    void return_void() {}
    void unhandled_exception() { error = std::current_exception(); }
  };

  explicit Script(std::coroutine_handle<promise_type> h) : h_(h) {}
  Script(Script&& other) noexcept : h_(std::exchange(other.h_, {})) {}
  Script(const Script&) = delete;
  ~Script() {
    if (h_) h_.destroy();
  }

  /// Runs one action. False once the script has returned.
  bool resume() {
    h_.resume();
    if (h_.promise().error) std::rethrow_exception(h_.promise().error);
    return !h_.done();
  }
  const Step& current() const { return h_.promise().current; }

 private:
  std::coroutine_handle<promise_type> h_;
};

// What a script sees and touches during its current action.
struct Agent {
  AgentId id = 0;
  int n = 0, k = 0, g = 0;
  bool b3 = false;

  Whiteboard view;
  Whiteboard* board = nullptr;
  bool moved = false;
  int n_visited = 0;
  Phase phase = Phase::Selection;

  NodeIndex position = 0;
  bool terminated = false;

  void write_id() {
    view.id = id;
    board->id = id;
  }
  void write_waiting(bool on) {
    view.waiting = on;
    board->waiting = on;
  }
  void write_candi() {
    view.candi = true;
    board->candi = true;
  }
  void write_mark(int dir) {
    if (dir > 0) {
      view.f_marked = true;
      board->f_marked = true;
    } else {
      view.b_marked = true;
      board->b_marked = true;
    }
  }
  int rank() const {
    int r = 1;
    for (AgentId other : view.registry)
      if (other < id) ++r;
    return r;
  }
};

Step go(int dir) { return Step{dir, {}}; }

Step sweep_step(int dir) {
  Step s{dir, {}};
  if (dir > 0)
    s.arrival.f_marked = true;
  else
    s.arrival.b_marked = true;
  s.arrival.dir = dir;
  return s;
}

// Sweep groups and the agents waiting for them.
Script sweep_tail(Agent& a) {
  int na = a.view.n_agents;
  if (na >= a.g && na <= 2 * a.g - 1) co_return;
  a.phase = a.b3 ? Phase::Achievement : Phase::Sweep;

  int dir = 0;
  int rounds = 1;
  if (na >= 2 * a.g) {
    const int rank = a.rank();
    if (rank <= a.g)
      dir = 1;
    else if (na < 3 * a.g || rank <= 2 * a.g)
      dir = -1;
    else
      co_return;
  } else {
    a.write_waiting(true);
    for (;;) {
      if (a.view.f_marked && a.view.b_marked) co_return;
      if (a.view.f_marked || a.view.b_marked) {
        if (a.view.n_agents >= 2 * a.g && a.rank() >= a.g + 1) co_return;
        dir = a.view.dir;
        if (dir == 0) throw InconsistentState("sweep mark without a direction");
        break;
      }
      co_yield go(0);
      ++rounds;
    }
  }

  for (;;) {
    if (rounds > a.n) co_return;
    ++rounds;
    a.write_mark(dir);
    co_yield sweep_step(dir);
    if (a.moved) {
      const bool opposite = dir > 0 ? a.view.b_marked : a.view.f_marked;
      if (opposite) co_return;
      if (a.view.waiting && a.view.n_agents >= 2 * a.g && a.rank() >= a.g + 1) co_return;
    }
  }
}

Step moving(const Agent& a, int dir) { return go(dir == 0 || a.view.waiting ? 0 : dir); }

// Selection, gathering, then either the sweeps or B1 splitting.
Script b1_b2_program(Agent& a, bool b1) {
  a.phase = Phase::Selection;
  a.write_id();
  std::vector<AgentId> ids{a.id};
  int rounds = 1;
  for (;;) {
    co_yield go(1);
    if (a.moved && a.view.id && static_cast<int>(ids.size()) < a.k) ids.push_back(*a.view.id);
    ++rounds;
    if (rounds > 3 * a.n) break;
  }
  if (a.n_visited < a.n) co_return;
  if (a.view.n_agents == static_cast<int>(ids.size())) co_return;
  const AgentId min_id = *std::min_element(ids.begin(), ids.end());

  a.phase = Phase::Gathering;
  rounds = 1;
  for (;;) {
    co_yield go(a.view.id != min_id ? 1 : 0);
    ++rounds;
    if (rounds > 3 * a.n) break;
  }

  if (!b1) {
    Script tail = sweep_tail(a);
    while (tail.resume()) co_yield tail.current();
    co_return;
  }

  for (;;) {
    const int na = a.view.n_agents;
    if (na >= a.g && (a.k - na >= a.g || na == a.k)) co_return;
    a.phase = Phase::Splitting;
    int dir = 0;
    if (na >= a.g + 2) {
      if (a.view.waiting) a.write_waiting(false);
      const int rank = a.rank();
      const int c = na - a.g;
      dir = rank <= a.g ? 0 : (rank <= a.g + c / 2 ? 1 : -1);
      rounds = 1;
      for (;;) {
        co_yield moving(a, dir);
        ++rounds;
        if (rounds > a.n) break;
      }
      if (a.view.waiting) {
        dir = -1;
        a.write_waiting(false);
      } else if (a.view.n_agents < a.g) {
        dir = 0;
        a.write_waiting(true);
      } else {
        dir = 1;
      }
    } else {
      a.write_waiting(true);
      rounds = 1;
      for (;;) {
        co_yield go(0);
        ++rounds;
        if (rounds > a.n) break;
      }
      dir = -1;
      a.write_waiting(false);
    }
    for (int leg = 0; leg < 2; ++leg) {
      if (leg == 1) dir = -dir;
      rounds = 1;
      for (;;) {
        co_yield moving(a, dir);
        ++rounds;
        if (rounds > a.n) break;
      }
    }
  }
}

bool is_candidate(const std::vector<AgentId>& ids, int g) {
  const int window = 8 * g - 3;
  if (static_cast<int>(ids.size()) < window) return false;
  const AgentId mine = ids[4 * g - 2];
  int smaller_or_equal = 0;
  for (int h = 0; h < window; ++h)
    if (ids[h] <= mine) ++smaller_or_equal;
  return smaller_or_equal == 1;
}

// Semi-selection and semi-gathering, then the sweeps.
Script b3_program(Agent& a) {
  a.phase = Phase::SemiSelection;
  a.write_id();
  std::vector<AgentId> ids{a.id};
  int rounds = 1;
  for (;;) {
    const bool go_on = static_cast<int>(ids.size()) < 10 * a.g - 4 && a.view.n_agents < 2 * a.g;
    co_yield go(go_on ? 1 : 0);
    if (a.moved && a.view.id) ids.push_back(*a.view.id);
    ++rounds;
    if (rounds > 3 * a.n) break;
  }
  if (a.view.n_agents >= 2 * a.g || is_candidate(ids, a.g)) a.write_candi();
  co_yield go(0);

  a.phase = Phase::SemiGathering;
  rounds = 1;
  int seen = 1;
  for (;;) {
    const int dir = seen != 4 * a.g - 1 && !a.view.candi ? 1 : 0;
    co_yield go(dir);
    if (dir != 0) {
      if (a.moved && a.view.id) ++seen;
      if (a.view.n_agents >= 2 * a.g) a.write_candi();
    }
    ++rounds;
    if (rounds > 3 * a.n) break;
  }

  a.phase = Phase::Achievement;
  Script tail = sweep_tail(a);
  while (tail.resume()) co_yield tail.current();
}

struct Slot {
  Agent agent;
  std::optional<Script> script;
};

Configuration mirror(int round, const RingTopology& topo, const std::vector<Whiteboard>& boards,
                     const std::vector<std::unique_ptr<Slot>>& slots, std::optional<LinkIndex> missing) {
  Configuration c;
  c.round = round;
  c.topology = topo;
  c.boards = boards;
  c.missing = missing;
  for (const auto& s : slots) {
    AgentSlot out;
    out.state.id = s->agent.id;
    out.state.phase = s->agent.phase;
    out.state.n_visited = s->agent.n_visited;
    out.state.terminated = s->agent.terminated;
    out.position = s->agent.position;
    c.agents.push_back(std::move(out));
  }
  return c;
}

}  // namespace

ExecutionResult reference_run(const Configuration& initial, const ProtocolVariant& variant,
                              const AdversarySpec& adversary, int round_limit, const OrderPolicy& order) {
  if (round_limit < 1) throw InvalidArgument("round_limit must be at least 1");
  if (variant.n != initial.n() || variant.k != initial.k())
    throw InvalidArgument("protocol parameters do not match the configuration");
  validate(adversary, initial.n());
  check_consistency(initial);

  const RingTopology topo = initial.topology;
  const int n = topo.size();
  std::vector<Whiteboard> boards = initial.boards;
  std::vector<std::unique_ptr<Slot>> slots;
  for (const auto& src : initial.agents) {
    auto slot = std::make_unique<Slot>();
    Agent& a = slot->agent;
    a.id = src.state.id;
    a.n = n;
    a.k = variant.k;
    a.g = variant.g;
    a.b3 = variant.tag == Variant::B3;
    a.position = src.position;
    a.phase = src.state.phase;
    if (variant.tag == Variant::B3)
      slot->script.emplace(b3_program(a));
    else
      slot->script.emplace(b1_b2_program(a, variant.tag == Variant::B1));
    slots.push_back(std::move(slot));
  }

  ExecutionResult result;
  result.link_passes.assign(n, {});
  std::optional<LinkIndex> last_missing = initial.missing;
  int round = initial.round;

  auto done = [&] {
    return std::all_of(slots.begin(), slots.end(), [](const auto& s) { return s->agent.terminated; });
  };
  while (!done() && result.rounds_elapsed < round_limit) {
    const Configuration before = mirror(round, topo, boards, slots, last_missing);
    const auto missing = choose_missing(adversary, before);
    const std::vector<Whiteboard> snapshot = boards;
    RoundRecord record;
    record.round = round;
    record.missing = missing;

    for (std::size_t idx : activation_order(order, before)) {
      Slot& slot = *slots[idx];
      Agent& a = slot.agent;
      if (a.terminated) continue;

      const NodeIndex origin = a.position;
      const Whiteboard origin_before = boards[origin];
      a.view = snapshot[origin];
      a.board = &boards[origin];

      AgentRecord rec;
      rec.id = a.id;
      std::optional<NodeIndex> dest;
      Whiteboard dest_before;
      bool moved = false;
      if (!slot.script->resume()) {
        a.terminated = true;
      } else {
        const Step& s = slot.script->current();
        rec.intent = s.intent;
        if (s.intent != 0) {
          const LinkIndex link = s.intent > 0 ? origin : topo.mod(origin - 1);
          if (missing && *missing == link) {
            rec.blocked = true;
          } else {
            const NodeIndex to = topo.mod(origin + s.intent);
            dest = to;
            dest_before = boards[to];
            auto& from_reg = boards[origin].registry;
            from_reg.erase(std::find(from_reg.begin(), from_reg.end(), a.id));
            boards[origin].n_agents = static_cast<int>(from_reg.size());
            auto& to_reg = boards[to].registry;
            to_reg.insert(std::upper_bound(to_reg.begin(), to_reg.end(), a.id), a.id);
            boards[to].n_agents = static_cast<int>(to_reg.size());
            s.arrival.apply_to(boards[to]);
            a.position = to;
            ++a.n_visited;
            ++result.link_passes[link][static_cast<int>(a.phase)];
            ++result.total_moves;
            moved = true;
          }
        }
      }
      a.moved = moved;
      a.board = nullptr;

      rec.position = a.position;
      rec.phase = a.phase;
      diff_board(origin, origin_before, boards[origin], rec.deltas);
      if (dest) diff_board(*dest, dest_before, boards[*dest], rec.deltas);
      record.agents.push_back(std::move(rec));
    }

    result.trace.push_back(std::move(record));
    ++result.rounds_elapsed;
    ++round;
    last_missing = missing;
  }

  result.outcome = done() ? Outcome::AllTerminated : Outcome::RoundLimitExceeded;
  result.final = mirror(round, topo, boards, slots, last_missing);
  return result;
}

}  // namespace pgather
