#include "pgather/engine.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include <json.hpp>

namespace pgather {

const char* to_string(Outcome outcome) {
  return outcome == Outcome::AllTerminated ? "AllTerminated" : "RoundLimitExceeded";
}

std::vector<std::size_t> activation_order(const OrderPolicy& policy, const Configuration& config) {
  std::vector<std::size_t> order(config.agents.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return config.agents[a].state.id < config.agents[b].state.id; });
  if (policy.shuffled) {
    std::seed_seq seq{static_cast<std::uint32_t>(policy.seed), static_cast<std::uint32_t>(policy.seed >> 32),
                      static_cast<std::uint32_t>(config.round)};
    std::mt19937_64 rng(seq);
    std::shuffle(order.begin(), order.end(), rng);
  }
  return order;
}

void diff_board(NodeIndex node, const Whiteboard& before, const Whiteboard& after, std::vector<FieldDelta>& out) {
  auto id_value = [](const std::optional<AgentId>& id) -> std::optional<std::int64_t> {
    if (!id) return std::nullopt;
    return static_cast<std::int64_t>(*id);
  };
  auto emit = [&](const char* field, std::optional<std::int64_t> b, std::optional<std::int64_t> a) {
    if (b != a) out.push_back(FieldDelta{node, field, b, a});
  };
  emit("id", id_value(before.id), id_value(after.id));
  emit("nAgents", before.n_agents, after.n_agents);
  emit("dir", before.dir, after.dir);
  emit("waiting", before.waiting, after.waiting);
  emit("fMarked", before.f_marked, after.f_marked);
  emit("bMarked", before.b_marked, after.b_marked);
  emit("candi", before.candi, after.candi);
}

long long tally_moves(const RoundRecord& record, const RingTopology& topology, LinkPasses& passes) {
  long long moves = 0;
  for (const auto& a : record.agents) {
    if (a.intent == 0 || a.blocked) continue;
    const NodeIndex from = topology.neighbor(a.position, -a.intent);
    ++passes[topology.link_between(from, a.intent)][static_cast<int>(a.phase)];
    ++moves;
  }
  return moves;
}

Configuration step(const Configuration& config, const ProtocolVariant& variant, std::optional<LinkIndex> missing,
                   const OrderPolicy& order, RoundRecord* record) {
  check_consistency(config);
  if (missing && (*missing < 0 || *missing >= config.n())) throw InvalidArgument("missing link outside the ring");

  Configuration next = config;
  next.missing = missing;
  const auto& topo = next.topology;
  const std::vector<Whiteboard> snapshot = config.boards;
  if (record) {
    record->round = config.round;
    record->missing = missing;
    record->agents.clear();
  }

  for (std::size_t idx : activation_order(order, config)) {
    auto& slot = next.agents[idx];
    if (slot.state.terminated) continue;

    const NodeIndex origin = slot.position;
    const TransitionOutput out = agent_transition(variant, slot.state, snapshot[origin]);
    const Whiteboard origin_before = next.boards[origin];

    slot.state = out.next;
    out.origin_writes.apply_to(next.boards[origin]);

    bool blocked = false;
    std::optional<NodeIndex> dest;
    Whiteboard dest_before;
    if (out.intent != 0) {
      if (missing && topo.link_between(origin, out.intent) == *missing) {
        blocked = true;
        out.blocked_writes.apply_to(next.boards[origin]);
      } else {
        dest = topo.neighbor(origin, out.intent);
        dest_before = next.boards[*dest];
        next.boards[origin].remove_occupant(slot.state.id);
        next.boards[*dest].add_occupant(slot.state.id);
        out.arrival_writes.apply_to(next.boards[*dest]);
        slot.position = *dest;
        ++slot.state.n_visited;
      }
    }
    slot.state.last_moved = dest.has_value();

    if (record) {
      AgentRecord rec{slot.state.id, slot.position, slot.state.phase, out.intent, blocked, {}};
      diff_board(origin, origin_before, next.boards[origin], rec.deltas);
      if (dest) diff_board(*dest, dest_before, next.boards[*dest], rec.deltas);
      record->agents.push_back(std::move(rec));
    }
  }
  ++next.round;
  return next;
}

int default_round_limit(int n, int g) { return 20 * n + 3 * n * ceil_log2(std::max(g, 1)); }

ExecutionResult run(const Configuration& initial, const ProtocolVariant& variant, const AdversarySpec& adversary,
                    int round_limit, const OrderPolicy& order, const RoundObserver& observer) {
  if (round_limit < 1) throw InvalidArgument("round_limit must be at least 1");
  if (variant.n != initial.n() || variant.k != initial.k())
    throw InvalidArgument("protocol parameters do not match the configuration");
  validate(adversary, initial.n());

  ExecutionResult result;
  result.link_passes.assign(initial.n(), {});
  Configuration config = initial;
  if (observer) observer(config);

  auto all_terminated = [](const Configuration& c) {
    return std::all_of(c.agents.begin(), c.agents.end(), [](const AgentSlot& s) { return s.state.terminated; });
  };
  while (!all_terminated(config) && result.rounds_elapsed < round_limit) {
    const auto missing = choose_missing(adversary, config);
    RoundRecord record;
    config = step(config, variant, missing, order, &record);
    result.total_moves += tally_moves(record, config.topology, result.link_passes);
    result.trace.push_back(std::move(record));
    ++result.rounds_elapsed;
    if (observer) observer(config);
  }
  result.outcome = all_terminated(config) ? Outcome::AllTerminated : Outcome::RoundLimitExceeded;
  result.final = std::move(config);
  return result;
}

std::string serialize_trace(const std::vector<RoundRecord>& trace) {
  using nlohmann::ordered_json;
  std::ostringstream os;
  auto value = [](const std::optional<std::int64_t>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); };
  for (const auto& r : trace) {
    ordered_json line;
    line["schema"] = kTraceSchemaVersion;
    line["round"] = r.round;
    line["missing"] = r.missing ? ordered_json(*r.missing) : ordered_json(nullptr);
    ordered_json agents = ordered_json::array();
    for (const auto& a : r.agents) {
      ordered_json deltas = ordered_json::array();
      for (const auto& d : a.deltas)
        deltas.push_back({{"node", d.node}, {"field", d.field}, {"from", value(d.before)}, {"to", value(d.after)}});
      agents.push_back({{"id", a.id},
                        {"position", a.position},
                        {"phase", to_string(a.phase)},
                        {"intent", a.intent},
                        {"blocked", a.blocked},
                        {"deltas", std::move(deltas)}});
    }
    line["agents"] = std::move(agents);
    os << line.dump() << '\n';
  }
  return os.str();
}

}  // namespace pgather
