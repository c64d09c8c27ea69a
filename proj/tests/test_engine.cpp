#include <doctest.h>

#include <numeric>

#include "pgather/reference.hpp"
#include "pgather/verify.hpp"

using namespace pgather;

namespace {

Configuration place(int n, std::vector<NodeIndex> at, Pc start = Pc::SelectionStart) {
  std::vector<AgentId> ids(at.size());
  std::iota(ids.begin(), ids.end(), AgentId{0});
  return init_configuration(n, at, ids, start);
}

}  // namespace

TEST_CASE("a move updates both boards and the visit count") {
  const ProtocolVariant v{Variant::B2, 4, 1, 1};
  const auto c = step(place(4, {0}), v, std::nullopt);
  CHECK(c.agents[0].position == 1);
  CHECK(c.agents[0].state.n_visited == 1);
  CHECK(c.agents[0].state.last_moved);
  CHECK(c.boards[0].n_agents == 0);
  CHECK(c.boards[1].n_agents == 1);
  CHECK(c.boards[0].id == AgentId{0});
  CHECK(c.round == 1);
}

TEST_CASE("a move over the missing link is blocked") {
  const ProtocolVariant v{Variant::B2, 4, 1, 1};
  RoundRecord rec;
  const auto c = step(place(4, {0}), v, LinkIndex{0}, {}, &rec);
  CHECK(c.agents[0].position == 0);
  CHECK(c.agents[0].state.n_visited == 0);
  CHECK_FALSE(c.agents[0].state.last_moved);
  REQUIRE(rec.agents.size() == 1);
  CHECK(rec.agents[0].blocked);
  CHECK(rec.agents[0].intent == 1);
  CHECK(rec.missing == 0);
}

TEST_CASE("co-located agents blocked together stay put") {
  const ProtocolVariant v{Variant::B2, 4, 2, 1};
  auto c = place(4, {0, 1});
  c = step(c, v, std::nullopt);
  CHECK(c.agents[0].position == 1);
  CHECK(c.agents[1].position == 2);
  c.boards[2].remove_occupant(1);
  c.boards[1].add_occupant(1);
  c.agents[1].position = 1;
  const auto before = c.boards[1].registry;
  c = step(c, v, LinkIndex{1});
  CHECK(c.agents[0].position == 1);
  CHECK(c.agents[1].position == 1);
  CHECK(c.boards[1].registry == before);
  CHECK(c.round == 2);
}

TEST_CASE("step rejects an inconsistent configuration") {
  auto c = place(4, {0, 2});
  c.boards[2].n_agents = 0;
  CHECK_THROWS_AS(step(c, {Variant::B2, 4, 2, 1}, std::nullopt), InconsistentState);
}

TEST_CASE("run preconditions") {
  const auto c = place(8, {0, 1, 2, 3, 4, 5, 6});
  const auto v = dispatch(8, 7, 3);
  CHECK_THROWS_AS(run(c, v, NoneMissing{}, 0), InvalidArgument);
  CHECK_THROWS_AS(run(c, dispatch(9, 7, 3), NoneMissing{}, 10), InvalidArgument);
  CHECK_THROWS_AS(run(c, v, FixedLink{8}, 10), InvalidArgument);
}

TEST_CASE("a short budget is reported, not thrown") {
  const auto c = place(8, {0, 1, 2, 3, 4, 5, 6});
  const auto r = run(c, dispatch(8, 7, 3), NoneMissing{}, 5);
  CHECK(r.outcome == Outcome::RoundLimitExceeded);
  CHECK(r.rounds_elapsed == 5);
  CHECK(r.trace.size() == 5);
}

TEST_CASE("B1 run on n=8, k=7, g=3 gathers and matches the reference") {
  const auto c = place(8, {0, 1, 2, 3, 4, 5, 6});
  const auto v = dispatch(8, 7, 3);
  const auto oracle = reference_run(c, v, NoneMissing{}, 1000);
  const auto r = run(c, v, NoneMissing{}, 1000);
  CHECK(r.outcome == Outcome::AllTerminated);
  CHECK(check_partial_gathering(r.final, 3));
  CHECK(r.trace == oracle.trace);
  CHECK(r.rounds_elapsed == oracle.rounds_elapsed);
  long long sum = 0;
  for (const auto& link : r.link_passes) sum = std::accumulate(link.begin(), link.end(), sum);
  CHECK(sum == r.total_moves);
  CHECK(static_cast<int>(r.trace.size()) == r.rounds_elapsed);
}

TEST_CASE("B3 run on n=16, k=16, g=2 finishes within 7n+5 rounds") {
  std::vector<NodeIndex> at(16);
  std::iota(at.begin(), at.end(), 0);
  const auto v = dispatch(16, 16, 2);
  const auto c = place(16, at, start_pc(v.tag));
  const auto oracle = reference_run(c, v, NoneMissing{}, 1000);
  const auto r = run(c, v, NoneMissing{}, 1000);
  CHECK(r.outcome == Outcome::AllTerminated);
  CHECK(r.rounds_elapsed == oracle.rounds_elapsed);
  CHECK(r.rounds_elapsed <= 7 * 16 + 5);
  CHECK(r.trace == oracle.trace);
}

TEST_CASE("runs are deterministic and conserve agents") {
  const auto v = dispatch(12, 9, 2);
  const auto c = place(12, {0, 1, 3, 4, 6, 7, 9, 10, 11});
  const AdversarySpec adv = RandomUniform{9, 0.3};
  const OrderPolicy order{true, 4};
  int boundaries = 0;
  const auto a = run(c, v, adv, 500, order, [&](const Configuration& cfg) {
    ++boundaries;
    int total = 0;
    for (const auto& b : cfg.boards) total += b.n_agents;
    CHECK(total == 9);
  });
  const auto b = run(c, v, adv, 500, order);
  CHECK(serialize_trace(a.trace) == serialize_trace(b.trace));
  CHECK(boundaries == a.rounds_elapsed + 1);
}

TEST_CASE("activation order") {
  auto c = init_configuration(6, std::vector<NodeIndex>{0, 2, 4}, std::vector<AgentId>{9, 3, 5});
  CHECK(activation_order({}, c) == std::vector<std::size_t>{1, 2, 0});
  const auto shuffled = activation_order({true, 3}, c);
  CHECK(shuffled == activation_order({true, 3}, c));
  auto sorted = shuffled;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("trace records carry the schema and deltas") {
  const ProtocolVariant v{Variant::B2, 4, 1, 1};
  RoundRecord rec;
  step(place(4, {0}), v, std::nullopt, {}, &rec);
  const auto text = serialize_trace({rec});
  CHECK(text.find("\"schema\":1") != std::string::npos);
  CHECK(text.find("\"missing\":null") != std::string::npos);
  CHECK(text.find("{\"node\":0,\"field\":\"id\",\"from\":null,\"to\":0}") != std::string::npos);
  CHECK(text.back() == '\n');
}
