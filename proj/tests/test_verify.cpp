#include <doctest.h>

#include <numeric>

#include "pgather/reference.hpp"
#include "pgather/verify.hpp"

using namespace pgather;

namespace {

// Terminated agents stacked on nodes with the given counts.
Configuration stacked(int n, std::vector<int> counts) {
  Configuration c;
  c.topology = RingTopology(n);
  c.boards.assign(n, {});
  AgentId id = 0;
  for (int v = 0; v < static_cast<int>(counts.size()); ++v)
    for (int i = 0; i < counts[v]; ++i) {
      AgentSlot s;
      s.state.id = id;
      s.state.terminated = true;
      s.position = v;
      c.boards[v].add_occupant(id++);
      c.agents.push_back(s);
    }
  return c;
}

Configuration all_nodes(int n, Pc start) {
  std::vector<NodeIndex> at(n);
  std::iota(at.begin(), at.end(), 0);
  std::vector<AgentId> ids(n);
  std::iota(ids.begin(), ids.end(), AgentId{0});
  return init_configuration(n, at, ids, start);
}

}  // namespace

TEST_CASE("partial gathering predicate") {
  CHECK(check_partial_gathering(stacked(8, {5, 3}), 3));
  CHECK_FALSE(check_partial_gathering(stacked(8, {5, 2}), 3));
  auto c = stacked(8, {4, 4});
  CHECK(check_partial_gathering(c, 3));
  c.agents[2].state.terminated = false;
  CHECK_FALSE(check_partial_gathering(c, 3));
}

TEST_CASE("cap arithmetic") {
  const ProtocolVariant b1{Variant::B1, 8, 7, 3}, b2{Variant::B2, 8, 5, 2}, b3{Variant::B3, 16, 16, 2};
  CHECK(round_cap(b1) == 6 * 8 + 3 * 8 * 2 + 5);
  CHECK(round_cap(b2) == 61);
  CHECK(round_cap(b3) == 117);
  CHECK(move_cap(b1) == 7 * 48 + 6 * 24 * 3);
  CHECK(move_cap(b2) == 5 * 48 + 8 * 8);
  CHECK(move_cap(b3) == (17 + 7 + 8) * 16);
  CHECK(link_pass_cap(b3, Phase::SemiSelection) == 17);
  CHECK(link_pass_cap(b3, Phase::SemiGathering) == 7);
  CHECK(link_pass_cap(b3, Phase::Achievement) == 8);
  CHECK(link_pass_cap(b2, Phase::Sweep) == 8);
  CHECK_FALSE(link_pass_cap(b2, Phase::Selection).has_value());
  CHECK_FALSE(link_pass_cap(b1, Phase::Splitting).has_value());
}

TEST_CASE("B3 bounds on n=16, k=16, g=2") {
  const auto v = dispatch(16, 16, 2);
  const auto c = all_nodes(16, start_pc(v.tag));
  const auto oracle = reference_run(c, v, NoneMissing{}, 1000);
  const auto r = run(c, v, NoneMissing{}, 1000);
  const auto report = check_bounds(r, v);
  CHECK(report.pass);
  CHECK(report.rounds_elapsed == oracle.rounds_elapsed);
  CHECK(report.round_cap == 117);
  CHECK(report.per_phase[static_cast<int>(Phase::SemiSelection)].observed <= 17);
  CHECK(report.total_moves == oracle.total_moves);
}

TEST_CASE("B2 sweep passes stay within 4g") {
  const auto v = dispatch(10, 5, 2);
  REQUIRE(v.tag == Variant::B2);
  for (const AdversarySpec& adv : std::vector<AdversarySpec>{
           NoneMissing{}, FixedLink{3}, AdaptiveBlocker{BlockerPolicy::SplitMajority}, RandomUniform{5, 0.2}}) {
    const auto c = init_configuration(10, std::vector<NodeIndex>{0, 2, 4, 6, 8}, std::vector<AgentId>{0, 1, 2, 3, 4});
    const auto r = run(c, v, adv, 1000);
    const auto report = check_bounds(r, v);
    CHECK(report.per_phase[static_cast<int>(Phase::Sweep)].observed <= 8);
    CHECK(report.pass);
  }
}

TEST_CASE("bound report flags an overrun") {
  const ProtocolVariant v{Variant::B2, 8, 5, 2};
  ExecutionResult r;
  r.rounds_elapsed = 10;
  r.link_passes.assign(8, {});
  r.link_passes[3][static_cast<int>(Phase::Sweep)] = 9;
  auto report = check_bounds(r, v);
  CHECK_FALSE(report.pass);
  CHECK(report.per_phase[static_cast<int>(Phase::Sweep)].observed == 9);
  r.link_passes[3][static_cast<int>(Phase::Sweep)] = 8;
  r.rounds_elapsed = 62;
  CHECK_FALSE(check_bounds(r, v).pass);
  r.rounds_elapsed = 61;
  CHECK(check_bounds(r, v).pass);
}

TEST_CASE("lower-bound scenario") {
  CHECK(clustered_placement(8, 3) == std::vector<NodeIndex>{0, 6, 7});
  const auto r = lower_bound_demo(32, 13, 2);
  CHECK(r.outcome == Outcome::AllTerminated);
  CHECK(r.rounds_elapsed >= 32 - 13);
  CHECK(check_partial_gathering(r.final, 2));
  const auto small = lower_bound_demo(16, 7, 3);
  CHECK(small.rounds_elapsed >= 9);
  CHECK(check_partial_gathering(small.final, 3));
  CHECK_THROWS_AS(lower_bound_demo(8, 8, 2), InvalidArgument);
}
