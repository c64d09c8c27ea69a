#include <doctest.h>

#include <numeric>
#include <set>

#include "pgather/reference.hpp"
#include "pgather/verify.hpp"

using namespace pgather;

namespace {

Configuration place(int n, std::vector<NodeIndex> at, Pc start) {
  std::vector<AgentId> ids(at.size());
  std::iota(ids.begin(), ids.end(), AgentId{0});
  return init_configuration(n, at, ids, start);
}

std::vector<int> occupancy(const Configuration& c) {
  std::vector<int> counts(c.n(), 0);
  for (const auto& a : c.agents) ++counts[a.position];
  return counts;
}

}  // namespace

TEST_CASE("selection: everyone learns all ids without blocking") {
  const auto v = dispatch(8, 7, 3);
  const auto c = place(8, {0, 1, 2, 3, 4, 5, 6}, start_pc(v.tag));
  const auto oracle = reference_run(c, v, NoneMissing{}, 1000);
  std::optional<Configuration> after_selection;
  const auto r = run(c, v, NoneMissing{}, 1000, {}, [&](const Configuration& cfg) {
    if (cfg.round == 24) after_selection = cfg;
  });
  CHECK(r.trace == oracle.trace);
  REQUIRE(after_selection);
  for (const auto& a : after_selection->agents) {
    CHECK(a.state.n_visited >= 8);
    CHECK(a.state.n_ids == 7);
    CHECK(*std::min_element(a.state.ids.begin(), a.state.ids.end()) == 0);
  }
}

TEST_CASE("selection: a permanent cut piles everyone on one node") {
  const auto v = dispatch(8, 7, 3);
  const auto c = place(8, {1, 2, 3, 4, 5, 6, 7}, start_pc(v.tag));
  const auto oracle = reference_run(c, v, FixedLink{7}, 1000);
  CHECK(oracle.outcome == Outcome::AllTerminated);
  CHECK(oracle.rounds_elapsed == 3 * 8 + 1);
  for (const auto& a : oracle.final.agents) CHECK(a.position == 7);
  const auto r = run(c, v, FixedLink{7}, 1000);
  CHECK(r.trace == oracle.trace);
  for (const auto& a : r.final.agents) CHECK(a.state.n_visited < 8);
}

TEST_CASE("B1: a cut during gathering leaves 4 and 3, both of which stay") {
  const auto v = dispatch(8, 7, 3);
  const auto c = place(8, {0, 1, 2, 3, 4, 5, 6}, start_pc(v.tag));
  Scripted cut;
  cut.schedule.assign(28, std::nullopt);
  cut.schedule.resize(200, LinkIndex{7});
  const auto oracle = reference_run(c, v, cut, 1000);
  const auto counts = occupancy(oracle.final);
  CHECK(counts[0] == 4);
  CHECK(counts[7] == 3);
  CHECK(oracle.rounds_elapsed == 6 * 8 + 1);
  CHECK(run(c, v, cut, 1000).trace == oracle.trace);
}

TEST_CASE("B2: n=8, k=8, g=2 gathers everyone then sweeps") {
  const auto v = dispatch(8, 8, 2);
  REQUIRE(v.tag == Variant::B2);
  const auto c = place(8, {0, 1, 2, 3, 4, 5, 6, 7}, start_pc(v.tag));
  const auto oracle = reference_run(c, v, NoneMissing{}, 1000);
  CHECK(check_partial_gathering(oracle.final, 2));
  bool all_on_one = false;
  const auto r = run(c, v, NoneMissing{}, 1000, {}, [&](const Configuration& cfg) {
    if (cfg.round == 48) all_on_one = cfg.boards[0].n_agents == 8;
  });
  CHECK(all_on_one);
  CHECK(r.trace == oracle.trace);
  CHECK(r.link_passes == oracle.link_passes);
  int sweep = 0;
  for (const auto& link : r.link_passes) sweep += link[static_cast<int>(Phase::Sweep)];
  CHECK(sweep > 0);
}

TEST_CASE("B3: every agent stops collecting at 10g-4 ids and a candidate appears") {
  const auto v = dispatch(16, 16, 2);
  std::vector<NodeIndex> at(16);
  std::iota(at.begin(), at.end(), 0);
  const auto c = place(16, at, start_pc(v.tag));
  const auto oracle = reference_run(c, v, NoneMissing{}, 1000);
  std::optional<Configuration> decided;
  const auto r = run(c, v, NoneMissing{}, 1000, {}, [&](const Configuration& cfg) {
    if (cfg.round == 3 * 16 + 1) decided = cfg;
  });
  CHECK(r.trace == oracle.trace);
  REQUIRE(decided);
  for (const auto& a : decided->agents) CHECK(a.state.n_ids == 16);
  int candidates = 0;
  for (const auto& b : decided->boards) candidates += b.candi ? 1 : 0;
  CHECK(candidates >= 1);
  CHECK(check_partial_gathering(oracle.final, 2));
}

TEST_CASE("oracle agrees under adaptive blocking and shuffled order") {
  const auto v = dispatch(8, 7, 3);
  const auto c = place(8, {0, 1, 2, 3, 4, 5, 6}, start_pc(v.tag));
  for (auto policy : {BlockerPolicy::BlockFrontOfLargest, BlockerPolicy::IsolateSmallest, BlockerPolicy::SplitMajority})
    for (std::uint64_t seed : {0u, 1u, 2u}) {
      const OrderPolicy order{seed != 0, seed};
      const auto oracle = reference_run(c, v, AdaptiveBlocker{policy}, 1000, order);
      const auto r = run(c, v, AdaptiveBlocker{policy}, 1000, order);
      CHECK(r.trace == oracle.trace);
      CHECK(oracle.outcome == Outcome::AllTerminated);
      CHECK(check_partial_gathering(oracle.final, 3));
      CHECK(check_bounds(oracle, v).pass);
    }
}

TEST_CASE("oracle final state mirrors the engine") {
  const auto v = dispatch(12, 9, 2);
  const auto c = place(12, {0, 1, 3, 4, 6, 7, 9, 10, 11}, start_pc(v.tag));
  const auto oracle = reference_run(c, v, RandomUniform{3, 0.2}, 1000);
  const auto r = run(c, v, RandomUniform{3, 0.2}, 1000);
  CHECK(oracle.final.boards == r.final.boards);
  CHECK(oracle.final.round == r.final.round);
  for (std::size_t i = 0; i < r.final.agents.size(); ++i) {
    CHECK(oracle.final.agents[i].position == r.final.agents[i].position);
    CHECK(oracle.final.agents[i].state.n_visited == r.final.agents[i].state.n_visited);
    CHECK(oracle.final.agents[i].state.terminated == r.final.agents[i].state.terminated);
  }
  CHECK_THROWS_AS(reference_run(c, v, NoneMissing{}, 0), InvalidArgument);
}
