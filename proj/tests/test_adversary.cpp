#include <doctest.h>

#include <set>

#include "pgather/adversary.hpp"

using namespace pgather;

namespace {

Configuration ring_with(int n, std::vector<NodeIndex> at) {
  std::vector<AgentId> ids(at.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;
  return init_configuration(n, at, ids);
}

// Moves agent `i` to node `v`, keeping the registries in step.
void relocate(Configuration& c, std::size_t i, NodeIndex v) {
  c.boards[c.agents[i].position].remove_occupant(c.agents[i].state.id);
  c.boards[v].add_occupant(c.agents[i].state.id);
  c.agents[i].position = v;
}

}  // namespace

TEST_CASE("static adversaries") {
  const auto c = ring_with(10, {0, 4});
  CHECK(choose_missing(FixedLink{9}, c) == 9);
  CHECK_FALSE(choose_missing(NoneMissing{}, c).has_value());
}

TEST_CASE("scripted schedules index by round and run out to none") {
  auto c = ring_with(10, {0});
  const Scripted s{{0, std::nullopt, 3}};
  c.round = 0;
  CHECK(choose_missing(s, c) == 0);
  c.round = 1;
  CHECK_FALSE(choose_missing(s, c).has_value());
  c.round = 2;
  CHECK(choose_missing(s, c) == 3);
  c.round = 3;
  CHECK_FALSE(choose_missing(s, c).has_value());
}

TEST_CASE("random adversary depends only on seed and round") {
  auto a = ring_with(12, {0, 3});
  auto b = ring_with(12, {5, 7, 9});
  std::set<std::optional<LinkIndex>> seen;
  int none = 0;
  for (int t = 0; t < 400; ++t) {
    a.round = b.round = t;
    const auto x = choose_missing(RandomUniform{42, 0.25}, a);
    CHECK(x == choose_missing(RandomUniform{42, 0.25}, b));
    if (x)
      CHECK((*x >= 0 && *x < 12));
    else
      ++none;
    seen.insert(x);
  }
  CHECK(seen.size() == 13);
  CHECK(none > 60);
  CHECK(none < 150);
  a.round = 7;
  CHECK_FALSE(choose_missing(RandomUniform{1, 1.0}, a).has_value());
  CHECK(choose_missing(RandomUniform{1, 0.0}, a).has_value());
}

TEST_CASE("block-front-of-largest") {
  auto c = ring_with(8, {1, 2, 5});
  relocate(c, 1, 1);
  CHECK(choose_missing(AdaptiveBlocker{BlockerPolicy::BlockFrontOfLargest}, c) == 1);
  c.agents[0].state.terminated = true;
  c.agents[1].state.terminated = true;
  CHECK(choose_missing(AdaptiveBlocker{BlockerPolicy::BlockFrontOfLargest}, c) == 5);
}

TEST_CASE("isolate-smallest cuts toward the nearest neighbour") {
  auto c = ring_with(10, {0, 1, 6});
  relocate(c, 1, 0);
  // Smallest occupied node is v6; the nearest other is v0, four steps ahead.
  CHECK(choose_missing(AdaptiveBlocker{BlockerPolicy::IsolateSmallest}, c) == 6);
  relocate(c, 2, 2);
  CHECK(choose_missing(AdaptiveBlocker{BlockerPolicy::IsolateSmallest}, c) == 1);
}

TEST_CASE("split-majority cuts between the two largest nodes") {
  auto c = ring_with(10, {0, 1, 7, 8, 3});
  relocate(c, 1, 0);
  relocate(c, 3, 7);
  // v0 holds 2 and v7 holds 2; v0 reaches v7 faster backward.
  CHECK(choose_missing(AdaptiveBlocker{BlockerPolicy::SplitMajority}, c) == 9);
  auto single = ring_with(10, {4});
  CHECK(choose_missing(AdaptiveBlocker{BlockerPolicy::SplitMajority}, single) == 4);
}

TEST_CASE("validation and labels") {
  CHECK_THROWS_AS(validate(FixedLink{10}, 10), InvalidArgument);
  CHECK_THROWS_AS(validate(RandomUniform{1, 1.5}, 10), InvalidArgument);
  CHECK_THROWS_AS(validate(Scripted{{1, std::nullopt, -1}}, 10), InvalidArgument);
  CHECK_NOTHROW(validate(scripted_alternating(10), 10));
  CHECK(describe(FixedLink{3}) == "fixed(3)");
  CHECK(parse_blocker_policy("isolate-smallest") == BlockerPolicy::IsolateSmallest);
  CHECK_FALSE(parse_blocker_policy("nope").has_value());
}

TEST_CASE("handcrafted schedules") {
  const auto s1 = scripted_alternating(8);
  CHECK(s1.schedule.size() == 96);
  CHECK(s1.schedule[7] == 0);
  CHECK(s1.schedule[8] == 4);
  CHECK(s1.schedule[16] == 0);
  const auto s2 = scripted_crawler(8);
  CHECK(s2.schedule[0] == 0);
  CHECK(s2.schedule[3] == 1);
  CHECK(s2.schedule[17] == 0);
}
