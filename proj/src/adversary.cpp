#include "pgather/adversary.hpp"

#include <algorithm>
#include <cstdio>
#include <random>

namespace pgather {

const char* to_string(BlockerPolicy policy) {
  switch (policy) {
    case BlockerPolicy::BlockFrontOfLargest: return "block-front-of-largest";
    case BlockerPolicy::IsolateSmallest: return "isolate-smallest";
    case BlockerPolicy::SplitMajority: return "split-majority";
  }
  return "?";
}

std::optional<BlockerPolicy> parse_blocker_policy(const std::string& name) {
  for (auto p : {BlockerPolicy::BlockFrontOfLargest, BlockerPolicy::IsolateSmallest, BlockerPolicy::SplitMajority})
    if (name == to_string(p)) return p;
  return std::nullopt;
}

std::string describe(const AdversarySpec& spec) {
  struct Visitor {
    std::string operator()(const NoneMissing&) const { return "none"; }
    std::string operator()(const FixedLink& a) const { return "fixed(" + std::to_string(a.link) + ")"; }
    std::string operator()(const RandomUniform& a) const {
      char buf[64];
      std::snprintf(buf, sizeof buf, "random(%llu;%g)", static_cast<unsigned long long>(a.seed), a.p_none);
      return buf;
    }
    std::string operator()(const Scripted& a) const { return "scripted(" + std::to_string(a.schedule.size()) + ")"; }
    std::string operator()(const AdaptiveBlocker& a) const { return to_string(a.policy); }
  };
  return std::visit(Visitor{}, spec);
}

void validate(const AdversarySpec& spec, int n) {
  auto check_link = [n](LinkIndex e) {
    if (e < 0 || e >= n) throw InvalidArgument("adversary link " + std::to_string(e) + " outside the ring");
  };
  if (auto* f = std::get_if<FixedLink>(&spec)) check_link(f->link);
  if (auto* r = std::get_if<RandomUniform>(&spec))
    if (!(r->p_none >= 0.0 && r->p_none <= 1.0)) throw InvalidArgument("p_none must lie in [0,1]");
  if (auto* s = std::get_if<Scripted>(&spec))
    for (const auto& e : s->schedule)
      if (e) check_link(*e);
}

namespace {

std::vector<int> live_counts(const Configuration& config) {
  std::vector<int> counts(config.n(), 0);
  for (const auto& slot : config.agents)
    if (!slot.state.terminated) ++counts[slot.position];
  return counts;
}

// Node with the largest count; lowest index on ties. -1 if all zero.
int argmax(const std::vector<int>& counts, int exclude = -1) {
  int best = -1;
  for (int v = 0; v < static_cast<int>(counts.size()); ++v) {
    if (v == exclude || counts[v] == 0) continue;
    if (best < 0 || counts[v] > counts[best]) best = v;
  }
  return best;
}

std::optional<LinkIndex> block_front_of_largest(const Configuration& config, const std::vector<int>& counts) {
  const int v = argmax(counts);
  if (v < 0) return std::nullopt;
  return config.topology.link_between(v, +1);
}

std::optional<LinkIndex> isolate_smallest(const Configuration& config, const std::vector<int>& counts) {
  const auto& topo = config.topology;
  int smallest = -1;
  for (int v = 0; v < config.n(); ++v) {
    if (counts[v] == 0) continue;
    if (smallest < 0 || counts[v] < counts[smallest]) smallest = v;
  }
  if (smallest < 0) return std::nullopt;
  int best_fwd = config.n();
  int best_bwd = config.n();
  for (int v = 0; v < config.n(); ++v) {
    if (v == smallest || counts[v] == 0) continue;
    best_fwd = std::min(best_fwd, topo.forward_distance(smallest, v));
    best_bwd = std::min(best_bwd, topo.forward_distance(v, smallest));
  }
  const int dir = best_bwd < best_fwd ? -1 : +1;
  return topo.link_between(smallest, dir);
}

std::optional<LinkIndex> split_majority(const Configuration& config, const std::vector<int>& counts) {
  const auto& topo = config.topology;
  const int first = argmax(counts);
  if (first < 0) return std::nullopt;
  const int second = argmax(counts, first);
  if (second < 0) return block_front_of_largest(config, counts);
  const int fwd = topo.forward_distance(first, second);
  const int bwd = topo.forward_distance(second, first);
  return topo.link_between(first, fwd <= bwd ? +1 : -1);
}

}  // namespace

std::optional<LinkIndex> choose_missing(const AdversarySpec& spec, const Configuration& config) {
  const int n = config.n();
  if (std::holds_alternative<NoneMissing>(spec)) return std::nullopt;
  if (auto* f = std::get_if<FixedLink>(&spec)) return f->link;
  if (auto* r = std::get_if<RandomUniform>(&spec)) {
    std::seed_seq seq{static_cast<std::uint32_t>(r->seed), static_cast<std::uint32_t>(r->seed >> 32),
                      static_cast<std::uint32_t>(config.round)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    if (coin(rng) < r->p_none) return std::nullopt;
    std::uniform_int_distribution<int> link(0, n - 1);
    return link(rng);
  }
  if (auto* s = std::get_if<Scripted>(&spec)) {
    if (config.round < 0 || config.round >= static_cast<int>(s->schedule.size())) return std::nullopt;
    return s->schedule[config.round];
  }
  const auto& a = std::get<AdaptiveBlocker>(spec);
  const auto counts = live_counts(config);
  switch (a.policy) {
    case BlockerPolicy::BlockFrontOfLargest: return block_front_of_largest(config, counts);
    case BlockerPolicy::IsolateSmallest: return isolate_smallest(config, counts);
    case BlockerPolicy::SplitMajority: return split_majority(config, counts);
  }
  return std::nullopt;
}

Scripted scripted_alternating(int n) {
  Scripted s;
  for (int t = 0; t < 12 * n; ++t) s.schedule.push_back((t / n) % 2 == 0 ? 0 : n / 2);
  return s;
}

Scripted scripted_crawler(int n) {
  Scripted s;
  for (int t = 0; t < 12 * n; ++t) s.schedule.push_back((t / 2) % n);
  return s;
}

}  // namespace pgather
