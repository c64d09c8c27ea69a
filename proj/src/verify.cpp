#include "pgather/verify.hpp"

#include <algorithm>

namespace pgather {

bool check_partial_gathering(const Configuration& config, int g) {
  std::vector<int> counts(config.n(), 0);
  for (const auto& slot : config.agents) {
    if (!slot.state.terminated) return false;
    ++counts[slot.position];
  }
  return std::all_of(counts.begin(), counts.end(), [g](int c) { return c == 0 || c >= g; });
}

int round_cap(const ProtocolVariant& v) {
  if (v.tag == Variant::B1) return 6 * v.n + 3 * v.n * ceil_log2(v.g) + 5;
  return 7 * v.n + 5;
}

long long move_cap(const ProtocolVariant& v) {
  const long long n = v.n, k = v.k, g = v.g;
  switch (v.tag) {
    case Variant::B1: return k * 6 * n + 2 * g * 3 * n * (ceil_log2(v.g) + 1);
    case Variant::B2: return k * 6 * n + 4 * g * n;
    case Variant::B3: return (10 * g - 3 + 4 * g - 1 + 4 * g) * n;
  }
  return 0;
}

std::optional<int> link_pass_cap(const ProtocolVariant& v, Phase phase) {
  const int g = v.g;
  if (v.tag == Variant::B3) {
    if (phase == Phase::SemiSelection) return 10 * g - 3;
    if (phase == Phase::SemiGathering) return 4 * g - 1;
    if (phase == Phase::Achievement) return 4 * g;
  }
  if (v.tag == Variant::B2 && phase == Phase::Sweep) return 4 * g;
  return std::nullopt;
}

BoundReport check_bounds(const ExecutionResult& result, const ProtocolVariant& variant) {
  BoundReport report;
  report.rounds_elapsed = result.rounds_elapsed;
  report.round_cap = round_cap(variant);
  report.total_moves = result.total_moves;
  report.move_cap = move_cap(variant);
  report.pass = report.rounds_elapsed <= report.round_cap && report.total_moves <= report.move_cap;
  for (int p = 0; p < kPhaseCount; ++p) {
    auto& bound = report.per_phase[p];
    for (const auto& link : result.link_passes) bound.observed = std::max(bound.observed, link[p]);
    bound.cap = link_pass_cap(variant, static_cast<Phase>(p));
    if (bound.cap && bound.observed > *bound.cap) report.pass = false;
  }
  return report;
}

std::vector<NodeIndex> clustered_placement(int n, int k) {
  std::vector<NodeIndex> placement{0};
  for (int i = 1; i < k; ++i) placement.push_back(n - k + i);
  return placement;
}

ExecutionResult lower_bound_demo(int n, int k, int g) {
  if (k >= n) throw InvalidArgument("lower_bound_demo needs k < n");
  const auto variant = dispatch(n, k, g);
  const auto placement = clustered_placement(n, k);
  std::vector<AgentId> ids(k);
  for (int i = 0; i < k; ++i) ids[i] = static_cast<AgentId>(i);
  const auto initial = init_configuration(n, placement, ids, start_pc(variant.tag));
  return run(initial, variant, FixedLink{n - 1}, default_round_limit(n, g));
}

}  // namespace pgather
