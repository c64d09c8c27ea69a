#include "pgather/config.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <random>
#include <set>

namespace pgather {

using nlohmann::json;

namespace {

template <typename T>
T get_field(const json& doc, const char* key) {
  if (!doc.contains(key)) throw ConfigError(std::string("missing field '") + key + "'");
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("field '") + key + "' has the wrong type");
  }
}

std::uint64_t get_seed(const json& v) {
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0))
    throw ConfigError("seeds must be non-negative integers");
  return v.get<std::uint64_t>();
}

PlacementSpec parse_placement(const json& v, std::uint64_t seed) {
  PlacementSpec p;
  if (v.is_string()) {
    const auto name = v.get<std::string>();
    if (name == "equidistant")
      p.kind = PlacementSpec::Kind::Equidistant;
    else if (name == "clustered")
      p.kind = PlacementSpec::Kind::Clustered;
    else if (name == "random") {
      p.kind = PlacementSpec::Kind::Random;
      p.seed = seed;
    } else
      throw ConfigError("unknown placement '" + name + "'");
  } else if (v.is_object() && v.contains("random")) {
    p.kind = PlacementSpec::Kind::Random;
    p.seed = get_seed(v.at("random"));
  } else if (v.is_array()) {
    p.kind = PlacementSpec::Kind::Explicit;
    for (const auto& e : v) {
      if (!e.is_number_integer()) throw ConfigError("placement entries must be integers");
      p.nodes.push_back(e.get<NodeIndex>());
    }
  } else {
    throw ConfigError("placement must be a preset name, {\"random\": seed} or a list of nodes");
  }
  return p;
}

json placement_json(const PlacementSpec& p) {
  switch (p.kind) {
    case PlacementSpec::Kind::Equidistant: return "equidistant";
    case PlacementSpec::Kind::Clustered: return "clustered";
    case PlacementSpec::Kind::Random: return json{{"random", p.seed}};
    case PlacementSpec::Kind::Explicit: return p.nodes;
  }
  return nullptr;
}

json adversary_json(const AdversarySpec& spec) {
  struct Visitor {
    json operator()(const NoneMissing&) const { return {{"type", "none"}}; }
    json operator()(const FixedLink& a) const { return {{"type", "fixed"}, {"link", a.link}}; }
    json operator()(const RandomUniform& a) const {
      return {{"type", "random"}, {"seed", a.seed}, {"p_none", a.p_none}};
    }
    json operator()(const Scripted& a) const {
      json schedule = json::array();
      for (const auto& e : a.schedule) schedule.push_back(e ? json(*e) : json(nullptr));
      return {{"type", "scripted"}, {"schedule", schedule}};
    }
    json operator()(const AdaptiveBlocker& a) const { return {{"type", "adaptive"}, {"policy", to_string(a.policy)}}; }
  };
  return std::visit(Visitor{}, spec);
}

}  // namespace

std::string describe(const PlacementSpec& spec) {
  switch (spec.kind) {
    case PlacementSpec::Kind::Equidistant: return "equidistant";
    case PlacementSpec::Kind::Clustered: return "clustered";
    case PlacementSpec::Kind::Random: return "random(" + std::to_string(spec.seed) + ")";
    case PlacementSpec::Kind::Explicit: return "explicit";
  }
  return "?";
}

std::vector<NodeIndex> resolve_placement(const PlacementSpec& spec, int n, int k) {
  if (k < 1 || k > n) throw ConfigError("need 1 <= k <= n");
  std::vector<NodeIndex> nodes;
  switch (spec.kind) {
    case PlacementSpec::Kind::Explicit:
      if (static_cast<int>(spec.nodes.size()) != k) throw ConfigError("placement list size differs from k");
      return spec.nodes;
    case PlacementSpec::Kind::Equidistant:
      for (int i = 0; i < k; ++i) nodes.push_back(i * (n / k));
      return nodes;
    case PlacementSpec::Kind::Clustered:
      nodes.push_back(0);
      for (int i = 1; i < k; ++i) nodes.push_back(n - k + i);
      return nodes;
    case PlacementSpec::Kind::Random: {
      nodes.resize(n);
      std::iota(nodes.begin(), nodes.end(), 0);
      std::seed_seq seq{static_cast<std::uint32_t>(spec.seed), static_cast<std::uint32_t>(spec.seed >> 32)};
      std::mt19937_64 rng(seq);
      std::shuffle(nodes.begin(), nodes.end(), rng);
      nodes.resize(k);
      return nodes;
    }
  }
  return nodes;
}

AdversarySpec parse_adversary(const json& doc, int n, std::uint64_t default_seed) {
  if (!doc.is_object()) throw ConfigError("adversary must be an object");
  const auto type = get_field<std::string>(doc, "type");
  auto link_value = [n](const json& v) -> LinkIndex {
    if (v.is_string() && v.get<std::string>() == "last") return n - 1;
    if (!v.is_number_integer()) throw ConfigError("links must be integers, null or \"last\"");
    return v.get<LinkIndex>();
  };
  AdversarySpec spec;
  if (type == "none") {
    spec = NoneMissing{};
  } else if (type == "fixed") {
    if (!doc.contains("link")) throw ConfigError("fixed adversary needs a link");
    spec = FixedLink{link_value(doc.at("link"))};
  } else if (type == "random") {
    RandomUniform r;
    r.seed = doc.contains("seed") ? get_seed(doc.at("seed")) : default_seed;
    if (doc.contains("p_none")) {
      if (!doc.at("p_none").is_number()) throw ConfigError("p_none must be a number");
      r.p_none = doc.at("p_none").get<double>();
    }
    spec = r;
  } else if (type == "scripted") {
    if (doc.contains("preset")) {
      const auto preset = get_field<std::string>(doc, "preset");
      if (preset == "alternating")
        spec = scripted_alternating(n);
      else if (preset == "crawler")
        spec = scripted_crawler(n);
      else
        throw ConfigError("unknown scripted preset '" + preset + "'");
    } else {
      if (!doc.contains("schedule") || !doc.at("schedule").is_array())
        throw ConfigError("scripted adversary needs a schedule list or a preset");
      Scripted s;
      for (const auto& e : doc.at("schedule")) {
        if (e.is_null())
          s.schedule.push_back(std::nullopt);
        else
          s.schedule.push_back(link_value(e));
      }
      spec = std::move(s);
    }
  } else if (type == "adaptive") {
    const auto name = get_field<std::string>(doc, "policy");
    const auto policy = parse_blocker_policy(name);
    if (!policy) throw ConfigError("unknown adaptive policy '" + name + "'");
    spec = AdaptiveBlocker{*policy};
  } else {
    throw ConfigError("unknown adversary type '" + type + "'");
  }
  try {
    validate(spec, n);
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  return spec;
}

RunConfig parse_run_config(const json& doc, std::optional<std::uint64_t> seed_override) {
  if (!doc.is_object()) throw ConfigError("run config must be an object");
  static const std::set<std::string> known{"n",     "k",     "g",    "placement", "ids",
                                           "adversary", "seed", "round_limit", "order", "trace"};
  for (const auto& [key, _] : doc.items())
    if (!known.count(key)) throw ConfigError("unknown field '" + key + "'");

  RunConfig c;
  c.n = get_field<int>(doc, "n");
  c.k = get_field<int>(doc, "k");
  c.g = get_field<int>(doc, "g");
  if (c.n < 1) throw ConfigError("n must be positive");
  if (c.k < 1 || c.k > c.n) throw ConfigError("need 1 <= k <= n");
  if (c.g < 1) throw ConfigError("g must be positive");
  c.seed = doc.contains("seed") ? get_seed(doc.at("seed")) : 0;
  if (seed_override) c.seed = *seed_override;

  c.placement = parse_placement(doc.contains("placement") ? doc.at("placement") : json("equidistant"), c.seed);
  resolve_placement(c.placement, c.n, c.k);

  if (doc.contains("ids") && !(doc.at("ids").is_string() && doc.at("ids").get<std::string>() == "ascending")) {
    const auto& v = doc.at("ids");
    if (!v.is_array()) throw ConfigError("ids must be \"ascending\" or a list");
    std::vector<AgentId> ids;
    for (const auto& e : v) {
      ids.push_back(get_seed(e));
      if (ids.back() > static_cast<AgentId>(INT64_MAX)) throw ConfigError("ids must fit in 63 bits");
    }
    if (static_cast<int>(ids.size()) != c.k) throw ConfigError("id list size differs from k");
    c.ids = std::move(ids);
  }

  c.adversary = parse_adversary(doc.contains("adversary") ? doc.at("adversary") : json{{"type", "none"}}, c.n, c.seed);

  if (doc.contains("round_limit")) {
    const int limit = get_field<int>(doc, "round_limit");
    if (limit < 1) throw ConfigError("round_limit must be at least 1");
    c.round_limit = limit;
  }

  if (doc.contains("order")) {
    const auto& v = doc.at("order");
    if (v.is_string() && v.get<std::string>() == "ascending") {
    } else if (v.is_string() && v.get<std::string>() == "shuffled") {
      c.order = OrderPolicy{true, c.seed};
    } else if (v.is_object() && v.contains("shuffled")) {
      c.order = OrderPolicy{true, get_seed(v.at("shuffled"))};
    } else {
      throw ConfigError("order must be \"ascending\", \"shuffled\" or {\"shuffled\": seed}");
    }
  }

  if (doc.contains("trace")) c.trace = get_field<bool>(doc, "trace");
  return c;
}

json to_json(const RunConfig& c) {
  json doc;
  doc["n"] = c.n;
  doc["k"] = c.k;
  doc["g"] = c.g;
  doc["placement"] = placement_json(c.placement);
  doc["ids"] = c.ids ? json(*c.ids) : json("ascending");
  doc["adversary"] = adversary_json(c.adversary);
  doc["seed"] = c.seed;
  if (c.round_limit) doc["round_limit"] = *c.round_limit;
  doc["order"] = c.order.shuffled ? json{{"shuffled", c.order.seed}} : json("ascending");
  doc["trace"] = c.trace;
  return doc;
}

std::string config_hash(const RunConfig& config) {
  std::uint64_t h = 14695981039346656037ULL;
  auto doc = to_json(config);
  doc.erase("trace");
  for (unsigned char ch : doc.dump()) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Configuration build_initial(const RunConfig& config, Pc start) {
  const auto placement = resolve_placement(config.placement, config.n, config.k);
  std::vector<AgentId> ids;
  if (config.ids) {
    ids = *config.ids;
  } else {
    for (int i = 0; i < config.k; ++i) ids.push_back(static_cast<AgentId>(i));
  }
  try {
    return init_configuration(config.n, placement, ids, start);
  } catch (const GatheringError& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace pgather
