#include "rcons/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "rcons/errors.hpp"
#include "rcons/random.hpp"

namespace rcons {

using nlohmann::json;

namespace {

// Reads typed fields out of a JSON object and collects every problem
// instead of stopping at the first one.
class Reader {
 public:
  explicit Reader(std::vector<std::string>& problems) : problems_(problems) {}

  void fail(const std::string& where, const std::string& what) { problems_.push_back(where + ": " + what); }

  bool object(const json& j, const std::string& where) {
    if (j.is_object()) return true;
    fail(where, "expected an object");
    return false;
  }

  void no_unknown_keys(const json& j, const std::string& where, std::initializer_list<const char*> known) {
    for (const auto& [key, value] : j.items()) {
      (void)value;
      if (std::none_of(known.begin(), known.end(), [&](const char* k) { return key == k; }))
        fail(where, "unknown key '" + key + "'");
    }
  }

  template <class T>
  std::optional<T> get(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) return std::nullopt;
    const auto& v = j.at(key);
    try {
      if constexpr (std::is_same_v<T, double>) {
        if (!v.is_number()) throw std::invalid_argument("not a number");
      } else if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
        if (!v.is_number_integer()) throw std::invalid_argument("not an integer");
      } else if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) throw std::invalid_argument("not a boolean");
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) throw std::invalid_argument("not a string");
      }
      return v.get<T>();
    } catch (const std::exception&) {
      fail(where + "." + key, "has the wrong type");
      return std::nullopt;
    }
  }

  template <class T>
  T get_or(const json& j, const char* key, const std::string& where, T fallback) {
    return get<T>(j, key, where).value_or(fallback);
  }

  template <class T>
  std::optional<T> require(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) {
      fail(where, std::string("missing '") + key + "'");
      return std::nullopt;
    }
    return get<T>(j, key, where);
  }

 private:
  std::vector<std::string>& problems_;
};

std::string describe(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

GraphSource parse_graph(Reader& rd, const json& j) {
  const std::string where = "graph";
  if (!rd.object(j, where)) return CompleteGraph{1};
  const auto type = rd.require<std::string>(j, "type", where).value_or("");
  if (type == "complete") {
    rd.no_unknown_keys(j, where, {"type", "n"});
    const int n = rd.require<int>(j, "n", where).value_or(1);
    if (n < 1) rd.fail(where + ".n", "must be at least 1");
    return CompleteGraph{std::max(n, 1)};
  }
  if (type == "geometric") {
    rd.no_unknown_keys(j, where, {"type", "n", "range"});
    const int n = rd.require<int>(j, "n", where).value_or(1);
    const double range = rd.require<double>(j, "range", where).value_or(1.0);
    if (n < 1) rd.fail(where + ".n", "must be at least 1");
    if (!(range > 0.0 && range <= std::sqrt(2.0))) rd.fail(where + ".range", "must lie in (0, sqrt(2)]");
    return GeometricGraph{std::max(n, 1), range};
  }
  if (type == "literal") {
    rd.no_unknown_keys(j, where, {"type", "n", "edges", "bidirectional", "weights"});
    const int n = rd.require<int>(j, "n", where).value_or(1);
    if (n < 1) {
      rd.fail(where + ".n", "must be at least 1");
      return CompleteGraph{1};
    }
    const bool both = rd.get_or<bool>(j, "bidirectional", where, true);
    DirectedGraph g(n);
    const auto edges = j.value("edges", json::array());
    if (!edges.is_array()) rd.fail(where + ".edges", "expected a list of [from, to] pairs");
    for (std::size_t k = 0; edges.is_array() && k < edges.size(); ++k) {
      const auto& e = edges[k];
      const std::string at = where + ".edges[" + std::to_string(k) + "]";
      if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer()) {
        rd.fail(at, "expected [from, to]");
        continue;
      }
      try {
        if (both)
          g.add_bidirectional(e[0].get<int>(), e[1].get<int>());
        else
          g.add_edge(e[0].get<int>(), e[1].get<int>());
      } catch (const UsageError& err) {
        rd.fail(at, err.what());
      }
    }
    g = assign_uniform_weights(std::move(g));
    const auto weights = j.value("weights", json::array());
    for (std::size_t k = 0; weights.is_array() && k < weights.size(); ++k) {
      const auto& w = weights[k];
      const std::string at = where + ".weights[" + std::to_string(k) + "]";
      if (!w.is_array() || w.size() != 3 || !w[0].is_number_integer() || !w[1].is_number_integer() ||
          !w[2].is_number()) {
        rd.fail(at, "expected [i, j, a_ij]");
        continue;
      }
      try {
        g.set_weight(w[0].get<int>(), w[1].get<int>(), w[2].get<double>());
      } catch (const UsageError& err) {
        rd.fail(at, err.what());
      }
    }
    return LiteralGraph{std::move(g)};
  }
  rd.fail(where + ".type", "expected 'literal', 'geometric' or 'complete', got '" + type + "'");
  return CompleteGraph{1};
}

DelayModel parse_delay(Reader& rd, const json& j) {
  const std::string where = "delay";
  if (!rd.object(j, where)) return ZeroDelay{};
  const auto type = rd.require<std::string>(j, "type", where).value_or("");
  if (type == "zero") {
    rd.no_unknown_keys(j, where, {"type"});
    return ZeroDelay{};
  }
  if (type == "fixed") {
    rd.no_unknown_keys(j, where, {"type", "delay"});
    const double d = rd.require<double>(j, "delay", where).value_or(0.0);
    if (d < 0.0) rd.fail(where + ".delay", "must be nonnegative");
    return FixedDelay{d};
  }
  if (type == "uniform") {
    rd.no_unknown_keys(j, where, {"type", "max"});
    const double m = rd.require<double>(j, "max", where).value_or(0.0);
    if (m < 0.0) rd.fail(where + ".max", "must be nonnegative");
    return UniformDelay{m};
  }
  rd.fail(where + ".type", "expected 'zero', 'fixed' or 'uniform', got '" + type + "'");
  return ZeroDelay{};
}

AdversaryBehavior parse_behavior(Reader& rd, const json& j, const std::string& where) {
  if (!rd.object(j, where)) return RandomControl{};
  const auto type = rd.require<std::string>(j, "type", where).value_or("");
  if (type == "sine") {
    rd.no_unknown_keys(j, where, {"type", "amplitude", "period", "offset"});
    SineWave s;
    s.amplitude = rd.get_or<double>(j, "amplitude", where, s.amplitude);
    s.period = rd.get_or<double>(j, "period", where, s.period);
    s.offset = rd.get_or<double>(j, "offset", where, s.offset);
    if (!(s.period > 0.0)) rd.fail(where + ".period", "must be positive");
    return s;
  }
  if (type == "random_control") {
    rd.no_unknown_keys(j, where, {"type", "lo", "hi"});
    RandomControl r;
    r.lo = rd.get_or<double>(j, "lo", where, r.lo);
    r.hi = rd.get_or<double>(j, "hi", where, r.hi);
    if (r.lo > r.hi) rd.fail(where, "needs lo <= hi");
    return r;
  }
  rd.fail(where + ".type", "expected 'sine' or 'random_control', got '" + type + "'");
  return RandomControl{};
}

AdversarySource parse_adversaries(Reader& rd, const json& j, double epsilon) {
  if (j.is_object()) {
    const std::string where = "adversaries";
    rd.no_unknown_keys(j, where, {"type", "count", "behavior", "send_interval"});
    if (rd.require<std::string>(j, "type", where).value_or("") != "random")
      rd.fail(where + ".type", "an adversary object must have type 'random'");
    RandomPlacement p;
    p.count = rd.require<int>(j, "count", where).value_or(0);
    if (p.count < 0) rd.fail(where + ".count", "must be nonnegative");
    if (j.contains("behavior")) p.behavior = parse_behavior(rd, j.at("behavior"), where + ".behavior");
    p.send_interval = rd.get<double>(j, "send_interval", where);
    return p;
  }
  std::vector<AdversarySpec> specs;
  if (!j.is_array()) {
    rd.fail("adversaries", "expected a list or a random placement object");
    return specs;
  }
  for (std::size_t k = 0; k < j.size(); ++k) {
    const std::string where = "adversaries[" + std::to_string(k) + "]";
    const auto& a = j[k];
    if (!rd.object(a, where)) continue;
    rd.no_unknown_keys(a, where, {"agent", "behavior", "send_interval"});
    AdversarySpec spec;
    spec.agent = rd.require<int>(a, "agent", where).value_or(0);
    spec.behavior = a.contains("behavior") ? parse_behavior(rd, a.at("behavior"), where + ".behavior")
                                           : AdversaryBehavior{SineWave{}};
    spec.send_interval = rd.get_or<double>(a, "send_interval", where, epsilon);
    specs.push_back(spec);
  }
  return specs;
}

InitialSource parse_initial(Reader& rd, const json& j) {
  const std::string where = "initial_states";
  if (j.is_array()) {
    std::vector<double> values;
    for (std::size_t k = 0; k < j.size(); ++k) {
      if (!j[k].is_number()) {
        rd.fail(where + "[" + std::to_string(k) + "]", "expected a number");
        continue;
      }
      values.push_back(j[k].get<double>());
    }
    return values;
  }
  if (!rd.object(j, where)) return UniformInitial{};
  rd.no_unknown_keys(j, where, {"type", "lo", "hi"});
  if (rd.require<std::string>(j, "type", where).value_or("") != "uniform")
    rd.fail(where + ".type", "expected 'uniform'");
  UniformInitial u;
  u.lo = rd.require<double>(j, "lo", where).value_or(0.0);
  u.hi = rd.require<double>(j, "hi", where).value_or(1.0);
  if (u.lo > u.hi) rd.fail(where, "needs lo <= hi");
  return u;
}

SweepSpec parse_sweep(Reader& rd, const json& j, ProtocolKind fallback) {
  const std::string where = "sweep";
  SweepSpec s;
  if (!rd.object(j, where)) return s;
  rd.no_unknown_keys(j, where, {"ranges", "mean_degree", "n_adversaries", "protocols", "F_tracks_adversaries"});
  if (j.contains("ranges")) {
    try {
      s.ranges = j.at("ranges").get<std::vector<double>>();
    } catch (const std::exception&) {
      rd.fail(where + ".ranges", "expected a list of numbers");
    }
    for (double r : s.ranges)
      if (!(r > 0.0 && r <= std::sqrt(2.0))) rd.fail(where + ".ranges", "value " + describe(r) + " outside (0, sqrt(2)]");
  }
  s.mean_degree = rd.get<double>(j, "mean_degree", where);
  if (s.mean_degree && !s.ranges.empty()) rd.fail(where, "give either ranges or mean_degree, not both");
  if (s.mean_degree && !(*s.mean_degree > 0.0)) rd.fail(where + ".mean_degree", "must be positive");
  if (j.contains("n_adversaries")) {
    try {
      s.n_adversaries = j.at("n_adversaries").get<std::vector<int>>();
    } catch (const std::exception&) {
      rd.fail(where + ".n_adversaries", "expected a list of integers");
    }
  }
  if (s.n_adversaries.empty()) rd.fail(where + ".n_adversaries", "must not be empty");
  for (int a : s.n_adversaries)
    if (a < 0) rd.fail(where + ".n_adversaries", "counts must be nonnegative");
  if (j.contains("protocols")) {
    const auto& p = j.at("protocols");
    for (std::size_t k = 0; p.is_array() && k < p.size(); ++k) {
      const auto kind = p[k].is_string() ? parse_protocol(p[k].get<std::string>()) : std::nullopt;
      if (!kind)
        rd.fail(where + ".protocols[" + std::to_string(k) + "]", "unknown protocol");
      else
        s.protocols.push_back(*kind);
    }
    if (!p.is_array()) rd.fail(where + ".protocols", "expected a list of protocol names");
  }
  if (s.protocols.empty()) s.protocols.push_back(fallback);
  s.f_tracks_adversaries = rd.get_or<bool>(j, "F_tracks_adversaries", where, true);
  return s;
}

int adversary_count(const AdversarySource& source) {
  if (const auto* list = std::get_if<std::vector<AdversarySpec>>(&source)) return static_cast<int>(list->size());
  return std::get<RandomPlacement>(source).count;
}

json behavior_json(const AdversaryBehavior& b) {
  if (const auto* s = std::get_if<SineWave>(&b))
    return {{"type", "sine"}, {"amplitude", s->amplitude}, {"period", s->period}, {"offset", s->offset}};
  const auto& r = std::get<RandomControl>(b);
  return {{"type", "random_control"}, {"lo", r.lo}, {"hi", r.hi}};
}

}  // namespace

int node_count(const ScenarioConfig& config) {
  return std::visit(
      [](const auto& g) -> int {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, LiteralGraph>)
          return g.graph.size();
        else
          return g.n;
      },
      config.graph);
}

ScenarioConfig parse_config(const json& doc) {
  std::vector<std::string> problems;
  Reader rd(problems);
  ScenarioConfig cfg;
  if (!rd.object(doc, "config")) throw ConfigError(std::move(problems));
  rd.no_unknown_keys(doc, "config",
                     {"graph", "protocol", "F", "epsilon", "c", "delay", "delay_bound", "adversaries",
                      "initial_states", "initial_controls", "horizon", "settle_window", "seed", "trials",
                      "theorem_scoped", "sweep"});

  if (doc.contains("graph"))
    cfg.graph = parse_graph(rd, doc.at("graph"));
  else
    rd.fail("config", "missing 'graph'");
  if (const auto name = rd.get<std::string>(doc, "protocol", "config")) {
    if (const auto kind = parse_protocol(*name))
      cfg.protocol = *kind;
    else
      rd.fail("config.protocol", "unknown protocol '" + *name + "'");
  }
  cfg.F = rd.get_or<int>(doc, "F", "config", cfg.F);
  cfg.epsilon = rd.get_or<double>(doc, "epsilon", "config", cfg.epsilon);
  cfg.c = rd.get_or<double>(doc, "c", "config", cfg.c);
  if (doc.contains("delay")) cfg.delay = parse_delay(rd, doc.at("delay"));
  cfg.delay_bound = rd.get<double>(doc, "delay_bound", "config");
  if (doc.contains("adversaries")) cfg.adversaries = parse_adversaries(rd, doc.at("adversaries"), cfg.epsilon);
  if (doc.contains("initial_states")) cfg.initial_states = parse_initial(rd, doc.at("initial_states"));
  if (doc.contains("initial_controls")) {
    const auto& u = doc.at("initial_controls");
    for (std::size_t k = 0; u.is_array() && k < u.size(); ++k) {
      if (!u[k].is_number_integer() || std::abs(u[k].get<int>()) > 1) {
        rd.fail("config.initial_controls[" + std::to_string(k) + "]", "expected -1, 0 or 1");
        continue;
      }
      cfg.initial_controls.push_back(static_cast<Control>(u[k].get<int>()));
    }
    if (!u.is_array()) rd.fail("config.initial_controls", "expected a list");
  }
  cfg.horizon = rd.get_or<double>(doc, "horizon", "config", cfg.horizon);
  cfg.settle_window = rd.get<double>(doc, "settle_window", "config");
  if (doc.contains("seed")) {
    if (doc.at("seed").is_number_unsigned())
      cfg.seed = doc.at("seed").get<std::uint64_t>();
    else
      rd.fail("config.seed", "expected a nonnegative integer");
  }
  cfg.trials = rd.get_or<int>(doc, "trials", "config", cfg.trials);
  cfg.theorem_scoped = rd.get_or<bool>(doc, "theorem_scoped", "config", cfg.theorem_scoped);
  if (doc.contains("sweep")) cfg.sweep = parse_sweep(rd, doc.at("sweep"), cfg.protocol);

  const int n = node_count(cfg);
  if (cfg.F < 0) rd.fail("config.F", "must be nonnegative");
  if (!(cfg.epsilon > 0.0)) rd.fail("config.epsilon", "must be positive");
  if (!(cfg.c >= 0.0)) rd.fail("config.c", "must be nonnegative");
  if (!(cfg.horizon > 0.0)) rd.fail("config.horizon", "must be positive");
  if (cfg.settle_window && !(*cfg.settle_window >= 0.0 && *cfg.settle_window <= cfg.horizon))
    rd.fail("config.settle_window", "must lie in [0, horizon]");
  if (cfg.trials < 1) rd.fail("config.trials", "must be at least 1");
  if (cfg.delay_bound && *cfg.delay_bound < max_delay(cfg.delay))
    rd.fail("config.delay_bound", "is smaller than the largest delay the model produces");

  const int n_adv = adversary_count(cfg.adversaries);
  if (n_adv > n) rd.fail("config.adversaries", "more adversaries than nodes");
  if (const auto* list = std::get_if<std::vector<AdversarySpec>>(&cfg.adversaries)) {
    std::set<NodeId> seen;
    for (const auto& a : *list) {
      if (a.agent < 0 || a.agent >= n) rd.fail("config.adversaries", "agent " + std::to_string(a.agent) + " out of range");
      if (!seen.insert(a.agent).second) rd.fail("config.adversaries", "agent " + std::to_string(a.agent) + " listed twice");
      if (!(a.send_interval >= cfg.epsilon))
        rd.fail("config.adversaries", "send interval of agent " + std::to_string(a.agent) + " is below epsilon");
    }
  } else if (const auto& p = std::get<RandomPlacement>(cfg.adversaries);
             p.send_interval && !(*p.send_interval >= cfg.epsilon)) {
    rd.fail("config.adversaries.send_interval", "is below epsilon");
  }
  if (const auto* values = std::get_if<std::vector<double>>(&cfg.initial_states)) {
    const int len = static_cast<int>(values->size());
    if (len != n && len != n - n_adv)
      rd.fail("config.initial_states", "expected " + std::to_string(n - n_adv) + " (regular) or " + std::to_string(n) +
                                           " (all) values, got " + std::to_string(len));
    if (cfg.sweep && len != n) rd.fail("config.initial_states", "a sweep needs one value per node or a distribution");
  }
  if (const int len = static_cast<int>(cfg.initial_controls.size()); len != 0 && len != n && len != n - n_adv)
    rd.fail("config.initial_controls", "expected one control per regular agent or per node");
  if (cfg.sweep) {
    const bool geometric = std::holds_alternative<GeometricGraph>(cfg.graph);
    if ((!cfg.sweep->ranges.empty() || cfg.sweep->mean_degree) && !geometric)
      rd.fail("config.sweep", "range axes need a geometric graph");
    for (int a : cfg.sweep->n_adversaries)
      if (a > n) rd.fail("config.sweep.n_adversaries", "more adversaries than nodes");
    if (std::holds_alternative<std::vector<AdversarySpec>>(cfg.adversaries) && n_adv > 0)
      rd.fail("config.adversaries", "a sweep places adversaries itself; use a random placement object");
    if (cfg.sweep->mean_degree && geometric && *cfg.sweep->mean_degree >= n - 1)
      rd.fail("config.sweep.mean_degree", "must be below n - 1");
  }
  if (!problems.empty()) throw ConfigError(std::move(problems));
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError({path + ": " + e.what()});
  }
  return parse_config(doc);
}

json to_json(const ScenarioConfig& cfg) {
  json j;
  std::visit(
      [&](const auto& g) {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, LiteralGraph>) {
          json edges = json::array();
          json weights = json::array();
          for (const auto& e : g.graph.edges()) {
            edges.push_back({e.from, e.to});
            weights.push_back({e.to, e.from, g.graph.weight(e.to, e.from)});
          }
          j["graph"] = {{"type", "literal"}, {"n", g.graph.size()}, {"bidirectional", false},
                        {"edges", edges},    {"weights", weights}};
        } else if constexpr (std::is_same_v<T, GeometricGraph>) {
          j["graph"] = {{"type", "geometric"}, {"n", g.n}, {"range", g.range}};
        } else {
          j["graph"] = {{"type", "complete"}, {"n", g.n}};
        }
      },
      cfg.graph);
  j["protocol"] = std::string(to_string(cfg.protocol));
  j["F"] = cfg.F;
  j["epsilon"] = cfg.epsilon;
  j["c"] = cfg.c;
  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, ZeroDelay>)
          j["delay"] = {{"type", "zero"}};
        else if constexpr (std::is_same_v<T, FixedDelay>)
          j["delay"] = {{"type", "fixed"}, {"delay", d.delay}};
        else
          j["delay"] = {{"type", "uniform"}, {"max", d.max}};
      },
      cfg.delay);
  j["delay_bound"] = cfg.delay_bound.value_or(max_delay(cfg.delay));
  if (const auto* list = std::get_if<std::vector<AdversarySpec>>(&cfg.adversaries)) {
    j["adversaries"] = json::array();
    for (const auto& a : *list)
      j["adversaries"].push_back(
          {{"agent", a.agent}, {"behavior", behavior_json(a.behavior)}, {"send_interval", a.send_interval}});
  } else {
    const auto& p = std::get<RandomPlacement>(cfg.adversaries);
    j["adversaries"] = {{"type", "random"},
                        {"count", p.count},
                        {"behavior", behavior_json(p.behavior)},
                        {"send_interval", p.send_interval.value_or(cfg.epsilon)}};
  }
  if (const auto* values = std::get_if<std::vector<double>>(&cfg.initial_states))
    j["initial_states"] = *values;
  else
    j["initial_states"] = {{"type", "uniform"},
                           {"lo", std::get<UniformInitial>(cfg.initial_states).lo},
                           {"hi", std::get<UniformInitial>(cfg.initial_states).hi}};
  j["initial_controls"] = json::array();
  for (auto u : cfg.initial_controls) j["initial_controls"].push_back(static_cast<int>(u));
  j["horizon"] = cfg.horizon;
  j["settle_window"] = cfg.settle_window.value_or(0.5 * cfg.horizon);
  j["seed"] = cfg.seed;
  j["trials"] = cfg.trials;
  j["theorem_scoped"] = cfg.theorem_scoped;
  if (cfg.sweep) {
    json s;
    if (!cfg.sweep->ranges.empty()) s["ranges"] = cfg.sweep->ranges;
    if (cfg.sweep->mean_degree) s["mean_degree"] = *cfg.sweep->mean_degree;
    s["n_adversaries"] = cfg.sweep->n_adversaries;
    s["protocols"] = json::array();
    for (auto p : cfg.sweep->protocols) s["protocols"].push_back(std::string(to_string(p)));
    s["F_tracks_adversaries"] = cfg.sweep->f_tracks_adversaries;
    j["sweep"] = s;
  }
  return j;
}

Scenario resolve(const ScenarioConfig& cfg, std::uint64_t trial) {
  Scenario sc;
  const int n = node_count(cfg);
  sc.graph = std::visit(
      [&](const auto& g) -> DirectedGraph {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, LiteralGraph>)
          return g.graph;
        else if constexpr (std::is_same_v<T, GeometricGraph>)
          return random_geometric(g.n, g.range, derive_seed(cfg.seed, trial, StreamPurpose::Graph));
        else
          return assign_uniform_weights(DirectedGraph::complete(g.n));
      },
      cfg.graph);
  sc.protocol = cfg.protocol;
  sc.F = cfg.F;
  sc.epsilon = cfg.epsilon;
  sc.c = cfg.c;
  sc.delay = cfg.delay;
  sc.delay_bound = cfg.delay_bound.value_or(max_delay(cfg.delay));
  sc.horizon = cfg.horizon;
  sc.seed = cfg.seed;
  sc.trial = trial;

  if (const auto* list = std::get_if<std::vector<AdversarySpec>>(&cfg.adversaries)) {
    sc.adversaries = *list;
  } else {
    // One permutation per trial; taking a prefix keeps placements nested across counts.
    const auto& p = std::get<RandomPlacement>(cfg.adversaries);
    auto rng = make_stream(cfg.seed, trial, StreamPurpose::Placement);
    std::vector<NodeId> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    for (int k = 0; k < p.count; ++k)
      sc.adversaries.push_back({order[k], p.behavior, p.send_interval.value_or(cfg.epsilon)});
  }
  const auto mask = adversary_mask(sc);

  if (const auto* values = std::get_if<std::vector<double>>(&cfg.initial_states)) {
    if (static_cast<int>(values->size()) == n) {
      sc.initial_states = *values;
    } else {
      if (static_cast<int>(values->size()) != n - static_cast<int>(sc.adversaries.size()))
        throw ConfigError({"initial_states: expected one value per regular agent"});
      sc.initial_states.assign(n, 0.0);
      auto it = values->begin();
      for (NodeId i = 0; i < n; ++i)
        if (!mask[i]) sc.initial_states[i] = *it++;
      // Adversaries without a given start sit at the middle of the regular hull.
      const auto [lo, hi] = std::minmax_element(values->begin(), values->end());
      const double mid = values->empty() ? 0.0 : 0.5 * (*lo + *hi);
      for (NodeId i = 0; i < n; ++i)
        if (mask[i]) sc.initial_states[i] = mid;
    }
  } else {
    const auto& u = std::get<UniformInitial>(cfg.initial_states);
    auto rng = make_stream(cfg.seed, trial, StreamPurpose::Initial);
    std::uniform_real_distribution<double> draw(u.lo, u.hi);
    sc.initial_states.resize(n);
    for (auto& x : sc.initial_states) x = u.lo == u.hi ? u.lo : draw(rng);
  }

  if (static_cast<int>(cfg.initial_controls.size()) == n) {
    sc.initial_controls = cfg.initial_controls;
  } else if (!cfg.initial_controls.empty()) {
    if (static_cast<int>(cfg.initial_controls.size()) != n - static_cast<int>(sc.adversaries.size()))
      throw ConfigError({"initial_controls: expected one control per regular agent"});
    sc.initial_controls.assign(n, Control::Zero);
    auto it = cfg.initial_controls.begin();
    for (NodeId i = 0; i < n; ++i)
      if (!mask[i]) sc.initial_controls[i] = *it++;
  }

  if (cfg.theorem_scoped)
    if (auto problems = theorem_scope_problems(sc); !problems.empty()) throw ConfigError(std::move(problems));
  return sc;
}

int induced_tau(int n, double delay_bound, double epsilon) {
  if (!(epsilon > 0.0)) throw UsageError("epsilon must be positive");
  const double limit = n * delay_bound / epsilon;
  return std::max(0, static_cast<int>(std::ceil(limit)) - 1);
}

double scenario_epsilon_bound(const Scenario& sc) {
  const int n = sc.graph.size();
  return epsilon_bound(min_nonzero_weight(sc.graph), n, induced_tau(n, sc.delay_bound, sc.epsilon), sc.c);
}

std::vector<std::string> theorem_scope_problems(const Scenario& sc) {
  std::vector<std::string> problems;
  if (static_cast<int>(sc.adversaries.size()) > sc.F)
    problems.push_back(std::to_string(sc.adversaries.size()) + " adversaries exceed F = " + std::to_string(sc.F));
  try {
    const double bound = scenario_epsilon_bound(sc);
    if (sc.epsilon > bound * (1.0 + 1e-12))
      problems.push_back("epsilon " + describe(sc.epsilon) + " exceeds the convergence bound " + describe(bound));
  } catch (const UsageError& e) {
    problems.push_back(std::string("epsilon bound undefined: ") + e.what());
  }
  return problems;
}

}  // namespace rcons
