#include "hystreal/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>

#include "hystreal/errors.hpp"

namespace hystreal {

using nlohmann::json;

std::string to_string(Direction d) { return d == Direction::Up ? "up" : "down"; }

int AdmissibleGraph::level_of(const std::string& vertex) const {
  for (std::size_t i = 0; i < levels.size(); ++i)
    for (const auto& v : levels[i])
      if (v == vertex) return static_cast<int>(i);
  return -1;
}

int AdmissibleGraph::position_of(const std::string& vertex) const {
  for (const auto& level : levels)
    for (std::size_t k = 0; k < level.size(); ++k)
      if (level[k] == vertex) return static_cast<int>(k);
  return -1;
}

std::size_t AdmissibleGraph::vertex_count() const {
  std::size_t n = 0;
  for (const auto& level : levels) n += level.size();
  return n;
}

std::vector<int> AdmissibleGraph::level_sizes() const {
  std::vector<int> out;
  for (const auto& level : levels) out.push_back(static_cast<int>(level.size()));
  return out;
}

ValidationReport validate_admissible(const AdmissibleGraph& g) {
  ValidationReport rep;
  auto add = [&](std::string vertex, int level, std::string axiom, std::string msg) {
    rep.ok = false;
    rep.violations.push_back({std::move(vertex), level, std::move(axiom), std::move(msg)});
  };

  if (g.levels.size() < 2) add("", -1, "levels", "at least two levels are required");
  std::map<std::string, int> level_of;
  for (std::size_t i = 0; i < g.levels.size(); ++i) {
    if (g.levels[i].empty()) add("", static_cast<int>(i), "non-empty levels", "level is empty");
    for (const auto& v : g.levels[i]) {
      auto [it, fresh] = level_of.emplace(v, static_cast<int>(i));
      if (!fresh)
        add(v, static_cast<int>(i), "disjoint levels",
            "vertex already listed at level " + std::to_string(it->second));
    }
  }
  const int n = static_cast<int>(g.levels.size()) - 1;

  auto check_edges = [&](const std::map<std::string, std::string>& edges, Direction dir) {
    const std::string name = to_string(dir) + " edge";
    const int step = dir == Direction::Up ? 1 : -1;
    for (const auto& [src, dst] : edges) {
      auto s = level_of.find(src);
      if (s == level_of.end()) {
        add(src, -1, name, "edge source is not a vertex");
        continue;
      }
      if ((dir == Direction::Up && s->second == n) || (dir == Direction::Down && s->second == 0)) {
        add(src, s->second, name, "vertex on a boundary level must not have this edge");
        continue;
      }
      auto t = level_of.find(dst);
      if (t == level_of.end()) {
        add(src, s->second, name, "dangling edge to unknown vertex '" + dst + "'");
      } else if (t->second != s->second + step) {
        add(src, s->second, name,
            "edge to '" + dst + "' at level " + std::to_string(t->second) + " is not adjacent");
      }
    }
    for (const auto& [v, lvl] : level_of) {
      const bool needs = dir == Direction::Up ? lvl < n : lvl > 0;
      if (needs && !edges.contains(v)) add(v, lvl, "exactly two edges", "missing " + name);
    }
  };
  check_edges(g.up, Direction::Up);
  check_edges(g.down, Direction::Down);

  if (!g.input_values.empty()) {
    if (static_cast<int>(g.input_values.size()) != n + 1)
      add("", -1, "input values", "expected one input value per level");
    for (std::size_t i = 0; i + 1 < g.input_values.size(); ++i)
      if (!(g.input_values[i + 1] > g.input_values[i]))
        add("", static_cast<int>(i + 1), "input values", "input values must increase strictly");
  }
  return rep;
}

void require_admissible(const AdmissibleGraph& g) {
  const auto rep = validate_admissible(g);
  if (rep.ok) return;
  std::ostringstream msg;
  msg << "graph is not admissible:";
  for (std::size_t i = 0; i < rep.violations.size() && i < 5; ++i) {
    const auto& v = rep.violations[i];
    msg << " [" << v.axiom << (v.vertex.empty() ? "" : " at " + v.vertex) << ": " << v.message << "]";
  }
  throw DomainError(msg.str());
}

std::string transition(const AdmissibleGraph& g, const std::string& s, Direction dir) {
  const int lvl = g.level_of(s);
  if (lvl < 0) throw DomainError("transition: unknown vertex '" + s + "'");
  const auto& edges = dir == Direction::Up ? g.up : g.down;
  if ((dir == Direction::Up && lvl == g.top_level()) || (dir == Direction::Down && lvl == 0))
    throw DomainError("transition: no " + to_string(dir) + " edge from boundary level " + std::to_string(lvl));
  auto it = edges.find(s);
  if (it == edges.end()) throw DomainError("transition: vertex '" + s + "' has no " + to_string(dir) + " edge");
  return it->second;
}

VertexTrajectory run_input(const AdmissibleGraph& g, const std::string& start, const std::vector<int>& levels) {
  VertexTrajectory out;
  if (levels.empty()) return out;
  const int lvl = g.level_of(start);
  if (lvl != levels.front())
    throw DomainError("run_input: start vertex '" + start + "' is not on level " + std::to_string(levels.front()));
  std::string s = start;
  out.push_back({lvl, s});
  for (std::size_t t = 1; t < levels.size(); ++t) {
    const int d = levels[t] - levels[t - 1];
    if (d < -1 || d > 1) throw DomainError("run_input: input jumps by more than one level at step " + std::to_string(t));
    if (levels[t] < 0 || levels[t] > g.top_level()) throw DomainError("run_input: level out of range");
    if (d != 0) s = transition(g, s, d > 0 ? Direction::Up : Direction::Down);
    out.push_back({levels[t], s});
  }
  return out;
}

int level_of_input(const AdmissibleGraph& g, double u) {
  if (g.input_values.empty()) {
    const double r = std::round(u);
    if (r == u && r >= 0 && r <= g.top_level()) return static_cast<int>(r);
    return -1;
  }
  for (std::size_t i = 0; i < g.input_values.size(); ++i)
    if (g.input_values[i] == u) return static_cast<int>(i);
  return -1;
}

VertexTrajectory run_input_values(const AdmissibleGraph& g, const std::string& start,
                                  const std::vector<double>& values) {
  std::vector<int> levels;
  for (double u : values) {
    const int l = level_of_input(g, u);
    if (l < 0) throw DomainError("run_input: input value is not on the grid");
    levels.push_back(l);
  }
  return run_input(g, start, levels);
}

namespace {

std::map<std::string, std::string> edge_map(const json& j, const char* key) {
  if (!j.is_object()) throw DomainError(std::string("graph file: '") + key + "' must be an object");
  std::map<std::string, std::string> out;
  for (const auto& [k, v] : j.items()) {
    if (!v.is_string()) throw DomainError(std::string("graph file: '") + key + "' targets must be strings");
    out.emplace(k, v.get<std::string>());
  }
  return out;
}

}  // namespace

AdmissibleGraph parse_graph_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DomainError(std::string("graph file: ") + e.what());
  }
  if (!j.is_object()) throw DomainError("graph file: top level must be an object");
  static const std::set<std::string> known = {"levels", "up", "down", "input_values"};
  for (const auto& [k, v] : j.items())
    if (!known.contains(k)) throw DomainError("graph file: unknown key '" + k + "'");
  if (!j.contains("levels") || !j.contains("up") || !j.contains("down"))
    throw DomainError("graph file: keys 'levels', 'up' and 'down' are required");

  AdmissibleGraph g;
  if (!j["levels"].is_array()) throw DomainError("graph file: 'levels' must be an array");
  for (const auto& level : j["levels"]) {
    if (!level.is_array()) throw DomainError("graph file: every level must be an array");
    std::vector<std::string> ids;
    for (const auto& v : level) {
      if (!v.is_string()) throw DomainError("graph file: vertex ids must be strings");
      ids.push_back(v.get<std::string>());
    }
    g.levels.push_back(std::move(ids));
  }
  g.up = edge_map(j["up"], "up");
  g.down = edge_map(j["down"], "down");
  if (j.contains("input_values")) {
    if (!j["input_values"].is_array()) throw DomainError("graph file: 'input_values' must be an array");
    for (const auto& v : j["input_values"]) {
      if (!v.is_number()) throw DomainError("graph file: input values must be numbers");
      g.input_values.push_back(v.get<double>());
    }
  } else {
    for (std::size_t i = 0; i < g.levels.size(); ++i) g.input_values.push_back(static_cast<double>(i));
  }
  return g;
}

std::string graph_to_json(const AdmissibleGraph& g) {
  json j;
  j["levels"] = g.levels;
  j["up"] = g.up;
  j["down"] = g.down;
  j["input_values"] = g.input_values;
  return j.dump(2) + "\n";
}

std::vector<int> fill_unit_steps(const std::vector<int>& levels) {
  std::vector<int> out;
  for (int l : levels) {
    if (!out.empty())
      while (std::abs(l - out.back()) > 1) out.push_back(out.back() + (l > out.back() ? 1 : -1));
    out.push_back(l);
  }
  return out;
}

std::vector<int> damped_oscillation(int top, double amp0, double decay, int period, int cycles) {
  if (top < 1) throw DomainError("damped_oscillation: need at least two levels");
  if (!(amp0 >= 1) || !(decay >= 0) || period < 2 || cycles < 1)
    throw DomainError("damped_oscillation: need amp0 >= 1, decay >= 0, period >= 2, cycles >= 1");
  std::vector<int> raw;
  const double c = 0.5 * top;
  for (int t = 0; t <= cycles * period; ++t) {
    const double a = 1.0 + (amp0 - 1.0) * std::exp(-decay * t);
    const double u = c + a * std::sin(2.0 * std::numbers::pi * t / period);
    raw.push_back(std::clamp(static_cast<int>(std::lround(u)), 0, top));
  }
  return fill_unit_steps(raw);
}

AdmissibleGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read graph file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_graph_json(ss.str());
}

void save_graph(const AdmissibleGraph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write graph file '" + path + "'");
  out << graph_to_json(g);
}

AdmissibleGraph relay_graph() {
  AdmissibleGraph g;
  g.levels = {{"a"}, {"b"}};
  g.up = {{"a", "b"}};
  g.down = {{"b", "a"}};
  g.input_values = {0.0, 1.0};
  return g;
}

}  // namespace hystreal
