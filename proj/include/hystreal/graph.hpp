#pragma once

// Leveled transition graphs of hysteretic systems and their discrete dynamics.

#include <map>
#include <string>
#include <vector>

namespace hystreal {

enum class Direction { Up, Down };

std::string to_string(Direction d);

/// Levels S_0..S_n with one up-edge per vertex below the top level and one
/// down-edge per vertex above the bottom level. Also used for unvalidated input.
struct AdmissibleGraph {
  std::vector<std::vector<std::string>> levels;
  std::map<std::string, std::string> up;
  std::map<std::string, std::string> down;
  std::vector<double> input_values;

  int top_level() const { return static_cast<int>(levels.size()) - 1; }
  /// Level index of a vertex, -1 when absent.
  int level_of(const std::string& vertex) const;
  /// Index of the vertex inside its level, -1 when absent.
  int position_of(const std::string& vertex) const;
  std::size_t vertex_count() const;
  std::size_t edge_count() const { return up.size() + down.size(); }
  std::vector<int> level_sizes() const;

  bool operator==(const AdmissibleGraph&) const = default;
};

struct Violation {
  std::string vertex;  // empty when the violation concerns a level or the whole graph
  int level = -1;
  std::string axiom;
  std::string message;
};

struct ValidationReport {
  bool ok = true;
  std::vector<Violation> violations;
};

ValidationReport validate_admissible(const AdmissibleGraph& candidate);

/// Throws DomainError listing the first violations when the graph is not admissible.
void require_admissible(const AdmissibleGraph& g);

std::string transition(const AdmissibleGraph& g, const std::string& s, Direction dir);

struct VertexStep {
  int level = 0;
  std::string vertex;
  bool operator==(const VertexStep&) const = default;
};
using VertexTrajectory = std::vector<VertexStep>;

/// Folds transition over a sequence of level indices (unit steps or repeats).
VertexTrajectory run_input(const AdmissibleGraph& g, const std::string& start, const std::vector<int>& levels);

/// Inserts the intermediate levels so that consecutive entries differ by at most one.
std::vector<int> fill_unit_steps(const std::vector<int>& levels);

/// Levels round(c + A(t) sin(2 pi t / period)) at t = 0..cycles*period, c = top/2,
/// A(t) = 1 + (amp0 - 1) exp(-decay t), clamped to [0, top] and filled to unit steps.
std::vector<int> damped_oscillation(int top, double amp0, double decay, int period, int cycles = 8);

/// Level index of an input value (exact match against input_values), -1 when off-grid.
int level_of_input(const AdmissibleGraph& g, double u);

/// Same as run_input but with input values drawn from g.input_values.
VertexTrajectory run_input_values(const AdmissibleGraph& g, const std::string& start,
                                  const std::vector<double>& values);

/// JSON document with keys levels, up, down, input_values. Unknown keys are rejected
/// with DomainError; input_values default to 0..n.
AdmissibleGraph parse_graph_json(const std::string& text);
std::string graph_to_json(const AdmissibleGraph& g);

AdmissibleGraph load_graph(const std::string& path);
void save_graph(const AdmissibleGraph& g, const std::string& path);

/// Two-vertex graph of the non-ideal relay: S_0 = {a}, S_1 = {b}.
AdmissibleGraph relay_graph();

}  // namespace hystreal
