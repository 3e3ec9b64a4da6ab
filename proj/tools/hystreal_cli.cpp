#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hystreal/config.hpp"
#include "hystreal/errors.hpp"
#include "hystreal/flow.hpp"
#include "hystreal/graph.hpp"
#include "hystreal/preisach.hpp"
#include "hystreal/schedule.hpp"
#include "hystreal/verify.hpp"

using namespace hystreal;

namespace {

// exit 2
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + path + "'");
  out << text;
}

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + std::to_string(v[k]);
  return s;
}

AdmissibleGraph read_graph(const std::string& path) {
  const auto text = read_file(path);
  return parse_graph_json(text);
}

Realization read_manifest(const std::string& path, const Config& cfg) {
  auto r = load_manifest(read_file(path));
  if (cfg.build.fast_path && !r.options.fast_path) std::cerr << "note: the manifest fixes its own build options\n";
  return r;
}

bool preisach_graph(const AdmissibleGraph& g, int& N) {
  N = g.top_level();
  if (N < 1 || N > 16 || g.vertex_count() != (std::size_t{1} << N)) return false;
  return g == build_graph(N);
}

std::vector<int> parse_levels(const std::vector<std::string>& tokens, int top) {
  if (tokens.empty()) throw UsageError("simulate: missing input");
  if (tokens[0] == "damped-oscillation") {
    if (tokens.size() < 4 || tokens.size() > 5)
      throw UsageError("simulate: expected 'damped-oscillation amp0 decay period [cycles]'");
    try {
      const double amp0 = std::stod(tokens[1]), decay = std::stod(tokens[2]);
      const int period = std::stoi(tokens[3]);
      const int cycles = tokens.size() == 5 ? std::stoi(tokens[4]) : 8;
      return damped_oscillation(top, amp0, decay, period, cycles);
    } catch (const std::invalid_argument&) {
      throw UsageError("simulate: damped-oscillation parameters must be numbers");
    }
  }
  std::vector<int> levels;
  for (const auto& t : tokens) {
    std::stringstream ss(t);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      std::size_t used = 0;
      int v = 0;
      try {
        v = std::stoi(item, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != item.size()) throw UsageError("simulate: bad level '" + item + "'");
      if (v < 0 || v > top) throw UsageError("simulate: level " + item + " outside 0.." + std::to_string(top));
      levels.push_back(v);
    }
  }
  for (std::size_t k = 1; k < levels.size(); ++k)
    if (std::abs(levels[k] - levels[k - 1]) > 1) throw UsageError("simulate: input must move by unit steps");
  return levels;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Planar gradient realizations of hysteresis graphs"};
  app.fallthrough();
  app.require_subcommand(0, 1);

  std::string config_path, out;
  std::optional<std::uint64_t> seed;
  std::optional<double> du;
  bool fast_path = false, show_config = false;
  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--seed", seed, "random seed");
  app.add_flag("--fast-path", fast_path, "skip the quadrature self-check");
  app.add_option("--du", du, "largest input step while tracking minima")->check(CLI::PositiveNumber);
  app.add_option("--out", out, "output path");
  app.add_flag("--show-config", show_config, "print the effective configuration and exit");

  auto* graph_cmd = app.add_subcommand("graph", "graph utilities");
  graph_cmd->require_subcommand(1);
  std::string graph_path;
  auto* validate_cmd = graph_cmd->add_subcommand("validate", "check the admissibility axioms");
  validate_cmd->add_option("path", graph_path, "graph file")->required();
  auto* random_cmd = graph_cmd->add_subcommand("random", "seeded random admissible graph");

  int N = 0;
  auto* preisach_cmd = app.add_subcommand("preisach", "graph of the discrete Preisach model");
  preisach_cmd->add_option("N", N, "number of thresholds")->required();

  auto* realize_cmd = app.add_subcommand("realize", "construct a realization manifest");
  realize_cmd->add_option("graph", graph_path, "graph file")->required();

  std::string manifest_path, start;
  std::vector<std::string> input;
  auto* simulate_cmd = app.add_subcommand("simulate", "adiabatic sweep through a realization");
  simulate_cmd->add_option("manifest", manifest_path)->required();
  simulate_cmd->add_option("start", start, "starting vertex")->required();
  simulate_cmd->add_option("input", input, "levels (0,1,0) or 'damped-oscillation amp0 decay period [cycles]'")
      ->required();

  auto* verify_cmd = app.add_subcommand("verify", "check a manifest against its graph");
  verify_cmd->add_option("manifest", manifest_path)->required();
  verify_cmd->add_option("graph", graph_path)->required();

  double u_value = 0;
  std::string grid;
  auto* export_cmd = app.add_subcommand("export-field", "sample V(., u) on a grid");
  export_cmd->add_option("manifest", manifest_path)->required();
  export_cmd->add_option("u", u_value)->required();
  export_cmd->add_option("--grid", grid, "x1_lo,x1_hi,n1,x2_lo,x2_hi,n2");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    Config cfg = config_path.empty() ? Config{} : load_config(config_path);
    if (seed) cfg.seed = *seed;
    if (fast_path) cfg.build.fast_path = true;
    if (du) cfg.sweep.du = *du;
    sync_config(cfg);
    validate_config(cfg);
    if (show_config) {
      std::cout << config_to_json(cfg) << "\n";
      return 0;
    }
    if (app.get_subcommands().empty()) {
      std::cerr << app.help();
      return 2;
    }
    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); };

    if (*validate_cmd) {
      const auto text = read_file(graph_path);
      AdmissibleGraph g;
      try {
        g = parse_graph_json(text);
      } catch (const DomainError& e) {
        std::cout << "invalid: " << e.what() << "\n";
        return 1;
      }
      const auto rep = validate_admissible(g);
      for (const auto& v : rep.violations)
        std::cout << "violation [" << v.axiom << "]" << (v.vertex.empty() ? "" : " " + v.vertex)
                  << (v.level >= 0 ? " (level " + std::to_string(v.level) + ")" : "") << ": " << v.message << "\n";
      if (!rep.ok) return 1;
      std::cout << "valid\nlevels: " << join(g.level_sizes()) << "\nedges: " << g.edge_count() << "\n";
      return 0;
    }
    if (*random_cmd) {
      std::mt19937_64 rng(cfg.seed);
      write_output(out, graph_to_json(random_admissible_graph(rng, cfg.random_max_top, cfg.random_max_size)));
      return 0;
    }
    if (*preisach_cmd) {
      if (N < 1 || N > cfg.preisach_max_N)
        throw UsageError("preisach: N must lie in [1, " + std::to_string(cfg.preisach_max_N) + "]");
      const auto g = build_graph(N);
      write_output(out, graph_to_json(g));
      std::cerr << "vertices: " << g.vertex_count() << "\nlevels: " << join(g.level_sizes()) << "\n";
      return 0;
    }
    if (*realize_cmd) {
      const auto text = read_file(graph_path);
      AdmissibleGraph g;
      try {
        g = parse_graph_json(text);
      } catch (const DomainError& e) {
        std::cerr << "invalid graph: " << e.what() << "\n";
        return 1;
      }
      const auto rep = validate_admissible(g);
      if (!rep.ok) {
        for (const auto& v : rep.violations) std::cerr << "violation [" << v.axiom << "] " << v.message << "\n";
        return 1;
      }
      Realization r;
      try {
        r = realize(g, cfg.build);
      } catch (const ConstructionError& e) {
        std::cerr << "construction failed: " << e.what() << "\n";
        return 1;
      } catch (const NumericalError& e) {
        std::cerr << "construction failed: " << e.what() << "\n";
        return 1;
      }
      write_output(out, realization_manifest(r) + "\n");
      std::cerr << "segments: " << r.schedule->segments().size() << "\ntransition records: " << r.transitions.size()
                << "\ntime: " << elapsed() << " s\n";
      return 0;
    }
    if (*simulate_cmd) {
      const auto r = read_manifest(manifest_path, cfg);
      const int level = r.graph.level_of(start);
      if (level < 0) throw UsageError("simulate: unknown vertex '" + start + "'");
      auto levels = parse_levels(input, r.graph.top_level());
      if (input[0] == "damped-oscillation") {
        // the waveform starts at the middle level; walk there from the start vertex
        std::vector<int> lead{level};
        lead.insert(lead.end(), levels.begin(), levels.end());
        levels = fill_unit_steps(lead);
      }
      if (levels.front() != level)
        throw UsageError("simulate: the input starts at level " + std::to_string(levels.front()) + " but " + start +
                         " lies on level " + std::to_string(level));
      SweepResult res;
      try {
        res = adiabatic_sweep(r, start, levels, cfg.sweep);
      } catch (const RealizationMismatch& e) {
        std::cerr << "realization mismatch: " << e.what() << "\n";
        return 1;
      }
      int n_pre = 0;
      const bool preisach = preisach_graph(r.graph, n_pre);
      std::string io = "step,level,u,vertex,p\n";
      for (std::size_t k = 0; k < res.vertices.size(); ++k) {
        const auto& s = res.vertices[k];
        io += std::to_string(k) + "," + std::to_string(s.level) + "," + num(r.u_grid[s.level]) + "," + s.vertex + "," +
              (preisach ? std::to_string(staircase_output(from_bits(s.vertex))) : "") + "\n";
      }
      const std::string prefix = out.empty() ? "simulation" : out;
      write_output(prefix + ".trajectory.csv", trajectory_csv(res.flow));
      write_output(prefix + ".events.csv", events_csv(res.flow));
      write_output(prefix + ".io.csv", io);
      int transitions = 0;
      for (const auto& s : res.steps) transitions += s.folded ? 1 : 0;
      std::cout << "steps: " << levels.size() - 1 << "\ntransitions: " << transitions
                << "\nfinal vertex: " << res.vertices.back().vertex << "\n";
      std::cerr << "time: " << elapsed() << " s\n";
      return 0;
    }
    if (*verify_cmd) {
      const auto manifest_text = read_file(manifest_path);
      const auto g = read_graph(graph_path);
      Realization r;
      try {
        r = load_manifest(manifest_text);
      } catch (const DomainError& e) {
        throw UsageError(e.what());
      }
      if (!(r.graph == g)) throw UsageError("verify: the manifest was built for a different graph");
      const auto rep = check_realization(r, g, cfg.verify);
      write_output(out.empty() ? manifest_path + ".report.json" : out, rep.to_json() + "\n");
      std::cout << rep.summary();
      std::cerr << "time: " << elapsed() << " s\n";
      return rep.pass() ? 0 : 1;
    }
    if (*export_cmd) {
      const auto r = read_manifest(manifest_path, cfg);
      const auto& V = *r.schedule;
      if (!(u_value >= V.u_lo() && u_value <= V.u_hi()))
        throw UsageError("export-field: u outside [" + num(V.u_lo()) + ", " + num(V.u_hi()) + "]");
      int widest = 1;
      for (int m : r.minima_at_mid) widest = std::max(widest, m);
      for (int m : r.minima_at_grid) widest = std::max(widest, m);
      double a = -1.5, b = widest + 2.5, c = -1.5, d = 1.5;
      int n1 = 121, n2 = 61;
      if (!grid.empty()) {
        std::stringstream ss(grid);
        char sep1, sep2, sep3, sep4, sep5;
        if (!(ss >> a >> sep1 >> b >> sep2 >> n1 >> sep3 >> c >> sep4 >> d >> sep5 >> n2) || n1 < 1 || n2 < 1)
          throw UsageError("export-field: --grid expects x1_lo,x1_hi,n1,x2_lo,x2_hi,n2");
      }
      const LambdaField f([&](Vec2 x) { return V.value(x, u_value); }, [&](Vec2 x) { return V.gradient(x, u_value); });
      write_output(out, field_grid_csv(f, a, b, n1, c, d, n2));
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
