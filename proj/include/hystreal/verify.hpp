#pragma once

// Checks that a constructed realization behaves like its graph, plus the transposition and
// relay-bank suites.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "hystreal/flow.hpp"
#include "hystreal/graph.hpp"
#include "hystreal/schedule.hpp"

namespace hystreal {

struct CheckEntry {
  std::string name;
  bool pass = false;
  double measured = 0;
  double tolerance = 0;
  std::string detail;
};

struct EdgeOutcome {
  Direction direction = Direction::Up;
  int level = 0;
  std::string source, target, landed;
  double u_fold = 0;
  double distance = 0;  // |landing minimum - X(target)|
  double dissipation = 0;
  bool pass = false;
  std::string detail;
};

struct VerificationReport {
  std::string subject;
  std::vector<CheckEntry> checks;
  std::vector<EdgeOutcome> edges;  // sorted by (source, direction)
  double seconds = 0;  // wall time, not exported

  bool pass() const;
  void add(std::string name, bool pass, double measured, double tolerance, std::string detail = {});
  const CheckEntry* find(const std::string& name) const;
  std::string to_json() const;
  std::string summary() const;
};

struct VerifyConfig {
  double tolerance = 1e-6;        // minima vs X images, landing vs target
  double far_tolerance = 1e-9;    // V - |x|^2 outside the window
  int ring_samples = 72;
  int rays = 24;
  int ray_samples = 60;
  double axis_step = 2.5e-3;
  SweepConfig sweep;
};

/// (i) far field and radial growth, (ii) minima of V(., u^i) against X_i, (iii) one
/// simulated unit step per edge, record bookkeeping, and reversible excursions.
VerificationReport check_realization(const Realization& r, const AdmissibleGraph& g, const VerifyConfig& cfg = {});

struct Lemma1Config {
  int u_points = 200;
  int endpoint_samples = 500;
  double endpoint_tolerance = 1e-9;
  double terminal_tolerance = 1e-6;
  double grid_spacing = 0.025;  // candidate search for extra minima
  double box_x2 = 1.2;
  std::uint64_t seed = 7;
  SweepConfig sweep;
};

/// Endpoint identity, constant number of minima, continuous tracks and the terminal
/// assignment x_k(u_-) -> x_{p_k}(u_+) for a permutation schedule on the standard layout.
VerificationReport check_lemma1(const DeformationSchedule& sched, const Permutation& perm, const Lemma1Config& cfg = {});

/// Graph dynamics on build_graph(N) against the relay bank for random unit-step sequences.
VerificationReport oracle_compare_preisach(int N, int trials, int seq_len, std::uint64_t seed, int max_N = 6);

/// Levels 0..n with n uniform in [1, max_top], sizes uniform in [1, max_size], each
/// up and down target drawn uniformly from the neighbouring level.
AdmissibleGraph random_admissible_graph(std::mt19937_64& rng, int max_top = 3, int max_size = 4);

/// Minima of x1 -> V((x1, 0), u) by sign changes of the axis derivative.
std::vector<double> axis_minima(const FieldFamily& fam, double u, double lo, double hi, double step);

}  // namespace hystreal
