#pragma once

// Non-ideal relays and the discrete Preisach model on a triangular threshold lattice.

#include <string>
#include <vector>

#include "hystreal/graph.hpp"

namespace hystreal {

struct Relay {
  double lower = 0.0;  // u_-
  double upper = 1.0;  // u_+
  int state = 0;
};

/// State 1 when u >= upper, 0 when u <= lower, unchanged in between.
Relay relay_step(Relay r, double u);

/// Bits a_1..a_N; the level is the number of ones.
using StaircaseState = std::vector<int>;

int ones(const StaircaseState& s);
std::string to_bits(const StaircaseState& s);
StaircaseState from_bits(const std::string& bits);

/// The last 0 turns into 1.
StaircaseState staircase_up(const StaircaseState& s);
/// The last 1 turns into 0.
StaircaseState staircase_down(const StaircaseState& s);

/// N(N+1)/2 relays indexed by 1 <= a <= b <= N with thresholds a - 3/4 and b - 1/4,
/// driven on the input grid u^k = k, k = 0..N.
struct RelayBank {
  int N = 0;
  std::vector<int> a, b;
  std::vector<Relay> relays;

  int index(int row, int col) const;
};

RelayBank make_bank(int N);
/// Every relay sees the common input u, which must lie on the grid.
RelayBank bank_step(RelayBank bank, double u);
int bank_output(const RelayBank& bank);
/// Staircase of a bank reachable from the all-zero state by grid inputs.
StaircaseState state_of_bank(const RelayBank& bank);
/// Relay configuration of a staircase state (inverse of state_of_bank).
RelayBank bank_of_state(const StaircaseState& s);

/// Number of relays in state 1 for a staircase state.
int staircase_output(const StaircaseState& s);

/// All 2^N staircase states, levels by number of ones, edges by the up/down rules.
AdmissibleGraph build_graph(int N);

}  // namespace hystreal
