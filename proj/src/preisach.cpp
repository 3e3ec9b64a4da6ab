#include "hystreal/preisach.hpp"

#include <cmath>

#include "hystreal/errors.hpp"

namespace hystreal {

Relay relay_step(Relay r, double u) {
  if (u >= r.upper)
    r.state = 1;
  else if (u <= r.lower)
    r.state = 0;
  return r;
}

int ones(const StaircaseState& s) {
  int n = 0;
  for (int bit : s) n += bit;
  return n;
}

std::string to_bits(const StaircaseState& s) {
  std::string out;
  for (int bit : s) out += bit ? '1' : '0';
  return out;
}

StaircaseState from_bits(const std::string& bits) {
  StaircaseState s;
  for (char c : bits) {
    if (c != '0' && c != '1') throw DomainError("from_bits: '" + bits + "' is not a bit string");
    s.push_back(c == '1');
  }
  return s;
}

StaircaseState staircase_up(const StaircaseState& s) {
  for (int k = static_cast<int>(s.size()) - 1; k >= 0; --k) {
    if (s[k] == 0) {
      StaircaseState out = s;
      out[k] = 1;
      return out;
    }
  }
  throw DomainError("staircase_up: state " + to_bits(s) + " is on the top level");
}

StaircaseState staircase_down(const StaircaseState& s) {
  for (int k = static_cast<int>(s.size()) - 1; k >= 0; --k) {
    if (s[k] == 1) {
      StaircaseState out = s;
      out[k] = 0;
      return out;
    }
  }
  throw DomainError("staircase_down: state " + to_bits(s) + " is on the bottom level");
}

int RelayBank::index(int row, int col) const {
  // rows a = 1..N, columns b = a..N, stored row by row
  return (row - 1) * N - (row - 1) * (row - 2) / 2 + (col - row);
}

RelayBank make_bank(int N) {
  if (N < 1) throw DomainError("make_bank: N must be positive");
  RelayBank bank;
  bank.N = N;
  for (int a = 1; a <= N; ++a) {
    for (int b = a; b <= N; ++b) {
      bank.a.push_back(a);
      bank.b.push_back(b);
      bank.relays.push_back({a - 0.75, b - 0.25, 0});
    }
  }
  return bank;
}

RelayBank bank_step(RelayBank bank, double u) {
  const double k = std::round(u);
  if (k != u || k < 0 || k > bank.N) throw DomainError("bank_step: input is not a grid value");
  for (auto& r : bank.relays) r = relay_step(r, u);
  return bank;
}

int bank_output(const RelayBank& bank) {
  int p = 0;
  for (const auto& r : bank.relays) p += r.state;
  return p;
}

StaircaseState state_of_bank(const RelayBank& bank) {
  const int N = bank.N;
  auto on = [&](int a, int b) { return bank.relays[bank.index(a, b)].state == 1; };
  int level = 0;
  while (level < N && on(level + 1, level + 1)) ++level;
  std::vector<int> reach(level + 1, 0);
  for (int a = 1; a <= N; ++a) {
    int last = a - 1;
    for (int b = a; b <= N; ++b) {
      if (on(a, b)) {
        if (last != b - 1) throw DomainError("state_of_bank: row is not contiguous");
        last = b;
      }
    }
    if (a > level) {
      if (last != a - 1) throw DomainError("state_of_bank: relay on above the current level");
      continue;
    }
    if (last < level) throw DomainError("state_of_bank: relay below the input is off");
    reach[a] = last - level;
    if (a > 1 && reach[a] > reach[a - 1]) throw DomainError("state_of_bank: configuration is not a staircase");
  }
  StaircaseState s(N, 0);
  for (int a = 1; a <= level; ++a) {
    // a-th one is followed by reach[a] zeros and level - a ones
    const int pos = N - (level - a) - reach[a];
    if (pos < 1 || s[pos - 1] == 1) throw DomainError("state_of_bank: configuration is not a staircase");
    s[pos - 1] = 1;
  }
  return s;
}

RelayBank bank_of_state(const StaircaseState& s) {
  const int N = static_cast<int>(s.size());
  RelayBank bank = make_bank(N);
  const int level = ones(s);
  std::vector<int> reach(level + 1, 0);
  int a = 0;
  for (int k = 0; k < N; ++k) {
    if (!s[k]) continue;
    ++a;
    int zeros = 0;
    for (int q = k + 1; q < N; ++q) zeros += s[q] == 0;
    reach[a] = zeros;
  }
  for (std::size_t r = 0; r < bank.relays.size(); ++r) {
    const int row = bank.a[r], col = bank.b[r];
    bank.relays[r].state = (row <= level && col <= level + reach[row]) ? 1 : 0;
  }
  return bank;
}

int staircase_output(const StaircaseState& s) { return bank_output(bank_of_state(s)); }

AdmissibleGraph build_graph(int N) {
  if (N < 1) throw DomainError("build_graph: N must be positive");
  AdmissibleGraph g;
  g.levels.resize(N + 1);
  for (unsigned long mask = 0; mask < (1ul << N); ++mask) {
    StaircaseState s(N);
    for (int k = 0; k < N; ++k) s[k] = (mask >> (N - 1 - k)) & 1u;
    g.levels[ones(s)].push_back(to_bits(s));
  }
  for (const auto& level : g.levels) {
    for (const auto& id : level) {
      const StaircaseState s = from_bits(id);
      const int i = ones(s);
      if (i < N) g.up[id] = to_bits(staircase_up(s));
      if (i > 0) g.down[id] = to_bits(staircase_down(s));
    }
  }
  for (int k = 0; k <= N; ++k) g.input_values.push_back(k);
  return g;
}

}  // namespace hystreal
