#include <doctest.h>

#include <random>

#include "hystreal/errors.hpp"
#include "hystreal/preisach.hpp"

using namespace hystreal;

namespace {

long binomial(int n, int k) {
  long c = 1;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

// relay (a, b) switches on at u >= b - 1/4 and off at u <= a - 3/4
struct OracleBank {
  int N;
  std::vector<std::vector<int>> on;  // on[a][b]
  explicit OracleBank(int n) : N(n), on(n + 1, std::vector<int>(n + 1, 0)) {}
  void step(double u) {
    for (int a = 1; a <= N; ++a)
      for (int b = a; b <= N; ++b) {
        if (u >= b - 0.25) on[a][b] = 1;
        else if (u <= a - 0.75) on[a][b] = 0;
      }
  }
  int output() const {
    int n = 0;
    for (int a = 1; a <= N; ++a)
      for (int b = a; b <= N; ++b) n += on[a][b];
    return n;
  }
};

std::vector<int> random_walk(std::mt19937_64& rng, int N, int start, int len) {
  std::vector<int> out{start};
  for (int k = 1; k < len; ++k) {
    int next = out.back() + (std::bernoulli_distribution(0.5)(rng) ? 1 : -1);
    if (next < 0) next = 1;
    if (next > N) next = N - 1;
    out.push_back(next);
  }
  return out;
}

}  // namespace

TEST_CASE("non-ideal relay") {
  Relay r{0.25, 0.75, 0};
  r = relay_step(r, 0.5);
  CHECK(r.state == 0);
  r = relay_step(r, 0.75);
  CHECK(r.state == 1);
  r = relay_step(r, 0.5);
  CHECK(r.state == 1);
  r = relay_step(r, 0.25);
  CHECK(r.state == 0);
}

TEST_CASE("staircase moves") {
  CHECK(to_bits(staircase_up(from_bits("0101"))) == "0111");
  CHECK(to_bits(staircase_down(from_bits("0101"))) == "0100");
  CHECK_THROWS_AS(staircase_up(from_bits("11")), DomainError);
  CHECK_THROWS_AS(staircase_down(from_bits("000")), DomainError);
  CHECK_THROWS_AS(from_bits("012"), DomainError);
}

TEST_CASE("graph sizes are binomial") {
  for (int N = 1; N <= 8; ++N) {
    const auto g = build_graph(N);
    CHECK(validate_admissible(g).ok);
    CHECK(g.vertex_count() == (std::size_t{1} << N));
    for (int i = 0; i <= N; ++i) CHECK(g.level_sizes()[i] == binomial(N, i));
  }
  CHECK(build_graph(4).level_sizes() == std::vector<int>{1, 4, 6, 4, 1});
  const auto relay = build_graph(1);
  CHECK(relay.vertex_count() == 2);
}

TEST_CASE("bank and staircase encodings agree") {
  for (int N = 1; N <= 6; ++N) {
    const auto g = build_graph(N);
    for (const auto& level : g.levels)
      for (const auto& v : level) {
        const auto bank = bank_of_state(from_bits(v));
        CHECK(to_bits(state_of_bank(bank)) == v);
        CHECK(bank_output(bank) == staircase_output(from_bits(v)));
      }
  }
}

TEST_CASE("graph dynamics match an independent relay bank") {
  std::mt19937_64 rng(5);
  for (int N = 1; N <= 6; ++N) {
    const auto g = build_graph(N);
    const std::string zero(N, '0');
    for (int trial = 0; trial < 200; ++trial) {
      const auto levels = random_walk(rng, N, 0, 40);
      const auto path = run_input(g, zero, levels);
      OracleBank oracle(N);
      for (std::size_t k = 0; k < levels.size(); ++k) {
        oracle.step(levels[k]);
        REQUIRE(staircase_output(from_bits(path[k].vertex)) == oracle.output());
        const auto bank = bank_of_state(from_bits(path[k].vertex));
        for (int a = 1; a <= N; ++a)
          for (int b = a; b <= N; ++b) REQUIRE(bank.relays[bank.index(a, b)].state == oracle.on[a][b]);
      }
    }
  }
}

TEST_CASE("minor loops nested in the previous excursion close") {
  for (int N = 1; N <= 5; ++N) {
    const auto g = build_graph(N);
    for (const auto& level : g.levels)
      for (const auto& v : level) {
        const int i = g.level_of(v);
        // descend k >= m levels, then loop up m and back
        for (int k = 1; k <= i; ++k) {
          std::vector<int> in;
          for (int s = 0; s <= k; ++s) in.push_back(i - s);
          const std::string turn = run_input(g, v, in).back().vertex;
          for (int m = 1; m <= k; ++m) {
            std::vector<int> loop{i - k};
            for (int s = 1; s <= m; ++s) loop.push_back(i - k + s);
            for (int s = m - 1; s >= 0; --s) loop.push_back(i - k + s);
            CHECK(run_input(g, turn, loop).back().vertex == turn);
          }
        }
        for (int k = 1; k <= N - i; ++k) {
          std::vector<int> in;
          for (int s = 0; s <= k; ++s) in.push_back(i + s);
          const std::string turn = run_input(g, v, in).back().vertex;
          for (int m = 1; m <= k; ++m) {
            std::vector<int> loop{i + k};
            for (int s = 1; s <= m; ++s) loop.push_back(i + k - s);
            for (int s = m - 1; s >= 0; --s) loop.push_back(i + k - s);
            CHECK(run_input(g, turn, loop).back().vertex == turn);
          }
        }
      }
  }
}

TEST_CASE("a loop larger than the previous excursion may not close") {
  const auto g = build_graph(2);
  // 01 was reached by an up-move; up then down lands on 10
  CHECK(run_input(g, "01", {1, 2, 1}).back().vertex == "10");
}

TEST_CASE("bank steps require grid inputs") {
  auto bank = make_bank(3);
  CHECK(bank.relays.size() == 6);
  bank = bank_step(bank, 3.0);
  CHECK(bank_output(bank) == 6);
  CHECK(to_bits(state_of_bank(bank)) == "111");
}
