#include <doctest.h>

#include <random>

#include "hystreal/errors.hpp"
#include "hystreal/graph.hpp"
#include "hystreal/verify.hpp"

using namespace hystreal;

namespace {

bool has_axiom(const ValidationReport& r, const std::string& axiom) {
  for (const auto& v : r.violations)
    if (v.axiom == axiom) return true;
  return false;
}

AdmissibleGraph three_level() {
  AdmissibleGraph g;
  g.levels = {{"p"}, {"q", "r"}, {"s"}};
  g.up = {{"p", "q"}, {"q", "s"}, {"r", "s"}};
  g.down = {{"q", "p"}, {"r", "p"}, {"s", "r"}};
  g.input_values = {0, 1, 2};
  return g;
}

}  // namespace

TEST_CASE("relay graph is admissible") {
  const auto g = relay_graph();
  CHECK(validate_admissible(g).ok);
  CHECK(g.level_sizes() == std::vector<int>{1, 1});
  CHECK(g.edge_count() == 2);
  CHECK(transition(g, "a", Direction::Up) == "b");
  CHECK(transition(g, "b", Direction::Down) == "a");
}

TEST_CASE("boundary transitions are domain errors") {
  const auto g = relay_graph();
  CHECK_THROWS_AS(transition(g, "a", Direction::Down), DomainError);
  CHECK_THROWS_AS(transition(g, "b", Direction::Up), DomainError);
  CHECK_THROWS_AS(transition(g, "zz", Direction::Up), DomainError);
}

TEST_CASE("violations name their axiom") {
  auto g = three_level();
  REQUIRE(validate_admissible(g).ok);

  auto dangling = g;
  dangling.up["p"] = "nowhere";
  CHECK(!validate_admissible(dangling).ok);

  auto skip = g;
  skip.up["p"] = "s";
  CHECK(has_axiom(validate_admissible(skip), "up edge"));

  auto boundary = g;
  boundary.up["s"] = "p";
  CHECK(has_axiom(validate_admissible(boundary), "up edge"));

  auto missing = g;
  missing.down.erase("r");
  CHECK(has_axiom(validate_admissible(missing), "exactly two edges"));

  auto twice = g;
  twice.levels[2].push_back("q");
  CHECK(has_axiom(validate_admissible(twice), "disjoint levels"));

  auto empty = g;
  empty.levels.push_back({});
  CHECK(has_axiom(validate_admissible(empty), "non-empty levels"));

  auto inputs = g;
  inputs.input_values = {0, 2, 1};
  CHECK(has_axiom(validate_admissible(inputs), "input values"));

  AdmissibleGraph single;
  single.levels = {{"x"}};
  CHECK(has_axiom(validate_admissible(single), "levels"));
}

TEST_CASE("run_input follows the edges") {
  const auto g = three_level();
  const auto path = run_input(g, "p", {0, 1, 2, 1, 0, 0, 1});
  std::vector<std::string> names;
  for (const auto& s : path) names.push_back(s.vertex);
  CHECK(names == std::vector<std::string>{"p", "q", "s", "r", "p", "p", "q"});
  CHECK_THROWS_AS(run_input(g, "p", {0, 2}), DomainError);
  CHECK_THROWS_AS(run_input(g, "q", {0}), DomainError);

  const auto relay = run_input(relay_graph(), "a", {0, 1, 0});
  CHECK(relay.back().vertex == "a");
  CHECK(relay[1].vertex == "b");
}

TEST_CASE("input values map to levels") {
  auto g = three_level();
  g.input_values = {-1.0, 0.5, 4.0};
  CHECK(level_of_input(g, 0.5) == 1);
  CHECK(level_of_input(g, 0.6) == -1);
  const auto path = run_input_values(g, "p", {-1.0, 0.5, 4.0});
  CHECK(path.back().vertex == "s");
}

TEST_CASE("json round trip and strictness") {
  const auto g = three_level();
  CHECK(parse_graph_json(graph_to_json(g)) == g);
  CHECK_THROWS_AS(parse_graph_json("{\"levels\": [[\"a\"],[\"b\"]], \"colour\": 1}"), DomainError);
  CHECK_THROWS_AS(parse_graph_json("not json"), DomainError);
  const auto d = parse_graph_json(R"({"levels": [["a"],["b"]], "up": {"a": "b"}, "down": {"b": "a"}})");
  CHECK(d.input_values == std::vector<double>{0.0, 1.0});
}

TEST_CASE("unit-step filling") {
  CHECK(fill_unit_steps({0, 3, 1}) == std::vector<int>{0, 1, 2, 3, 2, 1});
  CHECK(fill_unit_steps({2, 2}) == std::vector<int>{2, 2});
  CHECK(fill_unit_steps({}).empty());
}

TEST_CASE("damped oscillation settles into a periodic pattern") {
  const int period = 8;
  const auto seq = damped_oscillation(4, 2.0, 0.4, period, 12);
  for (std::size_t k = 1; k < seq.size(); ++k) CHECK(std::abs(seq[k] - seq[k - 1]) <= 1);
  for (int v : seq) CHECK((v >= 0 && v <= 4));
  const auto a = damped_oscillation(4, 2.0, 0.4, period, 10).size();
  const auto b = damped_oscillation(4, 2.0, 0.4, period, 11).size();
  const auto tail = std::vector<int>(seq.begin() + b, seq.end());
  const auto prev = std::vector<int>(seq.begin() + a, seq.begin() + b);
  CHECK(tail == prev);
  CHECK_THROWS_AS(damped_oscillation(0, 2.0, 0.4, 8), DomainError);
}

TEST_CASE("random graphs are admissible and reproducible") {
  std::mt19937_64 rng(99), again(99);
  for (int k = 0; k < 200; ++k) {
    const auto g = random_admissible_graph(rng);
    CHECK(validate_admissible(g).ok);
    CHECK(g.top_level() <= 3);
    for (int s : g.level_sizes()) CHECK((s >= 1 && s <= 4));
    CHECK(random_admissible_graph(again) == g);
  }
}
