#include <doctest.h>

#include <algorithm>
#include <random>

#include "hystreal/preisach.hpp"
#include "hystreal/verify.hpp"

using namespace hystreal;

namespace {

const Realization& preisach2() {
  static const Realization r = realize(build_graph(2));
  return r;
}

bool edges_pass(const VerificationReport& rep) {
  return std::all_of(rep.edges.begin(), rep.edges.end(), [](const auto& e) { return e.pass; });
}

}  // namespace

TEST_CASE("relay realization passes every check") {
  const auto r = realize(relay_graph());
  const auto rep = check_realization(r, relay_graph());
  INFO(rep.summary());
  CHECK(rep.pass());
  REQUIRE(rep.edges.size() == 2);
  CHECK(rep.edges[0].source == "a");
  CHECK(rep.edges[1].source == "b");
  for (const char* name : {"far-field identity", "radial growth", "minima match X", "minima are critical",
                           "minima are nondegenerate", "no off-axis critical points", "transition records",
                           "reversible excursions"}) {
    const auto* c = rep.find(name);
    REQUIRE_MESSAGE(c != nullptr, name);
    CHECK_MESSAGE(c->pass, name);
  }
}

TEST_CASE("Preisach N=2 realization passes") {
  const auto rep = check_realization(preisach2(), build_graph(2));
  INFO(rep.summary());
  CHECK(rep.pass());
  CHECK(rep.edges.size() == 6);
}

TEST_CASE("a realization of another graph is rejected") {
  const auto rep = check_realization(preisach2(), relay_graph());
  CHECK(!rep.pass());
  REQUIRE(rep.find("graph matches realization") != nullptr);
}

TEST_CASE("swapped vertex images fail the edge checks") {
  auto r = preisach2();
  std::swap(r.X[1].at("01"), r.X[1].at("10"));
  const auto rep = check_realization(r, r.graph);
  CHECK(!rep.pass());
  CHECK(!edges_pass(rep));
}

TEST_CASE("a corrupted transition record is caught") {
  auto r = preisach2();
  auto it = std::find_if(r.transitions.begin(), r.transitions.end(),
                         [](const auto& t) { return t.source == "00"; });
  REQUIRE(it != r.transitions.end());
  it->target = it->target == "01" ? "10" : "01";
  const auto rep = check_realization(r, r.graph);
  const auto* c = rep.find("transition records");
  REQUIRE(c != nullptr);
  CHECK(!c->pass);
  CHECK(c->measured == 1);
}

TEST_CASE("transposition suite") {
  Lemma1Config cfg;
  cfg.u_points = 60;
  cfg.grid_spacing = 0.05;
  SUBCASE("identity") {
    const auto s = permutation_schedule(2, {1, 2}, 0.0, 1.0);
    const auto rep = check_lemma1(s, {1, 2}, cfg);
    INFO(rep.summary());
    CHECK(rep.pass());
  }
  SUBCASE("swap") {
    const auto s = permutation_schedule(2, {2, 1}, 0.0, 1.0);
    const auto rep = check_lemma1(s, {2, 1}, cfg);
    INFO(rep.summary());
    CHECK(rep.pass());
  }
  SUBCASE("wrong permutation claimed") {
    const auto s = permutation_schedule(2, {2, 1}, 0.0, 1.0);
    const auto rep = check_lemma1(s, {1, 2}, cfg);
    const auto* c = rep.find("terminal permutation");
    REQUIRE(c != nullptr);
    CHECK(!c->pass);
  }
  SUBCASE("not a permutation") {
    const auto s = permutation_schedule(2, {2, 1}, 0.0, 1.0);
    CHECK(!check_lemma1(s, {1, 1}, cfg).pass());
  }
}

TEST_CASE("three-cycle") {
  Lemma1Config cfg;
  cfg.grid_spacing = 0.05;
  const auto s = permutation_schedule(3, {2, 3, 1}, 0.0, 1.0);
  const auto rep = check_lemma1(s, {2, 3, 1}, cfg);
  INFO(rep.summary());
  CHECK(rep.pass());
}

TEST_CASE("relay-bank oracle") {
  const auto rep = oracle_compare_preisach(1, 50, 20, 3);
  CHECK(rep.pass());
  CHECK(oracle_compare_preisach(3, 50, 30, 4).pass());
  CHECK_THROWS(oracle_compare_preisach(7, 1, 1, 1));
}

TEST_CASE("random admissible graphs") {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 200; ++k) {
    const auto g = random_admissible_graph(rng, 3, 4);
    CHECK(validate_admissible(g).ok);
    CHECK(g.top_level() >= 1);
    CHECK(g.top_level() <= 3);
    for (const auto& l : g.levels) CHECK((l.size() >= 1 && l.size() <= 4));
  }
}

TEST_CASE("axis scan finds the wells") {
  const auto& r = preisach2();
  const auto m = axis_minima(*r.schedule, r.u_grid[1], -10, 10, 2.5e-3);
  CHECK(m.size() == 2);
}

TEST_CASE("reports are reproducible") {
  const auto r = realize(relay_graph());
  const auto a = check_realization(r, relay_graph());
  const auto b = check_realization(r, relay_graph());
  CHECK(a.to_json() == b.to_json());
  CHECK(a.summary() == b.summary());
  CHECK(a.to_json().find("seconds") == std::string::npos);
}
