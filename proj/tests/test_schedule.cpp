#include <doctest.h>

#include <algorithm>

#include "hystreal/errors.hpp"
#include "hystreal/preisach.hpp"
#include "hystreal/schedule.hpp"

using namespace hystreal;

namespace {

// positions after applying adjacent swaps to the identity arrangement
Permutation apply_swaps(int n, const std::vector<int>& swaps) {
  std::vector<int> at(n);  // at[pos] = original index
  for (int k = 0; k < n; ++k) at[k] = k;
  for (int j : swaps) std::swap(at[j - 1], at[j]);
  Permutation p(n);
  for (int pos = 0; pos < n; ++pos) p[at[pos]] = pos + 1;
  return p;
}

}  // namespace

TEST_CASE("bubble decomposition composes to the permutation") {
  for (int n = 1; n <= 5; ++n) {
    Permutation p(n);
    for (int k = 0; k < n; ++k) p[k] = k + 1;
    do {
      const auto swaps = bubble_decomposition(p);
      CHECK(apply_swaps(n, swaps) == p);
      int inversions = 0;
      for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) inversions += p[a] > p[b];
      CHECK(static_cast<int>(swaps.size()) == inversions);
    } while (std::next_permutation(p.begin(), p.end()));
  }
  CHECK(!is_permutation({1, 1}));
  CHECK_THROWS_AS(bubble_decomposition({0, 1}), DomainError);
}

TEST_CASE("concatenation checks the junctions") {
  const auto f2 = separable(standard_multiwell(2));
  const auto f1 = separable(standard_multiwell(1));
  std::vector<DeformationSegment> ok{{std::make_shared<ConstantFamily>(f2, 0.0, 1.0), "a"},
                                     {linear_blend(f2, f1, 1.0, 2.0), "b"}};
  const auto s = concatenate(ok);
  CHECK(s.u_lo() == 0.0);
  CHECK(s.u_hi() == 2.0);
  CHECK(s.segment_index(1.0) == 0);
  CHECK(s.segment_index(1.5) == 1);

  std::vector<DeformationSegment> gap{{std::make_shared<ConstantFamily>(f2, 0.0, 1.0), "a"},
                                      {linear_blend(f2, f1, 1.1, 2.0), "b"}};
  CHECK_THROWS_AS(concatenate(gap), ConstructionError);
  std::vector<DeformationSegment> jump{{std::make_shared<ConstantFamily>(f2, 0.0, 1.0), "a"},
                                       {std::make_shared<ConstantFamily>(f1, 1.0, 2.0), "b"}};
  CHECK_THROWS_WITH_AS(concatenate(jump), doctest::Contains("junction 0"), ConstructionError);
  CHECK_THROWS_AS(concatenate({}), DomainError);
}

TEST_CASE("elementary transposition has four matching pieces") {
  const auto s = elementary_transposition(standard_multiwell(2), 1, 0.0, 1.0);
  REQUIRE(s.segments().size() == 4);
  CHECK(s.segments()[2].family->kind() == "rotation");
  const auto f = standard_multiwell(2);
  for (double x1 : {-1.0, 0.8, 1.5, 2.2, 4.0})
    for (double x2 : {0.0, 0.3, -1.1}) {
      const double v = f.value(x1) + x2 * x2;
      CHECK(s.value({x1, x2}, 0.0) == doctest::Approx(v).epsilon(1e-12));
      CHECK(s.value({x1, x2}, 1.0) == doctest::Approx(v).epsilon(1e-9));
    }
  CHECK_THROWS_AS(elementary_transposition(standard_multiwell(2), 2, 0.0, 1.0), DomainError);
}

TEST_CASE("identity permutation holds the field") {
  const auto s = permutation_schedule(3, {1, 2, 3}, 0.0, 1.0);
  REQUIRE(s.segments().size() == 1);
  CHECK(s.segments()[0].family->kind() == "constant");
  CHECK_THROWS_AS(permutation_schedule(3, {1, 2}, 0.0, 1.0), DomainError);
}

TEST_CASE("relay realization") {
  const auto r = realize(relay_graph());
  CHECK(r.transitions.size() == 2);
  CHECK(r.minima_at_grid == std::vector<int>{1, 1});
  CHECK(r.minima_at_mid == std::vector<int>{2});
  CHECK(r.u_mid == std::vector<double>{0.5});
  CHECK(r.schedule->u_lo() == 0.0);
  CHECK(r.schedule->u_hi() == 1.0);
  const auto* up = r.record_for("a", Direction::Up);
  REQUIRE(up != nullptr);
  CHECK(up->target == "b");
  CHECK((up->u_sn > 0.5 && up->u_sn < 1.0));
  const auto* down = r.record_for("b", Direction::Down);
  REQUIRE(down != nullptr);
  CHECK((down->u_sn > 0.0 && down->u_sn < 0.5));
  CHECK(r.grid_index(1.0) == 1);
  CHECK(r.grid_index(0.5) == -1);
}

TEST_CASE("Preisach realization bookkeeping") {
  const auto g = build_graph(2);
  const auto r = realize(g);
  CHECK(r.transitions.size() == g.edge_count());
  CHECK(r.transitions.size() == 6);
  CHECK(r.minima_at_mid == std::vector<int>{3, 3});
  for (int i = 0; i <= 2; ++i) {
    CHECK(r.X[i].size() == g.levels[i].size());
    for (const auto& [v, p] : r.X[i]) CHECK(p.x2 == 0.0);
  }
  for (const auto& t : r.transitions) {
    CHECK(t.u_a < t.u_sn);
    CHECK(t.u_sn < t.u_b);
    CHECK(t.source_xy.x1 == t.target_xy.x1 + 1.0);
  }
}

TEST_CASE("manifest round trip") {
  const auto g = build_graph(2);
  const auto r = realize(g);
  const auto text = realization_manifest(r);
  const auto back = load_manifest(text);
  CHECK(back.graph == g);
  CHECK(back.X == r.X);
  REQUIRE(back.transitions.size() == r.transitions.size());
  CHECK(back.transitions[3].u_sn == r.transitions[3].u_sn);
  CHECK(realization_manifest(back) == text);
  CHECK_THROWS_AS(load_manifest("{"), DomainError);
  CHECK_THROWS_AS(realize(AdmissibleGraph{}), DomainError);
}

TEST_CASE("build options round trip") {
  BuildOptions o;
  o.geometry.rho = 0.025;
  o.mollify.circle_order = 24;
  o.fast_path = true;
  const auto back = options_from_json(options_to_json(o));
  CHECK(back.geometry.rho == 0.025);
  CHECK(back.mollify.circle_order == 24);
  CHECK(back.fast_path);
  CHECK(back.mollify.recenter);
}

TEST_CASE("fast path realizes the same bookkeeping") {
  BuildOptions o;
  o.fast_path = true;
  const auto a = realize(build_graph(2), o);
  const auto b = realize(build_graph(2));
  CHECK(a.X == b.X);
  REQUIRE(a.transitions.size() == b.transitions.size());
  for (std::size_t k = 0; k < a.transitions.size(); ++k) CHECK(a.transitions[k].u_sn == b.transitions[k].u_sn);
}
