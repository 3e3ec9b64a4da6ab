#include <doctest.h>

#include <cmath>

#include "hystreal/errors.hpp"
#include "hystreal/geometry.hpp"
#include "hystreal/multiwell.hpp"

using namespace hystreal;

namespace {

int count_kind(const std::vector<CriticalPoint>& cps, CriticalKind k) {
  int n = 0;
  for (const auto& c : cps) n += c.kind == k;
  return n;
}

}  // namespace

TEST_CASE("default potential is the quadratic") {
  Potential1D q;
  CHECK(q.is_pure_quadratic());
  CHECK(q.value(3.0) == doctest::Approx(9.0));
  CHECK(q.d1(-2.0) == doctest::Approx(-4.0));
  CHECK(q.minima() == std::vector<double>{0.0});
}

TEST_CASE("standard layout has minima at 1..K and maxima between them") {
  for (int K = 1; K <= 8; ++K) {
    const auto f = standard_multiwell(K);
    const auto mins = f.minima();
    REQUIRE(mins.size() == static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) CHECK(mins[k] == doctest::Approx(k + 1.0).epsilon(1e-12));
    const auto maxs = f.maxima();
    REQUIRE(maxs.size() == static_cast<std::size_t>(K - 1));
    for (int k = 0; k + 1 < K; ++k) CHECK(maxs[k] == doctest::Approx(k + 1.5).epsilon(1e-12));
    const auto scanned = critical_points(f);
    CHECK(scanned.size() == static_cast<std::size_t>(2 * K - 1));
    for (double m : mins) CHECK(f.value(m) == doctest::Approx(f.m_star()));
    for (double m : maxs) CHECK(f.value(m) == doctest::Approx(f.M_star()));
  }
}

TEST_CASE("quadratic outside the window and C2 across knots") {
  const auto f = standard_multiwell(4);
  for (double x : {f.window_lo() - 0.5, f.window_lo() - 3.0, f.window_hi() + 0.1, f.window_hi() + 7.0}) {
    CHECK(f.value(x) == doctest::Approx(x * x).epsilon(1e-13));
    CHECK(f.d1(x) == doctest::Approx(2 * x).epsilon(1e-13));
  }
  for (const auto& k : f.knots()) {
    const auto l = f.jet(k.x - 1e-9), r = f.jet(k.x + 1e-9);
    CHECK(std::abs(l.f - r.f) < 1e-7);
    CHECK(std::abs(l.d1 - r.d1) < 1e-6);
    CHECK(std::abs(l.d2 - r.d2) < 1e-5);
  }
}

TEST_CASE("derivatives agree with finite differences") {
  const auto f = standard_multiwell(3);
  for (double x = f.window_lo() - 0.3; x < f.window_hi() + 0.3; x += 0.0731) {
    const double h = 1e-5;
    CHECK(f.d1(x) == doctest::Approx((f.value(x + h) - f.value(x - h)) / (2 * h)).epsilon(1e-6));
    CHECK(f.d2(x) == doctest::Approx((f.d1(x + h) - f.d1(x - h)) / (2 * h)).epsilon(1e-5));
  }
}

TEST_CASE("caps are even about each critical point") {
  const auto f = standard_multiwell(3);
  for (const auto& c : f.critical_points())
    for (double d : {0.01, 0.03, 0.05}) CHECK(f.value(c.x + d) == doctest::Approx(f.value(c.x - d)).epsilon(1e-13));
}

TEST_CASE("dropping the last minimum gives the smaller standard layout") {
  for (int K = 2; K <= 6; ++K) {
    const auto a = drop_last_minimum(standard_multiwell(K));
    const auto b = standard_multiwell(K - 1);
    for (double x = -8; x < K + 6; x += 0.0917) CHECK(a.value(x) == doctest::Approx(b.value(x)).epsilon(1e-12));
  }
  CHECK_THROWS(drop_last_minimum(standard_multiwell(1)));
}

TEST_CASE("arbitrary minima positions") {
  const std::vector<double> pos{-1.0, 0.5, 3.0};
  const auto f = build_multiwell(pos);
  const auto mins = f.minima();
  REQUIRE(mins.size() == 3);
  for (int k = 0; k < 3; ++k) CHECK(mins[k] == doctest::Approx(pos[k]));
  CHECK(critical_points(f).size() == 5);
  const std::vector<double> bad{1.0, 1.0};
  CHECK_THROWS_AS(build_multiwell(bad), DomainError);
}

TEST_CASE("lowered maximum keeps the critical points") {
  const auto f = standard_multiwell(3);
  for (int j = 1; j <= 2; ++j) {
    const auto geom = fit_geometry(f, j);
    CHECK(geometry_problem(geom).empty());
    const auto t = build_tilde(f, geom);
    const auto a = critical_points(f), b = critical_points(t);
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
      CHECK(a[k].x == doctest::Approx(b[k].x).epsilon(1e-9));
      CHECK(a[k].kind == b[k].kind);
    }
    CHECK(t.value(geom.center) < f.value(geom.center));
    for (double x : {geom.r_minus - 0.2, geom.r_plus + 0.2, -3.0, 9.0}) CHECK(t.value(x) == doctest::Approx(f.value(x)));
    for (double d = 0; d < geom.R_L; d += 0.01)
      CHECK(t.value(geom.center + d) == doctest::Approx(t.value(geom.center - d)).epsilon(1e-12));
  }
}

TEST_CASE("saddle-node family removes the last minimum through a fold") {
  for (int N = 2; N <= 5; ++N) {
    const auto fam = build_sn_family(standard_multiwell(N), 0.0, 1.0, 0.5);
    const double u = fam.u_sn(), x = fam.x_merge();
    const auto j = fam.jet(x, u);
    CHECK(std::abs(j.d1) < 1e-6);
    CHECK(std::abs(j.d2) < 1e-6);
    const auto before = family_critical_points(fam, u - 1e-3);
    const auto after = family_critical_points(fam, u + 1e-3);
    CHECK(before.size() == static_cast<std::size_t>(2 * N - 1));
    CHECK(after.size() == static_cast<std::size_t>(2 * N - 3));
    CHECK(count_kind(before, CriticalKind::Minimum) == N);
    CHECK(count_kind(after, CriticalKind::Minimum) == N - 1);
    CHECK(fam.s_of_u(0.0) == 0.0);
    CHECK(fam.s_of_u(1.0) == doctest::Approx(1.0));
    for (double x1 = -3; x1 < N + 3; x1 += 0.37) {
      CHECK(fam.value(x1, 0.0) == doctest::Approx(standard_multiwell(N).value(x1)));
      CHECK(fam.value(x1, 1.0) == doctest::Approx(standard_multiwell(N - 1).value(x1)));
    }
  }
}

TEST_CASE("saddle-node family u-derivative") {
  const auto fam = build_sn_family(standard_multiwell(3), 2.0, 3.0, 2.4);
  for (double u : {2.1, 2.39, 2.41, 2.8})
    for (double x : {2.5, 2.9, 3.2}) {
      const double h = 1e-6;
      CHECK(fam.du(x, u) == doctest::Approx((fam.value(x, u + h) - fam.value(x, u - h)) / (2 * h)).epsilon(1e-5));
    }
  CHECK_THROWS_AS(build_sn_family(standard_multiwell(3), 0.0, 1.0, 1.5), DomainError);
}

TEST_CASE("sample export") {
  const auto csv = sample_csv(standard_multiwell(2), 0.0, 3.0, 4);
  CHECK(csv.rfind("x,f,df\n", 0) == 0);
}
