#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "hystreal/errors.hpp"
#include "hystreal/field.hpp"
#include "hystreal/schedule.hpp"

using namespace hystreal;

namespace {

// semicircle-weighted average by the midpoint rule in t = rho sin(theta)
double moment_oracle(const Potential1D& f, double x, double rho) {
  const int n = 40000;
  double s = 0;
  for (int k = 0; k < n; ++k) {
    const double th = -std::numbers::pi / 2 + std::numbers::pi * (k + 0.5) / n;
    s += f.value(x + rho * std::sin(th)) * std::cos(th) * std::cos(th);
  }
  return s * (std::numbers::pi / n) * 2 / std::numbers::pi;
}

struct Smoothed {
  ScheduleBuilder builder;
  std::shared_ptr<const MollifiedField> m;
  LemmaGeometry geom;
  Smoothed() {
    m = builder.smoothed(3, 1);
    geom = m->phi()->geometry();
  }
};

Smoothed& smoothed() {
  static Smoothed s;
  return s;
}

}  // namespace

TEST_CASE("vector helpers") {
  const Vec2 r = rotate({1.0, 0.0}, std::numbers::pi / 2);
  CHECK(r.x1 == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(r.x2 == doctest::Approx(1.0));
  CHECK((Vec2{3, 4}).norm() == doctest::Approx(5.0));
}

TEST_CASE("separable field") {
  const auto f = separable(standard_multiwell(2));
  CHECK(f->value({1.0, 2.0}) == doctest::Approx(4.0));
  const Vec2 g = f->gradient({1.3, -0.5});
  const Vec2 fd = fd_gradient(*f, {1.3, -0.5});
  CHECK(g.x1 == doctest::Approx(fd.x1).epsilon(1e-6));
  CHECK(g.x2 == doctest::Approx(-1.0));
  CHECK(f->separable_profile() != nullptr);
}

TEST_CASE("semicircle moments against a direct quadrature") {
  const auto f = standard_multiwell(3);
  for (double x : {0.7, 1.0, 1.26, 1.5, 2.03, 3.4, 5.0})
    for (double rho : {0.03, 0.2}) CHECK(std::abs(disc_moment(f, x, rho) - moment_oracle(f, x, rho)) < 1e-9);
  const Potential1D q;
  CHECK(disc_moment(q, 2.0, 0.4) == doctest::Approx(4.0 + 0.04));
  const double h = 1e-5;
  CHECK(disc_moment_d1(f, 1.26, 0.03) ==
        doctest::Approx((disc_moment(f, 1.26 + h, 0.03) - disc_moment(f, 1.26 - h, 0.03)) / (2 * h)).epsilon(1e-6));
}

TEST_CASE("disc average of the paraboloid") {
  const auto bowl = std::make_shared<LambdaField>([](Vec2 x) { return x.dot(x); },
                                                  [](Vec2 x) { return x * 2.0; });
  const double rho = 0.1;
  const auto m = mollify(bowl, rho);
  for (Vec2 p : {Vec2{0, 0}, Vec2{1, -2}, Vec2{0.3, 0.7}}) {
    CHECK(m->value(p) == doctest::Approx(p.dot(p) + rho * rho / 2).epsilon(1e-12));
    CHECK(m->gradient(p).x1 == doctest::Approx(2 * p.x1).epsilon(1e-10));
  }
  MollifyOptions o;
  o.recenter = true;
  CHECK(mollify(bowl, rho, o)->value({1, 1}) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("Phi audits and structure") {
  auto& s = smoothed();
  const auto& phi = *s.m->phi();
  CHECK(audit_phi_monotone_segments(phi).ok);
  CHECK(audit_phi_vertical_growth(phi).ok);
  const auto& g = s.geom;
  CHECK(phi.excess({g.center, 0.0}) == 0.0);
  CHECK(phi.excess({g.center + 3.0, 0.4}) == 0.0);
  CHECK(phi.value({g.center + 0.1, 0.3}) == doctest::Approx(phi.value({g.center + 0.1, -0.3})));
  // level lines are circles on the annulus
  CHECK(circle_variation(phi, {g.center, 0.0}, g.R) < 1e-12);
}

TEST_CASE("smoothed field: axis, sign, evenness") {
  auto& s = smoothed();
  const auto& m = *s.m;
  const double c = s.geom.center;
  double axis = 0;
  for (int k = 0; k < 100; ++k) {
    const double x1 = c - 1.2 + 2.4 * (k + 0.5) / 100;
    axis = std::max(axis, std::abs(m.gradient({x1, 0.0}).x2));
  }
  CHECK(axis < 1e-8);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d1(c - 1.5, c + 1.5), d2(0.005, 2.0);
  int positive = 0;
  for (int k = 0; k < 500; ++k) positive += m.gradient({d1(rng), d2(rng)}).x2 > 0;
  CHECK(positive == 500);

  for (Vec2 p : {Vec2{c + 0.05, 0.2}, Vec2{c - 0.7, 0.04}, Vec2{c + 0.33, 0.11}})
    CHECK(m.value(p) == doctest::Approx(m.value({p.x1, -p.x2})).epsilon(1e-13));
}

TEST_CASE("smoothed field: gradients match finite differences") {
  auto& s = smoothed();
  const auto& m = *s.m;
  const double c = s.geom.center;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> d1(c - 1.0, c + 1.0), d2(-0.9, 0.9);
  double worst = 0;
  int used = 0;
  while (used < 60) {
    const Vec2 p{d1(rng), d2(rng)};
    const Vec2 g = m.gradient(p);
    if (g.norm() < 0.05) continue;
    const Vec2 fd = fd_gradient(m, p, 1e-5);
    worst = std::max(worst, (g - fd).norm() / g.norm());
    ++used;
  }
  CHECK(worst < 1e-4);
}

TEST_CASE("smoothed field keeps the critical points") {
  auto& s = smoothed();
  for (double x1 : {1.0, 1.5, 2.0, 2.5, 3.0}) CHECK(s.m->gradient({x1, 0.0}).norm() < 1e-9);
  CHECK(circle_variation(*s.m, {s.geom.center, 0.0}, s.geom.R) < 1e-9);
}

TEST_CASE("blend, rotation and reversal") {
  const auto f0 = separable(standard_multiwell(2));
  const auto f1 = separable(Potential1D());
  const auto b = linear_blend(f0, f1, 1.0, 2.0);
  const Vec2 p{1.3, 0.2};
  CHECK(b->value(p, 1.0) == f0->value(p));
  CHECK(b->value(p, 2.0) == f1->value(p));
  CHECK(b->value(p, 1.5) == doctest::Approx(0.5 * (f0->value(p) + f1->value(p))));
  CHECK(b->is_separable());
  const double h = 1e-6;
  CHECK(b->ramp_derivative(1.3) == doctest::Approx((b->ramp(1.3 + h) - b->ramp(1.3 - h)) / (2 * h)).epsilon(1e-6));

  auto& s = smoothed();
  const Vec2 c{s.geom.center, 0.0};
  const RotationFamily rot(s.m, c, s.geom.R, 0.0, 1.0);
  const Vec2 q = c + Vec2{0.2, 0.05};
  CHECK(rot.value(q, 0.0) == s.m->value(q));
  CHECK(rot.value(q, 1.0) == doctest::Approx(s.m->value(c - Vec2{0.2, 0.05})).epsilon(1e-12));
  const Vec2 far = c + Vec2{s.geom.R + 0.1, 0.0};
  CHECK(rot.value(far, 0.5) == s.m->value(far));
  CHECK(rot.alpha(1.0) == doctest::Approx(std::numbers::pi));
  const Vec2 gr = rot.gradient(q, 0.4);
  const LambdaField frozen([&](Vec2 x) { return rot.value(x, 0.4); });
  const Vec2 fd = fd_gradient(frozen, q, 1e-5);
  CHECK((gr - fd).norm() < 1e-5);

  const auto base = separable(standard_multiwell(2));
  CHECK_THROWS_AS(rotation_family(base, s.geom, 0.0, 1.0), DomainError);

  const auto fam = std::make_shared<LinearBlend>(f0, f1, 0.0, 1.0);
  const ReversedFamily rev(fam, 3.0);
  CHECK(rev.u_lo() == 2.0);
  CHECK(rev.u_hi() == 3.0);
  CHECK(rev.value(p, 2.0) == fam->value(p, 1.0));
}

TEST_CASE("grid export") {
  const auto f = separable(standard_multiwell(2));
  const auto one = field_grid_csv(*f, 1.0, 2.0, 1, 0.0, 1.0, 1);
  REQUIRE(one.rfind("x1,x2,V\n1,0,", 0) == 0);
  CHECK(std::abs(std::stod(one.substr(13))) < 1e-15);
  const auto grid = field_grid_csv(*f, 0.0, 3.0, 4, -1.0, 1.0, 3);
  CHECK(std::count(grid.begin(), grid.end(), '\n') == 13);
  CHECK_THROWS_AS(field_grid_csv(*f, 0.0, 1.0, 0, 0.0, 1.0, 2), DomainError);
}
