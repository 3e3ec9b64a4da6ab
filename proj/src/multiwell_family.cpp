#include <algorithm>
#include <cmath>
#include <cstdio>

#include "hystreal/errors.hpp"
#include "hystreal/geometry.hpp"
#include "hystreal/multiwell.hpp"

namespace hystreal {

namespace {

double harmonic(double a, double b) { return 2.0 * a * b / (a + b); }

void require_monotone(const HermiteKnot& a, const HermiteKnot& b, int sign) {
  if (!hermite_monotone(a, b, sign)) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "build_tilde: piece [%.6g, %.6g] is not strictly monotone", a.x, b.x);
    throw ConstructionError(buf);
  }
}

}  // namespace

Potential1D build_tilde(const Potential1D& f, const LemmaGeometry& geom) {
  const auto mins = f.minima();
  const int j = geom.j;
  if (j < 1 || j >= static_cast<int>(mins.size())) throw DomainError("build_tilde: j out of range");
  const double c = geom.center;
  const double xm = mins[j - 1], xp = mins[j];
  if (std::abs(c - xm - (xp - c)) > 1e-12 * std::max(1.0, std::abs(c)))
    throw DomainError("build_tilde: geometry center is not midway between the minima");

  // cap knots of the two minima, taken from f
  std::vector<HermiteKnot> cap_m, cap_p;
  for (const auto& k : f.knots()) {
    if (k.x > geom.r0_minus && k.x < c - 0.25 * geom.gap) cap_m.push_back(k);
    if (k.x > c + 0.25 * geom.gap && k.x < geom.r0_plus) cap_p.push_back(k);
  }
  if (cap_m.size() != 2 || cap_p.size() != 2)
    throw DomainError("build_tilde: the minima caps do not fit inside (r_-^0, r_+^0)");
  if (std::abs(cap_m[0].y - cap_p[1].y) > 1e-12 || std::abs(cap_m[0].d2y - cap_p[1].d2y) > 1e-12)
    throw DomainError("build_tilde: the two minima are not mirror images of each other");

  const auto jl = f.jet(geom.r_minus), jr = f.jet(geom.r_plus);
  if (!(jl.d1 < 0.0 && jr.d1 > 0.0)) throw DomainError("build_tilde: f is not monotone at r_±");
  const double A = std::min(jl.f, jr.f);
  const auto& P = geom.props;
  const double yD = P.level_big * A, yd = P.level_small * A, yM = P.level_max * A;
  if (!(yM > f.m_star())) throw DomainError("build_tilde: lowered maximum must stay above the minima");

  const HermiteKnot kl{geom.r_minus, jl.f, jl.d1, jl.d2};
  const HermiteKnot kr{geom.r_plus, jr.f, jr.d1, jr.d2};
  const double sec_in = (yD - yd) / (geom.rd_minus - geom.rD_minus);
  const double sec_out = std::min((jl.f - yD) / (geom.rD_minus - geom.r_minus),
                                  (jr.f - yD) / (geom.r_plus - geom.rD_plus));
  const double sec_well = (yd - cap_m[0].y) / (cap_m[0].x - geom.rd_minus);
  if (!(sec_in > 0 && sec_out > 0 && sec_well > 0))
    throw DomainError("build_tilde: levels at r^D, r^d are not decreasing towards the well");
  const double sD = harmonic(sec_in, sec_out), sd = harmonic(sec_in, sec_well);

  const double h = 0.5 * geom.gap;
  const double half = 0.16 * h;
  const double kappa = 4.0 * (yM - f.m_star()) / (h * h);

  std::vector<HermiteKnot> knots;
  for (const auto& k : f.knots())
    if (k.x < geom.r_minus - 1e-12) knots.push_back(k);
  knots.push_back(kl);
  knots.push_back({geom.rD_minus, yD, -sD, 0.0});
  knots.push_back({geom.rd_minus, yd, -sd, 0.0});
  knots.push_back(cap_m[0]);
  knots.push_back(cap_m[1]);
  knots.push_back({c - half, yM - 0.5 * kappa * half * half, kappa * half, -kappa});
  knots.push_back({c + half, yM - 0.5 * kappa * half * half, -kappa * half, -kappa});
  knots.push_back(cap_p[0]);
  knots.push_back(cap_p[1]);
  knots.push_back({geom.rd_plus, yd, sd, 0.0});
  knots.push_back({geom.rD_plus, yD, sD, 0.0});
  knots.push_back(kr);
  for (const auto& k : f.knots())
    if (k.x > geom.r_plus + 1e-12) knots.push_back(k);

  // monotone pieces between r_- and the first minimum cap, and their mirror images
  auto at = [&](double x) {
    return std::find_if(knots.begin(), knots.end(), [&](const HermiteKnot& k) { return k.x == x; });
  };
  for (auto it = at(geom.r_minus); it->x < cap_m[0].x; ++it) require_monotone(*it, *(it + 1), -1);
  require_monotone(cap_m[1], knots[at(c - half) - knots.begin()], +1);
  require_monotone(knots[at(c + half) - knots.begin()], cap_p[0], -1);
  for (auto it = at(cap_p[1].x); it->x < geom.r_plus; ++it) require_monotone(*it, *(it + 1), +1);

  std::vector<CriticalPoint> crit = f.critical_points();
  for (auto& cp : crit)
    if (std::abs(cp.x - c) < 1e-12) cp.value = yM;
  Potential1D out(std::move(knots), std::move(crit), f.m_star(), f.M_star());

  const double T = out.value(geom.rd_minus);
  const double floor = std::max(out.value(geom.r0_minus), yM) + geom.b_S * geom.b_S;
  if (!(T > floor)) throw ConstructionError("build_tilde: f~(r^d) is not above the inner lens bottom values");
  return out;
}

SaddleNodeFamily::SaddleNodeFamily(Potential1D before, Potential1D after, double u_a, double u_b, double u_sn)
    : before_(std::move(before)), after_(std::move(after)), u_a_(u_a), u_b_(u_b), u_sn_(u_sn) {
  if (!(u_a < u_sn && u_sn < u_b)) throw DomainError("build_sn_family: need u_a < u_sn < u_b");
  const auto maxs = before_.maxima();
  const auto mins = before_.minima();
  if (mins.size() < 2) throw DomainError("build_sn_family: nothing to eliminate");
  fold_lo_ = maxs.back();
  fold_hi_ = mins.back();

  // f' = (1-s) fb' + s fa' vanishes where s/(1-s) = r(x) = -fb'/fa'
  auto ratio = [&](double x) { return -before_.d1(x) / after_.d1(x); };
  auto ratio_slope = [&](double x) {
    const auto b = before_.jet(x), a = after_.jet(x);
    return -(b.d2 * a.d1 - b.d1 * a.d2) / (a.d1 * a.d1);
  };
  constexpr int kSamples = 4000;
  const double w = fold_hi_ - fold_lo_;
  int best = 1;
  std::vector<double> r(kSamples + 1);
  for (int i = 1; i < kSamples; ++i) {
    const double x = fold_lo_ + w * i / kSamples;
    if (!(after_.d1(x) > 0.0)) throw ConstructionError("build_sn_family: target potential is not increasing on the fold range");
    r[i] = ratio(x);
    if (r[i] > r[best]) best = i;
  }
  for (int i = 2; i < kSamples; ++i) {
    const bool rising = i <= best;
    if (rising ? !(r[i] > r[i - 1]) : !(r[i] < r[i - 1]))
      throw ConstructionError("build_sn_family: slope ratio is not unimodal, the fold would not be simple");
  }
  double lo = fold_lo_ + w * (best - 1) / kSamples, hi = fold_lo_ + w * (best + 1) / kSamples;
  for (int it = 0; it < 200 && hi - lo > 4e-16 * std::abs(hi); ++it) {
    const double m = 0.5 * (lo + hi);
    (ratio_slope(m) > 0.0 ? lo : hi) = m;
  }
  x_merge_ = 0.5 * (lo + hi);
  const double rmax = ratio(x_merge_);
  s_sn_ = rmax / (1.0 + rmax);
  slope_sn_ = harmonic(s_sn_ / (u_sn_ - u_a_), (1.0 - s_sn_) / (u_b_ - u_sn_));
}

namespace {

// cubic Hermite on [x0,x1] with values y0,y1 and slopes m0,m1
double hermite3(double x, double x0, double x1, double y0, double y1, double m0, double m1, double* dy) {
  const double h = x1 - x0, t = (x - x0) / h;
  const double t2 = t * t, t3 = t2 * t;
  if (dy) {
    *dy = (6 * t2 - 6 * t) / h * y0 + (3 * t2 - 4 * t + 1) * m0 + (6 * t - 6 * t2) / h * y1 + (3 * t2 - 2 * t) * m1;
  }
  return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * h * m0 + (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * h * m1;
}

}  // namespace

double SaddleNodeFamily::s_of_u(double u) const {
  if (u <= u_a_) return 0.0;
  if (u >= u_b_) return 1.0;
  if (u == u_sn_) return s_sn_;
  if (u < u_sn_) return hermite3(u, u_a_, u_sn_, 0.0, s_sn_, 0.0, slope_sn_, nullptr);
  return hermite3(u, u_sn_, u_b_, s_sn_, 1.0, slope_sn_, 0.0, nullptr);
}

double SaddleNodeFamily::ds_du(double u) const {
  if (u <= u_a_ || u >= u_b_) return 0.0;
  double d = 0.0;
  if (u < u_sn_)
    hermite3(u, u_a_, u_sn_, 0.0, s_sn_, 0.0, slope_sn_, &d);
  else
    hermite3(u, u_sn_, u_b_, s_sn_, 1.0, slope_sn_, 0.0, &d);
  return d;
}

Potential1D::Jet SaddleNodeFamily::jet(double x, double u) const {
  const double s = s_of_u(u);
  const auto b = before_.jet(x);
  if (s == 0.0) return b;
  const auto a = after_.jet(x);
  if (s == 1.0) return a;
  const double t = 1.0 - s;
  return {t * b.f + s * a.f, t * b.d1 + s * a.d1, t * b.d2 + s * a.d2,
          t * b.d3 + s * a.d3, t * b.d4 + s * a.d4, t * b.d5 + s * a.d5};
}

double SaddleNodeFamily::du(double x, double u) const { return ds_du(u) * (after_.value(x) - before_.value(x)); }

SaddleNodeFamily build_sn_family(const Potential1D& f_before, double u_a, double u_b, double u_sn,
                                 const ShapeConfig& shape) {
  return SaddleNodeFamily(f_before, drop_last_minimum(f_before, shape), u_a, u_b, u_sn);
}

std::vector<CriticalPoint> family_critical_points(const SaddleNodeFamily& fam, double u, double step) {
  return scan_critical_points([&](double x) { return fam.d1(x, u); }, [&](double x) { return fam.d2(x, u); },
                              [&](double x) { return fam.value(x, u); }, std::min(fam.window_lo(), 0.0) - 1.0,
                              std::max(fam.window_hi(), 0.0) + 1.0, step);
}

}  // namespace hystreal
