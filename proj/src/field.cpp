#include "hystreal/field.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "hystreal/errors.hpp"
#include "quadrature.hpp"

namespace hystreal {

using detail::gauss_rule;

std::string to_string(Smoothness s) {
  switch (s) {
    case Smoothness::C0: return "C0";
    case Smoothness::PiecewiseC1: return "piecewise C1";
    case Smoothness::C1: return "C1";
  }
  return "?";
}

FieldPtr separable(const Potential1D& f) { return std::make_shared<SeparableField>(f); }

Vec2 fd_gradient(const ScalarField2D& f, Vec2 x, double h) {
  const double h1 = h * std::max(1.0, std::abs(x.x1)), h2 = h * std::max(1.0, std::abs(x.x2));
  return {(f.value({x.x1 + h1, x.x2}) - f.value({x.x1 - h1, x.x2})) / (2 * h1),
          (f.value({x.x1, x.x2 + h2}) - f.value({x.x1, x.x2 - h2})) / (2 * h2)};
}

Vec2 LambdaField::gradient(Vec2 x) const { return g_ ? g_(x) : fd_gradient(*this, x); }

// ---------------------------------------------------------------------------------------
// Phi

PhiField::PhiField(Potential1D f_tilde, LemmaGeometry geom) : f_(std::move(f_tilde)), g_(geom) {
  if (auto p = geometry_problem(g_); !p.empty()) throw DomainError("PhiField: " + p);
  const double c = g_.center;
  top_small_ = f_.value(c + g_.R_S);
  bottom_large_ = f_.value(c + g_.R_L);
  kinks_.axis = true;
  kinks_.circles = {{c, 0.0, g_.R_S}, {c, 0.0, g_.R_L}};
  kinks_.ellipses = {{c, 0.0, g_.a_S, g_.b_S}, {c, 0.0, g_.a_L, g_.b_L}};
  for (double d : {g_.a_S, g_.R_S, g_.R_L, g_.a_L}) {
    kinks_.verticals.push_back(c - d);
    kinks_.verticals.push_back(c + d);
  }
  for (double k : f_.breakpoints()) {
    const double d = std::abs(k - c);
    if (d < g_.a_L + g_.rho) kinks_.verticals.push_back(k);
    if (d > g_.R_S && d < g_.R_L) kinks_.circles.push_back({c, 0.0, d});
  }
  std::sort(kinks_.verticals.begin(), kinks_.verticals.end());
  kinks_.verticals.erase(std::unique(kinks_.verticals.begin(), kinks_.verticals.end()), kinks_.verticals.end());
}

double PhiField::excess(Vec2 x) const {
  const double dx = x.x1 - g_.center, y = std::abs(x.x2);
  if (y == 0.0) return 0.0;
  const double pL = dx / g_.a_L, qL = y / g_.b_L;
  if (pL * pL + qL * qL > 1.0) return 0.0;
  const double pS = dx / g_.a_S, qS = y / g_.b_S;
  if (pS * pS + qS * qS <= 1.0) return 0.0;
  const double y2 = y * y;
  const double fx = f_.value(x.x1);
  const double base = fx + y2;
  const double r = std::hypot(dx, y);
  double phi;
  if (r >= g_.R_S && r <= g_.R_L) {
    phi = f_.value(g_.center + r);
  } else if (r < g_.R_S) {
    const double xe2 = g_.R_S * g_.R_S - dx * dx;
    double xf2 = 0.0, bot = fx;
    if (std::abs(dx) < g_.a_S) {
      xf2 = g_.b_S * g_.b_S * (1.0 - pS * pS);
      bot = fx + xf2;
    }
    phi = ((xe2 - y2) * bot + (y2 - xf2) * top_small_) / (xe2 - xf2);
  } else {
    const double xe2 = g_.b_L * g_.b_L * (1.0 - pL * pL);
    if (std::abs(dx) >= g_.R_L) return 0.0;
    const double xf2 = g_.R_L * g_.R_L - dx * dx;
    const double top = fx + xe2;
    phi = ((xe2 - y2) * bottom_large_ + (y2 - xf2) * top) / (xe2 - xf2);
  }
  return phi - base;
}

namespace {

// max (sign=+1) or min (sign=-1) of the ellipse function over the circle, with a rigorous
// bound on the deviation between samples
double ellipse_extreme_on_circle(double dx, double y, double a, double b, double rho, int sign) {
  constexpr int n = 64;
  double ext = sign > 0 ? -1e300 : 1e300;
  for (int k = 0; k < n; ++k) {
    const double t = 2.0 * M_PI * k / n;
    const double p = (dx + rho * std::cos(t)) / a, q = (y + rho * std::sin(t)) / b;
    const double v = p * p + q * q;
    ext = sign > 0 ? std::max(ext, v) : std::min(ext, v);
  }
  const double curv = 2.0 * rho * (std::abs(dx) / (a * a) + std::abs(y) / (b * b)) +
                      2.0 * rho * rho * std::abs(1.0 / (a * a) - 1.0 / (b * b));
  const double step = 2.0 * M_PI / n;
  return ext + sign * curv * step * step / 8.0;
}

}  // namespace

bool PhiField::excess_vanishes_on_disc(Vec2 x, double rho) const {
  const double dx = x.x1 - g_.center, y = x.x2;
  if (std::abs(dx) > g_.a_L + rho || std::abs(y) > g_.b_L + rho) return true;
  if (ellipse_extreme_on_circle(dx, y, g_.a_S, g_.b_S, rho, +1) < 1.0) return true;
  const double pL = dx / g_.a_L, qL = y / g_.b_L;
  if (pL * pL + qL * qL > 1.0 && ellipse_extreme_on_circle(dx, y, g_.a_L, g_.b_L, rho, -1) > 1.0) return true;
  return false;
}

namespace {

PhiAudit fail(PhiAudit a, const char* what, double x1, double x2, double margin) {
  char buf[200];
  std::snprintf(buf, sizeof buf, "%s at (%.9g, %.9g), margin %.3g", what, x1, x2, margin);
  a.ok = false;
  a.failure = buf;
  a.worst_margin = std::min(a.worst_margin, margin);
  return a;
}

}  // namespace

PhiAudit audit_phi_monotone_segments(const PhiField& phi, int samples) {
  const auto& g = phi.geometry();
  PhiAudit out;
  out.worst_margin = 1e300;
  for (double h : {0.0, 0.5 * g.rho, g.rho}) {
    // left segment decreasing, right segment increasing
    const double lo[2] = {g.r_minus - g.rho, g.r0_plus - g.rho};
    const double hi[2] = {g.r0_minus + g.rho, g.r_plus + g.rho};
    for (int side = 0; side < 2; ++side) {
      double prev = phi.value({lo[side], h});
      for (int k = 1; k <= samples; ++k) {
        const double x1 = lo[side] + (hi[side] - lo[side]) * k / samples;
        const double v = phi.value({x1, h});
        const double margin = side == 0 ? prev - v : v - prev;
        out.worst_margin = std::min(out.worst_margin, margin);
        if (!(margin > 0.0))
          return fail(out, side == 0 ? "Phi not decreasing along J_h" : "Phi not increasing along mirrored J_h", x1, h,
                      margin);
        prev = v;
      }
    }
  }
  return out;
}

PhiAudit audit_phi_vertical_growth(const PhiField& phi, int columns, int rows) {
  const auto& g = phi.geometry();
  PhiAudit out;
  out.worst_margin = 1e300;
  const double x_lo = g.center - g.a_L - g.rho, x_hi = g.center + g.a_L + g.rho;
  const int rows_near = (2 * rows) / 3, rows_far = rows - rows_near;
  std::vector<double> ys;
  for (int k = 0; k <= rows_near; ++k) ys.push_back((g.R_L + g.rho) * k / rows_near);
  for (int k = 1; k <= rows_far; ++k) ys.push_back(g.R_L + g.rho + (g.b_L - g.R_L) * k / rows_far);
  for (int i = 0; i < columns; ++i) {
    const double x1 = x_lo + (x_hi - x_lo) * i / (columns - 1);
    double prev = phi.value({x1, 0.0});
    for (std::size_t k = 1; k < ys.size(); ++k) {
      const double v = phi.value({x1, ys[k]});
      const double margin = (v - prev) / (ys[k] - ys[k - 1]);
      out.worst_margin = std::min(out.worst_margin, margin);
      if (!(v > prev)) return fail(out, "Phi not increasing in x2", x1, ys[k], margin);
      prev = v;
    }
  }
  return out;
}

std::shared_ptr<const PhiField> build_phi(const Potential1D& f_tilde, const LemmaGeometry& geom) {
  auto phi = std::make_shared<const PhiField>(f_tilde, geom);
  if (auto a = audit_phi_monotone_segments(*phi); !a.ok) throw ConstructionError("build_phi: " + a.failure);
  if (auto a = audit_phi_vertical_growth(*phi); !a.ok) throw ConstructionError("build_phi: " + a.failure);
  return phi;
}

// ---------------------------------------------------------------------------------------
// Disc moments of a 1D profile

namespace {

// the piece containing [lo, hi] entirely, -2 for none; -1 means the quadratic tail
int single_piece(const Potential1D& f, double lo, double hi) {
  if (f.is_pure_quadratic() || hi < f.window_lo() || lo > f.window_hi()) return -1;
  const int a = f.piece_index(lo), b = f.piece_index(hi);
  if (a >= 0 && a == b) return a;
  return -2;
}

template <class Get>
double semicircle_average(const Potential1D& f, double x, double rho, Get get) {
  // (2/pi) int_{-pi/2}^{pi/2} g(x + rho sin phi) cos^2 phi dphi, split at the knots
  std::vector<double> cuts{-0.5 * M_PI};
  for (double k : f.breakpoints()) {
    const double s = (k - x) / rho;
    if (s > -1.0 && s < 1.0) cuts.push_back(std::asin(s));
  }
  cuts.push_back(0.5 * M_PI);
  const auto& rule = gauss_rule(16);
  double sum = 0.0;
  for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
    const double a = cuts[p], w = cuts[p + 1] - cuts[p];
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double phi = a + w * rule.nodes[i];
      const double c = std::cos(phi);
      sum += rule.weights[i] * w * c * c * get(f.jet(x + rho * std::sin(phi)));
    }
  }
  return sum * 2.0 / M_PI;
}

}  // namespace

double disc_moment(const Potential1D& f, double x, double rho) {
  if (single_piece(f, x - rho, x + rho) != -2) {
    const auto j = f.jet(x);
    const double r2 = rho * rho;
    return j.f + j.d2 * r2 / 8.0 + j.d4 * r2 * r2 / 192.0;
  }
  return semicircle_average(f, x, rho, [](const Potential1D::Jet& j) { return j.f; });
}

double disc_moment_d1(const Potential1D& f, double x, double rho) {
  if (single_piece(f, x - rho, x + rho) != -2) {
    const auto j = f.jet(x);
    const double r2 = rho * rho;
    return j.d1 + j.d3 * r2 / 8.0 + j.d5 * r2 * r2 / 192.0;
  }
  return semicircle_average(f, x, rho, [](const Potential1D::Jet& j) { return j.d1; });
}

// ---------------------------------------------------------------------------------------
// Mollifier

namespace {

double wrap(double t) {
  t = std::fmod(t, 2.0 * M_PI);
  return t < 0 ? t + 2.0 * M_PI : t;
}

// sign changes of g on [a, b], given |g'| <= lip and |g''| <= lip2
template <class G, class DG>
void ellipse_roots(const G& g, const DG& dg, double lip, double lip2, double a, double b, double ga, double gb,
                   std::vector<double>& out) {
  if (std::abs(ga) + std::abs(gb) > lip * (b - a)) return;
  const double m = 0.5 * (a + b);
  const bool monotone = std::abs(dg(m)) > lip2 * 0.5 * (b - a);
  if (monotone || b - a < 1e-13) {
    if ((ga < 0) == (gb < 0)) return;
    double lo = a, hi = b, glo = ga;
    for (int it = 0; it < 200 && hi - lo > 4e-16; ++it) {
      const double c = 0.5 * (lo + hi), gc = g(c);
      if ((gc < 0) == (glo < 0)) {
        lo = c;
        glo = gc;
      } else {
        hi = c;
      }
    }
    out.push_back(wrap(0.5 * (lo + hi)));
    return;
  }
  const double gm = g(m);
  ellipse_roots(g, dg, lip, lip2, a, m, ga, gm, out);
  ellipse_roots(g, dg, lip, lip2, m, b, gm, gb, out);
}

// angles where the circle of radius rho about p crosses the kink curves
std::vector<double> circle_crossings(const KinkSet& k, Vec2 p, double rho) {
  std::vector<double> out;
  for (double v : k.verticals) {
    const double t = (v - p.x1) / rho;
    if (t > -1.0 && t < 1.0) {
      const double a = std::acos(t);
      out.push_back(a);
      out.push_back(2.0 * M_PI - a);
    }
  }
  if (k.axis) {
    const double t = -p.x2 / rho;
    if (t > -1.0 && t < 1.0) {
      const double a = std::asin(t);
      out.push_back(wrap(a));
      out.push_back(wrap(M_PI - a));
    }
  }
  for (const auto& c : k.circles) {
    const double dx = c.c1 - p.x1, dy = c.c2 - p.x2;
    const double d = std::hypot(dx, dy);
    if (d > std::abs(rho - c.r) && d < rho + c.r) {
      const double phi = std::atan2(dy, dx);
      const double del = std::acos(std::clamp((rho * rho + d * d - c.r * c.r) / (2.0 * rho * d), -1.0, 1.0));
      out.push_back(wrap(phi + del));
      out.push_back(wrap(phi - del));
    }
  }
  for (const auto& e : k.ellipses) {
    // g(t) = A + B cos t + C sin t + D cos 2t on the circle
    const double q1 = p.x1 - e.c1, q2 = p.x2 - e.c2;
    const double ia = 1.0 / (e.a * e.a), ib = 1.0 / (e.b * e.b);
    const double A = q1 * q1 * ia + q2 * q2 * ib + 0.5 * rho * rho * (ia + ib) - 1.0;
    const double B = 2.0 * q1 * rho * ia, C = 2.0 * q2 * rho * ib, D = 0.5 * rho * rho * (ia - ib);
    auto g = [&](double t) { return A + B * std::cos(t) + C * std::sin(t) + D * std::cos(2.0 * t); };
    auto dg = [&](double t) { return -B * std::sin(t) + C * std::cos(t) - 2.0 * D * std::sin(2.0 * t); };
    const double lip = std::abs(B) + std::abs(C) + 2.0 * std::abs(D);
    const double lip2 = std::abs(B) + std::abs(C) + 4.0 * std::abs(D);
    ellipse_roots(g, dg, lip, lip2, 0.0, 2.0 * M_PI, g(0.0), g(2.0 * M_PI), out);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// cuts in xi2 in (-H, H) for the vertical chord at abscissa x1
void chord_cuts(const KinkSet& k, Vec2 p, double x1, double H, std::vector<double>& cuts) {
  cuts.clear();
  cuts.push_back(-H);
  auto add = [&](double xi2) {
    if (xi2 > -H && xi2 < H) cuts.push_back(xi2);
  };
  if (k.axis) add(-p.x2);
  for (const auto& c : k.circles) {
    const double s = c.r * c.r - (x1 - c.c1) * (x1 - c.c1);
    if (s > 0) {
      const double h = std::sqrt(s);
      add(c.c2 + h - p.x2);
      add(c.c2 - h - p.x2);
    }
  }
  for (const auto& e : k.ellipses) {
    const double q = (x1 - e.c1) / e.a;
    const double s = 1.0 - q * q;
    if (s > 0) {
      const double h = e.b * std::sqrt(s);
      add(e.c2 + h - p.x2);
      add(e.c2 - h - p.x2);
    }
  }
  cuts.push_back(H);
  std::sort(cuts.begin(), cuts.end());
}

}  // namespace

MollifiedField::MollifiedField(FieldPtr field, double rho, MollifyOptions opts)
    : field_(std::move(field)), rho_(rho), opts_(opts) {
  if (!(rho > 0)) throw DomainError("mollify: rho must be positive");
  if (!field_) throw DomainError("mollify: null field");
}

MollifiedField::MollifiedField(std::shared_ptr<const PhiField> phi, double rho, MollifyOptions opts)
    : field_(phi), phi_(std::move(phi)), rho_(rho), opts_(opts) {
  if (!(rho > 0)) throw DomainError("mollify: rho must be positive");
  if (!phi_) throw DomainError("mollify: null field");
  profile_ = &phi_->profile();
  kinks_ = phi_->kinks();
}

double MollifiedField::rough(Vec2 x) const { return phi_ ? phi_->excess(x) : field_->value(x); }

double MollifiedField::disc_average(Vec2 p, int order) const {
  const double rho = rho_;
  // outer cuts in xi1
  std::vector<double> xi1{-rho, rho};
  for (double v : kinks_.verticals) xi1.push_back(v - p.x1);
  for (const auto& c : kinks_.circles) {
    xi1.push_back(c.c1 - c.r - p.x1);
    xi1.push_back(c.c1 + c.r - p.x1);
  }
  for (const auto& e : kinks_.ellipses) {
    xi1.push_back(e.c1 - e.a - p.x1);
    xi1.push_back(e.c1 + e.a - p.x1);
  }
  // (phi, ends at a kink meeting the disc boundary)
  std::vector<std::pair<double, bool>> phis;
  for (double s : xi1)
    if (s >= -rho && s <= rho) phis.push_back({std::asin(std::clamp(s / rho, -1.0, 1.0)), false});
  for (double t : circle_crossings(kinks_, p, rho)) phis.push_back({std::asin(std::clamp(std::cos(t), -1.0, 1.0)), true});
  std::sort(phis.begin(), phis.end());
  std::vector<std::pair<double, bool>> merged;
  for (const auto& q : phis) {
    if (!merged.empty() && q.first - merged.back().first < 1e-14)
      merged.back().second = merged.back().second || q.second;
    else
      merged.push_back(q);
  }

  const auto& rule = gauss_rule(order);
  std::vector<double> cuts;
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < merged.size(); ++k) {
    const double a = merged[k].first, w = merged[k + 1].first - a;
    const bool smooth_ends = merged[k].second || merged[k + 1].second;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double t = rule.nodes[i];
      const double phi = a + w * (smooth_ends ? smoothstep(t) : t);
      const double jac = smooth_ends ? w * 6.0 * t * (1.0 - t) : w;
      const double H = rho * std::cos(phi);
      const double x1 = p.x1 + rho * std::sin(phi);
      chord_cuts(kinks_, p, x1, H, cuts);
      double inner = 0.0;
      for (std::size_t m = 0; m + 1 < cuts.size(); ++m) {
        const double lo = cuts[m], len = cuts[m + 1] - cuts[m];
        if (len <= 0) continue;
        for (std::size_t j = 0; j < rule.nodes.size(); ++j)
          inner += rule.weights[j] * len * rough({x1, p.x2 + lo + len * rule.nodes[j]});
      }
      sum += rule.weights[i] * jac * H * inner;
    }
  }
  return sum / (M_PI * rho * rho);
}

Vec2 MollifiedField::circle_gradient(Vec2 p, int order) const {
  auto ts = circle_crossings(kinks_, p, rho_);
  std::vector<double> cuts;
  if (ts.empty()) {
    cuts = {0.0, 0.5 * M_PI, M_PI, 1.5 * M_PI, 2.0 * M_PI};
  } else {
    cuts = ts;
    cuts.push_back(ts.front() + 2.0 * M_PI);
  }
  const auto& rule = gauss_rule(order);
  Vec2 g;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double a = cuts[k], w = cuts[k + 1] - cuts[k];
    if (w <= 0) continue;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double t = a + w * rule.nodes[i];
      const double c = std::cos(t), s = std::sin(t);
      const double e = rough({p.x1 + rho_ * c, p.x2 + rho_ * s});
      g.x1 += rule.weights[i] * w * e * c;
      g.x2 += rule.weights[i] * w * e * s;
    }
  }
  return g * (1.0 / (M_PI * rho_));
}

namespace {

void check_agreement(double a, double b, double tol, const char* what, Vec2 x) {
  if (std::abs(a - b) > tol * std::max(1.0, std::abs(a))) {
    char buf[200];
    std::snprintf(buf, sizeof buf, "mollify: %s quadrature not converged at (%.9g, %.9g): %.3g vs %.3g", what,
                  x.x1, x.x2, a, b);
    throw NumericalError(buf);
  }
}

}  // namespace

double MollifiedField::value(Vec2 x) const {
  double v = 0.0;
  if (profile_) v = disc_moment(*profile_, x.x1, rho_) + x.x2 * x.x2 + 0.25 * rho_ * rho_;
  if (!(phi_ && phi_->excess_vanishes_on_disc(x, rho_))) {
    const double r = disc_average(x, opts_.disc_order);
    if (opts_.self_check) check_agreement(r, disc_average(x, std::min(64, 2 * opts_.disc_order)), opts_.tolerance, "disc", x);
    v += r;
  }
  if (opts_.recenter) v -= 0.5 * rho_ * rho_;
  return v;
}

Vec2 MollifiedField::gradient(Vec2 x) const {
  Vec2 g;
  if (profile_) g = {disc_moment_d1(*profile_, x.x1, rho_), 2.0 * x.x2};
  if (!(phi_ && phi_->excess_vanishes_on_disc(x, rho_))) {
    const Vec2 r = circle_gradient(x, opts_.circle_order);
    if (opts_.self_check) {
      const Vec2 r2 = circle_gradient(x, std::min(64, 2 * opts_.circle_order));
      check_agreement(r.x1, r2.x1, opts_.tolerance, "gradient", x);
      check_agreement(r.x2, r2.x2, opts_.tolerance, "gradient", x);
    }
    g = g + r;
  }
  return g;
}

std::shared_ptr<const MollifiedField> mollify(FieldPtr field, double rho, const MollifyOptions& opts) {
  if (auto phi = std::dynamic_pointer_cast<const PhiField>(field)) return mollify(phi, rho, opts);
  return std::make_shared<const MollifiedField>(std::move(field), rho, opts);
}

std::shared_ptr<const MollifiedField> mollify(std::shared_ptr<const PhiField> phi, double rho,
                                              const MollifyOptions& opts) {
  return std::make_shared<const MollifiedField>(std::move(phi), rho, opts);
}

// ---------------------------------------------------------------------------------------
// Families

LinearBlend::LinearBlend(FieldPtr f0, FieldPtr f1, double u_a, double u_b)
    : f0_(std::move(f0)), f1_(std::move(f1)), a_(u_a), b_(u_b) {
  if (!f0_ || !f1_) throw DomainError("linear_blend: null field");
  if (!(u_a < u_b)) throw DomainError("linear_blend: need u_a < u_b");
}

double LinearBlend::ramp(double u) const { return smoothstep((u - a_) / (b_ - a_)); }
double LinearBlend::ramp_derivative(double u) const { return smoothstep_derivative((u - a_) / (b_ - a_)) / (b_ - a_); }

double LinearBlend::value(Vec2 x, double u) const {
  const double s = ramp(u);
  if (s <= 0.0) return f0_->value(x);
  if (s >= 1.0) return f1_->value(x);
  return (1.0 - s) * f0_->value(x) + s * f1_->value(x);
}

Vec2 LinearBlend::gradient(Vec2 x, double u) const {
  const double s = ramp(u);
  if (s <= 0.0) return f0_->gradient(x);
  if (s >= 1.0) return f1_->gradient(x);
  return f0_->gradient(x) * (1.0 - s) + f1_->gradient(x) * s;
}

bool LinearBlend::is_separable() const {
  return f0_->separable_profile() != nullptr && f1_->separable_profile() != nullptr;
}

std::shared_ptr<const LinearBlend> linear_blend(FieldPtr f0, FieldPtr f1, double u_a, double u_b) {
  return std::make_shared<const LinearBlend>(std::move(f0), std::move(f1), u_a, u_b);
}

RotationFamily::RotationFamily(FieldPtr base, Vec2 center, double radius, double u_a, double u_b, double angle)
    : base_(std::move(base)), c_(center), R_(radius), a_(u_a), b_(u_b), angle_(angle) {
  if (!base_) throw DomainError("rotation_family: null field");
  if (!(u_a < u_b) || !(radius > 0)) throw DomainError("rotation_family: need u_a < u_b and a positive radius");
}

double RotationFamily::alpha(double u) const { return angle_ * smoothstep((u - a_) / (b_ - a_)); }
double RotationFamily::alpha_derivative(double u) const {
  return angle_ * smoothstep_derivative((u - a_) / (b_ - a_)) / (b_ - a_);
}

double RotationFamily::value(Vec2 x, double u) const {
  const Vec2 d = x - c_;
  const double al = alpha(u);
  if (al == 0.0 || d.norm() > R_) return base_->value(x);
  return base_->value(c_ + rotate(d, -al));
}

Vec2 RotationFamily::gradient(Vec2 x, double u) const {
  const Vec2 d = x - c_;
  const double al = alpha(u);
  if (al == 0.0 || d.norm() > R_) return base_->gradient(x);
  return rotate(base_->gradient(c_ + rotate(d, -al)), al);
}

double circle_variation(const ScalarField2D& f, Vec2 c, double R, int samples) {
  double lo = 1e300, hi = -1e300;
  for (int k = 0; k < samples; ++k) {
    const double t = 2.0 * M_PI * k / samples;
    const double v = f.value({c.x1 + R * std::cos(t), c.x2 + R * std::sin(t)});
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return hi - lo;
}

std::shared_ptr<const RotationFamily> rotation_family(FieldPtr base, const LemmaGeometry& geom, double u_a,
                                                      double u_b, double tolerance) {
  const Vec2 c{geom.center, 0.0};
  const double var = circle_variation(*base, c, geom.R);
  if (var > tolerance) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "rotation_family: base varies by %.3g along the rotation circle", var);
    throw DomainError(buf);
  }
  return std::make_shared<const RotationFamily>(std::move(base), c, geom.R, u_a, u_b);
}

// ---------------------------------------------------------------------------------------
// Export

std::string field_grid_csv(const ScalarField2D& f, double x1_lo, double x1_hi, int n1, double x2_lo, double x2_hi,
                           int n2) {
  if (n1 < 1 || n2 < 1) throw DomainError("field_grid_csv: need at least one point per direction");
  std::ostringstream os;
  os.precision(17);
  os << "x1,x2,V\n";
  for (int j = 0; j < n2; ++j) {
    const double x2 = n2 == 1 ? x2_lo : x2_lo + (x2_hi - x2_lo) * j / (n2 - 1);
    for (int i = 0; i < n1; ++i) {
      const double x1 = n1 == 1 ? x1_lo : x1_lo + (x1_hi - x1_lo) * i / (n1 - 1);
      os << x1 << ',' << x2 << ',' << f.value({x1, x2}) << '\n';
    }
  }
  return os.str();
}

std::string field_contour_grid(const ScalarField2D& f, double x1_lo, double x1_hi, int n1, double x2_lo,
                               double x2_hi, int n2) {
  if (n1 < 1 || n2 < 1) throw DomainError("field_contour_grid: need at least one point per direction");
  std::ostringstream os;
  os.precision(12);
  os << n1 << ' ' << n2 << ' ' << x1_lo << ' ' << x1_hi << ' ' << x2_lo << ' ' << x2_hi << '\n';
  for (int j = 0; j < n2; ++j) {
    const double x2 = n2 == 1 ? x2_lo : x2_lo + (x2_hi - x2_lo) * j / (n2 - 1);
    for (int i = 0; i < n1; ++i) {
      const double x1 = n1 == 1 ? x1_lo : x1_lo + (x1_hi - x1_lo) * i / (n1 - 1);
      os << (i ? " " : "") << f.value({x1, x2});
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace hystreal
