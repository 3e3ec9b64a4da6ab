#include "hystreal/multiwell.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <sstream>

#include "hystreal/errors.hpp"

namespace hystreal {

std::string to_string(CriticalKind kind) { return kind == CriticalKind::Minimum ? "min" : "max"; }

double smoothstep(double s) {
  s = std::clamp(s, 0.0, 1.0);
  return s * s * (3.0 - 2.0 * s);
}

double smoothstep_derivative(double s) {
  if (s <= 0.0 || s >= 1.0) return 0.0;
  return 6.0 * s * (1.0 - s);
}

void quintic_hermite(const HermiteKnot& a, const HermiteKnot& b, double out[6]) {
  const double h = b.x - a.x;
  const double delta = b.y - a.y;
  const double d0 = h * a.dy, d1 = h * b.dy;
  const double s0 = h * h * a.d2y, s1 = h * h * b.d2y;
  const double n[6] = {
      a.y,
      d0,
      0.5 * s0,
      10.0 * delta - 6.0 * d0 - 4.0 * d1 - 0.5 * (3.0 * s0 - s1),
      -15.0 * delta + 8.0 * d0 + 7.0 * d1 + 0.5 * (3.0 * s0 - 2.0 * s1),
      6.0 * delta - 3.0 * d0 - 3.0 * d1 - 0.5 * (s0 - s1),
  };
  double scale = 1.0;
  for (int k = 0; k < 6; ++k) {
    out[k] = n[k] / scale;
    scale *= h;
  }
}

Potential1D::Potential1D() { critical_.push_back({0.0, CriticalKind::Minimum, 0.0}); }

Potential1D::Potential1D(std::vector<HermiteKnot> knots, std::vector<CriticalPoint> critical,
                         double m_star, double M_star)
    : knots_(std::move(knots)), critical_(std::move(critical)), m_star_(m_star), M_star_(M_star) {
  if (knots_.size() == 1) throw ConstructionError("Potential1D: a single knot does not define a window");
  for (std::size_t i = 0; i + 1 < knots_.size(); ++i) {
    if (!(knots_[i + 1].x > knots_[i].x)) throw ConstructionError("Potential1D: knots must increase");
    Piece p;
    p.origin = knots_[i].x;
    quintic_hermite(knots_[i], knots_[i + 1], p.c);
    pieces_.push_back(p);
  }
  for (const auto* k : {knots_.empty() ? nullptr : &knots_.front(), knots_.empty() ? nullptr : &knots_.back()}) {
    if (k == nullptr) continue;
    const double tol = 1e-9 * std::max(1.0, k->x * k->x);
    if (std::abs(k->y - k->x * k->x) > tol || std::abs(k->dy - 2.0 * k->x) > tol || std::abs(k->d2y - 2.0) > 1e-9)
      throw ConstructionError("Potential1D: window edge does not match x^2 to second order");
  }
  std::sort(critical_.begin(), critical_.end(), [](const auto& a, const auto& b) { return a.x < b.x; });
}

int Potential1D::piece_index(double x) const {
  if (knots_.empty() || x < knots_.front().x || x > knots_.back().x) return -1;
  auto it = std::upper_bound(knots_.begin(), knots_.end(), x, [](double v, const HermiteKnot& k) { return v < k.x; });
  int idx = static_cast<int>(it - knots_.begin()) - 1;
  return std::clamp(idx, 0, static_cast<int>(pieces_.size()) - 1);
}

Potential1D::Jet Potential1D::piece_jet(int piece, double x) const {
  const Piece& p = pieces_[piece];
  const double t = x - p.origin;
  const double* c = p.c;
  Jet j;
  j.f = c[0] + t * (c[1] + t * (c[2] + t * (c[3] + t * (c[4] + t * c[5]))));
  j.d1 = c[1] + t * (2.0 * c[2] + t * (3.0 * c[3] + t * (4.0 * c[4] + t * 5.0 * c[5])));
  j.d2 = 2.0 * c[2] + t * (6.0 * c[3] + t * (12.0 * c[4] + t * 20.0 * c[5]));
  j.d3 = 6.0 * c[3] + t * (24.0 * c[4] + t * 60.0 * c[5]);
  j.d4 = 24.0 * c[4] + t * 120.0 * c[5];
  j.d5 = 120.0 * c[5];
  return j;
}

Potential1D::Jet Potential1D::jet(double x) const {
  const int idx = piece_index(x);
  if (idx < 0) return {x * x, 2.0 * x, 2.0, 0.0, 0.0, 0.0};
  return piece_jet(idx, x);
}

double Potential1D::value(double x) const { return jet(x).f; }
double Potential1D::d1(double x) const { return jet(x).d1; }
double Potential1D::d2(double x) const { return jet(x).d2; }

std::vector<double> Potential1D::breakpoints() const {
  std::vector<double> out;
  out.reserve(knots_.size());
  for (const auto& k : knots_) out.push_back(k.x);
  return out;
}

std::vector<double> Potential1D::minima() const {
  std::vector<double> out;
  for (const auto& c : critical_)
    if (c.kind == CriticalKind::Minimum) out.push_back(c.x);
  return out;
}

std::vector<double> Potential1D::maxima() const {
  std::vector<double> out;
  for (const auto& c : critical_)
    if (c.kind == CriticalKind::Maximum) out.push_back(c.x);
  return out;
}

bool hermite_monotone(const HermiteKnot& a, const HermiteKnot& b, int sign) {
  double c[6];
  quintic_hermite(a, b, c);
  const double h = b.x - a.x;
  constexpr int kSamples = 512;
  for (int i = 0; i <= kSamples; ++i) {
    const double t = h * i / kSamples;
    const double d = c[1] + t * (2.0 * c[2] + t * (3.0 * c[3] + t * (4.0 * c[4] + t * 5.0 * c[5])));
    if (!(sign * d > 0.0)) return false;
  }
  return true;
}

namespace {

struct Cap {
  HermiteKnot left, right;
};

Cap make_cap(double x, double y, double curvature, double half_width) {
  const double d = half_width;
  return {{x - d, y + 0.5 * curvature * d * d, -curvature * d, curvature},
          {x + d, y + 0.5 * curvature * d * d, curvature * d, curvature}};
}

HermiteKnot parabola_knot(double w) { return {w, w * w, 2.0 * w, 2.0}; }

double max_abs_curvature(const HermiteKnot& a, const HermiteKnot& b) {
  double c[6];
  quintic_hermite(a, b, c);
  const double h = b.x - a.x;
  double m = 0.0;
  for (int i = 0; i <= 256; ++i) {
    const double t = h * i / 256;
    m = std::max(m, std::abs(2.0 * c[2] + t * (6.0 * c[3] + t * (12.0 * c[4] + t * 20.0 * c[5]))));
  }
  return m;
}

// Tail joining a cap knot to the parabola x^2: among monotone candidates pick the one with
// the smallest peak curvature (ties resolved towards the shorter tail).
HermiteKnot tail_knot(const HermiteKnot& cap, int side) {
  std::optional<HermiteKnot> best;
  double best_cost = std::numeric_limits<double>::infinity();
  const double t_max = 4.0 * std::max(1.0, std::abs(cap.x)) + 8.0;
  for (int i = 0;; ++i) {
    const double t = 0.25 * std::pow(1.1, i);
    if (t > t_max) break;
    const HermiteKnot w = side < 0 ? parabola_knot(std::min(0.0, cap.x) - t) : parabola_knot(std::max(0.0, cap.x) + t);
    if (!(w.y > cap.y)) continue;
    const HermiteKnot& a = side < 0 ? w : cap;
    const HermiteKnot& b = side < 0 ? cap : w;
    if (!hermite_monotone(a, b, side < 0 ? -1 : +1)) continue;
    const double cost = max_abs_curvature(a, b);
    if (cost < best_cost * (1.0 - 1e-3)) {
      best_cost = cost;
      best = w;
    }
  }
  if (!best) throw ConstructionError("multiwell: no monotone tail found");
  return *best;
}

HermiteKnot left_tail_knot(const HermiteKnot& first) { return tail_knot(first, -1); }
HermiteKnot right_tail_knot(const HermiteKnot& last) { return tail_knot(last, +1); }

void check_interior_monotone(const std::vector<HermiteKnot>& knots, const std::vector<CriticalPoint>& crit) {
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const double lo = knots[i].x, hi = knots[i + 1].x;
    bool has_critical = false;
    for (const auto& c : crit) has_critical |= (c.x > lo && c.x < hi);
    if (has_critical) continue;
    const int sign = knots[i + 1].y > knots[i].y ? +1 : -1;
    if (!hermite_monotone(knots[i], knots[i + 1], sign)) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "multiwell: piece [%.6g, %.6g] is not strictly monotone", lo, hi);
      throw ConstructionError(buf);
    }
  }
}

}  // namespace

Potential1D build_multiwell(std::span<const double> min_positions, const ShapeConfig& shape) {
  if (min_positions.empty()) throw DomainError("build_multiwell: at least one minimum is required");
  for (std::size_t i = 0; i + 1 < min_positions.size(); ++i)
    if (!(min_positions[i + 1] > min_positions[i]))
      throw DomainError("build_multiwell: minimum positions must be strictly increasing");
  if (!(shape.M_star > shape.m_star) || shape.m_star < 0.0)
    throw DomainError("build_multiwell: require M* > m* >= 0");

  if (min_positions.size() == 1 && min_positions[0] == 0.0 && shape.m_star == 0.0) return Potential1D{};

  std::vector<CriticalPoint> crit;
  for (std::size_t i = 0; i < min_positions.size(); ++i) {
    crit.push_back({min_positions[i], CriticalKind::Minimum, shape.m_star});
    if (i + 1 < min_positions.size())
      crit.push_back({0.5 * (min_positions[i] + min_positions[i + 1]), CriticalKind::Maximum, shape.M_star});
  }

  const double depth = shape.M_star - shape.m_star;
  std::vector<HermiteKnot> knots;
  for (std::size_t i = 0; i < crit.size(); ++i) {
    double h = std::numeric_limits<double>::infinity();
    if (i > 0) h = std::min(h, crit[i].x - crit[i - 1].x);
    if (i + 1 < crit.size()) h = std::min(h, crit[i + 1].x - crit[i].x);
    if (!std::isfinite(h)) h = shape.lone_half_gap;
    const double k = shape.cap_curvature * depth / (h * h);
    const double curvature = crit[i].kind == CriticalKind::Minimum ? k : -k;
    const Cap cap = make_cap(crit[i].x, crit[i].value, curvature, shape.cap_fraction * h);
    knots.push_back(cap.left);
    knots.push_back(cap.right);
  }
  knots.insert(knots.begin(), left_tail_knot(knots.front()));
  knots.push_back(right_tail_knot(knots.back()));
  check_interior_monotone(knots, crit);
  return Potential1D(std::move(knots), std::move(crit), shape.m_star, shape.M_star);
}

Potential1D standard_multiwell(int count, const ShapeConfig& shape) {
  if (count < 1) throw DomainError("standard_multiwell: count must be positive");
  std::vector<double> pos(count);
  for (int i = 0; i < count; ++i) pos[i] = i + 1.0;
  return build_multiwell(pos, shape);
}

Potential1D drop_last_minimum(const Potential1D& f, const ShapeConfig& shape) {
  const auto mins = f.minima();
  if (mins.size() < 2) throw DomainError("drop_last_minimum: potential has a single minimum");
  (void)shape;
  const double keep = mins[mins.size() - 2];
  // knots up to and including the right cap knot of the surviving last minimum
  std::vector<HermiteKnot> knots;
  for (const auto& k : f.knots()) {
    knots.push_back(k);
    if (k.x > keep) break;
  }
  knots.push_back(right_tail_knot(knots.back()));
  std::vector<CriticalPoint> crit;
  for (const auto& c : f.critical_points())
    if (c.x <= keep) crit.push_back(c);
  check_interior_monotone(knots, crit);
  return Potential1D(std::move(knots), std::move(crit), f.m_star(), f.M_star());
}

std::vector<CriticalPoint> scan_critical_points(const std::function<double(double)>& d1,
                                                const std::function<double(double)>& d2,
                                                const std::function<double(double)>& value,
                                                double lo, double hi, double step) {
  std::vector<CriticalPoint> out;
  const int n = std::max(2, static_cast<int>(std::ceil((hi - lo) / step)));
  const double dx = (hi - lo) / n;
  double xa = lo, ga = d1(xa);
  auto refine = [&](double a, double b, double fa) {
    for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, std::abs(a)); ++it) {
      const double m = 0.5 * (a + b);
      const double fm = d1(m);
      if (fm == 0.0) return m;
      if ((fm > 0.0) == (fa > 0.0)) {
        a = m;
        fa = fm;
      } else {
        b = m;
      }
    }
    return 0.5 * (a + b);
  };
  for (int i = 1; i <= n; ++i) {
    const double xb = lo + i * dx;
    const double gb = d1(xb);
    if (ga == 0.0) {
      // exact zero on a grid node; classified below when leaving it
    }
    if ((ga < 0.0 && gb > 0.0) || (ga > 0.0 && gb < 0.0) || (gb == 0.0 && ga != 0.0)) {
      const double x = gb == 0.0 ? xb : refine(xa, xb, ga);
      const double curv = d2(x);
      CriticalKind kind = curv > 0.0 ? CriticalKind::Minimum : CriticalKind::Maximum;
      if (curv == 0.0) kind = ga < 0.0 ? CriticalKind::Minimum : CriticalKind::Maximum;
      out.push_back({x, kind, value(x)});
    }
    xa = xb;
    ga = gb;
  }
  return out;
}

std::vector<CriticalPoint> critical_points(const Potential1D& f, const CriticalScanOptions& opts) {
  const double lo = f.window_lo() - opts.margin, hi = f.window_hi() + opts.margin;
  auto found = scan_critical_points([&](double x) { return f.d1(x); }, [&](double x) { return f.d2(x); },
                                    [&](double x) { return f.value(x); }, std::min(lo, -opts.margin),
                                    std::max(hi, opts.margin), opts.step);
  const auto& stored = f.critical_points();
  bool ok = found.size() == stored.size();
  for (std::size_t i = 0; ok && i < found.size(); ++i)
    ok = found[i].kind == stored[i].kind && std::abs(found[i].x - stored[i].x) <= opts.tolerance;
  if (!ok) {
    std::ostringstream msg;
    msg << "critical_points: stored list (" << stored.size() << ") disagrees with scan (" << found.size() << ")";
    throw ConstructionError(msg.str());
  }
  return found;
}

std::string sample_csv(const Potential1D& f, double lo, double hi, int count) {
  std::string out = "x,f,df\n";
  char buf[128];
  for (int i = 0; i < count; ++i) {
    const double x = count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
    const auto j = f.jet(x);
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", x, j.f, j.d1);
    out += buf;
  }
  return out;
}

}  // namespace hystreal
