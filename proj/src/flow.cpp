#include "hystreal/flow.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <tuple>

#include <boost/numeric/odeint.hpp>

#include "hystreal/errors.hpp"

namespace hystreal {

namespace odeint = boost::numeric::odeint;

std::string to_string(EventKind k) {
  switch (k) {
    case EventKind::SaddleNode: return "saddle-node";
    case EventKind::Landed: return "landed";
    case EventKind::Reversible: return "reversible";
  }
  return "?";
}

namespace {

// V(., u) of a family without ownership
class FrozenRef final : public ScalarField2D {
 public:
  FrozenRef(const FieldFamily& fam, double u) : fam_(fam), u_(u) {}
  double value(Vec2 x) const override { return fam_.value(x, u_); }
  Vec2 gradient(Vec2 x) const override { return fam_.gradient(x, u_); }

 private:
  const FieldFamily& fam_;
  double u_;
};

}  // namespace

double Hessian::min_eigenvalue() const {
  const double m = 0.5 * (a + c), d = std::hypot(0.5 * (a - c), b);
  return m - d;
}

Hessian fd_hessian(const ScalarField2D& f, Vec2 x, double h) {
  const Vec2 gp1 = f.gradient({x.x1 + h, x.x2}), gm1 = f.gradient({x.x1 - h, x.x2});
  const Vec2 gp2 = f.gradient({x.x1, x.x2 + h}), gm2 = f.gradient({x.x1, x.x2 - h});
  Hessian H;
  H.a = (gp1.x1 - gm1.x1) / (2 * h);
  H.c = (gp2.x2 - gm2.x2) / (2 * h);
  H.b = 0.5 * ((gp1.x2 - gm1.x2) + (gp2.x1 - gm2.x1)) / (2 * h);
  return H;
}

NewtonResult newton_minimum(const ScalarField2D& f, Vec2 x0, const SweepConfig& cfg) {
  NewtonResult out;
  Vec2 x = x0;
  Vec2 g = f.gradient(x);
  double gn = g.norm();
  for (int it = 0; it < 80; ++it) {
    out.iterations = it;
    if (gn < cfg.grad_tol) {
      out.converged = true;
      break;
    }
    const Hessian H = fd_hessian(f, x);
    if (!(H.min_eigenvalue() > 0.0)) break;
    const double det = H.a * H.c - H.b * H.b;
    Vec2 step{-(H.c * g.x1 - H.b * g.x2) / det, -(-H.b * g.x1 + H.a * g.x2) / det};
    const double len = step.norm();
    if (len > 0.05) step = step * (0.05 / len);
    bool accepted = false;
    for (int k = 0; k < 30; ++k) {
      const Vec2 xt = x + step;
      const Vec2 gt = f.gradient(xt);
      if (gt.norm() < gn) {
        x = xt;
        g = gt;
        gn = gt.norm();
        accepted = true;
        break;
      }
      step = step * 0.5;
    }
    if (!accepted) break;
  }
  out.x = x;
  out.min_eigenvalue = fd_hessian(f, x).min_eigenvalue();
  if (!(out.min_eigenvalue > 0.0)) out.converged = false;
  return out;
}

SettleResult settle(const ScalarField2D& f, Vec2 x0, const SweepConfig& cfg, FlowTrajectory* rec, double u) {
  using State = std::array<double, 2>;
  SettleResult out;
  auto finish = [&](const NewtonResult& n) {
    out.x = n.x;
    out.min_eigenvalue = n.min_eigenvalue;
    if (rec) rec->samples.push_back({out.time, u, n.x, f.value(n.x)});
    return out;
  };
  if (f.gradient(x0).norm() < cfg.grad_tol) {
    const auto n = newton_minimum(f, x0, cfg);
    if (n.converged && (n.x - x0).norm() < 1e-6) return finish(n);
  }
  auto rhs = [&](const State& s, State& ds, double) {
    const Vec2 g = f.gradient({s[0], s[1]});
    ds[0] = -g.x1;
    ds[1] = -g.x2;
  };
  auto stepper = odeint::make_controlled(cfg.atol, cfg.rtol, odeint::runge_kutta_dopri5<State>());
  State s{x0.x1, x0.x2};
  double t = 0.0, dt = 1e-3;
  double V = cfg.check_lyapunov ? f.value(x0) : 0.0;
  if (rec) rec->samples.push_back({0.0, u, x0, cfg.check_lyapunov ? V : f.value(x0)});
  int fails = 0;
  while (out.steps < cfg.max_steps) {
    if (stepper.try_step(rhs, s, t, dt) != odeint::success) {
      if (++fails > 1000) throw NumericalError("settle: step size control failed");
      continue;
    }
    fails = 0;
    ++out.steps;
    const Vec2 x{s[0], s[1]};
    if (!std::isfinite(x.x1) || !std::isfinite(x.x2)) throw NumericalError("settle: state is not finite");
    if (cfg.check_lyapunov) {
      const double Vn = f.value(x);
      if (Vn > V + 1e-10 * std::max(1.0, std::abs(V))) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "settle: V increased along the flow at (%.9g, %.9g): %.17g > %.17g", x.x1, x.x2,
                      Vn, V);
        throw NumericalError(buf);
      }
      V = Vn;
      if (rec && out.steps % 16 == 0) rec->samples.push_back({t, u, x, Vn});
    }
    if (f.gradient(x).norm() < cfg.settle_tol) {
      const auto n = newton_minimum(f, x, cfg);
      if (n.converged && (n.x - x).norm() < 1e-3) {
        out.time = t;
        return finish(n);
      }
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "settle: no equilibrium after %ld steps (t = %.3g, at (%.9g, %.9g))", out.steps, t,
                s[0], s[1]);
  throw NumericalError(buf);
}

// ---------------------------------------------------------------------------------------
// Tracking

namespace {

enum class StepStatus { Good, Weak, Fail };

struct Attempt {
  StepStatus status;
  Vec2 x;
};

Attempt attempt(const FieldFamily& fam, double u, Vec2 from, const SweepConfig& cfg) {
  const FrozenRef f(fam, u);
  const auto n = newton_minimum(f, from, cfg);
  if (!n.converged || (n.x - from).norm() > cfg.max_jump) return {StepStatus::Fail, n.x};
  return {n.min_eigenvalue >= cfg.sn_curvature ? StepStatus::Good : StepStatus::Weak, n.x};
}

int steps_for(const std::string& kind, const SweepConfig& cfg) {
  if (kind == "rotation") return cfg.steps_rotation;
  if (kind == "sn_elimination") return cfg.steps_fold;
  if (kind == "constant") return 1;
  return cfg.steps_blend;
}

// u values from u_from to u_to (exclusive of u_from, inclusive of u_to)
std::vector<double> u_steps(const FieldFamily& fam, double u_from, double u_to, const SweepConfig& cfg) {
  std::vector<double> out;
  const double lo = std::min(u_from, u_to), hi = std::max(u_from, u_to);
  std::vector<std::tuple<double, double, std::string>> segs;
  if (auto* s = dynamic_cast<const DeformationSchedule*>(&fam)) {
    for (const auto& seg : s->segments()) {
      const double a = std::max(seg.u_a(), lo), b = std::min(seg.u_b(), hi);
      if (b > a) segs.emplace_back(a, b, seg.family->kind());
    }
  } else {
    segs.emplace_back(lo, hi, fam.kind());
  }
  if (u_to < u_from) std::reverse(segs.begin(), segs.end());
  for (const auto& [a, b, kind] : segs) {
    int n = steps_for(kind, cfg);
    if (cfg.du > 0) n = std::max(n, static_cast<int>(std::ceil((b - a) / cfg.du)));
    const double s0 = u_to >= u_from ? a : b, s1 = u_to >= u_from ? b : a;
    for (int k = 1; k <= n; ++k) out.push_back(k == n ? s1 : s0 + (s1 - s0) * k / n);
  }
  if (out.empty() || out.back() != u_to) out.push_back(u_to);
  return out;
}

}  // namespace

TrackResult track_equilibrium(const FieldFamily& fam, Vec2 x0, double u_from, double u_to, const SweepConfig& cfg) {
  TrackResult out;
  {
    const auto a = attempt(fam, u_from, x0, cfg);
    if (a.status == StepStatus::Fail) throw DomainError("track_equilibrium: start point is not a minimum");
    x0 = a.x;
  }
  out.path.push_back({u_from, x0});
  double u = u_from;
  Vec2 x = x0;
  for (double target : u_steps(fam, u_from, u_to, cfg)) {
    while (u != target) {
      // subdivide a failing step before declaring a fold
      double next = target;
      Attempt a = attempt(fam, next, x, cfg);
      for (int depth = 0; a.status == StepStatus::Fail && depth < 8; ++depth) {
        next = u + 0.5 * (next - u);
        a = attempt(fam, next, x, cfg);
      }
      if (a.status != StepStatus::Fail) {
        u = next;
        x = a.x;
        out.path.push_back({u, x});
        continue;
      }
      double good = u, bad = next;
      Vec2 xg = x;
      const double width = cfg.bracket_width * std::max(1.0, std::abs(u));
      while (std::abs(bad - good) > width) {
        const double mid = 0.5 * (good + bad);
        const auto m = attempt(fam, mid, xg, cfg);
        if (m.status == StepStatus::Fail) {
          bad = mid;
        } else {
          good = mid;
          xg = m.x;
        }
      }
      if (good != u) out.path.push_back({good, xg});
      out.fold = true;
      out.u_last = good;
      out.u_fold = bad;
      out.x_last = xg;
      return out;
    }
  }
  out.u_last = u;
  out.x_last = x;
  return out;
}

SettleResult transit_saddle_node(const FieldFamily& fam, double u_at, Vec2 x_sn, const SweepConfig& cfg,
                                 FlowTrajectory* rec) {
  const FrozenRef f(fam, u_at);
  return settle(f, x_sn, cfg, rec, u_at);
}

double dissipation(const FieldFamily& fam, double u, Vec2 x_before, Vec2 x_landing) {
  const double d = fam.value(x_before, u) - fam.value(x_landing, u);
  if (d < 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "dissipation: landing is above the start (%.3g) at u = %.9g", d, u);
    throw RealizationMismatch(buf);
  }
  return d;
}

std::string vertex_at(const Realization& r, int level, Vec2 x, double tol) {
  if (level < 0 || level >= static_cast<int>(r.X.size())) return {};
  std::string best;
  double best_d = tol;
  for (const auto& [v, p] : r.X[level]) {
    const double d = (p - x).norm();
    if (d <= best_d) {
      best_d = d;
      best = v;
    }
  }
  return best;
}

TransitionOutcome unit_step(const Realization& r, const std::string& start, Direction d, const SweepConfig& cfg,
                            FlowTrajectory* rec) {
  const int i = r.graph.level_of(start);
  if (i < 0) throw DomainError("unit_step: unknown vertex " + start);
  const int j = d == Direction::Up ? i + 1 : i - 1;
  if (j < 0 || j > r.graph.top_level()) throw DomainError("unit_step: no level beyond the boundary");
  const auto& fam = *r.schedule;
  const double u_from = r.u_grid[i], u_to = r.u_grid[j];
  const double sign = u_to > u_from ? 1.0 : -1.0;

  TransitionOutcome out;
  out.direction = d;
  out.source = start;
  Vec2 x = r.X[i].at(start);
  double u = u_from;
  for (int pass = 0; pass < 8; ++pass) {
    const auto tr = track_equilibrium(fam, x, u, u_to, cfg);
    if (rec)
      for (const auto& [uu, xx] : tr.path) rec->samples.push_back({0.0, uu, xx, fam.value(xx, uu)});
    if (!tr.fold) {
      x = tr.x_last;
      break;
    }
    const double u_at = tr.u_fold + sign * cfg.transit_offset;
    if (rec) rec->events.push_back({EventKind::SaddleNode, tr.u_fold, tr.x_last, 0.0});
    const auto landing = transit_saddle_node(fam, u_at, tr.x_last, cfg, rec);
    const double diss = dissipation(fam, u_at, tr.x_last, landing.x);
    if (rec) rec->events.push_back({EventKind::Landed, u_at, landing.x, diss});
    if (!out.folded) {
      out.folded = true;
      out.u_fold = tr.u_fold;
      out.x_before = tr.x_last;
      out.x_landing = landing.x;
      out.dissipation = diss;
    }
    x = landing.x;
    u = u_at;
  }
  if (!out.folded && rec) rec->events.push_back({EventKind::Reversible, u_to, x, 0.0});
  out.landed = vertex_at(r, j, x);
  out.x_final = x;
  if (!out.folded) {
    out.x_before = r.X[i].at(start);
    out.x_landing = x;
  }
  if (out.landed.empty()) {
    char buf[200];
    std::snprintf(buf, sizeof buf, "unit step %s from %s: minimum (%.9g, %.9g) at u = %.9g matches no vertex of level %d",
                  to_string(d).c_str(), start.c_str(), x.x1, x.x2, u_to, j);
    throw RealizationMismatch(buf);
  }
  return out;
}

SweepResult adiabatic_sweep(const Realization& r, const std::string& start, const std::vector<int>& levels,
                            const SweepConfig& cfg) {
  if (levels.empty()) throw DomainError("adiabatic_sweep: empty input");
  if (r.graph.level_of(start) != levels[0]) throw DomainError("adiabatic_sweep: start vertex is not on the first level");
  SweepResult out;
  out.vertices.push_back({levels[0], start});
  std::string cur = start;
  for (std::size_t k = 1; k < levels.size(); ++k) {
    const int diff = levels[k] - levels[k - 1];
    if (diff == 0) {
      out.vertices.push_back({levels[k], cur});
      continue;
    }
    if (std::abs(diff) != 1) throw DomainError("adiabatic_sweep: input must move by unit steps");
    auto step = unit_step(r, cur, diff > 0 ? Direction::Up : Direction::Down, cfg, &out.flow);
    cur = step.landed;
    out.steps.push_back(step);
    out.vertices.push_back({levels[k], cur});
  }
  return out;
}

// ---------------------------------------------------------------------------------------
// Export

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string trajectory_csv(const FlowTrajectory& tr) {
  std::ostringstream os;
  os << "t,u,x1,x2,V\n";
  for (const auto& s : tr.samples)
    os << num(s.t) << ',' << num(s.u) << ',' << num(s.x.x1) << ',' << num(s.x.x2) << ',' << num(s.V) << '\n';
  return os.str();
}

std::string events_csv(const FlowTrajectory& tr) {
  std::ostringstream os;
  os << "kind,u,x1,x2,dissipation\n";
  for (const auto& e : tr.events)
    os << to_string(e.kind) << ',' << num(e.u) << ',' << num(e.x.x1) << ',' << num(e.x.x2) << ',' << num(e.dissipation)
       << '\n';
  return os.str();
}

}  // namespace hystreal
