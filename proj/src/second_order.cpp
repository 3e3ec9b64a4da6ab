#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

#include <boost/numeric/odeint.hpp>

#include "hystreal/errors.hpp"
#include "hystreal/flow.hpp"

namespace hystreal {

namespace odeint = boost::numeric::odeint;

std::vector<std::string> SecondOrderConfig::warnings() const {
  std::vector<std::string> w;
  if (gamma < 10.0) w.push_back("friction gamma is not large; the gradient limit may not apply");
  if (mu() > 0.1) w.push_back("mu = gamma * nu exceeds 0.1; the input is not slow");
  return w;
}

InputPath::InputPath(const Realization& r, const std::vector<int>& levels, double dwell) : dwell_(dwell) {
  if (levels.empty()) throw DomainError("InputPath: empty input");
  if (!(dwell >= 0.0 && dwell < 1.0)) throw DomainError("InputPath: dwell must lie in [0, 1)");
  const int n = r.graph.top_level();
  for (int l : levels)
    if (l < 0 || l > n) throw DomainError("InputPath: level out of range");
  for (std::size_t k = 1; k < levels.size(); ++k) {
    const double a = r.u_grid[levels[k - 1]], b = r.u_grid[levels[k]];
    if (std::abs(levels[k] - levels[k - 1]) > 1) throw DomainError("InputPath: input must move by unit steps");
    Step s;
    s.knots.push_back(a);
    if (a != b) {
      std::vector<double> inner;
      for (const auto& seg : r.schedule->segments()) {
        const double e = seg.u_b();
        if (e > std::min(a, b) && e < std::max(a, b)) inner.push_back(e);
      }
      if (b < a) std::reverse(inner.begin(), inner.end());
      s.knots.insert(s.knots.end(), inner.begin(), inner.end());
    }
    s.knots.push_back(b);
    steps_.push_back(std::move(s));
  }
}

double InputPath::u(double theta) const {
  if (steps_.empty()) return 0.0;
  if (theta <= 0.0) return steps_.front().knots.front();
  const int k = std::min(static_cast<int>(theta), static_cast<int>(steps_.size()) - 1);
  const auto& kn = steps_[k].knots;
  const double s = (theta - k) / (1.0 - dwell_);
  if (s >= 1.0) return kn.back();
  const double pos = s * (kn.size() - 1);
  const int i = static_cast<int>(pos);
  return kn[i] + (pos - i) * (kn[i + 1] - kn[i]);
}

namespace {

using State = std::array<double, 4>;

// x'' + gamma x' + grad(x, t) = 0 from rest at x0, observed at `times`
template <class Grad, class U>
void integrate_damped(const Grad& grad, const U& u_of_t, Vec2 x0, double scale, const std::vector<double>& times,
                      const SecondOrderConfig& cfg, std::vector<SecondOrderSample>& out, long& steps) {
  auto rhs = [&](const State& s, State& ds, double t) {
    const Vec2 g = grad(Vec2{s[0], s[1]}, t);
    ds[0] = s[2];
    ds[1] = s[3];
    ds[2] = -cfg.gamma * s[2] - g.x1;
    ds[3] = -cfg.gamma * s[3] - g.x2;
    ++steps;
  };
  auto observer = [&](const State& st, double t) {
    if (!std::all_of(st.begin(), st.end(), [](double v) { return std::isfinite(v); }) ||
        std::hypot(st[2], st[3]) > 1e3 || std::hypot(st[0], st[1]) > 1e3 + scale) {
      char buf[120];
      std::snprintf(buf, sizeof buf, "second_order_sim: energy blow-up at t = %.6g; use a smaller step", t);
      throw NumericalError(buf);
    }
    const double theta = cfg.nu * t;
    out.push_back({t, t / cfg.gamma, theta, u_of_t(t), {st[0], st[1]}, {st[2], st[3]}});
  };
  State s{x0.x1, x0.x2, 0.0, 0.0};
  auto stepper = odeint::make_controlled(cfg.atol, cfg.rtol, odeint::runge_kutta_dopri5<State>());
  odeint::integrate_times(stepper, rhs, s, times.begin(), times.end(), 1e-3, observer);
}

}  // namespace

SecondOrderResult second_order_sim(const Realization& r, const std::string& start, const std::vector<int>& levels,
                                   const SecondOrderConfig& cfg, int samples_per_step) {
  if (!(cfg.gamma > 0 && cfg.nu > 0)) throw DomainError("second_order_sim: need gamma > 0 and nu > 0");
  if (samples_per_step < 1) throw DomainError("second_order_sim: need at least one sample per step");
  if (levels.empty() || r.graph.level_of(start) != levels[0])
    throw DomainError("second_order_sim: start vertex is not on the first level");
  const InputPath path(r, levels, cfg.dwell);
  const auto& V = *r.schedule;
  SecondOrderResult out;

  const Vec2 x0 = r.X[levels[0]].at(start);
  const double E0 = V.value(x0, path.u(0.0));
  std::vector<double> times;
  const int steps = static_cast<int>(path.theta_end());
  for (int k = 0; k <= steps * samples_per_step; ++k) times.push_back(static_cast<double>(k) / samples_per_step / cfg.nu);

  integrate_damped([&](Vec2 x, double t) { return V.gradient(x, path.u(cfg.nu * t)); },
                   [&](double t) { return path.u(cfg.nu * t); }, x0, std::abs(E0), times, cfg, out.samples, out.steps);

  for (int k = 1; k <= steps; ++k) {
    const auto& smp = out.samples[static_cast<std::size_t>(k) * samples_per_step];
    out.rest_points.push_back(smp.x);
    out.visited.push_back(vertex_at(r, levels[k], smp.x, 1e-3));
  }
  return out;
}

std::vector<SecondOrderSample> damped_relaxation(const ScalarField2D& f, Vec2 x0, double t_end,
                                                 const SecondOrderConfig& cfg, int samples) {
  if (!(cfg.gamma > 0) || !(t_end > 0) || samples < 1)
    throw DomainError("damped_relaxation: need gamma > 0, t_end > 0 and samples >= 1");
  std::vector<double> times;
  for (int k = 0; k <= samples; ++k) times.push_back(t_end * k / samples);
  std::vector<SecondOrderSample> out;
  long steps = 0;
  integrate_damped([&](Vec2 x, double) { return f.gradient(x); }, [](double) { return 0.0; }, x0,
                   std::abs(f.value(x0)), times, cfg, out, steps);
  return out;
}

}  // namespace hystreal
