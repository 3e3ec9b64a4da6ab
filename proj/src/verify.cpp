#include "hystreal/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "hystreal/errors.hpp"
#include "hystreal/multiwell.hpp"
#include "hystreal/preisach.hpp"

namespace hystreal {

using nlohmann::json;

bool VerificationReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; }) &&
         std::all_of(edges.begin(), edges.end(), [](const auto& e) { return e.pass; });
}

void VerificationReport::add(std::string name, bool ok, double measured, double tolerance, std::string detail) {
  checks.push_back({std::move(name), ok, measured, tolerance, std::move(detail)});
}

const CheckEntry* VerificationReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

std::string VerificationReport::to_json() const {
  json j;
  j["subject"] = subject;
  j["pass"] = pass();
  json cs = json::array();
  for (const auto& c : checks)
    cs.push_back({{"name", c.name},
                  {"pass", c.pass},
                  {"measured", c.measured},
                  {"tolerance", c.tolerance},
                  {"detail", c.detail}});
  j["checks"] = cs;
  json es = json::array();
  for (const auto& e : edges)
    es.push_back({{"direction", to_string(e.direction)},
                  {"level", e.level},
                  {"source", e.source},
                  {"target", e.target},
                  {"landed", e.landed},
                  {"u_fold", e.u_fold},
                  {"distance", e.distance},
                  {"dissipation", e.dissipation},
                  {"pass", e.pass},
                  {"detail", e.detail}});
  j["edges"] = es;
  return j.dump(2);
}

std::string VerificationReport::summary() const {
  std::ostringstream os;
  char line[256];
  os << subject << ": " << (pass() ? "PASS" : "FAIL") << "\n";
  for (const auto& c : checks) {
    std::snprintf(line, sizeof line, "  %-4s %-34s %12.4g  tol %-10.3g %s\n", c.pass ? "ok" : "FAIL", c.name.c_str(),
                  c.measured, c.tolerance, c.detail.c_str());
    os << line;
  }
  if (!edges.empty()) {
    int bad = 0;
    for (const auto& e : edges) bad += e.pass ? 0 : 1;
    std::snprintf(line, sizeof line, "  edges: %zu simulated, %d failed\n", edges.size(), bad);
    os << line;
    for (const auto& e : edges) {
      std::snprintf(line, sizeof line, "    %-4s %-12s %-4s -> %-12s landed %-12s dist %9.2e diss %10.4g %s\n",
                    e.pass ? "ok" : "FAIL", e.source.c_str(), to_string(e.direction).c_str(), e.target.c_str(),
                    e.landed.c_str(), e.distance, e.dissipation, e.detail.c_str());
      os << line;
    }
  }
  return os.str();
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

LambdaField frozen(const FieldFamily& fam, double u) {
  return LambdaField([&fam, u](Vec2 x) { return fam.value(x, u); }, [&fam, u](Vec2 x) { return fam.gradient(x, u); });
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

}  // namespace

std::vector<double> axis_minima(const FieldFamily& fam, double u, double lo, double hi, double step) {
  auto d1 = [&](double x) { return fam.axis_d1(x, u); };
  auto d2 = [&](double x) { return (fam.axis_d1(x + 1e-6, u) - fam.axis_d1(x - 1e-6, u)) / 2e-6; };
  auto v = [&](double x) { return fam.value({x, 0.0}, u); };
  std::vector<double> out;
  for (const auto& c : scan_critical_points(d1, d2, v, lo, hi, step))
    if (c.kind == CriticalKind::Minimum) out.push_back(c.x);
  return out;
}

// ---------------------------------------------------------------------------------------
// Realization

VerificationReport check_realization(const Realization& r, const AdmissibleGraph& g, const VerifyConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  VerificationReport rep;
  rep.subject = "realization";
  if (!(r.graph == g)) {
    rep.add("graph matches realization", false, 0, 0, "the realization was built for another graph");
    rep.seconds = seconds_since(t0);
    return rep;
  }
  const auto& V = *r.schedule;
  int widest = 1;
  for (int m : r.minima_at_grid) widest = std::max(widest, m);
  for (int m : r.minima_at_mid) widest = std::max(widest, m);
  const auto outer = standard_multiwell(widest);
  const double w_lo = outer.window_lo() - 0.1, w_hi = outer.window_hi() + 0.1;

  // (i) far field
  {
    std::vector<double> us(r.u_grid);
    us.insert(us.end(), r.u_mid.begin(), r.u_mid.end());
    for (const auto& s : V.segments()) us.push_back(0.5 * (s.u_a() + s.u_b()));
    const double R = std::max(std::abs(w_lo), std::abs(w_hi)) + 2.0;
    double far = 0, bounded = 0, growth = HUGE_VAL;
    int outside = 0;
    for (double u : us) {
      for (int k = 0; k < cfg.ring_samples; ++k) {
        const double a = 2 * std::numbers::pi * (k + 0.5) / cfg.ring_samples;
        const Vec2 x{R * std::cos(a), R * std::sin(a)};
        const double e = std::abs(V.value(x, u) - (x.x1 * x.x1 + x.x2 * x.x2));
        bounded = std::max(bounded, e);
        if (x.x1 < w_lo || x.x1 > w_hi) {
          far = std::max(far, e);
          ++outside;
        }
      }
      for (int k = 0; k < cfg.rays; ++k) {
        const double a = 2 * std::numbers::pi * (k + 0.25) / cfg.rays;
        const Vec2 d{std::cos(a), std::sin(a)};
        double prev = V.value(d * R, u);
        for (int m = 1; m <= cfg.ray_samples; ++m) {
          const double v = V.value(d * (R * (1.0 + static_cast<double>(m) / cfg.ray_samples)), u);
          growth = std::min(growth, v - prev);
          prev = v;
        }
      }
    }
    rep.add("far-field identity", outside > 0 && far <= cfg.far_tolerance, far, cfg.far_tolerance,
            fmt("ring radius %.3g, %.0f samples outside the window, |V-|x|^2| <= %.3g on the ring", R, outside,
                bounded));
    rep.add("radial growth", growth > 0, growth, 0, fmt("smallest increment along %.0f rays", cfg.rays));
  }

  // (ii) minima at each u^i against X_i
  {
    double worst = 0, worst_grad = 0, least_curv = HUGE_VAL;
    bool bijection = true, off_axis = true;
    std::string why;
    for (int i = 0; i <= g.top_level(); ++i) {
      const double u = r.u_grid[i];
      const auto f = frozen(V, u);
      std::vector<Vec2> found;
      for (double x : axis_minima(V, u, w_lo, w_hi, cfg.axis_step)) {
        const Vec2 p{x, 0.0};
        worst_grad = std::max(worst_grad, f.gradient(p).norm());
        least_curv = std::min(least_curv, fd_hessian(f, p).min_eigenvalue());
        found.push_back(p);
      }
      for (double x1 = w_lo; x1 <= w_hi; x1 += 0.05)
        for (double x2 : {0.02, 0.1, 0.3, 0.7, 1.5, 3.0})
          for (double s : {1.0, -1.0})
            if (!(s * f.gradient({x1, s * x2}).x2 > 0)) {
              off_axis = false;
              why += fmt("d/dx2 has the wrong sign at (%.3g, %.3g), u = %.6g; ", x1, s * x2, u);
            }
      if (found.size() != g.levels[i].size()) {
        bijection = false;
        why += fmt("level %.0f: %.0f minima for %.0f vertices; ", i, static_cast<double>(found.size()),
                   static_cast<double>(g.levels[i].size()));
        continue;
      }
      std::vector<bool> used(found.size(), false);
      for (const auto& v : g.levels[i]) {
        const auto it = r.X[i].find(v);
        if (it == r.X[i].end()) {
          bijection = false;
          why += "no X image for " + v + "; ";
          continue;
        }
        std::size_t best = 0;
        double d = HUGE_VAL;
        for (std::size_t k = 0; k < found.size(); ++k)
          if ((found[k] - it->second).norm() < d) {
            d = (found[k] - it->second).norm();
            best = k;
          }
        worst = std::max(worst, d);
        if (d > cfg.tolerance || used[best]) {
          bijection = false;
          why += "X image of " + v + fmt(" is %.3g away from the nearest minimum; ", d);
        }
        used[best] = true;
      }
    }
    rep.add("minima match X", bijection, worst, cfg.tolerance, why);
    rep.add("minima are critical", worst_grad <= cfg.tolerance, worst_grad, cfg.tolerance, "|grad V| at the scanned minima");
    rep.add("minima are nondegenerate", least_curv > 0, least_curv, 0, "smallest Hessian eigenvalue");
    rep.add("no off-axis critical points", off_axis, off_axis ? 0 : 1, 0, why.empty() ? "" : why);
  }

  // (iii) one simulated step per edge
  const int n = g.top_level();
  for (int i = 0; i <= n; ++i) {
    for (const auto& v : g.levels[i]) {
      for (Direction d : {Direction::Down, Direction::Up}) {
        if ((d == Direction::Up && i == n) || (d == Direction::Down && i == 0)) continue;
        const int j = d == Direction::Up ? i + 1 : i - 1;
        EdgeOutcome e;
        e.direction = d;
        e.level = i;
        e.source = v;
        e.target = transition(g, v, d);
        try {
          const auto o = unit_step(r, v, d, cfg.sweep);
          e.landed = o.landed;
          e.u_fold = o.u_fold;
          e.dissipation = o.dissipation;
          e.distance = (o.x_final - r.X[j].at(e.target)).norm();
          e.pass = o.landed == e.target && e.distance <= cfg.tolerance && o.folded && o.dissipation > 0;
          if (!o.folded) e.detail = "no saddle-node transition";
          else if (!(o.dissipation > 0)) e.detail = "dissipation not positive";
        } catch (const std::exception& ex) {
          e.detail = ex.what();
        }
        rep.edges.push_back(e);
      }
    }
  }
  std::sort(rep.edges.begin(), rep.edges.end(), [](const auto& a, const auto& b) {
    return std::tie(a.source, a.direction) < std::tie(b.source, b.direction);
  });

  // transition records against the edge set
  {
    std::string why;
    int bad = 0;
    std::map<std::pair<std::string, Direction>, int> seen;
    for (const auto& t : r.transitions) {
      ++seen[{t.source, t.direction}];
      const auto& edges = t.direction == Direction::Up ? g.up : g.down;
      const auto it = edges.find(t.source);
      if (it == edges.end() || it->second != t.target) {
        ++bad;
        why += "record " + t.source + " -> " + t.target + " (" + to_string(t.direction) + ") is not an edge; ";
      }
    }
    for (const auto& [s, t] : g.up)
      if (seen[{s, Direction::Up}] != 1) {
        ++bad;
        why += "edge " + s + " -> " + t + " (up) has " + std::to_string(seen[{s, Direction::Up}]) + " records; ";
      }
    for (const auto& [s, t] : g.down)
      if (seen[{s, Direction::Down}] != 1) {
        ++bad;
        why += "edge " + s + " -> " + t + " (down) has " + std::to_string(seen[{s, Direction::Down}]) + " records; ";
      }
    rep.add("transition records", bad == 0, bad, 0, why);
  }

  // reversible excursions u^i -> u^{i +- 1/2} -> u^i
  {
    double worst = 0;
    bool ok = true;
    std::string why;
    for (int i = 0; i <= n; ++i) {
      if (n == 0) break;
      const double um = i < n ? r.u_mid[i] : r.u_mid[i - 1];
      for (const auto& v : g.levels[i]) {
        try {
          const Vec2 x0 = r.X[i].at(v);
          const auto a = track_equilibrium(V, x0, r.u_grid[i], um, cfg.sweep);
          const auto b = a.fold ? a : track_equilibrium(V, a.x_last, um, r.u_grid[i], cfg.sweep);
          if (a.fold || b.fold) {
            ok = false;
            why += "fold during the excursion from " + v + "; ";
            continue;
          }
          worst = std::max(worst, (b.x_last - x0).norm());
        } catch (const std::exception& ex) {
          ok = false;
          why += v + ": " + ex.what() + "; ";
        }
      }
    }
    rep.add("reversible excursions", ok && worst <= cfg.tolerance, worst, cfg.tolerance,
            why.empty() ? "no transition, zero dissipation" : why);
  }
  rep.seconds = seconds_since(t0);
  return rep;
}

// ---------------------------------------------------------------------------------------
// Transpositions

VerificationReport check_lemma1(const DeformationSchedule& sched, const Permutation& perm, const Lemma1Config& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  VerificationReport rep;
  rep.subject = "permutation (";
  for (std::size_t k = 0; k < perm.size(); ++k) rep.subject += (k ? "," : "") + std::to_string(perm[k]);
  rep.subject += ")";
  if (!is_permutation(perm)) {
    rep.add("permutation", false, 0, 0, "not a permutation");
    return rep;
  }
  const int N = static_cast<int>(perm.size());
  const double ua = sched.u_lo(), ub = sched.u_hi();
  const auto f = standard_multiwell(N);
  const double lo = f.window_lo() - 0.5, hi = f.window_hi() + 0.5;

  {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> d1(lo, hi), d2(-2.0, 2.0);
    double worst = 0;
    for (int k = 0; k < cfg.endpoint_samples; ++k) {
      const Vec2 x{d1(rng), d2(rng)};
      worst = std::max(worst, std::abs(sched.value(x, ua) - sched.value(x, ub)));
    }
    rep.add("endpoint identity", worst <= cfg.endpoint_tolerance, worst, cfg.endpoint_tolerance,
            fmt("%.0f samples", cfg.endpoint_samples));
  }

  std::vector<double> us(cfg.u_points);
  for (int m = 0; m < cfg.u_points; ++m) us[m] = m + 1 == cfg.u_points ? ub : ua + (ub - ua) * m / (cfg.u_points - 1);

  // continuation of each minimum across the u-grid
  std::vector<std::vector<Vec2>> tracks(N);
  bool tracks_ok = true;
  double jump = 0;
  std::string why;
  for (int k = 0; k < N; ++k) {
    auto start = newton_minimum(frozen(sched, ua), {k + 1.0, 0.0}, cfg.sweep);
    if (!start.converged) {
      tracks_ok = false;
      why += fmt("no minimum near (%.0f, 0) at u_-; ", k + 1);
      break;
    }
    Vec2 x = start.x;
    tracks[k].push_back(x);
    for (int m = 1; m < cfg.u_points && tracks_ok; ++m) {
      auto nr = newton_minimum(frozen(sched, us[m]), x, cfg.sweep);
      Vec2 next = nr.x;
      if (!nr.converged || (nr.x - x).norm() > cfg.sweep.max_jump) {
        const auto tr = track_equilibrium(sched, x, us[m - 1], us[m], cfg.sweep);
        if (tr.fold) {
          tracks_ok = false;
          why += fmt("minimum %.0f lost near u = %.9g; ", k + 1, tr.u_fold);
          break;
        }
        next = tr.x_last;
      }
      jump = std::max(jump, (next - x).norm());
      x = next;
      tracks[k].push_back(x);
    }
  }
  double lift = 0;
  for (const auto& t : tracks)
    for (const auto& p : t) lift = std::max(lift, std::abs(p.x2));
  rep.add("continuous tracks", tracks_ok && jump <= cfg.sweep.max_jump, jump, cfg.sweep.max_jump,
          tracks_ok ? fmt("largest step between u-grid points, largest |x2| on a track %.3g", lift) : why);

  // number of minima: tracked ones plus any other found from sign changes of the gradient
  if (tracks_ok) {
    int worst_count = N;
    double worst_u = ua;
    double least_curv = HUGE_VAL, separation = HUGE_VAL;
    bool outward = true;
    const double h = cfg.grid_spacing, bx = cfg.box_x2;
    const double x1a = 0.5, x1b = N + 0.5;
    const int n1 = static_cast<int>(std::ceil((x1b - x1a) / h)), n2 = static_cast<int>(std::ceil(2 * bx / h));
    for (int m = 0; m < cfg.u_points; ++m) {
      const auto F = frozen(sched, us[m]);
      std::vector<Vec2> minima;
      for (int k = 0; k < N; ++k) {
        minima.push_back(tracks[k][m]);
        least_curv = std::min(least_curv, fd_hessian(F, tracks[k][m]).min_eigenvalue());
        for (int l = 0; l < k; ++l) separation = std::min(separation, (tracks[k][m] - tracks[l][m]).norm());
      }
      std::vector<Vec2> grad((n1 + 1) * (n2 + 1));
      auto at = [&](int a, int b) { return Vec2{x1a + (x1b - x1a) * a / n1, -bx + 2 * bx * b / n2}; };
      for (int a = 0; a <= n1; ++a)
        for (int b = 0; b <= n2; ++b) grad[a * (n2 + 1) + b] = F.gradient(at(a, b));
      for (int a = 0; a < n1; ++a)
        for (int b = 0; b < n2; ++b) {
          const Vec2 c[4] = {grad[a * (n2 + 1) + b], grad[(a + 1) * (n2 + 1) + b], grad[a * (n2 + 1) + b + 1],
                             grad[(a + 1) * (n2 + 1) + b + 1]};
          auto changes = [&](double Vec2::*comp) {
            bool neg = false, pos = false;
            for (const auto& v : c) (v.*comp <= 0 ? neg : pos) = true;
            return neg && pos;
          };
          if (!changes(&Vec2::x1) || !changes(&Vec2::x2)) continue;
          const Vec2 mid = (at(a, b) + at(a + 1, b + 1)) * 0.5;
          const auto nr = newton_minimum(F, mid, cfg.sweep);
          if (!nr.converged || (nr.x - mid).norm() > 2 * h) continue;
          const bool known = std::any_of(minima.begin(), minima.end(), [&](Vec2 p) { return (p - nr.x).norm() < 1e-5; });
          if (!known) minima.push_back(nr.x);
        }
      // outside the box the gradient points away from it
      for (double x1 = f.window_lo(); x1 <= f.window_hi(); x1 += 0.25)
        for (double x2 = -11.0; x2 <= 11.0; x2 += 0.25) {
          const Vec2 p{x1, x2};
          const Vec2 q{std::clamp(x1, x1a, x1b), std::clamp(x2, -bx, bx)};
          if ((p - q).norm() == 0) continue;
          if (!(F.gradient(p).dot(p - q) > 0)) {
            outward = false;
            why += fmt("gradient points into the search box at (%.3g, %.3g), u = %.9g; ", x1, x2, us[m]);
          }
        }
      if (static_cast<int>(minima.size()) != N && worst_count == N) {
        worst_count = static_cast<int>(minima.size());
        worst_u = us[m];
      }
    }
    rep.add("minima count constant", worst_count == N, worst_count, N,
            worst_count == N ? fmt("%.0f u-points", cfg.u_points) : fmt("%.0f minima at u = %.9g", worst_count, worst_u));
    rep.add("no minima outside the search box", outward, outward ? 0 : 1, 0, outward ? "" : why);
    rep.add("tracked minima nondegenerate", least_curv > 0, least_curv, 0, "smallest Hessian eigenvalue");
    rep.add("tracked minima distinct", separation > 1e-3, separation, 1e-3, "smallest distance between tracks");

    double worst = 0;
    for (int k = 0; k < N; ++k)
      worst = std::max(worst, (tracks[k].back() - Vec2{static_cast<double>(perm[k]), 0.0}).norm());
    rep.add("terminal permutation", worst <= cfg.terminal_tolerance, worst, cfg.terminal_tolerance,
            "|x_k(u_+) - (p_k, 0)|");
  }
  rep.seconds = seconds_since(t0);
  return rep;
}

// ---------------------------------------------------------------------------------------
// Relay bank oracle

VerificationReport oracle_compare_preisach(int N, int trials, int seq_len, std::uint64_t seed, int max_N) {
  const auto t0 = std::chrono::steady_clock::now();
  if (N < 1 || N > max_N) throw DomainError("oracle_compare_preisach: N must lie in [1, " + std::to_string(max_N) + "]");
  if (trials < 1 || seq_len < 1) throw DomainError("oracle_compare_preisach: need trials >= 1 and seq_len >= 1");
  VerificationReport rep;
  rep.subject = "relay bank vs graph, N = " + std::to_string(N);
  const auto g = build_graph(N);
  std::mt19937_64 rng(seed);
  long mismatches = 0, steps = 0;
  std::string first;
  for (int t = 0; t < trials; ++t) {
    const int l0 = std::uniform_int_distribution<int>(0, N)(rng);
    const auto& lev = g.levels[l0];
    const auto start = lev[std::uniform_int_distribution<std::size_t>(0, lev.size() - 1)(rng)];
    std::vector<int> levels{l0};
    for (int k = 1; k < seq_len; ++k) {
      const int cur = levels.back();
      int next = std::bernoulli_distribution(0.5)(rng) ? cur + 1 : cur - 1;
      if (next < 0) next = 1;
      if (next > N) next = N - 1;
      levels.push_back(next);
    }
    const auto path = run_input(g, start, levels);
    auto bank = bank_of_state(from_bits(start));
    for (std::size_t k = 0; k < levels.size(); ++k) {
      if (k > 0) bank = bank_step(bank, static_cast<double>(levels[k]));
      ++steps;
      const auto state = to_bits(state_of_bank(bank));
      const bool same = state == path[k].vertex && bank_output(bank) == staircase_output(from_bits(path[k].vertex));
      if (!same) {
        if (mismatches == 0)
          first = "trial " + std::to_string(t) + " step " + std::to_string(k) + ": graph " + path[k].vertex +
                  ", bank " + state;
        ++mismatches;
      }
    }
  }
  rep.add("mismatches", mismatches == 0, static_cast<double>(mismatches), 0,
          std::to_string(trials) + " trials, " + std::to_string(steps) + " compared states" +
              (first.empty() ? "" : "; first: " + first));
  rep.seconds = seconds_since(t0);
  return rep;
}

AdmissibleGraph random_admissible_graph(std::mt19937_64& rng, int max_top, int max_size) {
  if (max_top < 1 || max_size < 1) throw DomainError("random_admissible_graph: need max_top >= 1 and max_size >= 1");
  AdmissibleGraph g;
  const int n = std::uniform_int_distribution<int>(1, max_top)(rng);
  for (int i = 0; i <= n; ++i) {
    const int size = std::uniform_int_distribution<int>(1, max_size)(rng);
    std::vector<std::string> level;
    for (int k = 0; k < size; ++k) level.push_back("v" + std::to_string(i) + "_" + std::to_string(k));
    g.levels.push_back(level);
    g.input_values.push_back(i);
  }
  auto pick = [&](const std::vector<std::string>& level) {
    return level[std::uniform_int_distribution<std::size_t>(0, level.size() - 1)(rng)];
  };
  for (int i = 0; i <= n; ++i)
    for (const auto& v : g.levels[i]) {
      if (i < n) g.up[v] = pick(g.levels[i + 1]);
      if (i > 0) g.down[v] = pick(g.levels[i - 1]);
    }
  return g;
}

}  // namespace hystreal
