#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "hystreal/config.hpp"
#include "hystreal/geometry.hpp"
#include "hystreal/preisach.hpp"
#include "hystreal/verify.hpp"

using namespace hystreal;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void line(int id, const char* name, bool pass, double seconds, const std::string& detail) {
  std::printf("[%s] %2d %-28s %8.2f s  %s\n", pass ? "PASS" : "FAIL", id, name, seconds, detail.c_str());
  std::fflush(stdout);
  failures += !pass;
}

std::string fmt(const char* f, double a = 0, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

std::vector<int> walk(int from, int to) {
  std::vector<int> out;
  const int s = to > from ? 1 : -1;
  for (int k = from; k != to + s; k += s) out.push_back(k);
  return out;
}

void preisach_structure() {
  const auto t0 = Clock::now();
  const auto g = build_graph(4);
  const double t = since(t0);
  const bool ok = g.vertex_count() == 16 && g.level_sizes() == std::vector<int>{1, 4, 6, 4, 1} &&
                  validate_admissible(g).ok && t < 1.0;
  std::string sizes;
  for (int s : g.level_sizes()) sizes += (sizes.empty() ? "" : ",") + std::to_string(s);
  line(1, "preisach structure", ok, t, std::to_string(g.vertex_count()) + " vertices, levels " + sizes);
}

void oracle() {
  const auto t0 = Clock::now();
  bool ok = true;
  long mism = 0;
  for (int N = 1; N <= 6; ++N) {
    const auto rep = oracle_compare_preisach(N, 1000, 50, 1000 + N);
    ok = ok && rep.pass();
    mism += static_cast<long>(rep.checks.front().measured);
  }
  const double t = since(t0);
  line(2, "relay-bank oracle", ok && t < 30.0, t, fmt("N = 1..6, 1000 sequences of 50, %.0f mismatches", mism));
}

void return_point_memory() {
  const auto t0 = Clock::now();
  long loops = 0, failed = 0, literal = 0, literal_failed = 0;
  for (int N = 1; N <= 5; ++N) {
    const auto g = build_graph(N);
    for (const auto& level : g.levels)
      for (const auto& v : level) {
        const int i = g.level_of(v);
        for (int dir : {-1, 1}) {
          const int depth = dir < 0 ? i : N - i;
          for (int k = 1; k <= depth; ++k) {
            const std::string turn = run_input(g, v, walk(i, i + dir * k)).back().vertex;
            const int at = i + dir * k;
            for (int m = 1; m <= k; ++m) {
              auto loop = walk(at, at - dir * m);
              const auto back = walk(at - dir * m, at);
              loop.insert(loop.end(), back.begin() + 1, back.end());
              ++loops;
              failed += run_input(g, turn, loop).back().vertex != turn;
            }
          }
        }
        for (int m = 1; i + m <= N; ++m) {
          auto loop = walk(i, i + m);
          const auto back = walk(i + m, i);
          loop.insert(loop.end(), back.begin() + 1, back.end());
          ++literal;
          literal_failed += run_input(g, v, loop).back().vertex != v;
        }
      }
  }
  line(3, "return-point memory", failed == 0, since(t0),
       fmt("%.0f loops after a reversal closed; ", loops - failed) +
           fmt("up^m down^m from arbitrary states: %.0f of %.0f do not close", literal_failed, literal));
}

void transpositions(const Config& c) {
  const auto t0 = Clock::now();
  bool ok = true;
  double slowest = 0;
  int cases = 0;
  std::string bad;
  for (int N = 2; N <= 4; ++N)
    for (int j = 1; j < N; ++j) {
      const auto tc = Clock::now();
      Permutation p(N);
      for (int k = 0; k < N; ++k) p[k] = k + 1;
      std::swap(p[j - 1], p[j]);
      const auto sched = permutation_schedule(N, p, 0.0, 1.0, c.build);
      const auto rep = check_lemma1(sched, p, c.lemma1);
      const double t = since(tc);
      slowest = std::max(slowest, t);
      ++cases;
      if (!rep.pass() || t >= 120.0) {
        ok = false;
        bad += " " + rep.subject;
        if (!rep.pass()) std::fputs(rep.summary().c_str(), stderr);
      }
    }
  line(4, "transposition suite", ok, since(t0),
       fmt("%.0f cases, slowest %.1f s", cases, slowest) + (bad.empty() ? "" : "; failed:" + bad));
}

struct EndToEnd {
  bool ok = true;
  long edges = 0, edges_failed = 0;
  double least_dissipation = 1e300;
  double reversible_worst = 0;
  bool reversible_ok = true;
  int reversible_count = 0;
};

EndToEnd end_to_end(const Config& c) {
  const auto t0 = Clock::now();
  EndToEnd e;
  std::vector<std::pair<std::string, AdmissibleGraph>> graphs{{"relay", relay_graph()}};
  for (int N = 1; N <= 3; ++N) graphs.emplace_back("preisach " + std::to_string(N), build_graph(N));
  std::mt19937_64 rng(c.seed);
  for (int k = 0; k < c.random_graphs; ++k)
    graphs.emplace_back("random " + std::to_string(k), random_admissible_graph(rng, c.random_max_top, c.random_max_size));
  std::string bad;
  for (const auto& [name, g] : graphs) {
    try {
      const auto r = realize(g, c.build);
      const auto rep = check_realization(r, g, c.verify);
      for (const auto& ed : rep.edges) {
        ++e.edges;
        e.edges_failed += !ed.pass;
        e.least_dissipation = std::min(e.least_dissipation, ed.dissipation);
      }
      if (const auto* rv = rep.find("reversible excursions")) {
        ++e.reversible_count;
        e.reversible_ok = e.reversible_ok && rv->pass;
        e.reversible_worst = std::max(e.reversible_worst, rv->measured);
      }
      if (!rep.pass()) {
        e.ok = false;
        bad += " " + name;
        std::fprintf(stderr, "%s\n%s", name.c_str(), rep.summary().c_str());
      }
    } catch (const std::exception& ex) {
      e.ok = false;
      bad += " " + name;
      std::fprintf(stderr, "%s: %s\n", name.c_str(), ex.what());
    }
  }
  const double t = since(t0);
  line(5, "realizations end to end", e.ok && t < 1800.0, t,
       fmt("%.0f graphs, %.0f edges reproduced of %.0f", graphs.size(), e.edges - e.edges_failed, e.edges) +
           (bad.empty() ? "" : "; failed:" + bad));
  return e;
}

void mollifier(const Config& c) {
  const auto t0 = Clock::now();
  ScheduleBuilder builder(c.build);
  double axis = 0, fd_worst = 0, audit_margin = 1e300;
  int negative = 0, cases = 0;
  bool audits = true;
  std::mt19937_64 rng(5);
  for (int N = 2; N <= 4; ++N)
    for (int j = 1; j < N; ++j) {
      ++cases;
      const auto m = builder.smoothed(N, j);
      const auto& g = m->phi()->geometry();
      const double lo = g.r_minus - g.rho, hi = g.r_plus + g.rho;
      for (int k = 0; k < 100; ++k)
        axis = std::max(axis, std::abs(m->gradient({lo + (hi - lo) * (k + 0.5) / 100, 0.0}).x2));
      std::uniform_real_distribution<double> d1(lo, hi), d2(0.005, 2.0), d2s(-0.9, 0.9);
      for (int k = 0; k < 500; ++k) negative += !(m->gradient({d1(rng), d2(rng)}).x2 > 0);
      for (int used = 0; used < 60;) {
        const Vec2 p{d1(rng), d2s(rng)};
        const Vec2 gr = m->gradient(p);
        if (gr.norm() < 0.05) continue;
        fd_worst = std::max(fd_worst, (gr - fd_gradient(*m, p, 1e-5)).norm() / gr.norm());
        ++used;
      }
      const auto a = audit_phi_monotone_segments(*m->phi(), 200);
      audits = audits && a.ok;
      audit_margin = std::min(audit_margin, a.worst_margin);
    }
  const bool ok = axis < 1e-8 && negative == 0 && fd_worst < 1e-4 && audits;
  line(6, "smoothed field", ok, since(t0),
       fmt("%.0f fields; axis |dV/dx2| %.1e, ", cases, axis) + fmt("%.0f non-positive of 500 each, ", negative) +
           fmt("gradient rel. error %.1e, ", fd_worst) + fmt("segment audit margin %.1e", audit_margin));
}

void saddle_nodes() {
  const auto t0 = Clock::now();
  double d1 = 0, d2 = 0;
  bool counts = true;
  for (int N = 2; N <= 5; ++N) {
    const auto fam = build_sn_family(standard_multiwell(N), 0.0, 1.0, 0.5);
    const auto j = fam.jet(fam.x_merge(), fam.u_sn());
    d1 = std::max(d1, std::abs(j.d1));
    d2 = std::max(d2, std::abs(j.d2));
    counts = counts && family_critical_points(fam, fam.u_sn() - 1e-3).size() == static_cast<std::size_t>(2 * N - 1) &&
             family_critical_points(fam, fam.u_sn() + 1e-3).size() == static_cast<std::size_t>(2 * N - 3);
  }
  line(7, "saddle-node families", d1 < 1e-6 && d2 < 1e-6 && counts, since(t0),
       fmt("N = 2..5, |f'| %.1e, |f''| %.1e, ", d1, d2) + (counts ? "counts 2N-1 / 2N-3" : "critical counts wrong"));
}

void adiabatic_limit(const Config& c) {
  const auto t0 = Clock::now();
  const auto r = realize(relay_graph(), c.build);
  const std::vector<int> levels{0, 1, 0, 1, 0};
  const auto grad = adiabatic_sweep(r, "a", levels, c.sweep);
  std::vector<std::string> expect;
  std::vector<Vec2> rest;
  for (std::size_t k = 1; k < grad.vertices.size(); ++k) {
    expect.push_back(grad.vertices[k].vertex);
    rest.push_back(r.X[grad.vertices[k].level].at(grad.vertices[k].vertex));
  }
  auto so = c.second_order;
  so.gamma = 50;
  so.nu = 1e-3;
  const auto full = second_order_sim(r, "a", levels, so);
  so.nu /= 2;
  const auto half = second_order_sim(r, "a", levels, so);
  bool ok = full.visited == expect && half.visited == expect && full.rest_points.size() == rest.size() &&
            half.rest_points.size() == rest.size();
  double to_limit = 0, halving = 0;
  if (ok)
    for (std::size_t k = 0; k < rest.size(); ++k) {
      to_limit = std::max(to_limit, (full.rest_points[k] - rest[k]).norm());
      halving = std::max(halving, (full.rest_points[k] - half.rest_points[k]).norm());
    }
  ok = ok && to_limit < 1e-3 && halving < 1e-4;
  line(8, "adiabatic limit", ok, since(t0),
       fmt("relay, gamma 50, nu 1e-3: rest points within %.1e of the minima, halving nu moves them %.1e", to_limit,
           halving));
}

void dissipation_accounting(const EndToEnd& e) {
  const bool ok = e.edges > 0 && e.least_dissipation > 0 && e.reversible_ok && e.reversible_count > 0;
  line(9, "dissipation", ok, 0.0,
       fmt("least transition dissipation %.3e over %.0f edges; ", e.least_dissipation, e.edges) +
           fmt("%.0f reversible sweep sets without a fold, largest return error %.1e", e.reversible_count,
               e.reversible_worst));
}

void damped_cycle(const Config& c) {
  const auto t0 = Clock::now();
  const int top = 4, period = 8, cycles = 6;
  const double amp0 = 2.5, decay = 0.08;
  const auto wave = damped_oscillation(top, amp0, decay, period, cycles);
  auto levels = walk(0, wave.front());
  levels.insert(levels.end(), wave.begin() + 1, wave.end());
  const long lead = wave.front();
  const auto g = build_graph(top);
  const auto r = realize(g, c.build);
  const std::string start(top, '0');
  const auto sweep = adiabatic_sweep(r, start, levels, c.sweep);
  const bool agrees = sweep.vertices == run_input(g, start, levels);
  auto boundary = [&](int m) { return static_cast<long>(damped_oscillation(top, amp0, decay, period, m).size()) - 1 + lead; };
  const long a = boundary(cycles - 2), b = boundary(cycles - 1), e = boundary(cycles);
  bool closes = b - a == e - b;
  for (long k = 0; closes && k <= b - a; ++k) {
    const auto& p = sweep.vertices[a + k];
    const auto& q = sweep.vertices[b + k];
    closes = r.u_grid[p.level] == r.u_grid[q.level] &&
             staircase_output(from_bits(p.vertex)) == staircase_output(from_bits(q.vertex));
  }
  line(10, "damped oscillation cycle", agrees && closes, since(t0),
       fmt("N = 4, %.0f unit steps; last two periods of %.0f steps ", levels.size() - 1, e - b) +
           (closes ? "coincide" : "differ") + (agrees ? "" : "; realization departs from the graph"));
}

}  // namespace

int main() {
  Config c;
  sync_config(c);
  validate_config(c);
  preisach_structure();
  oracle();
  return_point_memory();
  transpositions(c);
  const auto e = end_to_end(c);
  mollifier(c);
  saddle_nodes();
  adiabatic_limit(c);
  dissipation_accounting(e);
  damped_cycle(c);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
