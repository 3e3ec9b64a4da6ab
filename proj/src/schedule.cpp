#include "hystreal/schedule.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>

#include "hystreal/errors.hpp"

namespace hystreal {

DeformationSchedule::DeformationSchedule(std::vector<DeformationSegment> segments) : segments_(std::move(segments)) {
  if (segments_.empty()) throw DomainError("DeformationSchedule: no segments");
}

bool DeformationSchedule::is_separable() const {
  return std::all_of(segments_.begin(), segments_.end(), [](const auto& s) { return s.family->is_separable(); });
}

int DeformationSchedule::segment_index(double u) const {
  auto it = std::lower_bound(segments_.begin(), segments_.end(), u,
                             [](const DeformationSegment& s, double v) { return s.u_b() < v; });
  if (it == segments_.end()) --it;
  return static_cast<int>(it - segments_.begin());
}

namespace {

std::vector<Vec2> audit_points(double x1_lo, double x1_hi) {
  std::vector<Vec2> pts;
  constexpr int n1 = 41;
  for (int i = 0; i < n1; ++i) {
    const double x1 = x1_lo + (x1_hi - x1_lo) * i / (n1 - 1);
    for (double x2 : {0.0, 0.013, -0.05, 0.17, -0.31, 0.6, 1.7}) pts.push_back({x1, x2});
  }
  return pts;
}

}  // namespace

std::vector<double> junction_mismatch(const std::vector<DeformationSegment>& segments, double x1_lo, double x1_hi) {
  std::vector<double> out;
  const auto pts = audit_points(x1_lo, x1_hi);
  for (std::size_t k = 0; k + 1 < segments.size(); ++k) {
    const auto& a = segments[k];
    const auto& b = segments[k + 1];
    double worst = 0.0;
    for (const auto& p : pts)
      worst = std::max(worst, std::abs(a.family->value(p, a.u_b()) - b.family->value(p, b.u_a())));
    out.push_back(worst);
  }
  return out;
}

DeformationSchedule concatenate(std::vector<DeformationSegment> segments, double tolerance, double x1_lo,
                                double x1_hi) {
  if (segments.empty()) throw DomainError("concatenate: no segments");
  for (std::size_t k = 0; k + 1 < segments.size(); ++k) {
    const double ub = segments[k].u_b(), ua = segments[k + 1].u_a();
    if (std::abs(ub - ua) > 1e-12 * std::max(1.0, std::abs(ub))) {
      char buf[200];
      std::snprintf(buf, sizeof buf, "concatenate: junction %zu (%s -> %s): u-intervals do not abut (%.17g vs %.17g)",
                    k, segments[k].label.c_str(), segments[k + 1].label.c_str(), segments[k].u_b(),
                    segments[k + 1].u_a());
      throw ConstructionError(buf);
    }
  }
  const auto mism = junction_mismatch(segments, x1_lo, x1_hi);
  for (std::size_t k = 0; k < mism.size(); ++k) {
    if (!(mism[k] <= tolerance)) {
      char buf[200];
      std::snprintf(buf, sizeof buf, "concatenate: junction %zu (%s -> %s) at u=%.9g: endpoint fields differ by %.3g", k,
                    segments[k].label.c_str(), segments[k + 1].label.c_str(), segments[k].u_b(), mism[k]);
      throw ConstructionError(buf);
    }
  }
  return DeformationSchedule(std::move(segments));
}

bool is_permutation(const Permutation& p) {
  std::vector<int> s(p);
  std::sort(s.begin(), s.end());
  for (std::size_t k = 0; k < s.size(); ++k)
    if (s[k] != static_cast<int>(k) + 1) return false;
  return true;
}

std::vector<int> bubble_decomposition(const Permutation& p) {
  if (!is_permutation(p)) throw DomainError("bubble_decomposition: not a permutation");
  std::vector<int> key(p);
  std::vector<int> swaps;
  const int n = static_cast<int>(key.size());
  for (bool changed = true; changed;) {
    changed = false;
    for (int j = 0; j + 1 < n; ++j) {
      if (key[j] > key[j + 1]) {
        std::swap(key[j], key[j + 1]);
        swaps.push_back(j + 1);
        changed = true;
      }
    }
  }
  return swaps;
}

// ---------------------------------------------------------------------------------------

ScheduleBuilder::ScheduleBuilder(BuildOptions opts) : opts_(opts) {
  if (opts_.fast_path) opts_.mollify.self_check = false;
}

const Potential1D& ScheduleBuilder::standard(int count) {
  auto it = standard_.find(count);
  if (it == standard_.end()) it = standard_.emplace(count, standard_multiwell(count)).first;
  return it->second;
}

std::shared_ptr<const MollifiedField> ScheduleBuilder::smoothed(int count, int j) {
  const auto key = std::make_pair(count, j);
  if (auto it = smoothed_.find(key); it != smoothed_.end()) return it->second;
  const auto& f = standard(count);
  const auto geom = fit_geometry(f, j, opts_.geometry);
  auto phi = build_phi(build_tilde(f, geom), geom);
  auto m = mollify(phi, geom.rho, opts_.mollify);
  smoothed_.emplace(key, m);
  return m;
}

std::vector<DeformationSegment> ScheduleBuilder::elementary_transposition(int count, int j, double u_a, double u_b) {
  if (count < 2 || j < 1 || j >= count) throw DomainError("elementary_transposition: need 1 <= j <= N-1");
  if (!(u_a < u_b)) throw DomainError("elementary_transposition: need u_a < u_b");
  const auto& f = standard(count);
  const auto geom = fit_geometry(f, j, opts_.geometry);
  auto m = smoothed(count, j);
  const auto& f_tilde = m->phi()->profile();
  const double h = (u_b - u_a) / 4;
  const double v1 = u_a + h, v2 = u_a + 2 * h, v3 = u_a + 3 * h;
  auto V0 = separable(f);
  auto Vt = separable(f_tilde);
  auto rot = rotation_family(m, geom, v2, v3);
  auto rotated = std::make_shared<FrozenField>(rot, v3);
  char tag[48];
  std::snprintf(tag, sizeof tag, "(N=%d, j=%d)", count, j);
  return {{linear_blend(V0, Vt, u_a, v1), std::string("lower maximum ") + tag},
          {linear_blend(Vt, m, v1, v2), std::string("smooth exchange field ") + tag},
          {rot, std::string("rotate ") + tag},
          {linear_blend(rotated, V0, v3, u_b), std::string("restore ") + tag}};
}

std::vector<DeformationSegment> ScheduleBuilder::permutation_segments(int count, const Permutation& p, double u_a,
                                                                      double u_b) {
  if (static_cast<int>(p.size()) != count) throw DomainError("permutation_schedule: size does not match the minima");
  const auto swaps = bubble_decomposition(p);
  if (swaps.empty()) {
    return {{std::make_shared<ConstantFamily>(separable(standard(count)), u_a, u_b), "hold"}};
  }
  std::vector<DeformationSegment> out;
  const double h = (u_b - u_a) / static_cast<double>(swaps.size());
  for (std::size_t k = 0; k < swaps.size(); ++k) {
    const double a = u_a + h * k, b = k + 1 == swaps.size() ? u_b : u_a + h * (k + 1);
    auto seg = elementary_transposition(count, swaps[k], a, b);
    out.insert(out.end(), seg.begin(), seg.end());
  }
  return out;
}

DeformationSchedule elementary_transposition(const Potential1D& standard_f, int j, double u_a, double u_b,
                                             const BuildOptions& opts) {
  const int count = static_cast<int>(standard_f.minima().size());
  ScheduleBuilder b(opts);
  if (!(b.standard(count).knots().size() == standard_f.knots().size()))
    throw DomainError("elementary_transposition: expects the standard potential with minima at 1..N");
  return concatenate(b.elementary_transposition(count, j, u_a, u_b));
}

DeformationSchedule permutation_schedule(int count, const Permutation& p, double u_a, double u_b,
                                         const BuildOptions& opts) {
  ScheduleBuilder b(opts);
  return concatenate(b.permutation_segments(count, p, u_a, u_b));
}

}  // namespace hystreal
