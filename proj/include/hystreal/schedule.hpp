#pragma once

// Piecewise-in-u deformations V(x, u), the exchange of neighbouring minima, permutations
// of minima, and the realization of an admissible graph.

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "hystreal/field.hpp"
#include "hystreal/geometry.hpp"
#include "hystreal/graph.hpp"

namespace hystreal {

struct DeformationSegment {
  FamilyPtr family;
  std::string label;

  double u_a() const { return family->u_lo(); }
  double u_b() const { return family->u_hi(); }
};

/// Ordered segments with matching endpoint fields; evaluation dispatches on u.
class DeformationSchedule final : public FieldFamily {
 public:
  DeformationSchedule() = default;
  explicit DeformationSchedule(std::vector<DeformationSegment> segments);

  double value(Vec2 x, double u) const override { return segment_at(u).family->value(x, u); }
  Vec2 gradient(Vec2 x, double u) const override { return segment_at(u).family->gradient(x, u); }
  double u_lo() const override { return segments_.front().u_a(); }
  double u_hi() const override { return segments_.back().u_b(); }
  std::string kind() const override { return "schedule"; }
  bool is_separable() const override;
  double axis_d1(double x1, double u) const override { return segment_at(u).family->axis_d1(x1, u); }

  bool empty() const { return segments_.empty(); }
  const std::vector<DeformationSegment>& segments() const { return segments_; }
  /// Index of the segment containing u; at a junction the earlier segment.
  int segment_index(double u) const;
  const DeformationSegment& segment_at(double u) const { return segments_[segment_index(u)]; }

 private:
  std::vector<DeformationSegment> segments_;
};

/// Largest |V_k(x, u_b) - V_{k+1}(x, u_a)| over the audit samples, for each junction.
std::vector<double> junction_mismatch(const std::vector<DeformationSegment>& segments, double x1_lo, double x1_hi);

/// Glues segments; throws ConstructionError naming the junction when the u-intervals do not
/// abut or the endpoint fields differ by more than `tolerance` at the audit samples.
DeformationSchedule concatenate(std::vector<DeformationSegment> segments, double tolerance = 1e-9,
                                double x1_lo = -2.0, double x1_hi = 8.0);

/// (j_1, ..., j_N): the minimum at position k ends at position j_k (1-based).
using Permutation = std::vector<int>;

bool is_permutation(const Permutation& p);
/// Adjacent swaps (j means positions j and j+1) whose composition is p, in bubble-sort order.
std::vector<int> bubble_decomposition(const Permutation& p);

struct BuildOptions {
  GeometryProportions geometry;
  MollifyOptions mollify{.recenter = true};
  /// Skips the order-doubling quadrature self-check.
  bool fast_path = false;
};

/// Builds exchange and fold pieces and caches the smoothed field per (number of minima, j).
class ScheduleBuilder {
 public:
  explicit ScheduleBuilder(BuildOptions opts = {});

  /// Four segments on [u_a, u_b] exchanging the minima at positions j and j+1 of the
  /// standard potential with `count` minima.
  std::vector<DeformationSegment> elementary_transposition(int count, int j, double u_a, double u_b);
  /// Concatenated transpositions realizing p on [u_a, u_b]; a constant segment for the identity.
  std::vector<DeformationSegment> permutation_segments(int count, const Permutation& p, double u_a, double u_b);
  /// The smoothed field used by the transposition (count, j).
  std::shared_ptr<const MollifiedField> smoothed(int count, int j);
  const Potential1D& standard(int count);
  const BuildOptions& options() const { return opts_; }

 private:
  BuildOptions opts_;
  std::map<int, Potential1D> standard_;
  std::map<std::pair<int, int>, std::shared_ptr<const MollifiedField>> smoothed_;
};

DeformationSchedule elementary_transposition(const Potential1D& standard_f, int j, double u_a, double u_b,
                                             const BuildOptions& opts = {});
DeformationSchedule permutation_schedule(int count, const Permutation& p, double u_a, double u_b,
                                         const BuildOptions& opts = {});

struct TransitionRecord {
  Direction direction = Direction::Up;
  int level = 0;  // level of the source vertex
  std::string source;
  std::string target;
  double u_a = 0, u_b = 0;  // elimination segment
  double u_sn = 0;
  Vec2 source_xy;  // position of the vanishing minimum when its elimination starts
  Vec2 target_xy;  // position of the landing minimum
};

struct Realization {
  AdmissibleGraph graph;
  BuildOptions options;
  std::shared_ptr<const DeformationSchedule> schedule;
  std::vector<double> u_grid;  // u^0..u^n
  std::vector<double> u_mid;   // u^{i+1/2}
  std::vector<std::map<std::string, Vec2>> X;  // X_i
  std::vector<TransitionRecord> transitions;
  std::vector<int> minima_at_grid;  // by construction
  std::vector<int> minima_at_mid;

  /// Level index whose u^i equals u exactly, -1 otherwise.
  int grid_index(double u) const;
  const TransitionRecord* record_for(const std::string& source, Direction d) const;
};

/// Realization of an admissible graph; construction errors are annotated with (i, k, edge).
Realization realize(const AdmissibleGraph& g, const BuildOptions& opts = {});

/// JSON manifest: graph, options, segments, X maps and transition records.
std::string realization_manifest(const Realization& r);
/// Rebuilds the schedule from the embedded graph and options, then takes the X maps and
/// transition records from the manifest as written.
Realization load_manifest(const std::string& text);

std::string options_to_json(const BuildOptions& o);
BuildOptions options_from_json(const std::string& text);

}  // namespace hystreal
