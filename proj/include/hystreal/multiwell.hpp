#pragma once

// Smooth one-dimensional multiwell potentials.
//
// A Potential1D is a C^2 piecewise quintic on [window_lo, window_hi] and equals
// x^2 outside of it. Every critical point sits in the middle of an exactly
// quadratic "cap", so the potential is locally even about each critical point.

#include <algorithm>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace hystreal {

struct HermiteKnot {
  double x{};
  double y{};
  double dy{};
  double d2y{};
};

enum class CriticalKind { Minimum, Maximum };

struct CriticalPoint {
  double x{};
  CriticalKind kind{CriticalKind::Minimum};
  double value{};
};

std::string to_string(CriticalKind kind);

/// Shape constants shared by every potential built by the toolkit.
struct ShapeConfig {
  double m_star = 0.0;
  double M_star = 1.0;
  /// cap half width as a fraction of the distance to the neighbouring critical point
  double cap_fraction = 0.16;
  /// curvature at a critical point = cap_curvature * (M_star - m_star) / h^2
  double cap_curvature = 4.0;
  /// half gap used when a potential has a single minimum
  double lone_half_gap = 0.5;
};

class Potential1D {
 public:
  struct Jet {
    double f{}, d1{}, d2{}, d3{}, d4{}, d5{};
  };

  /// The pure quadratic x^2 with its single minimum at the origin.
  Potential1D();

  /// Knots must be strictly increasing; knots.front()/back() must match x^2 to second order.
  Potential1D(std::vector<HermiteKnot> knots, std::vector<CriticalPoint> critical, double m_star,
              double M_star);

  double value(double x) const;
  double d1(double x) const;
  double d2(double x) const;
  Jet jet(double x) const;

  double window_lo() const { return knots_.empty() ? 0.0 : knots_.front().x; }
  double window_hi() const { return knots_.empty() ? 0.0 : knots_.back().x; }
  bool is_pure_quadratic() const { return knots_.empty(); }

  const std::vector<HermiteKnot>& knots() const { return knots_; }
  /// Break points of the piecewise polynomial representation (knot abscissae).
  std::vector<double> breakpoints() const;
  const std::vector<CriticalPoint>& critical_points() const { return critical_; }
  std::vector<double> minima() const;
  std::vector<double> maxima() const;
  double m_star() const { return m_star_; }
  double M_star() const { return M_star_; }

  /// Polynomial piece containing x (coefficients in powers of x - origin); -1 outside the window.
  int piece_index(double x) const;
  int piece_count() const { return static_cast<int>(pieces_.size()); }
  Jet piece_jet(int piece, double x) const;
  double piece_lo(int piece) const { return knots_[piece].x; }
  double piece_hi(int piece) const { return knots_[piece + 1].x; }

 private:
  struct Piece {
    double origin{};
    double c[6]{};
  };

  std::vector<HermiteKnot> knots_;
  std::vector<Piece> pieces_;
  std::vector<CriticalPoint> critical_;
  double m_star_ = 0.0;
  double M_star_ = 0.0;
};

/// Coefficients (in powers of x - x0) of the quintic Hermite interpolant between two knots.
void quintic_hermite(const HermiteKnot& a, const HermiteKnot& b, double out[6]);

/// Smooth ramp 3s^2 - 2s^3 clamped to [0,1], with its derivative.
double smoothstep(double s);
double smoothstep_derivative(double s);

/// Minima at the given positions, maxima at midpoints, equal depths, quadratic tails.
Potential1D build_multiwell(std::span<const double> min_positions, const ShapeConfig& shape = {});

/// Convenience: minima at 1, 2, ..., count (the standard layout of the toolkit).
Potential1D standard_multiwell(int count, const ShapeConfig& shape = {});

/// Same potential with its rightmost minimum removed: knots up to the right edge of the
/// cap of the new last minimum are kept and a fresh monotone tail is attached.
Potential1D drop_last_minimum(const Potential1D& f, const ShapeConfig& shape = {});

struct CriticalScanOptions {
  double step = 2.5e-3;
  double margin = 1.0;
  double tolerance = 1e-9;
};

/// Numerically locates every zero of f' by sign scan and bracketed refinement and
/// classifies it by the sign of f''.
std::vector<CriticalPoint> scan_critical_points(const std::function<double(double)>& d1,
                                                const std::function<double(double)>& d2,
                                                const std::function<double(double)>& value,
                                                double lo, double hi, double step);

/// Audit of the stored critical list against a numerical scan; throws ConstructionError on
/// mismatch (tolerance on locations).
std::vector<CriticalPoint> critical_points(const Potential1D& f, const CriticalScanOptions& opts = {});

/// Strict monotonicity of the quintic Hermite piece joining a and b (sign +1 increasing).
bool hermite_monotone(const HermiteKnot& a, const HermiteKnot& b, int sign);

struct LemmaGeometry;

/// f~ for the exchange of minima geom.j and geom.j+1: equal to f outside [r_-, r_+], same
/// critical points, lowered maximum at the center, mirror symmetric on [r_-^D, r_+^D].
Potential1D build_tilde(const Potential1D& f, const LemmaGeometry& geom);

/// Convex blend (1-s) f_before + s f_after that removes the rightmost minimum of f_before
/// through a fold, reparametrized by the input u on [u_a, u_b] with the fold at u_sn.
class SaddleNodeFamily {
 public:
  SaddleNodeFamily(Potential1D before, Potential1D after, double u_a, double u_b, double u_sn);

  double s_of_u(double u) const;
  double ds_du(double u) const;
  Potential1D::Jet jet(double x, double u) const;
  double value(double x, double u) const { return jet(x, u).f; }
  double d1(double x, double u) const { return jet(x, u).d1; }
  double d2(double x, double u) const { return jet(x, u).d2; }
  /// d/du of the family value at fixed x.
  double du(double x, double u) const;

  const Potential1D& before() const { return before_; }
  const Potential1D& after() const { return after_; }
  double u_a() const { return u_a_; }
  double u_b() const { return u_b_; }
  double u_sn() const { return u_sn_; }
  double s_sn() const { return s_sn_; }
  /// Location of the merged critical point at the fold.
  double x_merge() const { return x_merge_; }
  /// Abscissa range containing the colliding pair.
  double fold_lo() const { return fold_lo_; }
  double fold_hi() const { return fold_hi_; }
  double window_lo() const { return std::min(before_.window_lo(), after_.window_lo()); }
  double window_hi() const { return std::max(before_.window_hi(), after_.window_hi()); }

 private:
  Potential1D before_, after_;
  double u_a_, u_b_, u_sn_;
  double s_sn_ = 0, x_merge_ = 0, fold_lo_ = 0, fold_hi_ = 0;
  double slope_sn_ = 0;
};

/// Eliminates the rightmost minimum of f_before (which must have at least two minima).
SaddleNodeFamily build_sn_family(const Potential1D& f_before, double u_a, double u_b, double u_sn,
                                 const ShapeConfig& shape = {});

/// Critical points of a family member on the window of the family.
std::vector<CriticalPoint> family_critical_points(const SaddleNodeFamily& fam, double u, double step = 2.5e-3);

/// Rows x, f(x), f'(x) on a uniform grid.
std::string sample_csv(const Potential1D& f, double lo, double hi, int count);

}  // namespace hystreal
