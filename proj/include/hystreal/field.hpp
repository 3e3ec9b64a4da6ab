#pragma once

// Planar scalar fields V(x1, x2), the piecewise field Phi used to exchange two minima,
// its disc-average smoothing, and one-parameter families of fields.

#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hystreal/geometry.hpp"
#include "hystreal/multiwell.hpp"

namespace hystreal {

struct Vec2 {
  double x1 = 0.0;
  double x2 = 0.0;

  Vec2 operator+(Vec2 o) const { return {x1 + o.x1, x2 + o.x2}; }
  Vec2 operator-(Vec2 o) const { return {x1 - o.x1, x2 - o.x2}; }
  Vec2 operator*(double s) const { return {x1 * s, x2 * s}; }
  double dot(Vec2 o) const { return x1 * o.x1 + x2 * o.x2; }
  double norm() const { return std::hypot(x1, x2); }
  bool operator==(const Vec2&) const = default;
};

inline Vec2 rotate(Vec2 v, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c * v.x1 - s * v.x2, s * v.x1 + c * v.x2};
}

enum class Smoothness { C0, PiecewiseC1, C1 };
std::string to_string(Smoothness s);

class ScalarField2D {
 public:
  virtual ~ScalarField2D() = default;
  virtual double value(Vec2 x) const = 0;
  virtual Vec2 gradient(Vec2 x) const = 0;
  virtual Smoothness smoothness() const { return Smoothness::C1; }
  /// Separable profile f when the field is f(x1) + x2^2, nullptr otherwise.
  virtual const Potential1D* separable_profile() const { return nullptr; }
};

using FieldPtr = std::shared_ptr<const ScalarField2D>;

/// f(x1) + x2^2.
class SeparableField final : public ScalarField2D {
 public:
  explicit SeparableField(Potential1D f) : f_(std::move(f)) {}
  double value(Vec2 x) const override { return f_.value(x.x1) + x.x2 * x.x2; }
  Vec2 gradient(Vec2 x) const override { return {f_.d1(x.x1), 2.0 * x.x2}; }
  const Potential1D* separable_profile() const override { return &f_; }
  const Potential1D& profile() const { return f_; }

 private:
  Potential1D f_;
};

FieldPtr separable(const Potential1D& f);

/// Field given by callables; the gradient defaults to central differences.
class LambdaField final : public ScalarField2D {
 public:
  using ValueFn = std::function<double(Vec2)>;
  using GradFn = std::function<Vec2(Vec2)>;
  LambdaField(ValueFn v, GradFn g = {}, Smoothness s = Smoothness::C1)
      : v_(std::move(v)), g_(std::move(g)), s_(s) {}
  double value(Vec2 x) const override { return v_(x); }
  Vec2 gradient(Vec2 x) const override;
  Smoothness smoothness() const override { return s_; }

 private:
  ValueFn v_;
  GradFn g_;
  Smoothness s_;
};

/// Central-difference gradient.
Vec2 fd_gradient(const ScalarField2D& f, Vec2 x, double h = 1e-6);

/// Curves across which a field may fail to be smooth.
struct KinkSet {
  struct Circle {
    double c1, c2, r;
  };
  struct Ellipse {
    double c1, c2, a, b;
  };
  std::vector<Circle> circles;
  std::vector<Ellipse> ellipses;
  std::vector<double> verticals;
  bool axis = false;  // the line x2 = 0
};

/// The continuous, piecewise smooth field built from f~: equal to f~(x1) + x2^2 outside E_L,
/// inside E_S and on J, radial on the annulus D_L \ D_S, interpolated in x2^2 along vertical
/// segments in the remaining lens regions.
class PhiField final : public ScalarField2D {
 public:
  PhiField(Potential1D f_tilde, LemmaGeometry geom);
  double value(Vec2 x) const override { return base(x) + excess(x); }
  Vec2 gradient(Vec2 x) const override { return fd_gradient(*this, x, 1e-7); }
  Smoothness smoothness() const override { return Smoothness::C0; }

  /// f~(x1) + x2^2
  double base(Vec2 x) const { return f_.value(x.x1) + x.x2 * x.x2; }
  /// Phi - base; zero outside E_L, inside E_S and on the axis.
  double excess(Vec2 x) const;
  /// True when the closed rho-disc around x certainly does not meet the support of excess().
  bool excess_vanishes_on_disc(Vec2 x, double rho) const;

  const Potential1D& profile() const { return f_; }
  const LemmaGeometry& geometry() const { return g_; }
  const KinkSet& kinks() const { return kinks_; }

 private:
  Potential1D f_;
  LemmaGeometry g_;
  KinkSet kinks_;
  double top_small_ = 0, bottom_large_ = 0;  // f~(c + R_S), f~(c + R_L)
};

struct PhiAudit {
  bool ok = true;
  std::string failure;
  double worst_margin = 0.0;
};

/// Strict decrease of Phi along J_h = [r_- - rho, r_-^0 + rho] x {h} for h in {0, rho/2, rho}
/// and strict increase along the mirrored segment; `samples` points per segment.
PhiAudit audit_phi_monotone_segments(const PhiField& phi, int samples = 200);
/// Strict increase of Phi in x2 on a grid covering E_L in the upper half plane.
PhiAudit audit_phi_vertical_growth(const PhiField& phi, int columns = 161, int rows = 300);

/// Builds Phi from f~ and runs both audits; throws ConstructionError with the failing point.
std::shared_ptr<const PhiField> build_phi(const Potential1D& f_tilde, const LemmaGeometry& geom);

struct MollifyOptions {
  /// Gauss-Legendre nodes per smooth piece (circle integrals and 1D moments).
  int circle_order = 20;
  /// nodes per piece in each direction of the 2D disc average
  int disc_order = 20;
  /// Recompute with doubled orders and fail when results differ by more than tolerance.
  bool self_check = true;
  double tolerance = 1e-8;
  /// Subtract rho^2/2 so that |x|^2 is mapped to itself (the disc average adds rho^2/2).
  bool recenter = false;
};

/// Disc average of a field over radius rho. Gradient by the boundary-integral identities.
class MollifiedField final : public ScalarField2D {
 public:
  /// Generic field: no separable split, kinks unknown.
  MollifiedField(FieldPtr field, double rho, MollifyOptions opts);
  /// Phi: separable part by exact 1D moments, excess by kink-aligned quadrature.
  MollifiedField(std::shared_ptr<const PhiField> phi, double rho, MollifyOptions opts);

  double value(Vec2 x) const override;
  Vec2 gradient(Vec2 x) const override;
  Smoothness smoothness() const override { return Smoothness::C1; }

  double rho() const { return rho_; }
  const MollifyOptions& options() const { return opts_; }
  const PhiField* phi() const { return phi_.get(); }

 private:
  double disc_average(Vec2 x, int order) const;
  Vec2 circle_gradient(Vec2 x, int order) const;
  double rough(Vec2 x) const;  // the part handled by generic quadrature

  FieldPtr field_;
  std::shared_ptr<const PhiField> phi_;
  const Potential1D* profile_ = nullptr;
  KinkSet kinks_;
  double rho_;
  MollifyOptions opts_;
};

std::shared_ptr<const MollifiedField> mollify(FieldPtr field, double rho, const MollifyOptions& opts = {});
std::shared_ptr<const MollifiedField> mollify(std::shared_ptr<const PhiField> phi, double rho,
                                              const MollifyOptions& opts = {});

/// Disc average of f(x + s), s in [-rho, rho] with the semicircle weight, and of f'.
double disc_moment(const Potential1D& f, double x, double rho);
double disc_moment_d1(const Potential1D& f, double x, double rho);

// ---------------------------------------------------------------------------------------
// One-parameter families

class FieldFamily {
 public:
  virtual ~FieldFamily() = default;
  virtual double value(Vec2 x, double u) const = 0;
  virtual Vec2 gradient(Vec2 x, double u) const = 0;
  virtual double u_lo() const = 0;
  virtual double u_hi() const = 0;
  virtual std::string kind() const = 0;
  /// True when every member is of the form f(x1, u) + x2^2.
  virtual bool is_separable() const { return false; }
  /// 1D slice x1 -> V((x1, 0), u) derivative, valid when is_separable().
  virtual double axis_d1(double x1, double u) const { return gradient({x1, 0.0}, u).x1; }
};

using FamilyPtr = std::shared_ptr<const FieldFamily>;

/// The field V(., u) of a family at frozen u.
class FrozenField final : public ScalarField2D {
 public:
  FrozenField(FamilyPtr fam, double u) : fam_(std::move(fam)), u_(u) {}
  double value(Vec2 x) const override { return fam_->value(x, u_); }
  Vec2 gradient(Vec2 x) const override { return fam_->gradient(x, u_); }

 private:
  FamilyPtr fam_;
  double u_;
};

class ConstantFamily final : public FieldFamily {
 public:
  ConstantFamily(FieldPtr f, double u_a, double u_b) : f_(std::move(f)), a_(u_a), b_(u_b) {}
  double value(Vec2 x, double) const override { return f_->value(x); }
  Vec2 gradient(Vec2 x, double) const override { return f_->gradient(x); }
  double u_lo() const override { return a_; }
  double u_hi() const override { return b_; }
  std::string kind() const override { return "constant"; }
  bool is_separable() const override { return f_->separable_profile() != nullptr; }
  const FieldPtr& field() const { return f_; }

 private:
  FieldPtr f_;
  double a_, b_;
};

/// (1 - a(u)) F0 + a(u) F1 with the smoothstep ramp a.
class LinearBlend final : public FieldFamily {
 public:
  LinearBlend(FieldPtr f0, FieldPtr f1, double u_a, double u_b);
  double value(Vec2 x, double u) const override;
  Vec2 gradient(Vec2 x, double u) const override;
  double u_lo() const override { return a_; }
  double u_hi() const override { return b_; }
  std::string kind() const override { return "linear_blend"; }
  bool is_separable() const override;
  double ramp(double u) const;
  double ramp_derivative(double u) const;
  const FieldPtr& start() const { return f0_; }
  const FieldPtr& end() const { return f1_; }

 private:
  FieldPtr f0_, f1_;
  double a_, b_;
};

/// f(x1, u) + x2^2 for a saddle-node family.
class SaddleNodeLift final : public FieldFamily {
 public:
  explicit SaddleNodeLift(SaddleNodeFamily fam) : fam_(std::move(fam)) {}
  double value(Vec2 x, double u) const override { return fam_.value(x.x1, u) + x.x2 * x.x2; }
  Vec2 gradient(Vec2 x, double u) const override { return {fam_.d1(x.x1, u), 2.0 * x.x2}; }
  double u_lo() const override { return fam_.u_a(); }
  double u_hi() const override { return fam_.u_b(); }
  std::string kind() const override { return "sn_elimination"; }
  bool is_separable() const override { return true; }
  double axis_d1(double x1, double u) const override { return fam_.d1(x1, u); }
  const SaddleNodeFamily& family() const { return fam_; }

 private:
  SaddleNodeFamily fam_;
};

/// base(R(-alpha)(x - c) + c) inside the disc of radius R about c, base outside;
/// alpha runs from 0 to `angle` with the smoothstep profile.
class RotationFamily final : public FieldFamily {
 public:
  RotationFamily(FieldPtr base, Vec2 center, double radius, double u_a, double u_b, double angle = M_PI);
  double value(Vec2 x, double u) const override;
  Vec2 gradient(Vec2 x, double u) const override;
  double u_lo() const override { return a_; }
  double u_hi() const override { return b_; }
  std::string kind() const override { return "rotation"; }
  double alpha(double u) const;
  double alpha_derivative(double u) const;
  Vec2 center() const { return c_; }
  double radius() const { return R_; }

 private:
  FieldPtr base_;
  Vec2 c_;
  double R_, a_, b_, angle_;
};

/// Variation of the base field along the circle of radius R about c (max - min over samples).
double circle_variation(const ScalarField2D& f, Vec2 c, double R, int samples = 360);

/// Rotation family with the level-line precondition checked (DomainError when the base
/// varies along the rotation circle beyond `tolerance`).
std::shared_ptr<const RotationFamily> rotation_family(FieldPtr base, const LemmaGeometry& geom, double u_a,
                                                      double u_b, double tolerance = 1e-9);

std::shared_ptr<const LinearBlend> linear_blend(FieldPtr f0, FieldPtr f1, double u_a, double u_b);

/// V(x, pivot - u): runs an inner family backwards.
class ReversedFamily final : public FieldFamily {
 public:
  ReversedFamily(FamilyPtr inner, double pivot) : inner_(std::move(inner)), pivot_(pivot) {}
  double value(Vec2 x, double u) const override { return inner_->value(x, pivot_ - u); }
  Vec2 gradient(Vec2 x, double u) const override { return inner_->gradient(x, pivot_ - u); }
  double u_lo() const override { return pivot_ - inner_->u_hi(); }
  double u_hi() const override { return pivot_ - inner_->u_lo(); }
  std::string kind() const override { return inner_->kind(); }
  bool is_separable() const override { return inner_->is_separable(); }
  double axis_d1(double x1, double u) const override { return inner_->axis_d1(x1, pivot_ - u); }
  const FamilyPtr& inner() const { return inner_; }
  double pivot() const { return pivot_; }

 private:
  FamilyPtr inner_;
  double pivot_;
};

// ---------------------------------------------------------------------------------------
// Export

/// CSV with header x1,x2,V on an n1 x n2 grid (row-major in x2, then x1); a single point per
/// direction samples the lower bound.
std::string field_grid_csv(const ScalarField2D& f, double x1_lo, double x1_hi, int n1, double x2_lo,
                           double x2_hi, int n2);
/// Contour-ready block: header "n1 n2 x1_lo x1_hi x2_lo x2_hi" then n2 rows of n1 values.
std::string field_contour_grid(const ScalarField2D& f, double x1_lo, double x1_hi, int n1, double x2_lo,
                               double x2_hi, int n2);

}  // namespace hystreal
