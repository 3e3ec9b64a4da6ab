#pragma once

// Gradient flow x' = -grad V(x, u): settling, adiabatic tracking of minima through a
// schedule, saddle-node transits, and the damped second-order system.

#include <string>
#include <vector>

#include "hystreal/field.hpp"
#include "hystreal/graph.hpp"
#include "hystreal/schedule.hpp"

namespace hystreal {

struct SweepConfig {
  double grad_tol = 1e-9;       // |grad V| accepted as an equilibrium
  double sn_curvature = 1e-4;   // smallest Hessian eigenvalue that still counts as a regular minimum
  double bracket_width = 1e-10; // final u-bracket around a fold
  double transit_offset = 1e-6; // transit starts this far past the bracketed fold
  double atol = 1e-9, rtol = 1e-7;
  double settle_tol = 1e-5;     // gradient norm where integration hands over to Newton
  long max_steps = 1000000;
  int steps_blend = 16;         // u-steps per segment, by kind
  int steps_rotation = 96;
  int steps_fold = 48;
  double du = 0;                // largest u-step, 0 for the per-kind counts only
  double max_jump = 0.25;       // half the distance between neighbouring minima
  bool check_lyapunov = true;
};

struct FlowSample {
  double t = 0, u = 0;
  Vec2 x;
  double V = 0;
};

enum class EventKind { SaddleNode, Landed, Reversible };
std::string to_string(EventKind k);

struct FlowEvent {
  EventKind kind = EventKind::Reversible;
  double u = 0;
  Vec2 x;
  double dissipation = 0;
};

struct FlowTrajectory {
  std::vector<FlowSample> samples;
  std::vector<FlowEvent> events;
};

struct SettleResult {
  Vec2 x;
  long steps = 0;
  double time = 0;
  double min_eigenvalue = 0;
};

/// Integrates the gradient flow (adaptive Dormand-Prince) until |grad V| < settle_tol and a
/// Newton polish converges to a nearby minimum. Throws NumericalError when the step budget
/// runs out or V rises along an accepted step.
SettleResult settle(const ScalarField2D& f, Vec2 x0, const SweepConfig& cfg = {}, FlowTrajectory* rec = nullptr,
                    double u = 0.0);

struct Hessian {
  double a = 0, b = 0, c = 0;  // [[a, b], [b, c]]
  double min_eigenvalue() const;
};
Hessian fd_hessian(const ScalarField2D& f, Vec2 x, double h = 1e-6);

struct NewtonResult {
  Vec2 x;
  bool converged = false;
  double min_eigenvalue = 0;
  int iterations = 0;
};

/// Damped Newton for a nondegenerate minimum starting near x0.
NewtonResult newton_minimum(const ScalarField2D& f, Vec2 x0, const SweepConfig& cfg = {});

struct TrackResult {
  std::vector<std::pair<double, Vec2>> path;  // (u, minimum)
  bool fold = false;
  double u_last = 0;  // last u with a regular minimum
  double u_fold = 0;  // first u without one (bracketed)
  Vec2 x_last;
};

/// Follows the minimum from x0 at u_from towards u_to (either direction), refining by Newton
/// at each step; stops at the first fold, bracketed to bracket_width.
TrackResult track_equilibrium(const FieldFamily& fam, Vec2 x0, double u_from, double u_to, const SweepConfig& cfg = {});

/// Settles V(., u_at) from the last tracked point before the fold.
SettleResult transit_saddle_node(const FieldFamily& fam, double u_at, Vec2 x_sn, const SweepConfig& cfg = {},
                                 FlowTrajectory* rec = nullptr);

struct TransitionOutcome {
  Direction direction = Direction::Up;
  std::string source;
  std::string landed;  // vertex whose X-image matches the final minimum, empty when none
  double u_fold = 0;
  Vec2 x_before, x_landing;
  Vec2 x_final;  // minimum occupied at the end of the step
  double dissipation = 0;
  bool folded = false;
};

struct SweepResult {
  VertexTrajectory vertices;
  FlowTrajectory flow;
  std::vector<TransitionOutcome> steps;
};

/// Vertex of level i whose X-image lies within tol of x, empty when none.
std::string vertex_at(const Realization& r, int level, Vec2 x, double tol = 1e-6);

/// One unit input step from level i to level i +- 1 starting at X_i(start).
TransitionOutcome unit_step(const Realization& r, const std::string& start, Direction d, const SweepConfig& cfg = {},
                            FlowTrajectory* rec = nullptr);

/// Adiabatic sweep over a sequence of levels (unit steps or repeats); throws
/// RealizationMismatch when a minimum reached at a grid value matches no vertex.
SweepResult adiabatic_sweep(const Realization& r, const std::string& start, const std::vector<int>& levels,
                            const SweepConfig& cfg = {});

/// V(x_before, u) - V(x_landing, u) at the transit input; throws RealizationMismatch when negative.
double dissipation(const FieldFamily& fam, double u, Vec2 x_before, Vec2 x_landing);

// ---------------------------------------------------------------------------------------
// x'' + gamma x' + grad V(x, u(nu t)) = 0

struct SecondOrderConfig {
  double gamma = 50.0;
  double nu = 1e-3;
  double dwell = 0.2;  // fraction of each unit step spent at the target level
  double atol = 1e-10, rtol = 1e-8;
  double epsilon() const { return 1.0 / (gamma * gamma); }
  double mu() const { return gamma * nu; }
  /// Warnings for gamma not large or mu not small.
  std::vector<std::string> warnings() const;
};

/// Input path in slow time theta = nu t: unit step k occupies theta in [k, k+1], the
/// schedule segments crossed share the first (1 - dwell) equally, then u rests at the level.
class InputPath {
 public:
  InputPath(const Realization& r, const std::vector<int>& levels, double dwell);
  double u(double theta) const;
  double theta_end() const { return static_cast<double>(steps_.size()); }

 private:
  struct Step {
    std::vector<double> knots;  // u at equal theta spacing over the moving part
  };
  std::vector<Step> steps_;
  double dwell_;
};

struct SecondOrderSample {
  double t = 0, tau = 0, theta = 0, u = 0;
  Vec2 x, v;
};

struct SecondOrderResult {
  std::vector<SecondOrderSample> samples;
  std::vector<Vec2> rest_points;          // position at the end of each dwell
  std::vector<std::string> visited;       // vertex at each rest point, empty when none
  long steps = 0;
};

/// Integrates from rest at X_{levels[0]}(start); throws NumericalError on energy blow-up.
SecondOrderResult second_order_sim(const Realization& r, const std::string& start, const std::vector<int>& levels,
                                   const SecondOrderConfig& cfg = {}, int samples_per_step = 200);

/// x'' + gamma x' + grad f(x) = 0 from rest at x0 with the input frozen; samples on [0, t_end].
std::vector<SecondOrderSample> damped_relaxation(const ScalarField2D& f, Vec2 x0, double t_end,
                                                 const SecondOrderConfig& cfg = {}, int samples = 200);

// ---------------------------------------------------------------------------------------
// Export

/// t,u,x1,x2,V
std::string trajectory_csv(const FlowTrajectory& tr);
/// kind,u,x1,x2,dissipation
std::string events_csv(const FlowTrajectory& tr);

}  // namespace hystreal
