#include "hystreal/geometry.hpp"

#include <cmath>
#include <sstream>

#include "hystreal/errors.hpp"
#include "hystreal/multiwell.hpp"

namespace hystreal {

bool LemmaGeometry::in_E_S(double x1, double x2) const {
  const double p = (x1 - center) / a_S, q = x2 / b_S;
  return p * p + q * q <= 1.0;
}

bool LemmaGeometry::in_E_L(double x1, double x2) const {
  const double p = (x1 - center) / a_L, q = x2 / b_L;
  return p * p + q * q <= 1.0;
}

LemmaGeometry fit_geometry(const Potential1D& f, int j, const GeometryProportions& props) {
  const auto mins = f.minima();
  const auto maxs = f.maxima();
  const int N = static_cast<int>(mins.size());
  if (j < 1 || j >= N) throw DomainError("fit_geometry: j must satisfy 1 <= j <= N-1");
  LemmaGeometry g;
  g.j = j;
  g.props = props;
  g.gap = mins[j] - mins[j - 1];
  g.center = maxs[j - 1];
  if (std::abs(g.center - 0.5 * (mins[j] + mins[j - 1])) > 1e-12 * std::max(1.0, std::abs(g.center)))
    throw DomainError("fit_geometry: the maximum is not centred between the two minima");
  const double c = g.center, h = g.gap;
  g.r_minus = c - props.outer * h;
  g.r_plus = c + props.outer * h;
  g.rD_minus = c - props.big * h;
  g.rD_plus = c + props.big * h;
  g.rd_minus = c - props.small * h;
  g.rd_plus = c + props.small * h;
  g.r0_minus = c - props.inner * h;
  g.r0_plus = c + props.inner * h;
  g.R_L = props.big * h;
  g.R_S = props.small * h;
  g.a_S = props.inner * h;
  g.b_S = props.b_small * h;
  g.a_L = props.outer * h;
  g.b_L = props.b_large * h;
  g.rho = props.rho * h;
  g.R1 = g.R_S + g.rho;
  g.R2 = g.R_L - g.rho;
  g.R = 0.5 * (g.R_S + g.R_L);

  if (j >= 2 && !(maxs[j - 2] < g.r_minus - g.rho))
    throw DomainError("fit_geometry: r_- does not clear the maximum on its left");
  if (j + 1 <= N - 1 && !(g.r_plus + g.rho < maxs[j]))
    throw DomainError("fit_geometry: r_+ does not clear the maximum on its right");
  if (auto problem = geometry_problem(g); !problem.empty()) throw DomainError("fit_geometry: " + problem);
  return g;
}

std::string geometry_problem(const LemmaGeometry& g) {
  const double xm = g.center - 0.5 * g.gap, xp = g.center + 0.5 * g.gap;
  const double chain[] = {g.r_minus, g.rD_minus, g.rd_minus, g.r0_minus, xm, g.center,
                          xp,        g.r0_plus,  g.rd_plus,  g.rD_plus, g.r_plus};
  for (int k = 0; k + 1 < 11; ++k)
    if (!(chain[k] < chain[k + 1])) return "axis points are not strictly ordered";
  if (!(g.a_S < g.R_S && g.R_S < g.R_L && g.R_L < g.a_L)) return "E_S, D_S, D_L, E_L are not nested on the axis";
  if (!(g.b_S < g.R_S && g.R_L < g.b_L)) return "ellipse semi-axes do not nest around the discs";
  if (!(g.rho > 0 && g.rho < g.rD_plus - g.rd_plus)) return "rho must be positive and below r_+^D - r_+^d";
  if (!(g.R1 < g.R && g.R < g.R2)) return "rotation radius is not inside the level-line annulus";
  // rho-discs around the three critical points stay inside E_S
  for (double x : {xm, g.center, xp}) {
    for (int k = 0; k < 64; ++k) {
      const double t = 2.0 * M_PI * k / 64;
      if (!g.in_E_S(x + g.rho * std::cos(t), g.rho * std::sin(t)))
        return "rho-disc around a critical point leaves E_S";
    }
  }
  return {};
}

}  // namespace hystreal
