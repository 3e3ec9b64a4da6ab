#pragma once

// Geometry of the local construction that exchanges two neighbouring minima.

#include <string>

namespace hystreal {

class Potential1D;

/// Offsets from the center in units of the minima gap g, plus the f~ level fractions.
struct GeometryProportions {
  double outer = 0.9;    // r_± = c ∓ outer g, also the horizontal semi-axis of E_L
  double big = 0.78;     // r_±^D, radius of D_L
  double small = 0.66;   // r_±^d, radius of D_S
  double inner = 0.6;    // r_±^0, horizontal semi-axis of E_S
  double b_small = 0.12; // vertical semi-axis of E_S
  double b_large = 10.0; // vertical semi-axis of E_L
  double rho = 0.03;     // mollification radius
  // f~ levels as fractions of min(f(r_-), f(r_+))
  double level_big = 0.8;
  double level_small = 0.6;
  double level_max = 0.45;
};

struct LemmaGeometry {
  int j = 1;  // exchanges minima j and j+1 (1-based)
  double center = 0.0;
  double gap = 1.0;
  double r_minus = 0, r_plus = 0;
  double rD_minus = 0, rD_plus = 0;
  double rd_minus = 0, rd_plus = 0;
  double r0_minus = 0, r0_plus = 0;
  double R_S = 0, R_L = 0;
  double a_S = 0, b_S = 0, a_L = 0, b_L = 0;
  double rho = 0;
  double R = 0, R1 = 0, R2 = 0;
  GeometryProportions props;

  bool in_E_S(double x1, double x2) const;
  bool in_E_L(double x1, double x2) const;
};

/// Fits the geometry around the maximum between minima j and j+1 of f; throws DomainError
/// when the bands do not fit between the neighbouring maxima.
LemmaGeometry fit_geometry(const Potential1D& f, int j, const GeometryProportions& props = {});

/// Checks ordering, nesting and the rho constraints; empty string when consistent.
std::string geometry_problem(const LemmaGeometry& g);

}  // namespace hystreal
