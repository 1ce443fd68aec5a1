#pragma once

#include <vector>

namespace hetmol {

// Complete elliptic integral of the first kind, K(k) = F(pi/2, k), for
// modulus 0 <= k < 1, evaluated by the arithmetic-geometric mean.
double ellipK(double k);

struct JacobiValues {
  double sn;
  double cn;
  double dn;
};

// Jacobi elliptic functions for modulus 0 <= k <= 1 (AGM / descending Landen).
JacobiValues jacobi(double u, double k);
double jacobi_sn(double u, double k);

// Undamped population oscillation from pure atoms at Lambda = 0:
//   y(tau) = y_minus sn^2(sqrt(y_plus) tau / 2, sqrt(y_minus / y_plus)).
//
// y_minus <= y_plus are the roots of y^2 - (2 + Delta^2) y + (1 - d^2), the
// vanishing bracket of (dy/dtau)^2 at Lambda = 0.
struct OscillationSolution {
  double y_minus;
  double y_plus;
  double k;           // sqrt(y_minus / y_plus)
  double k_comp_sq;   // 1 - k^2, computed without cancellation
  double period;      // +inf when divergent
  bool divergent;     // true only at Delta = 0, d = 0 (tanh^2 separatrix)
};

OscillationSolution oscillation_params(double Delta, double d);
double analytic_y(double tau, double Delta, double d);

// (dy/dtau)^2 for a trajectory started from pure atoms (energy -Delta + Lambda/2):
//   y [1 - d^2 - (D'^2 + 2) y + (1 - D' Lambda) y^2 - Lambda^2 y^3 / 4],
// with D' = Delta - Lambda.
double quartic_rhs(double y, double Delta, double Lambda, double d);

// Sorted real roots of quartic_rhs in [0, 1 - d], including y = 0 and
// tangential (double) roots.
std::vector<double> turning_points(double Delta, double Lambda, double d);

// Small-d estimate of the resonant period, (2 / sqrt(1 + d)) ln(16 / d).
// Approximate only; returns +inf at d = 0.
double resonant_period_asymptote(double d);

}  // namespace hetmol
