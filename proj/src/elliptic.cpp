#include "hetmol/elliptic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "hetmol/errors.hpp"

namespace hetmol {

namespace {

constexpr double kPi = std::numbers::pi;

// sqrt(1 - k^2) without cancellation near k = 1.
double complementary(double k) { return std::sqrt((1.0 - k) * (1.0 + k)); }

}  // namespace

double ellipK(double k) {
  if (!(k >= 0.0 && k < 1.0)) throw DomainError("ellipK requires 0 <= k < 1");
  double a = 1.0;
  double b = complementary(k);
  for (int i = 0; i < 64 && std::abs(a - b) > 1e-16 * a; ++i) {
    const double a_next = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = a_next;
  }
  return kPi / (a + b);
}

JacobiValues jacobi(double u, double k) {
  if (!(k >= 0.0 && k <= 1.0)) throw DomainError("jacobi requires 0 <= k <= 1");
  if (k == 0.0) return {std::sin(u), std::cos(u), 1.0};
  if (k == 1.0) {
    const double sech = 1.0 / std::cosh(u);
    return {std::tanh(u), sech, sech};
  }

  // Abramowitz & Stegun 16.4: AGM ladder, then back-substitute the amplitude.
  std::array<double, 32> a{}, c{};
  a[0] = 1.0;
  c[0] = k;
  double b = complementary(k);
  int n = 0;
  while (std::abs(c[n]) > 1e-16 && n + 1 < static_cast<int>(a.size())) {
    a[n + 1] = 0.5 * (a[n] + b);
    c[n + 1] = 0.5 * (a[n] - b);
    b = std::sqrt(a[n] * b);
    ++n;
  }
  double phi = std::ldexp(a[n] * u, n);
  double phi_prev = phi;
  for (int i = n; i > 0; --i) {
    phi_prev = phi;
    phi = 0.5 * (phi + std::asin(c[i] * std::sin(phi) / a[i]));
  }
  const double sn = std::sin(phi);
  const double cn = std::cos(phi);
  const double dn = n > 0 ? cn / std::cos(phi_prev - phi) : 1.0;
  return {sn, cn, dn};
}

double jacobi_sn(double u, double k) { return jacobi(u, k).sn; }

OscillationSolution oscillation_params(double Delta, double d) {
  if (!(d >= 0.0 && d < 1.0)) throw DomainError("oscillation_params requires 0 <= d < 1");
  const double delta2 = Delta * Delta;
  const double half_sum = 1.0 + 0.5 * delta2;            // (y_- + y_+) / 2
  const double disc = delta2 + 0.25 * delta2 * delta2 + d * d;  // half_sum^2 - (1 - d^2)
  const double root = std::sqrt(disc);

  OscillationSolution s;
  s.y_plus = half_sum + root;
  s.y_minus = (1.0 - d * d) / s.y_plus;
  s.k = std::sqrt(s.y_minus / s.y_plus);
  s.k_comp_sq = 2.0 * root / s.y_plus;
  s.divergent = s.k_comp_sq < 1e-14;
  s.period = s.divergent ? std::numeric_limits<double>::infinity()
                         : 4.0 * ellipK(s.k) / std::sqrt(s.y_plus);
  return s;
}

double analytic_y(double tau, double Delta, double d) {
  const auto s = oscillation_params(Delta, d);
  const double u = std::sqrt(s.y_plus) * tau / 2.0;
  const double sn = s.divergent ? std::tanh(u) : jacobi_sn(u, s.k);
  return s.y_minus * sn * sn;
}

double quartic_rhs(double y, double Delta, double Lambda, double d) {
  const double dp = Delta - Lambda;
  return y * (1.0 - d * d - (dp * dp + 2.0) * y + (1.0 - dp * Lambda) * y * y -
              Lambda * Lambda * y * y * y / 4.0);
}

std::vector<double> turning_points(double Delta, double Lambda, double d) {
  if (!(d >= 0.0 && d < 1.0)) throw DomainError("turning_points requires 0 <= d < 1");
  // Roots of the bracket; y = 0 comes from the overall factor.
  auto bracket = [&](double y) {
    const double dp = Delta - Lambda;
    return 1.0 - d * d - (dp * dp + 2.0) * y + (1.0 - dp * Lambda) * y * y -
           Lambda * Lambda * y * y * y / 4.0;
  };
  const double top = 1.0 - d;
  constexpr int kCells = 4000;
  std::vector<double> roots{0.0};

  auto bisect = [&](double lo, double hi) {
    double flo = bracket(lo);
    for (int i = 0; i < 200 && hi - lo > 1e-16; ++i) {
      const double mid = 0.5 * (lo + hi);
      const double fm = bracket(mid);
      if (fm == 0.0) return mid;
      if ((fm < 0.0) == (flo < 0.0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  };

  std::vector<double> grid(kCells + 1), value(kCells + 1);
  for (int i = 0; i <= kCells; ++i) {
    grid[i] = top * i / kCells;
    value[i] = bracket(grid[i]);
  }
  for (int i = 0; i < kCells; ++i) {
    if (value[i] == 0.0) {
      if (i > 0) roots.push_back(grid[i]);
    } else if ((value[i] < 0.0) != (value[i + 1] < 0.0) && value[i + 1] != 0.0) {
      roots.push_back(bisect(grid[i], grid[i + 1]));
    }
  }
  if (value[kCells] == 0.0 || std::abs(value[kCells]) < 1e-14) roots.push_back(top);

  // Tangential roots: local minima of |bracket| that touch zero.
  for (int i = 1; i <= kCells; ++i) {
    const double here = std::abs(value[i]);
    const double left = std::abs(value[i - 1]);
    const double right = i < kCells ? std::abs(value[i + 1]) : std::numeric_limits<double>::infinity();
    const bool sign_change = (value[i - 1] < 0.0) != (value[i] < 0.0) ||
                             (i < kCells && (value[i] < 0.0) != (value[i + 1] < 0.0));
    if (sign_change || here > left || here > right || here > 1e-6) continue;
    double lo = grid[i - 1], hi = i < kCells ? grid[i + 1] : top;
    for (int it = 0; it < 200; ++it) {
      const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
      if (std::abs(bracket(m1)) < std::abs(bracket(m2))) hi = m2; else lo = m1;
    }
    const double y = 0.5 * (lo + hi);
    if (std::abs(bracket(y)) <= 1e-12) roots.push_back(std::min(y, top));
  }

  std::sort(roots.begin(), roots.end());
  std::vector<double> unique;
  for (double r : roots) {
    if (unique.empty() || r - unique.back() > 1e-9) unique.push_back(r);
  }
  return unique;
}

double resonant_period_asymptote(double d) {
  if (d < 0.0) throw DomainError("resonant_period_asymptote requires d >= 0");
  if (d == 0.0) return std::numeric_limits<double>::infinity();
  return 2.0 / std::sqrt(1.0 + d) * std::log(16.0 / d);
}

}  // namespace hetmol
