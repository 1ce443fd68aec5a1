#include "hetmol/meanfield.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "hetmol/errors.hpp"

namespace hetmol {

using cplx = std::complex<double>;

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kSqrt2 = 1.41421356237309504880;

double radical(double x, double d) { return std::sqrt((1.0 - x) * (x * x - d * d)); }

}  // namespace

CanonicalRates rhs_canonical(const CanonicalPoint& pt, const ScaledParams& p) {
  const double x = pt.x, d = p.d;
  if (!(x > d && x < 1.0)) throw DomainError("canonical equations need d < x < 1");
  const double r = radical(x, d);
  return {-r * std::sin(pt.phi),
          p.Delta - p.Lambda * x - (d * d + 2.0 * x - 3.0 * x * x) / (2.0 * r) * std::cos(pt.phi)};
}

AmplitudeRates rhs_amplitudes(const MeanFieldState& s, const ScaledParams& p) {
  const double w = 0.5 * (p.Lambda * s.x() - p.Delta);
  const cplx minus_i{0.0, -1.0};
  return {minus_i * (w * s.a1 + kInvSqrt2 * std::conj(s.a2) * s.am),
          minus_i * (w * s.a2 + kInvSqrt2 * std::conj(s.a1) * s.am),
          minus_i * (kInvSqrt2 * s.a1 * s.a2)};
}

CanonicalRates induced_canonical_rates(const MeanFieldState& s, const AmplitudeRates& r) {
  if (s.a1 == 0.0 || s.a2 == 0.0 || s.am == 0.0) {
    throw DomainError("canonical rates undefined when an amplitude vanishes");
  }
  const double dx = 2.0 * std::real(std::conj(s.a1) * r.da1) + 2.0 * std::real(std::conj(s.a2) * r.da2);
  const double dphi = std::imag(r.da1 / s.a1) + std::imag(r.da2 / s.a2) - std::imag(r.dam / s.am);
  return {dx, dphi};
}

double classical_energy(const CanonicalPoint& pt, const ScaledParams& p) {
  const double x = pt.x, d = p.d;
  if (!(x >= d && x <= 1.0)) throw DomainError("classical energy needs d <= x <= 1");
  const double base = 0.5 * p.Lambda * x * x - p.Delta * x;
  if (x == d || x == 1.0) return base;
  return base + radical(x, d) * std::cos(pt.phi);
}

double amplitude_energy(const MeanFieldState& s, const ScaledParams& p) {
  const double x = s.x();
  return 0.5 * p.Lambda * x * x - p.Delta * x + 2.0 * kSqrt2 * std::real(std::conj(s.am) * s.a1 * s.a2);
}

CanonicalReading to_canonical(const MeanFieldState& s) {
  CanonicalReading r{s.x(), s.imbalance(), std::nullopt};
  if (s.a1 != 0.0 && s.a2 != 0.0 && s.am != 0.0) {
    r.phi = std::arg(s.a1 * s.a2 * std::conj(s.am));
  }
  return r;
}

MeanFieldState from_canonical(double x, double phi, double d) {
  if (!(d >= 0.0 && d < 1.0)) throw DomainError("imbalance d must lie in [0, 1)");
  if (!(x >= d && x <= 1.0)) throw DomainError("x must lie in [d, 1]");
  MeanFieldState s;
  s.a1 = std::polar(std::sqrt(0.5 * (x + d)), phi);
  s.a2 = std::sqrt(0.5 * (x - d));
  s.am = std::sqrt(0.5 * (1.0 - x));
  return s;
}

MeanFieldState pure_atom_state(double d, double eps, double phi) {
  if (!(eps >= 0.0 && eps < 1.0 - d)) throw InvalidInput("seed eps must lie in [0, 1 - d)");
  return from_canonical(1.0 - eps, phi, d);
}

namespace {

struct Vec3 {
  std::array<cplx, 3> v;

  Vec3 operator+(const Vec3& o) const { return {{v[0] + o.v[0], v[1] + o.v[1], v[2] + o.v[2]}}; }
  Vec3 operator*(double s) const { return {{v[0] * s, v[1] * s, v[2] * s}}; }
};

Vec3 pack(const MeanFieldState& s) { return {{s.a1, s.a2, s.am}}; }
MeanFieldState unpack(const Vec3& v, double tau) { return {v.v[0], v.v[1], v.v[2], tau}; }

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

MeanFieldSample sample_of(const MeanFieldState& s, const ScaledParams& p) {
  const auto reading = to_canonical(s);
  MeanFieldSample out;
  out.tau = s.tau;
  out.delta = p.Delta;
  out.x = s.x();
  out.y = 1.0 - out.x;
  out.phi = reading.phi.value_or(std::numeric_limits<double>::quiet_NaN());
  out.norm = s.norm();
  out.imbalance = s.imbalance();
  // Near the pure-atom edge the radical amplifies any norm error, so the
  // canonical energy is taken on the normalized state.
  const double xn = out.x / out.norm;
  ScaledParams local = p;
  local.d = out.imbalance / out.norm;
  if (reading.phi && xn > local.d && xn < 1.0) {
    out.energy = classical_energy({xn, *reading.phi}, local);
  } else {
    out.energy = amplitude_energy(s, p);
  }
  return out;
}

}  // namespace

MeanFieldTrajectory integrate(const MeanFieldState& s0, const ScaledParams& p, double tau_max,
                              const IntegrateOptions& options) {
  return integrate(s0, p, DeltaSchedule::constant(p.Delta), tau_max, options);
}

MeanFieldTrajectory integrate(const MeanFieldState& s0, const ScaledParams& base,
                              const DeltaSchedule& schedule, double tau_max,
                              const IntegrateOptions& opt) {
  if (!(tau_max >= s0.tau)) throw InvalidInput("tau_max must not precede the initial time");
  if (!(opt.rtol > 0.0) || !(opt.max_step > 0.0) || !(opt.sample_dt > 0.0)) {
    throw InvalidInput("integration options must be positive");
  }
  if (std::abs(s0.norm() - 1.0) > 1e-7) throw InvalidInput("initial mean-field state is not normalized");

  const double atol = opt.rtol;
  auto rhs = [&](double t, const Vec3& y) {
    const auto r = rhs_amplitudes(unpack(y, t), base.with_delta(schedule(t)));
    return Vec3{{r.da1, r.da2, r.dam}};
  };

  MeanFieldTrajectory traj;
  Vec3 y = pack(s0);
  double tau = s0.tau;
  traj.samples.push_back(sample_of(unpack(y, tau), base.with_delta(schedule(tau))));

  Vec3 k1 = rhs(tau, y);
  double h = std::min(opt.max_step, 0.01);
  std::size_t sample_index = 1;
  while (tau < tau_max) {
    const double next_sample = std::min(s0.tau + sample_index * opt.sample_dt, tau_max);
    const double step = std::min(h, next_sample - tau);
    if (step < opt.min_step && next_sample - tau > opt.min_step) {
      throw NumericalFailure("mean-field step size underflow at tau=" + std::to_string(tau), tau);
    }

    const Vec3 k2 = rhs(tau + c2 * step, y + k1 * (a21 * step));
    const Vec3 k3 = rhs(tau + c3 * step, y + k1 * (a31 * step) + k2 * (a32 * step));
    const Vec3 k4 = rhs(tau + c4 * step, y + k1 * (a41 * step) + k2 * (a42 * step) + k3 * (a43 * step));
    const Vec3 k5 = rhs(tau + c5 * step, y + k1 * (a51 * step) + k2 * (a52 * step) + k3 * (a53 * step) +
                                             k4 * (a54 * step));
    const Vec3 k6 = rhs(tau + step, y + k1 * (a61 * step) + k2 * (a62 * step) + k3 * (a63 * step) +
                                        k4 * (a64 * step) + k5 * (a65 * step));
    const Vec3 y_new = y + k1 * (b1 * step) + k3 * (b3 * step) + k4 * (b4 * step) + k5 * (b5 * step) +
                       k6 * (b6 * step);
    const Vec3 k7 = rhs(tau + step, y_new);

    double err = 0.0;
    for (int i = 0; i < 3; ++i) {
      const cplx e = step * (e1 * k1.v[i] + e3 * k3.v[i] + e4 * k4.v[i] + e5 * k5.v[i] + e6 * k6.v[i] +
                             e7 * k7.v[i]);
      const double scale = atol + opt.rtol * std::max(std::abs(y.v[i]), std::abs(y_new.v[i]));
      err = std::max(err, std::abs(e) / scale);
    }

    if (err <= 1.0) {
      const bool hit_sample = step == next_sample - tau;
      tau = hit_sample ? next_sample : tau + step;
      y = y_new;
      k1 = k7;
      ++traj.accepted;
      if (hit_sample) {
        traj.samples.push_back(sample_of(unpack(y, tau), base.with_delta(schedule(tau))));
        ++sample_index;
      }
      // A step truncated at a sample boundary leaves the controller alone.
      if (step == h || !hit_sample) {
        const double grow = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
        h = std::min(opt.max_step, step * grow);
      }
    } else {
      ++traj.rejected;
      h = step * std::clamp(0.9 * std::pow(err, -0.2), 0.1, 1.0);
      if (h < opt.min_step) {
        throw NumericalFailure("mean-field step size underflow at tau=" + std::to_string(tau), tau);
      }
    }
  }
  traj.final_state = unpack(y, tau);
  return traj;
}

PeriodEstimate measure_period(std::span<const double> tau, std::span<const double> y) {
  if (tau.size() != y.size()) throw InvalidInput("tau and y series differ in length");
  PeriodEstimate est;
  for (std::size_t i = 1; i + 1 < y.size(); ++i) {
    if (!(y[i] > y[i - 1] && y[i] >= y[i + 1])) continue;
    // Vertex of the parabola through (t0,y0), (t1,y1), (t2,y2).
    const double t0 = tau[i - 1], t1 = tau[i], t2 = tau[i + 1];
    const double d01 = (y[i] - y[i - 1]) / (t1 - t0);
    const double d12 = (y[i + 1] - y[i]) / (t2 - t1);
    const double curv = (d12 - d01) / (t2 - t0);
    double t_peak = t1;
    if (curv < 0.0) t_peak = 0.5 * (t0 + t1) - d01 / (2.0 * curv);
    est.maxima.push_back(t_peak);
  }
  if (est.maxima.size() < 4) throw InvalidInput("period measurement needs at least three full cycles");
  est.period = (est.maxima.back() - est.maxima.front()) / static_cast<double>(est.maxima.size() - 1);
  return est;
}

}  // namespace hetmol
