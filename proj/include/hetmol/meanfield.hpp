#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "hetmol/model.hpp"

namespace hetmol {

// Classical mode amplitudes normalized so |a1|^2 + |a2|^2 + 2|am|^2 = 1.
struct MeanFieldState {
  std::complex<double> a1;
  std::complex<double> a2;
  std::complex<double> am;
  double tau = 0.0;

  double norm() const { return std::norm(a1) + std::norm(a2) + 2.0 * std::norm(am); }
  double x() const { return std::norm(a1) + std::norm(a2); }
  double y() const { return 1.0 - x(); }
  double imbalance() const { return std::norm(a1) - std::norm(a2); }
};

struct AmplitudeRates {
  std::complex<double> da1;
  std::complex<double> da2;
  std::complex<double> dam;
};

struct CanonicalPoint {
  double x;
  double phi;
};

// Canonical reading of an amplitude state. phi is empty when any amplitude
// vanishes and the relative phase is undefined.
struct CanonicalReading {
  double x;
  double d;
  std::optional<double> phi;
};

struct CanonicalRates {
  double dx;
  double dphi;
};

// dx/dtau and dphi/dtau of the reduced (x, phi) equations. Singular at x = d
// and x = 1; throws DomainError unless d < x < 1.
CanonicalRates rhs_canonical(const CanonicalPoint& pt, const ScaledParams& p);

// Globally regular amplitude form:
//   i a1' = (Lambda x - Delta)/2 a1 + a2* am / sqrt(2)
//   i a2' = (Lambda x - Delta)/2 a2 + a1* am / sqrt(2)
//   i am' = a1 a2 / sqrt(2)
AmplitudeRates rhs_amplitudes(const MeanFieldState& s, const ScaledParams& p);

// (dx/dtau, dphi/dtau) implied by amplitude rates; requires all amplitudes nonzero.
CanonicalRates induced_canonical_rates(const MeanFieldState& s, const AmplitudeRates& r);

// H = (Lambda/2) x^2 - Delta x + sqrt((1 - x)(x^2 - d^2)) cos(phi), energy per
// pair of atoms. Throws DomainError outside d <= x <= 1.
double classical_energy(const CanonicalPoint& pt, const ScaledParams& p);
// The same energy from amplitudes; valid everywhere including x = d, 1.
double amplitude_energy(const MeanFieldState& s, const ScaledParams& p);

CanonicalReading to_canonical(const MeanFieldState& s);
// Population split |a1|^2 = (x+d)/2, |a2|^2 = (x-d)/2, |am|^2 = (1-x)/2 with
// arg a2 = arg am = 0 and arg a1 = phi.
MeanFieldState from_canonical(double x, double phi, double d);

// Pure atoms with a molecular seed |am|^2 = eps/2 at relative phase phi.
// eps = 0 gives exact pure atoms, which still evolve in the amplitude form.
MeanFieldState pure_atom_state(double d, double eps = 1e-8, double phi = 3.141592653589793);

struct IntegrateOptions {
  double rtol = 1e-12;
  double max_step = 0.1;
  double min_step = 1e-14;
  double sample_dt = 0.05;
};

struct MeanFieldSample {
  double tau;
  double delta;
  double x;
  double y;
  double phi;  // NaN when undefined
  double energy;
  double norm;
  double imbalance;
};

struct MeanFieldTrajectory {
  std::vector<MeanFieldSample> samples;
  MeanFieldState final_state;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
};

// Adaptive Dormand-Prince 5(4) integration of the amplitude form from s0.tau
// to tau_max. Samples at multiples of sample_dt and at tau_max. Throws
// NumericalFailure (with the time reached) if the step size underflows.
MeanFieldTrajectory integrate(const MeanFieldState& s0, const ScaledParams& p, double tau_max,
                              const IntegrateOptions& options = {});
MeanFieldTrajectory integrate(const MeanFieldState& s0, const ScaledParams& p,
                              const DeltaSchedule& schedule, double tau_max,
                              const IntegrateOptions& options = {});

struct PeriodEstimate {
  double period;
  std::vector<double> maxima;  // interpolated times of the local maxima
};

// Mean spacing of successive maxima of y(tau), each located by a parabola
// through the sampled triple around it. Needs at least three full cycles.
PeriodEstimate measure_period(std::span<const double> tau, std::span<const double> y);

}  // namespace hetmol
