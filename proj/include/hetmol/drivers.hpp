#pragma once

#include <vector>

#include "hetmol/meanfield.hpp"
#include "hetmol/model.hpp"
#include "hetmol/quantum.hpp"

namespace hetmol {

// Linear detuning sweep starting from pure atoms.
struct SweepSpec {
  double Lambda = 0.0;
  double d = 0.0;
  int N = 0;  // quantum mode only
  int D = 0;
  double delta_start = 6.0;
  double delta_end = -6.0;
  double rate = -0.01;     // dDelta/dtau
  double eps = 1e-8;       // semiclassical molecular seed
  double sample_dt = 1.0;  // output stride in tau
  double hold_tau = 100.0;  // fixed-Delta_end hold for the cycle-averaged conversion; 0 skips
};

enum class SweepMode { kSemiclassical, kQuantum };

void validate(const SweepSpec& spec, SweepMode mode);

struct SweepSample {
  double tau;
  double delta;
  double y;
};

struct SweepResult {
  std::vector<SweepSample> samples;
  double y_final = 0.0;         // y when Delta reaches delta_end
  // Time average of y while Delta is held at delta_end for hold_tau; NaN
  // when hold_tau = 0. Insensitive to the oscillation phase at arrival.
  double y_hold_mean = 0.0;
  double max_norm_drift = 0.0;  // quantum runs: |sum |c|^2 - 1|; semiclassical: |norm - 1|
};

SweepResult sweep(const SweepSpec& spec, SweepMode mode);

struct AdiabaticityReport {
  double y_final;
  double y_final_half_rate;
  double drift;
  bool converged;  // drift < 0.01
  double y_hold_mean;
  double y_hold_mean_half_rate;
};

AdiabaticityReport adiabaticity_check(const SweepSpec& spec, SweepMode mode);

struct OscillationComparison {
  std::vector<double> tau;
  std::vector<double> y_semiclassical;
  std::vector<double> y_quantum;
  double quantum_norm_drift = 0.0;
};

// Population dynamics from pure atoms at fixed (Lambda, Delta, d): the
// N-particle Fock-state evolution next to the mean field seeded with
// eps = 1/(2N). The seed phase is pi/2, the relative phase on the orbit
// leaving pure atoms.
OscillationComparison oscillation_compare(double Lambda, double Delta, double d, int N,
                                          double tau_max, double sample_dt = 0.05);

// First sampled time at which |y_q - y_sc| >= tol (tau_max if never).
double agreement_window(const OscillationComparison& cmp, double tol = 0.05);

}  // namespace hetmol
