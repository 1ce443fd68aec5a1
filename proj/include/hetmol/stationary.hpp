#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "hetmol/model.hpp"

namespace hetmol {

enum class Branch {
  kPhiZero,           // interior, cos(phi0) = +1
  kPhiPi,             // interior, cos(phi0) = -1
  kBoundaryImbalance, // x0 = d (all minority atoms bound)
  kBoundaryAtoms,     // x0 = 1 (pure atoms)
};

const char* branch_name(Branch b);

struct SteadyState {
  double x0;
  Branch branch;
  double phi0;   // NaN on the boundaries
  double y0;
  double energy;
  std::optional<double> omega2;  // unset when not evaluated
  std::optional<bool> stable;    // omega2 > 0, unset when not evaluated
  bool fold = false;             // two roots merged at a fold point
};

struct SteadyStateOptions {
  int grid_points = 2000;
  double edge_offset = 1e-9;
};

// Residual of dphi/dtau = 0 on the branch cos(phi0) = s:
//   Delta - Lambda x - s (d^2 + 2x - 3x^2) / (2 sqrt((1 - x)(x^2 - d^2))).
double steady_state_residual(double x, double s, const ScaledParams& p);

// All fixed points of the reduced equations, interior roots from a
// sign-change scan plus bisection, followed by the two boundary candidates.
// Sorted by ascending energy.
std::vector<SteadyState> find_steady_states(const ScaledParams& p, const SteadyStateOptions& opt = {});
std::vector<SteadyState> interior_steady_states(const ScaledParams& p, const SteadyStateOptions& opt = {});

// Squared small-oscillation frequency about an interior fixed point:
//   [P^2 / (4S) + 3x0 - 1] cos^2(phi0) - Lambda sqrt(S) cos(phi0),
// with S = (1 - x0)(x0^2 - d^2) and P = d^2 + 2x0 - 3x0^2.
double excitation_frequency(double x0, double phi0, const ScaledParams& p);

// Closed-form omega^2 for boundary states where one is known (pure molecules
// at d = 0, Lambda = 0: Delta^2 - 1); empty otherwise.
std::optional<double> boundary_omega2(Branch branch, const ScaledParams& p);

SteadyState ground_state(const ScaledParams& p, const SteadyStateOptions& opt = {});

enum class ScanMode { kSemiclassical, kQuantum };

struct GroundScanPoint {
  double delta;
  double y0;
  double gap;  // NaN when not evaluated
};

std::vector<double> linspace(double lo, double hi, int points);

// Ground-state molecular fraction and gap on `points` evenly spaced detunings.
// Quantum mode uses the (N, D) sector carried by `base`.
std::vector<GroundScanPoint> ground_state_scan(const ScaledParams& base, double delta_min,
                                               double delta_max, int points, ScanMode mode);

struct StabilityMap {
  std::vector<double> lambdas;
  std::vector<double> deltas;
  double d = 0.0;
  std::vector<std::uint8_t> cells;  // [lambda index * deltas.size() + delta index]

  bool unstable(std::size_t i_lambda, std::size_t i_delta) const {
    return cells[i_lambda * deltas.size() + i_delta] != 0;
  }
  std::size_t unstable_count() const;
};

// A cell is unstable when any interior steady state has omega^2 < -1e-10.
// Cells are independent; `threads` = 0 picks the hardware concurrency.
StabilityMap stability_map(const std::vector<double>& lambdas, const std::vector<double>& deltas,
                           double d, unsigned threads = 0);

struct DeltaInterval {
  double lo;
  double hi;
};

// Largest Delta interval with at least three interior steady states, two of
// them on the cos(phi0) = -1 branch (the loop joins the low-lying states).
// Edges are bisected to width 1e-4. Empty if there is no such interval.
std::optional<DeltaInterval> swallowtail_bounds(double Lambda, double d);

}  // namespace hetmol
