#include "hetmol/drivers.hpp"

#include <cmath>
#include <numbers>

#include "hetmol/errors.hpp"

namespace hetmol {

namespace {

int sector_imbalance(double d, int N) {
  const double D = d * N;
  const int rounded = static_cast<int>(std::lround(D));
  if (std::abs(D - rounded) > 1e-9) throw InvalidInput("d * N must be an integer");
  return rounded;
}

template <class Samples>
double time_average_y(const Samples& samples) {
  if (samples.size() < 2) return samples.empty() ? std::nan("") : samples.front().y;
  double area = 0.0;
  for (std::size_t i = 1; i < samples.size(); ++i) {
    area += 0.5 * (samples[i].y + samples[i - 1].y) * (samples[i].tau - samples[i - 1].tau);
  }
  return area / (samples.back().tau - samples.front().tau);
}

constexpr double kHoldSampleDt = 0.05;

}  // namespace

void validate(const SweepSpec& spec, SweepMode mode) {
  if (spec.rate == 0.0) throw InvalidInput("sweep rate must be nonzero");
  if (spec.delta_start == spec.delta_end) throw InvalidInput("sweep endpoints coincide");
  if ((spec.delta_end - spec.delta_start) * spec.rate < 0.0) {
    throw InvalidInput("sweep rate sign must point from delta_start to delta_end");
  }
  if (!(spec.sample_dt > 0.0)) throw InvalidInput("sample stride must be positive");
  if (!(spec.hold_tau >= 0.0) || !std::isfinite(spec.hold_tau)) {
    throw InvalidInput("hold time must be finite and non-negative");
  }
  if (mode == SweepMode::kSemiclassical) {
    if (!(spec.d >= 0.0 && spec.d < 1.0)) throw InvalidInput("imbalance d must lie in [0, 1)");
    if (!(spec.eps > 0.0 && spec.eps <= 1e-2)) throw InvalidInput("seed eps must lie in (0, 1e-2]");
  } else {
    ScaledParams::with_sector(spec.Lambda, spec.delta_start, spec.N, spec.D);
  }
}

SweepResult sweep(const SweepSpec& spec, SweepMode mode) {
  validate(spec, mode);
  const auto schedule = DeltaSchedule::linear_sweep(spec.delta_start, spec.delta_end, spec.rate);
  const double tau_end = schedule.knots().back().tau;

  SweepResult result;
  result.y_hold_mean = std::nan("");
  if (mode == SweepMode::kSemiclassical) {
    const auto p = ScaledParams::mean_field(spec.Lambda, spec.delta_start, spec.d);
    IntegrateOptions opt;
    opt.sample_dt = spec.sample_dt;
    const auto traj = integrate(pure_atom_state(spec.d, spec.eps), p, schedule, tau_end, opt);
    for (const auto& s : traj.samples) {
      result.samples.push_back({s.tau, s.delta, s.y});
      result.max_norm_drift = std::max(result.max_norm_drift, std::abs(s.norm - 1.0));
    }
    if (spec.hold_tau > 0.0) {
      IntegrateOptions hold_opt;
      hold_opt.sample_dt = kHoldSampleDt;
      const auto hold = integrate(traj.final_state, p.with_delta(spec.delta_end),
                                  tau_end + spec.hold_tau, hold_opt);
      for (const auto& s : hold.samples) {
        result.max_norm_drift = std::max(result.max_norm_drift, std::abs(s.norm - 1.0));
      }
      result.y_hold_mean = time_average_y(hold.samples);
    }
  } else {
    const auto p = ScaledParams::with_sector(spec.Lambda, spec.delta_start, spec.N, spec.D);
    const auto sector = build_sector(spec.N, spec.D);
    EvolveOptions opt;
    opt.norm_tol = 1e-8;
    opt.sample_dt = spec.sample_dt;
    const auto traj = evolve(pure_atom_state(sector), sector, p, schedule, tau_end, opt);
    for (const auto& s : traj.samples) result.samples.push_back({s.tau, s.delta, s.y});
    result.max_norm_drift = traj.max_norm_drift;
    if (spec.hold_tau > 0.0) {
      EvolveOptions hold_opt = opt;
      hold_opt.sample_dt = kHoldSampleDt;
      const auto hold = evolve(traj.final_state, sector, p, DeltaSchedule::constant(spec.delta_end),
                               tau_end + spec.hold_tau, hold_opt);
      result.max_norm_drift += hold.max_norm_drift;
      result.y_hold_mean = time_average_y(hold.samples);
    }
  }
  result.y_final = result.samples.back().y;
  return result;
}

AdiabaticityReport adiabaticity_check(const SweepSpec& spec, SweepMode mode) {
  SweepSpec half = spec;
  half.rate = 0.5 * spec.rate;
  AdiabaticityReport report;
  const auto full_run = sweep(spec, mode);
  const auto half_run = sweep(half, mode);
  report.y_final = full_run.y_final;
  report.y_final_half_rate = half_run.y_final;
  report.y_hold_mean = full_run.y_hold_mean;
  report.y_hold_mean_half_rate = half_run.y_hold_mean;
  report.drift = std::abs(report.y_final - report.y_final_half_rate);
  report.converged = report.drift < 0.01;
  return report;
}

OscillationComparison oscillation_compare(double Lambda, double Delta, double d, int N,
                                          double tau_max, double sample_dt) {
  const int D = sector_imbalance(d, N);
  const auto pq = ScaledParams::with_sector(Lambda, Delta, N, D);
  const auto sector = build_sector(N, D);
  EvolveOptions qopt;
  qopt.sample_dt = sample_dt;
  qopt.norm_tol = 1e-9;
  const auto quantum = evolve(pure_atom_state(sector), sector, pq, DeltaSchedule::constant(Delta),
                              tau_max, qopt);

  const auto pc = ScaledParams::mean_field(Lambda, Delta, pq.d);
  IntegrateOptions copt;
  copt.sample_dt = sample_dt;
  const double eps = 1.0 / (2.0 * N);
  const auto classical = integrate(pure_atom_state(pq.d, eps, 0.5 * std::numbers::pi), pc, tau_max, copt);

  if (quantum.samples.size() != classical.samples.size()) {
    throw NumericalFailure("quantum and mean-field sample grids differ", tau_max);
  }
  OscillationComparison cmp;
  for (std::size_t i = 0; i < quantum.samples.size(); ++i) {
    cmp.tau.push_back(quantum.samples[i].tau);
    cmp.y_quantum.push_back(quantum.samples[i].y);
    cmp.y_semiclassical.push_back(classical.samples[i].y);
  }
  cmp.quantum_norm_drift = quantum.max_norm_drift;
  return cmp;
}

double agreement_window(const OscillationComparison& cmp, double tol) {
  for (std::size_t i = 0; i < cmp.tau.size(); ++i) {
    if (std::abs(cmp.y_quantum[i] - cmp.y_semiclassical[i]) >= tol) return cmp.tau[i];
  }
  return cmp.tau.empty() ? 0.0 : cmp.tau.back();
}

}  // namespace hetmol
