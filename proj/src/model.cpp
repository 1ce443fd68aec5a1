#include "hetmol/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hetmol/errors.hpp"

namespace hetmol {

void validate_sector(int N, int D) {
  if (N < 2) throw InvalidInput("N must be at least 2, got " + std::to_string(N));
  if (D < 0 || D > N) {
    throw InvalidInput("D must lie in [0, N], got D=" + std::to_string(D) +
                       " N=" + std::to_string(N));
  }
  if ((N - D) % 2 != 0) throw InvalidInput("N and D must have the same parity");
}

ScaledParams ScaledParams::mean_field(double Lambda, double Delta, double d) {
  if (!(d >= 0.0 && d < 1.0)) throw InvalidInput("imbalance d must lie in [0, 1)");
  ScaledParams p;
  p.Lambda = Lambda;
  p.Delta = Delta;
  p.d = d;
  return p;
}

ScaledParams ScaledParams::with_sector(double Lambda, double Delta, int N, int D) {
  validate_sector(N, D);
  if (D == N) throw InvalidInput("D = N leaves no molecular sector (d must be < 1)");
  ScaledParams p;
  p.Lambda = Lambda;
  p.Delta = Delta;
  p.N = N;
  p.D = D;
  p.d = static_cast<double>(D) / static_cast<double>(N);
  return p;
}

ScaledParams scale_params(const RawParams& raw) {
  validate_sector(raw.N, raw.D);
  if (raw.D == raw.N) throw InvalidInput("D = N leaves no molecular sector (d must be < 1)");
  if (!(raw.g > 0.0)) throw InvalidInput("coupling g must be positive");
  const auto& c = raw.chi;
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      if (c[i][j] != c[j][i]) throw InvalidInput("collision matrix chi must be symmetric");
    }
  }

  const double N = raw.N;
  const double D = raw.D;
  const double G = raw.g * std::sqrt(2.0 * N);
  const double c11 = c[kAtom1][kAtom1];
  const double c22 = c[kAtom2][kAtom2];
  const double cmm = c[kMolecule][kMolecule];
  const double c12 = c[kAtom1][kAtom2];
  const double cm1 = c[kMolecule][kAtom1];
  const double cm2 = c[kMolecule][kAtom2];

  ScaledParams p;
  p.N = raw.N;
  p.D = raw.D;
  p.d = D / N;
  p.G = G;
  p.Lambda = N * (c11 + c22 + cmm + 2.0 * c12 - 2.0 * cm1 - 2.0 * cm2) / G;
  // Transcribed term by term, including the asymmetric (D -/+ 1) factors.
  p.Delta = (raw.delta - (D - 1.0) * c11 + (D + 1.0) * c22 + (N - 1.0) * cmm -
             (N - D) * cm1 - (N + D) * cm2) /
            G;
  return p;
}

DeltaSchedule::DeltaSchedule(std::vector<Knot> knots) : knots_(std::move(knots)) {
  if (knots_.empty()) throw InvalidInput("schedule needs at least one knot");
  for (std::size_t i = 1; i < knots_.size(); ++i) {
    if (!(knots_[i].tau > knots_[i - 1].tau)) {
      throw InvalidInput("schedule knots must have strictly increasing tau");
    }
  }
}

DeltaSchedule DeltaSchedule::constant(double delta) { return DeltaSchedule({{0.0, delta}}); }

DeltaSchedule DeltaSchedule::linear_sweep(double start, double end, double rate) {
  if (rate == 0.0) throw InvalidInput("sweep rate must be nonzero");
  const double duration = (end - start) / rate;
  if (!(duration > 0.0)) throw InvalidInput("sweep rate sign does not move start toward end");
  return DeltaSchedule({{0.0, start}, {duration, end}});
}

double DeltaSchedule::operator()(double tau) const {
  if (tau <= knots_.front().tau) return knots_.front().delta;
  if (tau >= knots_.back().tau) return knots_.back().delta;
  auto hi = std::upper_bound(knots_.begin(), knots_.end(), tau,
                             [](double t, const Knot& k) { return t < k.tau; });
  auto lo = hi - 1;
  const double w = (tau - lo->tau) / (hi->tau - lo->tau);
  return lo->delta + w * (hi->delta - lo->delta);
}

bool DeltaSchedule::is_constant() const {
  return std::all_of(knots_.begin(), knots_.end(),
                     [&](const Knot& k) { return k.delta == knots_.front().delta; });
}

}  // namespace hetmol
