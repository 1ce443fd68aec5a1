#include "hetmol/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "hetmol/errors.hpp"

namespace hetmol {

using cplx = std::complex<double>;

FockSector build_sector(int N, int D) {
  validate_sector(N, D);
  FockSector sector;
  sector.N = N;
  sector.D = D;
  const int m_max = (N - D) / 2;
  sector.states.reserve(static_cast<std::size_t>(m_max) + 1);
  for (int m = 0; m <= m_max; ++m) {
    FockState s{(N - 2 * m + D) / 2, (N - 2 * m - D) / 2, m};
    if (s.n1 + s.n2 + 2 * s.m != N || s.n1 - s.n2 != D || s.n2 < 0) {
      throw InvalidInput("inconsistent Fock state in sector construction");
    }
    sector.states.push_back(s);
  }
  return sector;
}

namespace {

void require_matching(const FockSector& sector, const ScaledParams& p) {
  if (!p.has_sector()) throw InvalidInput("parameters carry no (N, D) sector");
  if (sector.N != p.N || sector.D != p.D) {
    throw InvalidInput("Fock sector does not match the parameter set's (N, D)");
  }
}

// Delta-independent and Delta-proportional parts of the diagonal.
struct DiagonalParts {
  std::vector<double> base;
  std::vector<double> slope;
};

DiagonalParts diagonal_parts(const FockSector& sector, double Lambda) {
  DiagonalParts parts;
  const double N = sector.N;
  for (const auto& s : sector.states) {
    const double atoms = s.n1 + s.n2;
    parts.base.push_back(Lambda / (4.0 * N) * atoms * atoms);
    parts.slope.push_back(-0.5 * atoms);
  }
  return parts;
}

std::vector<double> coupling(const FockSector& sector) {
  std::vector<double> off;
  const double scale = 1.0 / std::sqrt(2.0 * sector.N);
  for (std::size_t i = 0; i + 1 < sector.size(); ++i) {
    const auto& s = sector.states[i];
    off.push_back(std::sqrt(static_cast<double>(s.m + 1) * s.n1 * s.n2) * scale);
  }
  return off;
}

}  // namespace

TridiagonalHamiltonian build_hamiltonian(const FockSector& sector, const ScaledParams& p) {
  require_matching(sector, p);
  const auto parts = diagonal_parts(sector, p.Lambda);
  TridiagonalHamiltonian h;
  h.diag.resize(sector.size());
  for (std::size_t i = 0; i < sector.size(); ++i) h.diag[i] = parts.base[i] + p.Delta * parts.slope[i];
  h.offdiag = coupling(sector);
  return h;
}

Spectrum diagonalize(const TridiagonalHamiltonian& h) {
  const std::size_t n = h.size();
  if (n == 0 || h.offdiag.size() + 1 != n) throw InvalidInput("malformed tridiagonal matrix");

  std::vector<double> d = h.diag;
  std::vector<double> e(n, 0.0);
  std::copy(h.offdiag.begin(), h.offdiag.end(), e.begin());
  // z(row, col) = z[col * n + row]; column j is the j-th eigenvector.
  std::vector<double> z(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) z[i * n + i] = 1.0;

  constexpr int kMaxSweeps = 50;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    std::size_t m;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m == l) break;
      if (iter++ == kMaxSweeps) {
        throw NumericalFailure("tridiagonal QL failed to converge for eigenvalue " +
                                   std::to_string(l),
                               static_cast<double>(l));
      }
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      bool underflow = false;
      for (std::size_t i = m; i-- > l;) {
        double f = s * e[i];
        const double b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[m] = 0.0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
        double* zi = &z[i * n];
        double* zi1 = &z[(i + 1) * n];
        for (std::size_t k = 0; k < n; ++k) {
          f = zi1[k];
          zi1[k] = s * zi[k] + c * f;
          zi[k] = c * zi[k] - s * f;
        }
      }
      if (underflow) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    } while (m != l);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });

  Spectrum spec;
  spec.eigenvalues.resize(n);
  spec.eigenvectors.resize(n * n);
  for (std::size_t k = 0; k < n; ++k) {
    const double* src = &z[order[k] * n];
    double* dst = &spec.eigenvectors[k * n];
    spec.eigenvalues[k] = d[order[k]];
    double big = 0.0;
    for (std::size_t i = 0; i < n; ++i) big = std::max(big, std::abs(src[i]));
    // First component within rounding of the maximum decides the sign.
    std::size_t lead = 0;
    while (std::abs(src[lead]) < big * (1.0 - 1e-12)) ++lead;
    const double sign = src[lead] < 0.0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < n; ++i) dst[i] = sign * src[i];
  }
  return spec;
}

GroundObservables ground_observables(const Spectrum& spectrum, const FockSector& sector) {
  if (spectrum.size() != sector.size()) throw InvalidInput("spectrum does not match sector");
  if (spectrum.size() < 2) throw InvalidInput("sector too small for an energy gap");
  GroundObservables obs;
  const auto v0 = spectrum.vector(0);
  double m_mean = 0.0;
  for (std::size_t i = 0; i < sector.size(); ++i) m_mean += sector.states[i].m * v0[i] * v0[i];
  obs.y0 = 2.0 * m_mean / sector.N;
  obs.gap = spectrum.gap();
  obs.per_pair_energies.reserve(spectrum.size());
  for (double e : spectrum.eigenvalues) obs.per_pair_energies.push_back(e * 2.0 / sector.N);
  return obs;
}

QuantumState pure_atom_state(const FockSector& sector) {
  QuantumState s;
  s.amplitudes.assign(sector.size(), cplx{0.0, 0.0});
  s.amplitudes.at(0) = 1.0;
  return s;
}

QuantumState eigenstate(const Spectrum& spectrum, std::size_t k) {
  QuantumState s;
  const auto v = spectrum.vector(k);
  s.amplitudes.assign(v.begin(), v.end());
  return s;
}

double molecular_fraction(std::span<const cplx> amplitudes, const FockSector& sector) {
  if (amplitudes.size() != sector.size()) throw InvalidInput("state does not match sector");
  double m_mean = 0.0;
  for (std::size_t i = 0; i < amplitudes.size(); ++i) m_mean += sector.states[i].m * std::norm(amplitudes[i]);
  return 2.0 * m_mean / sector.N;
}

double norm_squared(std::span<const cplx> amplitudes) {
  long double sum = 0.0L;
  for (const auto& c : amplitudes) sum += static_cast<long double>(std::norm(c));
  return static_cast<double>(sum);
}

QuantumState spectral_propagate(const QuantumState& state0, const Spectrum& spectrum, double tau) {
  const std::size_t n = spectrum.size();
  if (state0.amplitudes.size() != n) throw InvalidInput("state does not match spectrum");
  const double dt = tau - state0.tau;
  QuantumState out;
  out.tau = tau;
  out.amplitudes.assign(n, cplx{0.0, 0.0});
  for (std::size_t k = 0; k < n; ++k) {
    const auto v = spectrum.vector(k);
    cplx overlap{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) overlap += v[i] * state0.amplitudes[i];
    const cplx coeff = overlap * std::polar(1.0, -spectrum.eigenvalues[k] * dt);
    for (std::size_t i = 0; i < n; ++i) out.amplitudes[i] += coeff * v[i];
  }
  return out;
}

namespace {

// Tridiagonal Hamiltonian whose diagonal is affine in Delta. Products are
// taken with H - shift so that the integrated phase stays small.
class EvolutionOperator {
 public:
  EvolutionOperator(const FockSector& sector, double Lambda)
      : parts_(diagonal_parts(sector, Lambda)), off_(coupling(sector)), diag_(sector.size()) {}

  void set_delta(double delta) {
    for (std::size_t i = 0; i < diag_.size(); ++i) diag_[i] = parts_.base[i] + delta * parts_.slope[i];
  }

  // out = (H - shift) in
  void apply(const std::vector<cplx>& in, std::vector<cplx>& out, double shift) const {
    const std::size_t n = diag_.size();
    for (std::size_t i = 0; i < n; ++i) {
      cplx acc = (diag_[i] - shift) * in[i];
      if (i > 0) acc += off_[i - 1] * in[i - 1];
      if (i + 1 < n) acc += off_[i] * in[i + 1];
      out[i] = acc;
    }
  }

  double expectation(const std::vector<cplx>& psi) const {
    const std::size_t n = diag_.size();
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      num += diag_[i] * std::norm(psi[i]);
      if (i + 1 < n) num += 2.0 * off_[i] * std::real(std::conj(psi[i]) * psi[i + 1]);
      den += std::norm(psi[i]);
    }
    return num / den;
  }

  // Gershgorin bound on the spectral radius of H - shift.
  double radius(double shift) const {
    const std::size_t n = diag_.size();
    double r = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double row = std::abs(diag_[i] - shift);
      if (i > 0) row += off_[i - 1];
      if (i + 1 < n) row += off_[i];
      r = std::max(r, row);
    }
    return r;
  }

 private:
  DiagonalParts parts_;
  std::vector<double> off_;
  std::vector<double> diag_;
};

}  // namespace

QuantumTrajectory evolve(const QuantumState& state0, const FockSector& sector, const ScaledParams& p,
                         const DeltaSchedule& schedule, double tau_max, const EvolveOptions& opt) {
  require_matching(sector, p);
  const std::size_t n = sector.size();
  if (state0.amplitudes.size() != n) throw InvalidInput("state does not match sector");
  if (!(tau_max >= state0.tau)) throw InvalidInput("tau_max must not precede the initial time");
  if (!(opt.norm_tol > 0.0) || !(opt.max_step > 0.0) || !(opt.sample_dt > 0.0)) {
    throw InvalidInput("evolution options must be positive");
  }
  const double norm0 = norm_squared(state0.amplitudes);
  if (std::abs(norm0 - 1.0) > 1e-6) throw InvalidInput("initial quantum state is not normalized");

  EvolutionOperator op(sector, p.Lambda);
  std::vector<cplx> psi = state0.amplitudes, trial(n), acc(n), k(n), stage(n), w1(n), w2(n);

  const double tau0 = state0.tau;
  const double duration = std::max(tau_max - tau0, opt.sample_dt);
  double tau = tau0;
  double phase = 0.0;  // integral of the shift
  double norm_now = norm0;

  QuantumTrajectory traj;
  auto record = [&](double t) {
    traj.samples.push_back({t, schedule(t), molecular_fraction(psi, sector), norm_now});
  };
  record(tau);

  std::size_t sample_index = 1;
  double h = opt.max_step;
  while (tau < tau_max) {
    const double next_sample = std::min(tau0 + sample_index * opt.sample_dt, tau_max);

    op.set_delta(schedule(tau));
    const double shift = op.expectation(psi);
    // RK4 is stable for |h (E - shift)| <= 2 sqrt(2).
    const double h_stable = 2.5 / std::max(op.radius(shift), 1e-300);
    // Leading norm change of one step: h^6 |(H - shift)^3 psi|^2 / 72.
    op.apply(psi, w1, shift);
    op.apply(w1, w2, shift);
    op.apply(w2, stage, shift);
    const double q = norm_squared(stage);
    const double h_drift = q > 0.0 ? 0.9 * std::pow(72.0 * opt.norm_tol / (duration * q), 0.2)
                                   : opt.max_step;
    h = std::min({h * 2.0, opt.max_step, h_stable, h_drift});

    for (;;) {
      if (h < opt.min_step) {
        throw NumericalFailure("quantum step size underflow at tau=" + std::to_string(tau), tau);
      }
      const double step = std::min(h, next_sample - tau);
      const double budget = opt.norm_tol * step / duration;

      // Classic RK4 on d psi/dtau = -i (H - shift) psi.
      auto deriv = [&](const std::vector<cplx>& in, double t) {
        op.set_delta(schedule(t));
        op.apply(in, k, shift);
        for (auto& c : k) c = cplx{c.imag(), -c.real()};
      };
      deriv(psi, tau);
      for (std::size_t i = 0; i < n; ++i) {
        acc[i] = k[i];
        stage[i] = psi[i] + 0.5 * step * k[i];
      }
      deriv(stage, tau + 0.5 * step);
      for (std::size_t i = 0; i < n; ++i) {
        acc[i] += 2.0 * k[i];
        stage[i] = psi[i] + 0.5 * step * k[i];
      }
      deriv(stage, tau + 0.5 * step);
      for (std::size_t i = 0; i < n; ++i) {
        acc[i] += 2.0 * k[i];
        stage[i] = psi[i] + step * k[i];
      }
      deriv(stage, tau + step);
      for (std::size_t i = 0; i < n; ++i) trial[i] = psi[i] + (step / 6.0) * (acc[i] + k[i]);

      const double norm_trial = norm_squared(trial);
      // Rounding in the norm sum sets a floor below which drift is not resolvable.
      const double floor = 16.0 * std::numeric_limits<double>::epsilon();
      if (std::abs(norm_trial - norm_now) > 4.0 * std::max(budget, floor)) {
        h = 0.5 * step;
        continue;
      }
      psi.swap(trial);
      norm_now = norm_trial;
      tau = (step == next_sample - tau) ? next_sample : tau + step;
      phase += shift * step;
      ++traj.steps;
      break;
    }
    traj.max_norm_drift = std::max(traj.max_norm_drift, std::abs(norm_now - norm0));
    if (tau >= next_sample) {
      record(tau);
      ++sample_index;
    }
  }

  traj.final_state.tau = tau;
  traj.final_state.amplitudes = psi;
  const cplx rotation = std::polar(1.0, -phase);
  for (auto& c : traj.final_state.amplitudes) c *= rotation;
  return traj;
}

}  // namespace hetmol
