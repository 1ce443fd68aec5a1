#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "hetmol/model.hpp"

namespace hetmol {

struct FockState {
  int n1;
  int n2;
  int m;
};

// Number states |n1, n2, m> with n1 + n2 + 2m = N and n1 - n2 = D, ordered
// by ascending molecule number m.
struct FockSector {
  int N = 0;
  int D = 0;
  std::vector<FockState> states;

  std::size_t size() const { return states.size(); }
};

FockSector build_sector(int N, int D);

// Real symmetric tridiagonal matrix in units of G. offdiag[i] couples
// basis states i and i + 1.
struct TridiagonalHamiltonian {
  std::vector<double> diag;
  std::vector<double> offdiag;

  std::size_t size() const { return diag.size(); }
};

TridiagonalHamiltonian build_hamiltonian(const FockSector& sector, const ScaledParams& p);

// Eigenpairs sorted by ascending eigenvalue. Eigenvectors are stored column
// by column; each has its largest-magnitude component positive.
struct Spectrum {
  std::vector<double> eigenvalues;
  std::vector<double> eigenvectors;  // column-major, size n*n

  std::size_t size() const { return eigenvalues.size(); }
  std::span<const double> vector(std::size_t k) const {
    return {eigenvectors.data() + k * size(), size()};
  }
  double gap() const { return eigenvalues.at(1) - eigenvalues.at(0); }
};

// Implicit-shift QL with eigenvector accumulation. Throws NumericalFailure
// if any eigenvalue needs more than 50 sweeps.
Spectrum diagonalize(const TridiagonalHamiltonian& h);

struct GroundObservables {
  double y0;   // 2<m>/N in the ground state
  double gap;  // E1 - E0 in units of G
  std::vector<double> per_pair_energies;  // eigenvalues * 2/N
};

GroundObservables ground_observables(const Spectrum& spectrum, const FockSector& sector);

struct QuantumState {
  std::vector<std::complex<double>> amplitudes;
  double tau = 0.0;
};

// |n1 = (N+D)/2, n2 = (N-D)/2, m = 0>.
QuantumState pure_atom_state(const FockSector& sector);
QuantumState eigenstate(const Spectrum& spectrum, std::size_t k);

// 2<m>/N. The state need not be normalized; the raw expectation is returned.
double molecular_fraction(std::span<const std::complex<double>> amplitudes,
                          const FockSector& sector);
double norm_squared(std::span<const std::complex<double>> amplitudes);

// Exact propagation at fixed Delta via the eigen-decomposition.
QuantumState spectral_propagate(const QuantumState& state0, const Spectrum& spectrum, double tau);

struct EvolveOptions {
  // Allowed |sum |c|^2 - 1| drift accumulated over the whole run.
  double norm_tol = 1e-10;
  double max_step = 0.05;
  double min_step = 1e-12;
  double sample_dt = 0.05;
};

struct QuantumSample {
  double tau;
  double delta;
  double y;
  double norm;  // sum |c|^2
};

struct QuantumTrajectory {
  std::vector<QuantumSample> samples;
  QuantumState final_state;
  double max_norm_drift = 0.0;
  std::size_t steps = 0;
};

// Integrates i d|psi>/dtau = H(Delta(tau))/G |psi> from state0.tau to tau_max
// with classic RK4. The step is shrunk until the per-step norm change stays
// within norm_tol * h / duration; the state is never renormalized. Samples
// are reported at multiples of sample_dt and at tau_max.
QuantumTrajectory evolve(const QuantumState& state0, const FockSector& sector,
                         const ScaledParams& p, const DeltaSchedule& schedule, double tau_max,
                         const EvolveOptions& options = {});

}  // namespace hetmol
