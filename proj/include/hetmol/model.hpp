#pragma once

#include <array>
#include <vector>

namespace hetmol {

// Mode indices for the collision matrix.
enum Mode : int { kAtom1 = 0, kAtom2 = 1, kMolecule = 2 };

// Physical parameters of the three-mode Hamiltonian (hbar = 1).
struct RawParams {
  double delta = 0.0;  // bare molecular detuning
  double g = 1.0;      // atom-molecule coupling, must be > 0
  std::array<std::array<double, 3>, 3> chi{};  // symmetric collision strengths
  int N = 2;  // atoms + 2 x molecules
  int D = 0;  // n1 - n2
};

// Dimensionless control set. Energies are in units of G, times in 1/G.
//
// N and D are the particle numbers of a quantum sector. Semiclassical-only
// parameter sets carry N = D = 0 and an arbitrary imbalance d; every quantum
// entry point checks has_sector().
struct ScaledParams {
  double Lambda = 0.0;
  double Delta = 0.0;
  double d = 0.0;
  int N = 0;
  int D = 0;
  double G = 1.0;

  bool has_sector() const { return N >= 2; }

  // Semiclassical parameter set with no particle numbers attached.
  static ScaledParams mean_field(double Lambda, double Delta, double d);
  // Parameter set with a quantum sector; d = D/N.
  static ScaledParams with_sector(double Lambda, double Delta, int N, int D);

  ScaledParams with_delta(double Delta) const {
    ScaledParams p = *this;
    p.Delta = Delta;
    return p;
  }
};

// Throws InvalidInput unless N >= 2, 0 <= D <= N and N, D share parity.
void validate_sector(int N, int D);

ScaledParams scale_params(const RawParams& raw);

// Piecewise-linear detuning protocol Delta(tau). Outside the knot range the
// end values are held.
class DeltaSchedule {
 public:
  struct Knot {
    double tau;
    double delta;
  };

  explicit DeltaSchedule(std::vector<Knot> knots);

  static DeltaSchedule constant(double delta);
  // Delta(tau) = start + rate * tau until `end` is reached, then held.
  static DeltaSchedule linear_sweep(double start, double end, double rate);

  double operator()(double tau) const;
  bool is_constant() const;
  const std::vector<Knot>& knots() const { return knots_; }

 private:
  std::vector<Knot> knots_;
};

}  // namespace hetmol
