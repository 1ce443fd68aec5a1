#include "hetmol/stationary.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

#include "hetmol/errors.hpp"
#include "hetmol/meanfield.hpp"
#include "hetmol/quantum.hpp"

namespace hetmol {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Root {
  double x;
  int cell;
};

double bisect(double lo, double hi, double s, const ScaledParams& p) {
  double flo = steady_state_residual(lo, s, p);
  double fhi = steady_state_residual(hi, s, p);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = steady_state_residual(mid, s, p);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }
  return std::abs(flo) <= std::abs(fhi) ? lo : hi;
}

std::vector<Root> scan_roots(double lo, double hi, int points, double s, const ScaledParams& p) {
  std::vector<Root> roots;
  double x_prev = lo;
  double f_prev = steady_state_residual(lo, s, p);
  if (f_prev == 0.0) roots.push_back({lo, 0});
  for (int i = 1; i < points; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) / (points - 1);
    const double f = steady_state_residual(x, s, p);
    if (f == 0.0) {
      roots.push_back({x, i});
    } else if (f_prev != 0.0 && (f < 0.0) != (f_prev < 0.0)) {
      roots.push_back({bisect(x_prev, x, s, p), i - 1});
    }
    x_prev = x;
    f_prev = f;
  }
  return roots;
}

// Interior roots on one branch, with refinement where roots crowd together.
std::vector<std::pair<double, bool>> branch_roots(double s, const ScaledParams& p,
                                                  const SteadyStateOptions& opt) {
  const double lo = p.d + opt.edge_offset;
  const double hi = 1.0 - opt.edge_offset;
  const int n = opt.grid_points;
  auto roots = scan_roots(lo, hi, n, s, p);

  const double cell = (hi - lo) / (n - 1);
  for (std::size_t i = 0; i + 1 < roots.size(); ++i) {
    if (roots[i + 1].cell - roots[i].cell > 1) continue;
    const int first = std::max(roots[i].cell - 1, 0);
    const int last = std::min(roots[i + 1].cell + 2, n - 1);
    const double a = lo + first * cell, b = lo + last * cell;
    auto fine = scan_roots(a, b, 10 * (last - first) + 1, s, p);
    std::vector<Root> merged;
    for (const auto& r : roots) {
      if (r.x < a || r.x > b) merged.push_back(r);
    }
    for (auto& r : fine) merged.push_back({r.x, first + r.cell / 10});
    std::sort(merged.begin(), merged.end(), [](const Root& u, const Root& v) { return u.x < v.x; });
    roots = std::move(merged);
    // Skip past the refined window.
    while (i + 1 < roots.size() && roots[i + 1].x <= b) ++i;
  }

  std::vector<std::pair<double, bool>> out;
  for (const auto& r : roots) {
    if (!out.empty() && r.x - out.back().first < 1e-6) {
      out.back().first = 0.5 * (out.back().first + r.x);
      out.back().second = true;
    } else {
      out.emplace_back(r.x, false);
    }
  }
  return out;
}

}  // namespace

const char* branch_name(Branch b) {
  switch (b) {
    case Branch::kPhiZero: return "phi0=0";
    case Branch::kPhiPi: return "phi0=pi";
    case Branch::kBoundaryImbalance: return "x0=d";
    case Branch::kBoundaryAtoms: return "x0=1";
  }
  return "?";
}

double steady_state_residual(double x, double s, const ScaledParams& p) {
  const double d = p.d;
  const double S = (1.0 - x) * (x * x - d * d);
  return p.Delta - p.Lambda * x - s * (d * d + 2.0 * x - 3.0 * x * x) / (2.0 * std::sqrt(S));
}

double excitation_frequency(double x0, double phi0, const ScaledParams& p) {
  const double d = p.d;
  if (!(x0 > d && x0 < 1.0)) throw DomainError("excitation frequency needs an interior state");
  const double S = (1.0 - x0) * (x0 * x0 - d * d);
  const double P = d * d + 2.0 * x0 - 3.0 * x0 * x0;
  const double c = std::cos(phi0);
  return (P * P / (4.0 * S) + 3.0 * x0 - 1.0) * c * c - p.Lambda * std::sqrt(S) * c;
}

std::optional<double> boundary_omega2(Branch branch, const ScaledParams& p) {
  if (branch == Branch::kBoundaryImbalance && p.d == 0.0 && p.Lambda == 0.0) {
    return p.Delta * p.Delta - 1.0;
  }
  return std::nullopt;
}

std::vector<SteadyState> interior_steady_states(const ScaledParams& p, const SteadyStateOptions& opt) {
  if (!(p.d >= 0.0 && p.d < 1.0)) throw InvalidInput("imbalance d must lie in [0, 1)");
  if (opt.grid_points < 3) throw InvalidInput("root scan needs at least 3 grid points");
  std::vector<SteadyState> states;
  for (const double s : {1.0, -1.0}) {
    const double phi0 = s > 0.0 ? 0.0 : std::numbers::pi;
    for (const auto& [x0, fold] : branch_roots(s, p, opt)) {
      SteadyState st;
      st.x0 = x0;
      st.branch = s > 0.0 ? Branch::kPhiZero : Branch::kPhiPi;
      st.phi0 = phi0;
      st.y0 = 1.0 - x0;
      st.energy = classical_energy({x0, phi0}, p);
      st.omega2 = excitation_frequency(x0, phi0, p);
      st.stable = *st.omega2 > 0.0;
      st.fold = fold;
      states.push_back(st);
    }
  }
  return states;
}

std::vector<SteadyState> find_steady_states(const ScaledParams& p, const SteadyStateOptions& opt) {
  auto states = interior_steady_states(p, opt);
  for (const auto& [x0, branch] : {std::pair{p.d, Branch::kBoundaryImbalance},
                                   std::pair{1.0, Branch::kBoundaryAtoms}}) {
    SteadyState st;
    st.x0 = x0;
    st.branch = branch;
    st.phi0 = kNaN;
    st.y0 = 1.0 - x0;
    st.energy = classical_energy({x0, 0.0}, p);
    st.omega2 = boundary_omega2(branch, p);
    if (st.omega2) st.stable = *st.omega2 > 0.0;
    states.push_back(st);
  }
  std::stable_sort(states.begin(), states.end(),
                   [](const SteadyState& a, const SteadyState& b) { return a.energy < b.energy; });
  return states;
}

SteadyState ground_state(const ScaledParams& p, const SteadyStateOptions& opt) {
  return find_steady_states(p, opt).front();
}

std::vector<double> linspace(double lo, double hi, int points) {
  if (points < 2) throw InvalidInput("a grid needs at least two points");
  if (!(hi > lo)) throw InvalidInput("grid bounds must be increasing");
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i) grid[i] = lo + (hi - lo) * static_cast<double>(i) / (points - 1);
  grid.back() = hi;
  return grid;
}

std::vector<GroundScanPoint> ground_state_scan(const ScaledParams& base, double delta_min,
                                               double delta_max, int points, ScanMode mode) {
  const auto deltas = linspace(delta_min, delta_max, points);
  std::vector<GroundScanPoint> out;
  out.reserve(deltas.size());
  if (mode == ScanMode::kSemiclassical) {
    for (double delta : deltas) {
      const auto gs = ground_state(base.with_delta(delta));
      double gap = kNaN;
      if (gs.omega2 && *gs.omega2 >= 0.0) gap = std::sqrt(*gs.omega2);
      out.push_back({delta, gs.y0, gap});
    }
    return out;
  }
  const auto sector = build_sector(base.N, base.D);
  if (!base.has_sector()) throw InvalidInput("quantum scan needs an (N, D) sector");
  for (double delta : deltas) {
    const auto spec = diagonalize(build_hamiltonian(sector, base.with_delta(delta)));
    const auto obs = ground_observables(spec, sector);
    out.push_back({delta, obs.y0, obs.gap});
  }
  return out;
}

std::size_t StabilityMap::unstable_count() const {
  return static_cast<std::size_t>(std::count(cells.begin(), cells.end(), std::uint8_t{1}));
}

StabilityMap stability_map(const std::vector<double>& lambdas, const std::vector<double>& deltas,
                           double d, unsigned threads) {
  auto strictly_increasing = [](const std::vector<double>& v) {
    return !v.empty() && std::adjacent_find(v.begin(), v.end(), std::greater_equal<>()) == v.end();
  };
  if (!strictly_increasing(lambdas) || !strictly_increasing(deltas)) {
    throw InvalidInput("stability map axes must be strictly increasing");
  }
  StabilityMap map;
  map.lambdas = lambdas;
  map.deltas = deltas;
  map.d = d;
  map.cells.assign(lambdas.size() * deltas.size(), 0);

  std::atomic<std::size_t> next_row{0};
  auto worker = [&] {
    for (std::size_t i = next_row++; i < lambdas.size(); i = next_row++) {
      for (std::size_t j = 0; j < deltas.size(); ++j) {
        const auto p = ScaledParams::mean_field(lambdas[i], deltas[j], d);
        bool unstable = false;
        for (const auto& st : interior_steady_states(p)) {
          if (*st.omega2 < -1e-10) unstable = true;
        }
        map.cells[i * deltas.size() + j] = unstable ? 1 : 0;
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(lambdas.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  return map;
}

std::optional<DeltaInterval> swallowtail_bounds(double Lambda, double d) {
  // Three states with a fold on the low-energy cos(phi0) = -1 branch. A fold
  // on the cos(phi0) = +1 branch sits at the top of the spectrum instead.
  auto looped = [&](double delta) {
    const auto states = interior_steady_states(ScaledParams::mean_field(Lambda, delta, d));
    const auto low = std::count_if(states.begin(), states.end(),
                                   [](const SteadyState& s) { return s.branch == Branch::kPhiPi; });
    return states.size() >= 3 && low >= 2;
  };
  const double reach = std::abs(Lambda) + 10.0;
  const double step = 0.01;
  const int n = static_cast<int>(std::ceil(2.0 * reach / step)) + 1;
  std::vector<bool> inside(n);
  for (int i = 0; i < n; ++i) inside[i] = looped(-reach + i * step);

  int best_lo = -1, best_hi = -1;
  for (int i = 0; i < n;) {
    if (!inside[i]) {
      ++i;
      continue;
    }
    int j = i;
    while (j + 1 < n && inside[j + 1]) ++j;
    if (best_lo < 0 || j - i > best_hi - best_lo) {
      best_lo = i;
      best_hi = j;
    }
    i = j + 1;
  }
  if (best_lo < 0) return std::nullopt;

  // in_side is a point known to be inside the loop, out_side one known not to be.
  auto edge = [&](double in_side, double out_side) {
    while (std::abs(in_side - out_side) > 1e-4) {
      const double mid = 0.5 * (in_side + out_side);
      if (looped(mid)) in_side = mid; else out_side = mid;
    }
    return 0.5 * (in_side + out_side);
  };
  const double lo_in = -reach + best_lo * step;
  const double hi_in = -reach + best_hi * step;
  DeltaInterval interval;
  interval.lo = best_lo > 0 ? edge(lo_in, lo_in - step) : lo_in;
  interval.hi = best_hi + 1 < n ? edge(hi_in, hi_in + step) : hi_in;
  return interval;
}

}  // namespace hetmol
