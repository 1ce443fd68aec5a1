#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hetmol/meanfield.hpp"
#include "hetmol/stationary.hpp"

using namespace hetmol;

namespace {

double closed_form_y0(double delta) {
  if (delta <= -1.0) return 1.0;
  const double r = std::sqrt(delta * delta + 3.0) - delta;
  return r * r / 9.0;
}

double closed_form_gap(double delta) {
  if (delta <= -1.0) return std::sqrt(delta * delta - 1.0);
  return std::sqrt(delta * delta + 3.0 * (1.0 - closed_form_y0(delta)) - 1.0);
}

int interior_count(double lambda, double delta, double d) {
  return static_cast<int>(interior_steady_states(ScaledParams::mean_field(lambda, delta, d)).size());
}

}  // namespace

TEST_SUITE("stationary") {

TEST_CASE("Lambda = 0 ground states") {
  const auto g0 = ground_state(ScaledParams::mean_field(0, 0, 0));
  CHECK(g0.branch == Branch::kPhiPi);
  CHECK(std::abs(g0.x0 - 2.0 / 3.0) < 1e-10);
  CHECK(std::abs(*g0.omega2 - 1.0) < 1e-10);

  const auto g2 = ground_state(ScaledParams::mean_field(0, -2, 0));
  CHECK(g2.branch == Branch::kBoundaryImbalance);
  CHECK(g2.y0 == 1.0);
  CHECK(std::abs(*g2.omega2 - 3.0) < 1e-12);
}

TEST_CASE("closed-form scan oracle") {
  const auto scan = ground_state_scan(ScaledParams::mean_field(0, 0, 0), -4, 4, 400, ScanMode::kSemiclassical);
  REQUIRE(scan.size() == 400);
  for (const auto& pt : scan) {
    CHECK(std::abs(pt.y0 - closed_form_y0(pt.delta)) < 1e-8);
    CHECK(std::abs(pt.gap - closed_form_gap(pt.delta)) < 1e-8);
  }
  const auto at_critical = ground_state_scan(ScaledParams::mean_field(0, 0, 0), -1, 1, 3, ScanMode::kSemiclassical);
  CHECK(std::abs(at_critical.front().gap) < 1e-8);
  const auto spot = ground_state_scan(ScaledParams::mean_field(0, 0, 0), -2, 0, 2, ScanMode::kSemiclassical);
  CHECK(spot[0].y0 == 1.0);
  CHECK(std::abs(spot[0].gap - std::sqrt(3.0)) < 1e-12);
  CHECK(std::abs(spot[1].y0 - 1.0 / 3.0) < 1e-10);
  CHECK(std::abs(spot[1].gap - 1.0) < 1e-10);
}

TEST_CASE("Lambda = 0 frequency equals the gap formula") {
  for (double delta : {-0.9, -0.3, 0.0, 0.8, 2.5}) {
    const auto g = ground_state(ScaledParams::mean_field(0, delta, 0));
    REQUIRE(g.omega2.has_value());
    CHECK(std::abs(*g.omega2 - (delta * delta + 3 * g.x0 - 1)) < 1e-10);
  }
}

TEST_CASE("steady states satisfy the stationarity conditions") {
  for (double lambda : {-5.0, -2.0, 0.0, 4.0}) {
    for (double delta : {-3.0, -1.5, 0.0, 2.0}) {
      for (double d : {0.0, 0.2}) {
        const auto p = ScaledParams::mean_field(lambda, delta, d);
        const auto states = find_steady_states(p);
        for (std::size_t i = 1; i < states.size(); ++i) CHECK(states[i].energy >= states[i - 1].energy);
        for (const auto& s : states) {
          if (s.branch != Branch::kPhiZero && s.branch != Branch::kPhiPi) continue;
          const auto r = rhs_canonical({s.x0, s.phi0}, p);
          CHECK(std::abs(r.dphi) <= 1e-8);
          CHECK(std::abs(r.dx) <= 1e-12);
          CHECK(s.y0 == doctest::Approx(1 - s.x0));
        }
      }
    }
  }
}

TEST_CASE("linearization consistency") {
  const double h = 1e-6;
  for (double lambda : {-5.0, -1.5, 0.0, 3.0}) {
    for (double delta : {-2.5, -0.5, 1.0}) {
      for (double d : {0.0, 0.15}) {
        const auto p = ScaledParams::mean_field(lambda, delta, d);
        for (const auto& s : interior_steady_states(p)) {
          if (s.fold || s.x0 - d < 1e-3 || 1 - s.x0 < 1e-3) continue;
          const double dxdphi = (rhs_canonical({s.x0, s.phi0 + h}, p).dx - rhs_canonical({s.x0, s.phi0 - h}, p).dx) / (2 * h);
          const double dphidx = (rhs_canonical({s.x0 + h, s.phi0}, p).dphi - rhs_canonical({s.x0 - h, s.phi0}, p).dphi) / (2 * h);
          const double numeric = -dxdphi * dphidx;
          CHECK(std::abs(numeric - *s.omega2) <= 1e-4 * std::max(1.0, std::abs(*s.omega2)));
        }
      }
    }
  }
}

TEST_CASE("swallowtail region") {
  CHECK(interior_count(-5, -2, 0) == 3);
  const auto unstable = [] {
    int n = 0;
    for (const auto& s : interior_steady_states(ScaledParams::mean_field(-5, -2, 0))) n += *s.omega2 < 0;
    return n;
  }();
  CHECK(unstable == 1);

  const auto b = swallowtail_bounds(-5, 0);
  REQUIRE(b.has_value());
  CHECK(std::abs(b->lo + 3.56) < 0.05);
  CHECK(std::abs(b->hi + 1.0) < 0.05);
  CHECK_FALSE(swallowtail_bounds(5, 0).has_value());
  CHECK_FALSE(swallowtail_bounds(0, 0).has_value());
  // The mirrored fold of Lambda = 5 lies on the upper branch.
  CHECK(interior_count(5, 2, 0) == 3);
}

TEST_CASE("stability map cells") {
  const auto map = stability_map({-5.0, -0.5, 5.0}, {-2.0, -0.5}, 0.0, 2);
  CHECK(map.cells.size() == 6);
  CHECK(map.unstable(0, 0));
  CHECK_FALSE(map.unstable(0, 1));
  CHECK_FALSE(map.unstable(1, 0));
  CHECK_FALSE(map.unstable(2, 0));
  CHECK(map.unstable_count() == 1);

  const auto l = linspace(-8, 0, 40);
  const auto dl = linspace(-6, 0, 40);
  const auto serial = stability_map(l, dl, 0.0, 1);
  const auto parallel = stability_map(l, dl, 0.0, 4);
  CHECK(serial.cells == parallel.cells);
  for (std::size_t i = 0; i < l.size(); ++i) {
    for (std::size_t j = 0; j < dl.size(); ++j) {
      if (l[i] >= -1 || dl[j] >= -1) CHECK_FALSE(serial.unstable(i, j));
    }
  }
  CHECK(stability_map(l, dl, 0.2, 1).unstable_count() <= serial.unstable_count());
}

TEST_CASE("imbalance removes the critical point") {
  const auto scan = ground_state_scan(ScaledParams::mean_field(0, 0, 0.2), -6, 6, 601, ScanMode::kSemiclassical);
  double minimum = 1e9;
  for (const auto& pt : scan) minimum = std::min(minimum, pt.gap);
  CHECK(minimum > 0.0);
}

TEST_CASE("derivative kink at the critical point only without imbalance") {
  const double h = 1e-3;
  auto y0 = [](double delta, double d) { return ground_state(ScaledParams::mean_field(0, delta, d)).y0; };
  const double left = (y0(-1.0, 0) - y0(-1.0 - h, 0)) / h;
  const double right = (y0(-1.0 + h, 0) - y0(-1.0, 0)) / h;
  CHECK(std::abs(left) < 1e-6);
  CHECK(std::abs(right + 1.0) < 1e-2);

  double worst = 0.0;
  const double k = 1e-2;
  for (double delta = -3.0; delta <= 1.0; delta += 0.05) {
    worst = std::max(worst, std::abs(y0(delta + k, 0.2) - 2 * y0(delta, 0.2) + y0(delta - k, 0.2)) / (k * k));
  }
  CHECK(worst < 10.0);
}

TEST_CASE("boundary frequencies") {
  CHECK(boundary_omega2(Branch::kBoundaryImbalance, ScaledParams::mean_field(0, -3, 0)).value() == doctest::Approx(8.0));
  CHECK_FALSE(boundary_omega2(Branch::kBoundaryImbalance, ScaledParams::mean_field(2, -3, 0)).has_value());
  CHECK_FALSE(boundary_omega2(Branch::kBoundaryImbalance, ScaledParams::mean_field(0, -3, 0.1)).has_value());
  CHECK_FALSE(boundary_omega2(Branch::kBoundaryAtoms, ScaledParams::mean_field(0, 3, 0)).has_value());
}

TEST_CASE("linspace") {
  const auto v = linspace(-1, 1, 5);
  CHECK(v == std::vector<double>{-1, -0.5, 0, 0.5, 1});
}

}
