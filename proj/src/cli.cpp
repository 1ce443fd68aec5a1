#include "hetmol/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "hetmol/drivers.hpp"
#include "hetmol/elliptic.hpp"
#include "hetmol/errors.hpp"
#include "hetmol/output.hpp"
#include "hetmol/quantum.hpp"
#include "hetmol/stationary.hpp"

namespace hetmol::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct RunConfig {
  std::string out = "-";
  std::string svg;
  std::string json_meta;

  double lambda = 0.0;
  double delta = 0.0;
  double d = 0.0;
  int n = 100;

  double delta_min = -4.0;
  double delta_max = 4.0;
  int steps = 400;
  std::string mode = "semiclassical";

  int levels = 5;

  double lambda_min = -8.0;
  double lambda_max = 0.0;
  int res = 200;
  unsigned threads = 0;

  double delta_start = 6.0;
  double delta_end = -6.0;
  double rate = -0.01;
  double eps = 1e-8;
  double sample_dt = 1.0;
  double hold_tau = 100.0;

  double tau_max = 40.0;

  std::string scan = "none";
  double scan_min = 0.0;
  double scan_max = 2.0;
  std::string trajectory_out;
};

struct Result {
  io::CsvTable table;
  std::vector<io::Series> plot;
  io::PlotLabels labels;
};

int sector_D(double d, int N) {
  const double D = d * N;
  const long rounded = std::lround(D);
  if (std::abs(D - static_cast<double>(rounded)) > 1e-9) {
    throw InvalidInput("d * n must be an integer for quantum runs");
  }
  return static_cast<int>(rounded);
}

void require(bool ok, const char* message) {
  if (!ok) throw InvalidInput(message);
}

Result ground_state_cmd(const RunConfig& c) {
  require(c.steps >= 2, "--steps must be at least 2");
  require(c.delta_min < c.delta_max, "--delta-min must be below --delta-max");
  const bool mf = c.mode != "quantum";
  const bool q = c.mode != "semiclassical";

  std::vector<GroundScanPoint> smf, sq;
  if (mf) {
    smf = ground_state_scan(ScaledParams::mean_field(c.lambda, 0.0, c.d), c.delta_min, c.delta_max,
                            c.steps, ScanMode::kSemiclassical);
  }
  if (q) {
    const auto base = ScaledParams::with_sector(c.lambda, 0.0, c.n, sector_D(c.d, c.n));
    sq = ground_state_scan(base, c.delta_min, c.delta_max, c.steps, ScanMode::kQuantum);
  }

  Result r{io::CsvTable({"delta", "y0_mf", "gap_mf", "y0_q", "gap_q"}), {}, {}};
  const auto deltas = linspace(c.delta_min, c.delta_max, c.steps);
  io::Series ymf{"semiclassical", {}, {}}, yq{"quantum N=" + std::to_string(c.n), {}, {}};
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    const double a = mf ? smf[i].y0 : kNaN;
    const double b = mf ? smf[i].gap : kNaN;
    const double e = q ? sq[i].y0 : kNaN;
    const double f = q ? sq[i].gap : kNaN;
    r.table.add_row({deltas[i], a, b, e, f});
    ymf.x.push_back(deltas[i]);
    ymf.y.push_back(a);
    yq.x.push_back(deltas[i]);
    yq.y.push_back(e);
  }
  if (mf) r.plot.push_back(ymf);
  if (q) r.plot.push_back(yq);
  r.labels = {"Ground-state molecular fraction", "Delta", "y0"};
  return r;
}

Result spectrum_cmd(const RunConfig& c) {
  require(c.steps >= 2, "--steps must be at least 2");
  require(c.levels >= 1, "--levels must be positive");
  require(c.delta_min < c.delta_max, "--delta-min must be below --delta-max");
  const auto base = ScaledParams::with_sector(c.lambda, 0.0, c.n, sector_D(c.d, c.n));
  const auto sector = build_sector(base.N, base.D);
  const int k = std::min<int>(c.levels, static_cast<int>(sector.size()));

  std::vector<std::string> header{"delta"};
  for (int i = 0; i < k; ++i) header.push_back("e" + std::to_string(i));
  Result r{io::CsvTable(header), {}, {"Lowest levels per pair", "Delta", "E / (N/2)"}};
  r.plot.resize(k);
  for (int i = 0; i < k; ++i) r.plot[i].label = "level " + std::to_string(i);

  for (double delta : linspace(c.delta_min, c.delta_max, c.steps)) {
    const auto spec = diagonalize(build_hamiltonian(sector, base.with_delta(delta)));
    std::vector<double> row{delta};
    for (int i = 0; i < k; ++i) {
      const double e = spec.eigenvalues[i] * 2.0 / base.N;
      row.push_back(e);
      r.plot[i].x.push_back(delta);
      r.plot[i].y.push_back(e);
    }
    r.table.add_row(row);
  }
  return r;
}

Result steady_states_cmd(const RunConfig& c) {
  const auto states = find_steady_states(ScaledParams::mean_field(c.lambda, c.delta, c.d));
  Result r{io::CsvTable({"x0", "branch", "phi0", "y0", "energy", "omega2", "stable", "fold"}), {}, {}};
  for (const auto& s : states) {
    r.table.add_row({io::format_number(s.x0), branch_name(s.branch), io::format_number(s.phi0),
                     io::format_number(s.y0), io::format_number(s.energy),
                     s.omega2 ? io::format_number(*s.omega2) : std::string("not_evaluated"),
                     s.stable ? (*s.stable ? "1" : "0") : "not_evaluated", s.fold ? "1" : "0"});
  }
  return r;
}

Result swallowtail_cmd(const RunConfig& c) {
  const auto bounds = swallowtail_bounds(c.lambda, c.d);
  Result r{io::CsvTable({"lambda", "d", "found", "delta_lo", "delta_hi"}), {}, {}};
  r.table.add_row({c.lambda, c.d, bounds ? 1.0 : 0.0, bounds ? bounds->lo : kNaN,
                   bounds ? bounds->hi : kNaN});
  return r;
}

Result stability_map_cmd(const RunConfig& c) {
  require(c.res >= 2, "--res must be at least 2");
  require(c.lambda_min < c.lambda_max, "--lambda-min must be below --lambda-max");
  require(c.delta_min < c.delta_max, "--delta-min must be below --delta-max");
  require(c.d >= 0.0 && c.d < 1.0, "--d must lie in [0, 1)");
  const auto map = stability_map(linspace(c.lambda_min, c.lambda_max, c.res),
                                 linspace(c.delta_min, c.delta_max, c.res), c.d, c.threads);

  Result r{io::CsvTable({"lambda", "delta", "unstable"}), {}, {}};
  io::Series lower{"lowest unstable Delta", {}, {}}, upper{"highest unstable Delta", {}, {}};
  for (std::size_t i = 0; i < map.lambdas.size(); ++i) {
    double lo = kNaN, hi = kNaN;
    for (std::size_t j = 0; j < map.deltas.size(); ++j) {
      const bool u = map.unstable(i, j);
      r.table.add_row({map.lambdas[i], map.deltas[j], u ? 1.0 : 0.0});
      if (u) {
        if (std::isnan(lo)) lo = map.deltas[j];
        hi = map.deltas[j];
      }
    }
    lower.x.push_back(map.lambdas[i]);
    lower.y.push_back(lo);
    upper.x.push_back(map.lambdas[i]);
    upper.y.push_back(hi);
  }
  r.plot = {lower, upper};
  r.labels = {"Dynamically unstable region", "Lambda", "Delta"};
  return r;
}

Result sweep_cmd(const RunConfig& c, std::ostream& err) {
  SweepSpec spec;
  spec.Lambda = c.lambda;
  spec.d = c.d;
  spec.delta_start = c.delta_start;
  spec.delta_end = c.delta_end;
  spec.rate = c.rate;
  spec.eps = c.eps;
  spec.sample_dt = c.sample_dt;
  spec.hold_tau = c.hold_tau;
  const auto mode = c.mode == "quantum" ? SweepMode::kQuantum : SweepMode::kSemiclassical;
  if (mode == SweepMode::kQuantum) {
    spec.N = c.n;
    spec.D = sector_D(c.d, c.n);
  }
  const auto res = sweep(spec, mode);

  Result r{io::CsvTable({"tau", "delta", "y"}), {}, {"Detuning sweep from pure atoms", "Delta", "y"}};
  io::Series s{mode == SweepMode::kQuantum ? "quantum N=" + std::to_string(c.n) : "semiclassical",
               {}, {}};
  for (const auto& p : res.samples) {
    r.table.add_row({p.tau, p.delta, p.y});
    s.x.push_back(p.delta);
    s.y.push_back(p.y);
  }
  r.plot.push_back(s);
  err << "y_final " << io::format_number(res.y_final) << "\n"
      << "y_hold_mean " << io::format_number(res.y_hold_mean) << "\n"
      << "max_norm_drift " << io::format_number(res.max_norm_drift) << "\n";
  return r;
}

Result evolve_cmd(const RunConfig& c, std::ostream& err) {
  require(c.tau_max > 0.0, "--tau-max must be positive");
  require(c.sample_dt > 0.0, "--sample-dt must be positive");
  const auto cmp = oscillation_compare(c.lambda, c.delta, c.d, c.n, c.tau_max, c.sample_dt);
  Result r{io::CsvTable({"tau", "y_quantum", "y_semiclassical"}), {},
           {"Population dynamics from pure atoms", "tau", "y"}};
  io::Series q{"quantum N=" + std::to_string(c.n), cmp.tau, cmp.y_quantum};
  io::Series s{"semiclassical", cmp.tau, cmp.y_semiclassical};
  for (std::size_t i = 0; i < cmp.tau.size(); ++i) {
    r.table.add_row({cmp.tau[i], cmp.y_quantum[i], cmp.y_semiclassical[i]});
  }
  r.plot = {s, q};
  err << "agreement_window " << io::format_number(agreement_window(cmp)) << "\n"
      << "max_norm_drift " << io::format_number(cmp.quantum_norm_drift) << "\n";
  return r;
}

Result oscillation_cmd(const RunConfig& c) {
  Result r{io::CsvTable({"delta", "d", "y_minus", "y_plus", "k", "period", "divergent", "regime"}),
           {}, {}};
  auto add = [&](double delta, double d) {
    const auto sol = oscillation_params(delta, d);
    r.table.add_row({io::format_number(delta), io::format_number(d), io::format_number(sol.y_minus),
                     io::format_number(sol.y_plus), io::format_number(sol.k),
                     io::format_number(sol.period), sol.divergent ? "1" : "0",
                     sol.divergent ? "tanh2" : "sn2"});
    return sol;
  };

  if (c.scan == "none") {
    add(c.delta, c.d);
    io::Series s{"analytic", {}, {}};
    const int points = 801;
    for (int i = 0; i < points; ++i) {
      const double tau = c.tau_max * i / (points - 1);
      s.x.push_back(tau);
      s.y.push_back(analytic_y(tau, c.delta, c.d));
    }
    if (!c.trajectory_out.empty()) {
      io::CsvTable t({"tau", "y"});
      for (std::size_t i = 0; i < s.x.size(); ++i) t.add_row({s.x[i], s.y[i]});
      if (!t.write(c.trajectory_out)) throw InvalidInput("--trajectory-out needs a file path");
    }
    r.plot.push_back(s);
    r.labels = {"Analytic oscillation from pure atoms", "tau", "y"};
    return r;
  }

  require(c.steps >= 2, "--steps must be at least 2");
  require(c.scan_min < c.scan_max, "--scan-min must be below --scan-max");
  io::Series s{"period", {}, {}};
  for (double v : linspace(c.scan_min, c.scan_max, c.steps)) {
    const auto sol = c.scan == "delta" ? add(v, c.d) : add(c.delta, v);
    s.x.push_back(v);
    s.y.push_back(std::isfinite(sol.period) ? sol.period : kNaN);
  }
  r.plot.push_back(s);
  r.labels = {"Oscillation period", c.scan == "delta" ? "Delta" : "d", "T"};
  return r;
}

// Independent references for the self-test: composite Simpson quadrature of
// the elliptic integral and bisection on its inverse.
double incomplete_F(double phi, double k) {
  const int n = 4000;
  const double h = phi / n;
  auto f = [k](double t) { return 1.0 / std::sqrt(1.0 - k * k * std::sin(t) * std::sin(t)); };
  double s = f(0.0) + f(phi);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(i * h);
  return s * h / 3.0;
}

double sn_by_inversion(double u, double k) {
  double lo = 0.0, hi = std::numbers::pi / 2;
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    (incomplete_F(mid, k) < u ? lo : hi) = mid;
  }
  return std::sin(0.5 * (lo + hi));
}

Result selftest_cmd(std::ostream& err, bool& all_pass) {
  Result r{io::CsvTable({"check", "value", "reference", "error", "tolerance", "pass"}), {}, {}};
  all_pass = true;
  auto check = [&](const std::string& name, double value, double reference, double tol) {
    const double e = std::abs(value - reference);
    const bool ok = e <= tol;
    all_pass = all_pass && ok;
    r.table.add_row({name, io::format_number(value), io::format_number(reference),
                     io::format_number(e), io::format_number(tol), ok ? "1" : "0"});
    err << (ok ? "PASS " : "FAIL ") << name << "\n";
  };

  check("K(0)", ellipK(0.0), std::numbers::pi / 2, 1e-12);
  check("K(0.5)", ellipK(0.5), incomplete_F(std::numbers::pi / 2, 0.5), 1e-10);
  for (double u : {0.3, 1.0, 2.5}) {
    char name[64];
    std::snprintf(name, sizeof name, "sn(%g,0)", u);
    check(name, jacobi_sn(u, 0.0), std::sin(u), 1e-12);
    std::snprintf(name, sizeof name, "sn(%g,1)", u);
    check(name, jacobi_sn(u, 1.0), std::tanh(u), 1e-12);
  }
  check("sn(1,0.7)", jacobi_sn(1.0, 0.7), sn_by_inversion(1.0, 0.7), 1e-10);

  const auto s2 = build_sector(2, 0);
  const auto e2 = diagonalize(build_hamiltonian(s2, ScaledParams::with_sector(0, 0, 2, 0)));
  check("gap N=2", e2.gap(), 1.0, 1e-12);
  const auto s4 = build_sector(4, 0);
  const auto e4 = diagonalize(build_hamiltonian(s4, ScaledParams::with_sector(0, 0, 4, 0)));
  const double r3 = std::sqrt(3.0) / 2;
  check("N=4 level 0", e4.eigenvalues[0], -r3, 1e-12);
  check("N=4 level 1", e4.eigenvalues[1], 0.0, 1e-12);
  check("N=4 level 2", e4.eigenvalues[2], r3, 1e-12);

  const auto s200 = build_sector(200, 0);
  const auto h = build_hamiltonian(s200, ScaledParams::with_sector(-2.0, 0.7, 200, 0));
  const auto e200 = diagonalize(h);
  double worst = 0.0;
  for (std::size_t k = 0; k < e200.size(); ++k) {
    const auto v = e200.vector(k);
    for (std::size_t i = 0; i < h.size(); ++i) {
      double hv = h.diag[i] * v[i];
      if (i > 0) hv += h.offdiag[i - 1] * v[i - 1];
      if (i + 1 < h.size()) hv += h.offdiag[i] * v[i + 1];
      worst = std::max(worst, std::abs(hv - e200.eigenvalues[k] * v[i]));
    }
  }
  check("residual N=200", worst, 0.0, 1e-9);
  return r;
}

nlohmann::json resolved_config(const CLI::App* sub) {
  nlohmann::json j;
  j["subcommand"] = sub->get_name();
  for (const CLI::Option* o : sub->get_options()) {
    if (o->get_lnames().empty()) continue;
    const std::string name = o->get_lnames().front();
    if (name == "help") continue;
    const std::string text = o->count() > 0 ? o->results().front() : o->get_default_str();
    double v = 0.0;
    std::size_t used = 0;
    try {
      v = std::stod(text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (!text.empty() && used == text.size()) {
      j["options"][name] = v;
    } else {
      j["options"][name] = text;
    }
  }
  return j;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  // One configuration per subcommand, so per-command defaults stay separate.
  std::map<const CLI::App*, RunConfig> configs;
  CLI::App app{"Three-mode atom / heteronuclear-molecule condensate model", "hetmol"};
  app.require_subcommand(1, 1);
  app.option_defaults()->always_capture_default();

  auto common = [](CLI::App* s, RunConfig& c, bool svg) {
    s->add_option("--out", c.out, "CSV output path, - for stdout");
    if (svg) s->add_option("--svg", c.svg, "Also write an SVG line plot here");
    s->add_option("--json-meta", c.json_meta, "Write the resolved configuration as JSON here");
  };
  auto physics = [](CLI::App* s, RunConfig& c, bool with_delta) {
    s->add_option("--lambda", c.lambda, "Interaction parameter Lambda");
    if (with_delta) s->add_option("--delta", c.delta, "Detuning Delta");
    s->add_option("--d", c.d, "Atom-number imbalance d = D/N");
  };
  const std::vector<std::string> modes{"semiclassical", "quantum", "both"};

  auto* gs = app.add_subcommand("ground-state", "Ground-state molecular fraction and gap versus Delta");
  {
    RunConfig& c = configs[gs];
    physics(gs, c, false);
    gs->add_option("--delta-min", c.delta_min);
    gs->add_option("--delta-max", c.delta_max);
    gs->add_option("--steps", c.steps, "Number of Delta points");
    gs->add_option("--mode", c.mode)->check(CLI::IsMember(modes));
    gs->add_option("--n", c.n, "Total particle number N for quantum mode");
    common(gs, c, true);
  }

  auto* sp = app.add_subcommand("spectrum", "Lowest quantum levels per pair versus Delta");
  {
    RunConfig& c = configs[sp];
    physics(sp, c, false);
    sp->add_option("--delta-min", c.delta_min)->default_val(-6.0);
    sp->add_option("--delta-max", c.delta_max)->default_val(6.0);
    sp->add_option("--steps", c.steps)->default_val(241);
    sp->add_option("--levels", c.levels, "Number of levels");
    sp->add_option("--n", c.n);
    common(sp, c, true);
  }

  auto* ss = app.add_subcommand("steady-states", "Mean-field fixed points and their stability");
  {
    RunConfig& c = configs[ss];
    physics(ss, c, true);
    common(ss, c, false);
  }

  auto* st = app.add_subcommand("swallowtail", "Delta interval with three interior steady states");
  {
    RunConfig& c = configs[st];
    physics(st, c, false);
    st->get_option("--lambda")->default_val(-5.0);
    common(st, c, false);
  }

  auto* sm = app.add_subcommand("stability-map", "Dynamical instability over a (Lambda, Delta) grid");
  {
    RunConfig& c = configs[sm];
    sm->add_option("--lambda-min", c.lambda_min);
    sm->add_option("--lambda-max", c.lambda_max);
    sm->add_option("--delta-min", c.delta_min)->default_val(-6.0);
    sm->add_option("--delta-max", c.delta_max)->default_val(0.0);
    sm->add_option("--res", c.res, "Grid points per axis");
    sm->add_option("--d", c.d);
    sm->add_option("--threads", c.threads, "Worker threads, 0 for all cores");
    common(sm, c, true);
  }

  auto* sw = app.add_subcommand("sweep", "Linear detuning sweep starting from pure atoms");
  {
    RunConfig& c = configs[sw];
    physics(sw, c, false);
    sw->add_option("--mode", c.mode)->check(CLI::IsMember({"semiclassical", "quantum"}));
    sw->add_option("--n", c.n);
    sw->add_option("--delta-start", c.delta_start);
    sw->add_option("--delta-end", c.delta_end);
    sw->add_option("--rate", c.rate, "dDelta/dtau");
    sw->add_option("--eps", c.eps, "Semiclassical molecular seed");
    sw->add_option("--sample-dt", c.sample_dt);
    sw->add_option("--hold-tau", c.hold_tau, "Hold at delta-end for the time-averaged conversion");
    common(sw, c, true);
  }

  auto* ev = app.add_subcommand("evolve", "Quantum and mean-field dynamics from pure atoms at fixed Delta");
  {
    RunConfig& c = configs[ev];
    physics(ev, c, true);
    ev->add_option("--n", c.n);
    ev->add_option("--tau-max", c.tau_max);
    ev->add_option("--sample-dt", c.sample_dt)->default_val(0.05);
    common(ev, c, true);
  }

  auto* os = app.add_subcommand("oscillation", "Analytic oscillation amplitude and period at Lambda = 0");
  {
    RunConfig& c = configs[os];
    os->add_option("--delta", c.delta);
    os->add_option("--d", c.d);
    os->add_option("--scan", c.scan, "Scan variable")->check(CLI::IsMember({"none", "delta", "d"}));
    os->add_option("--scan-min", c.scan_min);
    os->add_option("--scan-max", c.scan_max);
    os->add_option("--steps", c.steps)->default_val(101);
    os->add_option("--tau-max", c.tau_max, "Length of the analytic curve")->default_val(20.0);
    os->add_option("--trajectory-out", c.trajectory_out, "CSV of the analytic y(tau) curve");
    common(os, c, true);
  }

  auto* sf = app.add_subcommand("selftest", "Elliptic-function and eigensolver oracles");
  {
    RunConfig& c = configs[sf];
    common(sf, c, false);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const CLI::App* sub = app.get_subcommands().front();
  RunConfig& c = configs[sub];
  try {
    if (!c.json_meta.empty()) io::write_text(c.json_meta, resolved_config(sub).dump(2) + "\n");

    std::optional<Result> r;
    bool selftest_pass = true;
    if (sub == gs) r = ground_state_cmd(c);
    else if (sub == sp) r = spectrum_cmd(c);
    else if (sub == ss) r = steady_states_cmd(c);
    else if (sub == st) r = swallowtail_cmd(c);
    else if (sub == sm) r = stability_map_cmd(c);
    else if (sub == sw) r = sweep_cmd(c, err);
    else if (sub == ev) r = evolve_cmd(c, err);
    else if (sub == os) r = oscillation_cmd(c);
    else r = selftest_cmd(err, selftest_pass);

    if (!r->table.write(c.out)) out << r->table.str();
    if (!c.svg.empty()) io::emit_svg(r->plot, r->labels, c.svg);
    return selftest_pass ? kExitOk : kExitFailure;
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << " (reached tau = " << e.reached() << ")\n";
    return kExitFailure;
  } catch (const IoError& e) {
    err << "io error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace hetmol::cli
