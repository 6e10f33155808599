// Command-line driver: spectrum enumeration, finite-tube root scans, index
// curves, the zero-field flux-line system, and the self-check suite. Output
// is machine-readable (json or csv), deterministic, and plot-ready.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fluxtube/analysis.hpp"
#include "fluxtube/finite_tube.hpp"
#include "fluxtube/io.hpp"

namespace {

using namespace fluxtube;

struct MRange {
  int lo = 0, hi = 0;
};

MRange parse_m_range(const std::string& s) {
  MRange r;
  if (std::sscanf(s.c_str(), "%d..%d", &r.lo, &r.hi) != 2 || r.lo > r.hi)
    throw CLI::ValidationError("--m", "expected a..b with a <= b, got " + s);
  return r;
}

std::vector<double> parse_alpha_grid(const std::string& s) {
  double lo, hi, step;
  if (std::sscanf(s.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3 ||
      !(step > 0.0) || hi < lo)
    throw CLI::ValidationError("--alpha-grid",
                               "expected lo:hi:step with step > 0, got " + s);
  std::vector<double> grid;
  int count = static_cast<int>(std::floor((hi - lo) / step + 0.5));
  for (int i = 0; i <= count; ++i) grid.push_back(lo + i * step);
  return grid;
}

int emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream out(path);
  if (!out) {
    std::cerr << "cannot open output file: " << path << "\n";
    return 1;
  }
  out << text;
  return 0;
}

// --- subcommand bodies ------------------------------------------------------

int run_spectrum(double alpha, double kappa, double e_max, const MRange& mr,
                 const std::string& format, const std::string& path) {
  auto table = enumerate_spectrum(alpha, kappa, e_max, mr.lo, mr.hi);
  if (format == "json") return emit(spectrum_to_json(table).dump(2) + "\n", path);
  return emit(spectrum_to_csv(table), path);
}

int run_match_scan(double alpha, double kappa, double r_tube, double e_max,
                   const MRange& mr, int sigma_sel, const std::string& format,
                   const std::string& path) {
  FluxConfig cfg{alpha, r_tube, FieldMode::LandauPlusTube, kappa};
  nlohmann::json roots = nlohmann::json::array();
  std::ostringstream csv;
  csv << "sigma,m,energy,E,residual\n";
  for (int ts : {-1, +1}) {
    if (sigma_sel != 0 && sigma_sel != ts) continue;
    for (int m = mr.lo; m <= mr.hi; ++m) {
      Channel ch{m, ts};
      for (const auto& root : scan_roots(cfg, ch, -1.0, e_max)) {
        double rendered = root.energy + kappa * ch.sigma();
        roots.push_back({{"sigma", ch.sigma()},
                         {"m", m},
                         {"energy", root.energy},
                         {"E", rendered},
                         {"residual", root.residual}});
        csv << format_double(ch.sigma()) << ',' << m << ','
            << format_double(root.energy) << ',' << format_double(rendered)
            << ',' << format_double(root.residual) << "\n";
      }
    }
  }
  if (format == "json") {
    nlohmann::json j{{"alpha", alpha},
                     {"kappa", kappa},
                     {"r_tube", r_tube},
                     {"e_max", e_max},
                     {"roots", roots}};
    return emit(j.dump(2) + "\n", path);
  }
  return emit(csv.str(), path);
}

int run_indices(const std::vector<double>& grid, const std::string& format,
                const std::string& path) {
  std::vector<IndexRow> rows;
  for (double a : grid) rows.push_back({a, index_singular(a), index_ab(a)});
  if (format == "json") return emit(indices_to_json(rows).dump(2) + "\n", path);
  return emit(indices_to_csv(rows), path);
}

int run_ab(double alpha, double r_tube, const std::string& format,
           const std::string& path) {
  auto modes = ab_zero_modes(alpha, r_tube);
  if (format == "json")
    return emit(zero_modes_to_json(alpha, r_tube, modes).dump(2) + "\n", path);
  std::ostringstream csv;
  csv << "sigma,m,regime,nu\n";
  for (const auto& z : modes)
    csv << format_double(z.channel.sigma()) << ',' << z.channel.m << ','
        << regime_name(z.regime) << ',' << format_double(z.nu) << "\n";
  return emit(csv.str(), path);
}

// --- self-check suite -------------------------------------------------------

EigenState mk_state(Family f, Channel ch, int n, double alpha) {
  EigenState st;
  st.family = f;
  st.channel = ch;
  st.n = is_singular(f) ? 0 : n;
  st.e_base = is_singular(f) ? 0 : st.n + (ch.two_sigma + 1) / 2;
  st.e_flux_coeff = f == Family::LagA ? 1 : 0;
  st.energy = energy_free(st, alpha);
  return st;
}

double landau_roots_check() {
  FluxConfig cfg{0.0, 0.5, FieldMode::LandauPlusTube, 0.0};
  double worst = 0.0;
  for (int ts : {-1, +1})
    for (int m = -2; m <= 2; ++m) {
      for (const auto& root : scan_roots(cfg, {m, ts}, -0.3, 3.8)) {
        double best = 1e9;
        for (int n = 0; n <= 4; ++n) {
          double e = n + std::max(m, 0) + 0.5 * ts + 0.5;
          best = std::min(best, std::abs(root.energy - e));
        }
        worst = std::max(worst, best);
      }
    }
  return worst;
}

double susy_degeneracy_check() {
  FluxConfig cfg{0.5, 0.6, FieldMode::LandauPlusTube, 0.0};
  double worst = 0.0;
  for (int m = -2; m <= 2; ++m) {
    for (const auto& root : scan_roots(cfg, {m, -1}, 0.05, 3.05)) {
      double best = 1e9;
      for (const auto& partner : scan_roots(cfg, {m - 1, +1}, 0.05, 3.05))
        best = std::min(best, std::abs(partner.energy - root.energy));
      worst = std::max(worst, best);
    }
  }
  return worst;
}

double survival_pattern_check() {
  double worst = 0.0;
  for (double alpha : {0.8, -1.7})
    for (int ts : {-1, +1})
      for (int m = -4; m <= 4; ++m) {
        double v = small_r_condition(alpha, {m, ts});
        bool survives = (ts < 0 && m <= 0) || (ts > 0 && m >= 0);
        if (survives)
          worst = std::max(worst, std::abs(v));  // must be exactly zero
        else if (std::abs(v) <= 1e-3)
          worst = std::max(worst, 1.0);  // must be clearly nonzero
      }
  return worst;
}

double spectrum_structure_check() {
  int violations = 0;
  for (double alpha : {0.0, 0.5, 1.0, 1.5, 2.0}) {
    auto t = enumerate_spectrum(alpha, 0.0, 5.0, -6, 6);
    bool integer = alpha == std::floor(alpha);
    size_t want_vac = (integer && alpha != 0.0) ? 1 : 0;
    if (t.vacancies.size() != want_vac) ++violations;
    for (const auto& st : t.states) {
      if (!(energy_free(st, alpha) > 0.0)) continue;
      auto partner = pair_partner(st, alpha);
      if (!partner) {
        ++violations;
        continue;
      }
      if (partner->channel.m < t.m_min || partner->channel.m > t.m_max)
        continue;
      int found = 0;
      for (const auto& other : t.states)
        if (other == *partner) ++found;
      if (found != 1) ++violations;
    }
  }
  return violations;
}

double index_check() {
  int bad = 0;
  for (int i = 0; i <= 60; ++i) {
    double a = -3.0 + 0.1 * i;
    int want_s = (a >= 1.0)    ? static_cast<int>(std::floor(a))
                 : (a <= -1.0) ? static_cast<int>(std::ceil(a))
                               : 0;
    int want_ab = (a > 0.5)    ? static_cast<int>(std::ceil(a - 0.5))
                  : (a < -0.5) ? static_cast<int>(std::floor(a + 0.5))
                               : 0;
    if (index_singular(a) != want_s) ++bad;
    if (index_ab(a) != want_ab) ++bad;
  }
  return bad;
}

std::pair<double, double> gram_check() {
  const double alpha = 1.5;
  std::vector<EigenState> states{mk_state(Family::LagA, {0, -1}, 0, alpha),
                                 mk_state(Family::SingDown, {0, -1}, 0, alpha),
                                 mk_state(Family::LagB, {-1, -1}, 0, alpha)};
  auto g = gram(states, alpha);
  double diag = 0.0, off = 0.0;
  for (size_t i = 0; i < states.size(); ++i) {
    diag = std::max(diag, std::abs(g[i][i] - 1.0));
    for (size_t j = 0; j < i; ++j) off = std::max(off, std::abs(g[i][j]));
  }
  return {diag, off};
}

double delta_mass_check() {
  auto st = mk_state(Family::SingDown, {0, -1}, 0, 1.5);
  return 1.0 - delta_mass(st, 1.5, 0.1, 1e-4);
}

double ladder_check() {
  const std::vector<double> grid{0.4, 0.9, 1.7, 2.8};
  double worst = susy_pair_check(0.0, mk_state(Family::LagB, {0, -1}, 1, 0.0),
                                 1e-3, grid);
  worst = std::max(worst, susy_pair_check(
                              0.5, mk_state(Family::LagA, {1, -1}, 0, 0.5),
                              1e-3, grid));
  return worst;
}

double annihilation_check() {
  double worst = 0.0;
  for (double alpha : {1.5, 2.5}) {
    for (const auto& z : ab_zero_modes(alpha, 0.1)) {
      if (z.channel.two_sigma != -1) continue;
      auto psi = ab_zero_mode_profile(alpha, z, 0.1);
      auto dead = apply_raising(psi);
      for (double r : {0.05, 0.5, 2.0})
        worst = std::max(worst, std::abs(dead.value(r, Side::Auto)));
    }
  }
  return worst;
}

double residual_check() {
  const std::vector<double> grid{0.3, 0.8, 1.5, 2.9};
  auto laga = mk_state(Family::LagA, {0, +1}, 0, 0.5);
  double worst =
      ode_residual(state_profile(0.5, laga, 0.05), energy_free(laga, 0.5),
                   grid, 2e-4);
  auto sing = mk_state(Family::SingDown, {0, -1}, 0, 1.5);
  worst = std::max(
      worst, ode_residual(state_profile(1.5, sing, 0.05), 0.0, grid, 2e-4));
  auto ab = ab_state_profile(0.7, {0, +1}, 2.0, 0.4);
  worst = std::max(worst, ode_residual(ab, 1.0, grid));
  return worst;
}

double kappa_shift_check() {
  const double kappa = 0.0023;
  auto base = enumerate_spectrum(1.0, 0.0, 5.0, -4, 4);
  auto shifted = enumerate_spectrum(1.0, kappa, 5.2, -4, 4);
  double min_e = 1e9;
  for (const auto& st : shifted.states) min_e = std::min(min_e, st.energy);
  double worst = (min_e == -kappa / 2) ? 0.0 : 1.0;
  for (const auto& st : base.states) {
    double want = st.energy + kappa * st.channel.sigma();
    bool found = false;
    for (const auto& other : shifted.states)
      if (other == st && other.energy == want) found = true;
    if (!found) worst = std::max(worst, 1.0);
  }
  return worst;
}

int run_verify(const std::string& suite, const std::string& path) {
  std::vector<CheckResult> checks;
  auto add = [&](const std::string& name, double value, double tol) {
    checks.push_back({name, value, tol, value <= tol});
  };
  add("landau-roots", landau_roots_check(), 1e-8);
  add("susy-degeneracy", susy_degeneracy_check(), 1e-6);
  add("survival-pattern", survival_pattern_check(), 0.0);
  add("spectrum-structure", spectrum_structure_check(), 0.0);
  add("index-closed-forms", index_check(), 0.0);
  add("delta-mass", delta_mass_check(), 1e-3);
  add("ladder-pairing", ladder_check(), 1e-8);
  add("zero-mode-annihilation", annihilation_check(), 1e-10);
  add("ode-residuals", residual_check(), 1e-6);
  add("kappa-shift", kappa_shift_check(), 0.0);
  if (suite == "all") {
    auto [diag, off] = gram_check();
    add("gram-diagonal", diag, 1e-4);
    add("gram-off-diagonal", off, 1e-6);
  }
  auto j = report_to_json(checks);
  j["suite"] = suite;
  int rc = emit(j.dump(2) + "\n", path);
  if (rc != 0) return rc;
  return j["all_pass"].get<bool>() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"planar charged particle in a uniform field with a flux tube: "
               "spectra, indices, and verification"};
  app.require_subcommand(1);

  std::string format = "json", output, m_spec = "0..0", grid_spec, suite = "all";
  double alpha = 0.0, kappa = 0.0, r_tube = 0.0, e_max = 5.0;
  int sigma_sel = 0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--output", output, "write to file instead of stdout");
  };

  auto* sp = app.add_subcommand("spectrum", "enumerate the point-limit spectrum");
  sp->add_option("--alpha", alpha)->required();
  sp->add_option("--kappa", kappa);
  sp->add_option("--e-max", e_max);
  sp->add_option("--m", m_spec, "channel range a..b")->required();
  add_common(sp);

  auto* ms = app.add_subcommand("match-scan",
                                "scan finite-tube eigenvalues by edge matching");
  ms->add_option("--alpha", alpha)->required();
  ms->add_option("--kappa", kappa);
  ms->add_option("--r-tube", r_tube)->required()->check(CLI::PositiveNumber);
  ms->add_option("--e-max", e_max);
  ms->add_option("--m", m_spec, "channel range a..b")->required();
  ms->add_option("--sigma", sigma_sel, "-1, 1, or 0 for both")
      ->check(CLI::IsMember({-1, 0, 1}));
  add_common(ms);

  auto* ix = app.add_subcommand("indices", "zero-mode index curves");
  ix->add_option("--alpha-grid", grid_spec, "lo:hi:step")->required();
  add_common(ix);

  auto* ab = app.add_subcommand("ab", "zero-field flux-line zero modes");
  ab->add_option("--alpha", alpha)->required();
  ab->add_option("--r-tube", r_tube)->required()->check(CLI::PositiveNumber);
  add_common(ab);

  auto* vf = app.add_subcommand("verify", "run the invariant self-checks");
  vf->add_option("--suite", suite)->check(CLI::IsMember({"all", "fast"}));
  vf->add_option("--output", output, "write to file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints message and usage to the diagnostic stream
    return 1;
  }

  try {
    if (sp->parsed())
      return run_spectrum(alpha, kappa, e_max, parse_m_range(m_spec), format,
                          output);
    if (ms->parsed())
      return run_match_scan(alpha, kappa, r_tube, e_max, parse_m_range(m_spec),
                            sigma_sel, format, output);
    if (ix->parsed())
      return run_indices(parse_alpha_grid(grid_spec), format, output);
    if (ab->parsed()) return run_ab(alpha, r_tube, format, output);
    if (vf->parsed()) return run_verify(suite, output);
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid arguments: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
