#pragma once

// Inner products of regularized profiles, their point-flux limits via
// R-sequence extrapolation, and the derived verification quantities: Gram
// matrices, delta-concentration mass, ladder-pairing defects, the edge
// hermiticity bracket, and finite-difference eigenvalue residuals.

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <stdexcept>
#include <vector>

#include "fluxtube/finite_tube.hpp"
#include "fluxtube/spectrum.hpp"

namespace fluxtube {

struct QuadConfig {
  double r_max = 0.0;  // exterior truncation; 0 = choose from the energies
  double rel_tol = 1e-12;
  int max_subdivisions = 4000;
};

namespace detail {

// 15-point Kronrod rule with embedded 7-point Gauss rule on [-1, 1]
inline constexpr double gk_x[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691,
    0.7415311855993944, 0.5860872354676911, 0.4058451513773972,
    0.2077849550078985, 0.0};
inline constexpr double gk_wk[8] = {
    0.0229353220105292, 0.0630920926299786, 0.1047900103222502,
    0.1406532597155259, 0.1690047266392679, 0.1903505780647854,
    0.2044329400752989, 0.2094821410847278};
inline constexpr double gk_wg[4] = {0.1294849661688697, 0.2797053914892767,
                                    0.3818300505051189, 0.4179591836734694};

struct Panel {
  double a, b, value, abs_value, error;
};

template <class F>
Panel gk15(F&& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double fv[15];
  for (int i = 0; i < 7; ++i) {
    fv[i] = f(c - h * gk_x[i]);
    fv[14 - i] = f(c + h * gk_x[i]);
  }
  fv[7] = f(c);
  double resk = 0.0, resg = 0.0, resabs = 0.0;
  for (int i = 0; i < 7; ++i) {
    resk += gk_wk[i] * (fv[i] + fv[14 - i]);
    resabs += gk_wk[i] * (std::abs(fv[i]) + std::abs(fv[14 - i]));
  }
  resk += gk_wk[7] * fv[7];
  resabs += gk_wk[7] * std::abs(fv[7]);
  for (int i = 0; i < 4; ++i)
    resg += gk_wg[i] * (i < 3 ? fv[2 * i + 1] + fv[13 - 2 * i] : fv[7]);
  double mean = resk * 0.5;
  double resasc = gk_wk[7] * std::abs(fv[7] - mean);
  for (int i = 0; i < 7; ++i)
    resasc +=
        gk_wk[i] * (std::abs(fv[i] - mean) + std::abs(fv[14 - i] - mean));
  double err = std::abs(resk - resg) * h;
  resasc *= std::abs(h);
  if (resasc != 0.0 && err != 0.0)
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  if (!std::isfinite(resk))
    throw std::runtime_error("quadrature: non-finite integrand");
  return {a, b, resk * h, resabs * std::abs(h), err};
}

// globally adaptive bisection of the worst panel, QUADPACK style
template <class F>
double adaptive(F&& f, double a, double b, const QuadConfig& q) {
  if (!(b > a)) return 0.0;
  const double rel = std::max(q.rel_tol, 1e-12);
  std::vector<Panel> panels;
  const int first = 8;
  for (int i = 0; i < first; ++i)
    panels.push_back(gk15(f, a + (b - a) * i / first,
                          a + (b - a) * (i + 1) / first));
  for (int iter = 0; iter + first <= q.max_subdivisions; ++iter) {
    double sum = 0.0, abs_sum = 0.0, err = 0.0;
    for (const auto& p : panels) {
      sum += p.value;
      abs_sum += p.abs_value;
      err += p.error;
    }
    if (err <= rel * std::max(std::abs(sum), 0.01 * abs_sum) || err == 0.0)
      return sum;
    auto worst = std::max_element(
        panels.begin(), panels.end(),
        [](const Panel& x, const Panel& y) { return x.error < y.error; });
    Panel p = *worst;
    double mid = 0.5 * (p.a + p.b);
    if (!(p.a < mid && mid < p.b)) return sum;  // interval exhausted
    *worst = gk15(f, p.a, mid);
    panels.push_back(gk15(f, mid, p.b));
  }
  throw std::runtime_error("quadrature did not converge");
}

inline double default_r_max(const RadialProfile& a, const RadialProfile& b) {
  double e = std::max(std::abs(a.energy), std::abs(b.energy));
  return std::max(8.0, std::sqrt(2.0 * e + 40.0));
}

}  // namespace detail

// 2*pi * integral a(r) b(r) r dr, interior and exterior separately; the
// exterior runs in the u = r^2 variable. Distinct (m, sigma) channels are
// orthogonal by structure: exact zero, no quadrature. Integrands that have
// not decayed by r_max are rejected as divergent.
inline double inner_product(const RadialProfile& a, const RadialProfile& b,
                            const QuadConfig& quad = {}) {
  if (a.channel.m != b.channel.m ||
      a.channel.two_sigma != b.channel.two_sigma)
    return 0.0;
  if (a.config.alpha != b.config.alpha ||
      a.config.r_tube != b.config.r_tube || a.config.mode != b.config.mode)
    throw std::invalid_argument(
        "inner_product: profiles from different configurations");
  const double rt = a.config.r_tube;
  const double r_max =
      quad.r_max > 0.0 ? quad.r_max : detail::default_r_max(a, b);
  double inside = 0.0;
  if (rt > 0.0)
    inside = detail::adaptive(
        [&](double r) {
          return a.value(r, Side::Interior) * b.value(r, Side::Interior) * r;
        },
        0.0, rt, quad);
  auto g = [&](double r) {
    return a.value(r, Side::Exterior) * b.value(r, Side::Exterior) * r;
  };
  double outside = detail::adaptive(
      [&](double u) {
        double r = std::sqrt(u);
        return 0.5 * a.value(r, Side::Exterior) * b.value(r, Side::Exterior);
      },
      rt * rt, r_max * r_max, quad);
  double total = inside + outside;
  double tail = 0.0;
  for (double s : {1.05, 1.3, 1.7, 2.3})
    tail = std::max(tail, std::abs(g(s * r_max)));
  if (tail * r_max > std::max(1e-14, 1e-9 * std::abs(total)))
    throw std::runtime_error(
        "inner_product: integrand has not decayed by r_max (divergent "
        "integral or r_max too small)");
  return 2.0 * detail::pi * total;
}

// --- point-flux limit ---------------------------------------------------

enum class Extrapolation { PowerLaw, InverseLog, None };

struct LimitSequence {
  std::vector<double> r_tube_values{3e-2, 1e-2, 3e-3, 1e-3};
  Extrapolation extrapolation = Extrapolation::PowerLaw;
  // exact decay exponent of the leading term, when the caller knows it
  // (e.g. from a state's normalization law); 0 = estimate from the data.
  // A known exponent upgrades the fit to a Vandermonde solve over the
  // ladder {R^p, R^{p+1}, ...}, which removes the subleading terms that
  // limit the generic three-point fit.
  double leading_power = 0.0;
};

namespace detail {

inline void validate(const LimitSequence& seq) {
  const auto& r = seq.r_tube_values;
  if (r.size() < 3)
    throw std::invalid_argument("limit sequence needs at least 3 radii");
  for (size_t i = 0; i + 1 < r.size(); ++i) {
    if (!(r[i] > 0.0) || !(r[i + 1] > 0.0))
      throw std::invalid_argument("limit sequence radii must be positive");
    if (r[i + 1] / r[i] > 1.0 / 3.0 + 1e-9)
      throw std::invalid_argument(
          "limit sequence must shrink by at least 1/3 per step");
  }
}

// v0 + sum_k c_k R^(p+k) through the last points (exact Vandermonde solve)
inline double ladder_fit(const std::vector<double>& rs,
                         const std::vector<double>& vals, double p) {
  const int n = std::min<int>(4, static_cast<int>(vals.size()));
  const size_t off = vals.size() - n;
  double a[4][5];
  for (int k = 0; k < n; ++k) {
    a[k][0] = 1.0;
    for (int j = 1; j < n; ++j) a[k][j] = std::pow(rs[off + k], p + (j - 1));
    a[k][n] = vals[off + k];
  }
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int k = c + 1; k < n; ++k)
      if (std::abs(a[k][c]) > std::abs(a[piv][c])) piv = k;
    for (int j = 0; j <= n; ++j) std::swap(a[c][j], a[piv][j]);
    for (int k = 0; k < n; ++k) {
      if (k == c) continue;
      double f = a[k][c] / a[c][c];
      for (int j = c; j <= n; ++j) a[k][j] -= f * a[c][j];
    }
  }
  double v0 = a[0][n] / a[0][0];
  if (!std::isfinite(v0))
    throw std::runtime_error("extrapolation unreliable: singular ladder fit");
  return v0;
}

// last-three-point fit of v = v0 + c R^p (p located by bisection), or of
// v = v0 + c / log R^2 for the logarithmically normalized families; a
// caller-supplied exact leading power upgrades to the ladder solve
inline double extrapolate_limit(const std::vector<double>& rs,
                                const std::vector<double>& vals,
                                Extrapolation mode,
                                double leading_power = 0.0) {
  const size_t n = vals.size();
  if (mode == Extrapolation::None) return vals[n - 1];
  const double v1 = vals[n - 3], v2 = vals[n - 2], v3 = vals[n - 1];
  const double r1 = rs[n - 3], r2 = rs[n - 2], r3 = rs[n - 1];
  const double d1 = v1 - v2, d2 = v2 - v3;
  const double scale =
      std::max({std::abs(v1), std::abs(v2), std::abs(v3)});
  if (std::abs(d1) <= std::max(1e-13, 1e-11 * scale) &&
      std::abs(d2) <= std::max(1e-13, 1e-11 * scale))
    return v3;  // already converged to quadrature noise
  if (mode == Extrapolation::PowerLaw && leading_power > 0.0)
    return ladder_fit(rs, vals, leading_power);
  if (mode == Extrapolation::InverseLog) {
    double x2 = 1.0 / std::log(r2 * r2), x3 = 1.0 / std::log(r3 * r3);
    double c1 = d2 / (x2 - x3);
    return v3 - c1 * x3;
  }
  if (d1 * d2 <= 0.0)
    throw std::runtime_error("extrapolation unreliable: sequence not monotone");
  const double rho = d1 / d2;
  auto gap = [&](double p) {
    return (std::pow(r1, p) - std::pow(r2, p)) /
           (std::pow(r2, p) - std::pow(r3, p));
  };
  double lo = 0.05, hi = 8.0;
  if (rho <= gap(lo) || rho >= gap(hi))
    throw std::runtime_error(
        "extrapolation unreliable: decay rate outside the power-law window");
  for (int it = 0; it < 80; ++it) {
    double mid = 0.5 * (lo + hi);
    (gap(mid) < rho ? lo : hi) = mid;
  }
  const double p = 0.5 * (lo + hi);
  const double c = d2 / (std::pow(r2, p) - std::pow(r3, p));
  return v3 - c * std::pow(r3, p);
}

}  // namespace detail

using ProfileFamily = std::function<RadialProfile(double)>;

// inner product evaluated along the shrinking-tube sequence and
// extrapolated to the point limit
inline double regularized_inner_product(const ProfileFamily& a,
                                        const ProfileFamily& b,
                                        const LimitSequence& seq = {},
                                        const QuadConfig& quad = {}) {
  detail::validate(seq);
  std::vector<double> vals;
  for (double rt : seq.r_tube_values)
    vals.push_back(inner_product(a(rt), b(rt), quad));
  return detail::extrapolate_limit(seq.r_tube_values, vals, seq.extrapolation,
                                   seq.leading_power);
}

// pairwise regularized inner products; rows filled concurrently. The
// extrapolation model follows the states' normalization laws: inverse-log
// whenever a log-normalized family is involved; for entries involving a
// power-normalized singular state the exact leading exponent is known
// (the normalization scales as R^{nu-1}), which the ladder fit exploits.
inline std::vector<std::vector<double>> gram(
    const std::vector<EigenState>& states, double alpha,
    const LimitSequence& seq = {}, const QuadConfig& quad = {}) {
  detail::validate(seq);
  const size_t n = states.size();
  std::vector<std::vector<double>> g(n, std::vector<double>(n, 0.0));
  auto is_log = [](const EigenState& s) {
    return s.family == Family::SingDownLog || s.family == Family::SingUpLog;
  };
  auto is_power_singular = [](const EigenState& s) {
    return s.family == Family::SingDown || s.family == Family::SingUp;
  };
  auto entry = [&](size_t i, size_t j) {
    if (states[i].channel.m != states[j].channel.m ||
        states[i].channel.two_sigma != states[j].channel.two_sigma)
      return 0.0;
    LimitSequence s = seq;
    if (s.extrapolation != Extrapolation::None) {
      s.extrapolation = (is_log(states[i]) || is_log(states[j]))
                            ? Extrapolation::InverseLog
                            : Extrapolation::PowerLaw;
      s.leading_power = 0.0;
      if (is_power_singular(states[i]) || is_power_singular(states[j])) {
        double nu = std::abs(states[i].channel.m + alpha);
        double p = (i == j) ? 2.0 * nu - 2.0 : nu - 1.0;
        if (p > 0.0) s.leading_power = p;
      }
    }
    return regularized_inner_product(
        [&](double rt) { return state_profile(alpha, states[i], rt); },
        [&](double rt) { return state_profile(alpha, states[j], rt); }, s,
        quad);
  };
  std::vector<std::future<void>> rows;
  for (size_t i = 0; i < n; ++i)
    rows.push_back(std::async(std::launch::async, [&, i] {
      for (size_t j = i; j < n; ++j) g[i][j] = entry(i, j);
    }));
  for (auto& r : rows) r.get();
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < i; ++j) g[i][j] = g[j][i];
  return g;
}

// probability mass 2*pi * integral_0^eps |psi|^2 r dr of the normalized
// state at tube radius r_tube
inline double delta_mass(const EigenState& st, double alpha, double eps,
                         double r_tube, const QuadConfig& quad = {}) {
  if (!(eps > 0.0)) throw std::invalid_argument("delta_mass: eps > 0");
  auto psi = state_profile(alpha, st, r_tube);
  double mass = detail::adaptive(
      [&](double r) {
        double f = psi.value(r, Side::Interior);
        return f * f * r;
      },
      0.0, std::min(eps, r_tube), quad);
  if (eps > r_tube)
    mass += detail::adaptive(
        [&](double r) {
          double f = psi.value(r, Side::Exterior);
          return f * f * r;
        },
        r_tube, eps, quad);
  return 2.0 * detail::pi * mass;
}

// worst-case defect of the pairing relation: the raising map applied to a
// normalized spin-down state must equal +sqrt(E) (flux-shifted ladder) or
// -sqrt(E) (unshifted ladder) times its normalized partner
inline double susy_pair_check(double alpha, const EigenState& st,
                              double r_tube, const std::vector<double>& grid) {
  if (st.channel.two_sigma != -1)
    throw std::invalid_argument("susy_pair_check: expects a spin-down state");
  const double e = energy_free(st, alpha);
  if (!(e > 0.0))
    throw std::invalid_argument("susy_pair_check: state is a zero mode");
  auto partner = pair_partner(st, alpha);
  if (!partner)
    throw std::invalid_argument("susy_pair_check: state has no partner");
  auto psi = state_profile(alpha, st, r_tube);
  auto phi = state_profile(alpha, *partner, r_tube);
  auto raised = apply_raising(psi);
  const double s = st.family == Family::LagA ? 1.0 : -1.0;
  double worst = 0.0;
  for (double r : grid)
    worst = std::max(worst,
                     std::abs(raised.value(r, Side::Exterior) -
                              s * std::sqrt(e) * phi.value(r, Side::Exterior)));
  return worst;
}

// edge bracket psi_{E'}(R) * R * [psi_E'(R^-) - psi_E'(R^+)] of the
// value-matched ansatz, both profiles normalized, extrapolated along the
// sequence; admissible energy pairs drive it to zero. Energies are
// kappa-free channel eigenvalues.
inline double hermiticity_check(const FluxConfig& cfg0, Channel ch, double e,
                                double e_prime, const LimitSequence& seq = {},
                                const QuadConfig& quad = {}) {
  detail::validate(seq);
  std::vector<double> vals;
  for (double rt : seq.r_tube_values) {
    FluxConfig cfg = cfg0;
    cfg.r_tube = rt;
    auto pe = matched_ansatz(cfg, ch, e);
    auto pp = matched_ansatz(cfg, ch, e_prime);
    double ne = std::sqrt(inner_product(pe, pe, quad));
    double np = std::sqrt(inner_product(pp, pp, quad));
    double jump =
        pe.derivative(rt, Side::Interior) - pe.derivative(rt, Side::Exterior);
    vals.push_back(pp.value(rt, Side::Exterior) / np * rt * jump / ne);
  }
  return std::abs(detail::extrapolate_limit(seq.r_tube_values, vals,
                                            seq.extrapolation,
                                            seq.leading_power));
}

// max over the grid of |(H psi)(r) - E psi(r)| / max(1, |psi(r)|) with the
// channel-reduced operator applied by five-point central differences; grid
// points must keep the whole stencil on one side of the tube edge
inline double ode_residual(const RadialProfile& psi, double e,
                           const std::vector<double>& grid, double h = 1e-3) {
  double worst = 0.0;
  for (double r : grid) {
    bool interior = psi.config.r_tube > 0.0 && r < psi.config.r_tube;
    Side side = interior ? Side::Interior : Side::Exterior;
    auto f = [&](double x) { return psi.value(x, side); };
    double f0 = f(r);
    double d1 =
        (f(r - 2 * h) - 8 * f(r - h) + 8 * f(r + h) - f(r + 2 * h)) / (12 * h);
    double d2 = (-f(r - 2 * h) + 16 * f(r - h) - 30 * f0 + 16 * f(r + h) -
                 f(r + 2 * h)) /
                (12 * h * h);
    double v = radial_potential(psi.config, psi.channel, interior, r);
    double res = -(d2 + d1 / r) / 4.0 + (v - e) * f0;
    worst = std::max(worst, std::abs(res) / std::max(1.0, std::abs(f0)));
  }
  return worst;
}

}  // namespace fluxtube
