#pragma once
// Bound states of the background field plus a finite-radius flux tube:
// matched interior/exterior ansatz, the log-derivative matching residual at
// the tube edge, eigenvalue scanning, the small-radius survival condition
// for the field-ladder branch, and the exact zero-energy singlets.
//
// Energies in this header are the kappa-free radial eigenvalues; the
// anomalous-coupling shift enters only as bookkeeping (it displaces the
// whole spectrum by kappa*sigma without touching the eigenfunctions).

#include <algorithm>
#include <cmath>
#include <vector>

#include <fluxtube/radial.hpp>

namespace fluxtube {

struct MatchResult {
  double energy = 0.0;
  double residual = 0.0;  // |normalized matching residual| at the root
};

namespace detail {

inline void require_finite_tube(const FluxConfig& cfg) {
  if (cfg.mode != FieldMode::LandauPlusTube)
    throw std::invalid_argument(
        "finite-tube matching requires the background-field mode");
  if (!(cfg.r_tube > 0.0))
    throw std::invalid_argument("finite-tube matching requires r_tube > 0");
  if (cfg.alpha == -cfg.r_tube * cfg.r_tube)
    throw std::invalid_argument(
        "degenerate interior: alpha = -r_tube^2 makes the interior flux "
        "profile vanish");
}

struct MatchParams {
  double r2;      // r_tube^2
  double a_out;   // U first parameter at trial energy
  double b_out;   // U second parameter
  double q;       // interior oscillator scale 1 + alpha/r_tube^2
  double a_in;    // M first parameter
  double b_in;    // M second parameter
};

inline MatchParams match_params(const FluxConfig& cfg, Channel ch, double e) {
  require_finite_tube(cfg);
  MatchParams p;
  p.r2 = cfg.r_tube * cfg.r_tube;
  double ma = ch.m + cfg.alpha;
  p.a_out = ma + ch.sigma() + 0.5 - e;
  p.b_out = ma + 1.0;
  p.q = 1.0 + cfg.alpha / p.r2;
  p.a_in = std::max(ch.m, 0) + ch.sigma() + 0.5 - p.r2 * e / (p.r2 + cfg.alpha);
  p.b_in = 1.0 + std::abs(ch.m);
  return p;
}

}  // namespace detail

// Trial bound-state profile at energy e: the decaying exterior solution
// r^{m+alpha} e^{-r^2/2} U(.,.,r^2) joined continuously to the regular
// interior solution r^{|m|} e^{-q r^2/2} M(.,.,q r^2) at the tube edge.
// Continuity of the derivative then holds exactly when e is an eigenvalue.
inline RadialProfile matched_ansatz(const FluxConfig& cfg, Channel ch,
                                    double e) {
  auto p = detail::match_params(cfg, ch, e);
  RadialProfile psi;
  psi.config = cfg;
  psi.channel = ch;
  psi.energy = e + cfg.kappa * ch.sigma();
  psi.exterior = {{1.0, ch.m + cfg.alpha, -0.5, TricomiF{p.a_out, p.b_out, 1.0}}};
  double edge = region_value(psi.exterior, cfg.r_tube);
  ClosedForm raw{1.0, static_cast<double>(std::abs(ch.m)), -p.q / 2.0,
                 KummerF{p.a_in, p.b_in, p.q}};
  double raw_edge = raw.evaluate(cfg.r_tube);
  if (raw_edge == 0.0)
    throw std::runtime_error(
        "matched_ansatz: interior solution vanishes at the tube edge at this "
        "trial energy");
  raw.coeff = edge / raw_edge;
  psi.interior = {raw};
  return psi;
}

// Scaled derivative jump of the matched ansatz at the tube edge,
//
//   r^2 U'/U - (r^2+alpha) M'/M + min(m,0) + alpha,
//
// normalized by the size of its two ratio terms so poles stay O(1); vanishes
// exactly at the eigenvalues.
inline double matching_residual(const FluxConfig& cfg, Channel ch, double e) {
  auto p = detail::match_params(cfg, ch, e);
  double x_out = p.r2;
  double x_in = p.r2 + cfg.alpha;  // = q r_tube^2
  double u = tricomi_u(p.a_out, p.b_out, x_out).value;
  double up = tricomi_u_deriv(p.a_out, p.b_out, x_out).value;
  double mv = kummer_m(p.a_in, p.b_in, x_in).value;
  double mp = kummer_m_deriv(p.a_in, p.b_in, x_in).value;
  double t1 = x_out * up / u;
  double t2 = x_in * mp / mv;
  double res = t1 - t2 + std::min(ch.m, 0) + cfg.alpha;
  return res / std::max({1.0, std::abs(t1), std::abs(t2)});
}

// All eigenvalues in (e_lo, e_hi): grid scan for sign changes of the
// matching residual, bisection refinement, and rejection of the residual's
// poles (where the sign also flips but the residual stays O(1)).
inline std::vector<MatchResult> scan_roots(const FluxConfig& cfg, Channel ch,
                                           double e_lo, double e_hi,
                                           int steps = 0) {
  detail::require_finite_tube(cfg);
  if (!(e_hi > e_lo)) throw std::invalid_argument("scan_roots: empty window");
  if (steps <= 0)
    steps = std::max(64, static_cast<int>(std::ceil((e_hi - e_lo) / 0.002)));
  auto res_at = [&](double e) -> double {
    try {
      return matching_residual(cfg, ch, e);
    } catch (const std::exception&) {
      return std::numeric_limits<double>::quiet_NaN();
    }
  };
  std::vector<MatchResult> roots;
  auto push_root = [&](double e, double r) {
    for (const auto& kept : roots)
      if (std::abs(kept.energy - e) < 1e-9) return;
    roots.push_back({e, std::abs(r)});
  };
  double prev_e = e_lo, prev_r = res_at(e_lo);
  for (int i = 1; i <= steps; ++i) {
    double e = e_lo + (e_hi - e_lo) * i / steps;
    double r = res_at(e);
    if (std::isfinite(prev_r) && prev_r == 0.0) push_root(prev_e, 0.0);
    if (std::isfinite(prev_r) && std::isfinite(r) && prev_r != 0.0 &&
        r != 0.0 && std::signbit(prev_r) != std::signbit(r)) {
      double lo = prev_e, hi = e, flo = prev_r;
      for (int it = 0; it < 100 && hi - lo > 1e-13 * std::max(1.0, std::abs(hi));
           ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = res_at(mid);
        if (!std::isfinite(fm)) break;
        if (fm == 0.0) {
          lo = hi = mid;
          break;
        }
        if (std::signbit(fm) == std::signbit(flo)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      double root = 0.5 * (lo + hi);
      double rr = res_at(root);
      // at a genuine root the normalized residual collapses with the
      // bracket; at a pole it stays O(1)
      if (std::isfinite(rr) && std::abs(rr) < 1e-6) push_root(root, rr);
    }
    prev_e = e;
    prev_r = r;
  }
  if (std::isfinite(prev_r) && prev_r == 0.0) push_root(prev_e, 0.0);
  std::sort(roots.begin(), roots.end(),
            [](const MatchResult& a, const MatchResult& b) {
              return a.energy < b.energy;
            });
  return roots;
}

// Small-radius survival indicator for the field-ladder branch of channel ch:
// as the tube shrinks, the Landau-type levels of the channel keep a
// normalizable limit exactly when this expression vanishes.  The fulfilled
// cases evaluate to an exact floating-point zero.
inline double small_r_condition(double alpha, Channel ch) {
  double a0 = std::max(ch.m, 0) + ch.sigma() + 0.5;
  double b0 = 1.0 + std::abs(ch.m);
  double pref = (ch.two_sigma == -1)
                    ? -2.0 * std::max(ch.m, 0)
                    : 2.0 * std::min(ch.m, 0) + 2.0 * alpha;
  return pref * kummer_m(a0, b0, alpha).value -
         2.0 * alpha * kummer_m_deriv(a0, b0, alpha).value;
}

// Exact zero-energy bound state at finite tube radius: spin-down, m <= 0,
// exterior r^{-(m+alpha)} e^{-r^2/2}, interior fixed by continuity (the
// derivative is then automatically continuous).  Not normalized.
inline RadialProfile singlet_profile(const FluxConfig& cfg, int m) {
  detail::require_finite_tube(cfg);
  if (m > 0)
    throw std::invalid_argument("singlet_profile: zero modes have m <= 0");
  RadialProfile psi;
  psi.config = cfg;
  psi.channel = {m, -1};
  psi.energy = cfg.kappa * -0.5;
  double ma = m + cfg.alpha;
  psi.exterior = {{1.0, -ma, -0.5, One{}}};
  double q = 1.0 + cfg.alpha / (cfg.r_tube * cfg.r_tube);
  double coeff =
      std::pow(cfg.r_tube, -cfg.alpha) * std::exp(cfg.alpha / 2.0);
  psi.interior = {{coeff, static_cast<double>(-m), -q / 2.0, One{}}};
  return psi;
}

}  // namespace fluxtube
