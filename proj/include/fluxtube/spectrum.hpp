#pragma once

// Exact point-limit spectrum of the flux-tube problem: family enumeration
// per channel, level bookkeeping in exact integer-plus-flux form, SUSY
// partner map, normalized limit eigenfunctions at finite tube radius, the
// singular-state index, and the equivalence classes of the flux parameter.

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fluxtube/finite_tube.hpp"

namespace fluxtube {

enum class Family { LagA, LagB, SingDownLog, SingDown, SingUpLog, SingUp };

inline bool is_singular(Family f) {
  return f != Family::LagA && f != Family::LagB;
}

inline const char* family_name(Family f) {
  switch (f) {
    case Family::LagA: return "LagA";
    case Family::LagB: return "LagB";
    case Family::SingDownLog: return "SingDownLog";
    case Family::SingDown: return "SingDown";
    case Family::SingUpLog: return "SingUpLog";
    case Family::SingUp: return "SingUp";
  }
  return "?";
}

// One admissible family in a channel, with its level law
//   E - kappa*sigma = e_base + n + e_flux_coeff * (m + alpha),
// n = 0,1,2,... for the Laguerre families; the singular families carry a
// single state with E - kappa*sigma = 0.
struct FamilyRule {
  Family family;
  int e_base;        // spin offset sigma + 1/2 (0 down, 1 up); 0 for singular
  int e_flux_coeff;  // 1 when the level rides the flux shift m + alpha
  bool laddered;     // false: single zero-energy state
};

// Which families live in a channel. The assignment is total: it covers the
// boundary values of m + alpha, keeps every positive-energy level paired
// across (sigma, m) <-> (-sigma, m - 2 sigma), and reduces to the uniform
// Landau lattice at alpha = 0.
inline std::vector<FamilyRule> admissible_families(double alpha, Channel ch) {
  const double nu = ch.m + alpha;
  const int up = ch.two_sigma > 0 ? 1 : 0;
  std::vector<FamilyRule> out;
  auto lag_a = [&] { out.push_back({Family::LagA, up, 1, true}); };
  auto lag_b = [&] { out.push_back({Family::LagB, up, 0, true}); };
  if (ch.two_sigma < 0) {
    if (ch.m >= 1) {
      if (nu > 0.0) lag_a();
      else if (nu < 0.0) lag_b();
    } else {
      if (nu < 1.0) lag_b();
      else if (nu == 1.0) out.push_back({Family::SingDownLog, 0, 0, false});
      else {
        lag_a();
        out.push_back({Family::SingDown, 0, 0, false});
      }
    }
  } else {
    if (ch.m <= -1) {
      if (nu > 0.0) lag_a();
      else if (nu < 0.0) lag_b();
    } else {
      if (nu > -1.0) lag_a();
      else if (nu == -1.0) out.push_back({Family::SingUpLog, 0, 0, false});
      else {
        lag_b();
        out.push_back({Family::SingUp, 0, 0, false});
      }
    }
  }
  return out;
}

struct EigenState {
  Family family;
  Channel channel;
  int n = 0;             // radial quantum number; 0 for singular families
  int e_base = 0;        // exact bookkeeping: E - kappa*sigma =
  int e_flux_coeff = 0;  //   e_base + e_flux_coeff * (m + alpha)
  double energy = 0.0;   // rendered E + kappa*sigma

  friend bool operator==(const EigenState& x, const EigenState& y) {
    return x.family == y.family && x.channel == y.channel && x.n == y.n;
  }
};

// E - kappa*sigma, rendered from the exact fields.
inline double energy_free(const EigenState& st, double alpha) {
  return st.e_base + st.e_flux_coeff * (st.channel.m + alpha);
}

// Two states have exactly equal energy (as expressions in alpha) iff these
// keys agree: the coefficient of alpha and the integer remainder.
inline std::pair<int, int> energy_key(const EigenState& st) {
  return {st.e_flux_coeff, st.e_base + st.e_flux_coeff * st.channel.m};
}

struct SpectrumTable {
  double alpha = 0.0, kappa = 0.0, e_max = 0.0;
  int m_min = 0, m_max = 0;
  std::vector<EigenState> states;
  // pair-channels {(down, j), (up, j-1)} carrying no Laguerre ladder at all
  std::vector<std::pair<Channel, Channel>> vacancies;
  double block_shift = 0.0;  // fractional part of alpha: the offset of the
                             // flux-shifted ladder against the integer grid
};

inline SpectrumTable enumerate_spectrum(double alpha, double kappa,
                                        double e_max, int m_min, int m_max) {
  if (!(e_max > 0.0)) throw std::invalid_argument("enumerate_spectrum: e_max");
  if (m_min > m_max) throw std::invalid_argument("enumerate_spectrum: m range");
  SpectrumTable t;
  t.alpha = alpha;
  t.kappa = kappa;
  t.e_max = e_max;
  t.m_min = m_min;
  t.m_max = m_max;
  t.block_shift = alpha - std::floor(alpha);
  for (int m = m_min; m <= m_max; ++m)
    for (int ts : {-1, +1}) {
      Channel ch{m, ts};
      double ks = kappa * ch.sigma();
      for (const auto& fr : admissible_families(alpha, ch)) {
        if (!fr.laddered) {
          if (ks <= e_max) t.states.push_back({fr.family, ch, 0, 0, 0, ks});
          continue;
        }
        for (int n = 0;; ++n) {
          double ek = fr.e_base + n + fr.e_flux_coeff * (m + alpha) + ks;
          if (ek > e_max) break;
          t.states.push_back(
              {fr.family, ch, n, fr.e_base + n, fr.e_flux_coeff, ek});
        }
      }
    }
  auto has_laguerre = [&](Channel ch) {
    for (const auto& fr : admissible_families(alpha, ch))
      if (fr.laddered) return true;
    return false;
  };
  for (int j = m_min + 1; j <= m_max; ++j)
    if (!has_laguerre({j, -1}) && !has_laguerre({j - 1, +1}))
      t.vacancies.push_back({Channel{j, -1}, Channel{j - 1, +1}});
  std::sort(t.states.begin(), t.states.end(),
            [](const EigenState& x, const EigenState& y) {
              if (x.energy != y.energy) return x.energy < y.energy;
              int jx = 2 * x.channel.m + x.channel.two_sigma;
              int jy = 2 * y.channel.m + y.channel.two_sigma;
              if (jx != jy) return jx < jy;
              if (x.channel.two_sigma != y.channel.two_sigma)
                return x.channel.two_sigma < y.channel.two_sigma;
              return x.n < y.n;
            });
  return t;
}

// SUSY partner of a positive-energy state: channel (sigma, m) maps to
// (-sigma, m - 2 sigma) at the same kappa-free energy. Zero-energy states
// (singular families and the n = 0 spin-down unshifted ladder) are singlets.
inline std::optional<EigenState> pair_partner(const EigenState& st,
                                              double alpha = 0.0,
                                              double kappa = 0.0) {
  if (st.e_base == 0 && st.e_flux_coeff == 0) return std::nullopt;
  EigenState p = st;
  if (st.channel.two_sigma < 0) {
    p.channel = {st.channel.m - 1, +1};
    if (st.family == Family::LagB) p.n = st.n - 1;
  } else {
    p.channel = {st.channel.m + 1, -1};
    if (st.family == Family::LagB) p.n = st.n + 1;
  }
  p.e_base = st.e_base + st.e_flux_coeff * (st.channel.m - p.channel.m);
  p.energy = energy_free(p, alpha) + kappa * p.channel.sigma();
  return p;
}

// Net number of zero modes: spin-down singular states minus spin-up ones.
inline int index_singular(double alpha) {
  // #{m <= 0 : m + alpha >= 1} and #{m >= 0 : m + alpha <= -1}
  double down = std::max(0.0, 1.0 - std::ceil(1.0 - alpha));
  double up = std::max(0.0, std::floor(-1.0 - alpha) + 1.0);
  return static_cast<int>(down) - static_cast<int>(up);
}

// Flux values fall into structurally identical classes: the open unit
// intervals between consecutive integers (with (-1,1) merged into one
// class) and the isolated nonzero integers.
struct EquivClass {
  enum Kind { Interval, IsolatedInteger } kind;
  int lo = 0, hi = 0;  // Interval: alpha in (lo, hi)
  int k = 0;           // IsolatedInteger: alpha == k
  friend bool operator==(const EquivClass&, const EquivClass&) = default;
};

inline EquivClass classify_alpha(double alpha) {
  double fl = std::floor(alpha);
  if (alpha == fl) {
    int k = static_cast<int>(fl);
    if (k != 0) return {EquivClass::IsolatedInteger, 0, 0, k};
    return {EquivClass::Interval, -1, 1, 0};
  }
  int n = static_cast<int>(fl);
  if (n == 0 || n == -1) return {EquivClass::Interval, -1, 1, 0};
  return {EquivClass::Interval, n, n + 1, 0};
}

// --- normalized limit eigenfunctions at finite tube radius -------------------

namespace detail {

// Interior continuation of a given exterior shape: the regular interior
// solution c r^{|m|} e^{-q r^2/2} M(a_in, 1+|m|, q r^2) with c fixed by
// continuity at the tube edge.
inline ClosedForm continued_interior(const FluxConfig& cfg, Channel ch,
                                     double e_free, double edge_value) {
  auto p = match_params(cfg, ch, e_free);
  ClosedForm raw{1.0, static_cast<double>(std::abs(ch.m)), -p.q / 2.0,
                 KummerF{p.a_in, p.b_in, p.q}};
  double raw_edge = raw.evaluate(cfg.r_tube);
  if (raw_edge == 0.0)
    throw std::runtime_error("continued_interior: interior node at the edge");
  raw.coeff = edge_value / raw_edge;
  return raw;
}

inline double log_norm_factor(double r_tube) {
  double w = -pi * std::log(r_tube * r_tube);
  if (!(w > 0.0))
    throw std::domain_error("state_profile: log-normalized family needs r_tube < 1");
  return 1.0 / std::sqrt(w);
}

}  // namespace detail

// The normalized eigenfunction of a spectrum entry, regularized at tube
// radius r_tube: closed Laguerre/exponential exterior joined continuously to
// the regular interior solution. Norms are exact in the point limit (the
// log-normalized families approach 1 only as -1/log r_tube^2).
inline RadialProfile state_profile(double alpha, const EigenState& st,
                                   double r_tube) {
  FluxConfig cfg{alpha, r_tube, FieldMode::LandauPlusTube, 0.0};
  detail::require_finite_tube(cfg);
  bool ok = false;
  for (const auto& fr : admissible_families(alpha, st.channel))
    ok = ok || (fr.family == st.family);
  if (!ok || st.n < 0 || (is_singular(st.family) && st.n != 0))
    throw std::invalid_argument("state_profile: state not admissible");

  const int m = st.channel.m;
  const double nu = m + alpha;
  const double r2 = r_tube * r_tube;
  const double q = 1.0 + alpha / r2;
  using detail::pi;

  RadialProfile psi;
  psi.config = cfg;
  psi.channel = st.channel;
  psi.energy = energy_free(st, alpha);

  switch (st.family) {
    case Family::LagA:
    case Family::LagB: {
      double a_lag = st.family == Family::LagA ? nu : -nu;
      double norm =
          std::sqrt(gamma_ratio(st.n + 1.0, st.n + 1.0 + a_lag) / pi);
      psi.exterior = {{norm, a_lag, -0.5, LaguerreF{st.n, a_lag, 1.0}}};
      double edge = region_value(psi.exterior, r_tube);
      psi.interior = {
          detail::continued_interior(cfg, st.channel, psi.energy, edge)};
      break;
    }
    case Family::SingDownLog: {
      double norm = detail::log_norm_factor(r_tube);
      psi.exterior = {{norm, -1.0, -0.5, One{}}};
      psi.interior = {{norm * std::pow(r_tube, m - 1.0) * std::exp(alpha / 2.0),
                       static_cast<double>(-m), -q / 2.0, One{}}};
      break;
    }
    case Family::SingDown: {
      double d = 1.0 / (nu - 1.0) + std::pow(alpha, m - 1.0) *
                                        std::exp(alpha) *
                                        gamma_lower(1.0 - m, alpha).value;
      double norm = std::pow(r_tube, nu - 1.0) / std::sqrt(pi * d);
      psi.exterior = {{norm, -nu, -0.5, One{}}};
      psi.interior = {{norm * std::pow(r_tube, m - nu) * std::exp(alpha / 2.0),
                       static_cast<double>(-m), -q / 2.0, One{}}};
      break;
    }
    case Family::SingUpLog:
    case Family::SingUp: {
      double norm;
      if (st.family == Family::SingUpLog) {
        norm = detail::log_norm_factor(r_tube);
      } else {
        double d = 1.0 / (-nu - 1.0) + std::exp(-alpha) *
                                           std::pow(-alpha, -m - 1.0) *
                                           gamma_lower(m + 1.0, -alpha).value;
        norm = std::pow(r_tube, -nu - 1.0) / std::sqrt(pi * d);
      }
      psi.exterior = {{norm, nu, +0.5, GammaQF{-nu, 1.0}}};
      psi.interior = {{norm * std::pow(r_tube, nu - m) *
                           gamma_upper_ratio(-nu, r2).value *
                           std::exp(-alpha / 2.0),
                       static_cast<double>(m), q / 2.0, One{}}};
      break;
    }
  }
  return psi;
}

}  // namespace fluxtube
