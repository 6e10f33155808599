#pragma once

// Pure flux tube without the homogeneous background field: scattering
// continuum with channel-dependent Bessel order, the finite set of k = 0
// zero modes with their three normalization regimes, and the zero-mode
// index as a function of the flux.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "fluxtube/spectrum.hpp"

namespace fluxtube {

// Exterior Bessel order per channel: J_{+(m+alpha)} where the flux-shifted
// bound ladder lives, J_{-(m+alpha)} where the unshifted one does. Channels
// carrying only a zero mode (or nothing) have no continuum branch.
enum class AbBranch { PlusOrder, MinusOrder };

inline std::optional<AbBranch> ab_branch(double alpha, Channel ch) {
  for (const auto& fr : admissible_families(alpha, ch)) {
    if (fr.family == Family::LagA) return AbBranch::PlusOrder;
    if (fr.family == Family::LagB) return AbBranch::MinusOrder;
  }
  return std::nullopt;
}

struct AbScatterState {
  Channel channel;
  double k;
  AbBranch branch;
};

// Scattering profile at momentum k: exterior Bessel factor, interior
// regular oscillator solution in the tube's quadratic gauge, joined
// continuously at the edge. At alpha = 0 the tube is empty and the free
// Bessel wave extends everywhere.
inline RadialProfile ab_state_profile(double alpha, Channel ch, double k,
                                      double r_tube) {
  if (!(k > 0.0)) throw std::invalid_argument("ab_state_profile: k > 0");
  if (!(r_tube > 0.0))
    throw std::invalid_argument("ab_state_profile: r_tube > 0");
  auto br = ab_branch(alpha, ch);
  if (!br)
    throw std::invalid_argument(
        "ab_state_profile: channel carries no scattering branch");
  RadialProfile psi;
  psi.config = {alpha, r_tube, FieldMode::TubeOnly, 0.0};
  psi.channel = ch;
  psi.energy = k * k / 4.0;
  double order = (*br == AbBranch::PlusOrder ? 1.0 : -1.0) * (ch.m + alpha);
  ClosedForm ext{1.0, 0.0, 0.0, BesselF{order, k}};
  psi.exterior = {ext};
  if (alpha == 0.0) {
    psi.interior = {ext};
    return psi;
  }
  double beta = alpha / (r_tube * r_tube);
  double a_in = std::max(ch.m, 0) + ch.sigma() + 0.5 - k * k / (4.0 * beta);
  double b_in = 1.0 + std::abs(ch.m);
  ClosedForm raw{1.0, static_cast<double>(std::abs(ch.m)), -beta / 2.0,
                 KummerF{a_in, b_in, beta}};
  double raw_edge = raw.evaluate(r_tube);
  if (raw_edge == 0.0)
    throw std::runtime_error("ab_state_profile: interior node at the edge");
  raw.coeff = ext.evaluate(r_tube) / raw_edge;
  psi.interior = {raw};
  return psi;
}

// k = 0 modes: spin-down for m <= 0 with m+alpha > 1/2, spin-up for m >= 0
// with m+alpha < -1/2. Only |m+alpha| > 1 gives a normalizable state; the
// boundary |m+alpha| = 1 is normalized against the scaled-field singlets
// (log factor), and 1/2 < |m+alpha| < 1 stays continuum-like with nu = 1.
enum class AbRegime { Normalizable, LogNormalized, NonNormalizable };

struct AbZeroMode {
  Channel channel;
  AbRegime regime;
  double nu;  // overall normalization constant of the profile
};

namespace detail {

inline AbZeroMode make_zero_mode(double alpha, int m, int two_sigma,
                                 double r_tube) {
  double u = two_sigma < 0 ? m + alpha : -(m + alpha);  // > 1/2
  AbZeroMode z{{m, two_sigma}, AbRegime::NonNormalizable, 1.0};
  if (u > 1.0) {
    double d = two_sigma < 0
                   ? 1.0 / (u - 1.0) + std::pow(alpha, m - 1.0) *
                                           std::exp(alpha) *
                                           gamma_lower(1.0 - m, alpha).value
                   : 1.0 / (u - 1.0) + std::exp(-alpha) *
                                           std::pow(-alpha, -m - 1.0) *
                                           gamma_lower(m + 1.0, -alpha).value;
    z.regime = AbRegime::Normalizable;
    z.nu = std::pow(r_tube, u - 1.0) / std::sqrt(pi * d);
  } else if (u == 1.0) {
    z.regime = AbRegime::LogNormalized;
    z.nu = log_norm_factor(r_tube);
  }
  return z;
}

}  // namespace detail

inline std::vector<AbZeroMode> ab_zero_modes(double alpha, double r_tube) {
  if (!(r_tube > 0.0))
    throw std::invalid_argument("ab_zero_modes: r_tube > 0");
  std::vector<AbZeroMode> out;
  for (int m = 0; m + alpha > 0.5; --m)
    out.push_back(detail::make_zero_mode(alpha, m, -1, r_tube));
  for (int m = 0; m + alpha < -0.5; ++m)
    out.push_back(detail::make_zero_mode(alpha, m, +1, r_tube));
  return out;
}

inline RadialProfile ab_zero_mode_profile(double alpha, const AbZeroMode& z,
                                          double r_tube) {
  RadialProfile psi;
  psi.config = {alpha, r_tube, FieldMode::TubeOnly, 0.0};
  psi.channel = z.channel;
  psi.energy = 0.0;
  const int m = z.channel.m;
  const double nu = m + alpha;
  const double beta = alpha / (r_tube * r_tube);
  if (z.channel.two_sigma < 0) {
    psi.exterior = {{z.nu, -nu, 0.0, One{}}};
    psi.interior = {{z.nu * std::pow(r_tube, -alpha) * std::exp(alpha / 2.0),
                     static_cast<double>(-m), -beta / 2.0, One{}}};
  } else {
    psi.exterior = {{z.nu, nu, 0.0, One{}}};
    psi.interior = {{z.nu * std::pow(r_tube, alpha) * std::exp(-alpha / 2.0),
                     static_cast<double>(m), beta / 2.0, One{}}};
  }
  return psi;
}

// Zero-mode count imbalance, spin-down minus spin-up.
inline int index_ab(double alpha) {
  double down = std::max(0.0, -std::floor(0.5 - alpha));  // #{m<=0: m+a>1/2}
  double up = std::max(0.0, std::ceil(-0.5 - alpha));     // #{m>=0: m+a<-1/2}
  return static_cast<int>(down) - static_cast<int>(up);
}

// Worst-case violation of the radial eigenvalue equation on an exterior
// grid, via five-point finite differences: |(H psi)(r) - (k^2/4) psi(r)|
// scaled by max(1, |psi|). The exterior radial operator is
// -(1/4)(f'' + f'/r) + (m+alpha)^2/(4 r^2) f.
inline double ab_hamiltonian_residual(const RadialProfile& psi, double alpha,
                                      double k,
                                      const std::vector<double>& grid) {
  const double h = 1e-3;
  const double mu = psi.channel.m + alpha;
  double worst = 0.0;
  for (double r : grid) {
    auto f = [&](double x) { return psi.value(x, Side::Exterior); };
    double f0 = f(r);
    double d1 =
        (f(r - 2 * h) - 8 * f(r - h) + 8 * f(r + h) - f(r + 2 * h)) / (12 * h);
    double d2 = (-f(r - 2 * h) + 16 * f(r - h) - 30 * f0 + 16 * f(r + h) -
                 f(r + 2 * h)) /
                (12 * h * h);
    double res = -(d2 + d1 / r) / 4.0 + mu * mu / (4.0 * r * r) * f0 -
                 k * k / 4.0 * f0;
    worst = std::max(worst, std::abs(res) / std::max(1.0, std::abs(f0)));
  }
  return worst;
}

}  // namespace fluxtube
