#pragma once
// Closed-form radial wavefunction machinery: a small term grammar
// coeff * r^power * exp(gauss r^2) * special-factor, closed under d/dr and
// under the first-order spin ladder maps, plus the two-region (inside /
// outside the tube) profile container everything downstream works with.

#include <cmath>
#include <stdexcept>
#include <variant>
#include <vector>

#include <fluxtube/specfun.hpp>

namespace fluxtube {

enum class FieldMode {
  LandauPlusTube,  // homogeneous background plus a finite-radius flux tube
  TubeOnly         // flux tube alone, no background field
};

struct FluxConfig {
  double alpha = 0.0;   // tube flux in units of the flux quantum
  double r_tube = 0.0;  // tube radius (0 = idealized point flux)
  FieldMode mode = FieldMode::LandauPlusTube;
  double kappa = 0.0;   // anomalous part of the magnetic coupling
};

struct Channel {
  int m = 0;           // orbital index
  int two_sigma = -1;  // twice the spin projection, +1 or -1
  double sigma() const { return 0.5 * two_sigma; }
  friend bool operator==(const Channel& a, const Channel& b) {
    return a.m == b.m && a.two_sigma == b.two_sigma;
  }
};

// --- term grammar -----------------------------------------------------------

struct One {
  friend bool operator==(One, One) { return true; }
};
struct LaguerreF {  // L_n^{(a)}(scale r^2)
  int n;
  double a, scale;
  friend bool operator==(const LaguerreF& x, const LaguerreF& y) {
    return x.n == y.n && x.a == y.a && x.scale == y.scale;
  }
};
struct KummerF {  // M(a, b, scale r^2)
  double a, b, scale;
  friend bool operator==(const KummerF& x, const KummerF& y) {
    return x.a == y.a && x.b == y.b && x.scale == y.scale;
  }
};
struct TricomiF {  // U(a, b, scale r^2)
  double a, b, scale;
  friend bool operator==(const TricomiF& x, const TricomiF& y) {
    return x.a == y.a && x.b == y.b && x.scale == y.scale;
  }
};
struct BesselF {  // J_nu(k r), any real order
  double nu, k;
  friend bool operator==(const BesselF& x, const BesselF& y) {
    return x.nu == y.nu && x.k == y.k;
  }
};
struct GammaQF {  // Gamma(s, scale r^2)/Gamma(s), s > 0
  double s, scale;
  friend bool operator==(const GammaQF& x, const GammaQF& y) {
    return x.s == y.s && x.scale == y.scale;
  }
};

using SpecialFactor =
    std::variant<One, LaguerreF, KummerF, TricomiF, BesselF, GammaQF>;

struct ClosedForm {
  double coeff = 1.0;
  double power = 0.0;  // r^power
  double gauss = 0.0;  // exp(gauss r^2)
  SpecialFactor factor = One{};

  double factor_value(double r) const {
    return std::visit(
        [r](const auto& f) -> double {
          using T = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<T, One>) {
            return 1.0;
          } else if constexpr (std::is_same_v<T, LaguerreF>) {
            return laguerre(f.n, f.a, f.scale * r * r);
          } else if constexpr (std::is_same_v<T, KummerF>) {
            return kummer_m(f.a, f.b, f.scale * r * r).value;
          } else if constexpr (std::is_same_v<T, TricomiF>) {
            return tricomi_u(f.a, f.b, f.scale * r * r).value;
          } else if constexpr (std::is_same_v<T, BesselF>) {
            return bessel_j_signed(f.nu, f.k * r);
          } else {
            return gamma_upper_ratio(f.s, f.scale * r * r).value;
          }
        },
        factor);
  }

  double evaluate(double r) const {
    if (coeff == 0.0) return 0.0;
    double base = coeff * std::exp(gauss * r * r);
    if (power != 0.0) base *= std::pow(r, power);
    return base * factor_value(r);
  }

  // d/dr as a sum of grammar terms
  std::vector<ClosedForm> derivative() const;
};

using Region = std::vector<ClosedForm>;

// combine terms with identical (power, gauss, factor) and drop zeros
inline void merge_terms(Region& reg) {
  Region out;
  for (const auto& t : reg) {
    if (t.coeff == 0.0) continue;
    bool merged = false;
    for (auto& u : out)
      if (u.power == t.power && u.gauss == t.gauss && u.factor == t.factor) {
        u.coeff += t.coeff;
        merged = true;
        break;
      }
    if (!merged) out.push_back(t);
  }
  std::erase_if(out, [](const ClosedForm& t) { return t.coeff == 0.0; });
  reg = std::move(out);
}

inline std::vector<ClosedForm> ClosedForm::derivative() const {
  std::vector<ClosedForm> out;
  if (coeff == 0.0) return out;
  double bessel_order_shift = 0.0;
  if (const auto* bf = std::get_if<BesselF>(&factor))
    bessel_order_shift = bf->nu;
  // (p + nu)/r and 2 g r pieces acting on the unchanged factor (for Bessel
  // the nu/r piece comes from J_nu' = (nu/z) J_nu - J_{nu+1})
  if (power + bessel_order_shift != 0.0)
    out.push_back({coeff * (power + bessel_order_shift), power - 1.0, gauss,
                   factor});
  if (gauss != 0.0) out.push_back({coeff * 2.0 * gauss, power + 1.0, gauss, factor});
  std::visit(
      [&](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, LaguerreF>) {
          if (f.n >= 1)
            out.push_back({coeff * -2.0 * f.scale, power + 1.0, gauss,
                           LaguerreF{f.n - 1, f.a + 1.0, f.scale}});
        } else if constexpr (std::is_same_v<T, KummerF>) {
          if (f.a != 0.0)
            out.push_back({coeff * 2.0 * f.scale * f.a / f.b, power + 1.0,
                           gauss, KummerF{f.a + 1.0, f.b + 1.0, f.scale}});
        } else if constexpr (std::is_same_v<T, TricomiF>) {
          if (f.a != 0.0)
            out.push_back({coeff * -2.0 * f.scale * f.a, power + 1.0, gauss,
                           TricomiF{f.a + 1.0, f.b + 1.0, f.scale}});
        } else if constexpr (std::is_same_v<T, BesselF>) {
          out.push_back({coeff * -f.k, power, gauss, BesselF{f.nu + 1.0, f.k}});
        } else if constexpr (std::is_same_v<T, GammaQF>) {
          // d/dr Q(s, c r^2) = -2 c^s r^{2s-1} e^{-c r^2} / Gamma(s)
          out.push_back({coeff * -2.0 * std::pow(f.scale, f.s) /
                             std::tgamma(f.s),
                         power + 2.0 * f.s - 1.0, gauss - f.scale, One{}});
        }
      },
      factor);
  merge_terms(out);
  return out;
}

inline Region region_derivative(const Region& reg) {
  Region out;
  for (const auto& t : reg)
    for (auto& d : t.derivative()) out.push_back(d);
  merge_terms(out);
  return out;
}

inline double region_value(const Region& reg, double r) {
  double s = 0.0;
  for (const auto& t : reg) s += t.evaluate(r);
  return s;
}

// --- profiles ---------------------------------------------------------------

enum class Side { Interior, Exterior, Auto };

struct RadialProfile {
  FluxConfig config;
  Channel channel;
  Region interior;  // r < r_tube (empty in the point limit)
  Region exterior;  // r >= r_tube
  double energy = 0.0;  // eigenvalue of the radial operator (with kappa term)

  const Region& region(double r) const {
    return (r < config.r_tube) ? interior : exterior;
  }
  double value(double r, Side side) const {
    switch (side) {
      case Side::Interior: return region_value(interior, r);
      case Side::Exterior: return region_value(exterior, r);
      default: return region_value(region(r), r);
    }
  }
  double operator()(double r) const { return value(r, Side::Auto); }
  double derivative(double r, Side side = Side::Auto) const {
    const Region& reg = (side == Side::Interior)   ? interior
                        : (side == Side::Exterior) ? exterior
                                                   : region(r);
    double s = 0.0;
    for (const auto& t : reg)
      for (const auto& d : t.derivative()) s += d.evaluate(r);
    return s;
  }
};

// azimuthal gauge profile a(r) entering the ladder maps
inline double gauge_a(const FluxConfig& cfg, bool interior, double r) {
  if (cfg.mode == FieldMode::LandauPlusTube) {
    if (!interior) return r + cfg.alpha / r;
    return (1.0 + cfg.alpha / (cfg.r_tube * cfg.r_tube)) * r;
  }
  if (!interior) return cfg.alpha / r;
  return cfg.alpha / (cfg.r_tube * cfg.r_tube) * r;
}

namespace detail {

// (1/2) [ sign_d psi' + (m/r) psi + a(r) psi ] applied term-by-term
inline Region ladder_region(const Region& reg, const FluxConfig& cfg, int m,
                            bool interior, double sign_d) {
  Region out;
  for (const auto& t : reg) {
    for (auto d : t.derivative()) {
      d.coeff *= 0.5 * sign_d;
      out.push_back(d);
    }
    if (m != 0) {
      ClosedForm c = t;
      c.coeff *= 0.5 * m;
      c.power -= 1.0;
      out.push_back(c);
    }
    // a(r) psi
    if (cfg.mode == FieldMode::LandauPlusTube) {
      if (!interior) {
        ClosedForm c = t;
        c.coeff *= 0.5;
        c.power += 1.0;
        out.push_back(c);
        if (cfg.alpha != 0.0) {
          ClosedForm c2 = t;
          c2.coeff *= 0.5 * cfg.alpha;
          c2.power -= 1.0;
          out.push_back(c2);
        }
      } else {
        ClosedForm c = t;
        c.coeff *= 0.5 * (1.0 + cfg.alpha / (cfg.r_tube * cfg.r_tube));
        c.power += 1.0;
        out.push_back(c);
      }
    } else {
      if (!interior) {
        if (cfg.alpha != 0.0) {
          ClosedForm c = t;
          c.coeff *= 0.5 * cfg.alpha;
          c.power -= 1.0;
          out.push_back(c);
        }
      } else {
        ClosedForm c = t;
        c.coeff *= 0.5 * cfg.alpha / (cfg.r_tube * cfg.r_tube);
        c.power += 1.0;
        out.push_back(c);
      }
    }
  }
  merge_terms(out);
  return out;
}

}  // namespace detail

// spin-raising map: acts on a spin-down profile in channel (m, -1/2) and
// produces a spin-up profile in channel (m-1, +1/2); eigenfunctions map to
// (un-normalized) eigenfunctions at the same energy
inline RadialProfile apply_raising(const RadialProfile& psi) {
  if (psi.channel.two_sigma != -1)
    throw std::invalid_argument("apply_raising: expects a spin-down profile");
  RadialProfile out;
  out.config = psi.config;
  out.channel = {psi.channel.m - 1, +1};
  out.energy = psi.energy;
  int m = psi.channel.m;
  if (psi.config.r_tube > 0.0)
    out.interior =
        detail::ladder_region(psi.interior, psi.config, m, true, +1.0);
  out.exterior =
      detail::ladder_region(psi.exterior, psi.config, m, false, +1.0);
  return out;
}

// spin-lowering map: acts on a spin-up profile in channel (m, +1/2) and
// produces a spin-down profile in channel (m+1, -1/2)
inline RadialProfile apply_lowering(const RadialProfile& psi) {
  if (psi.channel.two_sigma != +1)
    throw std::invalid_argument("apply_lowering: expects a spin-up profile");
  RadialProfile out;
  out.config = psi.config;
  out.channel = {psi.channel.m + 1, -1};
  out.energy = psi.energy;
  int m = psi.channel.m;
  if (psi.config.r_tube > 0.0)
    out.interior =
        detail::ladder_region(psi.interior, psi.config, m, true, -1.0);
  out.exterior =
      detail::ladder_region(psi.exterior, psi.config, m, false, -1.0);
  return out;
}

// the scalar potential of the second-order radial operator
// H = -(1/4)(d^2/dr^2 + (1/r) d/dr) + V(r);  V depends on region and mode
inline double radial_potential(const FluxConfig& cfg, const Channel& ch,
                               bool interior, double r) {
  double m = ch.m, sg = ch.sigma();
  double ks = cfg.kappa * sg;
  if (cfg.mode == FieldMode::LandauPlusTube) {
    if (!interior) {
      double ma = m + cfg.alpha;
      return ma * ma / (4.0 * r * r) + r * r / 4.0 + ma / 2.0 + sg + ks;
    }
    double q = 1.0 + cfg.alpha / (cfg.r_tube * cfg.r_tube);
    return m * m / (4.0 * r * r) + q * q * r * r / 4.0 + q * (m / 2.0 + sg) +
           ks;
  }
  if (!interior) {
    double ma = m + cfg.alpha;
    return ma * ma / (4.0 * r * r) + ks;
  }
  double beta = cfg.alpha / (cfg.r_tube * cfg.r_tube);
  return m * m / (4.0 * r * r) + beta * beta * r * r / 4.0 +
         beta * (m / 2.0 + sg) + ks;
}

}  // namespace fluxtube
