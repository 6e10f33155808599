#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <fluxtube/radial.hpp>

using namespace fluxtube;

namespace {

double fd_derivative(const ClosedForm& t, double r, double h = 1e-5) {
  return (t.evaluate(r + h) - t.evaluate(r - h)) / (2.0 * h);
}

double deriv_value(const ClosedForm& t, double r) {
  double s = 0.0;
  for (const auto& d : t.derivative()) s += d.evaluate(r);
  return s;
}

}  // namespace

TEST_CASE("closed-form terms evaluate to their defining expressions") {
  ClosedForm plain{2.0, 3.0, -0.5, One{}};
  CHECK(plain.evaluate(1.3) ==
        Catch::Approx(2.0 * std::pow(1.3, 3.0) * std::exp(-0.5 * 1.69))
            .epsilon(1e-14));

  ClosedForm lag{1.0, 0.0, 0.0, LaguerreF{2, 0.5, 1.0}};
  CHECK(lag.evaluate(std::sqrt(2.0)) == Catch::Approx(-1.125).epsilon(1e-13));

  ClosedForm bes{1.0, 0.0, 0.0, BesselF{0.5, 2.0}};
  double x = 2.0 * 1.7;
  CHECK(bes.evaluate(1.7) ==
        Catch::Approx(std::sqrt(2.0 / (detail::pi * x)) * std::sin(x))
            .epsilon(1e-12));

  ClosedForm gq{1.0, 0.0, 0.0, GammaQF{1.0, 1.0}};
  CHECK(gq.evaluate(1.5) == Catch::Approx(std::exp(-2.25)).epsilon(1e-13));
}

TEST_CASE("term derivatives match finite differences for every factor kind") {
  std::vector<ClosedForm> terms = {
      {1.7, 2.0, -0.5, One{}},
      {0.8, -1.0, 0.5, One{}},
      {1.0, 1.5, -0.5, LaguerreF{3, 0.7, 1.0}},
      {2.0, 0.0, -1.1, LaguerreF{1, -0.3, 2.2}},
      {1.0, 0.5, -0.5, KummerF{1.3, 2.1, 0.8}},
      {1.0, 2.0, -0.25, KummerF{0.0, 1.5, 1.0}},
      {1.0, -0.7, -0.5, TricomiF{0.8, 1.6, 1.0}},
      {0.5, 0.0, 0.0, BesselF{1.3, 2.0}},
      {0.5, 1.0, 0.0, BesselF{-0.7, 1.4}},
      {1.0, 0.3, 0.0, GammaQF{2.5, 1.0}},
      {1.0, 0.0, 0.5, GammaQF{1.0, 1.0}},
  };
  for (const auto& t : terms)
    for (double r : {0.4, 0.9, 1.6, 2.5}) {
      double fd = fd_derivative(t, r);
      double an = deriv_value(t, r);
      INFO("power=" << t.power << " gauss=" << t.gauss
                    << " factor_index=" << t.factor.index() << " r=" << r);
      CHECK(std::abs(an - fd) <=
            1e-7 * std::max({1.0, std::abs(an), std::abs(fd)}));
    }
}

TEST_CASE("second derivatives stay in the grammar") {
  ClosedForm t{1.0, 1.0, -0.5, LaguerreF{2, 1.5, 1.0}};
  auto d1 = t.derivative();
  Region d2 = region_derivative(d1);
  const double h = 1e-4;
  for (double r : {0.7, 1.8}) {
    double fd2 = (t.evaluate(r + h) - 2.0 * t.evaluate(r) + t.evaluate(r - h)) /
                 (h * h);
    CHECK(std::abs(region_value(d2, r) - fd2) <=
          1e-5 * std::max(1.0, std::abs(fd2)));
  }
}

TEST_CASE("merge_terms combines compatible terms and drops zeros") {
  Region reg = {{1.0, 2.0, -0.5, One{}},
                {2.5, 2.0, -0.5, One{}},
                {0.0, 1.0, 0.0, One{}},
                {1.0, 2.0, -0.5, LaguerreF{1, 0.0, 1.0}},
                {-3.5, 2.0, -0.5, One{}}};
  merge_terms(reg);
  REQUIRE(reg.size() == 1);
  CHECK(std::get_if<LaguerreF>(&reg[0].factor) != nullptr);
}

TEST_CASE("raising maps the lowest Landau spin-down mode onto its partner") {
  // alpha = 0, point limit: psi = r e^{-r^2/2} in channel (m=1, down);
  // the raising map must give exactly e^{-r^2/2} in channel (m=0, up)
  RadialProfile psi;
  psi.config = {0.0, 0.0, FieldMode::LandauPlusTube, 0.0};
  psi.channel = {1, -1};
  psi.energy = 1.0;
  psi.exterior = {{1.0, 1.0, -0.5, One{}}};
  RadialProfile up = apply_raising(psi);
  CHECK(up.channel.m == 0);
  CHECK(up.channel.two_sigma == +1);
  REQUIRE(up.exterior.size() == 1);
  for (double r : {0.3, 1.0, 2.2})
    CHECK(up(r) == Catch::Approx(std::exp(-r * r / 2.0)).epsilon(1e-13));

  // lowering back reproduces E * psi with E = 1
  RadialProfile back = apply_lowering(up);
  CHECK(back.channel == psi.channel);
  for (double r : {0.3, 1.0, 2.2})
    CHECK(back(r) == Catch::Approx(1.0 * psi(r)).epsilon(1e-13));
}

TEST_CASE("lowering-after-raising acts as multiplication by the energy") {
  // point limit, alpha = 0.5, spin-down bound profile
  // r^{m+alpha} e^{-r^2/2} L_n^{(m+alpha)}(r^2) with E = m + alpha + n
  double alpha = 0.5;
  int m = 1, n = 2;
  RadialProfile psi;
  psi.config = {alpha, 0.0, FieldMode::LandauPlusTube, 0.0};
  psi.channel = {m, -1};
  psi.energy = m + alpha + n;
  psi.exterior = {{1.0, m + alpha, -0.5, LaguerreF{n, m + alpha, 1.0}}};
  RadialProfile round_trip = apply_lowering(apply_raising(psi));
  for (double r : {0.4, 1.1, 2.0, 3.1}) {
    INFO("r=" << r);
    CHECK(round_trip(r) ==
          Catch::Approx(psi.energy * psi(r)).epsilon(1e-11));
  }
}

TEST_CASE("raising acts as the Bessel index shift on scattering profiles") {
  // tube only, exterior J_{m+alpha}(k r): raising gives (k/2) J_{m-1+alpha}
  double alpha = 0.7, k = 1.8;
  int m = 2;
  RadialProfile psi;
  psi.config = {alpha, 0.0, FieldMode::TubeOnly, 0.0};
  psi.channel = {m, -1};
  psi.energy = k * k / 4.0;
  psi.exterior = {{1.0, 0.0, 0.0, BesselF{m + alpha, k}}};
  RadialProfile up = apply_raising(psi);
  for (double r : {0.5, 1.3, 2.8}) {
    double expect = 0.5 * k * bessel_j_signed(m - 1 + alpha, k * r);
    CHECK(up(r) == Catch::Approx(expect).epsilon(1e-11));
  }
}

TEST_CASE("interior ladder uses the solenoid gauge profile") {
  // interior a(r) = (1 + alpha/R^2) r; psi = r e^{-q r^2/2} raises to
  // e^{-q r^2/2} inside the tube
  double alpha = 0.3, R = 0.5;
  double q = 1.0 + alpha / (R * R);
  RadialProfile psi;
  psi.config = {alpha, R, FieldMode::LandauPlusTube, 0.0};
  psi.channel = {1, -1};
  psi.interior = {{1.0, 1.0, -q / 2.0, One{}}};
  psi.exterior = {{1.0, 1.0 + alpha, -0.5, One{}}};
  RadialProfile up = apply_raising(psi);
  for (double r : {0.1, 0.3, 0.45})
    CHECK(up.value(r, Side::Interior) ==
          Catch::Approx(std::exp(-q * r * r / 2.0)).epsilon(1e-12));
}

TEST_CASE("gauge profile and radial potential have the documented forms") {
  FluxConfig cfg{1.2, 0.4, FieldMode::LandauPlusTube, 0.0};
  CHECK(gauge_a(cfg, false, 2.0) == Catch::Approx(2.0 + 1.2 / 2.0));
  CHECK(gauge_a(cfg, true, 0.2) ==
        Catch::Approx((1.0 + 1.2 / 0.16) * 0.2));
  FluxConfig ab{1.2, 0.4, FieldMode::TubeOnly, 0.0};
  CHECK(gauge_a(ab, false, 2.0) == Catch::Approx(0.6));
  CHECK(gauge_a(ab, true, 0.2) == Catch::Approx(1.2 / 0.16 * 0.2));

  // exterior potential at m=2, sigma=-1/2, alpha=1.2, r=1.5:
  // (m+a)^2/(4r^2) + r^2/4 + (m+a)/2 + sigma
  Channel ch{2, -1};
  double v = radial_potential(cfg, ch, false, 1.5);
  double ma = 3.2;
  CHECK(v == Catch::Approx(ma * ma / 9.0 + 0.5625 + 1.6 - 0.5).epsilon(1e-13));
  // interior: m^2/(4r^2) + q^2 r^2/4 + q(m/2 + sigma)
  double q = 1.0 + 1.2 / 0.16;
  double vi = radial_potential(cfg, ch, true, 0.2);
  CHECK(vi ==
        Catch::Approx(4.0 / 0.16 + q * q * 0.01 + q * 0.5).epsilon(1e-13));
}
