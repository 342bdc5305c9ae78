#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "rackoid/paths.hpp"
#include "rackoid/random_gen.hpp"
#include "rackoid/time_grid.hpp"

using namespace rackoid;

namespace {
const Manifold t2 = Manifold::torus(2);
const double pi = std::numbers::pi;

std::vector<Point> test_points(const Manifold& mf, int n = 32) {
  Rng rng(77);
  std::vector<Point> pts;
  for (int i = 0; i < n; ++i) pts.push_back(random_point(mf, rng));
  return pts;
}
}  // namespace

TEST_CASE("simpson quadrature") {
  TimeGrid g(64);
  CHECK(quadrature_of([](double) { return 1.0; }, g) == Catch::Approx(1.0));
  CHECK(quadrature_of([](double t) { return t; }, g) == Catch::Approx(0.5));
  CHECK(std::abs(quadrature_of([](double t) { return std::sin(2 * pi * t); },
                               g)) < 1e-10);
  CHECK_THROWS_AS(TimeGrid(63), ConfigError);
  CHECK_THROWS_AS(quadrature(std::vector<double>{1.0, 2.0}), ConfigError);

  // genuine fourth-order convergence on an integrand Simpson cannot nail
  auto f = [](double t) { return std::exp(t) * std::sin(2 * pi * t); };
  const double exact = 2 * pi * (1.0 - std::exp(1.0)) / (1.0 + 4 * pi * pi);
  std::vector<int> ns{8, 16, 32, 64};
  std::vector<double> errs;
  for (int n : ns)
    errs.push_back(std::abs(quadrature_of(f, TimeGrid(n)) - exact));
  CHECK(empirical_order(ns, errs) >= 3.8);
}

TEST_CASE("flow of a time-dependent vector field") {
  TimeGrid g(64);
  auto pts = test_points(t2, 8);

  // V = 0: flow is the identity
  Isotopy z = flow(t2, {ScalarField::constant(0.0), ScalarField::constant(0.0)}, g);
  for (const auto& p : pts) {
    auto v = eval_components(z.components(), t2, {p, {{kTime, 0.7}}});
    CHECK(t2.distance(v, p) == 0.0);
  }

  // constant field: shift by s*c
  const double c = 0.4;
  Isotopy sh = flow(t2, {ScalarField::constant(c), ScalarField::constant(0.0)}, g);
  for (const auto& p : pts) {
    auto v = eval_components(sh.components(), t2, {p, {{kTime, 0.5}}});
    CHECK(std::abs(v[0] - (p[0] + 0.5 * c)) < 1e-10);
    CHECK(std::abs(v[1] - p[1]) < 1e-10);
  }

  // V_s = s * dx: phi_1 = shift by 1/2
  Isotopy ramp = flow(
      t2, {ScalarField::parameter(kTime), ScalarField::constant(0.0)}, g);
  for (const auto& p : pts) {
    auto v = eval_components(ramp.components(), t2, {p, {{kTime, 1.0}}});
    CHECK(std::abs(v[0] - (p[0] + 0.5)) < 1e-10);
  }

  // phi_0 = id exactly for generated isotopies
  Rng rng(5);
  std::vector<ScalarField> vc{random_trig_field(t2, rng, 0.3),
                              random_trig_field(t2, rng, 0.3)};
  Isotopy gen = flow(t2, vc, g);
  CHECK(gen.initial_identity_residual(test_points(t2, 32)) <= 1e-12);

  // RK4 convergence on a nonlinear field with closed-form flow:
  // xdot = sin x  =>  x(t) = 2 atan(e^t tan(x0/2)).
  const Manifold t1 = Manifold::torus(1);
  std::vector<int> ns{8, 16, 32, 64};
  std::vector<double> errs;
  const double x0 = 1.1;
  const double exact = 2 * std::atan(std::exp(1.0) * std::tan(x0 / 2));
  for (int n : ns) {
    Isotopy fl = flow(t1, {sin(ScalarField::coordinate(0))}, TimeGrid(n));
    auto v = eval_components(fl.components(), t1, {{x0}, {{kTime, 1.0}}});
    errs.push_back(std::abs(v[0] - exact));
  }
  CHECK(empirical_order(ns, errs) >= 3.8);

  // blow-up guard
  Isotopy big = flow(t2,
                     {ScalarField::constant(1000.0), ScalarField::constant(0.0)},
                     TimeGrid(4));
  CHECK_THROWS_AS(
      eval_components(big.components(), t2, {{0.0, 0.0}, {{kTime, 1.0}}}),
      FlowDiverged);
}

TEST_CASE("halfway pullback") {
  Rng rng(9);
  auto pts = test_points(t2, 16);

  // identity isotopy with fixed covector family: the stored family itself
  KForm alpha = random_one_form(t2, rng, 0.4);
  Bisection fixed(Isotopy::identity(t2), {alpha.coeff(0), alpha.coeff(1)});
  CHECK(sup_form_diff(halfway_pullback(fixed, 0.37), alpha, pts) < 1e-15);
  CHECK(sup_form_diff(halfway_pullback(fixed, 0.0), alpha, pts) < 1e-15);

  // generic bisection: raw reconstruction against the chain-rule oracle
  Bisection S = random_bisection(t2, rng, 0.3);
  auto raw = raw_eta(S);
  for (const auto& p : pts) {
    const double s = 0.6;
    auto stored = eval_components(S.eta(), t2, {p, {{kTime, s}}});
    auto rawv = eval_components(raw, t2, {p, {{kTime, s}}});
    SmoothMap phis = S.isotopy().map_at(s);
    auto J = jacobian(phis, p);
    for (int j = 0; j < 2; ++j) {
      double acc = 0.0;
      for (int a = 0; a < 2; ++a) acc += rawv[a] * J[a][j];
      CHECK(std::abs(acc - stored[j]) < 1e-11);
    }
  }
}

TEST_CASE("beta and d_beta") {
  TimeGrid g(64);
  auto pts = test_points(t2, 16);
  Rng rng(21);

  // eta = 0
  CHECK(beta(Bisection::unit(t2), g).is_zero());

  // fixed family: beta = alpha
  KForm alpha = random_one_form(t2, rng, 0.4);
  Bisection fixed(Isotopy::identity(t2), {alpha.coeff(0), alpha.coeff(1)});
  CHECK(sup_form_diff(beta(fixed, g), alpha, pts) < 1e-13);

  // ramp family: eta_s = s*alpha -> beta = alpha/2
  ScalarField t = ScalarField::parameter(kTime);
  Bisection ramp(Isotopy::identity(t2),
                 {t * alpha.coeff(0), t * alpha.coeff(1)});
  KForm half = alpha * 0.5;
  CHECK(sup_form_diff(beta(ramp, g), half, pts) < 1e-13);

  // exact-generating family: eta_s = w(s) df -> d beta = 0
  ScalarField f = random_trig_field(t2, rng, 0.5);
  KForm df = exterior_d(f, t2);
  ScalarField w = t * t;
  Bisection exact(Isotopy::identity(t2),
                  {w * df.coeff(0), w * df.coeff(1)});
  CHECK(sup_form(d_beta(exact, g), pts) < 1e-12);

  // termwise oracle: d_beta equals the Simpson combination of d of the
  // halfway pullbacks
  Bisection S = random_bisection(t2, rng, 0.3);
  KForm db = d_beta(S, g);
  for (const auto& p : test_points(t2, 4)) {
    double acc = 0.0;
    for (int j = 0; j <= g.n(); ++j) {
      const double wj = (j == 0 || j == g.n()) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
      KForm dh = exterior_d(halfway_pullback(S, g.node(j)));
      acc += wj * g.h() / 3.0 * eval_kform(dh, {p, {}})[0];
    }
    CHECK(std::abs(acc - eval_kform(db, {p, {}})[0]) < 1e-11);
  }

  // beta is linear in eta at fixed isotopy
  Bisection A(S.isotopy(), random_eta_family(t2, rng, 0.4));
  Bisection B(S.isotopy(), random_eta_family(t2, rng, 0.4));
  std::vector<ScalarField> sum(2);
  for (int i = 0; i < 2; ++i) sum[i] = A.eta()[i] + B.eta()[i];
  Bisection AB(S.isotopy(), sum);
  CHECK(sup_form_diff(beta(AB, g), beta(A, g) + beta(B, g), pts) <= 1e-12);
}

TEST_CASE("path time derivative") {
  ScalarField t = ScalarField::parameter(kTime);
  // constant path
  CotangentPath c = CotangentPath::constant(
      t2, {1.0, 2.0}, {ScalarField::constant(0.0), ScalarField::constant(0.0)});
  auto v0 = path_time_derivative(c, 0.3);
  CHECK(v0[0] == 0.0);
  CHECK(v0[1] == 0.0);

  // gamma(t) = (t, 0)
  CotangentPath lin(t2, {t, ScalarField::constant(0.0)},
                    {ScalarField::constant(0.0), ScalarField::constant(0.0)});
  auto v1 = path_time_derivative(lin, 0.8);
  CHECK(v1[0] == Catch::Approx(1.0));

  // gamma(t) = (sin t, 0) at t = 0, against finite differences
  CotangentPath s(t2, {sin(t), ScalarField::constant(0.0)},
                  {ScalarField::constant(0.0), ScalarField::constant(0.0)});
  auto v2 = path_time_derivative(s, 0.0);
  const double h = 1e-4;
  double fd = (std::sin(h) - std::sin(0.0)) / h;
  CHECK(std::abs(v2[0] - 1.0) < 1e-14);
  CHECK(std::abs(v2[0] - fd) < 1e-3);
}

TEST_CASE("quadrature field equals numeric simpson") {
  TimeGrid g(32);
  Rng rng(33);
  ScalarField t = ScalarField::parameter(kTime);
  ScalarField f = sin(t * 1.7 + 0.3) * random_trig_field(t2, rng, 0.5);
  ScalarField q = quadrature_field(f, kTime, g.n());
  for (const auto& p : test_points(t2, 8)) {
    double direct = quadrature_of(
        [&](double tv) { return eval_value(f, t2, {p, {{kTime, tv}}}); }, g);
    CHECK(eval_value(q, t2, {p, {}}) == Catch::Approx(direct).margin(1e-14));
  }
}
