#include <catch_amalgamated.hpp>

#include <cmath>

#include "rackoid/field.hpp"
#include "rackoid/jet.hpp"
#include "rackoid/manifold.hpp"

using namespace rackoid;

TEST_CASE("jet arithmetic reproduces calculus on polynomials") {
  JetShape sh{2, 3};
  Jet x = Jet::variable(2.0, 0, sh);
  Jet y = Jet::variable(3.0, 1, sh);
  Jet f = x * x * y + x * y * y;  // f = x^2 y + x y^2
  CHECK(f.value() == Catch::Approx(2 * 2 * 3 + 2 * 3 * 3));
  CHECK(f.deriv1(0) == Catch::Approx(2 * 2 * 3 + 3 * 3));  // 2xy + y^2
  CHECK(f.deriv1(1) == Catch::Approx(2 * 2 + 2 * 2 * 3));  // x^2 + 2xy
  CHECK(f.deriv2(0, 0) == Catch::Approx(2 * 3));
  CHECK(f.deriv2(0, 1) == Catch::Approx(2 * 2 + 2 * 3));
  CHECK(f.deriv2(1, 1) == Catch::Approx(2 * 2));
}

TEST_CASE("third-order coefficients are exact") {
  JetShape sh{1, 3};
  Jet x = Jet::variable(0.7, 0, sh);
  Jet f = sin(x);
  // Taylor coefficient of order 3 is -cos(x)/6.
  // deriv_slice applied three times recovers f'''.
  Jet d3 = f.deriv_slice(0).deriv_slice(0).deriv_slice(0);
  CHECK(d3.value() == Catch::Approx(-std::cos(0.7)).margin(1e-14));
}

TEST_CASE("transcendental jets match closed forms") {
  JetShape sh{1, 2};
  Jet x = Jet::variable(0.3, 0, sh);
  Jet g = exp(sin(x) * 2.0);
  const double v = std::exp(2 * std::sin(0.3));
  CHECK(g.value() == Catch::Approx(v));
  CHECK(g.deriv1(0) == Catch::Approx(v * 2 * std::cos(0.3)));
  CHECK(g.deriv2(0, 0) ==
        Catch::Approx(v * (4 * std::cos(0.3) * std::cos(0.3) -
                           2 * std::sin(0.3))));
}

TEST_CASE("division and reciprocal") {
  JetShape sh{1, 2};
  Jet x = Jet::variable(2.0, 0, sh);
  Jet r = (x * x) / (x + 1.0);
  const double v = 4.0 / 3.0;
  CHECK(r.value() == Catch::Approx(v));
  // d/dx x^2/(x+1) = (x^2 + 2x)/(x+1)^2
  CHECK(r.deriv1(0) == Catch::Approx(8.0 / 9.0));
}

TEST_CASE("remap between variable sets") {
  JetShape from{2, 2};
  Jet x = Jet::variable(1.0, 0, from);
  Jet y = Jet::variable(2.0, 1, from);
  Jet f = x * y;
  int map01[2] = {1, 0};  // swap slots
  Jet g = f.remap(map01, from);
  CHECK(g.deriv1(0) == Catch::Approx(1.0));  // now d/d(slot0) = d/dy
  CHECK(g.deriv1(1) == Catch::Approx(2.0));
  int drop[2] = {0, -1};  // drop y
  Jet h = f.remap(drop, JetShape{1, 2});
  CHECK(h.value() == Catch::Approx(2.0));
  CHECK(h.deriv1(0) == Catch::Approx(2.0));  // df/dx with y frozen
}

TEST_CASE("eval_jet examples") {
  // f = sin x at x = 0: value 0, gradient 1, hessian 0
  Manifold t1 = Manifold::torus(1);
  ScalarField f = sin(ScalarField::coordinate(0));
  Jet2 j = eval_jet2(f, t1, {0.0});
  CHECK(j.value == Catch::Approx(0.0).margin(1e-15));
  CHECK(j.gradient[0] == Catch::Approx(1.0));
  CHECK(j.hessian[0][0] == Catch::Approx(0.0).margin(1e-15));

  // constant field: zero gradient and hessian
  ScalarField c = ScalarField::constant(4.2);
  Jet2 jc = eval_jet2(c, t1, {1.0});
  CHECK(jc.value == Catch::Approx(4.2));
  CHECK(jc.gradient[0] == 0.0);
  CHECK(jc.hessian[0][0] == 0.0);

  // f = x*y on a chart at (1,2)
  Manifold ch = Manifold::chart({{-5, 5}, {-5, 5}});
  ScalarField xy = ScalarField::coordinate(0) * ScalarField::coordinate(1);
  Jet2 jxy = eval_jet2(xy, ch, {1.0, 2.0});
  CHECK(jxy.value == Catch::Approx(2.0));
  CHECK(jxy.gradient[0] == Catch::Approx(2.0));
  CHECK(jxy.gradient[1] == Catch::Approx(1.0));
  CHECK(jxy.hessian[0][1] == Catch::Approx(1.0));
  CHECK(jxy.hessian[0][0] == Catch::Approx(0.0).margin(1e-15));
}

TEST_CASE("jet gradient and hessian match central finite differences") {
  Manifold t2 = Manifold::torus(2);
  ScalarField f = sin(ScalarField::coordinate(0) * 2.0 +
                      ScalarField::coordinate(1)) *
                      0.4 +
                  cos(ScalarField::coordinate(1)) * 0.3;
  Point p{0.9, 1.7};
  Jet2 j = eval_jet2(f, t2, p);
  auto val = [&](double dx, double dy) {
    return eval_value(f, t2, {{p[0] + dx, p[1] + dy}, {}});
  };
  // Empirical convergence order of the FD error should be ~2 (>= 1.8).
  std::vector<double> hs{1e-2, 1e-3, 1e-4};
  std::vector<double> errs;
  for (double h : hs) {
    double fd = (val(h, 0) - val(-h, 0)) / (2 * h);
    errs.push_back(std::abs(fd - j.gradient[0]));
  }
  double slope01 = std::log(errs[0] / errs[1]) / std::log(10.0);
  CHECK(slope01 >= 1.8);
  // Hessian entry vs second difference at moderate step.
  double h = 1e-4;
  double fdxx = (val(h, 0) - 2 * val(0, 0) + val(-h, 0)) / (h * h);
  CHECK(std::abs(fdxx - j.hessian[0][0]) < 1e-6);
  // Hessian symmetric by storage.
  CHECK(j.hessian[0][1] == j.hessian[1][0]);
}

TEST_CASE("chart domain error") {
  Manifold ch = Manifold::chart({{0, 1}});
  ScalarField f = ScalarField::coordinate(0);
  CHECK_THROWS_AS(eval_jet2(f, ch, {2.0}), DomainError);
}

TEST_CASE("derivative nodes and parameter binding") {
  Manifold t1 = Manifold::torus(1);
  ScalarField x = ScalarField::coordinate(0);
  ScalarField t = ScalarField::parameter(kTime);
  ScalarField f = sin(x) * t + t * t * cos(x);
  ScalarField df_dt = d_param(f, kTime);
  double v = eval_value(df_dt, t1, {{0.5}, {{kTime, 0.25}}});
  CHECK(v == Catch::Approx(std::sin(0.5) + 2 * 0.25 * std::cos(0.5)));
  ScalarField df_dx = d_coord(f, 0);
  double w = eval_value(df_dx, t1, {{0.5}, {{kTime, 0.25}}});
  CHECK(w == Catch::Approx(std::cos(0.5) * 0.25 -
                           0.25 * 0.25 * std::sin(0.5)));
  ScalarField g = bind(f, kTime, 1.0);
  CHECK(eval_value(g, t1, {{0.5}, {}}) ==
        Catch::Approx(std::sin(0.5) + std::cos(0.5)));
  // derivative of the bound field in the bound parameter is taken at the
  // bound value
  ScalarField dg = d_param(f, kTime);
  CHECK(eval_value(bind(dg, kTime, 1.0), t1, {{0.5}, {}}) ==
        Catch::Approx(std::sin(0.5) + 2.0 * std::cos(0.5)));
}
