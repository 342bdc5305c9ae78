#include <catch_amalgamated.hpp>

#include <cmath>

#include "rackoid/forms.hpp"
#include "rackoid/random_gen.hpp"
#include "rackoid/smooth_map.hpp"

using namespace rackoid;

namespace {
const Manifold t2 = Manifold::torus(2);
const Manifold t3 = Manifold::torus(3);

std::vector<Point> test_points(const Manifold& mf, int n = 32) {
  Rng rng(2024);
  std::vector<Point> pts;
  for (int i = 0; i < n; ++i) pts.push_back(random_point(mf, rng));
  return pts;
}
}  // namespace

TEST_CASE("exterior derivative") {
  ScalarField f = sin(ScalarField::coordinate(0));
  KForm df = exterior_d(f, t2);
  // oracle: central finite differences of f
  for (const auto& p : test_points(t2, 8)) {
    const double h = 1e-4;
    auto at = [&](double dx) { return eval_value(f, t2, {{p[0] + dx, p[1]}, {}}); };
    double fd = (at(h) - at(-h)) / (2 * h);
    auto v = eval_kform(df, {p, {}});
    CHECK(std::abs(v[0] - fd) < 1e-7);
    CHECK(std::abs(v[0] - std::cos(p[0])) < 1e-12);
    CHECK(v[1] == 0.0);
  }

  KForm dc = exterior_d(ScalarField::constant(3.0), t2);
  CHECK(dc.is_zero());

  // d(df) = 0 for f = sin x cos y
  ScalarField g =
      sin(ScalarField::coordinate(0)) * cos(ScalarField::coordinate(1));
  KForm ddg = exterior_d(exterior_d(g, t2));
  for (const auto& p : test_points(t2, 8)) {
    auto v = eval_kform(ddg, {p, {}});
    for (double c : v) CHECK(std::abs(c) < 1e-12);
  }

  // top-degree overflow is a distinct, identically zero state
  KForm vol(t2, 2);
  vol.coeff(0) = ScalarField::constant(1.0);
  KForm dvol = exterior_d(vol);
  CHECK(dvol.overflow());
  CHECK(dvol.coefficient_count() == 0);
  CHECK(dvol.is_zero());
}

TEST_CASE("interior product contracts the first slot") {
  KForm w(t2, 2);
  w.coeff(0) = ScalarField::constant(1.0);  // dx ^ dy
  KForm iw = interior(VectorField::basis(t2, 0), w);
  // evaluate both sides on the second basis vector
  for (const auto& p : test_points(t2, 4)) {
    auto v = eval_kform(iw, {p, {}});
    CHECK(v[0] == Catch::Approx(0.0).margin(1e-15));
    CHECK(v[1] == Catch::Approx(1.0));  // (i_dx (dx^dy))(dy) = 1
  }
  KForm dx(t2, 1);
  dx.coeff(0) = ScalarField::constant(1.0);
  KForm z = interior(VectorField::basis(t2, 1), dx);
  CHECK(z.is_zero());

  Rng rng(7);
  VectorField X = random_vector_field(t3, rng, 0.5);
  KForm w3 = random_two_form(t3, rng, 0.5);
  KForm ixx = interior(X, interior(X, w3));
  for (const auto& p : test_points(t3, 8)) {
    auto v = eval_kform(ixx, {p, {}});
    for (double c : v) CHECK(std::abs(c) < 1e-13);
  }
  CHECK_THROWS_AS(interior(X, KForm(t3, 0)), ConfigError);
}

TEST_CASE("lie derivative") {
  // L_dx (sin x dy) = cos x dy, checked against the flow-pullback quotient
  KForm w(t2, 1);
  w.coeff(1) = sin(ScalarField::coordinate(0));
  KForm lw = lie_derivative(VectorField::basis(t2, 0), w);
  const double h = 1e-4;
  for (const auto& p : test_points(t2, 8)) {
    KForm plus = pullback(SmoothMap::shift(t2, {h, 0}), w);
    KForm minus = pullback(SmoothMap::shift(t2, {-h, 0}), w);
    auto vp = eval_kform(plus, {p, {}});
    auto vm = eval_kform(minus, {p, {}});
    auto v = eval_kform(lw, {p, {}});
    CHECK(std::abs(v[1] - (vp[1] - vm[1]) / (2 * h)) < 1e-7);
    CHECK(std::abs(v[1] - std::cos(p[0])) < 1e-12);
  }

  Rng rng(11);
  KForm rw = random_one_form(t2, rng, 0.5);
  KForm lz = lie_derivative(VectorField::zero(t2), rw);
  CHECK(sup_form(lz, test_points(t2, 8)) < 1e-15);

  // L_X d w = d L_X w
  VectorField X = random_vector_field(t2, rng, 0.4);
  CHECK(sup_form_diff(lie_derivative(X, exterior_d(rw)),
                      exterior_d(lie_derivative(X, rw)),
                      test_points(t2, 8)) < 1e-12);
}

TEST_CASE("lie bracket") {
  CHECK(lie_bracket(VectorField::basis(t2, 0), VectorField::basis(t2, 1))
            .is_zero());

  // [sin x dy-direction, dx-direction] = -cos x dy-direction
  VectorField A(t2, {ScalarField::constant(0.0),
                     sin(ScalarField::coordinate(0))});
  VectorField B = VectorField::basis(t2, 0);
  VectorField C = lie_bracket(A, B);
  const double h = 1e-4;
  for (const auto& p : test_points(t2, 6)) {
    auto v = eval_vector(C, {p, {}});
    CHECK(std::abs(v[0]) < 1e-13);
    // finite-difference oracle: [A,B]^y = A(B^y) - B(A^y) = -d/dx sin x
    double fd = -(std::sin(p[0] + h) - std::sin(p[0] - h)) / (2 * h);
    CHECK(std::abs(v[1] - fd) < 1e-7);
    CHECK(std::abs(v[1] + std::cos(p[0])) < 1e-12);
  }

  Rng rng(3);
  VectorField X = random_vector_field(t2, rng, 0.5);
  CHECK(sup_vector_diff(lie_bracket(X, X), VectorField::zero(t2),
                        test_points(t2, 8)) < 1e-13);
}

TEST_CASE("pullback") {
  Rng rng(5);
  KForm w = random_one_form(t2, rng, 0.5);
  CHECK(sup_form_diff(pullback(SmoothMap::identity(t2), w), w,
                      test_points(t2, 4)) == 0.0);

  // functoriality (F o G)^* = G^* F^*
  SmoothMap F = random_map_near_identity(t2, rng, 0.3);
  SmoothMap G = random_map_near_identity(t2, rng, 0.3);
  KForm lhs = pullback(compose(F, G), w);
  KForm rhs = pullback(G, pullback(F, w));
  CHECK(sup_form_diff(lhs, rhs, test_points(t2, 16)) < 1e-13);

  // shift-by-c pullback of dx = dx
  KForm dx(t2, 1);
  dx.coeff(0) = ScalarField::constant(1.0);
  KForm s = pullback(SmoothMap::shift(t2, {0.7, -0.2}), dx);
  CHECK(sup_form_diff(s, dx, test_points(t2, 8)) < 1e-15);

  // 2-form pullback against the definition on a pair of tangent vectors
  KForm w2 = random_two_form(t2, rng, 0.5);
  KForm pw2 = pullback(F, w2);
  for (const auto& p : test_points(t2, 6)) {
    auto J = jacobian(F, p);
    Point fp = apply_map(F, p);
    double lhs2 = eval_kform(pw2, {p, {}})[0];
    // w2(Fe0, Fe1) at F(p)
    double w2v = eval_kform(w2, {fp, {}})[0];
    double det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
    CHECK(std::abs(lhs2 - w2v * det) < 1e-12);
  }
}

TEST_CASE("pushforward and inversion") {
  Rng rng(13);
  VectorField X = random_vector_field(t2, rng, 0.4);
  CHECK(sup_vector_diff(pushforward(SmoothMap::identity(t2), X), X,
                        test_points(t2, 4)) == 0.0);

  VectorField dxv = VectorField::basis(t2, 0);
  VectorField tr = pushforward(SmoothMap::shift(t2, {0.5, 0.5}), dxv);
  CHECK(sup_vector_diff(tr, dxv, test_points(t2, 8)) < 1e-12);

  // i_X F^* w = F^* i_{F_* X} w
  SmoothMap F = random_map_near_identity(t2, rng, 0.3);
  KForm w = random_two_form(t2, rng, 0.5);
  SmoothMap Finv = inverse_map(F);
  VectorField FX = pushforward(F, X, &Finv);
  KForm lhs = interior(X, pullback(F, w));
  KForm rhs = pullback(F, interior(FX, w));
  CHECK(sup_form_diff(lhs, rhs, test_points(t2, 16)) < 1e-11);

  // invert: identity, shift, and defining property
  Point p{1.0, 2.0};
  CHECK(invert(SmoothMap::identity(t2), p) == p);
  Point q = invert(SmoothMap::shift(t2, {0.3, -0.4}), p);
  CHECK(q[0] == Catch::Approx(0.7));
  CHECK(q[1] == Catch::Approx(2.4));
  for (int trial = 0; trial < 10; ++trial) {
    SmoothMap M = random_map_near_identity(t2, rng, 0.3);
    Point x = random_point(t2, rng);
    Point y = invert(M, x);
    Point back = apply_map(M, y);
    CHECK(t2.distance(back, x) <= 1e-12);
  }
}

TEST_CASE("inverse map fields carry exact jets") {
  Rng rng(17);
  SmoothMap F = random_map_near_identity(t2, rng, 0.3);
  SmoothMap Finv = inverse_map(F);
  // F^{-1} o F = id including first and second derivatives
  SmoothMap round = compose(Finv, F);
  for (const auto& p : test_points(t2, 8)) {
    Jet2 j0 = eval_jet2(round.component(0), t2, p);
    CHECK(std::abs(j0.value - p[0]) < 1e-11);
    CHECK(std::abs(j0.gradient[0] - 1.0) < 1e-10);
    CHECK(std::abs(j0.gradient[1]) < 1e-10);
    CHECK(std::abs(j0.hessian[0][0]) < 1e-9);
    CHECK(std::abs(j0.hessian[0][1]) < 1e-9);
  }
}

TEST_CASE("kernel identities at the numerics floor") {
  Rng rng(23);
  auto pts2 = test_points(t2);
  auto pts3 = test_points(t3);

  // Cartan: L_X = i_X d + d i_X on random 1-forms
  for (int trial = 0; trial < 4; ++trial) {
    VectorField X = random_vector_field(t2, rng, 0.5);
    KForm w = random_one_form(t2, rng, 0.5);
    KForm cartan = interior(X, exterior_d(w)) + exterior_d(interior(X, w));
    CHECK(sup_form_diff(lie_derivative(X, w), cartan, pts2) <= 1e-10);
  }

  // [L_X, i_Y] = i_[X,Y] on random 2-forms (dim 3 so the result is nonzero)
  for (int trial = 0; trial < 4; ++trial) {
    VectorField X = random_vector_field(t3, rng, 0.4);
    VectorField Y = random_vector_field(t3, rng, 0.4);
    KForm w = random_two_form(t3, rng, 0.4);
    KForm lhs = lie_derivative(X, interior(Y, w)) -
                interior(Y, lie_derivative(X, w));
    KForm rhs = interior(lie_bracket(X, Y), w);
    CHECK(sup_form_diff(lhs, rhs, pts3) <= 1e-10);
  }

  // d^2 = 0 on random 0- and 1-forms
  for (int trial = 0; trial < 4; ++trial) {
    ScalarField f = random_trig_field(t3, rng, 0.6);
    CHECK(sup_form(exterior_d(exterior_d(f, t3)), pts3) <= 1e-10);
    KForm w = random_one_form(t3, rng, 0.6);
    CHECK(sup_form(exterior_d(exterior_d(w)), pts3) <= 1e-10);
  }
}
