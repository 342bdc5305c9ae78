#pragma once

// The rack structures on cotangent paths and their bisections: the action of
// a bisection on a path, the product of bisections, the transformation laws
// of beta and d(beta), the homotopy identity behind self-distributivity, and
// the augmented-rack map into the automorphisms of the extended tangent
// bundle (closed 2-form, diffeomorphism).
//
// All operations depend on the acting bisection only through (phi_1,
// d beta), which the unit-law pruning below exploits to make the unit
// identities bit-exact.

#include <utility>
#include <vector>

#include "rackoid/forms.hpp"
#include "rackoid/paths.hpp"
#include "rackoid/random_gen.hpp"
#include "rackoid/smooth_map.hpp"
#include "rackoid/time_grid.hpp"

namespace rackoid {

// Full antisymmetric coefficient matrix of a 2-form.
inline std::vector<std::vector<ScalarField>> two_form_matrix(const KForm& w) {
  const int n = w.dim();
  std::vector<std::vector<ScalarField>> m(n, std::vector<ScalarField>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) m[a][b] = w.coeff_signed({a, b});
  return m;
}

// kappa_s = psi_s^*( i_{psidot_s} omega ): the time family of 1-forms
// kappa_j(m) = sum_{a,b} omega_{ab}(psi_s(m)) psidot^a_s(m) d_j psi^b_s(m).
inline std::vector<ScalarField> kappa_family(const Isotopy& psi,
                                             const KForm& omega) {
  const int n = psi.dim();
  std::vector<ScalarField> kappa(n);
  if (omega.is_zero() || psi.is_identity()) {
    for (int j = 0; j < n; ++j) kappa[j] = ScalarField::constant(0.0);
    return kappa;
  }
  // compose each stored coefficient once; expand signs afterwards
  std::vector<ScalarField> comp(omega.coefficient_count());
  for (int r = 0; r < omega.coefficient_count(); ++r)
    comp[r] = compose(omega.coeff(r), psi.components());
  auto jac = isotopy_jacobian(psi);
  const auto& vel = psi.velocity();
  for (int j = 0; j < n; ++j) {
    ScalarField acc = ScalarField::constant(0.0);
    for (int r = 0; r < omega.coefficient_count(); ++r) {
      const int a = omega.index_sets()[r][0];
      const int b = omega.index_sets()[r][1];
      acc = acc + comp[r] * (vel[a] * jac[b][j] - vel[b] * jac[a][j]);
    }
    kappa[j] = acc;
  }
  return kappa;
}

// Pullback of a time family of 1-forms by a fixed map (time passes through).
inline std::vector<ScalarField> pullback_family(
    const SmoothMap& F, const std::vector<ScalarField>& fam) {
  if (F.is_identity()) return fam;
  const int n = F.dim();
  std::vector<ScalarField> out(n);
  for (int j = 0; j < n; ++j) {
    ScalarField acc = ScalarField::constant(0.0);
    for (int a = 0; a < n; ++a)
      acc = acc + compose(fam[a], F.components()) * d_coord(F.component(a), j);
    out[j] = acc;
  }
  return out;
}

// The action of a bisection on a cotangent path:
//   Sigma |> a = (phi_1^{-1}(gamma),
//                 phi_1^*(theta - i_{gammadot} (phi_1^{-1})^* d beta)).
inline CotangentPath act(const Bisection& S, const CotangentPath& a,
                         const TimeGrid& grid) {
  if (S.is_unit()) return a;
  const Manifold& mf = a.manifold();
  const int n = mf.dim();
  const SmoothMap phi1 = S.isotopy().time_one();
  const bool id1 = phi1.is_identity();
  const SmoothMap phi1inv = id1 ? phi1 : inverse_map(phi1);

  std::vector<ScalarField> gamma2(n);
  for (int k = 0; k < n; ++k)
    gamma2[k] = id1 ? a.gamma()[k]
                    : compose(phi1inv.component(k), a.gamma());

  // xi = theta - i_{gammadot} omega' along the original path
  std::vector<ScalarField> xi(n);
  if (S.eta_is_zero()) {
    xi = a.theta();
  } else {
    KForm omega = pullback(phi1inv, d_beta(S, grid));
    auto m = two_form_matrix(omega);
    for (int c = 0; c < n; ++c) {
      ScalarField acc = a.theta()[c];
      for (int b = 0; b < n; ++b)
        if (!m[b][c].is_zero())
          acc = acc - compose(m[b][c], a.gamma()) * a.velocity()[b];
      xi[c] = acc;
    }
  }

  // theta'_j = sum_a xi_a * (d_j phi_1^a at the new base point)
  std::vector<ScalarField> theta2(n);
  if (id1) {
    theta2 = xi;
  } else {
    for (int j = 0; j < n; ++j) {
      ScalarField acc = ScalarField::constant(0.0);
      for (int c = 0; c < n; ++c)
        acc = acc + xi[c] * compose(d_coord(phi1.component(c), j), gamma2);
      theta2[j] = acc;
    }
  }

  if (a.supports_time_jets())
    return CotangentPath(mf, std::move(gamma2), std::move(theta2));
  // chain-rule velocity for ODE-backed base paths
  std::vector<ScalarField> vel2(n);
  for (int k = 0; k < n; ++k) {
    ScalarField acc = ScalarField::constant(0.0);
    for (int b = 0; b < n; ++b)
      acc = acc + compose(d_coord(phi1inv.component(k), b), a.gamma()) *
                      a.velocity()[b];
    vel2[k] = acc;
  }
  return CotangentPath(mf, std::move(gamma2), std::move(theta2),
                       std::move(vel2), false);
}

// Shared core of the rack product and the automorphism action: conjugate the
// isotopy by `outer` and gauge the stored family by the closed 2-form.
// Result isotopy: outer^{-1} o phi_t o outer; stored family:
// outer^*( eta_t - phi_t^*( i_{phidot_t} (outer^{-1})^* gauge ) ).
inline Bisection conjugate_bisection(const SmoothMap& outer,
                                     const Isotopy& phi,
                                     const std::vector<ScalarField>& eta,
                                     const KForm& gauge) {
  const Manifold& mf = phi.manifold();
  const int n = mf.dim();
  const bool oid = outer.is_identity();
  const SmoothMap oinv = oid ? outer : inverse_map(outer);

  Isotopy chi;
  if (phi.is_identity()) {
    chi = Isotopy::identity(mf);
  } else if (oid) {
    chi = phi;
  } else {
    std::vector<ScalarField> mid(n), comps(n);
    for (int a = 0; a < n; ++a)
      mid[a] = compose(phi.components()[a], outer.components());
    for (int k = 0; k < n; ++k) comps[k] = compose(oinv.component(k), mid);
    if (phi.closed_form()) {
      chi = Isotopy::closed_form(mf, std::move(comps));
    } else {
      // explicit chain-rule velocity; flow components reject time jets
      std::vector<ScalarField> vel(n);
      for (int k = 0; k < n; ++k) {
        ScalarField acc = ScalarField::constant(0.0);
        for (int a = 0; a < n; ++a)
          acc = acc + compose(d_coord(oinv.component(k), a), mid) *
                          compose(phi.velocity()[a], outer.components());
        vel[k] = acc;
      }
      chi = Isotopy::with_velocity(mf, std::move(comps), std::move(vel));
    }
  }

  KForm omega = oid ? gauge : pullback(oinv, gauge);
  auto kap = kappa_family(phi, omega);
  std::vector<ScalarField> diff(n);
  for (int j = 0; j < n; ++j) diff[j] = eta[j] - kap[j];
  return Bisection(std::move(chi), pullback_family(outer, diff));
}

// Sigma |> T per the bisection product formula.
inline Bisection rack(const Bisection& S, const Bisection& T,
                      const TimeGrid& grid) {
  if (S.is_unit()) return T;
  if (T.is_unit()) return Bisection::unit(T.manifold());
  KForm gauge = S.eta_is_zero() ? KForm(S.manifold(), 2) : d_beta(S, grid);
  return conjugate_bisection(S.isotopy().time_one(), T.isotopy(), T.eta(),
                             gauge);
}

// The path-rackoid product on first components: (psi |> phi)_t =
// psi_1^{-1} o phi_t o psi_1.
inline Isotopy path_rack(const Isotopy& psi, const Isotopy& phi) {
  if (psi.is_identity()) return phi;
  if (phi.is_identity()) return phi;
  const Manifold& mf = phi.manifold();
  const SmoothMap p1 = psi.time_one();
  const SmoothMap p1inv = inverse_map(p1);
  std::vector<ScalarField> comps(mf.dim());
  std::vector<ScalarField> mid(mf.dim());
  for (int a = 0; a < mf.dim(); ++a)
    mid[a] = compose(phi.components()[a], p1.components());
  for (int k = 0; k < mf.dim(); ++k)
    comps[k] = compose(p1inv.component(k), mid);
  return Isotopy::closed_form(mf, std::move(comps));
}

// The 1-form of the product, by the transformation law:
// beta_{S |> T} = phi_1^*( beta_T - int psi_s^* i_{psidot_s} omega' ds ).
inline KForm beta_of_rack(const Bisection& S, const Bisection& T,
                          const TimeGrid& grid) {
  const Manifold& mf = S.manifold();
  if (S.is_unit()) return beta(T, grid);
  if (T.is_unit()) return KForm(mf, 1);
  const SmoothMap phi1 = S.isotopy().time_one();
  KForm omega = S.eta_is_zero()
                    ? KForm(mf, 2)
                    : pullback(inverse_map(phi1), d_beta(S, grid));
  auto kap = kappa_family(T.isotopy(), omega);
  KForm inner = beta(T, grid);
  for (int j = 0; j < mf.dim(); ++j)
    inner.coeff(j) = inner.coeff(j) - quadrature_field(kap[j], kTime, grid.n());
  return pullback(phi1, inner);
}

// The 2-form of the product, by the conjugation law:
// d beta_{S |> T} = phi_1^* d beta_T - phi_1^* psi_1^* (phi_1^{-1})^* d
// beta_S + d beta_S.
inline KForm dbeta_conjugation(const Bisection& S, const Bisection& T,
                               const TimeGrid& grid) {
  const Manifold& mf = S.manifold();
  KForm dbS = S.eta_is_zero() ? KForm(mf, 2) : d_beta(S, grid);
  KForm dbT = T.eta_is_zero() ? KForm(mf, 2) : d_beta(T, grid);
  const SmoothMap phi1 = S.isotopy().time_one();
  const SmoothMap psi1 = T.isotopy().time_one();
  KForm first = pullback(phi1, dbT);
  if (dbS.is_zero()) return first;
  KForm conj =
      pullback(phi1, pullback(psi1, pullback(inverse_map(phi1), dbS)));
  return first - conj + dbS;
}

// Residual of d int psi_s^* i_{psidot_s} d mu ds = psi_1^* d mu - d mu
// (psi_0 = id), the identity behind the conjugation law.
inline double homotopy_residual(const Isotopy& psi, const KForm& mu,
                                const TimeGrid& grid,
                                const std::vector<Point>& pts) {
  KForm dmu = exterior_d(mu);
  auto kap = kappa_family(psi, dmu);
  KForm integral(psi.manifold(), 1);
  for (int j = 0; j < psi.dim(); ++j)
    integral.coeff(j) = quadrature_field(kap[j], kTime, grid.n());
  KForm lhs = exterior_d(integral);
  KForm rhs = pullback(psi.time_one(), dmu) - dmu;
  return sup_form_diff(lhs, rhs, pts);
}

// ---------------------------------------------------------------------------
// Residual metrics (fixed sample lattice; torus-aware distances)

inline double path_residual(const CotangentPath& a, const CotangentPath& b,
                            const std::vector<double>& times) {
  const Manifold& mf = a.manifold();
  double m = 0.0;
  for (double t : times) {
    m = std::max(m, mf.distance(a.point_at(t), b.point_at(t)));
    auto ta = a.theta_at(t), tb = b.theta_at(t);
    for (size_t i = 0; i < ta.size(); ++i)
      m = std::max(m, std::abs(ta[i] - tb[i]));
  }
  return m;
}

inline double isotopy_residual(const Isotopy& a, const Isotopy& b,
                               const SampleLattice& lat) {
  const Manifold& mf = a.manifold();
  double m = 0.0;
  for (double t : lat.times) {
    for (const auto& p : lat.points) {
      auto va = eval_components(a.components(), mf, {p, {{kTime, t}}});
      auto vb = eval_components(b.components(), mf, {p, {{kTime, t}}});
      m = std::max(m, mf.distance(va, vb));
    }
  }
  return m;
}

inline double bisection_residual(const Bisection& a, const Bisection& b,
                                 const SampleLattice& lat) {
  const Manifold& mf = a.manifold();
  double m = isotopy_residual(a.isotopy(), b.isotopy(), lat);
  for (double t : lat.times)
    for (const auto& p : lat.points) {
      auto ea = eval_components(a.eta(), mf, {p, {{kTime, t}}});
      auto eb = eval_components(b.eta(), mf, {p, {{kTime, t}}});
      for (size_t i = 0; i < ea.size(); ++i)
        m = std::max(m, std::abs(ea[i] - eb[i]));
    }
  return m;
}

// Theorem-1 residual: Sigma |> (T |> a) vs (Sigma |> T) |> (Sigma |> a).
inline double self_distributivity_residual(const Bisection& S,
                                           const Bisection& T,
                                           const CotangentPath& a,
                                           const TimeGrid& grid,
                                           const std::vector<double>& times) {
  CotangentPath lhs = act(S, act(T, a, grid), grid);
  CotangentPath rhs = act(rack(S, T, grid), act(S, a, grid), grid);
  return path_residual(lhs, rhs, times);
}

// ---------------------------------------------------------------------------
// Augmented rack: p(Sigma) = (d beta_Sigma, phi_1) in closed 2-forms x
// diffeomorphisms.

struct CourantAutomorphism {
  KForm B;
  SmoothMap psi;
};

inline double closedness_residual(const KForm& B,
                                  const std::vector<Point>& pts) {
  return sup_form(exterior_d(B), pts);
}

inline CourantAutomorphism augmentation(const Bisection& S,
                                        const TimeGrid& grid) {
  KForm B = S.eta_is_zero() ? KForm(S.manifold(), 2) : d_beta(S, grid);
  return {std::move(B), S.isotopy().time_one()};
}

// (theta, psi) . Sigma = (psi^{-1} o phi_s o psi,
//                         psi^*(eta_s - i_{phidot_s} (psi^{-1})^* theta)).
inline Bisection aut_act(const CourantAutomorphism& g, const Bisection& S) {
  return conjugate_bisection(g.psi, S.isotopy(), S.eta(), g.B);
}

// Conjugation g h g^{-1} in the semidirect product, matching the d beta law.
inline CourantAutomorphism semidirect_conjugate(const CourantAutomorphism& g,
                                                const CourantAutomorphism& h) {
  const SmoothMap& psi = g.psi;
  SmoothMap mid = compose(h.psi, psi);
  SmoothMap newpsi = psi.is_identity()
                         ? h.psi
                         : compose(inverse_map(psi), mid);
  KForm B = pullback(psi, h.B);
  if (!g.B.is_zero()) {
    KForm conj = pullback(
        psi, pullback(h.psi, psi.is_identity()
                                 ? g.B
                                 : pullback(inverse_map(psi), g.B)));
    B = B - conj + g.B;
  }
  return {std::move(B), std::move(newpsi)};
}

}  // namespace rackoid
