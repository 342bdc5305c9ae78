#pragma once

// Time-parametrized objects over [0,1]: isotopies (closed form in time, or
// RK4 flows of a time-dependent vector field), bisections of the cotangent
// path precategory, cotangent paths, and generalized sections.
//
// A bisection Sigma = (phi, eta) stores eta as its halfway pullback: a time
// family of honest 1-forms on M.  The raw covector-at-phi_s(m) picture is
// reconstructed on demand through the inverse transpose of the isotopy
// jacobian.

#include <cmath>
#include <memory>
#include <utility>
#include <vector>

#include "rackoid/field.hpp"
#include "rackoid/forms.hpp"
#include "rackoid/manifold.hpp"
#include "rackoid/smooth_map.hpp"
#include "rackoid/time_grid.hpp"

namespace rackoid {

namespace detail {

struct FlowDef {
  Manifold mf;
  std::vector<NodePtr> vcomps;  // V components over (coords, kTime)
  int n_steps = 64;
};

}  // namespace detail

// RK4 flow map of a time-dependent vector field, evaluated at the bound time
// parameter.  Initial conditions are the context coordinates, so jets in any
// outer variable propagate exactly through the integration steps; jets in
// the flow time itself are not supported (finite differences are used
// instead).
class FlowCompNode final : public Node {
 public:
  FlowCompNode(std::shared_ptr<const detail::FlowDef> def, int k)
      : def_(std::move(def)), k_(k) {}

  Jet eval(EvalContext& ctx) const override {
    auto& slot = ctx.vec_memo[def_.get()];
    if (slot.empty()) slot = integrate(ctx);
    return slot[k_];
  }

 private:
  std::vector<Jet> integrate(EvalContext& ctx) const {
    auto it = ctx.params.find(kTime);
    if (it == ctx.params.end())
      throw RackoidError("flow map needs the time parameter bound");
    if (!it->second.is_numerically_constant())
      throw RackoidError(
          "flow map does not support time jets; use finite differences");
    const double t_target = it->second.value();
    const int n = def_->mf.dim();
    const double h = 1.0 / def_->n_steps;
    const double guard = def_->mf.extent();

    std::vector<Jet> state(ctx.coords);
    auto rhs = [&](double tau, const std::vector<Jet>& s) {
      EvalContext sub = ctx.with_coords(s);
      EvalContext& b = sub.bound_param(kTime, tau);
      std::vector<Jet> v(n);
      for (int i = 0; i < n; ++i) v[i] = b.eval(def_->vcomps[i]);
      return v;
    };
    auto step = [&](double tau, double dt) {
      std::vector<Jet> k1 = rhs(tau, state);
      std::vector<Jet> s2(n), s3(n), s4(n);
      for (int i = 0; i < n; ++i) s2[i] = state[i] + k1[i] * (dt / 2);
      std::vector<Jet> k2 = rhs(tau + dt / 2, s2);
      for (int i = 0; i < n; ++i) s3[i] = state[i] + k2[i] * (dt / 2);
      std::vector<Jet> k3 = rhs(tau + dt / 2, s3);
      for (int i = 0; i < n; ++i) s4[i] = state[i] + k3[i] * dt;
      std::vector<Jet> k4 = rhs(tau + dt, s4);
      for (int i = 0; i < n; ++i) {
        const double d = std::abs(k1[i].value()) * std::abs(dt);
        if (d > guard) throw FlowDiverged("flow step exceeds manifold extent");
        state[i] += (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (dt / 6);
      }
    };

    double t = 0.0;
    const int full = static_cast<int>(std::floor(t_target / h + 1e-9));
    for (int j = 0; j < full; ++j, t += h) step(t, h);
    const double rem = t_target - t;
    if (std::abs(rem) > 1e-12) step(t, rem);
    return state;
  }

  std::shared_ptr<const detail::FlowDef> def_;
  int k_;
};

// First component of a bisection: a time family of maps with phi_0 = id and
// phi_1 a diffeomorphism.
class Isotopy {
 public:
  Isotopy() = default;

  static Isotopy identity(const Manifold& mf) {
    Isotopy iso;
    iso.mf_ = mf;
    for (int i = 0; i < mf.dim(); ++i) {
      iso.comps_.push_back(ScalarField::coordinate(i));
      iso.vel_.push_back(ScalarField::constant(0.0));
    }
    iso.closed_form_ = true;
    iso.identity_ = true;
    return iso;
  }

  static Isotopy closed_form(const Manifold& mf,
                             std::vector<ScalarField> comps) {
    Isotopy iso;
    iso.mf_ = mf;
    iso.comps_ = std::move(comps);
    for (const auto& c : iso.comps_) iso.vel_.push_back(d_param(c, kTime));
    iso.closed_form_ = true;
    return iso;
  }

  // Components with an explicitly supplied velocity family (used when the
  // components do not support exact time jets).
  static Isotopy with_velocity(const Manifold& mf,
                               std::vector<ScalarField> comps,
                               std::vector<ScalarField> vel) {
    Isotopy iso;
    iso.mf_ = mf;
    iso.comps_ = std::move(comps);
    iso.vel_ = std::move(vel);
    iso.closed_form_ = false;
    return iso;
  }

  // RK4 flow of a time-dependent vector field (components over coords and
  // kTime).  Time derivatives of the result come from centered differences,
  // so flow-generated isotopies live in the looser tolerance tier.
  static Isotopy from_flow(const Manifold& mf,
                           const std::vector<ScalarField>& vcomps,
                           const TimeGrid& grid) {
    auto def = std::make_shared<detail::FlowDef>();
    def->mf = mf;
    for (const auto& v : vcomps) def->vcomps.push_back(v.node());
    def->n_steps = grid.n();
    Isotopy iso;
    iso.mf_ = mf;
    for (int k = 0; k < mf.dim(); ++k) {
      iso.comps_.emplace_back(
          ScalarField(std::make_shared<FlowCompNode>(def, k)));
      iso.vel_.push_back(fd_param(iso.comps_.back(), kTime, grid.h()));
    }
    iso.closed_form_ = false;
    return iso;
  }

  const Manifold& manifold() const { return mf_; }
  int dim() const { return mf_.dim(); }
  bool closed_form() const { return closed_form_; }
  bool is_identity() const { return identity_; }
  const std::vector<ScalarField>& components() const { return comps_; }
  const std::vector<ScalarField>& velocity() const { return vel_; }

  SmoothMap map_at(double s) const {
    if (identity_) return SmoothMap::identity(mf_);
    std::vector<ScalarField> c;
    for (const auto& f : comps_) c.push_back(bind(f, kTime, s));
    return SmoothMap(mf_, std::move(c), true);
  }
  SmoothMap time_one() const { return map_at(1.0); }

  // Residual of phi_0 = id over the given points.
  double initial_identity_residual(const std::vector<Point>& pts) const {
    double m = 0.0;
    for (const auto& p : pts) {
      auto v = eval_components(comps_, mf_, {p, {{kTime, 0.0}}});
      for (int i = 0; i < mf_.dim(); ++i) m = std::max(m, std::abs(v[i] - p[i]));
    }
    return m;
  }

 private:
  Manifold mf_ = Manifold::torus(1);
  std::vector<ScalarField> comps_, vel_;
  bool closed_form_ = true;
  bool identity_ = false;
};

inline Isotopy flow(const Manifold& mf, const std::vector<ScalarField>& vcomps,
                    const TimeGrid& grid) {
  return Isotopy::from_flow(mf, vcomps, grid);
}

class Bisection {
 public:
  Bisection() = default;
  Bisection(Isotopy phi, std::vector<ScalarField> eta_halfway)
      : phi_(std::move(phi)), eta_(std::move(eta_halfway)) {}

  static Bisection unit(const Manifold& mf) {
    return Bisection(Isotopy::identity(mf),
                     std::vector<ScalarField>(mf.dim()));
  }

  const Manifold& manifold() const { return phi_.manifold(); }
  const Isotopy& isotopy() const { return phi_; }
  // Stored halfway-pullback family: dim fields over (coords, kTime).
  const std::vector<ScalarField>& eta() const { return eta_; }
  bool eta_is_zero() const {
    for (const auto& e : eta_)
      if (!e.is_zero()) return false;
    return true;
  }
  bool is_unit() const { return phi_.is_identity() && eta_is_zero(); }

 private:
  Isotopy phi_;
  std::vector<ScalarField> eta_;
};

// The stored family bound at time s, as a 1-form on M.
inline KForm halfway_pullback(const Bisection& S, double s) {
  const Manifold& mf = S.manifold();
  KForm w(mf, 1);
  for (int i = 0; i < mf.dim(); ++i) w.coeff(i) = bind(S.eta()[i], kTime, s);
  return w;
}

// beta_Sigma = integral over s of the halfway pullback, as a 1-form whose
// coefficients are closed quadrature expressions.
inline KForm beta(const Bisection& S, const TimeGrid& grid) {
  const Manifold& mf = S.manifold();
  KForm w(mf, 1);
  for (int i = 0; i < mf.dim(); ++i)
    w.coeff(i) = quadrature_field(S.eta()[i], kTime, grid.n());
  return w;
}

inline KForm d_beta(const Bisection& S, const TimeGrid& grid) {
  return exterior_d(beta(S, grid));
}

// Jacobian entry fields dphi^i/dx_j of the isotopy (time left free).
inline std::vector<std::vector<ScalarField>> isotopy_jacobian(
    const Isotopy& phi) {
  const int n = phi.dim();
  std::vector<std::vector<ScalarField>> J(n, std::vector<ScalarField>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) J[i][j] = d_coord(phi.components()[i], j);
  return J;
}

// Raw covector family e_{s,m} in T*_{phi_s(m)}M from halfway storage:
// e = J^{-T} eta.
inline std::vector<ScalarField> raw_eta(const Bisection& S) {
  const int n = S.manifold().dim();
  if (S.isotopy().is_identity()) return S.eta();
  auto invT = inverse_transpose_fields(isotopy_jacobian(S.isotopy()));
  std::vector<ScalarField> e(n);
  for (int a = 0; a < n; ++a) {
    ScalarField acc = ScalarField::constant(0.0);
    for (int j = 0; j < n; ++j) acc = acc + invT[a][j] * S.eta()[j];
    e[a] = acc;
  }
  return e;
}

// Bisection from the raw covector picture: eta~ = J^T e.
inline Bisection from_raw_eta(const Isotopy& phi,
                              const std::vector<ScalarField>& e) {
  const int n = phi.dim();
  auto J = isotopy_jacobian(phi);
  std::vector<ScalarField> eta(n);
  for (int j = 0; j < n; ++j) {
    ScalarField acc = ScalarField::constant(0.0);
    for (int a = 0; a < n; ++a) acc = acc + J[a][j] * e[a];
    eta[j] = acc;
  }
  return Bisection(phi, std::move(eta));
}

// A cotangent path (gamma, theta): gamma and theta are fields of the time
// parameter only.  Paths whose base comes from an ODE solve carry explicit
// velocity fields instead of exact time jets.
class CotangentPath {
 public:
  CotangentPath() = default;
  CotangentPath(Manifold mf, std::vector<ScalarField> gamma,
                std::vector<ScalarField> theta)
      : mf_(std::move(mf)), gamma_(std::move(gamma)), theta_(std::move(theta)) {
    for (const auto& g : gamma_) vel_.push_back(d_param(g, kTime));
  }
  CotangentPath(Manifold mf, std::vector<ScalarField> gamma,
                std::vector<ScalarField> theta, std::vector<ScalarField> vel,
                bool time_jets_ok)
      : mf_(std::move(mf)), gamma_(std::move(gamma)), theta_(std::move(theta)),
        vel_(std::move(vel)), time_jets_(time_jets_ok) {}

  static CotangentPath constant(const Manifold& mf, const Point& m,
                                std::vector<ScalarField> theta) {
    std::vector<ScalarField> g;
    for (int i = 0; i < mf.dim(); ++i)
      g.push_back(ScalarField::constant(m[i]));
    return CotangentPath(mf, std::move(g), std::move(theta));
  }

  const Manifold& manifold() const { return mf_; }
  const std::vector<ScalarField>& gamma() const { return gamma_; }
  const std::vector<ScalarField>& theta() const { return theta_; }
  const std::vector<ScalarField>& velocity() const { return vel_; }
  bool supports_time_jets() const { return time_jets_; }

  Point point_at(double t) const {
    return eval_components(gamma_, mf_, {{}, {{kTime, t}}});
  }
  std::vector<double> theta_at(double t) const {
    return eval_components(theta_, mf_, {{}, {{kTime, t}}});
  }
  std::vector<double> velocity_at(double t) const {
    return eval_components(vel_, mf_, {{}, {{kTime, t}}});
  }

 private:
  Manifold mf_ = Manifold::torus(1);
  std::vector<ScalarField> gamma_, theta_, vel_;
  bool time_jets_ = true;
};

inline std::vector<double> path_time_derivative(const CotangentPath& a,
                                                double t) {
  return a.velocity_at(t);
}

// Element (X_t, alpha_t) of the section space, with X_0 = 0.
struct GeneralizedSection {
  VectorField X;  // components over (coords, kTime)
  KForm alpha;    // degree 1, coefficients over (coords, kTime)

  GeneralizedSection() = default;
  GeneralizedSection(VectorField x, KForm a)
      : X(std::move(x)), alpha(std::move(a)) {}

  static GeneralizedSection zero(const Manifold& mf) {
    return GeneralizedSection(VectorField::zero(mf), KForm(mf, 1));
  }

  const Manifold& manifold() const { return X.manifold(); }

  double initial_zero_residual(const std::vector<Point>& pts) const {
    double m = 0.0;
    for (const auto& p : pts) {
      auto v = eval_vector(X, {p, {{kTime, 0.0}}});
      for (double c : v) m = std::max(m, std::abs(c));
    }
    return m;
  }
};

}  // namespace rackoid
