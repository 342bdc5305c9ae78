#pragma once

// Smooth maps M -> M as component fields, plus Newton inversion.  Inverse
// maps are first-class fields: an InverseCompNode solves F(q) = p for the
// value part and then polishes the full jet with two Newton iterations in
// jet arithmetic, which reproduces the implicit-function derivatives exactly
// through order 3.

#include <cmath>
#include <memory>
#include <utility>
#include <vector>

#include "rackoid/field.hpp"
#include "rackoid/jet.hpp"
#include "rackoid/manifold.hpp"

namespace rackoid {

namespace detail {

// Gaussian elimination with partial pivoting over a commutative ring of jets
// (pivoting on the value part).
inline std::vector<Jet> solve_jet_linear(std::vector<std::vector<Jet>> A,
                                         std::vector<Jet> b) {
  const int n = static_cast<int>(b.size());
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(A[r][col].value()) > std::abs(A[piv][col].value())) piv = r;
    if (std::abs(A[piv][col].value()) < 1e-300)
      throw SingularJacobian("singular jacobian in Newton solve");
    std::swap(A[piv], A[col]);
    std::swap(b[piv], b[col]);
    Jet inv = recip(A[col][col]);
    for (int r = col + 1; r < n; ++r) {
      Jet f = A[r][col] * inv;
      for (int c = col; c < n; ++c) A[r][c] -= f * A[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<Jet> x(n, b[0]);
  for (int r = n - 1; r >= 0; --r) {
    Jet s = b[r];
    for (int c = r + 1; c < n; ++c) s -= A[r][c] * x[c];
    x[r] = s / A[r][r];
  }
  return x;
}

inline std::vector<double> solve_linear(std::vector<std::vector<double>> A,
                                        std::vector<double> b) {
  const int n = static_cast<int>(b.size());
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
    if (std::abs(A[piv][col]) < 1e-14)
      throw SingularJacobian("singular jacobian in Newton solve");
    std::swap(A[piv], A[col]);
    std::swap(b[piv], b[col]);
    for (int r = col + 1; r < n; ++r) {
      double f = A[r][col] / A[col][col];
      for (int c = col; c < n; ++c) A[r][c] -= f * A[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n, 0.0);
  for (int r = n - 1; r >= 0; --r) {
    double s = b[r];
    for (int c = r + 1; c < n; ++c) s -= A[r][c] * x[c];
    x[r] = s / A[r][r];
  }
  return x;
}

struct InverseDef {
  Manifold mf;
  std::vector<NodePtr> comps;
  std::vector<std::vector<NodePtr>> jac;
  double tol = 1e-13;
  int max_iter = 60;
};

}  // namespace detail

class InverseCompNode final : public Node {
 public:
  InverseCompNode(std::shared_ptr<const detail::InverseDef> def, int k)
      : def_(std::move(def)), k_(k) {}

  Jet eval(EvalContext& ctx) const override {
    auto& slot = ctx.vec_memo[def_.get()];
    if (slot.empty()) slot = solve(ctx);
    return slot[k_];
  }

 private:
  std::vector<Jet> solve(EvalContext& ctx) const {
    const int n = def_->mf.dim();
    std::vector<double> p(n);
    bool const_input = true;
    for (int i = 0; i < n; ++i) {
      p[i] = ctx.coords[i].value();
      const_input = const_input && ctx.coords[i].is_numerically_constant();
    }

    // Value phase: a few fixed-point sweeps (our maps are identity plus a
    // contraction-bounded perturbation) then Newton to tolerance.
    std::vector<double> q = p;
    for (int warm = 0; warm < 3; ++warm) {
      std::vector<double> fq = apply_values(q);
      for (int i = 0; i < n; ++i) q[i] += p[i] - fq[i];
    }
    bool converged = false;
    for (int it = 0; it < def_->max_iter; ++it) {
      EvalContext c = make_root_context(n, q, {}, {}, true, 1);
      std::vector<double> r(n);
      std::vector<std::vector<double>> J(n, std::vector<double>(n));
      double rn = 0.0;
      for (int i = 0; i < n; ++i) {
        Jet fi = c.eval(def_->comps[i]);
        r[i] = fi.value() - p[i];
        rn = std::max(rn, std::abs(r[i]));
        for (int j = 0; j < n; ++j) J[i][j] = fi.deriv1(j);
      }
      if (rn <= def_->tol) {
        converged = true;
        break;
      }
      std::vector<double> d = detail::solve_linear(J, r);
      for (int i = 0; i < n; ++i) q[i] -= d[i];
    }
    if (!converged) {
      EvalContext c = make_root_context(n, q, {}, {}, false, 0);
      double rn = 0.0;
      for (int i = 0; i < n; ++i)
        rn = std::max(rn,
                      std::abs(c.eval(def_->comps[i]).value() - p[i]));
      if (rn > def_->tol) throw NoConvergence("Newton inversion stalled");
    }

    const JetShape sh = ctx.shape();
    std::vector<Jet> qj(n);
    for (int i = 0; i < n; ++i) qj[i] = Jet::constant(q[i], sh);
    if (const_input || (sh.nvars == 0 && sh.order == 0)) return qj;

    // Jet polish: two Newton steps in jet arithmetic make all Taylor
    // coefficients through order 3 exact.
    for (int pass = 0; pass < 2; ++pass) {
      EvalContext sub = ctx.with_coords(qj);
      std::vector<Jet> r(n);
      std::vector<std::vector<Jet>> J(n, std::vector<Jet>(n));
      for (int i = 0; i < n; ++i) {
        r[i] = sub.eval(def_->comps[i]) - ctx.coords[i];
        for (int j = 0; j < n; ++j) J[i][j] = sub.eval(def_->jac[i][j]);
      }
      std::vector<Jet> d = detail::solve_jet_linear(std::move(J), std::move(r));
      for (int i = 0; i < n; ++i) qj[i] -= d[i];
    }
    return qj;
  }

  std::vector<double> apply_values(const std::vector<double>& q) const {
    EvalContext c = make_root_context(def_->mf.dim(), q, {}, {}, false, 0);
    std::vector<double> out(def_->mf.dim());
    for (int i = 0; i < def_->mf.dim(); ++i)
      out[i] = c.eval(def_->comps[i]).value();
    return out;
  }

  std::shared_ptr<const detail::InverseDef> def_;
  int k_;
};

class SmoothMap {
 public:
  SmoothMap() = default;
  SmoothMap(Manifold mf, std::vector<ScalarField> comps, bool is_diffeo = true)
      : mf_(std::move(mf)), comps_(std::move(comps)), diffeo_(is_diffeo) {}

  static SmoothMap identity(const Manifold& mf) {
    std::vector<ScalarField> c;
    for (int i = 0; i < mf.dim(); ++i) c.push_back(ScalarField::coordinate(i));
    SmoothMap m(mf, std::move(c), true);
    m.identity_ = true;
    return m;
  }

  static SmoothMap shift(const Manifold& mf, const std::vector<double>& c) {
    std::vector<ScalarField> f;
    for (int i = 0; i < mf.dim(); ++i)
      f.push_back(ScalarField::coordinate(i) + c[i]);
    return SmoothMap(mf, std::move(f), true);
  }

  const Manifold& manifold() const { return mf_; }
  int dim() const { return mf_.dim(); }
  bool is_diffeo() const { return diffeo_; }
  bool is_identity() const { return identity_; }
  const std::vector<ScalarField>& components() const { return comps_; }
  const ScalarField& component(int i) const { return comps_[i]; }

 private:
  Manifold mf_ = Manifold::torus(1);
  std::vector<ScalarField> comps_;
  bool diffeo_ = false;
  bool identity_ = false;
};

inline Point apply_map(const SmoothMap& F, const Point& p,
                   const std::map<int, double>& params = {}) {
  EvalContext c = make_context(F.manifold(), {p, params}, false, {}, 0);
  Point out(F.dim());
  for (int i = 0; i < F.dim(); ++i) out[i] = c.eval(F.component(i).node()).value();
  return out;
}

inline std::vector<std::vector<double>> jacobian(const SmoothMap& F,
                                                 const Point& p) {
  EvalContext c = make_context(F.manifold(), {p, {}}, true, {}, 1);
  std::vector<std::vector<double>> J(F.dim(), std::vector<double>(F.dim()));
  for (int i = 0; i < F.dim(); ++i) {
    Jet ji = c.eval(F.component(i).node());
    for (int j = 0; j < F.dim(); ++j) J[i][j] = ji.deriv1(j);
  }
  return J;
}

inline SmoothMap compose(const SmoothMap& F, const SmoothMap& G) {
  if (F.is_identity()) return G;
  if (G.is_identity()) return F;
  std::vector<ScalarField> c;
  for (int i = 0; i < F.dim(); ++i)
    c.push_back(compose(F.component(i), G.components()));
  return SmoothMap(F.manifold(), std::move(c), F.is_diffeo() && G.is_diffeo());
}

// The inverse diffeomorphism as a map whose components are Newton-backed
// fields.
inline SmoothMap inverse_map(const SmoothMap& F) {
  if (F.is_identity()) return F;
  if (!F.is_diffeo()) throw RackoidError("inverse of a non-diffeomorphism");
  auto def = std::make_shared<detail::InverseDef>();
  def->mf = F.manifold();
  for (const auto& f : F.components()) def->comps.push_back(f.node());
  def->jac.resize(F.dim());
  for (int i = 0; i < F.dim(); ++i)
    for (int j = 0; j < F.dim(); ++j)
      def->jac[i].push_back(d_coord(F.component(i), j).node());
  std::vector<ScalarField> c;
  for (int k = 0; k < F.dim(); ++k)
    c.emplace_back(ScalarField(std::make_shared<InverseCompNode>(def, k)));
  return SmoothMap(F.manifold(), std::move(c), true);
}

// Point-level Newton inversion: find q with |F(q) - p| <= 1e-12.
inline Point invert(const SmoothMap& F, const Point& p,
                    const Point* seed_hint = nullptr) {
  if (!F.is_diffeo()) throw RackoidError("invert needs a diffeomorphism");
  const int n = F.dim();
  Point q = seed_hint ? *seed_hint : p;
  for (int it = 0; it < 50; ++it) {
    EvalContext c = make_root_context(n, q, {}, {}, true, 1);
    std::vector<double> r(n);
    std::vector<std::vector<double>> J(n, std::vector<double>(n));
    double rn = 0.0;
    for (int i = 0; i < n; ++i) {
      Jet fi = c.eval(F.component(i).node());
      r[i] = fi.value() - p[i];
      rn = std::max(rn, std::abs(r[i]));
      for (int j = 0; j < n; ++j) J[i][j] = fi.deriv1(j);
    }
    if (rn <= 1e-12) return q;
    std::vector<double> d = detail::solve_linear(J, r);
    for (int i = 0; i < n; ++i) q[i] -= d[i];
  }
  throw NoConvergence("invert: no convergence after 50 iterations");
}

}  // namespace rackoid
