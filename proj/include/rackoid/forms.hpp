#pragma once

// Exterior calculus on the single global chart: k-forms (k <= 3) stored by
// sorted index, vector fields, d, interior product (first slot), Lie
// derivative via Cartan's formula, pullback and pushforward.

#include <algorithm>
#include <utility>
#include <vector>

#include "rackoid/field.hpp"
#include "rackoid/manifold.hpp"
#include "rackoid/smooth_map.hpp"

namespace rackoid {

namespace detail {

inline std::vector<std::vector<int>> combinations(int n, int k) {
  std::vector<std::vector<int>> out;
  if (k < 0 || k > n) return out;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  if (k == 0) {
    out.push_back({});
    return out;
  }
  while (true) {
    out.push_back(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

inline int comb_rank(const std::vector<std::vector<int>>& combs,
                     const std::vector<int>& sorted) {
  for (int r = 0; r < static_cast<int>(combs.size()); ++r)
    if (combs[r] == sorted) return r;
  return -1;
}

// Sort an index tuple, returning the permutation sign; 0 if repeated.
inline int sort_sign(std::vector<int>& idx) {
  int sign = 1;
  for (size_t i = 0; i + 1 < idx.size(); ++i)
    for (size_t j = 0; j + 1 < idx.size() - i; ++j)
      if (idx[j] > idx[j + 1]) {
        std::swap(idx[j], idx[j + 1]);
        sign = -sign;
      }
  for (size_t i = 0; i + 1 < idx.size(); ++i)
    if (idx[i] == idx[i + 1]) return 0;
  return sign;
}

}  // namespace detail

class VectorField {
 public:
  VectorField() = default;
  VectorField(Manifold mf, std::vector<ScalarField> comps)
      : mf_(std::move(mf)), comps_(std::move(comps)) {}

  static VectorField zero(const Manifold& mf) {
    return VectorField(mf, std::vector<ScalarField>(mf.dim()));
  }
  static VectorField basis(const Manifold& mf, int i) {
    std::vector<ScalarField> c(mf.dim());
    c[i] = ScalarField::constant(1.0);
    return VectorField(mf, std::move(c));
  }

  const Manifold& manifold() const { return mf_; }
  int dim() const { return mf_.dim(); }
  const ScalarField& component(int i) const { return comps_[i]; }
  const std::vector<ScalarField>& components() const { return comps_; }
  bool is_zero() const {
    for (const auto& c : comps_)
      if (!c.is_zero()) return false;
    return true;
  }

 private:
  Manifold mf_ = Manifold::torus(1);
  std::vector<ScalarField> comps_;
};

class KForm {
 public:
  KForm() = default;
  KForm(Manifold mf, int degree)
      : mf_(std::move(mf)), k_(degree),
        combs_(detail::combinations(mf_.dim(), degree)),
        coeffs_(combs_.size()) {}
  KForm(Manifold mf, int degree, std::vector<ScalarField> coeffs)
      : mf_(std::move(mf)), k_(degree),
        combs_(detail::combinations(mf_.dim(), degree)),
        coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != combs_.size())
      throw ConfigError("k-form coefficient count mismatch");
  }

  const Manifold& manifold() const { return mf_; }
  int degree() const { return k_; }
  int dim() const { return mf_.dim(); }
  // Degree above dim: the distinct "trivially zero" overflow state.
  bool overflow() const { return k_ > mf_.dim(); }
  int coefficient_count() const { return static_cast<int>(coeffs_.size()); }
  const std::vector<std::vector<int>>& index_sets() const { return combs_; }
  const ScalarField& coeff(int rank) const { return coeffs_[rank]; }
  ScalarField& coeff(int rank) { return coeffs_[rank]; }

  // Coefficient for an arbitrary index tuple, with antisymmetry signs.
  ScalarField coeff_signed(std::vector<int> idx) const {
    int sign = detail::sort_sign(idx);
    if (sign == 0) return ScalarField::constant(0.0);
    int r = detail::comb_rank(combs_, idx);
    if (r < 0) return ScalarField::constant(0.0);
    return sign > 0 ? coeffs_[r] : -coeffs_[r];
  }

  bool is_zero() const {
    for (const auto& c : coeffs_)
      if (!c.is_zero()) return false;
    return true;
  }

 private:
  Manifold mf_ = Manifold::torus(1);
  int k_ = 0;
  std::vector<std::vector<int>> combs_;
  std::vector<ScalarField> coeffs_;
};

inline KForm operator+(const KForm& a, const KForm& b) {
  KForm r(a.manifold(), a.degree());
  for (int i = 0; i < a.coefficient_count(); ++i)
    r.coeff(i) = a.coeff(i) + b.coeff(i);
  return r;
}
inline KForm operator-(const KForm& a, const KForm& b) {
  KForm r(a.manifold(), a.degree());
  for (int i = 0; i < a.coefficient_count(); ++i)
    r.coeff(i) = a.coeff(i) - b.coeff(i);
  return r;
}
inline KForm operator-(const KForm& a) {
  KForm r(a.manifold(), a.degree());
  for (int i = 0; i < a.coefficient_count(); ++i) r.coeff(i) = -a.coeff(i);
  return r;
}
inline KForm operator*(const KForm& a, const ScalarField& s) {
  KForm r(a.manifold(), a.degree());
  for (int i = 0; i < a.coefficient_count(); ++i) r.coeff(i) = a.coeff(i) * s;
  return r;
}
inline KForm operator*(const KForm& a, double s) {
  return a * ScalarField::constant(s);
}

inline VectorField operator+(const VectorField& a, const VectorField& b) {
  std::vector<ScalarField> c(a.dim());
  for (int i = 0; i < a.dim(); ++i) c[i] = a.component(i) + b.component(i);
  return VectorField(a.manifold(), std::move(c));
}
inline VectorField operator-(const VectorField& a, const VectorField& b) {
  std::vector<ScalarField> c(a.dim());
  for (int i = 0; i < a.dim(); ++i) c[i] = a.component(i) - b.component(i);
  return VectorField(a.manifold(), std::move(c));
}
inline VectorField operator*(const VectorField& a, const ScalarField& s) {
  std::vector<ScalarField> c(a.dim());
  for (int i = 0; i < a.dim(); ++i) c[i] = a.component(i) * s;
  return VectorField(a.manifold(), std::move(c));
}
inline VectorField operator*(const VectorField& a, double s) {
  return a * ScalarField::constant(s);
}

// d: coefficients from first derivatives with alternating signs.  At top
// degree this returns the overflow form (no coefficients), which is
// identically zero.
inline KForm exterior_d(const KForm& w) {
  KForm r(w.manifold(), w.degree() + 1);
  if (r.overflow() || w.overflow()) return r;
  const auto& out_sets = r.index_sets();
  for (int rr = 0; rr < r.coefficient_count(); ++rr) {
    const auto& J = out_sets[rr];
    ScalarField acc = ScalarField::constant(0.0);
    for (size_t a = 0; a < J.size(); ++a) {
      std::vector<int> rest;
      for (size_t b = 0; b < J.size(); ++b)
        if (b != a) rest.push_back(J[b]);
      ScalarField term = d_coord(w.coeff_signed(rest), J[a]);
      acc = (a % 2 == 0) ? acc + term : acc - term;
    }
    r.coeff(rr) = acc;
  }
  return r;
}

inline KForm exterior_d(const ScalarField& f, const Manifold& mf) {
  KForm w(mf, 0);
  w.coeff(0) = f;
  return exterior_d(w);
}

// Contraction in the first slot.
inline KForm interior(const VectorField& X, const KForm& w) {
  if (w.degree() < 1) throw ConfigError("interior product needs degree >= 1");
  KForm r(w.manifold(), w.degree() - 1);
  if (w.overflow()) return r;
  const auto& out_sets = r.index_sets();
  for (int rr = 0; rr < r.coefficient_count(); ++rr) {
    const auto& K = out_sets[rr];
    ScalarField acc = ScalarField::constant(0.0);
    for (int i = 0; i < w.dim(); ++i) {
      std::vector<int> idx;
      idx.push_back(i);
      idx.insert(idx.end(), K.begin(), K.end());
      acc = acc + X.component(i) * w.coeff_signed(idx);
    }
    r.coeff(rr) = acc;
  }
  return r;
}

inline VectorField lie_bracket(const VectorField& X, const VectorField& Y) {
  std::vector<ScalarField> c(X.dim());
  for (int i = 0; i < X.dim(); ++i) {
    ScalarField acc = ScalarField::constant(0.0);
    for (int j = 0; j < X.dim(); ++j)
      acc = acc + X.component(j) * d_coord(Y.component(i), j) -
            Y.component(j) * d_coord(X.component(i), j);
    c[i] = acc;
  }
  return VectorField(X.manifold(), std::move(c));
}

inline KForm lie_derivative(const VectorField& X, const KForm& w) {
  if (w.degree() == 0) return interior(X, exterior_d(w));
  KForm a = interior(X, exterior_d(w));
  KForm b = exterior_d(interior(X, w));
  return a + b;
}

// Coordinate pullback: (F^*w)_J = sum_I (w_I o F) det(dF^I/dx^J).
inline KForm pullback(const SmoothMap& F, const KForm& w) {
  if (F.is_identity()) return w;
  KForm r(F.manifold(), w.degree());
  if (w.overflow()) return r;
  const int k = w.degree();
  if (k == 0) {
    r.coeff(0) = compose(w.coeff(0), F.components());
    return r;
  }
  // Jacobian entry fields, built once and shared.
  std::vector<std::vector<ScalarField>> J(F.dim(),
                                          std::vector<ScalarField>(F.dim()));
  for (int i = 0; i < F.dim(); ++i)
    for (int j = 0; j < F.dim(); ++j) J[i][j] = d_coord(F.component(i), j);

  const auto& in_sets = w.index_sets();
  const auto& out_sets = r.index_sets();
  for (int rr = 0; rr < r.coefficient_count(); ++rr) {
    const auto& Jt = out_sets[rr];
    ScalarField acc = ScalarField::constant(0.0);
    for (int ss = 0; ss < w.coefficient_count(); ++ss) {
      const auto& I = in_sets[ss];
      ScalarField det;
      if (k == 1) {
        det = J[I[0]][Jt[0]];
      } else if (k == 2) {
        det = J[I[0]][Jt[0]] * J[I[1]][Jt[1]] -
              J[I[0]][Jt[1]] * J[I[1]][Jt[0]];
      } else {
        det = J[I[0]][Jt[0]] *
                  (J[I[1]][Jt[1]] * J[I[2]][Jt[2]] -
                   J[I[1]][Jt[2]] * J[I[2]][Jt[1]]) -
              J[I[0]][Jt[1]] *
                  (J[I[1]][Jt[0]] * J[I[2]][Jt[2]] -
                   J[I[1]][Jt[2]] * J[I[2]][Jt[0]]) +
              J[I[0]][Jt[2]] *
                  (J[I[1]][Jt[0]] * J[I[2]][Jt[1]] -
                   J[I[1]][Jt[1]] * J[I[2]][Jt[0]]);
      }
      acc = acc + compose(w.coeff(ss), F.components()) * det;
    }
    r.coeff(rr) = acc;
  }
  return r;
}

// (F_* X)(p) = TF(X) at F^{-1}(p).  An already-built inverse can be shared.
inline VectorField pushforward(const SmoothMap& F, const VectorField& X,
                               const SmoothMap* inverse_hint = nullptr) {
  if (F.is_identity()) return X;
  SmoothMap Finv = inverse_hint ? *inverse_hint : inverse_map(F);
  std::vector<ScalarField> c(F.dim());
  for (int i = 0; i < F.dim(); ++i) {
    ScalarField acc = ScalarField::constant(0.0);
    for (int j = 0; j < F.dim(); ++j)
      acc = acc + d_coord(F.component(i), j) * X.component(j);
    c[i] = compose(acc, Finv.components());
  }
  return VectorField(F.manifold(), std::move(c));
}

// Entries of the inverse transpose of a matrix of fields (dim <= 3), via the
// adjugate.  Used to reconstruct raw covector families from halfway-pullback
// storage.
inline std::vector<std::vector<ScalarField>> inverse_transpose_fields(
    const std::vector<std::vector<ScalarField>>& A) {
  const int n = static_cast<int>(A.size());
  std::vector<std::vector<ScalarField>> inv(n, std::vector<ScalarField>(n));
  if (n == 1) {
    inv[0][0] = ScalarField::constant(1.0) / A[0][0];
    return inv;
  }
  ScalarField det;
  if (n == 2) {
    det = A[0][0] * A[1][1] - A[0][1] * A[1][0];
  } else if (n == 3) {
    det = A[0][0] * (A[1][1] * A[2][2] - A[1][2] * A[2][1]) -
          A[0][1] * (A[1][0] * A[2][2] - A[1][2] * A[2][0]) +
          A[0][2] * (A[1][0] * A[2][1] - A[1][1] * A[2][0]);
  } else {
    throw ConfigError("inverse_transpose_fields supports dim <= 3");
  }
  // inv(A)^T = adj(A)^T / det; adj(A)_{ij} = cofactor_{ji}.
  auto cof = [&](int i, int j) {
    if (n == 2) {
      ScalarField m = A[1 - i][1 - j];
      return ((i + j) % 2 == 0) ? m : -m;
    }
    int r0 = (i + 1) % 3, r1 = (i + 2) % 3;
    int c0 = (j + 1) % 3, c1 = (j + 2) % 3;
    if (r0 > r1) std::swap(r0, r1);
    if (c0 > c1) std::swap(c0, c1);
    ScalarField m = A[r0][c0] * A[r1][c1] - A[r0][c1] * A[r1][c0];
    return ((i + j) % 2 == 0) ? m : -m;
  };
  // (A^{-T})_{ij} = (A^{-1})_{ji} = adj(A)_{ji}/det = cof(i,j)/det
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv[i][j] = cof(i, j) / det;
  return inv;
}

// ---------------------------------------------------------------------------
// Pointwise evaluation helpers

inline std::vector<double> eval_components(const std::vector<ScalarField>& fs,
                                           const Manifold& mf,
                                           const EvalPoint& at) {
  EvalContext c = make_context(mf, at, false, {}, 0);
  std::vector<double> out(fs.size());
  for (size_t i = 0; i < fs.size(); ++i) out[i] = c.eval(fs[i].node()).value();
  return out;
}

inline std::vector<double> eval_kform(const KForm& w, const EvalPoint& at) {
  EvalContext c = make_context(w.manifold(), at, false, {}, 0);
  std::vector<double> out(w.coefficient_count());
  for (int i = 0; i < w.coefficient_count(); ++i)
    out[i] = c.eval(w.coeff(i).node()).value();
  return out;
}

inline std::vector<double> eval_vector(const VectorField& X,
                                       const EvalPoint& at) {
  EvalContext c = make_context(X.manifold(), at, false, {}, 0);
  std::vector<double> out(X.dim());
  for (int i = 0; i < X.dim(); ++i)
    out[i] = c.eval(X.component(i).node()).value();
  return out;
}

inline double sup_form_diff(const KForm& a, const KForm& b,
                            const std::vector<Point>& pts,
                            const std::map<int, double>& params = {}) {
  double m = 0.0;
  for (const auto& p : pts) {
    auto va = eval_kform(a, {p, params});
    auto vb = eval_kform(b, {p, params});
    for (size_t i = 0; i < va.size(); ++i)
      m = std::max(m, std::abs(va[i] - vb[i]));
  }
  return m;
}

inline double sup_form(const KForm& a, const std::vector<Point>& pts,
                       const std::map<int, double>& params = {}) {
  double m = 0.0;
  for (const auto& p : pts) {
    auto va = eval_kform(a, {p, params});
    for (double v : va) m = std::max(m, std::abs(v));
  }
  return m;
}

inline double sup_vector_diff(const VectorField& a, const VectorField& b,
                              const std::vector<Point>& pts,
                              const std::map<int, double>& params = {}) {
  double m = 0.0;
  for (const auto& p : pts) {
    auto va = eval_vector(a, {p, params});
    auto vb = eval_vector(b, {p, params});
    for (size_t i = 0; i < va.size(); ++i)
      m = std::max(m, std::abs(va[i] - vb[i]));
  }
  return m;
}

}  // namespace rackoid
