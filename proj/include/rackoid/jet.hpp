#pragma once

// Truncated multivariate Taylor arithmetic ("jets") up to third order in a
// small dynamic set of variables.  A Jet stores the Taylor coefficients of a
// smooth quantity around the current evaluation point; arithmetic on jets is
// exact for the computational graph it flows through, so gradients and
// Hessians carry no truncation error.
//
// Coefficients are stored divided by the factorial of the multi-index
// (Taylor normalization), which makes multiplication a plain convolution.

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace rackoid {

inline constexpr int kJetMaxVars = 6;
inline constexpr int kJetMaxOrder = 3;
// Largest coefficient count we allow: C(5+3,3)=56 covers 5 vars at order 3;
// 6 vars are permitted up to order 2 (C(8,2)=28).
inline constexpr int kJetCap = 56;

struct JetShape {
  int nvars = 0;
  int order = 0;
  friend bool operator==(const JetShape& a, const JetShape& b) {
    return a.nvars == b.nvars && a.order == b.order;
  }
};

namespace detail {

using Exps = std::array<std::uint8_t, kJetMaxVars>;

inline std::uint32_t pack_exps(const Exps& e) {
  std::uint32_t k = 0;
  for (int i = 0; i < kJetMaxVars; ++i) k |= std::uint32_t(e[i]) << (4 * i);
  return k;
}

struct ProdEntry {
  std::uint16_t a, b, c;
};

// Index tables for one (nvars, order) shape.  Multi-indices are enumerated in
// graded lexicographic order, so the table of a lower order is a prefix of
// the table of a higher order with the same nvars.
struct JetTables {
  int nvars = 0, order = 0, count = 0;
  std::vector<Exps> exps;
  std::map<std::uint32_t, int> index_of;
  std::vector<ProdEntry> prod;

  JetTables(int nv, int ord) : nvars(nv), order(ord) {
    Exps e{};
    enumerate(e, 0, 0);
    count = static_cast<int>(exps.size());
    if (count > kJetCap) throw std::logic_error("jet shape exceeds capacity");
    for (int ia = 0; ia < count; ++ia) {
      for (int ib = 0; ib < count; ++ib) {
        int tot = 0;
        Exps sum{};
        for (int v = 0; v < nvars; ++v) {
          sum[v] = std::uint8_t(exps[ia][v] + exps[ib][v]);
          tot += sum[v];
        }
        if (tot > order) continue;
        prod.push_back({std::uint16_t(ia), std::uint16_t(ib),
                        std::uint16_t(index_of.at(pack_exps(sum)))});
      }
    }
  }

 private:
  void enumerate(Exps& e, int, int) {
    // graded order: all indices of total degree d before degree d+1
    for (int d = 0; d <= order; ++d) {
      Exps cur{};
      emit_degree(cur, 0, d);
    }
  }
  void emit_degree(Exps& cur, int var, int remaining) {
    if (var == nvars) {
      if (remaining == 0) {
        index_of[pack_exps(cur)] = static_cast<int>(exps.size());
        exps.push_back(cur);
      }
      return;
    }
    for (int k = remaining; k >= 0; --k) {
      cur[var] = std::uint8_t(k);
      emit_degree(cur, var + 1, remaining - k);
      cur[var] = 0;
    }
  }
};

inline const JetTables& jet_tables(int nvars, int order) {
  static std::array<const JetTables*, (kJetMaxVars + 1) * (kJetMaxOrder + 1)>
      cache{};
  static std::mutex mu;
  const int slot = nvars * (kJetMaxOrder + 1) + order;
  const JetTables* t = cache[slot];
  if (t) return *t;
  std::lock_guard<std::mutex> lock(mu);
  if (!cache[slot]) cache[slot] = new JetTables(nvars, order);
  return *cache[slot];
}

}  // namespace detail

class Jet {
 public:
  Jet() { c_[0] = 0.0; }

  static Jet constant(double v, JetShape sh) {
    Jet r;
    r.shape_ = sh;
    r.n_ = detail::jet_tables(sh.nvars, sh.order).count;
    for (int i = 0; i < r.n_; ++i) r.c_[i] = 0.0;
    r.c_[0] = v;
    return r;
  }

  // Value v, seeded as the slot-th independent variable.
  static Jet variable(double v, int slot, JetShape sh) {
    Jet r = constant(v, sh);
    if (sh.order >= 1) r.c_[1 + slot] = 1.0;  // degree-1 block starts at 1
    return r;
  }

  JetShape shape() const { return shape_; }
  int size() const { return n_; }
  double value() const { return c_[0]; }
  double coeff(int i) const { return c_[i]; }
  double& coeff(int i) { return c_[i]; }

  bool is_numerically_constant() const {
    for (int i = 1; i < n_; ++i)
      if (c_[i] != 0.0) return false;
    return true;
  }

  // Derivative accessors (multiply Taylor coefficients back by factorials).
  double deriv1(int slot) const {
    if (shape_.order < 1) return 0.0;
    return c_[1 + slot];
  }
  double deriv2(int i, int j) const {
    if (shape_.order < 2) return 0.0;
    const auto& t = tables();
    detail::Exps e{};
    e[i] += 1;
    e[j] += 1;
    double fac = (i == j) ? 2.0 : 1.0;
    return c_[t.index_of.at(detail::pack_exps(e))] * fac;
  }

  Jet& operator+=(const Jet& o) {
    for (int i = 0; i < n_; ++i) c_[i] += o.c_[i];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    for (int i = 0; i < n_; ++i) c_[i] -= o.c_[i];
    return *this;
  }
  Jet& operator*=(double s) {
    for (int i = 0; i < n_; ++i) c_[i] *= s;
    return *this;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator-(Jet a) {
    for (int i = 0; i < a.n_; ++i) a.c_[i] = -a.c_[i];
    return a;
  }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator+(Jet a, double s) {
    a.c_[0] += s;
    return a;
  }
  friend Jet operator+(double s, Jet a) { return a + s; }
  friend Jet operator-(Jet a, double s) {
    a.c_[0] -= s;
    return a;
  }

  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r = Jet::constant(0.0, a.shape_);
    for (const auto& p : a.tables().prod) r.c_[p.c] += a.c_[p.a] * b.c_[p.b];
    return r;
  }

  // f(u) from the univariate Taylor coefficients d[k] = f^(k)(u.value())/k!.
  Jet apply_series(const double d[kJetMaxOrder + 1]) const {
    Jet w = *this;
    w.c_[0] = 0.0;
    Jet r = Jet::constant(d[0], shape_);
    if (shape_.order >= 1) {
      Jet p = w;
      r += p * d[1];
      for (int k = 2; k <= shape_.order; ++k) {
        p = p * w;
        r += p * d[k];
      }
    }
    return r;
  }

  friend Jet sin(const Jet& u) {
    const double s = std::sin(u.value()), c = std::cos(u.value());
    const double d[4] = {s, c, -s / 2.0, -c / 6.0};
    return u.apply_series(d);
  }
  friend Jet cos(const Jet& u) {
    const double s = std::sin(u.value()), c = std::cos(u.value());
    const double d[4] = {c, -s, -c / 2.0, s / 6.0};
    return u.apply_series(d);
  }
  friend Jet exp(const Jet& u) {
    const double e = std::exp(u.value());
    const double d[4] = {e, e, e / 2.0, e / 6.0};
    return u.apply_series(d);
  }
  friend Jet recip(const Jet& u) {
    const double v = u.value();
    if (v == 0.0) throw std::domain_error("jet reciprocal at zero");
    const double iv = 1.0 / v;
    const double d[4] = {iv, -iv * iv, iv * iv * iv, -iv * iv * iv * iv};
    return u.apply_series(d);
  }
  friend Jet operator/(const Jet& a, const Jet& b) { return a * recip(b); }

  // Taylor coefficients of d(*this)/d(var slot); the result lives in the same
  // variable set one order lower.
  Jet deriv_slice(int slot) const {
    JetShape sh{shape_.nvars, shape_.order - 1};
    Jet r = Jet::constant(0.0, sh);
    const auto& tin = tables();
    const auto& tout = detail::jet_tables(sh.nvars, sh.order);
    for (int i = 0; i < tout.count; ++i) {
      detail::Exps e = tout.exps[i];
      const int k = e[slot];
      e[slot] = std::uint8_t(k + 1);
      r.c_[i] = c_[tin.index_of.at(detail::pack_exps(e))] * double(k + 1);
    }
    return r;
  }

  // Re-express this jet in a new ordered variable list.  old_to_new[s] gives
  // the slot in the new list of old slot s, or -1 to drop that variable
  // (coefficients involving dropped variables are discarded).
  Jet remap(const int* old_to_new, JetShape new_shape) const {
    Jet r = Jet::constant(0.0, new_shape);
    const auto& tin = tables();
    const auto& tout = detail::jet_tables(new_shape.nvars, new_shape.order);
    for (int i = 0; i < n_; ++i) {
      detail::Exps e{};
      bool dropped = false;
      int tot = 0;
      for (int v = 0; v < shape_.nvars; ++v) {
        const int k = tin.exps[i][v];
        if (k == 0) continue;
        if (old_to_new[v] < 0) {
          dropped = true;
          break;
        }
        e[old_to_new[v]] = std::uint8_t(k);
        tot += k;
      }
      if (dropped || tot > new_shape.order) continue;
      r.c_[tout.index_of.at(detail::pack_exps(e))] = c_[i];
    }
    return r;
  }

 private:
  const detail::JetTables& tables() const {
    return detail::jet_tables(shape_.nvars, shape_.order);
  }
  JetShape shape_{};
  int n_ = 1;
  std::array<double, kJetCap> c_;
};

// Public second-order jet of a scalar field at a point: value, gradient and
// (symmetric) Hessian in the manifold coordinates.
struct Jet2 {
  double value = 0.0;
  std::vector<double> gradient;
  std::vector<std::vector<double>> hessian;
};

}  // namespace rackoid
