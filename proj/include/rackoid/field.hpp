#pragma once

// Scalar fields as lazily evaluated computation DAGs over the manifold
// coordinates and a small set of scalar parameters (path time, family
// parameter).  Every node evaluates to a Jet, so any mixed derivative up to
// total order 3 is available by evaluating under a suitable context; spatial
// and parameter derivatives are taken by re-running a subtree in a context
// with one more active variable and slicing the result.
//
// Besides ordinary expression nodes there are computational nodes: Simpson
// quadrature in a parameter, Newton-backed components of an inverse
// diffeomorphism, RK4 flow maps of a time-dependent vector field, and
// centered finite differences in a parameter (for flow-generated isotopies,
// which have no closed form in time).

#include <cmath>
#include <cstring>
#include <map>
#include <memory>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rackoid/jet.hpp"
#include "rackoid/manifold.hpp"

namespace rackoid {

// Parameter ids.  kTime serves both as path time t and bisection time s
// (they never occur unintegrated in the same formula); kEps is the family
// parameter of Section-5-style bisection families.
inline constexpr int kTime = 0;
inline constexpr int kEps = 1;
inline constexpr int kAux = 2;

inline constexpr int kParamKeyBase = 64;
inline constexpr int kFormalKeyBase = 128;
inline int coord_key(int i) { return i; }
inline int param_key(int pid) { return kParamKeyBase + pid; }

// How the coordinates of a context can be differentiated: kCoordsAreVars
// when the coordinate keys themselves are seeded jet variables (root
// contexts), kCoordsOpaque after composition replaced them by expressions in
// outer variables, or a formal-generation base >= kFormalKeyBase once a
// spatial augmentation has attached fresh perturbation directions.
inline constexpr int kCoordsAreVars = -1;
inline constexpr int kCoordsOpaque = -2;

class Node;
using NodePtr = std::shared_ptr<const Node>;

struct DerivedKey {
  int kind = 0;  // 0 = spatial augmentation, 1 = param augmentation, 2 = bind
  int pid = 0;
  std::uint64_t bits = 0;
  friend bool operator<(const DerivedKey& a, const DerivedKey& b) {
    if (a.kind != b.kind) return a.kind < b.kind;
    if (a.pid != b.pid) return a.pid < b.pid;
    return a.bits < b.bits;
  }
};

class EvalContext {
 public:
  int dim = 0;
  std::vector<int> vars;  // active variable keys, ordered
  int order = 0;
  std::vector<Jet> coords;
  std::map<int, Jet> params;  // pid -> jet (bound constant or seeded variable)
  int spatial_mode = kCoordsAreVars;

  JetShape shape() const { return {static_cast<int>(vars.size()), order}; }

  // Variable key along which d/d(coordinate i) is read after augmentation.
  int spatial_diff_key(int i) const {
    return spatial_mode >= 0 ? spatial_mode + i : coord_key(i);
  }

  int slot_of(int key) const {
    for (int s = 0; s < static_cast<int>(vars.size()); ++s)
      if (vars[s] == key) return s;
    return -1;
  }

  Jet eval(const NodePtr& n);
  Jet eval(const Node* n);

  // Context with every coordinate active as a jet variable and order + 1.
  EvalContext& augmented_spatial();
  // Context with parameter pid (re)seeded as a jet variable and order + 1.
  EvalContext& augmented_param(int pid);
  // Context with parameter pid bound to the constant v.
  EvalContext& bound_param(int pid, double v);
  // Fresh context with the coordinates replaced (composition).
  EvalContext with_coords(std::vector<Jet> new_coords) const;

  std::unordered_map<const void*, std::vector<Jet>> vec_memo;

 private:
  friend EvalContext make_root_context(int, const Point&,
                                       const std::map<int, double>&,
                                       const std::vector<int>&, bool, int);
  std::unordered_map<const void*, Jet> memo_;
  std::map<DerivedKey, std::unique_ptr<EvalContext>> derived_;

  // Remap a jet from this context's variable list into `to`'s.
  Jet lift(const Jet& j, const EvalContext& to) const {
    std::array<int, kJetMaxVars> m{};
    for (int s = 0; s < static_cast<int>(vars.size()); ++s)
      m[s] = to.slot_of(vars[s]);
    return j.remap(m.data(), to.shape());
  }
  Jet restrict_to(const Jet& j, const EvalContext& to) const { return lift(j, to); }
};

class Node {
 public:
  virtual ~Node() = default;
  virtual Jet eval(EvalContext& ctx) const = 0;
};

inline Jet EvalContext::eval(const Node* n) {
  auto it = memo_.find(n);
  if (it != memo_.end()) return it->second;
  Jet r = n->eval(*this);
  memo_.emplace(n, r);
  return r;
}
inline Jet EvalContext::eval(const NodePtr& n) { return eval(n.get()); }

inline EvalContext& EvalContext::augmented_spatial() {
  DerivedKey key{0, 0, 0};
  auto it = derived_.find(key);
  if (it != derived_.end()) return *it->second;
  auto up = std::make_unique<EvalContext>();
  EvalContext& c = *up;
  c.dim = dim;
  c.vars = vars;
  c.order = order + 1;
  std::vector<int> seed_slots(dim, -1);
  if (spatial_mode == kCoordsAreVars) {
    for (int i = 0; i < dim; ++i)
      if (slot_of(coord_key(i)) < 0) {
        c.vars.push_back(coord_key(i));
        seed_slots[i] = static_cast<int>(c.vars.size()) - 1;
      }
    c.spatial_mode = kCoordsAreVars;
  } else if (spatial_mode == kCoordsOpaque) {
    int base = kFormalKeyBase;
    for (bool taken = true; taken; ) {
      taken = false;
      for (int v : vars)
        if (v >= base && v < base + 8) {
          taken = true;
          base += 8;
          break;
        }
    }
    for (int i = 0; i < dim; ++i) {
      c.vars.push_back(base + i);
      seed_slots[i] = static_cast<int>(c.vars.size()) - 1;
    }
    c.spatial_mode = base;
  } else {
    c.spatial_mode = spatial_mode;  // formal directions already attached
  }
  c.coords.reserve(dim);
  for (int i = 0; i < dim; ++i) {
    Jet j = lift(coords[i], c);
    if (seed_slots[i] >= 0)
      j = j + Jet::variable(0.0, seed_slots[i], c.shape());
    c.coords.push_back(j);
  }
  for (const auto& [pid, pj] : params) c.params.emplace(pid, lift(pj, c));
  derived_.emplace(key, std::move(up));
  return c;
}

inline EvalContext& EvalContext::augmented_param(int pid) {
  DerivedKey key{1, pid, 0};
  auto it = derived_.find(key);
  if (it != derived_.end()) return *it->second;
  auto pit = params.find(pid);
  if (pit == params.end())
    throw RackoidError("derivative in an unbound parameter");
  auto up = std::make_unique<EvalContext>();
  EvalContext& c = *up;
  c.dim = dim;
  c.vars = vars;
  c.spatial_mode = spatial_mode;
  if (slot_of(param_key(pid)) < 0) c.vars.push_back(param_key(pid));
  c.order = order + 1;
  c.coords.reserve(dim);
  for (int i = 0; i < dim; ++i) c.coords.push_back(lift(coords[i], c));
  for (const auto& [q, pj] : params) c.params.emplace(q, lift(pj, c));
  c.params[pid] =
      Jet::variable(pit->second.value(), c.slot_of(param_key(pid)), c.shape());
  derived_.emplace(key, std::move(up));
  return c;
}

inline EvalContext& EvalContext::bound_param(int pid, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof bits);
  DerivedKey key{2, pid, bits};
  auto it = derived_.find(key);
  if (it != derived_.end()) return *it->second;
  auto up = std::make_unique<EvalContext>();
  EvalContext& c = *up;
  c.dim = dim;
  c.vars = vars;
  c.spatial_mode = spatial_mode;
  c.order = order;
  c.coords = coords;
  c.params = params;
  c.params[pid] = Jet::constant(v, c.shape());
  derived_.emplace(key, std::move(up));
  return c;
}

inline EvalContext EvalContext::with_coords(std::vector<Jet> new_coords) const {
  EvalContext c;
  c.dim = static_cast<int>(new_coords.size());
  c.vars = vars;
  c.spatial_mode = kCoordsOpaque;
  c.order = order;
  c.coords = std::move(new_coords);
  c.params = params;
  return c;
}

inline EvalContext make_root_context(int dim, const Point& x,
                                     const std::map<int, double>& params,
                                     const std::vector<int>& active_params,
                                     bool spatial, int order) {
  EvalContext c;
  c.dim = dim;
  if (spatial)
    for (int i = 0; i < dim; ++i) c.vars.push_back(coord_key(i));
  for (int pid : active_params) c.vars.push_back(param_key(pid));
  c.order = order;
  const JetShape sh = c.shape();
  for (int i = 0; i < dim; ++i) {
    double v = i < static_cast<int>(x.size()) ? x[i] : 0.0;
    c.coords.push_back(spatial ? Jet::variable(v, c.slot_of(coord_key(i)), sh)
                               : Jet::constant(v, sh));
  }
  for (const auto& [pid, v] : params) {
    const int s = c.slot_of(param_key(pid));
    c.params.emplace(pid, s >= 0 ? Jet::variable(v, s, sh)
                                 : Jet::constant(v, sh));
  }
  return c;
}

// ---------------------------------------------------------------------------
// Expression nodes

class ConstNode final : public Node {
 public:
  explicit ConstNode(double v) : v_(v) {}
  Jet eval(EvalContext& ctx) const override {
    return Jet::constant(v_, ctx.shape());
  }
  double value() const { return v_; }

 private:
  double v_;
};

class CoordNode final : public Node {
 public:
  explicit CoordNode(int i) : i_(i) {}
  Jet eval(EvalContext& ctx) const override {
    if (i_ >= static_cast<int>(ctx.coords.size()))
      throw RackoidError("coordinate index out of range for context");
    return ctx.coords[i_];
  }

 private:
  int i_;
};

class ParamNode final : public Node {
 public:
  explicit ParamNode(int pid) : pid_(pid) {}
  Jet eval(EvalContext& ctx) const override {
    auto it = ctx.params.find(pid_);
    if (it == ctx.params.end()) throw RackoidError("unbound parameter");
    return it->second;
  }

 private:
  int pid_;
};

class AddNode final : public Node {
 public:
  AddNode(NodePtr a, NodePtr b) : a_(std::move(a)), b_(std::move(b)) {}
  Jet eval(EvalContext& ctx) const override {
    return ctx.eval(a_) + ctx.eval(b_);
  }

 private:
  NodePtr a_, b_;
};

class SubNode final : public Node {
 public:
  SubNode(NodePtr a, NodePtr b) : a_(std::move(a)), b_(std::move(b)) {}
  Jet eval(EvalContext& ctx) const override {
    return ctx.eval(a_) - ctx.eval(b_);
  }

 private:
  NodePtr a_, b_;
};

class MulNode final : public Node {
 public:
  MulNode(NodePtr a, NodePtr b) : a_(std::move(a)), b_(std::move(b)) {}
  Jet eval(EvalContext& ctx) const override {
    return ctx.eval(a_) * ctx.eval(b_);
  }

 private:
  NodePtr a_, b_;
};

class DivNode final : public Node {
 public:
  DivNode(NodePtr a, NodePtr b) : a_(std::move(a)), b_(std::move(b)) {}
  Jet eval(EvalContext& ctx) const override {
    return ctx.eval(a_) / ctx.eval(b_);
  }

 private:
  NodePtr a_, b_;
};

class NegNode final : public Node {
 public:
  explicit NegNode(NodePtr a) : a_(std::move(a)) {}
  Jet eval(EvalContext& ctx) const override { return -ctx.eval(a_); }

 private:
  NodePtr a_;
};

class SinNode final : public Node {
 public:
  explicit SinNode(NodePtr a) : a_(std::move(a)) {}
  Jet eval(EvalContext& ctx) const override { return sin(ctx.eval(a_)); }

 private:
  NodePtr a_;
};

class CosNode final : public Node {
 public:
  explicit CosNode(NodePtr a) : a_(std::move(a)) {}
  Jet eval(EvalContext& ctx) const override { return cos(ctx.eval(a_)); }

 private:
  NodePtr a_;
};

class ExpNode final : public Node {
 public:
  explicit ExpNode(NodePtr a) : a_(std::move(a)) {}
  Jet eval(EvalContext& ctx) const override { return exp(ctx.eval(a_)); }

 private:
  NodePtr a_;
};

// outer(g_1(x,p), ..., g_m(x,p), p): coordinates replaced, parameters pass
// through untouched.
class ComposeNode final : public Node {
 public:
  ComposeNode(NodePtr outer, std::vector<NodePtr> inners)
      : outer_(std::move(outer)), inners_(std::move(inners)) {}
  Jet eval(EvalContext& ctx) const override {
    std::vector<Jet> v;
    v.reserve(inners_.size());
    for (const auto& g : inners_) v.push_back(ctx.eval(g));
    EvalContext sub = ctx.with_coords(std::move(v));
    return sub.eval(outer_);
  }

 private:
  NodePtr outer_;
  std::vector<NodePtr> inners_;
};

class DerivCoordNode final : public Node {
 public:
  DerivCoordNode(NodePtr f, int i) : f_(std::move(f)), i_(i) {}
  Jet eval(EvalContext& ctx) const override {
    EvalContext& a = ctx.augmented_spatial();
    Jet v = a.eval(f_);
    Jet d = v.deriv_slice(a.slot_of(a.spatial_diff_key(i_)));
    std::array<int, kJetMaxVars> m{};
    for (int s = 0; s < static_cast<int>(a.vars.size()); ++s)
      m[s] = ctx.slot_of(a.vars[s]);
    return d.remap(m.data(), ctx.shape());
  }

 private:
  NodePtr f_;
  int i_;
};

class DerivParamNode final : public Node {
 public:
  DerivParamNode(NodePtr f, int pid) : f_(std::move(f)), pid_(pid) {}
  Jet eval(EvalContext& ctx) const override {
    EvalContext& a = ctx.augmented_param(pid_);
    Jet v = a.eval(f_);
    Jet d = v.deriv_slice(a.slot_of(param_key(pid_)));
    std::array<int, kJetMaxVars> m{};
    for (int s = 0; s < static_cast<int>(a.vars.size()); ++s)
      m[s] = ctx.slot_of(a.vars[s]);
    return d.remap(m.data(), ctx.shape());
  }

 private:
  NodePtr f_;
  int pid_;
};

class BindParamNode final : public Node {
 public:
  BindParamNode(NodePtr f, int pid, double v)
      : f_(std::move(f)), pid_(pid), v_(v) {}
  Jet eval(EvalContext& ctx) const override {
    return ctx.bound_param(pid_, v_).eval(f_);
  }

 private:
  NodePtr f_;
  int pid_;
  double v_;
};

// Composite Simpson quadrature of f over pid in [0,1]; n subintervals, n even.
class QuadratureNode final : public Node {
 public:
  QuadratureNode(NodePtr f, int pid, int n)
      : f_(std::move(f)), pid_(pid), n_(n) {
    if (n_ < 2 || n_ % 2 != 0)
      throw ConfigError("Simpson quadrature needs an even interval count");
  }
  Jet eval(EvalContext& ctx) const override {
    const double h = 1.0 / n_;
    Jet acc = Jet::constant(0.0, ctx.shape());
    for (int j = 0; j <= n_; ++j) {
      const double w = (j == 0 || j == n_) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
      acc += ctx.bound_param(pid_, j * h).eval(f_) * (w * h / 3.0);
    }
    return acc;
  }

 private:
  NodePtr f_;
  int pid_;
  int n_;
};

// Piecewise polynomial in one parameter (used for quadrature-exact cutoff
// bumps).  coeffs[i] are the polynomial coefficients on
// [breaks[i], breaks[i+1]) in the local variable u - breaks[i]; zero outside.
class PiecewisePolyNode final : public Node {
 public:
  PiecewisePolyNode(int pid, std::vector<double> breaks,
                    std::vector<std::vector<double>> coeffs)
      : pid_(pid), breaks_(std::move(breaks)), coeffs_(std::move(coeffs)) {}
  Jet eval(EvalContext& ctx) const override {
    auto it = ctx.params.find(pid_);
    if (it == ctx.params.end()) throw RackoidError("unbound parameter");
    const Jet& u = it->second;
    const double t = u.value();
    int piece = -1;
    for (size_t i = 0; i + 1 < breaks_.size(); ++i)
      if (t >= breaks_[i] && t < breaks_[i + 1]) piece = static_cast<int>(i);
    if (t == breaks_.back()) piece = static_cast<int>(breaks_.size()) - 2;
    if (piece < 0) return Jet::constant(0.0, ctx.shape());
    Jet loc = u - breaks_[piece];
    const auto& c = coeffs_[piece];
    Jet r = Jet::constant(c.empty() ? 0.0 : c.back(), ctx.shape());
    for (int k = static_cast<int>(c.size()) - 2; k >= 0; --k)
      r = r * loc + c[k];
    return r;
  }

 private:
  int pid_;
  std::vector<double> breaks_;
  std::vector<std::vector<double>> coeffs_;
};

// Centered O(h^2) finite difference in a parameter, restricted to [0,1];
// one-sided three-point stencils at the ends.
class FDParamNode final : public Node {
 public:
  FDParamNode(NodePtr f, int pid, double h)
      : f_(std::move(f)), pid_(pid), h_(h) {}
  Jet eval(EvalContext& ctx) const override {
    auto it = ctx.params.find(pid_);
    if (it == ctx.params.end()) throw RackoidError("unbound parameter");
    if (!it->second.is_numerically_constant())
      throw RackoidError("finite-difference parameter must be bound");
    const double t = it->second.value();
    auto at = [&](double v) { return ctx.bound_param(pid_, v).eval(f_); };
    if (t - h_ >= 0.0 && t + h_ <= 1.0)
      return (at(t + h_) - at(t - h_)) * (0.5 / h_);
    if (t - h_ < 0.0)
      return (at(t) * (-3.0) + at(t + h_) * 4.0 - at(t + 2 * h_)) * (0.5 / h_);
    return (at(t) * 3.0 - at(t - h_) * 4.0 + at(t - 2 * h_)) * (0.5 / h_);
  }

 private:
  NodePtr f_;
  int pid_;
  double h_;
};

// ---------------------------------------------------------------------------
// ScalarField wrapper and builders

class ScalarField {
 public:
  ScalarField() : n_(std::make_shared<ConstNode>(0.0)) {}
  explicit ScalarField(NodePtr n) : n_(std::move(n)) {}

  static ScalarField constant(double v) {
    return ScalarField(std::make_shared<ConstNode>(v));
  }
  static ScalarField coordinate(int i) {
    return ScalarField(std::make_shared<CoordNode>(i));
  }
  static ScalarField parameter(int pid) {
    return ScalarField(std::make_shared<ParamNode>(pid));
  }

  const NodePtr& node() const { return n_; }

  bool is_const(double* out = nullptr) const {
    if (auto c = dynamic_cast<const ConstNode*>(n_.get())) {
      if (out) *out = c->value();
      return true;
    }
    return false;
  }
  bool is_zero() const {
    double v;
    return is_const(&v) && v == 0.0;
  }

 private:
  NodePtr n_;
};

inline ScalarField operator+(const ScalarField& a, const ScalarField& b) {
  double ca, cb;
  if (a.is_const(&ca) && b.is_const(&cb)) return ScalarField::constant(ca + cb);
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  return ScalarField(std::make_shared<AddNode>(a.node(), b.node()));
}
inline ScalarField operator-(const ScalarField& a) {
  double c;
  if (a.is_const(&c)) return ScalarField::constant(-c);
  return ScalarField(std::make_shared<NegNode>(a.node()));
}
inline ScalarField operator-(const ScalarField& a, const ScalarField& b) {
  double ca, cb;
  if (a.is_const(&ca) && b.is_const(&cb)) return ScalarField::constant(ca - cb);
  if (b.is_zero()) return a;
  if (a.is_zero()) return -b;
  return ScalarField(std::make_shared<SubNode>(a.node(), b.node()));
}
inline ScalarField operator*(const ScalarField& a, const ScalarField& b) {
  double ca, cb;
  if (a.is_const(&ca) && b.is_const(&cb)) return ScalarField::constant(ca * cb);
  if (a.is_zero() || b.is_zero()) return ScalarField::constant(0.0);
  if (a.is_const(&ca) && ca == 1.0) return b;
  if (b.is_const(&cb) && cb == 1.0) return a;
  return ScalarField(std::make_shared<MulNode>(a.node(), b.node()));
}
inline ScalarField operator/(const ScalarField& a, const ScalarField& b) {
  if (a.is_zero()) return a;
  double cb;
  if (b.is_const(&cb)) return a * ScalarField::constant(1.0 / cb);
  return ScalarField(std::make_shared<DivNode>(a.node(), b.node()));
}
inline ScalarField operator*(const ScalarField& a, double s) {
  return a * ScalarField::constant(s);
}
inline ScalarField operator*(double s, const ScalarField& a) {
  return a * ScalarField::constant(s);
}
inline ScalarField operator+(const ScalarField& a, double s) {
  return a + ScalarField::constant(s);
}
inline ScalarField operator-(const ScalarField& a, double s) {
  return a - ScalarField::constant(s);
}

inline ScalarField sin(const ScalarField& a) {
  double c;
  if (a.is_const(&c)) return ScalarField::constant(std::sin(c));
  return ScalarField(std::make_shared<SinNode>(a.node()));
}
inline ScalarField cos(const ScalarField& a) {
  double c;
  if (a.is_const(&c)) return ScalarField::constant(std::cos(c));
  return ScalarField(std::make_shared<CosNode>(a.node()));
}
inline ScalarField exp(const ScalarField& a) {
  double c;
  if (a.is_const(&c)) return ScalarField::constant(std::exp(c));
  return ScalarField(std::make_shared<ExpNode>(a.node()));
}

inline ScalarField d_coord(const ScalarField& f, int i) {
  if (f.is_const()) return ScalarField::constant(0.0);
  return ScalarField(std::make_shared<DerivCoordNode>(f.node(), i));
}
inline ScalarField d_param(const ScalarField& f, int pid) {
  if (f.is_const()) return ScalarField::constant(0.0);
  return ScalarField(std::make_shared<DerivParamNode>(f.node(), pid));
}
inline ScalarField bind(const ScalarField& f, int pid, double v) {
  if (f.is_const()) return f;
  return ScalarField(std::make_shared<BindParamNode>(f.node(), pid, v));
}
inline ScalarField quadrature_field(const ScalarField& f, int pid, int n) {
  double c;
  if (f.is_const(&c)) return ScalarField::constant(c);
  return ScalarField(std::make_shared<QuadratureNode>(f.node(), pid, n));
}
inline ScalarField compose(const ScalarField& outer,
                           const std::vector<ScalarField>& inner) {
  if (outer.is_const()) return outer;
  std::vector<NodePtr> nodes;
  nodes.reserve(inner.size());
  for (const auto& g : inner) nodes.push_back(g.node());
  return ScalarField(std::make_shared<ComposeNode>(outer.node(), nodes));
}
inline ScalarField fd_param(const ScalarField& f, int pid, double h) {
  if (f.is_const()) return ScalarField::constant(0.0);
  return ScalarField(std::make_shared<FDParamNode>(f.node(), pid, h));
}

// ---------------------------------------------------------------------------
// Evaluation entry points

struct EvalPoint {
  Point x;
  std::map<int, double> params;
};

inline EvalContext make_context(const Manifold& mf, const EvalPoint& at,
                                bool spatial, std::vector<int> active_params,
                                int order) {
  return make_root_context(mf.dim(), at.x, at.params, active_params, spatial,
                           order);
}

inline double eval_value(const ScalarField& f, const Manifold& mf,
                         const EvalPoint& at) {
  mf.require_valid(at.x);
  EvalContext c = make_context(mf, at, false, {}, 0);
  return c.eval(f.node()).value();
}

inline Jet2 eval_jet2(const ScalarField& f, const Manifold& mf, const Point& x,
                      const std::map<int, double>& params = {}) {
  mf.require_valid(x);
  EvalContext c = make_context(mf, {x, params}, true, {}, 2);
  Jet j = c.eval(f.node());
  Jet2 out;
  out.value = j.value();
  out.gradient.resize(mf.dim());
  out.hessian.assign(mf.dim(), std::vector<double>(mf.dim(), 0.0));
  for (int i = 0; i < mf.dim(); ++i) {
    out.gradient[i] = j.deriv1(i);
    for (int k = 0; k < mf.dim(); ++k) out.hessian[i][k] = j.deriv2(i, k);
  }
  return out;
}

}  // namespace rackoid
