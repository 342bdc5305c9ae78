#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rackoid {

struct RackoidError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DomainError : RackoidError {
  using RackoidError::RackoidError;
};
struct NoConvergence : RackoidError {
  using RackoidError::RackoidError;
};
struct SingularJacobian : RackoidError {
  using RackoidError::RackoidError;
};
struct FlowDiverged : RackoidError {
  using RackoidError::RackoidError;
};
struct SeriesNotDecaying : RackoidError {
  using RackoidError::RackoidError;
};
struct ConfigError : RackoidError {
  using RackoidError::RackoidError;
};

enum class Geometry { Torus, Chart };

using Point = std::vector<double>;

// Flat n-torus (single global chart, coordinates mod period) or an open box
// in R^n.  The torus is the default model; the chart exists for the
// symplectic pair-groupoid tests, which need a simply connected base.
class Manifold {
 public:
  static Manifold torus(int dim, double period = 2.0 * std::numbers::pi) {
    if (dim < 1) throw ConfigError("manifold dim must be >= 1");
    if (period <= 0.0) throw ConfigError("torus period must be positive");
    Manifold m;
    m.dim_ = dim;
    m.geo_ = Geometry::Torus;
    m.period_ = period;
    return m;
  }

  static Manifold chart(std::vector<std::pair<double, double>> box) {
    if (box.empty()) throw ConfigError("chart box must be nonempty");
    for (const auto& [lo, hi] : box)
      if (!(lo < hi)) throw ConfigError("chart box interval empty");
    Manifold m;
    m.dim_ = static_cast<int>(box.size());
    m.geo_ = Geometry::Chart;
    m.box_ = std::move(box);
    return m;
  }

  int dim() const { return dim_; }
  Geometry geometry() const { return geo_; }
  double period() const { return period_; }
  const std::vector<std::pair<double, double>>& box() const { return box_; }

  bool contains(const Point& p) const {
    if (static_cast<int>(p.size()) != dim_) return false;
    if (geo_ == Geometry::Chart) {
      for (int i = 0; i < dim_; ++i)
        if (p[i] < box_[i].first || p[i] > box_[i].second) return false;
    }
    return true;
  }

  void require_valid(const Point& p) const {
    if (static_cast<int>(p.size()) != dim_)
      throw DomainError("point has wrong dimension");
    if (!contains(p)) throw DomainError("chart point outside box");
  }

  // Canonical representative with torus coordinates in [0, period).
  Point reduce(Point p) const {
    if (geo_ == Geometry::Torus) {
      for (double& x : p) {
        x = std::fmod(x, period_);
        if (x < 0.0) x += period_;
      }
    }
    return p;
  }

  // Component difference a-b using the nearest torus image.
  std::vector<double> displacement(const Point& a, const Point& b) const {
    std::vector<double> d(dim_);
    for (int i = 0; i < dim_; ++i) {
      double v = a[i] - b[i];
      if (geo_ == Geometry::Torus) {
        v = std::fmod(v, period_);
        if (v > 0.5 * period_) v -= period_;
        if (v < -0.5 * period_) v += period_;
      }
      d[i] = v;
    }
    return d;
  }

  double distance(const Point& a, const Point& b) const {
    double m = 0.0;
    for (double v : displacement(a, b)) m = std::max(m, std::abs(v));
    return m;
  }

  // Length scale used by flow blow-up guards.
  double extent() const {
    if (geo_ == Geometry::Torus) return period_;
    double e = 0.0;
    for (const auto& [lo, hi] : box_) e = std::max(e, hi - lo);
    return e;
  }

  friend bool operator==(const Manifold& a, const Manifold& b) {
    return a.dim_ == b.dim_ && a.geo_ == b.geo_ && a.period_ == b.period_ &&
           a.box_ == b.box_;
  }

 private:
  int dim_ = 1;
  Geometry geo_ = Geometry::Torus;
  double period_ = 2.0 * std::numbers::pi;
  std::vector<std::pair<double, double>> box_;
};

inline double sup_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace rackoid
