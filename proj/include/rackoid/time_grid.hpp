#pragma once

#include <cmath>
#include <vector>

#include "rackoid/manifold.hpp"

namespace rackoid {

// Uniform grid on [0,1] with an even number of intervals (composite Simpson).
class TimeGrid {
 public:
  explicit TimeGrid(int n_intervals) : n_(n_intervals) {
    if (n_ < 2 || n_ % 2 != 0)
      throw ConfigError("time grid needs an even positive interval count");
  }

  int n() const { return n_; }
  double h() const { return 1.0 / n_; }
  double node(int j) const { return static_cast<double>(j) / n_; }
  std::vector<double> nodes() const {
    std::vector<double> t(n_ + 1);
    for (int j = 0; j <= n_; ++j) t[j] = node(j);
    return t;
  }

 private:
  int n_;
};

// Composite Simpson value of samples at the grid nodes.
inline double quadrature(const std::vector<double>& samples) {
  const int n = static_cast<int>(samples.size()) - 1;
  if (n < 2 || n % 2 != 0)
    throw ConfigError("quadrature needs samples at an even interval grid");
  const double h = 1.0 / n;
  double acc = samples[0] + samples[n];
  for (int j = 1; j < n; ++j) acc += samples[j] * (j % 2 == 1 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

template <typename F>
double quadrature_of(const F& f, const TimeGrid& g) {
  std::vector<double> s(g.n() + 1);
  for (int j = 0; j <= g.n(); ++j) s[j] = f(g.node(j));
  return quadrature(s);
}

// Least-squares slope of log(residual) against log(h).  Residuals at the
// rounding floor make the slope meaningless; callers flag that case.
inline double empirical_order(const std::vector<int>& ns,
                              const std::vector<double>& residuals) {
  const int m = static_cast<int>(ns.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < m; ++i) {
    const double x = std::log(1.0 / ns[i]);
    const double y = std::log(std::max(residuals[i], 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace rackoid
