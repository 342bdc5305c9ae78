#pragma once

// Deterministic random test objects.  Trig polynomials of degree <= 2 keep
// every generated field periodic on the torus; map perturbations are rescaled
// to a derivative budget so that id + P stays a diffeomorphism and Newton
// inversion from the target point always converges.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "rackoid/field.hpp"
#include "rackoid/forms.hpp"
#include "rackoid/manifold.hpp"
#include "rackoid/paths.hpp"

namespace rackoid {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // Portable uniform in [0,1): fixed mapping from the mt19937_64 stream.
  double unit() { return (eng_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * unit(); }
  int index(int n) { return static_cast<int>(eng_() % std::uint64_t(n)); }
  bool coin() { return (eng_() & 1u) != 0; }

 private:
  std::mt19937_64 eng_;
};

inline Rng make_trial_rng(std::uint64_t seed, std::uint64_t trial_id) {
  return Rng(seed ^ trial_id);
}

struct TrigTerm {
  std::vector<int> freq;  // integer frequency per coordinate, |freq|_1 <= 2
  double coeff = 0.0;
  double phase = 0.0;
  int degree() const {
    int d = 0;
    for (int f : freq) d += std::abs(f);
    return d;
  }
};

inline ScalarField term_field(const Manifold& mf, const TrigTerm& t) {
  ScalarField arg = ScalarField::constant(t.phase);
  for (int i = 0; i < mf.dim(); ++i)
    if (t.freq[i] != 0)
      arg = arg + ScalarField::coordinate(i) * double(t.freq[i]);
  return sin(arg) * t.coeff;
}

// Random trig polynomial of degree <= 2; coefficients uniform in
// [-amplitude, amplitude].  If deriv_budget > 0, coefficients are rescaled so
// that sum_k |c_k| * deg_k <= deriv_budget (a bound on every row sum of the
// gradient).
inline ScalarField random_trig_field(const Manifold& mf, Rng& rng,
                                     double amplitude, int nterms = 2,
                                     double deriv_budget = -1.0,
                                     bool with_constant = true) {
  std::vector<TrigTerm> terms;
  double budget_used = 0.0;
  for (int k = 0; k < nterms; ++k) {
    TrigTerm t;
    t.freq.assign(mf.dim(), 0);
    const int kind = rng.index(mf.dim() > 1 ? 3 : 2);
    if (kind == 0) {
      t.freq[rng.index(mf.dim())] = 1;
    } else if (kind == 1) {
      t.freq[rng.index(mf.dim())] = 2;
    } else {
      int i = rng.index(mf.dim());
      int j = rng.index(mf.dim());
      while (j == i) j = rng.index(mf.dim());
      t.freq[i] = 1;
      t.freq[j] = rng.coin() ? 1 : -1;
    }
    t.coeff = rng.uniform(-amplitude, amplitude);
    t.phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    budget_used += std::abs(t.coeff) * t.degree();
    terms.push_back(t);
  }
  double scale = 1.0;
  if (deriv_budget > 0.0 && budget_used > deriv_budget)
    scale = deriv_budget / budget_used;
  ScalarField f = ScalarField::constant(
      with_constant ? rng.uniform(-amplitude, amplitude) : 0.0);
  for (const auto& t : terms) f = f + term_field(mf, t) * scale;
  return f;
}

inline KForm random_one_form(const Manifold& mf, Rng& rng, double amplitude) {
  KForm w(mf, 1);
  for (int i = 0; i < mf.dim(); ++i)
    w.coeff(i) = random_trig_field(mf, rng, amplitude);
  return w;
}

inline KForm random_two_form(const Manifold& mf, Rng& rng, double amplitude) {
  KForm w(mf, 2);
  for (int i = 0; i < w.coefficient_count(); ++i)
    w.coeff(i) = random_trig_field(mf, rng, amplitude);
  return w;
}

inline VectorField random_vector_field(const Manifold& mf, Rng& rng,
                                       double amplitude,
                                       double deriv_budget = -1.0) {
  std::vector<ScalarField> c(mf.dim());
  for (int i = 0; i < mf.dim(); ++i)
    c[i] = random_trig_field(mf, rng, amplitude, 2, deriv_budget);
  return VectorField(mf, std::move(c));
}

// Near-identity diffeomorphism x + P(x).  The perturbation keeps
// sum_j |dP_i/dx_j| <= budget < 1 per component, so I + DP is invertible and
// the fixed-point warm start of Newton inversion contracts.
inline SmoothMap random_map_near_identity(const Manifold& mf, Rng& rng,
                                          double amplitude,
                                          double budget = 0.55) {
  std::vector<ScalarField> comps(mf.dim());
  for (int i = 0; i < mf.dim(); ++i)
    comps[i] = ScalarField::coordinate(i) +
               random_trig_field(mf, rng, amplitude, 2, budget, false);
  return SmoothMap(mf, std::move(comps), true);
}

// Time profile sigma(s) with sigma(0) = 0: a cubic with bounded sup norm.
inline ScalarField random_zero_at_zero_profile(Rng& rng) {
  ScalarField t = ScalarField::parameter(kTime);
  const double a = rng.uniform(-1.0, 1.0);
  const double b = rng.uniform(-0.5, 0.5);
  const double c = rng.uniform(-0.3, 0.3);
  const double n = std::abs(a) + std::abs(b) + std::abs(c);
  const double s = n > 1.0 ? 1.0 / n : 1.0;
  return t * (a * s) + t * t * (b * s) + t * t * t * (c * s);
}

// Plain cubic time profile (used for covector families).
inline ScalarField random_cubic_profile(Rng& rng) {
  ScalarField t = ScalarField::parameter(kTime);
  return ScalarField::constant(rng.uniform(-1.0, 1.0)) +
         t * rng.uniform(-1.0, 1.0) + t * t * rng.uniform(-0.7, 0.7) +
         t * t * t * rng.uniform(-0.4, 0.4);
}

// Closed-form isotopy phi_s = x + sigma_1(s) P_1 + sigma_2(s) P_2 with
// combined derivative budget below 1.
inline Isotopy random_isotopy(const Manifold& mf, Rng& rng, double amplitude,
                              double budget = 0.5) {
  std::vector<ScalarField> comps(mf.dim());
  ScalarField s1 = random_zero_at_zero_profile(rng);
  ScalarField s2 = random_zero_at_zero_profile(rng);
  for (int i = 0; i < mf.dim(); ++i) {
    ScalarField p1 =
        random_trig_field(mf, rng, amplitude, 2, budget / 2, false);
    ScalarField p2 =
        random_trig_field(mf, rng, amplitude, 2, budget / 2, false);
    comps[i] = ScalarField::coordinate(i) + s1 * p1 + s2 * p2;
  }
  return Isotopy::closed_form(mf, std::move(comps));
}

// Halfway-pullback family built from cubic and full-period trig profiles, so
// that its Simpson quadratures carry no discretization error.
inline std::vector<ScalarField> random_eta_family(const Manifold& mf, Rng& rng,
                                                  double amplitude) {
  ScalarField t = ScalarField::parameter(kTime);
  std::vector<ScalarField> eta(mf.dim());
  ScalarField ctrig = cos(t * (2.0 * std::numbers::pi));
  for (int j = 0; j < mf.dim(); ++j) {
    ScalarField p = random_cubic_profile(rng);
    eta[j] = p * random_trig_field(mf, rng, amplitude) +
             ctrig * random_trig_field(mf, rng, amplitude);
  }
  return eta;
}

inline Bisection random_bisection(const Manifold& mf, Rng& rng,
                                  double amplitude) {
  return Bisection(random_isotopy(mf, rng, amplitude),
                   random_eta_family(mf, rng, amplitude));
}

inline Point random_point(const Manifold& mf, Rng& rng) {
  Point p(mf.dim());
  if (mf.geometry() == Geometry::Torus) {
    for (int i = 0; i < mf.dim(); ++i) p[i] = rng.uniform(0.0, mf.period());
  } else {
    for (int i = 0; i < mf.dim(); ++i) {
      const auto& [lo, hi] = mf.box()[i];
      const double margin = 0.25 * (hi - lo);
      p[i] = rng.uniform(lo + margin, hi - margin);
    }
  }
  return p;
}

inline CotangentPath random_cotangent_path(const Manifold& mf, Rng& rng,
                                           double amplitude) {
  Point m = random_point(mf, rng);
  ScalarField t = ScalarField::parameter(kTime);
  std::vector<ScalarField> gamma(mf.dim()), theta(mf.dim());
  for (int i = 0; i < mf.dim(); ++i) {
    gamma[i] = ScalarField::constant(m[i]) +
               t * rng.uniform(-amplitude, amplitude) +
               t * t * rng.uniform(-amplitude, amplitude) +
               t * t * t * rng.uniform(-amplitude, amplitude);
    theta[i] = random_cubic_profile(rng) * amplitude;
  }
  return CotangentPath(mf, std::move(gamma), std::move(theta));
}

// Random element of the section space: X_t vanishes at t = 0 by
// construction; alpha uses quadrature-exact profiles.
inline GeneralizedSection random_generalized_section(const Manifold& mf,
                                                     Rng& rng,
                                                     double amplitude) {
  ScalarField t = ScalarField::parameter(kTime);
  std::vector<ScalarField> xc(mf.dim());
  ScalarField s1 = random_zero_at_zero_profile(rng);
  ScalarField s2 = random_zero_at_zero_profile(rng);
  for (int i = 0; i < mf.dim(); ++i)
    xc[i] = s1 * random_trig_field(mf, rng, amplitude) +
            s2 * random_trig_field(mf, rng, amplitude);
  KForm alpha(mf, 1);
  for (int j = 0; j < mf.dim(); ++j)
    alpha.coeff(j) = random_cubic_profile(rng) *
                     random_trig_field(mf, rng, amplitude);
  return GeneralizedSection(VectorField(mf, std::move(xc)), alpha);
}

// Generator of the ideal: X_1 = 0 and integral of alpha = 0, both exact
// under Simpson quadrature (t(1-t) profile; centered linear and full-period
// cosine profiles).
inline GeneralizedSection random_ideal_generator(const Manifold& mf, Rng& rng,
                                                 double amplitude) {
  ScalarField t = ScalarField::parameter(kTime);
  ScalarField bump = t * (ScalarField::constant(1.0) - t);
  std::vector<ScalarField> xc(mf.dim());
  for (int i = 0; i < mf.dim(); ++i)
    xc[i] = bump * random_trig_field(mf, rng, amplitude);
  KForm alpha(mf, 1);
  ScalarField lin = t - 0.5;
  ScalarField ctrig = cos(t * (2.0 * std::numbers::pi));
  for (int j = 0; j < mf.dim(); ++j)
    alpha.coeff(j) = lin * random_trig_field(mf, rng, amplitude) +
                     ctrig * random_trig_field(mf, rng, amplitude);
  return GeneralizedSection(VectorField(mf, std::move(xc)), alpha);
}

// Fixed (t, point) sample lattice shared by all residual metrics: 8 uniform
// times and 32 points from a dedicated seed, so reports are comparable
// across trials and runs.
struct SampleLattice {
  std::vector<double> times;
  std::vector<Point> points;

  static SampleLattice standard(const Manifold& mf, int npoints = 32,
                                int ntimes = 8) {
    SampleLattice lat;
    for (int i = 0; i < ntimes; ++i)
      lat.times.push_back(double(i) / (ntimes - 1));
    Rng rng(0x524b4c41545431ull);  // fixed lattice seed
    for (int i = 0; i < npoints; ++i) lat.points.push_back(random_point(mf, rng));
    return lat;
  }
};

}  // namespace rackoid
