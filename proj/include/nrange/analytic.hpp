// SPDX-License-Identifier: Apache-2.0
//
// Closed-form volumes, bounds and special functions: the elliptic-integral
// volume formulas for locally traceless two-qubit product pairs, dimension
// bounds, tail-probability bounds, projection bounds and the named
// benchmark instances.
#ifndef NRANGE_ANALYTIC_HPP
#define NRANGE_ANALYTIC_HPP

#include <string>
#include <vector>

#include "nrange/qlinalg.hpp"

namespace nrange::analytic {

using qlinalg::DimensionProfile;
using qlinalg::ObservableSet;

// Complete elliptic integrals in the parameter convention
// K(m) = int_0^{pi/2} dt / sqrt(1 - m sin^2 t). AGM iteration to 1e-14.
double elliptic_K(double m);  // 0 <= m < 1
double elliptic_E(double m);  // 0 <= m <= 1

struct ProductAngles {
  double theta_a = 0.0;  // in [0, pi]
  double theta_b = 0.0;  // in [0, pi]

  ProductAngles(double a, double b);
  double theta_minus() const { return theta_a - theta_b; }
  double theta_plus() const { return theta_a + theta_b; }
};

// A_1 = X ox X, A_2 = (cos a X + sin a Z) ox (cos b X + sin b Z).
ObservableSet product_pair_observables(const ProductAngles& angles);

// Area of the separable numerical range (a Minkowski sum of two ellipses).
// Degenerate angle configurations fall back to direct support-function
// quadrature of the same body.
double sep_volume_product_2q(const ProductAngles& angles);

// Area of the joint numerical range (convex hull of two ellipses).
double all_volume_product_2q(const ProductAngles& angles);

double ratio_product_2q(const ProductAngles& angles);

enum class BoundFormula {
  general_eps_ball,
  bipartite_equal_dims,
  projection_2d,
  projection_conjecture,
};

struct BoundReport {
  double value = 0.0;
  BoundFormula formula = BoundFormula::general_eps_ball;
};

// Lower bound on the separable-to-full volume ratio for k observables on
// the given multipartite profile.
BoundReport theorem3_bound(const DimensionProfile& profile, int k);

// Failure probability that any of the k estimator deviations exceeds t_j,
// for m shots per observable and spectral widths w_j.
double hoeffding_bound(int shots, const std::vector<double>& t,
                       const std::vector<double>& widths);

// Worst-case ratio of 1-d shadows of nested convex bodies in R^2.
double projection_bound_2d(double ratio);

// Root of ratio = c [1 + (k-1)(1 - c^{1/(k-1)})], bisection to 1e-12.
double projection_bound_conjecture(double ratio, int k);

struct NamedInstance {
  std::string name;
  ObservableSet observables;
  double expected_ratio = 0.0;
  bool numeric_supported = true;  // false for the k=4 instance
};

std::vector<NamedInstance> named_instances();

struct RevolutionRatios {
  double ratio_3obs = 0.0;  // cones glued in a cylinder
  double ratio_4obs = 0.0;  // four-dimensional solid of revolution
};

RevolutionRatios solids_of_revolution_ratios();

}  // namespace nrange::analytic

#endif
