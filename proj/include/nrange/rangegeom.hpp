// SPDX-License-Identifier: Apache-2.0
//
// Convex-geometry engine: direction grids, support-function driven
// inner/outer approximation of numerical-range bodies in R^k (k <= 3) and
// certified volume brackets.
#ifndef NRANGE_RANGEGEOM_HPP
#define NRANGE_RANGEGEOM_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "nrange/parallel.hpp"
#include "nrange/qlinalg.hpp"

namespace nrange::rangegeom {

using qlinalg::HermitianMatrix;
using qlinalg::ObservableSet;
using qlinalg::ProductState;

// Unit vector in R^k (norm 1 within 1e-12).
class Direction {
 public:
  explicit Direction(std::vector<double> components);
  static Direction normalized(std::vector<double> components);

  int k() const { return static_cast<int>(components_.size()); }
  double operator[](int i) const { return components_[i]; }
  const std::vector<double>& components() const { return components_; }
  double dot(const std::vector<double>& x) const;

 private:
  std::vector<double> components_;
};

// One support evaluation: a certified member point of the body plus an
// upper bound on the support value in the given direction. value_estimate
// is the best achieved (tight) value; it backs point estimates while
// `value` backs the sound outer bound.
struct SupportSample {
  Direction direction;
  double value = 0.0;                  // upper bound on sup u.x over the body
  double value_estimate = 0.0;         // achieved support, <= value
  std::vector<double> point;           // achieved expectation vector
  bool certified = true;               // false when value is heuristic only
  std::optional<ProductState> product_achiever;
  std::vector<cd> state_achiever;      // pure state, empty if product_achiever set
};

using SupportOracle =
    std::function<SupportSample(const ObservableSet&, const Direction&)>;

struct Halfspace {
  Direction normal;
  double offset = 0.0;           // sound support upper bound
  double offset_estimate = 0.0;  // tight achieved support, <= offset
  bool certified = true;
};

// Polytope sandwich of a convex body: conv(inner_vertices) from member
// points, intersection of outer halfspaces from support values.
struct BodyApprox {
  int k = 0;
  std::vector<std::vector<double>> inner_vertices;
  std::vector<Halfspace> outer_halfspaces;
};

struct VolumeBracket {
  double lower = 0.0;
  double upper = 0.0;
  double estimate = 0.0;
  int affine_rank = 0;  // k when full-dimensional
};

struct RatioBracket {
  double lower = 0.0;
  double upper = 0.0;
  double estimate = 0.0;
};

struct VolumeConfig {
  std::int64_t mc_samples = 200000;
  std::uint64_t seed = 0;
  double confidence_z = 2.326;  // one-sided 99%
  Exec exec = Exec::parallel;
};

// k=1: signs; k=2: N equally spaced angles; k=3: Fibonacci sphere.
std::vector<Direction> direction_grid(int k, int n);

// Support of the all-states body: lambda_max(sum u_i A_i) with the top
// eigenvector as achiever. Exact to eigensolver tolerance.
SupportSample support_all(const ObservableSet& obs, const Direction& u);

// Samples the oracle over direction_grid(k, n) plus the coordinate axes,
// deduplicates support points (1e-9 lexicographic snap) and lifts every
// halfspace offset to cover all sampled member points.
BodyApprox build_body(const ObservableSet& obs, const SupportOracle& oracle,
                      int n_directions, Exec exec = Exec::parallel);

// lower: exact volume of conv(inner_vertices); upper: Monte-Carlo volume of
// the halfspace intersection over the axis bounding box with one-sided
// confidence inflation. Degenerate bodies report rank with zero volumes.
VolumeBracket volume_bracket(const BodyApprox& body, const VolumeConfig& cfg);

RatioBracket ratio_bracket(const VolumeBracket& sep, const VolumeBracket& all);

// Distance from the origin to the body boundary along (cos phi, sin phi),
// for k=2 bodies of traceless observables (origin interior).
double ray_radius_2d(const ObservableSet& obs, const SupportOracle& oracle,
                     double phi);

struct ReduceReport {
  std::vector<int> kept;     // original indices retained
  std::vector<int> dropped;  // original indices removed
  // coefficients[i] expresses dropped[i]'s traceless part over the kept set
  std::vector<std::vector<double>> coefficients;
};

// Traceless parts, then a maximal linearly independent subset by greedy
// Gram pivoting (smallest retained Gram eigenvalue >= 1e-10 on normalized
// observables).
std::pair<ObservableSet, ReduceReport> reduce_observables(const ObservableSet& obs);

// Exposed for tests: exact volume of the convex hull of a point cloud.
double hull_volume(const std::vector<std::vector<double>>& points, int k);

// Largest violation of inner-vertex-inside-halfspace, for invariant checks.
double sandwich_violation(const BodyApprox& body);

}  // namespace nrange::rangegeom

#endif
