// SPDX-License-Identifier: Apache-2.0
//
// Separability-specific optimizers: product-state support functions
// (heuristic seesaw plus a certified grid for two qubits), absolute
// separability and the GOE ratio statistic.
#ifndef NRANGE_SEPTOOLS_HPP
#define NRANGE_SEPTOOLS_HPP

#include <cstdint>
#include <vector>

#include "nrange/parallel.hpp"
#include "nrange/qlinalg.hpp"
#include "nrange/rangegeom.hpp"

namespace nrange::septools {

using qlinalg::DimensionProfile;
using qlinalg::HermitianMatrix;
using qlinalg::ObservableSet;
using qlinalg::ProductState;
using qlinalg::Spectrum;
using rangegeom::Direction;
using rangegeom::SupportSample;

enum class Sense { max, min };

struct SeesawConfig {
  int restarts = 64;
  int max_iters = 200;
  double tol = 1e-11;  // objective change
  std::uint64_t seed = 0;
};

struct SeesawResult {
  double value = 0.0;
  ProductState state;
  bool converged = false;
  int iterations = 0;
};

// Alternating site updates: fix all factors but one, replace that factor by
// the extreme eigenvector of the conditional operator. The returned value is
// achieved by the returned ProductState, hence always a valid member value.
SeesawResult seesaw_product_extremum(const HermitianMatrix& x,
                                     const DimensionProfile& profile, Sense sense,
                                     const SeesawConfig& cfg);

struct CertifiedBound {
  double heuristic_value = 0.0;  // achieved by `achiever`
  double certified_upper = 0.0;  // grid max + L * h / 2
  double grid_resolution = 0.0;  // cell diameter h
  double lipschitz_constant = 0.0;
  ProductState achiever;
};

// Certified upper bound on max <psi_prod| X |psi_prod> for a (2,2) profile.
// Exhaustive grid over the first factor's Bloch angles with the partner
// factor maximized exactly through the conditional operator; the Lipschitz
// slack L*h/2 makes the grid maximum a sound upper bound.
CertifiedBound certified_sep_support_2qubit(const HermitianMatrix& x,
                                            int grid_per_axis);

struct SepOracleConfig {
  SeesawConfig seesaw{16, 200, 1e-11, 0};
  int cert_grid = 384;  // grid_per_axis for (2,2) profiles
};

// Separable support sample: the point always comes from a true product
// state; the value is certified for (2,2) profiles and heuristic otherwise.
SupportSample sep_support_oracle(const ObservableSet& obs, const Direction& u,
                                 const SepOracleConfig& cfg);

struct GoeRatioStats {
  double mean_ratio = 0.0;    // <lambda_prod_min / lambda_min>
  double stderr_ratio = 0.0;
  double mean_abs_lambda_min = 0.0;
  double mean_abs_lambda_prod_min = 0.0;
  int samples = 0;
};

// Bipartite d x d GOE statistic; D = d*d must be a perfect square.
GoeRatioStats goe_ratio_statistic(int total_dim, int samples,
                                  const SeesawConfig& cfg, std::uint64_t seed,
                                  Exec exec = Exec::parallel);

// Two-qubit spectral test: (l1 - l3)^2 <= 4 l2 l4 with 1e-12 slack.
bool is_absolutely_separable(const Spectrum& state_spectrum);

// Extreme of sum_i lambda_i e_i over absolutely separable two-qubit spectra;
// eigenvalues are sorted internally so the result is permutation invariant.
double abs_sep_extremum(std::vector<double> observable_eigenvalues, Sense sense);

bool ppt_check(const HermitianMatrix& rho, const DimensionProfile& profile);

// Fraction of Hilbert-Schmidt random states that pass the PPT check.
double hs_ppt_fraction(const DimensionProfile& profile, int samples,
                       std::uint64_t seed, Exec exec = Exec::parallel);

}  // namespace nrange::septools

#endif
