// SPDX-License-Identifier: Apache-2.0
//
// Experiment drivers behind the CLI subcommands: volume-ratio pipelines,
// GOE sweeps, the product-angle sweep, confidence-rectangle certification
// and the bounds/instances tables.
#ifndef NRANGE_DRIVERS_HPP
#define NRANGE_DRIVERS_HPP

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nrange/analytic.hpp"
#include "nrange/parallel.hpp"
#include "nrange/rangegeom.hpp"
#include "nrange/septools.hpp"

namespace nrange::cli {

using qlinalg::DimensionProfile;
using qlinalg::HermitianMatrix;
using qlinalg::ObservableSet;
using rangegeom::BodyApprox;
using rangegeom::Direction;
using rangegeom::RatioBracket;
using rangegeom::VolumeBracket;

// ----- ratio -----

struct RatioOptions {
  int directions = 720;
  std::int64_t mc_samples = 100000;
  std::uint64_t seed = 1;
  int cert_grid = 384;
  septools::SeesawConfig seesaw{16, 200, 1e-11, 0};
  Exec exec = Exec::parallel;
};

struct RatioReport {
  int k_input = 0;
  int k_reduced = 0;
  rangegeom::ReduceReport reduction;
  VolumeBracket sep;
  VolumeBracket all;
  RatioBracket ratio;
  int directions = 0;
  int certified_directions = 0;
  int total_directions = 0;
  std::int64_t mc_samples = 0;
  std::uint64_t seed = 0;
  BodyApprox sep_body;
  BodyApprox all_body;

  nlohmann::json to_json() const;
};

RatioReport cmd_ratio(const ObservableSet& obs, const RatioOptions& opt);

// ----- goe -----

struct GoeOptions {
  int directions_2d = 360;
  int directions_3d = 500;
  std::int64_t mc_samples = 20000;
  int cert_grid = 192;
  septools::SeesawConfig seesaw{16, 200, 1e-11, 0};
  std::uint64_t seed = 1;
  Exec exec = Exec::parallel;
};

struct GoeRow {
  int d = 0;
  int k = 0;
  int samples = 0;
  double tau = 0.0;
  double tau_stderr = 0.0;
  double ratio_pow_k = 0.0;  // <lambda_prod_min / lambda_min>^k comparison
};

struct GoeReport {
  std::vector<GoeRow> rows;
  septools::GoeRatioStats stats;  // single-observable statistics for this d
  // Absolute columns rescaled to the unit-semicircle-edge normalization.
  double mean_abs_lambda_min_unit_edge = 0.0;
  double mean_abs_lambda_prod_min_unit_edge = 0.0;
  std::uint64_t seed = 0;
};

GoeReport cmd_goe(int d, const std::vector<int>& k_list, int samples,
                  const GoeOptions& opt);

// ----- product-sweep -----

struct SweepOptions {
  int grid = 16;
  int directions = 720;
  std::int64_t mc_samples = 20000;
  int cert_grid = 192;
  bool numeric = true;  // also build the numerical bodies per grid point
  std::uint64_t seed = 1;
  Exec exec = Exec::parallel;
};

struct SweepRow {
  double theta_a = 0.0;
  double theta_b = 0.0;
  double sep_volume = 0.0;
  double all_volume = 0.0;
  double ratio_analytic = 0.0;
  double ratio_numeric = 0.0;  // NaN when numeric pass disabled
  double ratio_numeric_lower = 0.0;
  double ratio_numeric_upper = 0.0;
  double abs_diff = 0.0;
};

struct SweepReport {
  std::vector<SweepRow> rows;
  double max_abs_diff = 0.0;
  double global_min_ratio = 0.0;  // analytic minimum over angles
  double argmin_theta_a = 0.0;
  double argmin_theta_b = 0.0;
  std::uint64_t seed = 0;
  int grid = 0;
};

SweepReport cmd_product_sweep(const SweepOptions& opt);

// Analytic global minimum of the product-pair ratio (dense grid plus
// coordinate golden refinement).
double product_ratio_global_min(int grid, double* theta_a = nullptr,
                                double* theta_b = nullptr);

// ----- confidence -----

struct ConfidenceOptions {
  double alpha = 0.05;
  std::uint64_t seed = 1;
  int cert_grid = 768;
  int direction_grid = 360;
  std::vector<double> custom_t;  // optional per-observable half-widths
  Exec exec = Exec::parallel;
};

struct ConfidenceRect {
  std::vector<double> center;       // estimators, unit-spectral-width scale
  std::vector<double> half_widths;  // t_j, same scale
  std::vector<double> widths;       // original spectral widths per observable
  double alpha = 0.0;
  int shots = 0;
};

struct Certificate {
  std::vector<double> direction;
  double sep_support_certified = 0.0;
  double rect_min_along_direction = 0.0;
  double margin = 0.0;
};

struct ConfidenceReport {
  ConfidenceRect rect;
  std::optional<Certificate> certificate;
  nlohmann::json to_json() const;
};

ConfidenceReport cmd_confidence(const ObservableSet& obs,
                                const std::vector<std::vector<double>>& shots,
                                const ConfidenceOptions& opt);

// Synthetic per-shot outcomes for a state; one eigenvalue draw per shot and
// observable. Used for coverage tests and demo data.
std::vector<std::vector<double>> sample_shots(const ObservableSet& obs,
                                              const HermitianMatrix& state,
                                              int shots, std::uint64_t seed);

// ----- bounds / instances -----

struct BoundsRow {
  int k = 0;
  double theorem3 = 0.0;
  std::optional<double> abs_sep_lower;  // k = 1 only
  std::optional<double> instance_ratio;
  std::string instance_name;
  bool violation = false;
};

std::vector<BoundsRow> cmd_bounds(const DimensionProfile& profile, int k_max);

struct InstanceRow {
  std::string name;
  int k = 0;
  double expected_ratio = 0.0;
  double theorem3 = 0.0;
  bool numeric_supported = true;
  bool violation = false;
};

std::vector<InstanceRow> cmd_instances();

std::string render_bounds_table(const std::vector<BoundsRow>& rows);
std::string render_instances_table(const std::vector<InstanceRow>& rows);

}  // namespace nrange::cli

#endif
