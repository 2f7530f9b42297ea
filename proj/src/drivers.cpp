// SPDX-License-Identifier: Apache-2.0
#include "nrange/drivers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "nrange/io.hpp"
#include "nrange/rng.hpp"

namespace nrange::cli {

using rangegeom::build_body;
using rangegeom::ratio_bracket;
using rangegeom::SupportOracle;
using rangegeom::SupportSample;
using rangegeom::VolumeConfig;
using septools::SeesawConfig;
using septools::Sense;
using septools::SepOracleConfig;

namespace {

SupportOracle make_sep_oracle(const SepOracleConfig& cfg) {
  return [cfg](const ObservableSet& o, const Direction& u) {
    return septools::sep_support_oracle(o, u, cfg);
  };
}

SupportOracle all_oracle() {
  return [](const ObservableSet& o, const Direction& u) {
    return rangegeom::support_all(o, u);
  };
}

nlohmann::json bracket_json(const VolumeBracket& b) {
  return {{"lower", b.lower},
          {"upper", b.upper},
          {"estimate", b.estimate},
          {"affine_rank", b.affine_rank}};
}

}  // namespace

nlohmann::json RatioReport::to_json() const {
  nlohmann::json j;
  j["version"] = kVersion;
  j["seed"] = seed;
  j["directions"] = directions;
  j["mc_samples"] = mc_samples;
  j["k_input"] = k_input;
  j["k_reduced"] = k_reduced;
  j["dropped_observables"] = reduction.dropped;
  j["dependency_coefficients"] = reduction.coefficients;
  j["sep_volume"] = bracket_json(sep);
  j["all_volume"] = bracket_json(all);
  j["ratio"] = {{"lower", ratio.lower},
                {"upper", ratio.upper},
                {"estimate", ratio.estimate}};
  j["certified_directions"] = certified_directions;
  j["total_directions"] = total_directions;
  return j;
}

RatioReport cmd_ratio(const ObservableSet& obs, const RatioOptions& opt) {
  RatioReport report;
  report.k_input = obs.k();
  report.seed = opt.seed;
  report.directions = opt.directions;
  report.mc_samples = opt.mc_samples;

  auto [reduced, reduce_report] = rangegeom::reduce_observables(obs);
  report.reduction = reduce_report;
  report.k_reduced = reduced.k();
  if (reduced.k() == 0)
    throw DegenerateBodyError("all observables reduce away (multiples of identity)");
  if (reduced.k() > 3)
    throw UnsupportedDimensionError("volume pipeline covers k <= 3 after reduction");

  SepOracleConfig sep_cfg;
  sep_cfg.cert_grid = opt.cert_grid;
  sep_cfg.seesaw = opt.seesaw;
  sep_cfg.seesaw.seed = opt.seed ^ 0x5ee5aa11ULL;

  report.all_body = build_body(reduced, all_oracle(), opt.directions, opt.exec);
  report.sep_body = build_body(reduced, make_sep_oracle(sep_cfg), opt.directions,
                               opt.exec);

  for (const auto& h : report.sep_body.outer_halfspaces) {
    ++report.total_directions;
    if (h.certified) ++report.certified_directions;
  }

  VolumeConfig vc;
  vc.mc_samples = opt.mc_samples;
  vc.exec = opt.exec;
  vc.seed = opt.seed ^ 0xa11ce5;
  report.all = rangegeom::volume_bracket(report.all_body, vc);
  vc.seed = opt.seed ^ 0x5e9a4a;
  report.sep = rangegeom::volume_bracket(report.sep_body, vc);
  report.ratio = ratio_bracket(report.sep, report.all);
  return report;
}

GoeReport cmd_goe(int d, const std::vector<int>& k_list, int samples,
                  const GoeOptions& opt) {
  if (d < 2) throw ConfigError("d must be >= 2");
  if (samples < 10) throw ConfigError("need at least 10 samples");
  const int D = d * d;
  const DimensionProfile profile({d, d});

  GoeReport report;
  report.seed = opt.seed;

  SeesawConfig stat_cfg = opt.seesaw;
  report.stats = septools::goe_ratio_statistic(D, samples, stat_cfg, opt.seed,
                                               opt.exec);
  // Table-style absolute columns in the unit-semicircle-edge normalization
  // (eigenvalues scaled by sqrt(2/D)).
  const double edge_scale = std::sqrt(2.0 / D);
  report.mean_abs_lambda_min_unit_edge =
      report.stats.mean_abs_lambda_min * edge_scale;
  report.mean_abs_lambda_prod_min_unit_edge =
      report.stats.mean_abs_lambda_prod_min * edge_scale;

  for (int k : k_list) {
    if (k < 1 || k > 3) throw ConfigError("GOE sweep covers k in {1,2,3}");
    GoeRow row;
    row.d = d;
    row.k = k;
    row.samples = samples;
    row.ratio_pow_k = std::pow(report.stats.mean_ratio, k);

    std::vector<double> ratios(samples, 0.0);
    CounterRng seeder(opt.seed ^ (0x9e3779b9u + static_cast<std::uint64_t>(k)));
    parallel_for(opt.exec, samples, [&](std::int64_t i) {
      CounterRng rs = seeder.split(static_cast<std::uint64_t>(i));
      std::vector<HermitianMatrix> draws;
      draws.reserve(k);
      for (int j = 0; j < k; ++j)
        draws.push_back(qlinalg::sample_goe(D, rs.next_u64()));
      const ObservableSet set(profile, draws);

      if (k == 1) {
        SeesawConfig cfg = opt.seesaw;
        cfg.seed = rs.next_u64();
        const auto lo = septools::seesaw_product_extremum(set.observables[0],
                                                          profile, Sense::min, cfg);
        cfg.seed = rs.next_u64();
        const auto hi = septools::seesaw_product_extremum(set.observables[0],
                                                          profile, Sense::max, cfg);
        const auto eg = qlinalg::eigh(set.observables[0]);
        ratios[i] = (hi.value - lo.value) /
                    (eg.eigenvalues.max() - eg.eigenvalues.min());
        return;
      }

      SepOracleConfig sep_cfg;
      sep_cfg.cert_grid = opt.cert_grid;
      sep_cfg.seesaw = opt.seesaw;
      sep_cfg.seesaw.seed = rs.next_u64();
      const int dirs = (k == 2) ? opt.directions_2d : opt.directions_3d;
      const BodyApprox all_body = build_body(set, all_oracle(), dirs, Exec::serial);
      const BodyApprox sep_body =
          build_body(set, make_sep_oracle(sep_cfg), dirs, Exec::serial);
      VolumeConfig vc;
      vc.mc_samples = opt.mc_samples;
      vc.exec = Exec::serial;
      vc.seed = rs.next_u64();
      const VolumeBracket all_vol = rangegeom::volume_bracket(all_body, vc);
      vc.seed = rs.next_u64();
      const VolumeBracket sep_vol = rangegeom::volume_bracket(sep_body, vc);
      ratios[i] = ratio_bracket(sep_vol, all_vol).estimate;
    });

    const double n = static_cast<double>(samples);
    row.tau = std::accumulate(ratios.begin(), ratios.end(), 0.0) / n;
    double var = 0.0;
    for (double r : ratios) var += (r - row.tau) * (r - row.tau);
    row.tau_stderr = samples > 1 ? std::sqrt(var / (n - 1.0) / n) : 0.0;
    report.rows.push_back(row);
  }
  return report;
}

double product_ratio_global_min(int grid, double* theta_a, double* theta_b) {
  using analytic::ProductAngles;
  using analytic::ratio_product_2q;
  double best = 1.0, best_a = 0.5 * kPi, best_b = 0.5 * kPi;
  for (int i = 0; i < grid; ++i) {
    const double a = (i + 0.5) * kPi / grid;
    for (int j = 0; j < grid; ++j) {
      const double b = (j + 0.5) * kPi / grid;
      const double r = ratio_product_2q(ProductAngles(a, b));
      if (r < best) {
        best = r;
        best_a = a;
        best_b = b;
      }
    }
  }
  // Coordinate golden refinement around the best cell.
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double step = kPi / grid;
  auto eval = [&](double a, double b) {
    a = std::clamp(a, 0.0, kPi);
    b = std::clamp(b, 0.0, kPi);
    try {
      return ratio_product_2q(ProductAngles(a, b));
    } catch (const DegenerateBodyError&) {
      return 1.0;
    }
  };
  for (int round = 0; round < 80; ++round) {
    for (int axis = 0; axis < 2; ++axis) {
      double lo = (axis == 0 ? best_a : best_b) - step;
      double hi = (axis == 0 ? best_a : best_b) + step;
      double c = hi - inv_phi * (hi - lo), dpt = lo + inv_phi * (hi - lo);
      auto at = [&](double t) {
        return axis == 0 ? eval(t, best_b) : eval(best_a, t);
      };
      double fc = at(c), fd = at(dpt);
      for (int it = 0; it < 40 && hi - lo > 1e-13; ++it) {
        if (fc < fd) {
          hi = dpt;
          dpt = c;
          fd = fc;
          c = hi - inv_phi * (hi - lo);
          fc = at(c);
        } else {
          lo = c;
          c = dpt;
          fc = fd;
          dpt = lo + inv_phi * (hi - lo);
          fd = at(dpt);
        }
      }
      const double arg = 0.5 * (lo + hi);
      const double val = at(arg);
      if (val < best) {
        best = val;
        (axis == 0 ? best_a : best_b) = arg;
      }
    }
    step *= 0.5;
    if (step < 1e-12) break;
  }
  if (theta_a) *theta_a = best_a;
  if (theta_b) *theta_b = best_b;
  return best;
}

SweepReport cmd_product_sweep(const SweepOptions& opt) {
  if (opt.grid < 8) throw ConfigError("grid must be >= 8");
  using analytic::ProductAngles;

  SweepReport report;
  report.seed = opt.seed;
  report.grid = opt.grid;
  report.rows.resize(static_cast<std::size_t>(opt.grid) * opt.grid);

  parallel_for(opt.exec, static_cast<std::int64_t>(report.rows.size()),
               [&](std::int64_t idx) {
    const int i = static_cast<int>(idx) / opt.grid;
    const int j = static_cast<int>(idx) % opt.grid;
    SweepRow row;
    row.theta_a = (i + 0.5) * kPi / opt.grid;
    row.theta_b = (j + 0.5) * kPi / opt.grid;
    const ProductAngles angles(row.theta_a, row.theta_b);
    row.sep_volume = analytic::sep_volume_product_2q(angles);
    row.all_volume = analytic::all_volume_product_2q(angles);
    row.ratio_analytic = row.sep_volume / row.all_volume;

    if (opt.numeric) {
      const ObservableSet set = analytic::product_pair_observables(angles);
      SepOracleConfig sep_cfg;
      sep_cfg.cert_grid = opt.cert_grid;
      sep_cfg.seesaw.seed = opt.seed ^ static_cast<std::uint64_t>(idx);
      const BodyApprox all_body =
          build_body(set, all_oracle(), opt.directions, Exec::serial);
      const BodyApprox sep_body =
          build_body(set, make_sep_oracle(sep_cfg), opt.directions, Exec::serial);
      VolumeConfig vc;
      vc.mc_samples = opt.mc_samples;
      vc.exec = Exec::serial;
      vc.seed = opt.seed ^ (0xabcd1234u + static_cast<std::uint64_t>(idx));
      const VolumeBracket all_vol = rangegeom::volume_bracket(all_body, vc);
      vc.seed = opt.seed ^ (0x4321dcbau + static_cast<std::uint64_t>(idx));
      const VolumeBracket sep_vol = rangegeom::volume_bracket(sep_body, vc);
      const RatioBracket rb = ratio_bracket(sep_vol, all_vol);
      row.ratio_numeric = rb.estimate;
      row.ratio_numeric_lower = rb.lower;
      row.ratio_numeric_upper = rb.upper;
      row.abs_diff = std::abs(rb.estimate - row.ratio_analytic);
    } else {
      row.ratio_numeric = std::nan("");
      row.ratio_numeric_lower = 0.0;
      row.ratio_numeric_upper = 1.0;
      row.abs_diff = 0.0;
    }
    report.rows[idx] = row;
  });

  for (const auto& row : report.rows)
    report.max_abs_diff = std::max(report.max_abs_diff, row.abs_diff);
  report.global_min_ratio =
      product_ratio_global_min(256, &report.argmin_theta_a, &report.argmin_theta_b);
  return report;
}

std::vector<std::vector<double>> sample_shots(const ObservableSet& obs,
                                              const HermitianMatrix& state,
                                              int shots, std::uint64_t seed) {
  if (state.dim() != obs.profile.total_dim())
    throw ShapeError("state dimension does not match observables");
  const int k = obs.k();
  std::vector<std::vector<double>> rows(shots, std::vector<double>(k, 0.0));

  // Outcome distribution per observable: eigenvalues weighted by <v|rho|v>.
  std::vector<std::vector<double>> outcome_values(k), outcome_probs(k);
  for (int j = 0; j < k; ++j) {
    const auto eg = qlinalg::eigh(obs.observables[j]);
    const int d = obs.observables[j].dim();
    for (int i = 0; i < d; ++i) {
      outcome_values[j].push_back(eg.eigenvalues[i]);
      outcome_probs[j].push_back(
          std::max(0.0, state.expectation(eg.eigenvectors[i])));
    }
    double total = std::accumulate(outcome_probs[j].begin(),
                                   outcome_probs[j].end(), 0.0);
    for (double& p : outcome_probs[j]) p /= total;
  }

  CounterRng seeder(seed);
  for (int s = 0; s < shots; ++s) {
    CounterRng rng = seeder.split(static_cast<std::uint64_t>(s));
    for (int j = 0; j < k; ++j) {
      const double u = rng.uniform();
      double acc = 0.0;
      double value = outcome_values[j].back();
      for (std::size_t i = 0; i < outcome_probs[j].size(); ++i) {
        acc += outcome_probs[j][i];
        if (u < acc) {
          value = outcome_values[j][i];
          break;
        }
      }
      rows[s][j] = value;
    }
  }
  return rows;
}

nlohmann::json ConfidenceReport::to_json() const {
  nlohmann::json j;
  j["version"] = kVersion;
  j["rect"] = {{"center", rect.center},
               {"half_widths", rect.half_widths},
               {"spectral_widths", rect.widths},
               {"alpha", rect.alpha},
               {"shots_per_observable", rect.shots}};
  if (certificate) {
    j["certificate"] = {
        {"direction", certificate->direction},
        {"sep_support_certified", certificate->sep_support_certified},
        {"rect_min_along_direction", certificate->rect_min_along_direction},
        {"margin", certificate->margin}};
  } else {
    j["certificate"] = nullptr;
  }
  return j;
}

ConfidenceReport cmd_confidence(const ObservableSet& obs,
                                const std::vector<std::vector<double>>& shots,
                                const ConfidenceOptions& opt) {
  if (obs.profile.local_dims() != std::vector<int>{2, 2})
    throw UnsupportedDimensionError(
        "certification requires a (2,2) profile (certified separable supports)");
  if (opt.alpha <= 0.0 || opt.alpha >= 1.0)
    throw ConfigError("alpha must lie in (0,1)");
  const int k = obs.k();
  const int m = static_cast<int>(shots.size());
  if (m < 1) throw IoError("no shots provided");

  // Spectral widths; outcomes must stay inside each observable's spectrum.
  std::vector<double> widths(k), spec_lo(k), spec_hi(k);
  for (int j = 0; j < k; ++j) {
    const auto eg = qlinalg::eigh(obs.observables[j]);
    spec_lo[j] = eg.eigenvalues.min();
    spec_hi[j] = eg.eigenvalues.max();
    widths[j] = spec_hi[j] - spec_lo[j];
    if (widths[j] <= 1e-12)
      throw ConfigError("observable has zero spectral width");
  }
  for (const auto& row : shots) {
    if (static_cast<int>(row.size()) != k)
      throw IoError("shot row width does not match observable count");
    for (int j = 0; j < k; ++j)
      if (row[j] < spec_lo[j] - 1e-9 || row[j] > spec_hi[j] + 1e-9)
        throw IoError("outcome outside the observable spectrum");
  }

  // Rescale to unit spectral width.
  std::vector<HermitianMatrix> scaled;
  scaled.reserve(k);
  for (int j = 0; j < k; ++j)
    scaled.push_back((1.0 / widths[j]) * obs.observables[j]);
  const ObservableSet scaled_set(obs.profile, scaled);

  ConfidenceReport report;
  report.rect.alpha = opt.alpha;
  report.rect.shots = m;
  report.rect.widths = widths;
  report.rect.center.assign(k, 0.0);
  for (const auto& row : shots)
    for (int j = 0; j < k; ++j) report.rect.center[j] += row[j] / widths[j];
  for (double& c : report.rect.center) c /= m;

  if (opt.custom_t.empty()) {
    const double t = std::sqrt(std::log(2.0 * k / opt.alpha) / (2.0 * m));
    report.rect.half_widths.assign(k, t);
  } else {
    if (static_cast<int>(opt.custom_t.size()) != k)
      throw ConfigError("custom half-widths must match the observable count");
    report.rect.half_widths = opt.custom_t;
  }
  const std::vector<double> unit(k, 1.0);
  if (analytic::hoeffding_bound(m, report.rect.half_widths, unit) >
      opt.alpha + 1e-12)
    throw ConfigError("half-widths do not meet the requested confidence level");

  const auto& center = report.rect.center;
  const auto& tj = report.rect.half_widths;

  auto margin_of = [&](const std::vector<double>& dir, int grid,
                       double* support_out, double* rect_min_out) {
    const Direction u = Direction::normalized(dir);
    double rect_min = 0.0;
    for (int j = 0; j < k; ++j)
      rect_min += u[j] * center[j] - std::abs(u[j]) * tj[j];
    const HermitianMatrix x = qlinalg::combine(scaled_set.observables,
                                               u.components());
    const auto cb = septools::certified_sep_support_2qubit(x, grid);
    const double support = std::min(cb.certified_upper, qlinalg::lambda_max(x));
    if (support_out) *support_out = support;
    if (rect_min_out) *rect_min_out = rect_min;
    return rect_min - support;
  };

  // Candidate directions: coordinate axes, grids for k <= 3, random vectors
  // otherwise; then a local pattern search around the best candidate.
  std::vector<std::vector<double>> candidates;
  for (int j = 0; j < k; ++j) {
    for (double s : {1.0, -1.0}) {
      std::vector<double> e(k, 0.0);
      e[j] = s;
      candidates.push_back(std::move(e));
    }
  }
  if (k >= 2 && k <= 3) {
    for (const auto& d : rangegeom::direction_grid(k, opt.direction_grid))
      candidates.push_back(d.components());
  } else if (k > 3) {
    CounterRng rng(opt.seed);
    for (int i = 0; i < opt.direction_grid; ++i) {
      std::vector<double> v(k);
      for (double& x : v) x = rng.normal();
      candidates.push_back(std::move(v));
    }
  }

  const int coarse_grid = std::max(96, opt.cert_grid / 4);
  double best_margin = -1e300;
  std::vector<double> best_dir;
  std::vector<double> margins(candidates.size(), -1e300);
  parallel_for(opt.exec, static_cast<std::int64_t>(candidates.size()),
               [&](std::int64_t i) {
                 margins[i] = margin_of(candidates[i], coarse_grid, nullptr,
                                        nullptr);
               });
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (margins[i] > best_margin) {
      best_margin = margins[i];
      best_dir = candidates[i];
    }
  }

  // Local pattern search with shrinking steps.
  double step = 0.25;
  for (int round = 0; round < 24; ++round) {
    bool improved = false;
    for (int j = 0; j < k; ++j) {
      for (double sgn : {1.0, -1.0}) {
        std::vector<double> trial = best_dir;
        trial[j] += sgn * step;
        double nrm = 0.0;
        for (double v : trial) nrm += v * v;
        if (nrm < 1e-12) continue;
        const double margin = margin_of(trial, coarse_grid, nullptr, nullptr);
        if (margin > best_margin + 1e-12) {
          best_margin = margin;
          best_dir = trial;
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
    if (step < 1e-4) break;
  }

  if (best_margin <= 0.0) return report;  // no certificate at coarse level

  // Independent re-verification at the full certification grid before
  // emitting; the certificate never relies on the search-phase values.
  double support = 0.0, rect_min = 0.0;
  const double verified_margin =
      margin_of(best_dir, opt.cert_grid, &support, &rect_min);
  if (verified_margin <= 0.0) return report;

  Certificate cert;
  const Direction u = Direction::normalized(best_dir);
  cert.direction = u.components();
  cert.sep_support_certified = support;
  cert.rect_min_along_direction = rect_min;
  cert.margin = verified_margin;
  report.certificate = cert;
  return report;
}

std::vector<BoundsRow> cmd_bounds(const DimensionProfile& profile, int k_max) {
  if (k_max < 1) throw ConfigError("k_max must be >= 1");
  std::vector<BoundsRow> rows;
  const auto instances = cmd_instances();
  const bool two_qubits = profile.local_dims() == std::vector<int>{2, 2};
  for (int k = 1; k <= k_max; ++k) {
    BoundsRow row;
    row.k = k;
    row.theorem3 = analytic::theorem3_bound(profile, k).value;
    if (k == 1 && two_qubits) {
      const double hi = septools::abs_sep_extremum({1.0, 0.5, 0.5, 0.0},
                                                   Sense::max);
      const double lo = septools::abs_sep_extremum({1.0, 0.5, 0.5, 0.0},
                                                   Sense::min);
      row.abs_sep_lower = hi - lo;
    }
    if (two_qubits) {
      double best = 2.0;
      for (const auto& inst : instances) {
        if (inst.k != k) continue;
        if (inst.expected_ratio < best) {
          best = inst.expected_ratio;
          row.instance_ratio = inst.expected_ratio;
          row.instance_name = inst.name;
        }
      }
    }
    const double lower = std::max(row.theorem3, row.abs_sep_lower.value_or(0.0));
    row.violation = row.instance_ratio && *row.instance_ratio + 1e-12 < lower;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<InstanceRow> cmd_instances() {
  std::vector<InstanceRow> rows;
  const DimensionProfile two_qubits({2, 2});
  for (const auto& inst : analytic::named_instances()) {
    InstanceRow row;
    row.name = inst.name;
    row.k = inst.observables.k();
    row.expected_ratio = inst.expected_ratio;
    row.theorem3 = analytic::theorem3_bound(two_qubits, row.k).value;
    row.numeric_supported = inst.numeric_supported;
    row.violation = row.expected_ratio + 1e-12 < row.theorem3;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string render_bounds_table(const std::vector<BoundsRow>& rows) {
  std::ostringstream out;
  out << "k   theorem3-bound   abs-sep-bound   best-instance        ratio\n";
  for (const auto& row : rows) {
    char line[160];
    std::snprintf(line, sizeof(line), "%-3d %-16.10g %-15s %-20s %s%s\n", row.k,
                  row.theorem3,
                  row.abs_sep_lower ? format_double(*row.abs_sep_lower).c_str()
                                    : "-",
                  row.instance_name.empty() ? "-" : row.instance_name.c_str(),
                  row.instance_ratio ? format_double(*row.instance_ratio).c_str()
                                     : "-",
                  row.violation ? "  VIOLATION" : "");
    out << line;
  }
  return out.str();
}

std::string render_instances_table(const std::vector<InstanceRow>& rows) {
  std::ostringstream out;
  out << "instance                  k   expected-ratio   theorem3-bound\n";
  for (const auto& row : rows) {
    char line[160];
    std::snprintf(line, sizeof(line), "%-25s %-3d %-16.10g %-16.10g%s%s\n",
                  row.name.c_str(), row.k, row.expected_ratio, row.theorem3,
                  row.numeric_supported ? "" : "  (analytic only)",
                  row.violation ? "  VIOLATION" : "");
    out << line;
  }
  return out.str();
}

}  // namespace nrange::cli
