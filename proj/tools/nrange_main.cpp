// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: ratio, goe, product-sweep, confidence, bounds,
// instances. Exit codes: 0 success/certified, 1 I/O, 2 unsupported config,
// 3 no certificate, 4 internal invariant violation.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nrange/drivers.hpp"
#include "nrange/io.hpp"

namespace {

namespace fs = std::filesystem;
using namespace nrange;
using cli::format_double;

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitUnsupported = 2;
constexpr int kExitNoCertificate = 3;
constexpr int kExitInvariant = 4;

struct CommonFlags {
  std::uint64_t seed = 1;
  int directions = 720;
  long long mc_samples = 100000;
  int grid = 16;
  double alpha = 0.05;
  std::string out_dir;
  std::string format = "json";
  bool serial = false;
};

Exec exec_of(const CommonFlags& f) {
  return f.serial ? Exec::serial : Exec::parallel;
}

fs::path out_path(const CommonFlags& f, const std::string& name) {
  if (f.out_dir.empty()) return fs::path(name);
  fs::create_directories(f.out_dir);
  return fs::path(f.out_dir) / name;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw cli::IoError("cannot write " + path.string());
  out << text;
}

void plot_bodies_2d(const CommonFlags& flags, const cli::RatioReport& report) {
  if (report.all_body.k != 2) return;
  double extent = 1e-9;
  for (const auto& v : report.all_body.inner_vertices)
    for (double x : v) extent = std::max(extent, std::abs(x));
  extent *= 1.1;
  cli::SvgCanvas canvas(560, 560, -extent, extent, -extent, extent);
  canvas.axes();
  auto closed_curve = [&](const rangegeom::BodyApprox& body,
                          const std::string& color) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& v : body.inner_vertices) pts.emplace_back(v[0], v[1]);
    // Angular sort around the centroid for a clean closed outline.
    double cx = 0, cy = 0;
    for (auto& [x, y] : pts) {
      cx += x;
      cy += y;
    }
    cx /= pts.size();
    cy /= pts.size();
    std::sort(pts.begin(), pts.end(), [&](const auto& p, const auto& q) {
      return std::atan2(p.second - cy, p.first - cx) <
             std::atan2(q.second - cy, q.first - cx);
    });
    canvas.polyline(pts, color, 1.5, true);
  };
  closed_curve(report.all_body, "#1f4e9c");
  closed_curve(report.sep_body, "#c03020");
  canvas.text(-extent, extent * 0.95, "joint range (blue), separable range (red)");
  canvas.write(out_path(flags, "ratio-" + cli::timestamp_suffix() + ".svg").string());
}

int run_ratio(const std::string& file, const CommonFlags& flags, int cert_grid) {
  const qlinalg::ObservableSet obs = cli::load_observables(file);
  cli::RatioOptions opt;
  opt.directions = flags.directions;
  opt.mc_samples = flags.mc_samples;
  opt.seed = flags.seed;
  opt.cert_grid = cert_grid;
  opt.exec = exec_of(flags);
  const cli::RatioReport report = cli::cmd_ratio(obs, opt);

  const std::string payload = report.to_json().dump(2) + "\n";
  std::cout << payload;
  write_text(out_path(flags, "ratio-report.json"), payload);
  plot_bodies_2d(flags, report);
  return kExitOk;
}

int run_goe(int d, std::vector<int> k_list, int samples, const CommonFlags& flags,
            int cert_grid) {
  cli::GoeOptions opt;
  opt.seed = flags.seed;
  opt.mc_samples = flags.mc_samples;
  opt.cert_grid = cert_grid;
  opt.exec = exec_of(flags);
  if (k_list.empty()) k_list = {1, 2, 3};
  const cli::GoeReport report = cli::cmd_goe(d, k_list, samples, opt);

  std::ostringstream csv;
  csv << "# version=" << kVersion << " seed=" << flags.seed
      << " samples=" << samples << "\n";
  csv << "d,k,samples,tau,tau_stderr,ratio_pow_k\n";
  for (const auto& row : report.rows)
    csv << row.d << "," << row.k << "," << row.samples << ","
        << format_double(row.tau) << "," << format_double(row.tau_stderr) << ","
        << format_double(row.ratio_pow_k) << "\n";
  csv << "d,mean_ratio,ratio_stderr,mean_abs_lambda_min,mean_abs_lambda_prod_min,"
         "mean_abs_lambda_min_unit_edge,mean_abs_lambda_prod_min_unit_edge\n";
  csv << d << "," << format_double(report.stats.mean_ratio) << ","
      << format_double(report.stats.stderr_ratio) << ","
      << format_double(report.stats.mean_abs_lambda_min) << ","
      << format_double(report.stats.mean_abs_lambda_prod_min) << ","
      << format_double(report.mean_abs_lambda_min_unit_edge) << ","
      << format_double(report.mean_abs_lambda_prod_min_unit_edge) << "\n";
  std::cout << csv.str();
  write_text(out_path(flags, "goe-report.csv"), csv.str());

  // tau vs k against the power-law comparison curve.
  cli::SvgCanvas canvas(560, 420, 0.5, 3.5, 0.0, 1.05);
  canvas.axes();
  std::vector<std::pair<double, double>> curve, points;
  for (const auto& row : report.rows) {
    points.emplace_back(row.k, row.tau);
    curve.emplace_back(row.k, row.ratio_pow_k);
  }
  canvas.polyline(curve, "#888", 1.0);
  for (const auto& [x, y] : points) canvas.circle(x, y, 4.0, "#c03020");
  canvas.text(0.6, 1.0, "tau (red) vs mean-ratio^k (grey), d=" + std::to_string(d));
  canvas.write(out_path(flags, "goe-" + cli::timestamp_suffix() + ".svg").string());
  return kExitOk;
}

int run_sweep(const CommonFlags& flags, int directions, bool no_numeric,
              int cert_grid) {
  cli::SweepOptions opt;
  opt.grid = flags.grid;
  opt.directions = directions;
  opt.mc_samples = flags.mc_samples;
  opt.cert_grid = cert_grid;
  opt.numeric = !no_numeric;
  opt.seed = flags.seed;
  opt.exec = exec_of(flags);
  const cli::SweepReport report = cli::cmd_product_sweep(opt);

  std::ostringstream csv;
  csv << "# version=" << kVersion << " seed=" << flags.seed
      << " grid=" << flags.grid << " directions=" << directions << "\n";
  csv << "theta_a,theta_b,sep_volume,all_volume,ratio_analytic,ratio_numeric,"
         "abs_diff\n";
  for (const auto& row : report.rows)
    csv << format_double(row.theta_a) << "," << format_double(row.theta_b) << ","
        << format_double(row.sep_volume) << "," << format_double(row.all_volume)
        << "," << format_double(row.ratio_analytic) << ","
        << format_double(row.ratio_numeric) << "," << format_double(row.abs_diff)
        << "\n";
  csv << "# max_abs_diff=" << format_double(report.max_abs_diff)
      << " global_min_ratio=" << format_double(report.global_min_ratio)
      << " at (" << format_double(report.argmin_theta_a) << ","
      << format_double(report.argmin_theta_b) << ")\n";
  std::cout << csv.str();
  write_text(out_path(flags, "product-sweep.csv"), csv.str());

  std::vector<std::vector<double>> heat(flags.grid,
                                        std::vector<double>(flags.grid, 0.0));
  for (const auto& row : report.rows) {
    const int i = static_cast<int>(row.theta_a / kPi * flags.grid);
    const int j = static_cast<int>(row.theta_b / kPi * flags.grid);
    heat[std::min(j, flags.grid - 1)][std::min(i, flags.grid - 1)] =
        row.ratio_analytic;
  }
  cli::write_heatmap_svg(
      out_path(flags, "product-sweep-" + cli::timestamp_suffix() + ".svg").string(),
      heat, 0.0, kPi, 0.0, kPi, "volume ratio over (theta_A, theta_B)");
  return kExitOk;
}

int run_confidence(const std::string& obs_file, const std::string& data_file,
                   const CommonFlags& flags, int cert_grid,
                   std::vector<double> custom_t) {
  const qlinalg::ObservableSet obs = cli::load_observables(obs_file);
  const auto shots = cli::load_shots_csv(data_file, obs.k());
  cli::ConfidenceOptions opt;
  opt.alpha = flags.alpha;
  opt.seed = flags.seed;
  opt.cert_grid = cert_grid;
  opt.exec = exec_of(flags);
  opt.custom_t = std::move(custom_t);
  const cli::ConfidenceReport report = cli::cmd_confidence(obs, shots, opt);

  const std::string payload = report.to_json().dump(2) + "\n";
  std::cout << payload;
  write_text(out_path(flags, "confidence-report.json"), payload);
  return report.certificate ? kExitOk : kExitNoCertificate;
}

int run_bounds(std::vector<int> dims, int k_max, const CommonFlags& flags) {
  if (dims.empty()) dims = {2, 2};
  const std::string table =
      cli::render_bounds_table(cli::cmd_bounds(qlinalg::DimensionProfile(dims),
                                               k_max));
  std::cout << table;
  write_text(out_path(flags, "bounds.txt"), table);
  for (const auto& row : cli::cmd_bounds(qlinalg::DimensionProfile(dims), k_max))
    if (row.violation) return kExitInvariant;
  return kExitOk;
}

int run_instances(const CommonFlags& flags) {
  const auto rows = cli::cmd_instances();
  const std::string table = cli::render_instances_table(rows);
  std::cout << table;
  write_text(out_path(flags, "instances.txt"), table);
  if (!flags.out_dir.empty()) {
    for (const auto& inst : analytic::named_instances())
      cli::save_observables(out_path(flags, inst.name + ".json").string(),
                            inst.observables);
  }
  for (const auto& row : rows)
    if (row.violation) return kExitInvariant;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"joint and separable numerical ranges: volumes, bounds and "
               "entanglement certification"};
  app.require_subcommand(1);

  CommonFlags flags;
  app.add_option("--seed", flags.seed, "base RNG seed");
  app.add_option("--directions", flags.directions, "support directions per body");
  app.add_option("--mc-samples", flags.mc_samples, "Monte-Carlo samples");
  app.add_option("--grid", flags.grid, "angle-grid resolution");
  app.add_option("--alpha", flags.alpha, "confidence level parameter");
  app.add_option("--out-dir", flags.out_dir, "output directory");
  app.add_option("--format", flags.format, "output format (json or csv)")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_flag("--serial", flags.serial, "disable the OpenMP kernels");

  int cert_grid = 384;
  app.add_option("--cert-grid", cert_grid,
                 "grid per axis for certified separable supports");

  auto* ratio = app.add_subcommand("ratio", "volume ratio of an observable file");
  std::string obs_file;
  ratio->add_option("observables", obs_file, "observable JSON file")->required();

  auto* goe = app.add_subcommand("goe", "GOE average-case sweep");
  int goe_d = 2, goe_samples = 100;
  std::vector<int> goe_k;
  goe->add_option("-d,--local-dim", goe_d, "local dimension d");
  goe->add_option("-k,--k-list", goe_k, "observable counts (default 1 2 3)");
  goe->add_option("-n,--samples", goe_samples, "samples per k");

  auto* sweep = app.add_subcommand("product-sweep",
                                   "two-angle product-observable sweep");
  bool no_numeric = false;
  sweep->add_flag("--analytic-only", no_numeric, "skip the numerical bodies");

  auto* conf = app.add_subcommand("confidence",
                                  "entanglement certificate from shot data");
  std::string data_file;
  std::vector<double> custom_t;
  conf->add_option("observables", obs_file, "observable JSON file")->required();
  conf->add_option("data", data_file, "per-shot CSV data")->required();
  conf->add_option("--half-widths", custom_t,
                   "custom rectangle half-widths (unit-width scale)");

  auto* bounds = app.add_subcommand("bounds", "dimension bounds table");
  std::vector<int> bound_dims;
  int bounds_kmax = 4;
  bounds->add_option("--dims", bound_dims, "local dimensions (default 2 2)");
  bounds->add_option("--k-max", bounds_kmax, "largest observable count");

  app.add_subcommand("instances", "named benchmark instances table");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("ratio")) return run_ratio(obs_file, flags, cert_grid);
    if (app.got_subcommand("goe"))
      return run_goe(goe_d, goe_k, goe_samples, flags, cert_grid);
    if (app.got_subcommand("product-sweep"))
      return run_sweep(flags, flags.directions, no_numeric, cert_grid);
    if (app.got_subcommand("confidence"))
      return run_confidence(obs_file, data_file, flags, cert_grid, custom_t);
    if (app.got_subcommand("bounds")) return run_bounds(bound_dims, bounds_kmax, flags);
    if (app.got_subcommand("instances")) return run_instances(flags);
  } catch (const nrange::cli::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const nrange::UnsupportedDimensionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUnsupported;
  } catch (const nrange::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUnsupported;
  } catch (const nrange::ShapeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUnsupported;
  } catch (const nrange::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUnsupported;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInvariant;
  }
  return kExitOk;
}
