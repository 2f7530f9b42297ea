// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "nrange/analytic.hpp"
#include "nrange/drivers.hpp"
#include "nrange/io.hpp"
#include "nrange/qlinalg.hpp"
#include "nrange/rng.hpp"

using namespace nrange;
using namespace nrange::cli;
using qlinalg::DimensionProfile;
using qlinalg::HermitianMatrix;
using qlinalg::identity;
using qlinalg::kron;
using qlinalg::ObservableSet;
using qlinalg::pauli_x;
using qlinalg::pauli_z;
using qlinalg::projector;

namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("nrange-test-" + std::to_string(std::rand()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("observable json round trip") {
  TempDir tmp;
  const ObservableSet set(DimensionProfile({2, 2}),
                          {kron(pauli_x(), pauli_x()), kron(pauli_z(), pauli_z())});
  const std::string path = (tmp.path / "obs.json").string();
  save_observables(path, set);
  const ObservableSet loaded = load_observables(path);
  CHECK(loaded.k() == 2);
  CHECK(loaded.profile.local_dims() == std::vector<int>{2, 2});
  for (int i = 0; i < 2; ++i)
    CHECK((loaded.observables[i] - set.observables[i]).frobenius_norm() < 1e-14);
}

TEST_CASE("observable json validation") {
  TempDir tmp;
  const std::string path = (tmp.path / "bad.json").string();
  {
    std::ofstream out(path);
    out << R"({"dims": [2, 2], "observables": [{"re": [[0,1,0,0],[0,0,0,0],)"
        << R"([0,0,0,0],[0,0,0,0]], "im": [[0,0,0,0],[0,0,0,0],[0,0,0,0],)"
        << R"([0,0,0,0]]}]})";
  }
  CHECK_THROWS_AS(load_observables(path), IoError);  // not symmetric
  CHECK_THROWS_AS(load_observables((tmp.path / "missing.json").string()), IoError);
}

TEST_CASE("shots csv round trip with header") {
  TempDir tmp;
  const std::string path = (tmp.path / "shots.csv").string();
  {
    std::ofstream out(path);
    out << "a1,a2\n1.0,0.5\n0.0,-0.5\n1.0,0.5\n";
  }
  const auto rows = load_shots_csv(path, 2);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0][0] == 1.0);
  CHECK(rows[1][1] == -0.5);
  CHECK_THROWS_AS(load_shots_csv(path, 3), IoError);
}

TEST_CASE("cmd_ratio on a file with a duplicate observable") {
  const HermitianMatrix xx = kron(pauli_x(), pauli_x());
  const HermitianMatrix zz = kron(pauli_z(), pauli_z());
  const ObservableSet set(DimensionProfile({2, 2}),
                          {xx, zz, 2.0 * xx + identity(4)});
  RatioOptions opt;
  opt.directions = 240;
  opt.mc_samples = 30000;
  opt.cert_grid = 128;
  const RatioReport report = cmd_ratio(set, opt);
  CHECK(report.k_input == 3);
  CHECK(report.k_reduced == 2);
  REQUIRE(report.reduction.dropped.size() == 1);
  CHECK(report.reduction.dropped[0] == 2);
  CHECK(report.ratio.estimate == doctest::Approx(0.5).epsilon(0.03));
  CHECK(report.ratio.lower <= 0.5);
  CHECK(report.ratio.upper >= 0.5);

  const auto j = report.to_json();
  CHECK(j["k_reduced"] == 2);
  CHECK(j.contains("seed"));
  CHECK(j.contains("version"));
}

TEST_CASE("cmd_ratio rejects k > 3 and all-identity sets") {
  std::vector<HermitianMatrix> many;
  const auto basis = qlinalg::gellmann_basis(4);
  for (int i = 0; i < 4; ++i) many.push_back(basis[i]);
  const ObservableSet set(DimensionProfile({2, 2}), many);
  RatioOptions opt;
  CHECK_THROWS_AS(cmd_ratio(set, opt), UnsupportedDimensionError);

  const ObservableSet ids(DimensionProfile({2, 2}), {identity(4)});
  CHECK_THROWS_AS(cmd_ratio(ids, opt), DegenerateBodyError);
}

TEST_CASE("sample_shots matches the state's expectations") {
  const ObservableSet set(DimensionProfile({2, 2}),
                          {kron(pauli_x(), pauli_x()), kron(pauli_z(), pauli_z())});
  const HermitianMatrix bell = projector(qlinalg::bell_phi_plus());
  const auto rows = sample_shots(set, bell, 20000, 7);
  REQUIRE(rows.size() == 20000);
  double mean0 = 0.0, mean1 = 0.0;
  for (const auto& r : rows) {
    mean0 += r[0];
    mean1 += r[1];
  }
  mean0 /= rows.size();
  mean1 /= rows.size();
  // <XX> = <ZZ> = 1 on the Bell state: every outcome is the top eigenvalue.
  CHECK(mean0 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(mean1 == doctest::Approx(1.0).epsilon(1e-12));

  const auto mixed_rows = sample_shots(set, 0.25 * identity(4), 20000, 8);
  double mx = 0.0;
  for (const auto& r : mixed_rows) mx += r[0];
  mx /= mixed_rows.size();
  CHECK(mx == doctest::Approx(0.0).epsilon(0.02));
}

TEST_CASE("cmd_confidence certifies Bell data and rejects mixed data") {
  const ObservableSet bell_obs(DimensionProfile({2, 2}),
                               {projector(qlinalg::bell_phi_plus())});
  const HermitianMatrix bell = projector(qlinalg::bell_phi_plus());
  const auto shots = sample_shots(bell_obs, bell, 10000, 11);

  ConfidenceOptions opt;
  opt.alpha = 0.05;
  opt.cert_grid = 768;
  const ConfidenceReport report = cmd_confidence(bell_obs, shots, opt);
  REQUIRE(report.certificate.has_value());
  CHECK(report.certificate->margin > 0.0);
  CHECK(report.certificate->sep_support_certified ==
        doctest::Approx(0.5).epsilon(0.05));
  // Estimator of <Bell> on the Bell state is 1 (width 1 observable).
  CHECK(report.rect.center[0] == doctest::Approx(1.0).epsilon(1e-9));

  // Maximally mixed data: no certificate.
  const auto mixed_shots = sample_shots(bell_obs, 0.25 * identity(4), 4000, 12);
  const ConfidenceReport none = cmd_confidence(bell_obs, mixed_shots, opt);
  CHECK_FALSE(none.certificate.has_value());

  const auto j = report.to_json();
  CHECK(j["certificate"]["margin"].get<double>() > 0.0);
}

TEST_CASE("cmd_confidence validates inputs") {
  const ObservableSet obs(DimensionProfile({2, 2}),
                          {kron(pauli_z(), pauli_z())});
  ConfidenceOptions opt;
  // Outcome outside the spectrum.
  CHECK_THROWS_AS(cmd_confidence(obs, {{2.0}}, opt), IoError);
  // Wrong profile.
  const ObservableSet q33(DimensionProfile({3, 3}),
                          {qlinalg::identity(9) - qlinalg::identity(9)});
  CHECK_THROWS_AS(cmd_confidence(q33, {{0.0}}, opt), UnsupportedDimensionError);
  // Custom half-widths too small for alpha.
  ConfidenceOptions tight;
  tight.custom_t = {1e-4};
  CHECK_THROWS_AS(cmd_confidence(obs, {{1.0}, {1.0}}, tight), ConfigError);
}

TEST_CASE("hoeffding empirical coverage") {
  // 1000 simulated rectangles from a fixed state; the truth must land in the
  // rectangle at least (1 - alpha - 3 sigma) of the time.
  const ObservableSet set(DimensionProfile({2, 2}),
                          {kron(pauli_x(), pauli_x()), kron(pauli_z(), pauli_z())});
  const HermitianMatrix rho = qlinalg::sample_hs_state(4, 33);
  std::vector<double> truth(2);
  std::vector<double> width(2);
  for (int j = 0; j < 2; ++j) {
    const auto eg = qlinalg::eigh(set.observables[j]);
    width[j] = eg.eigenvalues.max() - eg.eigenvalues.min();
    cd acc{0, 0};
    truth[j] = 0.0;
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c)
        acc += set.observables[j](r, c) * rho(c, r);
    truth[j] = acc.real();
  }

  const double alpha = 0.2;
  const int m = 120, runs = 1000;
  const double t = std::sqrt(std::log(2.0 * 2 / alpha) / (2.0 * m));
  int covered = 0;
  for (int run = 0; run < runs; ++run) {
    const auto rows = sample_shots(set, rho, m, 5000 + run);
    bool ok = true;
    for (int j = 0; j < 2; ++j) {
      double mean = 0.0;
      for (const auto& r : rows) mean += r[j];
      mean /= m;
      if (std::abs(mean - truth[j]) > t * width[j]) ok = false;
    }
    if (ok) ++covered;
  }
  const double sigma = std::sqrt(alpha * (1.0 - alpha) / runs);
  CHECK(static_cast<double>(covered) / runs >= 1.0 - alpha - 3.0 * sigma);
}

TEST_CASE("bounds and instances tables") {
  const auto rows = cmd_bounds(DimensionProfile({2, 2}), 4);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].theorem3 == doctest::Approx(1.0 / 3.0));
  CHECK(rows[1].theorem3 == doctest::Approx(1.0 / 9.0));
  CHECK(rows[2].theorem3 == doctest::Approx(1.0 / 27.0));
  CHECK(rows[3].theorem3 == doctest::Approx(1.0 / 81.0));
  REQUIRE(rows[0].abs_sep_lower.has_value());
  CHECK(*rows[0].abs_sep_lower ==
        doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-9));
  for (const auto& row : rows) CHECK_FALSE(row.violation);
  // k=1 best instance is the Bell projector at 1/2 >= sqrt(2)-1.
  REQUIRE(rows[0].instance_ratio.has_value());
  CHECK(*rows[0].instance_ratio == doctest::Approx(0.5));

  const auto instances = cmd_instances();
  for (const auto& row : instances) {
    CHECK(row.expected_ratio >= row.theorem3 - 1e-12);
    CHECK_FALSE(row.violation);
  }
  const std::string table = render_instances_table(instances);
  CHECK(table.find("bell-projector") != std::string::npos);
  const std::string btable = render_bounds_table(rows);
  CHECK(btable.find("VIOLATION") == std::string::npos);
}

TEST_CASE("byte-identical reruns of the goe csv data") {
  cli::GoeOptions opt;
  opt.seed = 77;
  opt.seesaw.restarts = 4;
  opt.mc_samples = 2000;
  opt.directions_2d = 60;
  const auto a = cmd_goe(2, {1}, 20, opt);
  const auto b = cmd_goe(2, {1}, 20, opt);
  REQUIRE(a.rows.size() == b.rows.size());
  CHECK(a.rows[0].tau == b.rows[0].tau);
  CHECK(a.rows[0].tau_stderr == b.rows[0].tau_stderr);
  CHECK(a.stats.mean_ratio == b.stats.mean_ratio);
  CHECK(format_double(a.rows[0].tau) == format_double(b.rows[0].tau));
}

TEST_CASE("svg and heatmap writers produce files") {
  TempDir tmp;
  const std::string heat = (tmp.path / "h.svg").string();
  write_heatmap_svg(heat, {{0.1, 0.2}, {0.3, 0.4}}, 0, 1, 0, 1, "demo");
  CHECK(fs::exists(heat));
  SvgCanvas canvas(200, 200, -1, 1, -1, 1);
  canvas.axes();
  canvas.polyline({{-1, -1}, {1, 1}}, "#000");
  const std::string plot = (tmp.path / "p.svg").string();
  canvas.write(plot);
  CHECK(fs::exists(plot));
  std::ifstream in(plot);
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  CHECK(content.find("<svg") != std::string::npos);
  CHECK(content.find("polyline") != std::string::npos);
}
