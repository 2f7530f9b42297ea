// SPDX-License-Identifier: Apache-2.0
//
// Compares the serial reference implementations against the OpenMP kernels
// on the hot loops: support sampling, Monte-Carlo volume, GOE statistics and
// the PPT fraction.
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "nrange/analytic.hpp"
#include "nrange/drivers.hpp"
#include "nrange/parallel.hpp"
#include "nrange/rangegeom.hpp"
#include "nrange/septools.hpp"

using namespace nrange;

namespace {

double time_ms(const std::function<void()>& fn) {
  const auto start = std::chrono::steady_clock::now();
  fn();
  const auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(stop - start).count();
}

void report(const std::string& name, double serial_ms, double parallel_ms) {
  std::printf("%-28s serial %9.1f ms   parallel %9.1f ms   speedup %.2fx\n",
              name.c_str(), serial_ms, parallel_ms, serial_ms / parallel_ms);
}

}  // namespace

int main() {
  std::printf("threads available: %d\n\n", max_threads());

  // Support sampling + hull for the Bloch-ball instance.
  const auto instances = analytic::named_instances();
  const auto& bloch = instances[2].observables;  // three Pauli blocks
  auto body_run = [&](Exec exec) {
    const auto body = rangegeom::build_body(
        bloch,
        [](const qlinalg::ObservableSet& o, const rangegeom::Direction& u) {
          return rangegeom::support_all(o, u);
        },
        1500, exec);
    rangegeom::VolumeConfig vc;
    vc.mc_samples = 200000;
    vc.seed = 7;
    vc.exec = exec;
    (void)rangegeom::volume_bracket(body, vc);
  };
  report("body build + MC volume", time_ms([&] { body_run(Exec::serial); }),
         time_ms([&] { body_run(Exec::parallel); }));

  // Separable support sweep (seesaw + certified grid) on the same body.
  auto sep_run = [&](Exec exec) {
    septools::SepOracleConfig cfg;
    cfg.cert_grid = 192;
    cfg.seesaw.restarts = 8;
    (void)rangegeom::build_body(
        bloch,
        [&](const qlinalg::ObservableSet& o, const rangegeom::Direction& u) {
          return septools::sep_support_oracle(o, u, cfg);
        },
        300, exec);
  };
  report("separable support sweep", time_ms([&] { sep_run(Exec::serial); }),
         time_ms([&] { sep_run(Exec::parallel); }));

  // GOE ratio statistic, two qubits.
  septools::SeesawConfig goe_cfg;
  goe_cfg.restarts = 16;
  report("GOE ratio statistic d=2",
         time_ms([&] {
           (void)septools::goe_ratio_statistic(4, 400, goe_cfg, 11, Exec::serial);
         }),
         time_ms([&] {
           (void)septools::goe_ratio_statistic(4, 400, goe_cfg, 11, Exec::parallel);
         }));

  // Hilbert-Schmidt PPT fraction.
  const qlinalg::DimensionProfile p22({2, 2});
  report("HS PPT fraction 40k",
         time_ms([&] {
           (void)septools::hs_ppt_fraction(p22, 40000, 3, Exec::serial);
         }),
         time_ms([&] {
           (void)septools::hs_ppt_fraction(p22, 40000, 3, Exec::parallel);
         }));
  return 0;
}
