// SPDX-License-Identifier: Apache-2.0
#include "nrange/septools.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numeric>

#include "nrange/rng.hpp"

namespace nrange::septools {

namespace {

using qlinalg::conditional_operator;
using qlinalg::eigh;
using qlinalg::EighResult;

std::vector<cd> random_unit_vector(int dim, CounterRng& rng) {
  std::vector<cd> v(dim);
  double n2 = 0.0;
  do {
    for (cd& z : v) z = rng.complex_normal();
    n2 = 0.0;
    for (const cd& z : v) n2 += std::norm(z);
  } while (n2 < 1e-12);
  const double inv = 1.0 / std::sqrt(n2);
  for (cd& z : v) z *= inv;
  return v;
}

// Operator on `site` with every other factor fixed.
HermitianMatrix effective_site_operator(const HermitianMatrix& x,
                                        const std::vector<std::vector<cd>>& factors,
                                        const DimensionProfile& profile, int site) {
  HermitianMatrix cur = x;
  std::vector<int> dims = profile.local_dims();
  std::vector<int> ids(dims.size());
  std::iota(ids.begin(), ids.end(), 0);
  while (dims.size() > 1) {
    int pos = (ids[0] == site) ? 1 : 0;
    cur = conditional_operator(cur, factors[ids[pos]], DimensionProfile(dims), pos);
    dims.erase(dims.begin() + pos);
    ids.erase(ids.begin() + pos);
  }
  return cur;
}

// Extreme eigenvector; degenerate levels resolved toward the previous
// iterate to prevent oscillation.
std::pair<double, std::vector<cd>> extreme_eigvec(const HermitianMatrix& m,
                                                  Sense sense,
                                                  const std::vector<cd>& previous) {
  const EighResult eg = eigh(m);
  const int n = m.dim();
  const int extreme = (sense == Sense::max) ? 0 : n - 1;
  const double value = eg.eigenvalues[extreme];
  const double tol = 1e-10 * (1.0 + std::abs(value));

  std::vector<cd> projected(n, cd{0.0, 0.0});
  double proj_norm2 = 0.0;
  for (int i = 0; i < n; ++i) {
    if (std::abs(eg.eigenvalues[i] - value) > tol) continue;
    cd overlap{0.0, 0.0};
    for (int c = 0; c < n; ++c) overlap += std::conj(eg.eigenvectors[i][c]) * previous[c];
    for (int c = 0; c < n; ++c) projected[c] += overlap * eg.eigenvectors[i][c];
  }
  for (const cd& z : projected) proj_norm2 += std::norm(z);
  if (proj_norm2 > 1e-16) {
    const double inv = 1.0 / std::sqrt(proj_norm2);
    for (cd& z : projected) z *= inv;
    return {value, std::move(projected)};
  }
  return {value, eg.eigenvectors[extreme]};
}

// ----- Bloch / Pauli tooling for (2,2) profiles -----

struct PauliForm {
  double t[4][4];  // X = sum t[mu][nu] sigma_mu ox sigma_nu
};

PauliForm pauli_form(const HermitianMatrix& x) {
  static const std::array<std::array<cd, 4>, 4> sigma = {{
      {cd{1, 0}, cd{0, 0}, cd{0, 0}, cd{1, 0}},   // 1
      {cd{0, 0}, cd{1, 0}, cd{1, 0}, cd{0, 0}},   // X
      {cd{0, 0}, cd{0, -1}, cd{0, 1}, cd{0, 0}},  // Y
      {cd{1, 0}, cd{0, 0}, cd{0, 0}, cd{-1, 0}},  // Z
  }};
  PauliForm f{};
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) {
      cd acc{0.0, 0.0};
      for (int a = 0; a < 2; ++a)
        for (int i = 0; i < 2; ++i)
          for (int b = 0; b < 2; ++b)
            for (int j = 0; j < 2; ++j)
              acc += x(a * 2 + i, b * 2 + j) * sigma[mu][b * 2 + a] * sigma[nu][j * 2 + i];
      f.t[mu][nu] = 0.25 * acc.real();
    }
  return f;
}

// max over the partner qubit: c00 + tA.a + || tB + C^T a ||.
double conditional_max(const PauliForm& f, const double a[3], double b_out[3]) {
  double w[3];
  for (int j = 0; j < 3; ++j) {
    w[j] = f.t[0][j + 1];
    for (int i = 0; i < 3; ++i) w[j] += f.t[i + 1][j + 1] * a[i];
  }
  const double wn = std::sqrt(w[0] * w[0] + w[1] * w[1] + w[2] * w[2]);
  if (b_out) {
    if (wn > 1e-14)
      for (int j = 0; j < 3; ++j) b_out[j] = w[j] / wn;
    else {
      b_out[0] = 0.0;
      b_out[1] = 0.0;
      b_out[2] = 1.0;
    }
  }
  double val = f.t[0][0] + wn;
  for (int i = 0; i < 3; ++i) val += f.t[i + 1][0] * a[i];
  return val;
}

std::vector<cd> bloch_to_state(const double a[3]) {
  const double z = std::clamp(a[2], -1.0, 1.0);
  const double theta = std::acos(z);
  const double phi = std::atan2(a[1], a[0]);
  return {cd{std::cos(0.5 * theta), 0.0},
          std::polar(std::sin(0.5 * theta), phi)};
}

}  // namespace

SeesawResult seesaw_product_extremum(const HermitianMatrix& x,
                                     const DimensionProfile& profile, Sense sense,
                                     const SeesawConfig& cfg) {
  if (x.dim() != profile.total_dim()) throw ShapeError("operator/profile mismatch");
  if (cfg.restarts < 1) throw ConfigError("restarts must be >= 1");
  if (cfg.tol <= 0.0) throw ConfigError("tolerance must be positive");
  const int sites = profile.sites();

  SeesawResult best;
  bool have_best = false;
  CounterRng seeder(cfg.seed);
  for (int r = 0; r < cfg.restarts; ++r) {
    CounterRng rng = seeder.split(r);
    std::vector<std::vector<cd>> factors(sites);
    for (int s = 0; s < sites; ++s)
      factors[s] = random_unit_vector(profile.local_dim(s), rng);

    double value = 0.0;
    double prev = (sense == Sense::max) ? -1e300 : 1e300;
    bool converged = false;
    int iters = 0;
    for (; iters < cfg.max_iters; ++iters) {
      for (int s = 0; s < sites; ++s) {
        const HermitianMatrix eff = effective_site_operator(x, factors, profile, s);
        auto [val, vec] = extreme_eigvec(eff, sense, factors[s]);
        factors[s] = std::move(vec);
        value = val;
      }
      if (std::abs(value - prev) <= cfg.tol * (1.0 + std::abs(value))) {
        converged = true;
        break;
      }
      prev = value;
    }

    const bool better = !have_best || (sense == Sense::max ? value > best.value
                                                           : value < best.value);
    if (better) {
      best.value = value;
      best.state = ProductState(factors);
      best.converged = converged;
      best.iterations = iters;
      have_best = true;
    }
  }
  return best;
}

CertifiedBound certified_sep_support_2qubit(const HermitianMatrix& x,
                                            int grid_per_axis) {
  if (x.dim() != 4) throw ShapeError("certified support needs a (2,2) operator");
  if (grid_per_axis < 8) throw ConfigError("grid_per_axis must be >= 8");
  const int g = grid_per_axis;
  const PauliForm f = pauli_form(x);

  double grid_max = -1e300;
  double best_a[3] = {0.0, 0.0, 1.0};
  for (int i = 0; i < g; ++i) {
    const double theta = (i + 0.5) * kPi / g;
    const double st = std::sin(theta), ct = std::cos(theta);
    for (int j = 0; j < g; ++j) {
      const double phi = (j + 0.5) * 2.0 * kPi / g;
      const double a[3] = {st * std::cos(phi), st * std::sin(phi), ct};
      const double val = conditional_max(f, a, nullptr);
      if (val > grid_max) {
        grid_max = val;
        best_a[0] = a[0];
        best_a[1] = a[1];
        best_a[2] = a[2];
      }
    }
  }

  // Seesaw refinement from the best cell.
  double a[3] = {best_a[0], best_a[1], best_a[2]};
  double b[3] = {0.0, 0.0, 1.0};
  double heur = conditional_max(f, a, b);
  for (int it = 0; it < 200; ++it) {
    // a <- argmax for fixed b, then b <- argmax for fixed a.
    double w[3];
    for (int i = 0; i < 3; ++i) {
      w[i] = f.t[i + 1][0];
      for (int j = 0; j < 3; ++j) w[i] += f.t[i + 1][j + 1] * b[j];
    }
    const double wn = std::sqrt(w[0] * w[0] + w[1] * w[1] + w[2] * w[2]);
    if (wn > 1e-14)
      for (int i = 0; i < 3; ++i) a[i] = w[i] / wn;
    const double val = conditional_max(f, a, b);
    if (std::abs(val - heur) <= 1e-13 * (1.0 + std::abs(val))) {
      heur = val;
      break;
    }
    heur = val;
  }

  // Lipschitz bound over the (theta, phi) chart: |d psi| <= sqrt(5)/2 per
  // unit chart step, |f(psi) - f(psi')| <= 2 ||X|| |psi - psi'|.
  const double lips = std::sqrt(5.0) * qlinalg::operator_norm(x);
  const double dtheta = kPi / g, dphi = 2.0 * kPi / g;
  const double h = std::sqrt(dtheta * dtheta + dphi * dphi);

  CertifiedBound out;
  out.heuristic_value = heur;
  out.certified_upper = std::max(grid_max + 0.5 * lips * h, heur);
  out.grid_resolution = h;
  out.lipschitz_constant = lips;
  out.achiever = ProductState({bloch_to_state(a), bloch_to_state(b)});
  return out;
}

SupportSample sep_support_oracle(const ObservableSet& obs, const Direction& u,
                                 const SepOracleConfig& cfg) {
  if (u.k() != obs.k()) throw ShapeError("direction length must match observable count");
  const HermitianMatrix x = qlinalg::combine(obs.observables, u.components());
  const bool two_qubits =
      obs.profile.sites() == 2 && obs.profile.local_dims() == std::vector<int>{2, 2};

  ProductState achiever;
  double value = 0.0, achieved = 0.0;
  bool certified = false;
  if (two_qubits) {
    const CertifiedBound cb = certified_sep_support_2qubit(x, cfg.cert_grid);
    achiever = cb.achiever;
    // SEP is contained in the all-states body, so lambda_max also bounds it.
    value = std::min(cb.certified_upper, qlinalg::lambda_max(x));
    achieved = cb.heuristic_value;
    certified = true;
  } else {
    const SeesawResult sr = seesaw_product_extremum(x, obs.profile, Sense::max,
                                                    cfg.seesaw);
    achiever = sr.state;
    value = sr.value;
    achieved = sr.value;
    certified = false;
  }

  std::vector<double> point(obs.k());
  for (int i = 0; i < obs.k(); ++i) point[i] = achiever.expectation(obs.observables[i]);
  SupportSample s{u, value, achieved, std::move(point), certified, achiever, {}};
  return s;
}

GoeRatioStats goe_ratio_statistic(int total_dim, int samples,
                                  const SeesawConfig& cfg, std::uint64_t seed,
                                  Exec exec) {
  const int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(total_dim))));
  if (d < 2 || d * d != total_dim)
    throw ShapeError("total dimension must be a perfect square d^2 with d >= 2");
  if (samples < 1) throw ConfigError("samples must be >= 1");
  const DimensionProfile profile({d, d});

  std::vector<double> ratio(samples), abs_min(samples), abs_prod(samples);
  CounterRng seeder(seed);
  parallel_for(exec, samples, [&](std::int64_t i) {
    CounterRng rs = seeder.split(static_cast<std::uint64_t>(i));
    const HermitianMatrix x = qlinalg::sample_goe(total_dim, rs.next_u64());
    const double lmin = qlinalg::lambda_min(x);
    SeesawConfig local = cfg;
    local.seed = rs.next_u64();
    const SeesawResult sr = seesaw_product_extremum(x, profile, Sense::min, local);
    ratio[i] = sr.value / lmin;
    abs_min[i] = std::abs(lmin);
    abs_prod[i] = std::abs(sr.value);
  });

  GoeRatioStats out;
  out.samples = samples;
  const double n = static_cast<double>(samples);
  out.mean_ratio = std::accumulate(ratio.begin(), ratio.end(), 0.0) / n;
  out.mean_abs_lambda_min = std::accumulate(abs_min.begin(), abs_min.end(), 0.0) / n;
  out.mean_abs_lambda_prod_min =
      std::accumulate(abs_prod.begin(), abs_prod.end(), 0.0) / n;
  double var = 0.0;
  for (double r : ratio) var += (r - out.mean_ratio) * (r - out.mean_ratio);
  out.stderr_ratio = samples > 1 ? std::sqrt(var / (n - 1.0) / n) : 0.0;
  return out;
}

bool is_absolutely_separable(const Spectrum& state_spectrum) {
  if (state_spectrum.size() != 4)
    throw ShapeError("absolute separability test needs a two-qubit spectrum");
  const double l1 = state_spectrum[0], l2 = state_spectrum[1];
  const double l3 = state_spectrum[2], l4 = state_spectrum[3];
  return (l1 - l3) * (l1 - l3) <= 4.0 * l2 * l4 + 1e-12;
}

namespace {

// Objective on the active boundary (l1 - l3)^2 = 4 l2 l4 parameterized by
// (l2, l4); returns -inf when the ordering constraints fail.
double surface_value(const std::vector<double>& e, double l2, double l4) {
  if (l2 < 0.0 || l4 < 0.0) return -1e300;
  const double s = 1.0 - l2 - l4;
  const double w = 2.0 * std::sqrt(l2 * l4);
  const double l1 = 0.5 * (s + w), l3 = 0.5 * (s - w);
  const double slack = 1e-12;
  if (l1 < l2 - slack || l2 < l3 - slack || l3 < l4 - slack || l4 < -slack)
    return -1e300;
  return e[0] * l1 + e[1] * l2 + e[2] * l3 + e[3] * l4;
}

double golden_max(const std::function<double(double)>& f, double lo, double hi,
                  double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return std::max(f(0.5 * (a + b)), std::max(fc, fd));
}

double max_over_abs_sep(const std::vector<double>& e) {
  double best = 0.25 * (e[0] + e[1] + e[2] + e[3]);           // maximally mixed
  best = std::max(best, (e[0] + e[1] + e[2]) / 3.0);          // (1/3,1/3,1/3,0)
  best = std::max(best, 0.5 * e[0] + (e[1] + e[2] + e[3]) / 6.0);  // (1/2,1/6,1/6,1/6)
  {
    // l1 = l2 = a, l3 = l4 = b corner of the boundary surface.
    const double b = (2.0 - std::sqrt(2.0)) / 8.0;
    const double a = 0.5 - b;
    best = std::max(best, (e[0] + e[1]) * a + (e[2] + e[3]) * b);
  }

  // Dense scan of the active surface in (l2, l4), then golden refinement.
  const int grid = 400;
  double best_l2 = 0.0, best_l4 = 0.0;
  for (int i = 0; i <= grid; ++i) {
    const double l2 = 0.5 * i / grid;
    for (int j = 0; j <= grid; ++j) {
      const double l4 = 0.25 * j / grid;
      const double v = surface_value(e, l2, l4);
      if (v > best) {
        best = v;
        best_l2 = l2;
        best_l4 = l4;
      }
    }
  }
  const double step2 = 0.5 / grid, step4 = 0.25 / grid;
  double l2 = best_l2, l4 = best_l4;
  for (int round = 0; round < 60; ++round) {
    const double w2 = step2 / std::pow(1.6, round);
    const double w4 = step4 / std::pow(1.6, round);
    l2 = std::clamp(l2, 0.0, 0.5);
    const double l4c = l4;
    const double l2n = [&] {
      double lo = std::max(0.0, l2 - w2), hi = std::min(0.5, l2 + w2);
      double arg = l2, val = surface_value(e, l2, l4c);
      for (int t = 0; t <= 32; ++t) {
        const double x = lo + (hi - lo) * t / 32.0;
        const double v = surface_value(e, x, l4c);
        if (v > val) {
          val = v;
          arg = x;
        }
      }
      return arg;
    }();
    l2 = l2n;
    double lo = std::max(0.0, l4 - w4), hi = std::min(0.25, l4 + w4);
    double arg = l4, val = surface_value(e, l2, l4);
    for (int t = 0; t <= 32; ++t) {
      const double x = lo + (hi - lo) * t / 32.0;
      const double v = surface_value(e, l2, x);
      if (v > val) {
        val = v;
        arg = x;
      }
    }
    l4 = arg;
    best = std::max(best, val);
  }

  // Boundary branches as one-dimensional golden searches; the surface
  // equation plus the branch equality fix the remaining eigenvalues.
  auto check = [&](double l1, double l2, double l3, double l4) {
    const double sl = 1e-12;
    if (l1 < l2 - sl || l2 < l3 - sl || l3 < l4 - sl || l4 < -sl) return -1e300;
    return e[0] * l1 + e[1] * l2 + e[2] * l3 + e[3] * l4;
  };
  // l2 = l3 = t: l1 = -t + sqrt(4t - 8t^2), l4 = 1 - l1 - 2t.
  best = std::max(best, golden_max(
                            [&](double t) {
                              const double disc = 4.0 * t - 8.0 * t * t;
                              if (disc < 0.0) return -1e300;
                              const double l1 = -t + std::sqrt(disc);
                              return check(l1, t, t, 1.0 - l1 - 2.0 * t);
                            },
                            0.0, 0.5, 1e-12));
  // l1 = l2 = t: l3 = -t + sqrt(4t - 8t^2), l4 = 1 - 2t - l3.
  best = std::max(best, golden_max(
                            [&](double t) {
                              const double disc = 4.0 * t - 8.0 * t * t;
                              if (disc < 0.0) return -1e300;
                              const double l3 = -t + std::sqrt(disc);
                              return check(t, t, l3, 1.0 - 2.0 * t - l3);
                            },
                            0.0, 0.5, 1e-12));
  // l3 = l4 = t: l2 = (1 - t) - 2 sqrt(t - 2t^2), l1 = 1 - l2 - 2t.
  best = std::max(best, golden_max(
                            [&](double t) {
                              const double disc = t - 2.0 * t * t;
                              if (disc < 0.0) return -1e300;
                              const double l2 = (1.0 - t) - 2.0 * std::sqrt(disc);
                              return check(1.0 - l2 - 2.0 * t, l2, t, t);
                            },
                            0.0, 0.5, 1e-12));
  return best;
}

}  // namespace

double abs_sep_extremum(std::vector<double> observable_eigenvalues, Sense sense) {
  if (observable_eigenvalues.size() != 4)
    throw ShapeError("two-qubit observable needs 4 eigenvalues");
  std::sort(observable_eigenvalues.begin(), observable_eigenvalues.end(),
            std::greater<double>());
  if (sense == Sense::max) return max_over_abs_sep(observable_eigenvalues);
  // min_rho Tr A rho = 1 - max_rho Tr (1 - A) rho.
  std::vector<double> complement(4);
  for (int i = 0; i < 4; ++i) complement[i] = 1.0 - observable_eigenvalues[3 - i];
  return 1.0 - max_over_abs_sep(complement);
}

bool ppt_check(const HermitianMatrix& rho, const DimensionProfile& profile) {
  const HermitianMatrix pt = qlinalg::partial_transpose(rho, profile, 1);
  return qlinalg::lambda_min(pt) >= -1e-10;
}

double hs_ppt_fraction(const DimensionProfile& profile, int samples,
                       std::uint64_t seed, Exec exec) {
  if (profile.sites() != 2) throw ShapeError("PPT fraction needs a bipartite profile");
  if (samples < 1) throw ConfigError("samples must be >= 1");
  const int dim = profile.total_dim();
  const std::int64_t block = 1024;
  const std::int64_t blocks = (samples + block - 1) / block;
  std::vector<std::int64_t> hits(blocks, 0);
  CounterRng seeder(seed);
  parallel_for(exec, blocks, [&](std::int64_t b) {
    std::int64_t h = 0;
    const std::int64_t lo = b * block, hi = std::min<std::int64_t>(samples, lo + block);
    for (std::int64_t i = lo; i < hi; ++i) {
      CounterRng rs = seeder.split(static_cast<std::uint64_t>(i));
      const HermitianMatrix rho = qlinalg::sample_hs_state(dim, rs.next_u64());
      if (ppt_check(rho, profile)) ++h;
    }
    hits[b] = h;
  });
  const std::int64_t total = std::accumulate(hits.begin(), hits.end(), std::int64_t{0});
  return static_cast<double>(total) / static_cast<double>(samples);
}

}  // namespace nrange::septools
