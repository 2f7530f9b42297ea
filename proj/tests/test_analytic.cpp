// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>

#include "nrange/analytic.hpp"
#include "nrange/qlinalg.hpp"
#include "nrange/rangegeom.hpp"
#include "nrange/rng.hpp"

using namespace nrange;
using namespace nrange::analytic;

namespace {

// Test-side adaptive Simpson, independent of the library quadrature.
double simpson_rec(const std::function<double(double)>& f, double lo, double hi,
                   double flo, double fmid, double fhi, double tol, int depth) {
  const double mid = 0.5 * (lo + hi);
  const double fl = f(0.5 * (lo + mid));
  const double fr = f(0.5 * (mid + hi));
  const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
  const double split = (mid - lo) / 6.0 * (flo + 4.0 * fl + fmid) +
                       (hi - mid) / 6.0 * (fmid + 4.0 * fr + fhi);
  if (depth <= 0 || std::abs(split - whole) < 15.0 * tol)
    return split + (split - whole) / 15.0;
  return simpson_rec(f, lo, mid, flo, fl, fmid, 0.5 * tol, depth - 1) +
         simpson_rec(f, mid, hi, fmid, fr, fhi, 0.5 * tol, depth - 1);
}

double quad(const std::function<double(double)>& f, double lo, double hi,
            double tol = 1e-12) {
  const double mid = 0.5 * (lo + hi);
  return simpson_rec(f, lo, hi, f(lo), f(mid), f(hi), tol, 40);
}

// Defining integrals of the complete elliptic integrals.
double K_quad(double m) {
  return quad([m](double t) {
    const double s = std::sin(t);
    return 1.0 / std::sqrt(1.0 - m * s * s);
  }, 0.0, 0.5 * kPi);
}

double E_quad(double m) {
  return quad([m](double t) {
    const double s = std::sin(t);
    return std::sqrt(1.0 - m * s * s);
  }, 0.0, 0.5 * kPi);
}

// Boundary polygon of the Minkowski sum of two axis-aligned ellipses,
// parameterized by the outward normal angle; shoelace area.
double minkowski_polygon_area(double a1, double b1, double a2, double b2,
                              int n = 20000) {
  auto bd = [](double a, double b, double phi, double* x, double* y) {
    const double c = std::cos(phi), s = std::sin(phi);
    const double h = std::sqrt(a * a * c * c + b * b * s * s);
    if (h <= 0.0) {
      *x = 0.0;
      *y = 0.0;
      return;
    }
    *x = a * a * c / h;
    *y = b * b * s / h;
  };
  double area = 0.0;
  double px = 0.0, py = 0.0, x0 = 0.0, y0 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double phi = 2.0 * kPi * i / n;
    double x1, y1, x2, y2;
    bd(a1, b1, phi, &x1, &y1);
    bd(a2, b2, phi, &x2, &y2);
    const double x = x1 + x2, y = y1 + y2;
    if (i == 0) {
      x0 = x;
      y0 = y;
    } else {
      area += px * y - py * x;
    }
    px = x;
    py = y;
  }
  area += px * y0 - py * x0;
  return 0.5 * std::abs(area);
}

double sep_volume_oracle(double theta_a, double theta_b) {
  const double tm = theta_a - theta_b, tp = theta_a + theta_b;
  const double inv = 1.0 / std::sqrt(2.0);
  return minkowski_polygon_area(std::abs(std::cos(0.5 * tm)) * inv,
                                std::abs(std::sin(0.5 * tm)) * inv,
                                std::abs(std::cos(0.5 * tp)) * inv,
                                std::abs(std::sin(0.5 * tp)) * inv);
}

// Convex hull of the two boundary ellipses of the joint numerical range.
double all_volume_oracle(double theta_a, double theta_b, int n = 20000) {
  const double tm = theta_a - theta_b, tp = theta_a + theta_b;
  std::vector<std::vector<double>> pts;
  pts.reserve(2 * n);
  const double root2 = std::sqrt(2.0);
  for (int i = 0; i < n; ++i) {
    const double t = 2.0 * kPi * i / n;
    pts.push_back({root2 * std::abs(std::cos(0.5 * tp)) * std::cos(t),
                   root2 * std::abs(std::sin(0.5 * tp)) * std::sin(t)});
    pts.push_back({root2 * std::abs(std::cos(0.5 * tm)) * std::cos(t),
                   root2 * std::abs(std::sin(0.5 * tm)) * std::sin(t)});
  }
  return rangegeom::hull_volume(pts, 2);
}

}  // namespace

TEST_CASE("elliptic integral endpoints and domain") {
  CHECK(elliptic_K(0.0) == doctest::Approx(0.5 * kPi).epsilon(1e-14));
  CHECK(elliptic_E(0.0) == doctest::Approx(0.5 * kPi).epsilon(1e-14));
  CHECK(elliptic_E(1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(elliptic_K(1.0), DomainError);
  CHECK_THROWS_AS(elliptic_K(-0.1), DomainError);
  CHECK_THROWS_AS(elliptic_E(1.1), DomainError);
}

TEST_CASE("elliptic integrals match the defining quadrature") {
  for (double m : {0.1, 0.25, 0.5, 0.75, 0.9, 0.99}) {
    CHECK(std::abs(elliptic_K(m) - K_quad(m)) < 1e-10);
    CHECK(std::abs(elliptic_E(m) - E_quad(m)) < 1e-10);
    CHECK(elliptic_E(m) <= elliptic_K(m));
  }
}

TEST_CASE("elliptic derivative identities against quadrature differences") {
  const double h = 1e-5;
  for (double m : {0.2, 0.5, 0.8}) {
    const double dK = (K_quad(m + h) - K_quad(m - h)) / (2.0 * h);
    const double dE = (E_quad(m + h) - E_quad(m - h)) / (2.0 * h);
    const double K = elliptic_K(m), E = elliptic_E(m);
    CHECK(dK == doctest::Approx((E - (1.0 - m) * K) / (2.0 * m * (1.0 - m)))
                    .epsilon(1e-6));
    CHECK(dE == doctest::Approx((E - K) / (2.0 * m)).epsilon(1e-6));
  }
}

TEST_CASE("separable product volume formula") {
  // Diamond: the degenerate fallback branch.
  CHECK(sep_volume_product_2q(ProductAngles(0.5 * kPi, 0.5 * kPi)) ==
        doctest::Approx(2.0).epsilon(1e-10));
  // Coincident observables collapse to a segment.
  CHECK(sep_volume_product_2q(ProductAngles(0.0, 0.0)) ==
        doctest::Approx(0.0).epsilon(1e-12));

  // Figure instance plus generic angles against the polygon oracle.
  const double targets[][2] = {{3.0 * kPi / 4.0, kPi / 3.0},
                               {0.5 * kPi, 0.25 * kPi},
                               {0.3, 1.1},
                               {2.7, 0.4},
                               {1.9, 2.2},
                               {1.0, 1.0},
                               {2.0, 0.5 * kPi}};
  for (const auto& t : targets) {
    const double formula = sep_volume_product_2q(ProductAngles(t[0], t[1]));
    const double oracle = sep_volume_oracle(t[0], t[1]);
    CHECK(formula == doctest::Approx(oracle).epsilon(1e-4));
    CHECK(std::abs(formula - oracle) < 1e-6);
  }
}

TEST_CASE("joint product volume formula") {
  CHECK(all_volume_product_2q(ProductAngles(0.5 * kPi, 0.5 * kPi)) ==
        doctest::Approx(4.0).epsilon(1e-12));
  CHECK(all_volume_product_2q(ProductAngles(0.0, 0.5 * kPi)) ==
        doctest::Approx(kPi).epsilon(1e-12));
  CHECK(all_volume_product_2q(ProductAngles(0.0, 0.0)) ==
        doctest::Approx(0.0).epsilon(1e-12));

  const double targets[][2] = {{3.0 * kPi / 4.0, kPi / 3.0},
                               {0.5 * kPi, 0.25 * kPi},
                               {0.3, 1.1},
                               {1.9, 2.2}};
  for (const auto& t : targets) {
    const double formula = all_volume_product_2q(ProductAngles(t[0], t[1]));
    const double oracle = all_volume_oracle(t[0], t[1]);
    CHECK(formula == doctest::Approx(oracle).epsilon(1e-4));
  }
}

TEST_CASE("product ratio value and symmetries") {
  CHECK(ratio_product_2q(ProductAngles(0.5 * kPi, 0.5 * kPi)) ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK_THROWS_AS(ratio_product_2q(ProductAngles(0.0, 0.0)),
                  DegenerateBodyError);

  CounterRng rng(4);
  for (int trial = 0; trial < 12; ++trial) {
    const double a = rng.uniform(0.05, kPi - 0.05);
    const double b = rng.uniform(0.05, kPi - 0.05);
    const double r = ratio_product_2q(ProductAngles(a, b));
    CHECK(r == doctest::Approx(ratio_product_2q(ProductAngles(b, a)))
                   .epsilon(1e-12));
    CHECK(r == doctest::Approx(ratio_product_2q(ProductAngles(kPi - a, kPi - b)))
                   .epsilon(1e-9));
    CHECK(sep_volume_product_2q(ProductAngles(a, b)) <=
          all_volume_product_2q(ProductAngles(a, b)) + 1e-12);
  }

  // Stays above the dimension bound 1/9 for two observables on two qubits.
  const double bound =
      theorem3_bound(qlinalg::DimensionProfile({2, 2}), 2).value;
  CHECK(bound == doctest::Approx(1.0 / 9.0).epsilon(1e-12));
  for (int i = 0; i < 64; ++i) {
    for (int j = 0; j < 64; ++j) {
      const ProductAngles angles((i + 0.5) * kPi / 64, (j + 0.5) * kPi / 64);
      CHECK(ratio_product_2q(angles) >= bound - 1e-9);
    }
  }
}

TEST_CASE("product pair observables") {
  const auto set = product_pair_observables(ProductAngles(0.5 * kPi, 0.5 * kPi));
  REQUIRE(set.k() == 2);
  using namespace qlinalg;
  CHECK((set.observables[0] - kron(pauli_x(), pauli_x())).frobenius_norm() <
        1e-14);
  CHECK((set.observables[1] - kron(pauli_z(), pauli_z())).frobenius_norm() <
        1e-14);
}

TEST_CASE("theorem3 bounds") {
  const qlinalg::DimensionProfile q22({2, 2});
  const auto b1 = theorem3_bound(q22, 1);
  CHECK(b1.value == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(b1.formula == BoundFormula::bipartite_equal_dims);
  CHECK(theorem3_bound(q22, 3).value == doctest::Approx(1.0 / 27.0).epsilon(1e-12));
  CHECK(theorem3_bound(q22, 4).value == doctest::Approx(1.0 / 81.0).epsilon(1e-12));

  const qlinalg::DimensionProfile q33({3, 3});
  CHECK(theorem3_bound(q33, 1).value == doctest::Approx(1.0 / 8.0).epsilon(1e-12));

  // Unequal local dimensions fall back to the general branch: b = 1 and the
  // bound reduces to [sqrt((D-1)/(D-1)) / D]^k = 1/D^k.
  const qlinalg::DimensionProfile q23({2, 3});
  const auto general = theorem3_bound(q23, 1);
  CHECK(general.formula == BoundFormula::general_eps_ball);
  CHECK(general.value == doctest::Approx(1.0 / 6.0).epsilon(1e-12));

  // Tripartite: recompute the closed form directly.
  const qlinalg::DimensionProfile q222({2, 2, 2});
  const double D = 8.0;
  const double b2 = std::pow(D, 3) / (std::pow(2 * D - 1, 1) * (D * D - 1) + 1);
  const double eps = std::sqrt(b2) / D * std::sqrt((D - 1) / (D - b2));
  CHECK(theorem3_bound(q222, 2).value == doctest::Approx(eps * eps).epsilon(1e-12));
}

TEST_CASE("hoeffding bound") {
  CHECK(hoeffding_bound(1000, {0.05}, {1.0}) ==
        doctest::Approx(2.0 * std::exp(-5.0)).epsilon(1e-12));
  CHECK(hoeffding_bound(1000, {50.0}, {1.0}) == doctest::Approx(0.0));

  // Equal deviations reproduce the power form.
  const int k = 4, m = 200;
  const double t = 0.08;
  const double expected = 1.0 - std::pow(1.0 - 2.0 * std::exp(-2.0 * m * t * t), k);
  CHECK(hoeffding_bound(m, std::vector<double>(k, t), std::vector<double>(k, 1.0)) ==
        doctest::Approx(expected).epsilon(1e-12));

  // Monotone decreasing in the shot count and in each deviation.
  CHECK(hoeffding_bound(400, {0.05}, {1.0}) < hoeffding_bound(200, {0.05}, {1.0}));
  CHECK(hoeffding_bound(200, {0.08}, {1.0}) < hoeffding_bound(200, {0.05}, {1.0}));
  CHECK_THROWS_AS(hoeffding_bound(200, {-0.1}, {1.0}), ConfigError);
}

TEST_CASE("projection bounds") {
  CHECK(projection_bound_2d(0.75) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(projection_bound_2d(1.0) == doctest::Approx(1.0));
  CHECK(projection_bound_2d(0.0) == doctest::Approx(0.0));
  CHECK_THROWS_AS(projection_bound_2d(1.5), DomainError);

  // k = 2 agrees with the closed form on a ratio grid.
  for (int i = 1; i < 20; ++i) {
    const double r = i / 20.0;
    CHECK(projection_bound_conjecture(r, 2) ==
          doctest::Approx(projection_bound_2d(r)).epsilon(1e-10));
  }
  CHECK(projection_bound_conjecture(1.0, 7) == doctest::Approx(1.0));

  // Monotone in the ratio for fixed k.
  double prev = 0.0;
  for (int i = 1; i <= 10; ++i) {
    const double c = projection_bound_conjecture(i / 10.0, 5);
    CHECK(c >= prev - 1e-12);
    prev = c;
  }

  // Large k approaches the solution of ratio = c (1 - log c).
  for (double r : {0.2, 0.5, 0.8}) {
    double lo = 1e-12, hi = 1.0;
    while (hi - lo > 1e-14) {
      const double mid = 0.5 * (lo + hi);
      (mid * (1.0 - std::log(mid)) < r ? lo : hi) = mid;
    }
    CHECK(std::abs(projection_bound_conjecture(r, 1000000000) - 0.5 * (lo + hi)) <
          1e-8);
  }
}

TEST_CASE("named instances catalog") {
  const auto catalog = named_instances();
  REQUIRE(catalog.size() >= 6);
  auto find = [&](const std::string& name) {
    for (const auto& inst : catalog)
      if (inst.name == name) return inst;
    FAIL("missing instance ", name);
    return catalog.front();
  };
  CHECK(find("bell-projector").expected_ratio == doctest::Approx(0.5));
  CHECK(find("bell-projector").observables.k() == 1);
  CHECK(find("pauli-block-xy").expected_ratio == doctest::Approx(0.25));
  CHECK(find("pauli-block-xyz").expected_ratio == doctest::Approx(0.2));
  CHECK(find("product-xx-xy-zz").expected_ratio == doctest::Approx(1.0 / 3.0));
  CHECK(find("product-xx-xy-zz-yz").expected_ratio == doctest::Approx(1.0 / 6.0));
  CHECK_FALSE(find("product-xx-xy-zz-yz").numeric_supported);
  CHECK(find("product-xx-xy-zz-yz").observables.k() == 4);
}

TEST_CASE("solids of revolution") {
  const auto r = solids_of_revolution_ratios();
  CHECK(r.ratio_3obs == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(r.ratio_4obs == doctest::Approx(1.0 / 6.0).epsilon(1e-15));

  // Quadrature oracle for the 4-observable separable volume: the double
  // revolution integral reduces to 2 pi^2 int_0^1 R (1-R)^2 dR = pi^2/6.
  const double sep4 = 2.0 * kPi * kPi *
                      quad([](double R) { return R * (1.0 - R) * (1.0 - R); },
                           0.0, 1.0);
  CHECK(sep4 == doctest::Approx(kPi * kPi / 6.0).epsilon(1e-10));
  CHECK(std::abs(sep4 / (kPi * kPi) - r.ratio_4obs) < 1e-10);
}
