// SPDX-License-Identifier: Apache-2.0
#include "nrange/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace nrange::analytic {

namespace {

// AGM for K and E, valid for any m < 1; negative parameters go through the
// imaginary-modulus transformation.
struct KePair {
  double k, e;
};

KePair agm_ke(double m) {
  if (m < 0.0) {
    const double mu = -m;
    const KePair base = agm_ke(mu / (1.0 + mu));
    const double root = std::sqrt(1.0 + mu);
    return {base.k / root, base.e * root};
  }
  if (m == 0.0) return {0.5 * kPi, 0.5 * kPi};
  if (m >= 1.0 - 1e-15) throw DomainError("elliptic parameter too close to 1");
  double a = 1.0, b = std::sqrt(1.0 - m);
  double c2sum = 0.5 * m;
  double p = 1.0;
  for (int it = 0; it < 64; ++it) {
    const double c = 0.5 * (a - b);
    if (c <= 1e-14 * a) break;
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
    p *= 2.0;
    c2sum += 0.5 * p * c * c;
  }
  const double k = 0.5 * kPi / a;
  return {k, k * (1.0 - c2sum)};
}

double tan_half(double x) { return std::tan(0.5 * x); }

// |tan(x/2) / tan(y/2)|; infinities propagate for the degenerate guard.
double t_ratio(double x, double y) {
  const double tx = tan_half(x), ty = tan_half(y);
  return std::abs(tx / ty);
}

double f_term(double x, double y) {
  const double t = t_ratio(x, y);
  const KePair ke = agm_ke(1.0 - t * t);
  return std::abs(std::sin(0.5 * x) * std::cos(0.5 * y)) * (ke.k - ke.e);
}

// Support function of an axis-aligned ellipse and its angular derivative.
struct EllipseSupport {
  double a, b;
  double h(double phi) const {
    const double c = std::cos(phi), s = std::sin(phi);
    return std::sqrt(a * a * c * c + b * b * s * s);
  }
  double hp(double phi) const {
    const double v = h(phi);
    if (v <= 0.0) return 0.0;
    return (b * b - a * a) * std::sin(phi) * std::cos(phi) / v;
  }
};

double simpson(const std::function<double(double)>& f, double lo, double hi,
               double flo, double fmid, double fhi, double tol, int depth) {
  const double mid = 0.5 * (lo + hi);
  const double lmid = 0.5 * (lo + mid), rmid = 0.5 * (mid + hi);
  const double fl = f(lmid), fr = f(rmid);
  const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
  const double left = (mid - lo) / 6.0 * (flo + 4.0 * fl + fmid);
  const double right = (hi - mid) / 6.0 * (fmid + 4.0 * fr + fhi);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return simpson(f, lo, mid, flo, fl, fmid, 0.5 * tol, depth - 1) +
         simpson(f, mid, hi, fmid, fr, fhi, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double lo, double hi,
                 double tol) {
  const double mid = 0.5 * (lo + hi);
  return simpson(f, lo, hi, f(lo), f(mid), f(hi), tol, 48);
}

// Area of the Minkowski sum of two axis-aligned ellipses via the support
// function: A = 1/2 int (h^2 - h'^2).
double minkowski_sum_area(double a1, double b1, double a2, double b2) {
  const EllipseSupport e1{a1, b1}, e2{a2, b2};
  auto integrand = [&](double phi) {
    const double h = e1.h(phi) + e2.h(phi);
    const double hp = e1.hp(phi) + e2.hp(phi);
    return 0.5 * (h * h - hp * hp);
  };
  // Quadrant panels keep segment-shaped degenerate ellipses' kinks at
  // panel boundaries.
  double area = 0.0;
  for (int q = 0; q < 4; ++q)
    area += integrate(integrand, q * 0.5 * kPi, (q + 1) * 0.5 * kPi, 1e-13);
  return area;
}

}  // namespace

double elliptic_K(double m) {
  if (m < 0.0 || m >= 1.0) throw DomainError("elliptic_K needs 0 <= m < 1");
  return agm_ke(m).k;
}

double elliptic_E(double m) {
  if (m < 0.0 || m > 1.0) throw DomainError("elliptic_E needs 0 <= m <= 1");
  if (m == 1.0) return 1.0;
  return agm_ke(m).e;
}

ProductAngles::ProductAngles(double a, double b) : theta_a(a), theta_b(b) {
  if (!(a >= 0.0 && a <= kPi) || !(b >= 0.0 && b <= kPi))
    throw DomainError("product angles must lie in [0, pi]");
}

ObservableSet product_pair_observables(const ProductAngles& angles) {
  using namespace qlinalg;
  const HermitianMatrix x = pauli_x(), z = pauli_z();
  const HermitianMatrix ra =
      std::cos(angles.theta_a) * x + std::sin(angles.theta_a) * z;
  const HermitianMatrix rb =
      std::cos(angles.theta_b) * x + std::sin(angles.theta_b) * z;
  return ObservableSet(DimensionProfile({2, 2}), {kron(x, x), kron(ra, rb)});
}

double sep_volume_product_2q(const ProductAngles& angles) {
  const double tm = angles.theta_minus(), tp = angles.theta_plus();
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  // Semi-axes of the two summand ellipses in the rotated frame.
  const double am = std::abs(std::cos(0.5 * tm)) * inv_sqrt2;
  const double bm = std::abs(std::sin(0.5 * tm)) * inv_sqrt2;
  const double ap = std::abs(std::cos(0.5 * tp)) * inv_sqrt2;
  const double bp = std::abs(std::sin(0.5 * tp)) * inv_sqrt2;

  const double t1 = t_ratio(tm, tp), t2 = t_ratio(tp, tm);
  const double t_diff = t2 - t1;
  const bool formula_ok = std::isfinite(t1) && std::isfinite(t2) &&
                          t1 > 1e-6 && t1 < 1e6 && std::abs(t_diff) > 1e-6;
  if (formula_ok) {
    const double sine_sum = std::abs(std::sin(tm)) + std::abs(std::sin(tp));
    const double value = 0.25 * kPi * sine_sum +
                         2.0 * (f_term(tm, tp) - f_term(tp, tm)) / t_diff;
    if (std::isfinite(value)) return value;
  }
  return minkowski_sum_area(am, bm, ap, bp);
}

double all_volume_product_2q(const ProductAngles& angles) {
  const double tm = angles.theta_minus(), tp = angles.theta_plus();
  return 2.0 * (std::cos(tm) - std::cos(tp) + std::abs(0.5 * tm * std::sin(tm)) +
                std::abs((0.5 * tp - 0.5 * kPi) * std::sin(tp)));
}

double ratio_product_2q(const ProductAngles& angles) {
  const double all = all_volume_product_2q(angles);
  if (all <= 1e-12)
    throw DegenerateBodyError("joint numerical range has zero area");
  return sep_volume_product_2q(angles) / all;
}

BoundReport theorem3_bound(const DimensionProfile& profile, int k) {
  if (k < 1) throw ConfigError("k must be >= 1");
  const int n = profile.sites();
  if (n < 2) throw ShapeError("bound needs at least two sites");
  const double D = profile.total_dim();

  const double b2 = std::pow(D, n) /
                    (std::pow(2.0 * D - 1.0, n - 2) * (D * D - 1.0) + 1.0);
  const double b = std::sqrt(b2);
  const double eps = (b / D) * std::sqrt((D - 1.0) / (D - b2));
  BoundReport report{std::pow(eps, k), BoundFormula::general_eps_ball};

  bool equal_dims = n == 2 && profile.local_dim(0) == profile.local_dim(1);
  if (equal_dims) {
    const double d = profile.local_dim(0);
    const double alt = std::pow(1.0 / (d * d - 1.0), k);
    if (alt > report.value)
      report = BoundReport{alt, BoundFormula::bipartite_equal_dims};
  }
  return report;
}

double hoeffding_bound(int shots, const std::vector<double>& t,
                       const std::vector<double>& widths) {
  if (shots < 1) throw ConfigError("shots must be >= 1");
  if (t.empty() || t.size() != widths.size())
    throw ShapeError("need matching deviations and widths");
  double prod = 1.0;
  for (std::size_t j = 0; j < t.size(); ++j) {
    if (t[j] <= 0.0 || widths[j] <= 0.0)
      throw ConfigError("deviations and widths must be positive");
    const double scaled = t[j] / widths[j];
    prod *= std::max(0.0, 1.0 - 2.0 * std::exp(-2.0 * shots * scaled * scaled));
  }
  return 1.0 - prod;
}

double projection_bound_2d(double ratio) {
  if (ratio < 0.0 || ratio > 1.0) throw DomainError("ratio must lie in [0, 1]");
  return 1.0 - std::sqrt(1.0 - ratio);
}

double projection_bound_conjecture(double ratio, int k) {
  if (ratio < 0.0 || ratio > 1.0) throw DomainError("ratio must lie in [0, 1]");
  if (k < 2) throw ConfigError("k must be >= 2");
  if (ratio == 0.0) return 0.0;
  if (ratio == 1.0) return 1.0;
  const double inv = 1.0 / (k - 1.0);
  // (k-1)(1 - c^{1/(k-1)}) via expm1; the direct form cancels for large k.
  auto lhs = [&](double c) {
    return c * (1.0 - (k - 1.0) * std::expm1(inv * std::log(c)));
  };
  double lo = 0.0, hi = 1.0;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (lhs(mid) < ratio)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<NamedInstance> named_instances() {
  using namespace qlinalg;
  std::vector<NamedInstance> out;

  const HermitianMatrix x = pauli_x(), y = pauli_y(), z = pauli_z();
  const HermitianMatrix zero1 = scalar_block(0.0);
  const DimensionProfile two_qubits({2, 2});

  out.push_back(NamedInstance{
      "bell-projector",
      ObservableSet(two_qubits, {projector(bell_phi_plus())}),
      0.5,
      true,
  });
  out.push_back(NamedInstance{
      "pauli-block-xy",
      ObservableSet(two_qubits, {direct_sum({zero1, x, zero1}),
                                 direct_sum({zero1, y, zero1})}),
      0.25,
      true,
  });
  out.push_back(NamedInstance{
      "pauli-block-xyz",
      ObservableSet(two_qubits, {direct_sum({zero1, x, zero1}),
                                 direct_sum({zero1, y, zero1}),
                                 direct_sum({zero1, z, zero1})}),
      0.2,
      true,
  });
  out.push_back(NamedInstance{
      "product-xx-xy-zz",
      ObservableSet(two_qubits, {kron(x, x), kron(x, y), kron(z, z)}),
      1.0 / 3.0,
      true,
  });
  out.push_back(NamedInstance{
      "product-xx-xy-zz-yz",
      ObservableSet(two_qubits,
                    {kron(x, x), kron(x, y), kron(z, z), kron(y, z)}),
      1.0 / 6.0,
      false,
  });
  const ProductAngles angles(3.0 * kPi / 4.0, kPi / 3.0);
  out.push_back(NamedInstance{
      "product-pair-3pi4-pi3",
      product_pair_observables(angles),
      ratio_product_2q(angles),
      true,
  });
  return out;
}

RevolutionRatios solids_of_revolution_ratios() {
  // Rotating the square-in-square cross-section: cylinder of radius 1 and
  // height 2 against two cones glued at their base.
  const double all_3 = 2.0 * kPi;
  const double sep_3 = 2.0 * (kPi / 3.0);
  // Four-dimensional double revolution: r <= 1 against r <= 1 - R.
  const double all_4 = kPi * kPi;
  const double sep_4 = kPi * kPi / 6.0;
  return RevolutionRatios{sep_3 / all_3, sep_4 / all_4};
}

}  // namespace nrange::analytic
