// SPDX-License-Identifier: Apache-2.0
#include "nrange/rangegeom.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>

#include "nrange/rng.hpp"

namespace nrange::rangegeom {

namespace {

using qlinalg::eigh;

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// ----- 2D hull (monotone chain) -----

double cross2(const std::array<double, 2>& o, const std::array<double, 2>& a,
              const std::array<double, 2>& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

double hull_area_2d(std::vector<std::array<double, 2>> pts) {
  if (pts.size() < 3) return 0.0;
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  const std::size_t n = pts.size();
  if (n < 3) return 0.0;
  std::vector<std::array<double, 2>> hull(2 * n);
  std::size_t h = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (h >= 2 && cross2(hull[h - 2], hull[h - 1], pts[i]) <= 0) --h;
    hull[h++] = pts[i];
  }
  const std::size_t lower = h + 1;
  for (std::size_t i = n - 1; i-- > 0;) {
    while (h >= lower && cross2(hull[h - 2], hull[h - 1], pts[i]) <= 0) --h;
    hull[h++] = pts[i];
  }
  hull.resize(h - 1);
  double area = 0.0;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const auto& p = hull[i];
    const auto& q = hull[(i + 1) % hull.size()];
    area += p[0] * q[1] - p[1] * q[0];
  }
  return 0.5 * std::abs(area);
}

// ----- 3D hull (randomized incremental) -----

struct Face {
  int a, b, c;
  bool alive = true;
};

double orient3d(const std::array<double, 3>& a, const std::array<double, 3>& b,
                const std::array<double, 3>& c, const std::array<double, 3>& d,
                double scale) {
  const double adx = a[0] - d[0], ady = a[1] - d[1], adz = a[2] - d[2];
  const double bdx = b[0] - d[0], bdy = b[1] - d[1], bdz = b[2] - d[2];
  const double cdx = c[0] - d[0], cdy = c[1] - d[1], cdz = c[2] - d[2];
  double det = adx * (bdy * cdz - bdz * cdy) - ady * (bdx * cdz - bdz * cdx) +
               adz * (bdx * cdy - bdy * cdx);
  // Near-zero determinants get a long-double second opinion before we
  // treat the point as coplanar.
  if (std::abs(det) < 1e-12 * scale * scale * scale) {
    const long double ladx = (long double)a[0] - d[0], lady = (long double)a[1] - d[1],
                      ladz = (long double)a[2] - d[2];
    const long double lbdx = (long double)b[0] - d[0], lbdy = (long double)b[1] - d[1],
                      lbdz = (long double)b[2] - d[2];
    const long double lcdx = (long double)c[0] - d[0], lcdy = (long double)c[1] - d[1],
                      lcdz = (long double)c[2] - d[2];
    const long double ldet = ladx * (lbdy * lcdz - lbdz * lcdy) -
                             lady * (lbdx * lcdz - lbdz * lcdx) +
                             ladz * (lbdx * lcdy - lbdy * lcdx);
    det = static_cast<double>(ldet);
  }
  return det;
}

double hull_volume_3d(const std::vector<std::array<double, 3>>& pts) {
  const int n = static_cast<int>(pts.size());
  if (n < 4) return 0.0;

  double scale = 1e-30;
  for (const auto& p : pts)
    for (double x : p) scale = std::max(scale, std::abs(x));

  // Initial tetrahedron from extreme points.
  int i0 = 0;
  for (int i = 1; i < n; ++i)
    if (pts[i] < pts[i0]) i0 = i;
  int i1 = -1;
  double best = 0.0;
  for (int i = 0; i < n; ++i) {
    double d2 = 0.0;
    for (int c = 0; c < 3; ++c) d2 += (pts[i][c] - pts[i0][c]) * (pts[i][c] - pts[i0][c]);
    if (d2 > best) {
      best = d2;
      i1 = i;
    }
  }
  if (i1 < 0 || best <= 0.0) return 0.0;
  int i2 = -1;
  best = 0.0;
  std::array<double, 3> u{pts[i1][0] - pts[i0][0], pts[i1][1] - pts[i0][1],
                          pts[i1][2] - pts[i0][2]};
  for (int i = 0; i < n; ++i) {
    std::array<double, 3> w{pts[i][0] - pts[i0][0], pts[i][1] - pts[i0][1],
                            pts[i][2] - pts[i0][2]};
    const std::array<double, 3> cr{u[1] * w[2] - u[2] * w[1], u[2] * w[0] - u[0] * w[2],
                                   u[0] * w[1] - u[1] * w[0]};
    const double a2 = cr[0] * cr[0] + cr[1] * cr[1] + cr[2] * cr[2];
    if (a2 > best) {
      best = a2;
      i2 = i;
    }
  }
  if (i2 < 0 || best <= 0.0) return 0.0;
  int i3 = -1;
  best = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = std::abs(orient3d(pts[i0], pts[i1], pts[i2], pts[i], scale));
    if (d > best) {
      best = d;
      i3 = i;
    }
  }
  if (i3 < 0 || best <= 0.0) return 0.0;

  // Interior reference point.
  std::array<double, 3> m{};
  for (int c = 0; c < 3; ++c)
    m[c] = 0.25 * (pts[i0][c] + pts[i1][c] + pts[i2][c] + pts[i3][c]);

  std::vector<Face> faces;
  auto add_face = [&](int a, int b, int c) {
    if (orient3d(pts[a], pts[b], pts[c], m, scale) > 0) std::swap(b, c);
    faces.push_back(Face{a, b, c});
  };
  add_face(i0, i1, i2);
  add_face(i0, i1, i3);
  add_face(i0, i2, i3);
  add_face(i1, i2, i3);

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  CounterRng rng(0x9c0ffee123456789ULL);
  for (int i = n - 1; i > 0; --i)
    std::swap(order[i], order[rng.next_u64() % (i + 1)]);

  const double eps_vis = 1e-12 * scale * scale * scale;
  for (int idx : order) {
    if (idx == i0 || idx == i1 || idx == i2 || idx == i3) continue;
    const auto& p = pts[idx];
    std::map<std::pair<int, int>, int> edge_count;
    std::vector<int> visible;
    for (int f = 0; f < static_cast<int>(faces.size()); ++f) {
      if (!faces[f].alive) continue;
      if (orient3d(pts[faces[f].a], pts[faces[f].b], pts[faces[f].c], p, scale) >
          eps_vis) {
        visible.push_back(f);
        ++edge_count[{faces[f].a, faces[f].b}];
        ++edge_count[{faces[f].b, faces[f].c}];
        ++edge_count[{faces[f].c, faces[f].a}];
      }
    }
    if (visible.empty()) continue;
    for (int f : visible) faces[f].alive = false;
    for (const auto& [edge, cnt] : edge_count) {
      (void)cnt;
      auto rev = edge_count.find({edge.second, edge.first});
      if (rev == edge_count.end()) {
        // Horizon edge: keep its orientation so the new face points outward.
        faces.push_back(Face{edge.first, edge.second, idx});
      }
    }
  }

  double vol6 = 0.0;
  for (const auto& f : faces) {
    if (!f.alive) continue;
    vol6 += std::abs(orient3d(pts[f.a], pts[f.b], pts[f.c], m, scale));
  }
  return vol6 / 6.0;
}

std::vector<double> centered_singular_stats(
    const std::vector<std::vector<double>>& pts, int k, double* extent_out) {
  const int n = static_cast<int>(pts.size());
  std::vector<double> mean(k, 0.0);
  for (const auto& p : pts)
    for (int c = 0; c < k; ++c) mean[c] += p[c];
  for (double& x : mean) x /= std::max(1, n);
  double extent = 0.0;
  std::vector<cd> cov(static_cast<std::size_t>(k) * k, cd{0.0, 0.0});
  for (const auto& p : pts) {
    for (int a = 0; a < k; ++a) {
      extent = std::max(extent, std::abs(p[a] - mean[a]));
      for (int b = 0; b < k; ++b)
        cov[a * k + b] += (p[a] - mean[a]) * (p[b] - mean[b]);
    }
  }
  for (cd& z : cov) z /= std::max(1, n);
  const auto eg = eigh(qlinalg::HermitianMatrix(k, std::move(cov)));
  std::vector<double> stds;
  for (double v : eg.eigenvalues.values()) stds.push_back(std::sqrt(std::max(0.0, v)));
  if (extent_out) *extent_out = extent;
  return stds;  // descending
}

double wilson_upper(std::int64_t hits, std::int64_t n, double z) {
  const double nh = static_cast<double>(n);
  const double p = static_cast<double>(hits) / nh;
  const double z2 = z * z;
  const double center = p + z2 / (2.0 * nh);
  const double half = z * std::sqrt(p * (1.0 - p) / nh + z2 / (4.0 * nh * nh));
  return std::min(1.0, (center + half) / (1.0 + z2 / nh));
}

}  // namespace

Direction::Direction(std::vector<double> components)
    : components_(std::move(components)) {
  if (components_.empty()) throw ShapeError("direction must be non-empty");
  if (std::abs(norm2(components_) - 1.0) > 1e-12)
    throw ShapeError("direction is not unit norm");
}

Direction Direction::normalized(std::vector<double> components) {
  const double n = norm2(components);
  if (n <= 0.0) throw ShapeError("cannot normalize zero direction");
  for (double& x : components) x /= n;
  // Renormalize once more; the first pass can be 1 ulp off for large k.
  const double n2 = norm2(components);
  for (double& x : components) x /= n2;
  return Direction(std::move(components));
}

double Direction::dot(const std::vector<double>& x) const {
  double s = 0.0;
  for (std::size_t i = 0; i < components_.size(); ++i) s += components_[i] * x[i];
  return s;
}

std::vector<Direction> direction_grid(int k, int n) {
  if (k < 1 || k > 3) throw UnsupportedDimensionError("direction grids cover k in {1,2,3}");
  if (n < 2 * k) throw ConfigError("need at least 2k directions");
  std::vector<Direction> dirs;
  if (k == 1) {
    dirs.emplace_back(std::vector<double>{1.0});
    dirs.emplace_back(std::vector<double>{-1.0});
    return dirs;
  }
  if (k == 2) {
    dirs.reserve(n);
    for (int j = 0; j < n; ++j) {
      const double a = 2.0 * kPi * j / n;
      dirs.push_back(Direction::normalized({std::cos(a), std::sin(a)}));
    }
    return dirs;
  }
  // Fibonacci sphere.
  dirs.reserve(n);
  const double golden_angle = kPi * (3.0 - std::sqrt(5.0));
  for (int j = 0; j < n; ++j) {
    const double z = 1.0 - 2.0 * (j + 0.5) / n;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double a = golden_angle * j;
    dirs.push_back(Direction::normalized({r * std::cos(a), r * std::sin(a), z}));
  }
  return dirs;
}

SupportSample support_all(const ObservableSet& obs, const Direction& u) {
  if (u.k() != obs.k()) throw ShapeError("direction length must match observable count");
  const HermitianMatrix h = qlinalg::combine(obs.observables, u.components());
  const auto eg = eigh(h);
  const std::vector<cd>& top = eg.eigenvectors.front();
  std::vector<double> point(obs.k());
  for (int i = 0; i < obs.k(); ++i) point[i] = obs.observables[i].expectation(top);
  SupportSample s{u,    eg.eigenvalues.max(), eg.eigenvalues.max(),
                  std::move(point), true, std::nullopt, top};
  return s;
}

BodyApprox build_body(const ObservableSet& obs, const SupportOracle& oracle,
                      int n_directions, Exec exec) {
  const int k = obs.k();
  if (k < 1 || k > 3) throw UnsupportedDimensionError("build_body covers k in {1,2,3}");

  std::vector<Direction> dirs = direction_grid(k, n_directions);
  // Axis directions provide the bounding box for the Monte-Carlo stage.
  for (int axis = 0; axis < k; ++axis) {
    for (double sign : {1.0, -1.0}) {
      std::vector<double> e(k, 0.0);
      e[axis] = sign;
      bool present = false;
      for (const auto& d : dirs) {
        double diff = 0.0;
        for (int c = 0; c < k; ++c) diff += std::abs(d[c] - e[c]);
        if (diff < 1e-12) {
          present = true;
          break;
        }
      }
      if (!present) dirs.emplace_back(std::move(e));
    }
  }

  std::vector<SupportSample> samples(dirs.size(),
                                     SupportSample{Direction(std::vector<double>{1.0}),
                                                   0.0,
                                                   0.0,
                                                   {},
                                                   true,
                                                   std::nullopt,
                                                   {}});
  parallel_for(exec, static_cast<std::int64_t>(dirs.size()),
               [&](std::int64_t i) { samples[i] = oracle(obs, dirs[i]); });

  BodyApprox body;
  body.k = k;

  // Deduplicate support points on a 1e-9 lexicographic snap grid.
  std::map<std::vector<std::int64_t>, std::vector<double>> dedup;
  for (const auto& s : samples) {
    std::vector<std::int64_t> key(k);
    for (int c = 0; c < k; ++c) key[c] = std::llround(s.point[c] / 1e-9);
    dedup.emplace(std::move(key), s.point);
  }
  body.inner_vertices.reserve(dedup.size());
  for (auto& [key, pt] : dedup) {
    (void)key;
    body.inner_vertices.push_back(pt);
  }

  // Lift both offsets to cover every sampled member point; heuristic oracle
  // values may otherwise sit below points found from other directions.
  body.outer_halfspaces.reserve(samples.size());
  for (const auto& s : samples) {
    double tight = std::min(s.value, s.value_estimate);
    for (const auto& v : body.inner_vertices)
      tight = std::max(tight, s.direction.dot(v));
    const double offset = std::max(s.value, tight);
    body.outer_halfspaces.push_back(
        Halfspace{s.direction, offset, tight, s.certified});
  }
  return body;
}

double hull_volume(const std::vector<std::vector<double>>& points, int k) {
  if (k == 1) {
    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (const auto& p : points) {
      if (first) {
        lo = hi = p[0];
        first = false;
      }
      lo = std::min(lo, p[0]);
      hi = std::max(hi, p[0]);
    }
    return points.empty() ? 0.0 : hi - lo;
  }
  if (k == 2) {
    std::vector<std::array<double, 2>> pts;
    pts.reserve(points.size());
    for (const auto& p : points) pts.push_back({p[0], p[1]});
    return hull_area_2d(std::move(pts));
  }
  if (k == 3) {
    std::vector<std::array<double, 3>> pts;
    pts.reserve(points.size());
    for (const auto& p : points) pts.push_back({p[0], p[1], p[2]});
    return hull_volume_3d(pts);
  }
  throw UnsupportedDimensionError("hull volumes cover k in {1,2,3}");
}

VolumeBracket volume_bracket(const BodyApprox& body, const VolumeConfig& cfg) {
  if (cfg.mc_samples < 1000) throw ConfigError("mc_samples must be >= 1000");
  const int k = body.k;

  VolumeBracket out;
  double extent = 0.0;
  const std::vector<double> stds =
      body.inner_vertices.empty()
          ? std::vector<double>(k, 0.0)
          : centered_singular_stats(body.inner_vertices, k, &extent);
  out.affine_rank = 0;
  for (double s : stds)
    if (s > 1e-9 * std::max(1.0, extent)) ++out.affine_rank;
  if (out.affine_rank < k) {
    out.lower = out.upper = out.estimate = 0.0;
    return out;
  }

  out.lower = hull_volume(body.inner_vertices, k);

  // Axis-aligned bounding box from the axis support values.
  std::vector<double> box_lo(k, 0.0), box_hi(k, 0.0);
  std::vector<double> tight_lo(k, 0.0), tight_hi(k, 0.0);
  for (int axis = 0; axis < k; ++axis) {
    bool have_hi = false, have_lo = false;
    for (const auto& h : body.outer_halfspaces) {
      double diff_hi = std::abs(h.normal[axis] - 1.0), diff_lo = std::abs(h.normal[axis] + 1.0);
      for (int c = 0; c < k; ++c) {
        if (c == axis) continue;
        diff_hi += std::abs(h.normal[c]);
        diff_lo += std::abs(h.normal[c]);
      }
      if (diff_hi < 1e-9) {
        box_hi[axis] = have_hi ? std::min(box_hi[axis], h.offset) : h.offset;
        tight_hi[axis] = have_hi ? std::min(tight_hi[axis], h.offset_estimate)
                                 : h.offset_estimate;
        have_hi = true;
      }
      if (diff_lo < 1e-9) {
        box_lo[axis] = have_lo ? std::max(box_lo[axis], -h.offset) : -h.offset;
        tight_lo[axis] = have_lo ? std::max(tight_lo[axis], -h.offset_estimate)
                                 : -h.offset_estimate;
        have_lo = true;
      }
    }
    if (!have_hi || !have_lo)
      throw ConfigError("volume_bracket needs axis halfspaces (use build_body)");
  }

  if (k == 1) {
    out.upper = std::max(out.lower, box_hi[0] - box_lo[0]);
    const double tight_len = std::max(out.lower, tight_hi[0] - tight_lo[0]);
    out.estimate = std::clamp(0.5 * (out.lower + tight_len), out.lower, out.upper);
    return out;
  }

  double box_vol = 1.0;
  for (int axis = 0; axis < k; ++axis)
    box_vol *= std::max(0.0, box_hi[axis] - box_lo[axis]);

  // Monte-Carlo membership over the box; integer per-block counts keep the
  // reduction independent of scheduling. The sound offsets feed the upper
  // confidence bound, the tight offsets feed the point estimate.
  const std::int64_t n = cfg.mc_samples;
  const std::int64_t block = 4096;
  const std::int64_t blocks = (n + block - 1) / block;
  std::vector<std::int64_t> hits_sound(blocks, 0), hits_tight(blocks, 0);
  CounterRng base(cfg.seed);
  parallel_for(cfg.exec, blocks, [&](std::int64_t b) {
    std::int64_t hs_count = 0, ht_count = 0;
    const std::int64_t lo = b * block, hi = std::min(n, lo + block);
    for (std::int64_t i = lo; i < hi; ++i) {
      CounterRng rng = base.split(static_cast<std::uint64_t>(i));
      double x[3];
      for (int c = 0; c < k; ++c) x[c] = rng.uniform(box_lo[c], box_hi[c]);
      bool inside_sound = true, inside_tight = true;
      for (const auto& hs : body.outer_halfspaces) {
        double dot = 0.0;
        for (int c = 0; c < k; ++c) dot += hs.normal[c] * x[c];
        if (dot > hs.offset_estimate) {
          inside_tight = false;
          if (dot > hs.offset) {
            inside_sound = false;
            break;
          }
        }
      }
      if (inside_sound) ++hs_count;
      if (inside_tight) ++ht_count;
    }
    hits_sound[b] = hs_count;
    hits_tight[b] = ht_count;
  });
  const std::int64_t total_sound =
      std::accumulate(hits_sound.begin(), hits_sound.end(), std::int64_t{0});
  const std::int64_t total_tight =
      std::accumulate(hits_tight.begin(), hits_tight.end(), std::int64_t{0});
  const double p_tight = static_cast<double>(total_tight) / static_cast<double>(n);
  out.upper = std::max(out.lower,
                       box_vol * wilson_upper(total_sound, n, cfg.confidence_z));
  out.estimate =
      std::clamp(0.5 * (out.lower + box_vol * p_tight), out.lower, out.upper);
  return out;
}

RatioBracket ratio_bracket(const VolumeBracket& sep, const VolumeBracket& all) {
  if (all.lower <= 0.0)
    throw DegenerateBodyError("all-states body has no certified volume");
  RatioBracket r;
  r.lower = sep.lower / all.upper;
  r.upper = std::min(1.0, sep.upper / all.lower);
  r.estimate = sep.estimate / all.estimate;
  return r;
}

double ray_radius_2d(const ObservableSet& obs, const SupportOracle& oracle,
                     double phi) {
  if (obs.k() != 2) throw UnsupportedDimensionError("ray_radius_2d needs k = 2");
  const double rx = std::cos(phi), ry = std::sin(phi);

  auto sample_at = [&](double psi) {
    return oracle(obs, Direction::normalized({std::cos(psi), std::sin(psi)}));
  };
  auto cross_ray = [&](const std::vector<double>& p) { return rx * p[1] - ry * p[0]; };

  double lo = phi - 0.5 * kPi, hi = phi + 0.5 * kPi;
  SupportSample slo = sample_at(lo), shi = sample_at(hi);
  if (slo.value < -1e-9 || shi.value < -1e-9)
    throw GeometryError("origin lies outside the body");
  double glo = cross_ray(slo.point);
  double ghi = cross_ray(shi.point);
  if (glo > 1e-12 || ghi < -1e-12) {
    // Support points already straddle oddly; fall back to the direct value.
    const SupportSample s = sample_at(phi);
    const double r = rx * s.point[0] + ry * s.point[1];
    if (r < -1e-9) throw GeometryError("origin lies outside the body");
    return std::max(0.0, r);
  }
  for (int it = 0; it < 60 && hi - lo > 1e-12; ++it) {
    const double mid = 0.5 * (lo + hi);
    const SupportSample sm = sample_at(mid);
    if (sm.value < -1e-9) throw GeometryError("origin lies outside the body");
    if (cross_ray(sm.point) <= 0.0) {
      lo = mid;
      slo = sm;
    } else {
      hi = mid;
      shi = sm;
    }
  }
  // Intersect the final boundary chord with the ray; handles flat faces
  // where the support point jumps across the ray.
  const double ax = slo.point[0], ay = slo.point[1];
  const double bx = shi.point[0], by = shi.point[1];
  const double dx = bx - ax, dy = by - ay;
  const double denom = rx * dy - ry * dx;
  double r;
  if (std::abs(denom) < 1e-15) {
    r = ax * rx + ay * ry;
  } else {
    const double s = (ry * ax - rx * ay) / denom;
    r = (ax + s * dx) * rx + (ay + s * dy) * ry;
  }
  if (r < -1e-9) throw GeometryError("origin lies outside the body");
  return std::max(0.0, r);
}

std::pair<ObservableSet, ReduceReport> reduce_observables(const ObservableSet& obs) {
  const int k = obs.k();
  ReduceReport report;
  std::vector<HermitianMatrix> traceless;
  traceless.reserve(k);
  for (const auto& a : obs.observables) traceless.push_back(qlinalg::traceless_part(a));

  auto inner = [](const HermitianMatrix& a, const HermitianMatrix& b) {
    cd acc{0.0, 0.0};
    const int d = a.dim();
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) acc += std::conj(a(i, j)) * b(i, j);
    return acc.real();
  };

  std::vector<HermitianMatrix> kept;
  std::vector<double> kept_norms;
  for (int idx = 0; idx < k; ++idx) {
    const double nrm = traceless[idx].frobenius_norm();
    if (nrm <= 1e-12 * (1.0 + obs.observables[idx].frobenius_norm())) {
      report.dropped.push_back(idx);
      report.coefficients.emplace_back(report.kept.size(), 0.0);
      continue;
    }
    // Gram matrix of the normalized candidates; accept when its smallest
    // eigenvalue stays above 1e-10.
    const int m = static_cast<int>(kept.size()) + 1;
    std::vector<cd> gram(static_cast<std::size_t>(m) * m);
    for (int i = 0; i < m; ++i) {
      const HermitianMatrix& bi = (i + 1 == m) ? traceless[idx] : kept[i];
      const double ni = (i + 1 == m) ? nrm : kept_norms[i];
      for (int j = 0; j < m; ++j) {
        const HermitianMatrix& bj = (j + 1 == m) ? traceless[idx] : kept[j];
        const double nj = (j + 1 == m) ? nrm : kept_norms[j];
        gram[i * m + j] = inner(bi, bj) / (ni * nj);
      }
    }
    const auto eg = eigh(HermitianMatrix(m, std::move(gram)));
    if (eg.eigenvalues.min() >= 1e-10) {
      kept.push_back(traceless[idx]);
      kept_norms.push_back(nrm);
      report.kept.push_back(idx);
      continue;
    }
    report.dropped.push_back(idx);
    // Least-squares coefficients of the dropped observable over the kept set.
    const int kk = static_cast<int>(kept.size());
    std::vector<double> coeff(kk, 0.0);
    if (kk > 0) {
      std::vector<cd> g(static_cast<std::size_t>(kk) * kk);
      std::vector<double> rhs(kk);
      for (int i = 0; i < kk; ++i) {
        rhs[i] = inner(kept[i], traceless[idx]);
        for (int j = 0; j < kk; ++j) g[i * kk + j] = inner(kept[i], kept[j]);
      }
      const auto ge = eigh(HermitianMatrix(kk, std::move(g)));
      for (int e = 0; e < kk; ++e) {
        const double lam = ge.eigenvalues[e];
        if (lam <= 1e-12) continue;
        double proj = 0.0;
        for (int i = 0; i < kk; ++i) proj += ge.eigenvectors[e][i].real() * rhs[i];
        for (int i = 0; i < kk; ++i)
          coeff[i] += proj / lam * ge.eigenvectors[e][i].real();
      }
    }
    report.coefficients.push_back(std::move(coeff));
  }

  ObservableSet reduced(obs.profile, kept);
  return {std::move(reduced), std::move(report)};
}

double sandwich_violation(const BodyApprox& body) {
  double worst = 0.0;
  for (const auto& h : body.outer_halfspaces)
    for (const auto& v : body.inner_vertices)
      worst = std::max(worst, h.normal.dot(v) - h.offset);
  return worst;
}

}  // namespace nrange::rangegeom
