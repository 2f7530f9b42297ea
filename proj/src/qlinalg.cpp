// SPDX-License-Identifier: Apache-2.0
#include "nrange/qlinalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace nrange::qlinalg {

namespace {

bool all_finite(const std::vector<cd>& v) {
  for (const cd& z : v) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

}  // namespace

HermitianMatrix::HermitianMatrix(int dim) : dim_(dim) {
  if (dim < 1) throw InvalidMatrixError("matrix dimension must be >= 1");
  if (dim > kMaxDim) throw UnsupportedDimensionError("dimension exceeds 64");
  entries_.assign(static_cast<std::size_t>(dim) * dim, cd{0.0, 0.0});
}

HermitianMatrix::HermitianMatrix(int dim, std::vector<cd> entries) : dim_(dim) {
  if (dim < 1) throw InvalidMatrixError("matrix dimension must be >= 1");
  if (dim > kMaxDim) throw UnsupportedDimensionError("dimension exceeds 64");
  if (entries.size() != static_cast<std::size_t>(dim) * dim)
    throw ShapeError("entry count does not match dimension");
  if (!all_finite(entries)) throw InvalidMatrixError("non-finite entries");

  double correction = 0.0;
  for (int i = 0; i < dim; ++i) {
    for (int j = i; j < dim; ++j) {
      const cd upper = entries[i * dim + j];
      const cd lower = entries[j * dim + i];
      const cd sym = 0.5 * (upper + std::conj(lower));
      correction = std::max(correction, std::abs(upper - sym));
      correction = std::max(correction, std::abs(lower - std::conj(sym)));
      entries[i * dim + j] = sym;
      entries[j * dim + i] = std::conj(sym);
    }
  }
  if (correction > 1e-8)
    throw InvalidMatrixError("input is not Hermitian (correction " +
                             std::to_string(correction) + ")");
  entries_ = std::move(entries);
}

double HermitianMatrix::trace() const {
  double t = 0.0;
  for (int i = 0; i < dim_; ++i) t += entries_[i * dim_ + i].real();
  return t;
}

double HermitianMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const cd& z : entries_) s += std::norm(z);
  return std::sqrt(s);
}

std::vector<cd> HermitianMatrix::apply(std::span<const cd> v) const {
  if (static_cast<int>(v.size()) != dim_) throw ShapeError("vector length mismatch");
  std::vector<cd> out(dim_, cd{0.0, 0.0});
  for (int i = 0; i < dim_; ++i) {
    cd acc{0.0, 0.0};
    const cd* row = entries_.data() + static_cast<std::size_t>(i) * dim_;
    for (int j = 0; j < dim_; ++j) acc += row[j] * v[j];
    out[i] = acc;
  }
  return out;
}

double HermitianMatrix::expectation(std::span<const cd> psi) const {
  const std::vector<cd> av = apply(psi);
  cd acc{0.0, 0.0};
  for (int i = 0; i < dim_; ++i) acc += std::conj(psi[i]) * av[i];
  return acc.real();
}

HermitianMatrix& HermitianMatrix::operator+=(const HermitianMatrix& other) {
  if (other.dim_ != dim_) throw ShapeError("dimension mismatch in +");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
  return *this;
}

HermitianMatrix& HermitianMatrix::operator-=(const HermitianMatrix& other) {
  if (other.dim_ != dim_) throw ShapeError("dimension mismatch in -");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= other.entries_[i];
  return *this;
}

HermitianMatrix& HermitianMatrix::operator*=(double scale) {
  for (cd& z : entries_) z *= scale;
  return *this;
}

DimensionProfile::DimensionProfile(std::vector<int> local_dims)
    : local_dims_(std::move(local_dims)) {
  if (local_dims_.empty()) throw ShapeError("profile needs at least one site");
  total_dim_ = 1;
  for (int d : local_dims_) {
    if (d < 1) throw ShapeError("local dimensions must be >= 1");
    total_dim_ *= d;
  }
}

ProductState::ProductState(std::vector<std::vector<cd>> factors)
    : factors_(std::move(factors)) {
  if (factors_.empty()) throw ShapeError("product state needs at least one factor");
  for (const auto& f : factors_) {
    double n2 = 0.0;
    for (const cd& z : f) n2 += std::norm(z);
    if (std::abs(std::sqrt(n2) - 1.0) > 1e-12)
      throw InvalidMatrixError("product-state factor is not normalized");
  }
}

DimensionProfile ProductState::profile() const {
  std::vector<int> dims;
  dims.reserve(factors_.size());
  for (const auto& f : factors_) dims.push_back(static_cast<int>(f.size()));
  return DimensionProfile(dims);
}

std::vector<cd> ProductState::full_vector() const {
  std::vector<cd> v{cd{1.0, 0.0}};
  for (const auto& f : factors_) {
    std::vector<cd> next;
    next.reserve(v.size() * f.size());
    for (const cd& a : v)
      for (const cd& b : f) next.push_back(a * b);
    v = std::move(next);
  }
  return v;
}

double ProductState::expectation(const HermitianMatrix& observable) const {
  return observable.expectation(full_vector());
}

Spectrum::Spectrum(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw ShapeError("spectrum must be non-empty");
  for (std::size_t i = 1; i < values_.size(); ++i) {
    if (values_[i - 1] < values_[i] - 1e-12)
      throw ShapeError("spectrum must be sorted descending");
  }
}

bool Spectrum::is_state_spectrum(double tol) const {
  double sum = 0.0;
  for (double v : values_) {
    if (v < -tol) return false;
    sum += v;
  }
  return std::abs(sum - 1.0) <= tol;
}

ObservableSet::ObservableSet(DimensionProfile p, std::vector<HermitianMatrix> obs)
    : profile(std::move(p)), observables(std::move(obs)) {
  for (const auto& m : observables) {
    if (m.dim() != profile.total_dim())
      throw ShapeError("observable dimension does not match profile");
  }
}

EighResult eigh(const HermitianMatrix& m) {
  const int n = m.dim();
  std::vector<cd> a = m.entries();
  if (!all_finite(a)) throw InvalidMatrixError("non-finite entries in eigh");

  // Eigenvector accumulator, columns of v.
  std::vector<cd> v(static_cast<std::size_t>(n) * n, cd{0.0, 0.0});
  for (int i = 0; i < n; ++i) v[i * n + i] = 1.0;

  const double norm = m.frobenius_norm();
  const double threshold = 1e-13 * norm;

  auto off_norm = [&]() {
    double s = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) s += 2.0 * std::norm(a[p * n + q]);
    return std::sqrt(s);
  };

  for (int sweep = 0; sweep < 64 && off_norm() > threshold; ++sweep) {
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const cd apq = a[p * n + q];
        const double r = std::abs(apq);
        if (r <= threshold / (10.0 * n)) continue;
        const cd phase = apq / r;  // apq = r * phase
        const double app = a[p * n + p].real();
        const double aqq = a[q * n + q].real();

        // tan(2 theta) = 2r / (app - aqq), stable half-angle form.
        const double tau = (app - aqq) / (2.0 * r);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        // Columns p, q of A and of the accumulator; rows follow by symmetry.
        for (int i = 0; i < n; ++i) {
          const cd aip = a[i * n + p];
          const cd aiq = a[i * n + q];
          a[i * n + p] = c * aip + s * std::conj(phase) * aiq;
          a[i * n + q] = -s * phase * aip + c * aiq;
          const cd vip = v[i * n + p];
          const cd viq = v[i * n + q];
          v[i * n + p] = c * vip + s * std::conj(phase) * viq;
          v[i * n + q] = -s * phase * vip + c * viq;
        }
        for (int j = 0; j < n; ++j) {
          const cd apj = a[p * n + j];
          const cd aqj = a[q * n + j];
          a[p * n + j] = c * apj + s * phase * aqj;
          a[q * n + j] = -s * std::conj(phase) * apj + c * aqj;
        }
        a[p * n + q] = 0.0;
        a[q * n + p] = 0.0;
        a[p * n + p] = cd{a[p * n + p].real(), 0.0};
        a[q * n + q] = cd{a[q * n + q].real(), 0.0};
      }
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
    return a[i * n + i].real() > a[j * n + j].real();
  });

  std::vector<double> values(n);
  std::vector<std::vector<cd>> vectors(n, std::vector<cd>(n));
  for (int idx = 0; idx < n; ++idx) {
    const int col = order[idx];
    values[idx] = a[col * n + col].real();
    for (int i = 0; i < n; ++i) vectors[idx][i] = v[i * n + col];
  }
  return EighResult{Spectrum(std::move(values)), std::move(vectors)};
}

double lambda_max(const HermitianMatrix& m) { return eigh(m).eigenvalues.max(); }

double lambda_min(const HermitianMatrix& m) { return eigh(m).eigenvalues.min(); }

double operator_norm(const HermitianMatrix& m) {
  const Spectrum s = eigh(m).eigenvalues;
  return std::max(std::abs(s.max()), std::abs(s.min()));
}

HermitianMatrix kron(const HermitianMatrix& a, const HermitianMatrix& b) {
  const int da = a.dim(), db = b.dim();
  const int d = da * db;
  std::vector<cd> out(static_cast<std::size_t>(d) * d);
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < da; ++j)
      for (int p = 0; p < db; ++p)
        for (int q = 0; q < db; ++q)
          out[(i * db + p) * static_cast<std::size_t>(d) + (j * db + q)] =
              a(i, j) * b(p, q);
  return HermitianMatrix(d, std::move(out));
}

HermitianMatrix direct_sum(const std::vector<HermitianMatrix>& blocks) {
  int d = 0;
  for (const auto& b : blocks) d += b.dim();
  if (d == 0) throw ShapeError("direct sum of no blocks");
  std::vector<cd> out(static_cast<std::size_t>(d) * d, cd{0.0, 0.0});
  int off = 0;
  for (const auto& b : blocks) {
    for (int i = 0; i < b.dim(); ++i)
      for (int j = 0; j < b.dim(); ++j)
        out[(off + i) * static_cast<std::size_t>(d) + (off + j)] = b(i, j);
    off += b.dim();
  }
  return HermitianMatrix(d, std::move(out));
}

HermitianMatrix conditional_operator(const HermitianMatrix& x,
                                     std::span<const cd> alpha,
                                     const DimensionProfile& profile, int site) {
  if (x.dim() != profile.total_dim())
    throw ShapeError("operator dimension does not match profile");
  if (site < 0 || site >= profile.sites()) throw ShapeError("site out of range");
  const int ds = profile.local_dim(site);
  if (static_cast<int>(alpha.size()) != ds)
    throw ShapeError("conditioning vector does not match local dimension");

  int pre = 1, post = 1;
  for (int s = 0; s < site; ++s) pre *= profile.local_dim(s);
  for (int s = site + 1; s < profile.sites(); ++s) post *= profile.local_dim(s);
  const int dc = pre * post;  // complementary dimension
  const int D = x.dim();

  auto full_index = [&](int p, int a, int t) { return (p * ds + a) * post + t; };

  std::vector<cd> out(static_cast<std::size_t>(dc) * dc, cd{0.0, 0.0});
  for (int p = 0; p < pre; ++p)
    for (int t = 0; t < post; ++t)
      for (int p2 = 0; p2 < pre; ++p2)
        for (int t2 = 0; t2 < post; ++t2) {
          cd acc{0.0, 0.0};
          for (int a = 0; a < ds; ++a) {
            const cd* row = x.entries().data() +
                            static_cast<std::size_t>(full_index(p, a, t)) * D;
            cd inner{0.0, 0.0};
            for (int b = 0; b < ds; ++b)
              inner += row[full_index(p2, b, t2)] * alpha[b];
            acc += std::conj(alpha[a]) * inner;
          }
          out[(p * post + t) * static_cast<std::size_t>(dc) + (p2 * post + t2)] = acc;
        }
  return HermitianMatrix(dc, std::move(out));
}

HermitianMatrix traceless_part(const HermitianMatrix& a) {
  const double shift = a.trace() / a.dim();
  std::vector<cd> e = a.entries();
  for (int i = 0; i < a.dim(); ++i) e[i * a.dim() + i] -= shift;
  return HermitianMatrix(a.dim(), std::move(e));
}

std::vector<HermitianMatrix> gellmann_basis(int dim) {
  if (dim < 2) throw ShapeError("Gell-Mann basis needs dim >= 2");
  std::vector<HermitianMatrix> basis;
  basis.reserve(static_cast<std::size_t>(dim) * dim - 1);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < dim; ++j) {
    for (int k = j + 1; k < dim; ++k) {
      std::vector<cd> sym(static_cast<std::size_t>(dim) * dim, cd{0.0, 0.0});
      sym[j * dim + k] = inv_sqrt2;
      sym[k * dim + j] = inv_sqrt2;
      basis.emplace_back(dim, std::move(sym));
      std::vector<cd> anti(static_cast<std::size_t>(dim) * dim, cd{0.0, 0.0});
      anti[j * dim + k] = cd{0.0, -inv_sqrt2};
      anti[k * dim + j] = cd{0.0, inv_sqrt2};
      basis.emplace_back(dim, std::move(anti));
    }
  }
  for (int l = 1; l < dim; ++l) {
    std::vector<cd> diag(static_cast<std::size_t>(dim) * dim, cd{0.0, 0.0});
    const double norm = 1.0 / std::sqrt(static_cast<double>(l) * (l + 1));
    for (int i = 0; i < l; ++i) diag[i * dim + i] = norm;
    diag[l * dim + l] = -static_cast<double>(l) * norm;
    basis.emplace_back(dim, std::move(diag));
  }
  return basis;
}

HermitianMatrix sample_goe(int dim, std::uint64_t seed) {
  if (dim < 1) throw ShapeError("dimension must be >= 1");
  CounterRng rng(seed);
  std::vector<cd> e(static_cast<std::size_t>(dim) * dim, cd{0.0, 0.0});
  const double off_sigma = std::sqrt(0.5);
  for (int i = 0; i < dim; ++i) {
    e[i * dim + i] = rng.normal();
    for (int j = i + 1; j < dim; ++j) {
      const double x = off_sigma * rng.normal();
      e[i * dim + j] = x;
      e[j * dim + i] = x;
    }
  }
  return HermitianMatrix(dim, std::move(e));
}

HermitianMatrix sample_hs_state(int dim, std::uint64_t seed) {
  if (dim < 1) throw ShapeError("dimension must be >= 1");
  CounterRng rng(seed);
  std::vector<cd> g(static_cast<std::size_t>(dim) * dim);
  for (cd& z : g) z = rng.complex_normal();
  // rho = G G^dagger, normalized to unit trace.
  std::vector<cd> rho(static_cast<std::size_t>(dim) * dim, cd{0.0, 0.0});
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      cd acc{0.0, 0.0};
      for (int k = 0; k < dim; ++k)
        acc += g[i * dim + k] * std::conj(g[j * dim + k]);
      rho[i * dim + j] = acc;
    }
  double trace = 0.0;
  for (int i = 0; i < dim; ++i) trace += rho[i * dim + i].real();
  for (cd& z : rho) z /= trace;
  return HermitianMatrix(dim, std::move(rho));
}

HermitianMatrix partial_transpose(const HermitianMatrix& rho,
                                  const DimensionProfile& profile, int site) {
  if (profile.sites() != 2) throw ShapeError("partial transpose needs a bipartite profile");
  if (rho.dim() != profile.total_dim()) throw ShapeError("dimension mismatch");
  if (site != 0 && site != 1) throw ShapeError("site out of range");
  const int da = profile.local_dim(0), db = profile.local_dim(1);
  const int D = rho.dim();
  std::vector<cd> out(static_cast<std::size_t>(D) * D);
  for (int a = 0; a < da; ++a)
    for (int i = 0; i < db; ++i)
      for (int b = 0; b < da; ++b)
        for (int j = 0; j < db; ++j) {
          const int row = a * db + i, col = b * db + j;
          const int src_row = (site == 0) ? b * db + i : a * db + j;
          const int src_col = (site == 0) ? a * db + j : b * db + i;
          out[row * static_cast<std::size_t>(D) + col] = rho(src_row, src_col);
        }
  return HermitianMatrix(D, std::move(out));
}

HermitianMatrix identity(int dim) {
  std::vector<cd> e(static_cast<std::size_t>(dim) * dim, cd{0.0, 0.0});
  for (int i = 0; i < dim; ++i) e[i * dim + i] = 1.0;
  return HermitianMatrix(dim, std::move(e));
}

HermitianMatrix pauli_x() {
  return HermitianMatrix(2, {cd{0, 0}, cd{1, 0}, cd{1, 0}, cd{0, 0}});
}

HermitianMatrix pauli_y() {
  return HermitianMatrix(2, {cd{0, 0}, cd{0, -1}, cd{0, 1}, cd{0, 0}});
}

HermitianMatrix pauli_z() {
  return HermitianMatrix(2, {cd{1, 0}, cd{0, 0}, cd{0, 0}, cd{-1, 0}});
}

HermitianMatrix projector(std::span<const cd> psi) {
  const int d = static_cast<int>(psi.size());
  std::vector<cd> e(static_cast<std::size_t>(d) * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) e[i * d + j] = psi[i] * std::conj(psi[j]);
  return HermitianMatrix(d, std::move(e));
}

std::vector<cd> bell_phi_plus() {
  const double s = 1.0 / std::sqrt(2.0);
  return {cd{s, 0}, cd{0, 0}, cd{0, 0}, cd{s, 0}};
}

HermitianMatrix scalar_block(double value) {
  return HermitianMatrix(1, {cd{value, 0.0}});
}

HermitianMatrix combine(std::span<const HermitianMatrix> observables,
                        std::span<const double> weights) {
  if (observables.empty() || observables.size() != weights.size())
    throw ShapeError("combine needs matching observables and weights");
  HermitianMatrix acc = weights[0] * observables[0];
  for (std::size_t i = 1; i < observables.size(); ++i)
    acc += weights[i] * observables[i];
  return acc;
}

}  // namespace nrange::qlinalg
