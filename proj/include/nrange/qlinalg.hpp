// SPDX-License-Identifier: Apache-2.0
//
// Complex Hermitian linear algebra for small dimensions (<= 64), quantum
// constructors and the random samplers used by the experiment drivers.
#ifndef NRANGE_QLINALG_HPP
#define NRANGE_QLINALG_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "nrange/common.hpp"
#include "nrange/rng.hpp"

namespace nrange::qlinalg {

inline constexpr int kMaxDim = 64;

// Dense Hermitian matrix. Construction symmetrizes (M + M^dagger)/2 and
// rejects inputs whose anti-Hermitian part exceeds 1e-8, so entries satisfy
// entries[i*dim+j] == conj(entries[j*dim+i]) exactly.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(int dim);  // zero matrix
  HermitianMatrix(int dim, std::vector<cd> entries);

  int dim() const { return dim_; }
  const std::vector<cd>& entries() const { return entries_; }
  cd operator()(int i, int j) const { return entries_[i * dim_ + j]; }

  double trace() const;
  double frobenius_norm() const;
  std::vector<cd> apply(std::span<const cd> v) const;
  // Re <psi|A|psi> for a (not necessarily normalized) vector.
  double expectation(std::span<const cd> psi) const;

  HermitianMatrix& operator+=(const HermitianMatrix& other);
  HermitianMatrix& operator-=(const HermitianMatrix& other);
  HermitianMatrix& operator*=(double scale);

  friend HermitianMatrix operator+(HermitianMatrix a, const HermitianMatrix& b) {
    return a += b;
  }
  friend HermitianMatrix operator-(HermitianMatrix a, const HermitianMatrix& b) {
    return a -= b;
  }
  friend HermitianMatrix operator*(double s, HermitianMatrix a) { return a *= s; }

 private:
  int dim_ = 0;
  std::vector<cd> entries_;
};

// Local dimensions (d_1, ..., d_n) of a tensor-product Hilbert space.
class DimensionProfile {
 public:
  DimensionProfile() = default;
  explicit DimensionProfile(std::vector<int> local_dims);

  int sites() const { return static_cast<int>(local_dims_.size()); }
  int local_dim(int site) const { return local_dims_[site]; }
  const std::vector<int>& local_dims() const { return local_dims_; }
  int total_dim() const { return total_dim_; }

  bool operator==(const DimensionProfile&) const = default;

 private:
  std::vector<int> local_dims_;
  int total_dim_ = 0;
};

// One unit vector per tensor factor; |alpha> ox |beta> ox ...
class ProductState {
 public:
  ProductState() = default;
  explicit ProductState(std::vector<std::vector<cd>> factors);

  int sites() const { return static_cast<int>(factors_.size()); }
  const std::vector<cd>& factor(int site) const { return factors_[site]; }
  const std::vector<std::vector<cd>>& factors() const { return factors_; }
  DimensionProfile profile() const;
  std::vector<cd> full_vector() const;
  double expectation(const HermitianMatrix& observable) const;

 private:
  std::vector<std::vector<cd>> factors_;
};

// Real eigenvalues sorted descending.
class Spectrum {
 public:
  Spectrum() = default;
  explicit Spectrum(std::vector<double> values);

  int size() const { return static_cast<int>(values_.size()); }
  double operator[](int i) const { return values_[i]; }
  const std::vector<double>& values() const { return values_; }
  double max() const { return values_.front(); }
  double min() const { return values_.back(); }
  // Checks entries >= -tol and sum == 1 within tol.
  bool is_state_spectrum(double tol = 1e-12) const;

 private:
  std::vector<double> values_;
};

// Ordered observables sharing one dimension profile.
struct ObservableSet {
  DimensionProfile profile;
  std::vector<HermitianMatrix> observables;

  ObservableSet() = default;
  ObservableSet(DimensionProfile p, std::vector<HermitianMatrix> obs);
  int k() const { return static_cast<int>(observables.size()); }
};

struct EighResult {
  Spectrum eigenvalues;              // descending
  std::vector<std::vector<cd>> eigenvectors;  // eigenvectors[i] pairs with eigenvalues[i]
};

// Cyclic complex Jacobi; stops when the off-diagonal Frobenius norm falls
// below 1e-13 * ||A||_F.
EighResult eigh(const HermitianMatrix& m);

double lambda_max(const HermitianMatrix& m);
double lambda_min(const HermitianMatrix& m);
double operator_norm(const HermitianMatrix& m);

HermitianMatrix kron(const HermitianMatrix& a, const HermitianMatrix& b);
HermitianMatrix direct_sum(const std::vector<HermitianMatrix>& blocks);

// (<alpha| ox 1) X (|alpha> ox 1) on the factors complementary to `site`.
HermitianMatrix conditional_operator(const HermitianMatrix& x,
                                     std::span<const cd> alpha,
                                     const DimensionProfile& profile, int site);

HermitianMatrix traceless_part(const HermitianMatrix& a);

// D^2-1 traceless Hermitian matrices with Tr(G_i G_j) = delta_ij.
std::vector<HermitianMatrix> gellmann_basis(int dim);

// Real symmetric matrix with density ~ exp(-Tr A^2 / 2): diagonal entries
// N(0,1), off-diagonal N(0,1/2). Deterministic per seed.
HermitianMatrix sample_goe(int dim, std::uint64_t seed);

// rho = G G^dagger / Tr(G G^dagger) for a complex Ginibre G (flat
// Hilbert-Schmidt measure).
HermitianMatrix sample_hs_state(int dim, std::uint64_t seed);

HermitianMatrix partial_transpose(const HermitianMatrix& rho,
                                  const DimensionProfile& profile, int site);

// Convenience constructors.
HermitianMatrix identity(int dim);
HermitianMatrix pauli_x();
HermitianMatrix pauli_y();
HermitianMatrix pauli_z();
HermitianMatrix projector(std::span<const cd> psi);
std::vector<cd> bell_phi_plus();
HermitianMatrix scalar_block(double value);  // 1x1 block for direct sums

HermitianMatrix combine(std::span<const HermitianMatrix> observables,
                        std::span<const double> weights);

}  // namespace nrange::qlinalg

#endif
