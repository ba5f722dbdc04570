// Copyright 2026 The qchan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qchan {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

/// Raised when operand shapes do not fit the requested operation.
class DimensionError : public std::invalid_argument {
 public:
  explicit DimensionError(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised when a numerical routine fails to converge or an input violates a
/// numerical precondition (negative eigenvalue, non-Hermitian operator, ...).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

namespace linalg {

inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kPsdTolerance = 1e-9;

enum class Subsystem { first, second };

/// Factor dimensions of a bipartite space d1 (x) d2.
struct Dims {
  std::size_t first = 0;
  std::size_t second = 0;
  std::size_t total() const { return first * second; }
};

/// A square complex matrix equal to its adjoint.
///
/// Construction checks ||M - M^dag||_max against a tolerance scaled by
/// max(1, ||M||_max) and then stores the exact symmetrization (M + M^dag)/2.
class HermitianOperator {
 public:
  HermitianOperator() : m_(ComplexMatrix::Zero(1, 1)) {}
  explicit HermitianOperator(ComplexMatrix m, double tolerance = kHermitianTolerance);

  /// Symmetrizes without the tolerance check; for results that are Hermitian
  /// by construction but carry rounding noise.
  static HermitianOperator symmetrized(const ComplexMatrix& m);
  static HermitianOperator identity(std::size_t dim);
  static HermitianOperator zero(std::size_t dim);

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  const ComplexMatrix& matrix() const { return m_; }
  Complex operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  double trace() const { return m_.trace().real(); }

  HermitianOperator operator+(const HermitianOperator& o) const;
  HermitianOperator operator-(const HermitianOperator& o) const;
  HermitianOperator operator-() const;
  HermitianOperator& operator+=(const HermitianOperator& o);
  HermitianOperator& operator-=(const HermitianOperator& o);
  friend HermitianOperator operator*(double c, const HermitianOperator& h);
  HermitianOperator operator*(double c) const { return c * *this; }
  HermitianOperator operator/(double c) const { return (1.0 / c) * *this; }

  /// Hilbert-Schmidt inner product Re Tr(A B).
  double inner(const HermitianOperator& o) const;

 private:
  ComplexMatrix m_;
};

HermitianOperator operator*(double c, const HermitianOperator& h);

/// Eigenvalues in descending order with matching orthonormal eigenvector columns.
struct EigenDecomposition {
  RealVector values;
  ComplexMatrix vectors;
  int sweeps = 0;
};

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
HermitianOperator kron(const HermitianOperator& a, const HermitianOperator& b);

ComplexMatrix partial_trace(const ComplexMatrix& m, Dims dims, Subsystem traced);
HermitianOperator partial_trace(const HermitianOperator& m, Dims dims, Subsystem traced);

ComplexMatrix partial_transpose(const ComplexMatrix& m, Dims dims, Subsystem transposed);
HermitianOperator partial_transpose(const HermitianOperator& m, Dims dims,
                                    Subsystem transposed);

/// Cyclic complex Jacobi eigensolver. Throws NumericalError if the
/// off-diagonal norm has not dropped below 1e-12 ||M||_F after 100 sweeps.
EigenDecomposition eig_hermitian(const HermitianOperator& m);

/// Applies a real function to the spectrum: V f(Lambda) V^dag.
HermitianOperator spectral_apply(const HermitianOperator& m,
                                 const std::function<double(double)>& f);

double min_eigenvalue(const HermitianOperator& m);
double max_eigenvalue(const HermitianOperator& m);
bool is_psd(const HermitianOperator& m, double tolerance = kPsdTolerance);

/// Square root of a PSD operator; eigenvalues below zero are clipped.
HermitianOperator sqrt_psd(const HermitianOperator& m);
/// Inverse square root of a positive definite operator.
HermitianOperator inv_sqrt_pd(const HermitianOperator& m);

double trace_norm(const HermitianOperator& m);
double frobenius_norm(const ComplexMatrix& m);
double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b);

/// Uhlmann fidelity (Tr|sqrt(rho) sqrt(sigma)|)^2. Both operands must be
/// PSD within -1e-10.
double fidelity(const HermitianOperator& rho, const HermitianOperator& sigma);
/// Tr|sqrt(rho) sqrt(sigma)|.
double root_fidelity(const HermitianOperator& rho, const HermitianOperator& sigma);

HermitianOperator projector(const ComplexVector& ket);

/// Orthonormal real basis of the d x d Hermitian matrices under Re Tr(AB):
/// diagonal units first, then for each i < j the symmetric and
/// antisymmetric off-diagonal pairs scaled by 1/sqrt(2).
class HermitianBasis {
 public:
  explicit HermitianBasis(std::size_t dim);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return dim_ * dim_; }
  HermitianOperator element(std::size_t k) const;
  RealVector coordinates(const ComplexMatrix& m) const;
  ComplexMatrix matrix(const Eigen::Ref<const RealVector>& coords) const;

 private:
  struct Slot {
    std::size_t row;
    std::size_t col;
    enum class Kind { diagonal, real_part, imag_part } kind;
  };
  std::size_t dim_;
  std::vector<Slot> slots_;
};

namespace pauli {
ComplexMatrix identity();
ComplexMatrix x();
ComplexMatrix y();
ComplexMatrix z();
}  // namespace pauli

/// SWAP on C^d (x) C^d: SWAP |i>|j> = |j>|i>.
ComplexMatrix swap(std::size_t d);

}  // namespace linalg
}  // namespace qchan
