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

#include "qchan/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace qchan::linalg {

namespace {

constexpr int kMaxJacobiSweeps = 100;
constexpr double kJacobiTolerance = 1e-12;
constexpr double kFidelityPsdTolerance = 1e-10;

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    std::ostringstream os;
    os << what << ": expected a non-empty square matrix, got " << m.rows() << "x" << m.cols();
    throw DimensionError(os.str());
  }
}

void require_bipartite(const ComplexMatrix& m, Dims dims, const char* what) {
  require_square(m, what);
  if (dims.first == 0 || dims.second == 0 ||
      static_cast<std::size_t>(m.rows()) != dims.total()) {
    std::ostringstream os;
    os << what << ": matrix of dimension " << m.rows() << " does not factor as " << dims.first
       << " x " << dims.second;
    throw DimensionError(os.str());
  }
}

double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace

// ---------------------------------------------------------------------------
// HermitianOperator

HermitianOperator::HermitianOperator(ComplexMatrix m, double tolerance) {
  require_square(m, "HermitianOperator");
  const double asym = max_abs(m - m.adjoint());
  const double scale = std::max(1.0, max_abs(m));
  if (asym > tolerance * scale) {
    std::ostringstream os;
    os << "HermitianOperator: ||M - M^dag||_max = " << asym << " exceeds tolerance";
    throw NumericalError(os.str());
  }
  m_ = 0.5 * (m + m.adjoint());
}

HermitianOperator HermitianOperator::symmetrized(const ComplexMatrix& m) {
  require_square(m, "HermitianOperator::symmetrized");
  HermitianOperator h;
  h.m_ = 0.5 * (m + m.adjoint());
  return h;
}

HermitianOperator HermitianOperator::identity(std::size_t dim) {
  HermitianOperator h;
  h.m_ = ComplexMatrix::Identity(dim, dim);
  return h;
}

HermitianOperator HermitianOperator::zero(std::size_t dim) {
  HermitianOperator h;
  h.m_ = ComplexMatrix::Zero(dim, dim);
  return h;
}

HermitianOperator HermitianOperator::operator+(const HermitianOperator& o) const {
  HermitianOperator r(*this);
  r += o;
  return r;
}

HermitianOperator HermitianOperator::operator-(const HermitianOperator& o) const {
  HermitianOperator r(*this);
  r -= o;
  return r;
}

HermitianOperator HermitianOperator::operator-() const {
  HermitianOperator r;
  r.m_ = -m_;
  return r;
}

HermitianOperator& HermitianOperator::operator+=(const HermitianOperator& o) {
  if (o.dim() != dim()) throw DimensionError("HermitianOperator: dimension mismatch in +");
  m_ += o.m_;
  return *this;
}

HermitianOperator& HermitianOperator::operator-=(const HermitianOperator& o) {
  if (o.dim() != dim()) throw DimensionError("HermitianOperator: dimension mismatch in -");
  m_ -= o.m_;
  return *this;
}

HermitianOperator operator*(double c, const HermitianOperator& h) {
  HermitianOperator r;
  r.m_ = c * h.m_;
  return r;
}

double HermitianOperator::inner(const HermitianOperator& o) const {
  if (o.dim() != dim()) throw DimensionError("HermitianOperator: dimension mismatch in inner");
  // Tr(A B) = sum_ij A_ij B_ji = sum_ij A_ij conj(B_ij) for Hermitian B.
  return (m_.array() * o.m_.array().conjugate()).sum().real();
}

// ---------------------------------------------------------------------------
// Tensor structure

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.size() == 0 || b.size() == 0) throw DimensionError("kron: empty operand");
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

HermitianOperator kron(const HermitianOperator& a, const HermitianOperator& b) {
  return HermitianOperator::symmetrized(kron(a.matrix(), b.matrix()));
}

ComplexMatrix partial_trace(const ComplexMatrix& m, Dims dims, Subsystem traced) {
  require_bipartite(m, dims, "partial_trace");
  const auto d1 = static_cast<Eigen::Index>(dims.first);
  const auto d2 = static_cast<Eigen::Index>(dims.second);
  if (traced == Subsystem::first) {
    ComplexMatrix out = ComplexMatrix::Zero(d2, d2);
    for (Eigen::Index i = 0; i < d1; ++i) out += m.block(i * d2, i * d2, d2, d2);
    return out;
  }
  ComplexMatrix out(d1, d1);
  for (Eigen::Index i = 0; i < d1; ++i) {
    for (Eigen::Index k = 0; k < d1; ++k) {
      out(i, k) = m.block(i * d2, k * d2, d2, d2).trace();
    }
  }
  return out;
}

HermitianOperator partial_trace(const HermitianOperator& m, Dims dims, Subsystem traced) {
  return HermitianOperator::symmetrized(partial_trace(m.matrix(), dims, traced));
}

ComplexMatrix partial_transpose(const ComplexMatrix& m, Dims dims, Subsystem transposed) {
  require_bipartite(m, dims, "partial_transpose");
  const auto d1 = static_cast<Eigen::Index>(dims.first);
  const auto d2 = static_cast<Eigen::Index>(dims.second);
  ComplexMatrix out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < d1; ++i) {
    for (Eigen::Index k = 0; k < d1; ++k) {
      if (transposed == Subsystem::first) {
        out.block(i * d2, k * d2, d2, d2) = m.block(k * d2, i * d2, d2, d2);
      } else {
        out.block(i * d2, k * d2, d2, d2) = m.block(i * d2, k * d2, d2, d2).transpose();
      }
    }
  }
  return out;
}

HermitianOperator partial_transpose(const HermitianOperator& m, Dims dims,
                                    Subsystem transposed) {
  return HermitianOperator::symmetrized(partial_transpose(m.matrix(), dims, transposed));
}

// ---------------------------------------------------------------------------
// Spectral routines

EigenDecomposition eig_hermitian(const HermitianOperator& h) {
  const Eigen::Index n = static_cast<Eigen::Index>(h.dim());
  ComplexMatrix a = h.matrix();
  ComplexMatrix v = ComplexMatrix::Identity(n, n);
  const double scale = frobenius_norm(a);

  auto off_norm = [&]() {
    double s = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) s += 2.0 * std::norm(a(p, q));
    return std::sqrt(s);
  };

  int sweep = 0;
  for (; sweep < kMaxJacobiSweeps; ++sweep) {
    const double off = off_norm();
    // Keep sweeping past the contract tolerance while rotations still move
    // the matrix; Jacobi converges quadratically so this costs one sweep.
    if (off == 0.0 || off <= 1e-15 * scale) break;
    bool rotated = false;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        if (mag <= 1e-300 || mag < 1e-18 * std::sqrt(std::abs(app * aqq))) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        rotated = true;
        const Complex phase = apq / mag;  // e^{i phi}
        const double theta = (aqq - app) / (2.0 * mag);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // J = diag(1, conj(phase)) * [[c, s], [-s, c]]
        const Complex jpp = c;
        const Complex jpq = s;
        const Complex jqp = -s * std::conj(phase);
        const Complex jqq = c * std::conj(phase);
        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = akp * jpp + akq * jqp;
          a(k, q) = akp * jpq + akq * jqq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex apk = a(p, k);
          const Complex aqk = a(q, k);
          a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
          a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex vkp = v(k, p);
          const Complex vkq = v(k, q);
          v(k, p) = vkp * jpp + vkq * jqp;
          v(k, q) = vkp * jpq + vkq * jqq;
        }
      }
    }
    if (!rotated) break;
  }
  if (off_norm() > kJacobiTolerance * std::max(scale, 1e-300) && scale > 0.0) {
    throw NumericalError("eig_hermitian: Jacobi iteration did not converge in 100 sweeps");
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
    return a(i, i).real() > a(j, j).real();
  });
  EigenDecomposition out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = a(order[static_cast<std::size_t>(k)], order[static_cast<std::size_t>(k)]).real();
    out.vectors.col(k) = v.col(order[static_cast<std::size_t>(k)]);
  }
  out.sweeps = sweep;
  return out;
}

HermitianOperator spectral_apply(const HermitianOperator& m,
                                 const std::function<double(double)>& f) {
  const EigenDecomposition e = eig_hermitian(m);
  RealVector fv(e.values.size());
  for (Eigen::Index k = 0; k < e.values.size(); ++k) fv(k) = f(e.values(k));
  return HermitianOperator::symmetrized(e.vectors * fv.cast<Complex>().asDiagonal() *
                                        e.vectors.adjoint());
}

double min_eigenvalue(const HermitianOperator& m) {
  const RealVector v = eig_hermitian(m).values;
  return v(v.size() - 1);
}

double max_eigenvalue(const HermitianOperator& m) { return eig_hermitian(m).values(0); }

bool is_psd(const HermitianOperator& m, double tolerance) {
  return min_eigenvalue(m) >= -tolerance;
}

HermitianOperator sqrt_psd(const HermitianOperator& m) {
  return spectral_apply(m, [](double x) { return x > 0.0 ? std::sqrt(x) : 0.0; });
}

HermitianOperator inv_sqrt_pd(const HermitianOperator& m) {
  const EigenDecomposition e = eig_hermitian(m);
  if (e.values(e.values.size() - 1) <= 0.0) {
    throw NumericalError("inv_sqrt_pd: operator is not positive definite");
  }
  RealVector fv = e.values.cwiseSqrt().cwiseInverse();
  return HermitianOperator::symmetrized(e.vectors * fv.cast<Complex>().asDiagonal() *
                                        e.vectors.adjoint());
}

double trace_norm(const HermitianOperator& m) { return eig_hermitian(m).values.cwiseAbs().sum(); }

double frobenius_norm(const ComplexMatrix& m) { return m.norm(); }

double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("frobenius_distance: shape mismatch");
  }
  return (a - b).norm();
}

double root_fidelity(const HermitianOperator& rho, const HermitianOperator& sigma) {
  if (rho.dim() != sigma.dim()) throw DimensionError("fidelity: dimension mismatch");
  const EigenDecomposition er = eig_hermitian(rho);
  const EigenDecomposition es = eig_hermitian(sigma);
  if (er.values(er.values.size() - 1) < -kFidelityPsdTolerance ||
      es.values(es.values.size() - 1) < -kFidelityPsdTolerance) {
    throw NumericalError("fidelity: operand has a negative eigenvalue beyond tolerance");
  }
  RealVector sr = er.values.cwiseMax(0.0).cwiseSqrt();
  const ComplexMatrix root = er.vectors * sr.cast<Complex>().asDiagonal() * er.vectors.adjoint();
  const HermitianOperator inner =
      HermitianOperator::symmetrized(root * sigma.matrix() * root);
  const RealVector ev = eig_hermitian(inner).values;
  double s = 0.0;
  for (Eigen::Index k = 0; k < ev.size(); ++k) s += ev(k) > 0.0 ? std::sqrt(ev(k)) : 0.0;
  return s;
}

double fidelity(const HermitianOperator& rho, const HermitianOperator& sigma) {
  const double f = root_fidelity(rho, sigma);
  return f * f;
}

HermitianOperator projector(const ComplexVector& ket) {
  return HermitianOperator::symmetrized(ket * ket.adjoint());
}

// ---------------------------------------------------------------------------
// Hermitian coordinate basis

HermitianBasis::HermitianBasis(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw DimensionError("HermitianBasis: dimension must be positive");
  slots_.reserve(dim * dim);
  for (std::size_t i = 0; i < dim; ++i) slots_.push_back({i, i, Slot::Kind::diagonal});
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = i + 1; j < dim; ++j) {
      slots_.push_back({i, j, Slot::Kind::real_part});
      slots_.push_back({i, j, Slot::Kind::imag_part});
    }
  }
}

HermitianOperator HermitianBasis::element(std::size_t k) const {
  RealVector c = RealVector::Zero(static_cast<Eigen::Index>(size()));
  c(static_cast<Eigen::Index>(k)) = 1.0;
  return HermitianOperator::symmetrized(matrix(c));
}

RealVector HermitianBasis::coordinates(const ComplexMatrix& m) const {
  if (static_cast<std::size_t>(m.rows()) != dim_ || m.cols() != m.rows()) {
    throw DimensionError("HermitianBasis::coordinates: dimension mismatch");
  }
  RealVector c(static_cast<Eigen::Index>(size()));
  const double r2 = std::sqrt(2.0);
  for (std::size_t k = 0; k < slots_.size(); ++k) {
    const Slot& s = slots_[k];
    const auto i = static_cast<Eigen::Index>(s.row);
    const auto j = static_cast<Eigen::Index>(s.col);
    switch (s.kind) {
      case Slot::Kind::diagonal: c(static_cast<Eigen::Index>(k)) = m(i, i).real(); break;
      // Average the two triangles so non-Hermitian noise projects out.
      case Slot::Kind::real_part:
        c(static_cast<Eigen::Index>(k)) = r2 * 0.5 * (m(i, j).real() + m(j, i).real());
        break;
      case Slot::Kind::imag_part:
        c(static_cast<Eigen::Index>(k)) = r2 * 0.5 * (m(i, j).imag() - m(j, i).imag());
        break;
    }
  }
  return c;
}

ComplexMatrix HermitianBasis::matrix(const Eigen::Ref<const RealVector>& coords) const {
  if (static_cast<std::size_t>(coords.size()) != size()) {
    throw DimensionError("HermitianBasis::matrix: coordinate count mismatch");
  }
  const auto d = static_cast<Eigen::Index>(dim_);
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  const double inv_r2 = 1.0 / std::sqrt(2.0);
  for (std::size_t k = 0; k < slots_.size(); ++k) {
    const Slot& s = slots_[k];
    const auto i = static_cast<Eigen::Index>(s.row);
    const auto j = static_cast<Eigen::Index>(s.col);
    const double x = coords(static_cast<Eigen::Index>(k));
    switch (s.kind) {
      case Slot::Kind::diagonal: m(i, i) += x; break;
      case Slot::Kind::real_part:
        m(i, j) += x * inv_r2;
        m(j, i) += x * inv_r2;
        break;
      case Slot::Kind::imag_part:
        m(i, j) += Complex(0.0, x * inv_r2);
        m(j, i) -= Complex(0.0, x * inv_r2);
        break;
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// Constants

namespace pauli {
ComplexMatrix identity() { return ComplexMatrix::Identity(2, 2); }
ComplexMatrix x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
ComplexMatrix y() {
  ComplexMatrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}
ComplexMatrix z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}
}  // namespace pauli

ComplexMatrix swap(std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  ComplexMatrix s = ComplexMatrix::Zero(n * n, n * n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) s(j * n + i, i * n + j) = 1.0;
  return s;
}

}  // namespace qchan::linalg
