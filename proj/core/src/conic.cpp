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

#include "qchan/conic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <Eigen/LU>
#include <Eigen/QR>
#include <Eigen/SVD>

namespace qchan::conic {

using linalg::HermitianBasis;
using linalg::HermitianOperator;

// ---------------------------------------------------------------------------
// Model

LinearFunctional& LinearFunctional::add(BlockId b, const ComplexMatrix& coeff) {
  if (coeff.rows() != coeff.cols()) throw DimensionError("functional coefficient must be square");
  blocks_.push_back({b.index, (coeff + coeff.adjoint()) / 2.0});
  return *this;
}

LinearFunctional& LinearFunctional::add(ScalarId s, double coeff) {
  scalars_.push_back({s.index, coeff});
  return *this;
}

LinearFunctional& LinearFunctional::add_trace(BlockId b, std::size_t dim, double c) {
  blocks_.push_back({b.index, c * ComplexMatrix::Identity(dim, dim)});
  return *this;
}

MatrixExpression::MatrixExpression(std::size_t dim)
    : dim_(dim), constant_(ComplexMatrix::Zero(dim, dim)) {
  if (dim == 0) throw DimensionError("matrix expression of dimension 0");
}

MatrixExpression& MatrixExpression::add(BlockId b, std::size_t block_dim, double c) {
  if (block_dim != dim_) throw DimensionError("block dimension does not match expression");
  terms_.push_back({b.index, [c](const ComplexMatrix& e) -> ComplexMatrix { return c * e; }});
  return *this;
}

MatrixExpression& MatrixExpression::add_partial_trace(BlockId b, linalg::Dims dims,
                                                      linalg::Subsystem traced, double c) {
  const std::size_t kept =
      traced == linalg::Subsystem::first ? dims.second : dims.first;
  if (kept != dim_) throw DimensionError("partial trace output does not match expression");
  const std::size_t other = traced == linalg::Subsystem::first ? dims.first : dims.second;
  terms_.push_back({b.index, [c, traced, other](const ComplexMatrix& e) -> ComplexMatrix {
                      const ComplexMatrix id = ComplexMatrix::Identity(other, other);
                      return c * (traced == linalg::Subsystem::first ? linalg::kron(id, e)
                                                                     : linalg::kron(e, id));
                    }});
  return *this;
}

MatrixExpression& MatrixExpression::add_partial_transpose(BlockId b, linalg::Dims dims,
                                                          linalg::Subsystem transposed,
                                                          double c) {
  if (dims.total() != dim_) throw DimensionError("partial transpose does not match expression");
  terms_.push_back({b.index, [c, dims, transposed](const ComplexMatrix& e) -> ComplexMatrix {
                      return c * linalg::partial_transpose(e, dims, transposed);
                    }});
  return *this;
}

MatrixExpression& MatrixExpression::add_sub_block(BlockId b, std::size_t block_dim,
                                                  std::size_t offset, double c) {
  if (offset + dim_ > block_dim) throw DimensionError("sub-block exceeds block");
  const std::size_t n = dim_;
  terms_.push_back({b.index, [c, block_dim, offset, n](const ComplexMatrix& e) -> ComplexMatrix {
                      ComplexMatrix out = ComplexMatrix::Zero(block_dim, block_dim);
                      out.block(offset, offset, n, n) = c * e;
                      return out;
                    }});
  return *this;
}

MatrixExpression& MatrixExpression::add(ScalarId s, const ComplexMatrix& m) {
  if (static_cast<std::size_t>(m.rows()) != dim_ || m.rows() != m.cols())
    throw DimensionError("scalar coefficient matrix does not match expression");
  scalar_terms_.push_back({s.index, m});
  return *this;
}

MatrixExpression& MatrixExpression::add_constant(const ComplexMatrix& m) {
  if (static_cast<std::size_t>(m.rows()) != dim_ || m.rows() != m.cols())
    throw DimensionError("constant does not match expression");
  constant_ += m;
  return *this;
}

LinearFunctional MatrixExpression::functional(const ComplexMatrix& e, double* constant) const {
  LinearFunctional f;
  for (const auto& t : terms_) f.add(BlockId{t.block}, t.adjoint(e));
  for (const auto& t : scalar_terms_) f.add(ScalarId{t.scalar}, (e * t.m).trace().real());
  if (constant) *constant = (e * constant_).trace().real();
  return f;
}

BlockId ConicProgram::add_psd_block(std::string label, std::size_t dim) {
  if (dim == 0) throw DimensionError("PSD block of dimension 0");
  blocks_.push_back({std::move(label), dim});
  return BlockId{blocks_.size() - 1};
}

ScalarId ConicProgram::add_free_scalar(std::string label) {
  scalars_.push_back(std::move(label));
  return ScalarId{scalars_.size() - 1};
}

std::size_t ConicProgram::add_equality(LinearFunctional lhs, double rhs) {
  equalities_.push_back({std::move(lhs), rhs});
  return equalities_.size() - 1;
}

ConstraintRange ConicProgram::add_equality(const MatrixExpression& lhs, const ComplexMatrix& rhs) {
  const std::size_t n = lhs.dim();
  if (static_cast<std::size_t>(rhs.rows()) != n || rhs.rows() != rhs.cols())
    throw DimensionError("equality right-hand side does not match expression");
  HermitianBasis basis(n);
  const RealVector r = basis.coordinates(rhs);
  ConstraintRange range{equalities_.size(), basis.size(), n};
  for (std::size_t k = 0; k < basis.size(); ++k) {
    double c0 = 0.0;
    LinearFunctional f = lhs.functional(basis.element(k).matrix(), &c0);
    add_equality(std::move(f), r(static_cast<Eigen::Index>(k)) - c0);
  }
  return range;
}

PsdConstraint ConicProgram::add_psd_constraint(std::string label, const MatrixExpression& expr) {
  const std::size_t n = expr.dim();
  BlockId slack = add_psd_block(std::move(label), n);
  HermitianBasis basis(n);
  ConstraintRange range{equalities_.size(), basis.size(), n};
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const ComplexMatrix ek = basis.element(k).matrix();
    double c0 = 0.0;
    LinearFunctional f = expr.functional(ek, &c0);
    // S - expr_lin = expr_const
    LinearFunctional g;
    g.add(slack, ek);
    for (const auto& t : f.block_terms()) g.add(BlockId{t.block}, -t.coeff);
    for (const auto& t : f.scalar_terms()) g.add(ScalarId{t.scalar}, -t.coeff);
    add_equality(std::move(g), c0);
  }
  return {slack, range};
}

void ConicProgram::set_objective(LinearFunctional objective, double constant) {
  objective_ = std::move(objective);
  objective_constant_ = constant;
}

void ConicProgram::check_block(std::size_t index) const {
  if (index >= blocks_.size()) throw std::invalid_argument("functional references undeclared block");
}

void ConicProgram::validate() const {
  auto check = [this](const LinearFunctional& f) {
    for (const auto& t : f.block_terms()) {
      check_block(t.block);
      const auto d = static_cast<Eigen::Index>(blocks_[t.block].dim);
      if (t.coeff.rows() != d || t.coeff.cols() != d)
        throw std::invalid_argument("coefficient shape does not match block '" +
                                    blocks_[t.block].label + "'");
    }
    for (const auto& t : f.scalar_terms())
      if (t.scalar >= scalars_.size())
        throw std::invalid_argument("functional references undeclared scalar");
  };
  for (const auto& e : equalities_) check(e.lhs);
  check(objective_);
  if (blocks_.empty()) throw std::invalid_argument("program has no PSD blocks");
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::unbounded: return "unbounded";
    case SolveStatus::numerical_failure: return "numerical-failure";
  }
  return "unknown";
}

HermitianOperator Solution::dual_matrix(const ConstraintRange& r) const {
  HermitianBasis basis(r.dim);
  RealVector c(static_cast<Eigen::Index>(r.count));
  for (std::size_t k = 0; k < r.count; ++k)
    c(static_cast<Eigen::Index>(k)) = dual(static_cast<Eigen::Index>(r.first + k));
  return HermitianOperator::symmetrized(basis.matrix(c));
}

// ---------------------------------------------------------------------------
// Interior-point solver

namespace {

using Index = Eigen::Index;

struct Cone {
  Index offset;  // into the cone part of the coordinate vector
  Index dim;
  HermitianBasis basis;
};

// Dense real form: minimize c'x  s.t.  A x = b,  x_cone in K,  x_free free.
// Block coordinates come first, free scalars last.
struct DenseProgram {
  std::vector<Cone> cones;
  Index m = 0;   // cone coordinates
  Index nf = 0;  // free scalars
  RealMatrix A;
  RealVector b;
  RealVector c;
  Index degree = 0;
};

DenseProgram lower(const ConicProgram& p) {
  DenseProgram d;
  Index off = 0;
  for (const auto& blk : p.blocks()) {
    const auto dim = static_cast<Index>(blk.dim);
    d.cones.push_back({off, dim, HermitianBasis(blk.dim)});
    off += dim * dim;
    d.degree += dim;
  }
  d.m = off;
  d.nf = static_cast<Index>(p.scalars().size());
  const Index n = d.m + d.nf;

  auto fill = [&](const LinearFunctional& f, auto&& row) {
    for (const auto& t : f.block_terms()) {
      const Cone& cone = d.cones[t.block];
      row.segment(cone.offset, cone.dim * cone.dim) += cone.basis.coordinates(t.coeff);
    }
    for (const auto& t : f.scalar_terms()) row(d.m + static_cast<Index>(t.scalar)) += t.coeff;
  };

  const auto rows = static_cast<Index>(p.equalities().size());
  d.A = RealMatrix::Zero(rows, n);
  d.b = RealVector::Zero(rows);
  for (Index i = 0; i < rows; ++i) {
    const auto& eq = p.equalities()[static_cast<std::size_t>(i)];
    RealVector row = RealVector::Zero(n);
    fill(eq.lhs, row);
    d.A.row(i) = row.transpose();
    d.b(i) = eq.rhs;
  }
  d.c = RealVector::Zero(n);
  fill(p.objective(), d.c);
  return d;
}

ComplexMatrix cone_matrix(const Cone& cone, const RealVector& v) {
  return cone.basis.matrix(v.segment(cone.offset, cone.dim * cone.dim));
}

void set_cone(const Cone& cone, RealVector& v, const ComplexMatrix& m) {
  v.segment(cone.offset, cone.dim * cone.dim) = cone.basis.coordinates(m);
}

// Eigen's self-adjoint solver is used inside the iteration: it is faster than
// the Jacobi kernel and the iterates are only needed to working precision.
Eigen::SelfAdjointEigenSolver<ComplexMatrix> herm_eig(const ComplexMatrix& m) {
  return Eigen::SelfAdjointEigenSolver<ComplexMatrix>((m + m.adjoint()) / 2.0);
}

double min_eig(const ComplexMatrix& m) { return herm_eig(m).eigenvalues().minCoeff(); }

struct ConeScaling {
  ComplexMatrix R;     // W^T(u) = R u R^H, W(z) = R^H z R
  ComplexMatrix Rinv;  // W^{-T}(s) = Rinv s Rinv^H
  ComplexMatrix Q;     // (W^T W)^{-1}(u) = Q u Q
  RealVector lambda;   // W z = W^{-T} s = diag(lambda)
};

ComplexMatrix sqrt_factor(const ComplexMatrix& m) {
  auto es = herm_eig(m);
  RealVector v = es.eigenvalues().cwiseMax(std::numeric_limits<double>::min()).cwiseSqrt();
  return es.eigenvectors() * v.asDiagonal();
}

ConeScaling nt_scaling(const ComplexMatrix& s, const ComplexMatrix& z) {
  const ComplexMatrix ls = sqrt_factor(s);
  const ComplexMatrix lz = sqrt_factor(z);
  Eigen::JacobiSVD<ComplexMatrix> svd(lz.adjoint() * ls, Eigen::ComputeFullU | Eigen::ComputeFullV);
  ConeScaling w;
  w.lambda = svd.singularValues();
  const RealVector isq = w.lambda.cwiseMax(std::numeric_limits<double>::min()).cwiseSqrt().cwiseInverse();
  w.R = ls * svd.matrixV() * isq.asDiagonal();
  w.Rinv = isq.asDiagonal() * svd.matrixU().adjoint() * lz.adjoint();
  w.Q = w.Rinv.adjoint() * w.Rinv;
  return w;
}

class Scaling {
 public:
  Scaling(const DenseProgram& d, const RealVector& s, const RealVector& z) : d_(d) {
    for (const auto& cone : d.cones) cones_.push_back(nt_scaling(cone_matrix(cone, s), cone_matrix(cone, z)));
  }
  static Scaling identity(const DenseProgram& d) {
    Scaling w(d);
    for (const auto& cone : d.cones) {
      ConeScaling c;
      c.R = ComplexMatrix::Identity(cone.dim, cone.dim);
      c.Rinv = c.R;
      c.Q = c.R;
      c.lambda = RealVector::Ones(cone.dim);
      w.cones_.push_back(c);
    }
    return w;
  }

  const ConeScaling& operator[](std::size_t k) const { return cones_[k]; }

  // W(z)
  RealVector apply(const RealVector& z) const {
    return map(z, [](const ConeScaling& w, const ComplexMatrix& u) -> ComplexMatrix {
      return w.R.adjoint() * u * w.R;
    });
  }
  // W^T(u)
  RealVector apply_transpose(const RealVector& u) const {
    return map(u, [](const ConeScaling& w, const ComplexMatrix& m) -> ComplexMatrix {
      return w.R * m * w.R.adjoint();
    });
  }
  // W^{-T}(s)
  RealVector apply_inverse_transpose(const RealVector& s) const {
    return map(s, [](const ConeScaling& w, const ComplexMatrix& m) -> ComplexMatrix {
      return w.Rinv * m * w.Rinv.adjoint();
    });
  }
  // (W^T W)^{-1}(u)
  RealVector apply_inverse_gram(const RealVector& u) const {
    return map(u, [](const ConeScaling& w, const ComplexMatrix& m) -> ComplexMatrix {
      return w.Q * m * w.Q;
    });
  }
  // W^T W (u)
  RealVector apply_gram(const RealVector& u) const {
    return map(u, [](const ConeScaling& w, const ComplexMatrix& m) -> ComplexMatrix {
      const ComplexMatrix p = w.R * w.R.adjoint();
      return p * m * p;
    });
  }

  // Matrix of u -> Q u Q on each cone, in basis coordinates.
  RealMatrix inverse_gram_matrix() const {
    RealMatrix h = RealMatrix::Zero(d_.m, d_.m);
    for (std::size_t k = 0; k < d_.cones.size(); ++k) {
      const Cone& cone = d_.cones[k];
      const Index n = cone.dim * cone.dim;
      for (Index l = 0; l < n; ++l) {
        const ComplexMatrix e = cone.basis.element(static_cast<std::size_t>(l)).matrix();
        h.block(cone.offset, cone.offset + l, n, 1) =
            cone.basis.coordinates(cones_[k].Q * e * cones_[k].Q);
      }
    }
    return h;
  }

 private:
  explicit Scaling(const DenseProgram& d) : d_(d) {}

  template <class F>
  RealVector map(const RealVector& v, F&& f) const {
    RealVector out(v.size());
    for (std::size_t k = 0; k < d_.cones.size(); ++k) {
      const Cone& cone = d_.cones[k];
      set_cone(cone, out, f(cones_[k], cone_matrix(cone, v)));
    }
    return out;
  }

  const DenseProgram& d_;
  std::vector<ConeScaling> cones_;
};

struct KktSolution {
  RealVector x, y, z;
};

// Solves  A'uy - [uz;0] = bx,  A ux = by,  -ux_cone - W'W uz = bz.
class KktSolver {
 public:
  KktSolver(const DenseProgram& d, const Scaling& w, const std::vector<bool>& isolated)
      : d_(d), w_(w) {
    const Index n = d.m + d.nf;
    const Index p = d.A.rows();
    RealMatrix k = RealMatrix::Zero(n + p, n + p);
    k.topLeftCorner(d.m, d.m) = w.inverse_gram_matrix();
    for (Index j = 0; j < d.nf; ++j)
      if (isolated[static_cast<std::size_t>(j)]) k(d.m + j, d.m + j) = 1.0;
    k.block(0, n, n, p) = d.A.transpose();
    k.block(n, 0, p, n) = d.A;
    lu_.compute(k);
  }

  KktSolution solve(const RealVector& bx, const RealVector& by, const RealVector& bz) const {
    KktSolution u = raw(bx, by, bz);
    for (int it = 0; it < 2; ++it) {
      RealVector rx, ry, rz;
      residual(u, bx, by, bz, rx, ry, rz);
      const KktSolution du = raw(rx, ry, rz);
      u.x += du.x;
      u.y += du.y;
      u.z += du.z;
    }
    return u;
  }

 private:
  KktSolution raw(const RealVector& bx, const RealVector& by, const RealVector& bz) const {
    const Index n = d_.m + d_.nf;
    const Index p = d_.A.rows();
    RealVector rhs(n + p);
    rhs.head(n) = bx;
    rhs.head(d_.m) -= w_.apply_inverse_gram(bz);
    rhs.tail(p) = by;
    const RealVector sol = lu_.solve(rhs);
    KktSolution u;
    u.x = sol.head(n);
    u.y = sol.tail(p);
    u.z = -w_.apply_inverse_gram(u.x.head(d_.m) + bz);
    return u;
  }

  void residual(const KktSolution& u, const RealVector& bx, const RealVector& by,
                const RealVector& bz, RealVector& rx, RealVector& ry, RealVector& rz) const {
    rx = bx - d_.A.transpose() * u.y;
    rx.head(d_.m) += u.z;
    ry = by - d_.A * u.x;
    rz = bz + u.x.head(d_.m) + w_.apply_gram(u.z);
  }

  const DenseProgram& d_;
  const Scaling& w_;
  Eigen::PartialPivLU<RealMatrix> lu_;
};

bool all_finite(const RealVector& v) { return v.allFinite(); }

// Largest t with v + t*e still outside the interior, i.e. max_k -lambda_min(V_k).
double max_neg_eig(const DenseProgram& d, const RealVector& v) {
  double t = -std::numeric_limits<double>::infinity();
  for (const auto& cone : d.cones) t = std::max(t, -min_eig(cone_matrix(cone, v)));
  return t;
}

void add_identity(const DenseProgram& d, RealVector& v, double a) {
  for (const auto& cone : d.cones)
    for (Index i = 0; i < cone.dim; ++i) v(cone.offset + i) += a;
}

// Max step alpha with lambda + alpha * delta PSD (delta in the scaled space).
double max_step(const DenseProgram& d, const Scaling& w, const RealVector& delta) {
  double alpha = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < d.cones.size(); ++k) {
    const Cone& cone = d.cones[k];
    const RealVector isq = w[k].lambda.cwiseSqrt().cwiseInverse();
    const ComplexMatrix m = isq.asDiagonal() * cone_matrix(cone, delta) * isq.asDiagonal();
    const double mu = min_eig(m);
    if (mu < 0) alpha = std::min(alpha, -1.0 / mu);
  }
  return alpha;
}

// Scaled-space complementarity solve: lambda o u = r  ->  u_ij = 2 r_ij / (l_i + l_j).
RealVector lambda_divide(const DenseProgram& d, const Scaling& w, const RealVector& r) {
  RealVector out(r.size());
  for (std::size_t k = 0; k < d.cones.size(); ++k) {
    const Cone& cone = d.cones[k];
    ComplexMatrix m = cone_matrix(cone, r);
    const RealVector& l = w[k].lambda;
    for (Index i = 0; i < cone.dim; ++i)
      for (Index j = 0; j < cone.dim; ++j) m(i, j) *= 2.0 / (l(i) + l(j));
    set_cone(cone, out, m);
  }
  return out;
}

// Symmetrized product (a b + b a) / 2 per cone.
RealVector jordan(const DenseProgram& d, const RealVector& a, const RealVector& b) {
  RealVector out(a.size());
  for (const auto& cone : d.cones) {
    const ComplexMatrix ma = cone_matrix(cone, a);
    const ComplexMatrix mb = cone_matrix(cone, b);
    set_cone(cone, out, (ma * mb + mb * ma) / 2.0);
  }
  return out;
}

RealVector lambda_squared(const DenseProgram& d, const Scaling& w) {
  RealVector out = RealVector::Zero(d.m);
  for (std::size_t k = 0; k < d.cones.size(); ++k)
    for (Index i = 0; i < d.cones[k].dim; ++i)
      out(d.cones[k].offset + i) = w[k].lambda(i) * w[k].lambda(i);
  return out;
}

struct Presolved {
  std::vector<Index> kept_rows;
  std::vector<bool> isolated;  // free scalars with no constraint coefficient
  bool inconsistent = false;
  RealVector certificate;      // over original rows
  bool unbounded = false;
};

Presolved presolve(DenseProgram& d) {
  Presolved pr;
  const Index p = d.A.rows();
  const Index n = d.A.cols();
  for (Index j = 0; j < d.nf; ++j) {
    const bool iso = p == 0 || d.A.col(d.m + j).cwiseAbs().maxCoeff() == 0.0;
    pr.isolated.push_back(iso);
    if (iso && d.c(d.m + j) != 0.0) pr.unbounded = true;
  }
  if (p == 0) return pr;

  Eigen::ColPivHouseholderQR<RealMatrix> qr(d.A.transpose());
  qr.setThreshold(1e-11);
  const Index rank = qr.rank();

  Eigen::ColPivHouseholderQR<RealMatrix> ls(d.A);
  ls.setThreshold(1e-11);
  const RealVector x = ls.solve(d.b);
  const RealVector r = d.b - d.A * x;
  if (r.norm() > 1e-9 * std::max(1.0, d.b.norm())) {
    pr.inconsistent = true;
    pr.certificate = r / r.squaredNorm();
    return pr;
  }
  std::vector<Index> idx;
  for (Index k = 0; k < rank; ++k) idx.push_back(qr.colsPermutation().indices()(k));
  std::sort(idx.begin(), idx.end());
  pr.kept_rows = idx;
  if (rank < p) {
    RealMatrix a(rank, n);
    RealVector b(rank);
    for (Index k = 0; k < rank; ++k) {
      a.row(k) = d.A.row(idx[static_cast<std::size_t>(k)]);
      b(k) = d.b(idx[static_cast<std::size_t>(k)]);
    }
    d.A = a;
    d.b = b;
  }
  return pr;
}

struct Iterate {
  RealVector x, y, z, s;
  double tau = 1.0, kappa = 1.0;
};

}  // namespace

Solution InteriorPointSolver::solve(const ConicProgram& program) const {
  program.validate();
  DenseProgram d = lower(program);
  const Index p_orig = d.A.rows();
  Presolved pr = presolve(d);

  Solution sol;
  sol.dual = RealVector::Zero(p_orig);
  auto fill_blocks_zero = [&]() {
    sol.blocks.clear();
    sol.dual_slacks.clear();
    for (const auto& cone : d.cones) {
      sol.blocks.push_back(ComplexMatrix::Zero(cone.dim, cone.dim));
      sol.dual_slacks.push_back(ComplexMatrix::Zero(cone.dim, cone.dim));
    }
    sol.scalars.assign(static_cast<std::size_t>(d.nf), 0.0);
  };
  fill_blocks_zero();

  if (pr.inconsistent) {
    sol.status = SolveStatus::infeasible;
    sol.dual = pr.certificate;
    return sol;
  }
  if (pr.unbounded) {
    sol.status = SolveStatus::unbounded;
    return sol;
  }

  const Index n = d.m + d.nf;
  const Index p = d.A.rows();
  const double resx0 = std::max(1.0, d.c.norm());
  const double resy0 = std::max(1.0, d.b.norm());
  const double resz0 = 1.0;
  const double nu = static_cast<double>(d.degree);

  auto gx = [&](const RealVector& x) -> RealVector { return -x.head(d.m); };

  Iterate it;
  try {
    const Scaling w0 = Scaling::identity(d);
    const KktSolver kkt0(d, w0, pr.isolated);
    KktSolution a = kkt0.solve(RealVector::Zero(n), d.b, RealVector::Zero(d.m));
    it.x = a.x;
    it.s = a.x.head(d.m);
    KktSolution c = kkt0.solve(-d.c, RealVector::Zero(p), RealVector::Zero(d.m));
    it.y = c.y;
    it.z = c.z;
  } catch (const std::exception&) {
    sol.status = SolveStatus::numerical_failure;
    return sol;
  }
  {
    const double ts = max_neg_eig(d, it.s);
    if (ts >= -1e-8 * std::max(it.s.norm(), 1.0)) add_identity(d, it.s, 1.0 + ts);
    const double tz = max_neg_eig(d, it.z);
    if (tz >= -1e-8 * std::max(it.z.norm(), 1.0)) add_identity(d, it.z, 1.0 + tz);
  }

  const double ftol = options_.feasibility_tolerance;
  const double gtol = options_.gap_tolerance;

  SolveStatus status = SolveStatus::numerical_failure;
  Iterate best = it;
  double best_merit = std::numeric_limits<double>::infinity();
  int iter = 0;
  int stalls = 0;
  double pres = 0, dres = 0, ngap = 0;
  RealVector cert_y;

  for (;; ++iter) {
    // Residuals of the homogeneous embedding.
    const RealVector hrx = [&] {
      RealVector r = d.A.transpose() * it.y;
      r.head(d.m) -= it.z;
      return r;
    }();
    const RealVector hry = d.A * it.x;
    const RealVector hrz = it.s + gx(it.x);
    const RealVector rx = hrx + d.c * it.tau;
    const RealVector ry = d.b * it.tau - hry;
    const RealVector rz = -hrz;
    const double cx = d.c.dot(it.x);
    const double by = d.b.dot(it.y);
    const double rt = -cx - by - it.kappa;
    const double gap = it.s.dot(it.z);
    const double mu = (gap + it.tau * it.kappa) / (nu + 1.0);

    pres = std::max(ry.norm() / resy0, rz.norm() / resz0) / it.tau;
    dres = rx.norm() / resx0 / it.tau;
    ngap = gap / (it.tau * it.tau);
    const double pcost = cx / it.tau;
    const double dcost = -by / it.tau;
    double relgap = std::numeric_limits<double>::infinity();
    if (pcost < 0) relgap = ngap / -pcost;
    else if (dcost > 0) relgap = ngap / dcost;
    const double pinfres = by < 0 ? hrx.norm() / resx0 / -by : std::numeric_limits<double>::infinity();
    const double dinfres =
        cx < 0 ? std::max(hry.norm() / resy0, hrz.norm() / resz0) / -cx
               : std::numeric_limits<double>::infinity();

    const double merit = std::max({pres, dres, std::min(ngap, relgap)});
    if (merit < best_merit) {
      best_merit = merit;
      best = it;
    }

    if (pres <= ftol && dres <= ftol && (ngap <= gtol || relgap <= gtol)) {
      status = SolveStatus::optimal;
      break;
    }
    if (pinfres <= ftol) {
      status = SolveStatus::infeasible;
      cert_y = it.y / -by;
      break;
    }
    if (dinfres <= ftol) {
      status = SolveStatus::unbounded;
      break;
    }
    if (iter >= options_.max_iterations || stalls >= 4) break;

    bool failed = false;
    try {
      const Scaling w(d, it.s, it.z);
      const KktSolver kkt(d, w, pr.isolated);
      const KktSolution u2 = kkt.solve(-d.c, d.b, RealVector::Zero(d.m));
      const double g2 = d.c.dot(u2.x) + d.b.dot(u2.y);
      const RealVector lsq = lambda_squared(d, w);

      struct Step {
        KktSolution u;
        RealVector ds;
        double dtau, dkappa;
      };
      auto newton = [&](double eta, const RealVector& rc, double rk) -> Step {
        const RealVector q = lambda_divide(d, w, rc);  // in scaled space
        const RealVector wtq = w.apply_transpose(q);
        const double f = 1.0 - eta;
        KktSolution u1 = kkt.solve(-f * rx, f * ry, f * rz - wtq);
        const double g1 = d.c.dot(u1.x) + d.b.dot(u1.y);
        const double dtau =
            (-f * rt + g1 + rk / it.tau) / (it.kappa / it.tau - g2);
        Step st;
        st.u.x = u1.x + dtau * u2.x;
        st.u.y = u1.y + dtau * u2.y;
        st.u.z = u1.z + dtau * u2.z;
        st.dtau = dtau;
        st.dkappa = rk / it.tau - it.kappa / it.tau * dtau;
        st.ds = wtq - w.apply_gram(st.u.z);
        return st;
      };
      auto step_length = [&](const Step& st) {
        const RealVector dss = w.apply_inverse_transpose(st.ds);
        const RealVector dzs = w.apply(st.u.z);
        double a = std::min(max_step(d, w, dss), max_step(d, w, dzs));
        if (st.dtau < 0) a = std::min(a, -it.tau / st.dtau);
        if (st.dkappa < 0) a = std::min(a, -it.kappa / st.dkappa);
        return a;
      };

      // Predictor.
      const RealVector rc_aff = -lsq;
      const Step aff = newton(0.0, rc_aff, -it.tau * it.kappa);
      const double alpha_aff = std::min(1.0, step_length(aff));
      const double sigma = std::pow(1.0 - alpha_aff, 3);

      // Corrector.
      const RealVector dsa = w.apply_inverse_transpose(aff.ds);
      const RealVector dza = w.apply(aff.u.z);
      RealVector rc = -lsq - jordan(d, dsa, dza);
      add_identity(d, rc, sigma * mu);
      const double rk = -it.tau * it.kappa + sigma * mu - aff.dtau * aff.dkappa;
      const Step st = newton(sigma, rc, rk);
      const double amax = step_length(st);
      const double alpha = std::min(1.0, options_.step_fraction * amax);

      if (!all_finite(st.u.x) || !all_finite(st.u.y) || !all_finite(st.u.z) ||
          !std::isfinite(st.dtau) || !std::isfinite(alpha)) {
        failed = true;
      } else {
        Iterate nx = it;
        nx.x += alpha * st.u.x;
        nx.y += alpha * st.u.y;
        nx.z += alpha * st.u.z;
        nx.s += alpha * st.ds;
        nx.tau += alpha * st.dtau;
        nx.kappa += alpha * st.dkappa;
        stalls = alpha < 1e-8 ? stalls + 1 : 0;
        it = nx;
      }
    } catch (const std::exception&) {
      failed = true;
    }
    if (failed) break;
  }

  sol.iterations = iter;
  auto finish = [&](const Iterate& f) {
    sol.blocks.clear();
    sol.dual_slacks.clear();
    for (const auto& cone : d.cones) {
      sol.blocks.push_back(cone_matrix(cone, f.s) / f.tau);
      sol.dual_slacks.push_back(cone_matrix(cone, f.z) / f.tau);
    }
    sol.scalars.resize(static_cast<std::size_t>(d.nf));
    for (Index j = 0; j < d.nf; ++j) sol.scalars[static_cast<std::size_t>(j)] = f.x(d.m + j) / f.tau;
    sol.dual = RealVector::Zero(p_orig);
    const RealVector nuv = -f.y / f.tau;
    for (std::size_t k = 0; k < pr.kept_rows.size(); ++k)
      sol.dual(pr.kept_rows[k]) = nuv(static_cast<Index>(k));
    sol.objective = d.c.dot(f.x) / f.tau + program.objective_constant();
    sol.dual_objective = d.b.dot(nuv) + program.objective_constant();
    sol.gap = f.s.dot(f.z) / (f.tau * f.tau);
  };

  if (status == SolveStatus::infeasible) {
    sol.status = status;
    sol.dual = RealVector::Zero(p_orig);
    const RealVector nuv = -cert_y;  // b . nu = 1
    for (std::size_t k = 0; k < pr.kept_rows.size(); ++k)
      sol.dual(pr.kept_rows[k]) = nuv(static_cast<Index>(k));
    return sol;
  }
  if (status == SolveStatus::unbounded) {
    sol.status = status;
    return sol;
  }
  if (status == SolveStatus::optimal) {
    finish(it);
    sol.status = status;
  } else {
    // Accept a reduced-accuracy answer when the best iterate is close.
    finish(best);
    sol.status = best_merit <= 1e-7 ? SolveStatus::optimal : SolveStatus::numerical_failure;
  }
  sol.primal_residual = pres;
  sol.dual_residual = dres;
  return sol;
}

const ConicSolver& default_solver() {
  static const InteriorPointSolver solver;
  return solver;
}

Solution solve(const ConicProgram& program) { return default_solver().solve(program); }

// ---------------------------------------------------------------------------
// Verification

VerificationReport verify_solution(const ConicProgram& program, const Solution& s,
                                   double threshold) {
  VerificationReport rep;
  auto flag = [&](const std::string& msg) {
    rep.passed = false;
    rep.violations.push_back(msg);
  };
  const auto& blocks = program.blocks();
  if (s.blocks.size() != blocks.size() || s.scalars.size() != program.scalars().size()) {
    flag("solution shape does not match program");
    return rep;
  }
  auto eval = [&](const LinearFunctional& f) {
    double v = 0.0;
    for (const auto& t : f.block_terms()) v += (t.coeff * s.blocks[t.block]).trace().real();
    for (const auto& t : f.scalar_terms()) v += t.coeff * s.scalars[t.scalar];
    return v;
  };

  for (std::size_t i = 0; i < program.equalities().size(); ++i) {
    const auto& eq = program.equalities()[i];
    const double r = std::abs(eval(eq.lhs) - eq.rhs) / std::max(1.0, std::abs(eq.rhs));
    rep.max_equality_residual = std::max(rep.max_equality_residual, r);
  }
  if (rep.max_equality_residual > threshold)
    flag("equality residual " + std::to_string(rep.max_equality_residual));

  rep.min_primal_eigenvalue = std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const double e = min_eig(s.blocks[b]);
    rep.min_primal_eigenvalue = std::min(rep.min_primal_eigenvalue, e);
    if (e < -threshold) flag("block '" + blocks[b].label + "' has eigenvalue " + std::to_string(e));
  }

  // Dual slack recomputed from the multipliers: Z_b = C_b - sum_i nu_i A_ib.
  std::vector<ComplexMatrix> z;
  for (const auto& blk : blocks) z.push_back(ComplexMatrix::Zero(blk.dim, blk.dim));
  RealVector zf = RealVector::Zero(static_cast<Index>(program.scalars().size()));
  for (const auto& t : program.objective().block_terms()) z[t.block] += t.coeff;
  for (const auto& t : program.objective().scalar_terms()) zf(t.scalar) += t.coeff;
  double bnu = 0.0;
  const bool has_dual = s.dual.size() == static_cast<Index>(program.equalities().size());
  if (has_dual) {
    for (std::size_t i = 0; i < program.equalities().size(); ++i) {
      const auto& eq = program.equalities()[i];
      const double nu = s.dual(static_cast<Index>(i));
      bnu += nu * eq.rhs;
      for (const auto& t : eq.lhs.block_terms()) z[t.block] -= nu * t.coeff;
      for (const auto& t : eq.lhs.scalar_terms()) zf(t.scalar) -= nu * t.coeff;
    }
  } else {
    flag("dual multipliers missing");
  }
  rep.min_dual_eigenvalue = std::numeric_limits<double>::infinity();
  rep.complementarity = 0.0;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const double e = min_eig(z[b]);
    rep.min_dual_eigenvalue = std::min(rep.min_dual_eigenvalue, e);
    rep.complementarity += (s.blocks[b] * z[b]).trace().real();
  }
  if (rep.min_dual_eigenvalue < -threshold)
    flag("dual slack eigenvalue " + std::to_string(rep.min_dual_eigenvalue));
  rep.max_dual_scalar_residual = zf.size() ? zf.cwiseAbs().maxCoeff() : 0.0;
  if (rep.max_dual_scalar_residual > threshold)
    flag("dual scalar residual " + std::to_string(rep.max_dual_scalar_residual));

  const double primal = eval(program.objective()) + program.objective_constant();
  const double dual = bnu + program.objective_constant();
  rep.duality_gap = primal - dual;
  if (std::abs(rep.duality_gap) > threshold * std::max(1.0, std::abs(primal)))
    flag("duality gap " + std::to_string(rep.duality_gap));
  return rep;
}

}  // namespace qchan::conic
