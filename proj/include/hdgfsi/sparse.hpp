// Compressed-row sparse storage and the linear solves used for the condensed
// trace system. Factorizations are delegated to Eigen (SparseLU with COLAMD
// ordering; BiCGSTAB with incomplete-LU preconditioning for the iterative
// fallback) behind this module's interface.

#ifndef HDGFSI_SPARSE_HPP
#define HDGFSI_SPARSE_HPP

#include "hdgfsi/core.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <memory>
#include <vector>

namespace hdgfsi {

struct Triplet {
  int row = 0;
  int col = 0;
  double value = 0.0;
};

/// Square CSR matrix. Column indices are strictly increasing within each row
/// and explicit zeros are dropped on finalize.
class CsrMatrix {
public:
  CsrMatrix() = default;

  CsrMatrix(int n, std::vector<Triplet> triplets) : n_(n) {
    // stable sort: duplicate entries accumulate in insertion order, keeping
    // assembly bitwise deterministic
    std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
      return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    row_offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
    for (std::size_t i = 0; i < triplets.size();) {
      const int r = triplets[i].row;
      const int c = triplets[i].col;
      if (r < 0 || r >= n || c < 0 || c >= n) throw Error("CsrMatrix: triplet index out of range");
      double v = 0.0;
      while (i < triplets.size() && triplets[i].row == r && triplets[i].col == c) v += triplets[i++].value;
      if (v != 0.0) {
        cols_.push_back(c);
        values_.push_back(v);
        ++row_offsets_[static_cast<std::size_t>(r) + 1];
      }
    }
    for (int r = 0; r < n; ++r)
      row_offsets_[static_cast<std::size_t>(r) + 1] += row_offsets_[static_cast<std::size_t>(r)];
  }

  int rows() const { return n_; }
  std::size_t nonzeros() const { return values_.size(); }
  const std::vector<int>& row_offsets() const { return row_offsets_; }
  const std::vector<int>& col_indices() const { return cols_; }
  const std::vector<double>& values() const { return values_; }

  Eigen::VectorXd multiply(const Eigen::VectorXd& x) const {
    Eigen::VectorXd y = Eigen::VectorXd::Zero(n_);
    for (int r = 0; r < n_; ++r)
      for (int k = row_offsets_[static_cast<std::size_t>(r)]; k < row_offsets_[static_cast<std::size_t>(r) + 1]; ++k)
        y[r] += values_[static_cast<std::size_t>(k)] * x[cols_[static_cast<std::size_t>(k)]];
    return y;
  }

  Eigen::SparseMatrix<double> to_eigen() const {
    Eigen::SparseMatrix<double> m(n_, n_);
    std::vector<Eigen::Triplet<double>> ts;
    ts.reserve(values_.size());
    for (int r = 0; r < n_; ++r)
      for (int k = row_offsets_[static_cast<std::size_t>(r)]; k < row_offsets_[static_cast<std::size_t>(r) + 1]; ++k)
        ts.emplace_back(r, cols_[static_cast<std::size_t>(k)], values_[static_cast<std::size_t>(k)]);
    m.setFromTriplets(ts.begin(), ts.end());
    m.makeCompressed();
    return m;
  }

private:
  int n_ = 0;
  std::vector<int> row_offsets_ = {0};
  std::vector<int> cols_;
  std::vector<double> values_;
};

/// Reusable sparse LU factorization. Factors once; concurrent solves against
/// one factorization are safe.
class DirectSolver {
public:
  explicit DirectSolver(const CsrMatrix& a) : n_(a.rows()) {
    if (n_ == 0) return;
    // Structurally singular rows/columns are diagnosed here; Eigen reports
    // numerical failures without a location.
    std::vector<bool> row_seen(static_cast<std::size_t>(n_), false), col_seen(static_cast<std::size_t>(n_), false);
    for (int r = 0; r < n_; ++r)
      for (int k = a.row_offsets()[static_cast<std::size_t>(r)]; k < a.row_offsets()[static_cast<std::size_t>(r) + 1]; ++k) {
        row_seen[static_cast<std::size_t>(r)] = true;
        col_seen[static_cast<std::size_t>(a.col_indices()[static_cast<std::size_t>(k)])] = true;
      }
    for (int r = 0; r < n_; ++r) {
      if (!row_seen[static_cast<std::size_t>(r)])
        throw Error("solve_direct: singular pivot, row " + std::to_string(r) + " is empty");
      if (!col_seen[static_cast<std::size_t>(r)])
        throw Error("solve_direct: singular pivot, column " + std::to_string(r) + " is empty");
    }
    matrix_ = a.to_eigen();
    lu_ = std::make_unique<Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>>>();
    lu_->compute(matrix_);
    if (lu_->info() != Eigen::Success)
      throw Error("solve_direct: factorization failed (singular pivot): " + lu_->lastErrorMessage());
  }

  Eigen::VectorXd solve(const Eigen::VectorXd& b) const {
    if (n_ == 0) return Eigen::VectorXd();
    if (b.norm() == 0.0) return Eigen::VectorXd::Zero(n_);
    Eigen::VectorXd x = lu_->solve(b);
    if (lu_->info() != Eigen::Success) throw Error("solve_direct: triangular solve failed");
    return x;
  }

private:
  int n_ = 0;
  Eigen::SparseMatrix<double> matrix_;
  std::unique_ptr<Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>>> lu_;
};

inline Eigen::VectorXd solve_direct(const CsrMatrix& a, const Eigen::VectorXd& b) {
  return DirectSolver(a).solve(b);
}

/// Preconditioned BiCGSTAB for nonsymmetric systems. Throws (carrying the
/// achieved residual) if the tolerance is not met within max_iter iterations.
inline Eigen::VectorXd solve_iterative(const CsrMatrix& a, const Eigen::VectorXd& b, double tol,
                                       int max_iter) {
  if (!(tol > 0.0)) throw Error("solve_iterative: tol must be positive");
  if (a.rows() == 0) return Eigen::VectorXd();
  if (b.norm() == 0.0) return Eigen::VectorXd::Zero(a.rows());
  Eigen::SparseMatrix<double> m = a.to_eigen();
  Eigen::BiCGSTAB<Eigen::SparseMatrix<double>, Eigen::IncompleteLUT<double>> solver;
  solver.setTolerance(tol);
  solver.setMaxIterations(max_iter);
  solver.compute(m);
  if (solver.info() != Eigen::Success) throw Error("solve_iterative: preconditioner setup failed");
  Eigen::VectorXd x = solver.solve(b);
  const double achieved = (a.multiply(x) - b).norm() / b.norm();
  if (achieved > tol)
    throw Error("solve_iterative: stagnated at relative residual " + std::to_string(achieved) +
                " after " + std::to_string(solver.iterations()) + " iterations");
  return x;
}

} // namespace hdgfsi

#endif
