// L2-orthonormal polynomial bases on the reference triangle and the reference
// edge, built by Gram-Schmidt over a monomial seed at quadrature nodes.

#ifndef HDGFSI_BASIS_HPP
#define HDGFSI_BASIS_HPP

#include "hdgfsi/core.hpp"
#include "hdgfsi/quadrature.hpp"

#include <cmath>
#include <vector>

namespace hdgfsi {

/// Number of scalar polynomials of total degree <= m in two variables.
inline int triangle_space_dim(int m) { return (m + 1) * (m + 2) / 2; }

namespace detail {

// Two-pass modified Gram-Schmidt of the columns of V (values of the seed
// functions at quadrature nodes) under the inner product diag(w). Returns the
// change-of-basis C with orthonormal_j = sum_i C(i,j) seed_i.
inline Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& seed_values,
                                      const Eigen::VectorXd& weights) {
  const Eigen::Index n = seed_values.cols();
  Eigen::MatrixXd values = seed_values;
  Eigen::MatrixXd coeff = Eigen::MatrixXd::Identity(n, n);
  for (int pass = 0; pass < 2; ++pass) {
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index i = 0; i < j; ++i) {
        const double r = (weights.array() * values.col(i).array() * values.col(j).array()).sum();
        values.col(j) -= r * values.col(i);
        coeff.col(j) -= r * coeff.col(i);
      }
      const double norm = std::sqrt((weights.array() * values.col(j).array().square()).sum());
      if (!(norm > 0.0)) throw Error("orthonormalize: degenerate seed");
      values.col(j) /= norm;
      coeff.col(j) /= norm;
    }
  }
  return coeff;
}

} // namespace detail

/// Orthonormal basis of P_m on the reference triangle. Stores monomial
/// coefficients, so values and reference gradients are available anywhere.
class TriangleBasis {
public:
  explicit TriangleBasis(int degree) : degree_(degree), size_(triangle_space_dim(degree)) {
    for (int total = 0; total <= degree; ++total)
      for (int a = total; a >= 0; --a) powers_.push_back({a, total - a});
    const QuadratureRule rule = quad_triangle(2 * degree + 2);
    Eigen::MatrixXd seed(static_cast<Eigen::Index>(rule.size()), size_);
    Eigen::VectorXd w(static_cast<Eigen::Index>(rule.size()));
    for (std::size_t q = 0; q < rule.size(); ++q) {
      w[static_cast<Eigen::Index>(q)] = rule.weights[q];
      for (int j = 0; j < size_; ++j)
        seed(static_cast<Eigen::Index>(q), j) = monomial(j, rule.points[q]);
    }
    coeff_ = detail::orthonormalize(seed, w);
  }

  int degree() const { return degree_; }
  int size() const { return size_; }

  /// Values of all basis functions at a reference point.
  Eigen::VectorXd values(const Vec2& p) const {
    Eigen::VectorXd mono(size_);
    for (int i = 0; i < size_; ++i) mono[i] = monomial(i, p);
    return coeff_.transpose() * mono;
  }

  /// Reference gradients (d/dxi, d/deta) of all basis functions at a point.
  Eigen::Matrix<double, Eigen::Dynamic, 2> gradients(const Vec2& p) const {
    Eigen::MatrixXd dm(size_, 2);
    for (int i = 0; i < size_; ++i) {
      const auto [a, b] = powers_[static_cast<std::size_t>(i)];
      dm(i, 0) = a == 0 ? 0.0 : a * ipow(p.x(), a - 1) * ipow(p.y(), b);
      dm(i, 1) = b == 0 ? 0.0 : b * ipow(p.x(), a) * ipow(p.y(), b - 1);
    }
    return coeff_.transpose() * dm;
  }

  /// Value/gradient tables at the nodes of a rule: tables[q] has one row per
  /// basis function.
  Eigen::MatrixXd value_table(const QuadratureRule& rule) const {
    Eigen::MatrixXd table(size_, static_cast<Eigen::Index>(rule.size()));
    for (std::size_t q = 0; q < rule.size(); ++q)
      table.col(static_cast<Eigen::Index>(q)) = values(rule.points[q]);
    return table;
  }

private:
  static double ipow(double x, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= x;
    return r;
  }
  double monomial(int i, const Vec2& p) const {
    const auto [a, b] = powers_[static_cast<std::size_t>(i)];
    return ipow(p.x(), a) * ipow(p.y(), b);
  }

  int degree_;
  int size_;
  std::vector<std::pair<int, int>> powers_;
  Eigen::MatrixXd coeff_;
};

/// Orthonormal basis of P_m on the reference edge [0,1].
class EdgeBasis {
public:
  explicit EdgeBasis(int degree) : degree_(degree), size_(degree + 1) {
    const QuadratureRule rule = quad_edge(2 * degree + 2);
    Eigen::MatrixXd seed(static_cast<Eigen::Index>(rule.size()), size_);
    Eigen::VectorXd w(static_cast<Eigen::Index>(rule.size()));
    for (std::size_t q = 0; q < rule.size(); ++q) {
      w[static_cast<Eigen::Index>(q)] = rule.weights[q];
      double m = 1.0;
      for (int j = 0; j < size_; ++j) {
        seed(static_cast<Eigen::Index>(q), j) = m;
        m *= rule.points[q].x();
      }
    }
    coeff_ = detail::orthonormalize(seed, w);
  }

  int degree() const { return degree_; }
  int size() const { return size_; }

  Eigen::VectorXd values(double s) const {
    Eigen::VectorXd mono(size_);
    double m = 1.0;
    for (int i = 0; i < size_; ++i) {
      mono[i] = m;
      m *= s;
    }
    return coeff_.transpose() * mono;
  }

  Eigen::MatrixXd value_table(const QuadratureRule& rule) const {
    Eigen::MatrixXd table(size_, static_cast<Eigen::Index>(rule.size()));
    for (std::size_t q = 0; q < rule.size(); ++q)
      table.col(static_cast<Eigen::Index>(q)) = values(rule.points[q].x());
    return table;
  }

private:
  int degree_;
  int size_;
  Eigen::MatrixXd coeff_;
};

} // namespace hdgfsi

#endif
