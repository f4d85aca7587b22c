// Dense bivariate polynomials with exact differentiation, used to machine-
// derive the space-time polynomial benchmark data.

#ifndef HDGFSI_POLY2_HPP
#define HDGFSI_POLY2_HPP

#include "hdgfsi/core.hpp"

#include <vector>

namespace hdgfsi {

/// p(x, y) = sum_{a,b} c(a, b) x^a y^b with a dense coefficient table.
class Poly2 {
public:
  Poly2() : coeff_(1, 1) { coeff_.setZero(); }
  explicit Poly2(double c) : coeff_(1, 1) { coeff_(0, 0) = c; }

  static Poly2 x() {
    Poly2 p;
    p.coeff_.resize(2, 1);
    p.coeff_.setZero();
    p.coeff_(1, 0) = 1.0;
    return p;
  }
  static Poly2 y() {
    Poly2 p;
    p.coeff_.resize(1, 2);
    p.coeff_.setZero();
    p.coeff_(0, 1) = 1.0;
    return p;
  }
  /// (a x + b y + c)^n
  static Poly2 affine_power(double a, double b, double c, int n) {
    Poly2 base = x() * a + y() * b + Poly2(c);
    Poly2 result(1.0);
    for (int i = 0; i < n; ++i) result = result * base;
    return result;
  }

  double operator()(double px, double py) const {
    double result = 0.0;
    for (Eigen::Index a = coeff_.rows() - 1; a >= 0; --a) {
      double row = 0.0;
      for (Eigen::Index b = coeff_.cols() - 1; b >= 0; --b) row = row * py + coeff_(a, b);
      result = result * px + row;
    }
    return result;
  }
  double operator()(const Vec2& p) const { return (*this)(p.x(), p.y()); }

  Poly2 operator+(const Poly2& o) const {
    Poly2 r;
    r.coeff_.resize(std::max(coeff_.rows(), o.coeff_.rows()), std::max(coeff_.cols(), o.coeff_.cols()));
    r.coeff_.setZero();
    r.coeff_.topLeftCorner(coeff_.rows(), coeff_.cols()) += coeff_;
    r.coeff_.topLeftCorner(o.coeff_.rows(), o.coeff_.cols()) += o.coeff_;
    return r;
  }
  Poly2 operator-(const Poly2& o) const { return *this + o * (-1.0); }
  Poly2 operator*(double s) const {
    Poly2 r = *this;
    r.coeff_ *= s;
    return r;
  }
  Poly2 operator*(const Poly2& o) const {
    Poly2 r;
    r.coeff_.resize(coeff_.rows() + o.coeff_.rows() - 1, coeff_.cols() + o.coeff_.cols() - 1);
    r.coeff_.setZero();
    for (Eigen::Index a = 0; a < coeff_.rows(); ++a)
      for (Eigen::Index b = 0; b < coeff_.cols(); ++b) {
        if (coeff_(a, b) == 0.0) continue;
        for (Eigen::Index c = 0; c < o.coeff_.rows(); ++c)
          for (Eigen::Index d = 0; d < o.coeff_.cols(); ++d)
            r.coeff_(a + c, b + d) += coeff_(a, b) * o.coeff_(c, d);
      }
    return r;
  }

  Poly2 dx() const {
    Poly2 r;
    if (coeff_.rows() <= 1) return r;
    r.coeff_.resize(coeff_.rows() - 1, coeff_.cols());
    for (Eigen::Index a = 1; a < coeff_.rows(); ++a)
      for (Eigen::Index b = 0; b < coeff_.cols(); ++b)
        r.coeff_(a - 1, b) = static_cast<double>(a) * coeff_(a, b);
    return r;
  }
  Poly2 dy() const {
    Poly2 r;
    if (coeff_.cols() <= 1) return r;
    r.coeff_.resize(coeff_.rows(), coeff_.cols() - 1);
    for (Eigen::Index a = 0; a < coeff_.rows(); ++a)
      for (Eigen::Index b = 1; b < coeff_.cols(); ++b)
        r.coeff_(a, b - 1) = static_cast<double>(b) * coeff_(a, b);
    return r;
  }

private:
  Eigen::MatrixXd coeff_; // coeff_(a, b) multiplies x^a y^b
};

/// Symmetric-tensor- and vector-valued polynomial helpers.
struct PolyVec2 {
  Poly2 x, y;
  Vec2 operator()(const Vec2& p) const { return {x(p), y(p)}; }
};

struct PolySym2 {
  Poly2 s11, s22, s12;
  PolySym2 operator+(const PolySym2& o) const { return {s11 + o.s11, s22 + o.s22, s12 + o.s12}; }
  PolySym2 operator*(double a) const { return {s11 * a, s22 * a, s12 * a}; }
};

/// Linearized strain of a polynomial vector field.
inline PolySym2 poly_strain(const PolyVec2& v) {
  return {v.x.dx(), v.y.dy(), (v.x.dy() + v.y.dx()) * 0.5};
}

/// Row-wise divergence of a symmetric polynomial tensor field.
inline PolyVec2 poly_divergence(const PolySym2& s) {
  return {s.s11.dx() + s.s12.dy(), s.s12.dx() + s.s22.dy()};
}

/// Hooke-type action 2 mu s + lambda tr(s) I with polynomial entries.
inline PolySym2 poly_stiffness(double mu, double lambda, const PolySym2& s) {
  const Poly2 tr = s.s11 + s.s22;
  return {s.s11 * (2.0 * mu) + tr * lambda, s.s22 * (2.0 * mu) + tr * lambda, s.s12 * (2.0 * mu)};
}

} // namespace hdgfsi

#endif
