// Quadrature rules on the reference triangle {x,y >= 0, x+y <= 1} and the
// reference edge [0,1].

#ifndef HDGFSI_QUADRATURE_HPP
#define HDGFSI_QUADRATURE_HPP

#include "hdgfsi/core.hpp"

#include <cmath>
#include <vector>

namespace hdgfsi {

/// Nodes and weights in reference coordinates. Weights carry the reference
/// measure: they sum to 1/2 on the triangle and to 1 on the edge.
struct QuadratureRule {
  std::vector<Vec2> points;     // edge rules store (s, 0)
  std::vector<double> weights;
  int exactness = 0;

  std::size_t size() const { return points.size(); }
};

namespace detail {

// Gauss-Legendre nodes on [-1,1] by Newton iteration on P_n.
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(static_cast<std::size_t>(n), 0.0);
  w.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = t;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * t * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (t * p1 - p0) / (t * t - 1.0);
      const double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    x[static_cast<std::size_t>(i)] = t;
    w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - t * t) * dp * dp);
  }
}

inline constexpr int kMaxTriangleExactness = 60;

} // namespace detail

/// Gauss rule on [0,1], exact for polynomials up to the requested degree.
inline QuadratureRule quad_edge(int exactness_degree) {
  if (exactness_degree < 0) throw Error("quad_edge: negative exactness degree");
  const int n = exactness_degree / 2 + 1;
  std::vector<double> x, w;
  detail::gauss_legendre(n, x, w);
  QuadratureRule rule;
  rule.exactness = 2 * n - 1;
  rule.points.reserve(x.size());
  rule.weights.reserve(x.size());
  for (std::size_t q = 0; q < x.size(); ++q) {
    rule.points.emplace_back(0.5 * (x[q] + 1.0), 0.0);
    rule.weights.push_back(0.5 * w[q]);
  }
  return rule;
}

/// Rule on the reference triangle, exact to the requested total degree.
/// Low degrees come from a table of symmetric rules; higher degrees fall back
/// to a collapsed tensor-Gauss (Duffy) rule.
inline QuadratureRule quad_triangle(int exactness_degree) {
  if (exactness_degree < 0) throw Error("quad_triangle: negative exactness degree");
  QuadratureRule rule;
  rule.exactness = exactness_degree;
  switch (exactness_degree) {
  case 0:
  case 1:
    rule.points = {{1.0 / 3.0, 1.0 / 3.0}};
    rule.weights = {0.5};
    return rule;
  case 2:
    rule.points = {{1.0 / 6.0, 1.0 / 6.0}, {2.0 / 3.0, 1.0 / 6.0}, {1.0 / 6.0, 2.0 / 3.0}};
    rule.weights = {1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0};
    return rule;
  default:
    break;
  }
  if (exactness_degree > detail::kMaxTriangleExactness)
    throw Error("quad_triangle: exactness degree " + std::to_string(exactness_degree) +
                " above table and collapsed tensor-Gauss limit " +
                std::to_string(detail::kMaxTriangleExactness));

  // Duffy map (u,v) in [0,1]^2 -> (x,y) = (u, v(1-u)), Jacobian (1-u).
  // x^a y^b pulls back to degree a+b+1 in u and b in v.
  const int nu = (exactness_degree + 2) / 2 + 1;
  const int nv = (exactness_degree + 1) / 2 + 1;
  std::vector<double> xu, wu, xv, wv;
  detail::gauss_legendre(nu, xu, wu);
  detail::gauss_legendre(nv, xv, wv);
  for (int i = 0; i < nu; ++i) {
    const double u = 0.5 * (xu[static_cast<std::size_t>(i)] + 1.0);
    const double cu = 0.5 * wu[static_cast<std::size_t>(i)];
    for (int j = 0; j < nv; ++j) {
      const double v = 0.5 * (xv[static_cast<std::size_t>(j)] + 1.0);
      const double cv = 0.5 * wv[static_cast<std::size_t>(j)];
      rule.points.emplace_back(u, v * (1.0 - u));
      rule.weights.push_back(cu * cv * (1.0 - u));
    }
  }
  return rule;
}

} // namespace hdgfsi

#endif
