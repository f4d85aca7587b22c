// Elementwise and facetwise L2-orthogonal projections (the operators used for
// initial data and error measurement).

#ifndef HDGFSI_PROJECTION_HPP
#define HDGFSI_PROJECTION_HPP

#include "hdgfsi/basis.hpp"
#include "hdgfsi/mesh.hpp"
#include "hdgfsi/space.hpp"

#include <functional>

namespace hdgfsi {

/// L2(K)-orthogonal projection of a scalar field onto P_m(K). The basis is
/// orthonormal on the reference element and the map is affine, so the
/// coefficients are plain weighted sums (the Jacobian factor cancels).
inline Eigen::VectorXd project_element(const std::function<double(const Vec2&)>& f, const Mesh& mesh,
                                       int e, const TriangleBasis& basis, const QuadratureRule& rule) {
  const auto& tri = mesh.triangles[static_cast<std::size_t>(e)];
  const Vec2 v0 = mesh.vertices[static_cast<std::size_t>(tri.v[0])];
  const Vec2 v1 = mesh.vertices[static_cast<std::size_t>(tri.v[1])];
  const Vec2 v2 = mesh.vertices[static_cast<std::size_t>(tri.v[2])];
  Eigen::VectorXd coeff = Eigen::VectorXd::Zero(basis.size());
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const Vec2 ref = rule.points[q];
    const Vec2 x = v0 + ref.x() * (v1 - v0) + ref.y() * (v2 - v0);
    coeff += (rule.weights[q] * f(x)) * basis.values(ref);
  }
  return coeff;
}

/// L2(F)-orthogonal projection of a scalar field onto P_m(F).
inline Eigen::VectorXd project_facet(const std::function<double(const Vec2&)>& g, const Mesh& mesh,
                                     int f, const EdgeBasis& basis, const QuadratureRule& rule) {
  const auto& ft = mesh.facets[static_cast<std::size_t>(f)];
  const Vec2 a = mesh.vertices[static_cast<std::size_t>(ft.v[0])];
  const Vec2 b = mesh.vertices[static_cast<std::size_t>(ft.v[1])];
  Eigen::VectorXd coeff = Eigen::VectorXd::Zero(basis.size());
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const double s = rule.points[q].x();
    coeff += (rule.weights[q] * g((1.0 - s) * a + s * b)) * basis.values(s);
  }
  return coeff;
}

/// Projects initial data onto the discrete state: u = Pi_T^{k+1} u0 per
/// element, uhat = Pi_F^{k+1} (trace of u0) on free trace components (and the
/// boundary data on constrained ones), solid stress = Pi_T^k sigma0_s.
inline void project_state(const std::function<Vec2(const Vec2&)>& u0,
                          const std::function<SymTensor2(const Vec2&)>& sigma0_s,
                          const Discretization& disc, const DofMap& dofmap, StateVector& state) {
  const Mesh& mesh = disc.mesh();
  const int nu = disc.n_velocity();
  const int ns = disc.n_sigma();
  const int ne = disc.n_trace();
  if (u0) {
    for (int e = 0; e < disc.n_elements(); ++e) {
      const auto cx = project_element([&](const Vec2& x) { return u0(x).x(); }, mesh, e,
                                      disc.velocity_basis(), disc.volume_rule());
      const auto cy = project_element([&](const Vec2& x) { return u0(x).y(); }, mesh, e,
                                      disc.velocity_basis(), disc.volume_rule());
      state.u.segment(static_cast<Eigen::Index>(e) * 2 * nu, nu) = cx;
      state.u.segment(static_cast<Eigen::Index>(e) * 2 * nu + nu, nu) = cy;
    }
    for (int f = 0; f < disc.n_facets(); ++f) {
      for (int comp = 0; comp < 2; ++comp) {
        if (dofmap.component_constrained(f, comp)) continue;
        const Vec2 dir = dofmap.frame(f).col(comp);
        const auto c = project_facet([&](const Vec2& x) { return u0(x).dot(dir); }, mesh, f,
                                     disc.trace_basis(), disc.edge_rule());
        for (int l = 0; l < ne; ++l) state.uhat[dofmap.full_trace_index(f, comp, l)] = c[l];
      }
    }
  }
  if (sigma0_s) {
    for (int e = 0; e < disc.n_elements(); ++e) {
      if (disc.phase(e) != Phase::solid) continue;
      const auto c11 = project_element([&](const Vec2& x) { return sigma0_s(x).s11; }, mesh, e,
                                       disc.sigma_basis(), disc.volume_rule());
      const auto c22 = project_element([&](const Vec2& x) { return sigma0_s(x).s22; }, mesh, e,
                                       disc.sigma_basis(), disc.volume_rule());
      const auto c12 = project_element([&](const Vec2& x) { return sigma0_s(x).s12; }, mesh, e,
                                       disc.sigma_basis(), disc.volume_rule());
      state.sigma.segment(static_cast<Eigen::Index>(e) * 3 * ns, ns) = c11;
      state.sigma.segment(static_cast<Eigen::Index>(e) * 3 * ns + ns, ns) = c22;
      state.sigma.segment(static_cast<Eigen::Index>(e) * 3 * ns + 2 * ns, ns) = c12;
    }
  }
}

} // namespace hdgfsi

#endif
