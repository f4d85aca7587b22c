// Element-local assembly of the HDG bilinear forms and their combination
// into the one-step Crank-Nicolson operator.
//
// Local unknown ordering per element: [s11 | s22 | s12 | u_x | u_y] interior
// coefficients followed by the trace blocks of the element's three facets
// (each [comp0 | comp1] in the facet frame).

#ifndef HDGFSI_ASSEMBLY_HPP
#define HDGFSI_ASSEMBLY_HPP

#include "hdgfsi/materials.hpp"
#include "hdgfsi/space.hpp"

#include <array>

namespace hdgfsi {

/// Raw bilinear-form blocks of one element (no time-step scaling).
struct LocalBlocks {
  double det_jac = 0.0;
  Phase phase = Phase::fluid;
  Eigen::Matrix3d compliance;       // P with (A sigma):tau = s^T P t in components
  Eigen::MatrixXd strain;           // B[(c,i),(a,j)] = (phi_i E_c, eps(psi_j e_a))_K
  Eigen::MatrixXd normal_coupling;  // C_u[(c,i),(a,j)] = <(phi_i E_c) n, psi_j e_a>_dK
  std::array<Eigen::MatrixXd, 3> trace_coupling;   // C_hat per facet, (3ns x 2ne)
  Eigen::MatrixXd stab_uu;                          // <kappa u, v>_dK
  std::array<Eigen::MatrixXd, 3> stab_utrace;      // <kappa u, vhat>_F per facet
  std::array<double, 3> stab_tracetrace = {};      // <kappa uhat, vhat>_F = value * I
};

/// Components of (E_c n) for component basis E_0 = e1 x e1, E_1 = e2 x e2,
/// E_2 = sym(e1 x e2).
inline Vec2 component_normal(int c, const Vec2& n) {
  switch (c) {
  case 0: return {n.x(), 0.0};
  case 1: return {0.0, n.y()};
  default: return {n.y(), n.x()};
  }
}

/// Builds all bilinear-form blocks of element e.
inline LocalBlocks assemble_local(const Discretization& disc, const DofMap& dofmap,
                                  const MaterialSet& materials, int e) {
  const auto& g = disc.geometry(e);
  const int ns = disc.n_sigma();
  const int nu = disc.n_velocity();
  const int ne = disc.n_trace();
  const int k = disc.degree();

  LocalBlocks blocks;
  blocks.det_jac = g.det_jac;
  blocks.phase = disc.phase(e);
  blocks.compliance = compliance_form_matrix(materials, blocks.phase);

  // Volume term (phi_i E_c, eps(psi_j e_a))_K via physical gradients.
  const auto& vol = disc.volume_rule();
  const auto& sv = disc.sigma_volume_values();
  const auto& gxi = disc.velocity_grad_xi();
  const auto& geta = disc.velocity_grad_eta();
  Eigen::MatrixXd gx(nu, static_cast<Eigen::Index>(vol.size()));
  Eigen::MatrixXd gy(nu, static_cast<Eigen::Index>(vol.size()));
  for (Eigen::Index q = 0; q < static_cast<Eigen::Index>(vol.size()); ++q) {
    gx.col(q) = g.inv_jac_t(0, 0) * gxi.col(q) + g.inv_jac_t(0, 1) * geta.col(q);
    gy.col(q) = g.inv_jac_t(1, 0) * gxi.col(q) + g.inv_jac_t(1, 1) * geta.col(q);
  }
  Eigen::VectorXd w(static_cast<Eigen::Index>(vol.size()));
  for (std::size_t q = 0; q < vol.size(); ++q) w[static_cast<Eigen::Index>(q)] = g.det_jac * vol.weights[q];
  blocks.strain = Eigen::MatrixXd::Zero(3 * ns, 2 * nu);
  const Eigen::MatrixXd svw = sv * w.asDiagonal();
  blocks.strain.block(0, 0, ns, nu) = svw * gx.transpose();            // s11 : dx(u_x)
  blocks.strain.block(ns, nu, ns, nu) = svw * gy.transpose();          // s22 : dy(u_y)
  blocks.strain.block(2 * ns, 0, ns, nu) = svw * gy.transpose();       // s12 : dy(u_x)
  blocks.strain.block(2 * ns, nu, ns, nu) = svw * gx.transpose();      // s12 : dx(u_y)

  // Facet terms.
  const auto& er = disc.edge_rule();
  const Eigen::Index nqe = static_cast<Eigen::Index>(er.size());
  const auto& chi = disc.trace_edge_values();
  blocks.normal_coupling = Eigen::MatrixXd::Zero(3 * ns, 2 * nu);
  blocks.stab_uu = Eigen::MatrixXd::Zero(2 * nu, 2 * nu);
  for (int le = 0; le < 3; ++le) {
    const int f = g.facet[static_cast<std::size_t>(le)];
    const bool fw = g.forward[static_cast<std::size_t>(le)];
    const double len = g.edge_len[static_cast<std::size_t>(le)];
    const Vec2 n = g.normal[static_cast<std::size_t>(le)];
    const double kappa = stabilization_weight(k, len);
    const Mat2& frame = dofmap.frame(f);
    const auto& sev = disc.sigma_edge_values(le, fw);
    const auto& uev = disc.velocity_edge_values(le, fw);
    Eigen::VectorXd we(nqe);
    for (Eigen::Index q = 0; q < nqe; ++q) we[q] = len * er.weights[static_cast<std::size_t>(q)];

    const Eigen::MatrixXd sig_u = (sev * we.asDiagonal()) * uev.transpose(); // int phi psi
    const Eigen::MatrixXd u_u = (uev * we.asDiagonal()) * uev.transpose();
    const Eigen::MatrixXd sig_tr = (sev * we.asDiagonal()) * chi.transpose();
    const Eigen::MatrixXd u_tr = (uev * we.asDiagonal()) * chi.transpose();

    for (int c = 0; c < 3; ++c) {
      const Vec2 cn = component_normal(c, n);
      for (int a = 0; a < 2; ++a)
        if (cn[a] != 0.0) blocks.normal_coupling.block(c * ns, a * nu, ns, nu) += cn[a] * sig_u;
    }
    auto& chat = blocks.trace_coupling[static_cast<std::size_t>(le)];
    chat = Eigen::MatrixXd::Zero(3 * ns, 2 * ne);
    for (int c = 0; c < 3; ++c) {
      const Vec2 cn = component_normal(c, n);
      for (int d = 0; d < 2; ++d) {
        const double coeff = cn.dot(frame.col(d));
        if (coeff != 0.0) chat.block(c * ns, d * ne, ns, ne) += coeff * sig_tr;
      }
    }
    for (int a = 0; a < 2; ++a) blocks.stab_uu.block(a * nu, a * nu, nu, nu) += kappa * u_u;
    auto& sut = blocks.stab_utrace[static_cast<std::size_t>(le)];
    sut = Eigen::MatrixXd::Zero(2 * nu, 2 * ne);
    for (int a = 0; a < 2; ++a)
      for (int d = 0; d < 2; ++d) {
        const double coeff = frame.col(d)[a];
        if (coeff != 0.0) sut.block(a * nu, d * ne, nu, ne) += (kappa * coeff) * u_tr;
      }
    blocks.stab_tracetrace[static_cast<std::size_t>(le)] = kappa * len;
  }
  return blocks;
}

/// Time-derivative (mass) part of the CN operator; applied blockwise.
struct CnMassPart {
  Eigen::Matrix3d sigma_mass = Eigen::Matrix3d::Zero(); // (1/dt) detJ P_s on solid elements
  double u_mass = 0.0;                                  // rho detJ / dt
};

/// One-step CN operator of one element: LHS = D + H, RHS multiplier = D - H.
struct CnLocalOperator {
  Eigen::MatrixXd h;    // algebraic half, (ni + 3*2ne)^2
  CnMassPart mass;
  Phase phase = Phase::fluid;
  double det_jac = 0.0;

  Eigen::Index size() const { return h.rows(); }

  /// y = D x on the local layout (trace part of D is zero).
  void apply_mass(const Eigen::VectorXd& x, Eigen::VectorXd& y, int ns, int nu) const {
    y.setZero(h.rows());
    if (phase == Phase::solid) {
      for (int i = 0; i < ns; ++i) {
        const Eigen::Vector3d s(x[i], x[ns + i], x[2 * ns + i]);
        const Eigen::Vector3d r = mass.sigma_mass * s;
        y[i] = r[0];
        y[ns + i] = r[1];
        y[2 * ns + i] = r[2];
      }
    }
    y.segment(3 * ns, 2 * nu) = mass.u_mass * x.segment(3 * ns, 2 * nu);
  }
};

/// Assembles the CN operator of element e for time step dt: the bilinear form
/// (1/dt)(rho u, v) + (1/dt)(A_s sigma, tau)_s + (1/2)(A_f sigma, tau)_f
/// + (1/2) B_h(sigma, v) - (1/2) B_h(tau, u) + (1/2)<kappa [u],[v]>, plus the
/// spring coupling (beta_s dt/4)(u, v) on solid elements when beta_s > 0.
inline CnLocalOperator cn_local_operator(const Discretization& disc, const LocalBlocks& blocks,
                                         const MaterialSet& materials, double dt) {
  if (!(dt > 0.0)) throw Error("cn_local_operator: dt must be positive");
  const int ns = disc.n_sigma();
  const int nu = disc.n_velocity();
  const int ne = disc.n_trace();
  const int ni = 3 * ns + 2 * nu;
  const int n = ni + 3 * 2 * ne;

  CnLocalOperator op;
  op.phase = blocks.phase;
  op.det_jac = blocks.det_jac;
  op.h = Eigen::MatrixXd::Zero(n, n);

  // sigma-sigma: fluid compliance sits in the algebraic half.
  if (blocks.phase == Phase::fluid) {
    for (int c = 0; c < 3; ++c)
      for (int cc = 0; cc < 3; ++cc)
        if (blocks.compliance(c, cc) != 0.0)
          op.h.block(c * ns, cc * ns, ns, ns).diagonal().array() +=
              0.5 * blocks.det_jac * blocks.compliance(c, cc);
  } else {
    op.mass.sigma_mass = (blocks.det_jac / dt) * blocks.compliance;
  }
  op.mass.u_mass = materials.rho(blocks.phase) * blocks.det_jac / dt;

  const Eigen::MatrixXd sig_u = -0.5 * blocks.strain + 0.5 * blocks.normal_coupling;
  op.h.block(0, 3 * ns, 3 * ns, 2 * nu) = sig_u;
  op.h.block(3 * ns, 0, 2 * nu, 3 * ns) = -sig_u.transpose();
  op.h.block(3 * ns, 3 * ns, 2 * nu, 2 * nu) = 0.5 * blocks.stab_uu;
  if (blocks.phase == Phase::solid && materials.beta_s > 0.0)
    op.h.block(3 * ns, 3 * ns, 2 * nu, 2 * nu).diagonal().array() +=
        0.25 * materials.beta_s * dt * blocks.det_jac;

  for (int le = 0; le < 3; ++le) {
    const int off = ni + le * 2 * ne;
    const auto& chat = blocks.trace_coupling[static_cast<std::size_t>(le)];
    const auto& sut = blocks.stab_utrace[static_cast<std::size_t>(le)];
    op.h.block(0, off, 3 * ns, 2 * ne) = -0.5 * chat;
    op.h.block(off, 0, 2 * ne, 3 * ns) = 0.5 * chat.transpose();
    op.h.block(3 * ns, off, 2 * nu, 2 * ne) = -0.5 * sut;
    op.h.block(off, 3 * ns, 2 * ne, 2 * nu) = -0.5 * sut.transpose();
    op.h.block(off, off, 2 * ne, 2 * ne).diagonal().array() +=
        0.5 * blocks.stab_tracetrace[static_cast<std::size_t>(le)];
  }
  return op;
}

} // namespace hdgfsi

#endif
