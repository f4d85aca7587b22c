// Material parameters, the constitutive tensor actions C_s, A_s, C_f, A_f,
// and the pressure postprocessing formula.

#ifndef HDGFSI_MATERIALS_HPP
#define HDGFSI_MATERIALS_HPP

#include "hdgfsi/core.hpp"

#include <cmath>

namespace hdgfsi {

/// Symmetric 2x2 tensor stored as (s11, s22, s12).
struct SymTensor2 {
  double s11 = 0.0;
  double s22 = 0.0;
  double s12 = 0.0;

  double trace() const { return s11 + s22; }
  SymTensor2 operator+(const SymTensor2& o) const { return {s11 + o.s11, s22 + o.s22, s12 + o.s12}; }
  SymTensor2 operator-(const SymTensor2& o) const { return {s11 - o.s11, s22 - o.s22, s12 - o.s12}; }
  SymTensor2 operator*(double a) const { return {a * s11, a * s22, a * s12}; }
  /// Componentwise double contraction sigma : tau.
  double contract(const SymTensor2& o) const { return s11 * o.s11 + s22 * o.s22 + 2.0 * s12 * o.s12; }
  Vec2 apply(const Vec2& n) const { return {s11 * n.x() + s12 * n.y(), s12 * n.x() + s22 * n.y()}; }
};

inline SymTensor2 identity_tensor() { return {1.0, 1.0, 0.0}; }

struct MaterialSet {
  double rho_s = 1.0;
  double mu_s = 1.0;
  double lambda_s = 1.0;
  double beta_s = 0.0; // spring coefficient, hemodynamics example only
  double rho_f = 1.0;
  double mu_f = 1.0;
  double lambda_f = 1.0e6; // incompressibility penalty
  static constexpr int dim = 2;

  void validate() const {
    if (!(rho_s > 0.0 && mu_s > 0.0 && lambda_s > 0.0 && rho_f > 0.0 && mu_f > 0.0 && lambda_f > 0.0))
      throw Error("MaterialSet: densities and moduli must be strictly positive");
    if (beta_s < 0.0) throw Error("MaterialSet: beta_s must be >= 0");
  }

  double rho(Phase p) const { return p == Phase::solid ? rho_s : rho_f; }
  double mu(Phase p) const { return p == Phase::solid ? mu_s : mu_f; }
  double lambda(Phase p) const { return p == Phase::solid ? lambda_s : lambda_f; }
};

/// C tau = 2 mu tau + lambda tr(tau) I for the phase's Lame pair.
inline SymTensor2 apply_C(const MaterialSet& m, Phase p, const SymTensor2& tau) {
  const double mu = m.mu(p);
  const double lambda = m.lambda(p);
  const double tr = tau.trace();
  return {2.0 * mu * tau.s11 + lambda * tr, 2.0 * mu * tau.s22 + lambda * tr, 2.0 * mu * tau.s12};
}

/// A = C^{-1}: A tau = (1/2mu)(tau - lambda/(d lambda + 2 mu) tr(tau) I).
inline SymTensor2 apply_A(const MaterialSet& m, Phase p, const SymTensor2& tau) {
  const double mu = m.mu(p);
  const double lambda = m.lambda(p);
  double c = lambda / (MaterialSet::dim * lambda + 2.0 * mu);
  if (p == Phase::fluid && testing::defects().perturb_fluid_compliance) c *= 1.0 + 1e-3;
  const double tr = tau.trace();
  const double inv2mu = 1.0 / (2.0 * mu);
  return {inv2mu * (tau.s11 - c * tr), inv2mu * (tau.s22 - c * tr), inv2mu * tau.s12};
}

inline SymTensor2 apply_Cs(const MaterialSet& m, const SymTensor2& tau) { return apply_C(m, Phase::solid, tau); }
inline SymTensor2 apply_As(const MaterialSet& m, const SymTensor2& tau) { return apply_A(m, Phase::solid, tau); }
inline SymTensor2 apply_Cf(const MaterialSet& m, const SymTensor2& tau) { return apply_C(m, Phase::fluid, tau); }
inline SymTensor2 apply_Af(const MaterialSet& m, const SymTensor2& tau) { return apply_A(m, Phase::fluid, tau); }

/// 3x3 matrix P with (A sigma) : tau = sigma_vec^T P tau_vec in (s11,s22,s12)
/// coefficients. Symmetric positive definite.
inline Eigen::Matrix3d compliance_form_matrix(const MaterialSet& m, Phase p) {
  const double mu = m.mu(p);
  const double lambda = m.lambda(p);
  double c = lambda / (MaterialSet::dim * lambda + 2.0 * mu);
  if (p == Phase::fluid && testing::defects().perturb_fluid_compliance) c *= 1.0 + 1e-3;
  const double inv2mu = 1.0 / (2.0 * mu);
  Eigen::Matrix3d P;
  P << inv2mu * (1.0 - c), -inv2mu * c, 0.0,
       -inv2mu * c, inv2mu * (1.0 - c), 0.0,
       0.0, 0.0, 2.0 * inv2mu;
  return P;
}

/// Postprocessed pressure p = -lambda_f/(2 mu_f + d lambda_f) tr(sigma);
/// meaningful on fluid elements only.
inline double postprocess_pressure(const MaterialSet& m, const SymTensor2& sigma) {
  return -m.lambda_f / (2.0 * m.mu_f + MaterialSet::dim * m.lambda_f) * sigma.trace();
}

} // namespace hdgfsi

#endif
