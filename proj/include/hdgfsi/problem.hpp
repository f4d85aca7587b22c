// Problem definition: geometry, materials, boundary conditions, sources,
// interface data, initial data and (for benchmarks) the exact solution.

#ifndef HDGFSI_PROBLEM_HPP
#define HDGFSI_PROBLEM_HPP

#include "hdgfsi/materials.hpp"
#include "hdgfsi/mesh.hpp"
#include "hdgfsi/space.hpp"

#include <functional>
#include <optional>
#include <string>

namespace hdgfsi {

/// Which fluid stress an exact solution reports: the physical Stokes stress
/// 2 mu_f eps(u) - p I, or the penalty stress C_f eps(u) the scheme solves
/// for. They differ by O(1/lambda_f) terms.
enum class StressReference { physical, penalty };

/// Manufactured fields with analytically derived companions. Velocity covers
/// both phases (solid side equals the time derivative of the displacement).
struct ExactSolution {
  std::function<Vec2(const Vec2&, double)> velocity;
  std::function<double(const Vec2&, double)> pressure;      // fluid only
  std::function<Vec2(const Vec2&, double)> displacement;    // solid only
  std::function<SymTensor2(const Vec2&, double, Phase)> stress_physical;
  std::function<SymTensor2(const Vec2&, double, Phase)> stress_penalty;

  SymTensor2 stress(const Vec2& x, double t, Phase p, StressReference ref) const {
    return ref == StressReference::physical ? stress_physical(x, t, p) : stress_penalty(x, t, p);
  }
};

struct Problem {
  std::string name;
  Mesh mesh;
  MaterialSet materials;
  BcTable bcs;
  /// Body force F(x, t, phase); empty means zero.
  std::function<Vec2(const Vec2&, double, Phase)> source;
  /// Interface jump g(x, t, n_f) = sigma_f n_f + sigma_s n_s on Sigma; empty
  /// means the dynamic condition holds exactly.
  std::function<Vec2(const Vec2&, double, const Vec2&)> interface_jump;
  std::function<Vec2(const Vec2&)> initial_velocity;             // empty = zero
  std::function<SymTensor2(const Vec2&)> initial_solid_stress;   // empty = zero
  std::function<SymTensor2(const Vec2&)> initial_fluid_stress;   // enables `projected` init
  std::function<Vec2(const Vec2&)> initial_displacement;         // empty = zero
  bool track_displacement = false;
  std::optional<ExactSolution> exact;
  /// Reference stress used when measuring errors for this problem.
  StressReference error_stress_reference = StressReference::physical;
};

} // namespace hdgfsi

#endif
