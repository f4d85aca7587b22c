// Crank-Nicolson advancement of the fully discrete HDG system: consistent
// initialization, condensed stepping (with the monolithic solve retained as
// an oracle), displacement companion unknown and energy accounting.

#ifndef HDGFSI_TIME_INTEGRATOR_HPP
#define HDGFSI_TIME_INTEGRATOR_HPP

#include "hdgfsi/condensation.hpp"
#include "hdgfsi/problem.hpp"
#include "hdgfsi/projection.hpp"

#include <cmath>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace hdgfsi {

enum class InitMode { consistent, projected };

/// Per-step energy bookkeeping: E^n = kinetic + elastic (+ spring) energy,
/// D^n the CN step dissipation. With zero data E^{n+1} - E^n + D^n = 0.
struct EnergyReport {
  double energy = 0.0;
  double dissipation = 0.0;
};

class TimeIntegrator {
public:
  TimeIntegrator(const Discretization& disc, const DofMap& dofmap, const Problem& problem, double dt,
                 SolverOptions options = {})
      : disc_(disc), dofmap_(dofmap), problem_(problem), dt_(dt),
        system_(disc, dofmap, problem.materials, dt, options) {
    problem.materials.validate();
  }

  const CondensedSystem& system() const { return system_; }
  double dt() const { return dt_; }

  /// Initial state per (initial-fd): velocity and trace projections plus the
  /// projected solid stress; the fluid stress either solves the t=0 algebraic
  /// constraint (`consistent`) or projects the analytic C_f eps(u0)
  /// (`projected`, requires Problem::initial_fluid_stress).
  StateVector initialize(InitMode mode) const {
    StateVector state = StateVector::zero(disc_, problem_.track_displacement);
    project_state(problem_.initial_velocity, problem_.initial_solid_stress, disc_, dofmap_, state);
    dofmap_.fill_constrained_values(0.0, state.uhat);
    if (mode == InitMode::projected) {
      if (!problem_.initial_fluid_stress)
        throw Error("initialize: projected mode requires analytic initial fluid stress data");
      const int ns = disc_.n_sigma();
      for (int e = 0; e < disc_.n_elements(); ++e) {
        if (disc_.phase(e) != Phase::fluid) continue;
        for (int c = 0; c < 3; ++c) {
          const auto coeff = project_element(
              [&](const Vec2& x) {
                const SymTensor2 s = problem_.initial_fluid_stress(x);
                return c == 0 ? s.s11 : (c == 1 ? s.s22 : s.s12);
              },
              disc_.mesh(), e, disc_.sigma_basis(), disc_.volume_rule());
          state.sigma.segment(static_cast<Eigen::Index>(e) * 3 * ns + c * ns, ns) = coeff;
        }
      }
    } else {
      solve_fluid_constraint(state);
    }
    if (problem_.track_displacement && problem_.initial_displacement) {
      const int nu = disc_.n_velocity();
      for (int e = 0; e < disc_.n_elements(); ++e) {
        const auto cx = project_element([&](const Vec2& x) { return problem_.initial_displacement(x).x(); },
                                        disc_.mesh(), e, disc_.velocity_basis(), disc_.volume_rule());
        const auto cy = project_element([&](const Vec2& x) { return problem_.initial_displacement(x).y(); },
                                        disc_.mesh(), e, disc_.velocity_basis(), disc_.volume_rule());
        state.disp.segment(static_cast<Eigen::Index>(e) * 2 * nu, nu) = cx;
        state.disp.segment(static_cast<Eigen::Index>(e) * 2 * nu + nu, nu) = cy;
      }
    }
    return state;
  }

  /// One CN step through the condensed trace system.
  void step(StateVector& state) const { step_impl(state, false); }

  /// One CN step through the full uncondensed sparse system (testing oracle).
  void step_monolithic(StateVector& state) const { step_impl(state, true); }

  struct RunResult {
    StateVector state;
    std::vector<EnergyReport> energy_log; // entry n holds E^n and D^n of step n->n+1
  };

  using Observer = std::function<void(int n, const StateVector& state)>;

  /// Runs L uniform steps from the given state; observers see every state
  /// (including the initial one).
  RunResult run(StateVector state, int steps, const Observer& observer = {},
                bool with_energy_log = false) const {
    if (steps < 1) throw Error("run: step count must be >= 1");
    RunResult result;
    if (observer) observer(0, state);
    for (int n = 0; n < steps; ++n) {
      StateVector previous;
      if (with_energy_log) previous = state;
      step(state);
      if (with_energy_log) {
        EnergyReport report = energy(previous);
        report.dissipation = dissipation(previous, state);
        result.energy_log.push_back(report);
      }
      if (observer) observer(n + 1, state);
    }
    result.state = std::move(state);
    return result;
  }

  /// E = 1/2 ||rho^1/2 u||^2 + 1/2 ||A_s^1/2 sigma||^2_{Omega_s}
  ///     (+ 1/2 beta_s ||d||^2 when the displacement is tracked).
  EnergyReport energy(const StateVector& state) const {
    const int ns = disc_.n_sigma();
    const int nu = disc_.n_velocity();
    EnergyReport report;
    for (int e = 0; e < disc_.n_elements(); ++e) {
      const double dj = disc_.geometry(e).det_jac;
      const Phase p = disc_.phase(e);
      const auto ue = state.u.segment(static_cast<Eigen::Index>(e) * 2 * nu, 2 * nu);
      report.energy += 0.5 * problem_.materials.rho(p) * dj * ue.squaredNorm();
      if (p == Phase::solid) {
        const Eigen::Matrix3d P = compliance_form_matrix(problem_.materials, Phase::solid);
        const auto se = state.sigma.segment(static_cast<Eigen::Index>(e) * 3 * ns, 3 * ns);
        for (int i = 0; i < ns; ++i) {
          const Eigen::Vector3d s(se[i], se[ns + i], se[2 * ns + i]);
          report.energy += 0.5 * dj * s.dot(P * s);
        }
        if (state.has_disp && problem_.materials.beta_s > 0.0) {
          const auto de = state.disp.segment(static_cast<Eigen::Index>(e) * 2 * nu, 2 * nu);
          report.energy += 0.5 * problem_.materials.beta_s * dj * de.squaredNorm();
        }
      }
    }
    return report;
  }

  /// D^n = dt ( ||A_f^1/2 mean sigma||^2_{Omega_f}
  ///           + ||(k+1)/h_F^{1/2} [mean u]||^2_{dT_h} ).
  double dissipation(const StateVector& before, const StateVector& after) const {
    const int ns = disc_.n_sigma();
    const int nu = disc_.n_velocity();
    const int ne = disc_.n_trace();
    const auto& er = disc_.edge_rule();
    const auto& chi = disc_.trace_edge_values();
    const Eigen::Matrix3d Pf = compliance_form_matrix(problem_.materials, Phase::fluid);
    double fluid_part = 0.0;
    double jump_part = 0.0;
    for (int e = 0; e < disc_.n_elements(); ++e) {
      const auto& g = disc_.geometry(e);
      if (disc_.phase(e) == Phase::fluid) {
        const Eigen::VectorXd sm = 0.5 * (before.sigma.segment(static_cast<Eigen::Index>(e) * 3 * ns, 3 * ns) +
                                          after.sigma.segment(static_cast<Eigen::Index>(e) * 3 * ns, 3 * ns));
        for (int i = 0; i < ns; ++i) {
          const Eigen::Vector3d s(sm[i], sm[ns + i], sm[2 * ns + i]);
          fluid_part += g.det_jac * s.dot(Pf * s);
        }
      }
      const Eigen::VectorXd um = 0.5 * (before.u.segment(static_cast<Eigen::Index>(e) * 2 * nu, 2 * nu) +
                                        after.u.segment(static_cast<Eigen::Index>(e) * 2 * nu, 2 * nu));
      for (int le = 0; le < 3; ++le) {
        const int f = g.facet[static_cast<std::size_t>(le)];
        const double kappa = (disc_.degree() + 1.0) * (disc_.degree() + 1.0) /
                             g.edge_len[static_cast<std::size_t>(le)];
        const auto& uev = disc_.velocity_edge_values(le, g.forward[static_cast<std::size_t>(le)]);
        const Mat2& frame = dofmap_.frame(f);
        for (std::size_t q = 0; q < er.size(); ++q) {
          Vec2 jump = Vec2::Zero();
          for (int j = 0; j < nu; ++j) {
            jump.x() += um[j] * uev(j, static_cast<Eigen::Index>(q));
            jump.y() += um[nu + j] * uev(j, static_cast<Eigen::Index>(q));
          }
          for (int d = 0; d < 2; ++d) {
            double hat = 0.0;
            for (int l = 0; l < ne; ++l) {
              const int idx = dofmap_.full_trace_index(f, d, l);
              hat += 0.5 * (before.uhat[idx] + after.uhat[idx]) * chi(l, static_cast<Eigen::Index>(q));
            }
            jump -= hat * frame.col(d);
          }
          jump_part += kappa * g.edge_len[static_cast<std::size_t>(le)] * er.weights[q] * jump.squaredNorm();
        }
      }
    }
    return dt_ * (fluid_part + jump_part);
  }

  /// Relative residual of the uncondensed one-step equations for the pair
  /// (state_n, state_np1); rows of constrained trace dofs are excluded.
  double step_residual(const StateVector& before, const StateVector& after) const {
    const int ni = disc_.interior_dofs_per_element();
    const int ne = disc_.n_trace();
    const int n_free = dofmap_.n_free_trace_dofs();
    Eigen::VectorXd res_trace = Eigen::VectorXd::Zero(n_free);
    Eigen::VectorXd ref_trace = Eigen::VectorXd::Zero(n_free);
    double res_sq = 0.0;
    double ref_sq = 0.0;
    for (int e = 0; e < disc_.n_elements(); ++e) {
      const auto& op = system_.element_operator(e);
      const Eigen::VectorXd x_old = gather_local(before, e);
      const Eigen::VectorXd x_new = gather_local(after, e);
      Eigen::VectorXd dx_new(op.size()), dx_old(op.size());
      op.apply_mass(x_new, dx_new, disc_.n_sigma(), disc_.n_velocity());
      op.apply_mass(x_old, dx_old, disc_.n_sigma(), disc_.n_velocity());
      Eigen::VectorXd r = dx_new + op.h * x_new - dx_old + op.h * x_old;
      Eigen::VectorXd b = dx_old - op.h * x_old;
      add_element_loads(e, before.time, before.time + dt_, before, r, -1.0);
      add_element_loads(e, before.time, before.time + dt_, before, b, 1.0);
      res_sq += r.head(ni).squaredNorm();
      ref_sq += b.head(ni).squaredNorm();
      const auto& g = disc_.geometry(e);
      for (int le = 0; le < 3; ++le)
        for (int d = 0; d < 2; ++d) {
          const int f = g.facet[static_cast<std::size_t>(le)];
          if (dofmap_.component_constrained(f, d)) continue;
          for (int l = 0; l < ne; ++l) {
            const int fi = dofmap_.free_index(dofmap_.full_trace_index(f, d, l));
            res_trace[fi] += r[ni + le * 2 * ne + d * ne + l];
            ref_trace[fi] += b[ni + le * 2 * ne + d * ne + l];
          }
        }
    }
    Eigen::VectorXd loads = facet_loads(before.time, before.time + dt_);
    res_trace -= loads;
    ref_trace += loads;
    res_sq += res_trace.squaredNorm();
    ref_sq += ref_trace.squaredNorm();
    const double ref = std::sqrt(ref_sq);
    return ref > 0.0 ? std::sqrt(res_sq) / ref : std::sqrt(res_sq);
  }

private:
  // local state gather: [sigma_e | u_e | uhat(3 facets, facet frame)]
  Eigen::VectorXd gather_local(const StateVector& state, int e) const {
    const int ns = disc_.n_sigma();
    const int nu = disc_.n_velocity();
    const int ne = disc_.n_trace();
    const int ni = 3 * ns + 2 * nu;
    Eigen::VectorXd x(ni + 6 * ne);
    x.head(3 * ns) = state.sigma.segment(static_cast<Eigen::Index>(e) * 3 * ns, 3 * ns);
    x.segment(3 * ns, 2 * nu) = state.u.segment(static_cast<Eigen::Index>(e) * 2 * nu, 2 * nu);
    const auto& g = disc_.geometry(e);
    for (int le = 0; le < 3; ++le)
      x.segment(ni + le * 2 * ne, 2 * ne) = state.uhat.segment(
          static_cast<Eigen::Index>(g.facet[static_cast<std::size_t>(le)]) * 2 * ne, 2 * ne);
    return x;
  }

  // Source (and spring) contributions of element e into the local RHS rows;
  // scale is +1 for RHS assembly and -1 when forming residuals.
  void add_element_loads(int e, double t_n, double t_np1, const StateVector& state_n,
                         Eigen::VectorXd& rhs, double scale) const {
    const int ns = disc_.n_sigma();
    const int nu = disc_.n_velocity();
    const auto& g = disc_.geometry(e);
    const Phase phase = disc_.phase(e);
    if (problem_.source) {
      const auto& vol = disc_.volume_rule();
      const auto& uv = disc_.velocity_volume_values();
      for (std::size_t q = 0; q < vol.size(); ++q) {
        const Vec2 x = disc_.map_point(e, vol.points[q]);
        const Vec2 f = 0.5 * (problem_.source(x, t_n, phase) + problem_.source(x, t_np1, phase));
        const double wq = scale * g.det_jac * vol.weights[q];
        for (int j = 0; j < nu; ++j) {
          const double v = uv(j, static_cast<Eigen::Index>(q));
          rhs[3 * ns + j] += wq * f.x() * v;
          rhs[3 * ns + nu + j] += wq * f.y() * v;
        }
      }
    }
    if (phase == Phase::solid && problem_.materials.beta_s > 0.0 && state_n.has_disp) {
      const auto de = state_n.disp.segment(static_cast<Eigen::Index>(e) * 2 * nu, 2 * nu);
      rhs.segment(3 * ns, 2 * nu) -= (scale * problem_.materials.beta_s * g.det_jac) * de;
    }
  }

  /// Interface-jump and traction loads over the free trace dofs, with the CN
  /// endpoint average of the data.
  Eigen::VectorXd facet_loads(double t_n, double t_np1) const {
    const int ne = disc_.n_trace();
    const auto& er = disc_.edge_rule();
    const auto& chi = disc_.trace_edge_values();
    Eigen::VectorXd loads = Eigen::VectorXd::Zero(dofmap_.n_free_trace_dofs());
    for (int f = 0; f < disc_.n_facets(); ++f) {
      const Facet& ft = disc_.mesh().facets[static_cast<std::size_t>(f)];
      std::function<Vec2(const Vec2&, double)> data;
      if (ft.cls == FacetClass::interface && problem_.interface_jump) {
        const Vec2 nf = disc_.fluid_outward_normal(f);
        data = [this, nf](const Vec2& x, double t) { return problem_.interface_jump(x, t, nf); };
      } else if (ft.cls == FacetClass::boundary) {
        const BoundaryCondition* bc = dofmap_.boundary_condition(f);
        if (bc == nullptr || bc->kind == BcKind::velocity_dirichlet || !bc->traction) continue;
        data = bc->traction;
      } else {
        continue;
      }
      const Mat2& frame = dofmap_.frame(f);
      for (std::size_t q = 0; q < er.size(); ++q) {
        const Vec2 x = disc_.facet_point(f, er.points[q].x());
        const Vec2 value = 0.5 * (data(x, t_n) + data(x, t_np1));
        const double wq = ft.length * er.weights[q];
        for (int d = 0; d < 2; ++d) {
          if (dofmap_.component_constrained(f, d)) continue;
          const double comp = value.dot(frame.col(d));
          for (int l = 0; l < ne; ++l) {
            const int fi = dofmap_.free_index(dofmap_.full_trace_index(f, d, l));
            loads[fi] += wq * comp * chi(l, static_cast<Eigen::Index>(q));
          }
        }
      }
    }
    return loads;
  }

  /// Fluid stress from the t=0 algebraic constraint of the scheme:
  /// (A_f sigma, tau)_K = (tau, eps(u))_K - <tau n, u - uhat>_dK per element.
  void solve_fluid_constraint(StateVector& state) const {
    const int ns = disc_.n_sigma();
    const int nu = disc_.n_velocity();
    const int ne = disc_.n_trace();
    const int ni = 3 * ns + 2 * nu;
    for (int e = 0; e < disc_.n_elements(); ++e) {
      if (disc_.phase(e) != Phase::fluid) continue;
      const LocalBlocks blocks = assemble_local(disc_, dofmap_, problem_.materials, e);
      const Eigen::VectorXd x = gather_local(state, e);
      Eigen::VectorXd rhs = (blocks.strain - blocks.normal_coupling) * x.segment(3 * ns, 2 * nu);
      for (int le = 0; le < 3; ++le)
        rhs += blocks.trace_coupling[static_cast<std::size_t>(le)] * x.segment(ni + le * 2 * ne, 2 * ne);
      // mass matrix is detJ * (P kron I): invert componentwise via the 3x3 P
      const Eigen::Matrix3d Pinv = blocks.compliance.inverse();
      Eigen::VectorXd sig(3 * ns);
      for (int i = 0; i < ns; ++i) {
        const Eigen::Vector3d r(rhs[i], rhs[ns + i], rhs[2 * ns + i]);
        const Eigen::Vector3d s = Pinv * r / blocks.det_jac;
        sig[i] = s[0];
        sig[ns + i] = s[1];
        sig[2 * ns + i] = s[2];
      }
      state.sigma.segment(static_cast<Eigen::Index>(e) * 3 * ns, 3 * ns) = sig;
    }
  }

  void step_impl(StateVector& state, bool monolithic) const {
    const int ns = disc_.n_sigma();
    const int nu = disc_.n_velocity();
    const int ne = disc_.n_trace();
    const int ni = 3 * ns + 2 * nu;
    const int n_elem = disc_.n_elements();
    const double t_n = state.time;
    const double t_np1 = t_n + dt_;

    Eigen::VectorXd g_new = Eigen::VectorXd::Zero(dofmap_.full_trace_size());
    dofmap_.fill_constrained_values(t_np1, g_new);

    std::vector<Eigen::VectorXd> interior_solution(static_cast<std::size_t>(n_elem));
    std::vector<Eigen::VectorXd> schur_rhs(static_cast<std::size_t>(n_elem));
    std::vector<Eigen::VectorXd> interior_rhs; // monolithic path only
    if (monolithic) interior_rhs.resize(static_cast<std::size_t>(n_elem));

    parallel_for(static_cast<std::size_t>(n_elem), [&](std::size_t es) {
      const int e = static_cast<int>(es);
      const auto& op = system_.element_operator(e);
      const Eigen::VectorXd x_old = gather_local(state, e);
      Eigen::VectorXd known = Eigen::VectorXd::Zero(op.size());
      const auto& g = disc_.geometry(e);
      for (int le = 0; le < 3; ++le) {
        const int f = g.facet[static_cast<std::size_t>(le)];
        for (int d = 0; d < 2; ++d) {
          if (!dofmap_.component_constrained(f, d)) continue;
          for (int l = 0; l < ne; ++l)
            known[ni + le * 2 * ne + d * ne + l] = g_new[dofmap_.full_trace_index(f, d, l)];
        }
      }
      Eigen::VectorXd rhs(op.size());
      op.apply_mass(x_old, rhs, ns, nu);
      rhs.noalias() -= op.h * (x_old + known);
      add_element_loads(e, t_n, t_np1, state, rhs, 1.0);
      if (monolithic) {
        interior_rhs[es] = rhs;
        return;
      }
      const Eigen::VectorXd y = system_.interior_lu(e).solve(rhs.head(ni));
      interior_solution[es] = y;
      schur_rhs[es] = rhs.tail(6 * ne) - op.h.bottomLeftCorner(6 * ne, ni) * y;
    });

    Eigen::VectorXd uhat_free;
    if (monolithic) {
      uhat_free = monolithic_solve(state, interior_rhs, interior_solution);
    } else {
      Eigen::VectorXd rhs_trace = Eigen::VectorXd::Zero(dofmap_.n_free_trace_dofs());
      for (int e = 0; e < n_elem; ++e) {
        const auto& g = disc_.geometry(e);
        for (int le = 0; le < 3; ++le)
          for (int d = 0; d < 2; ++d) {
            const int f = g.facet[static_cast<std::size_t>(le)];
            if (dofmap_.component_constrained(f, d)) continue;
            for (int l = 0; l < ne; ++l)
              rhs_trace[dofmap_.free_index(dofmap_.full_trace_index(f, d, l))] +=
                  schur_rhs[static_cast<std::size_t>(e)][le * 2 * ne + d * ne + l];
          }
      }
      rhs_trace += facet_loads(t_n, t_np1);
      uhat_free = system_.solve_trace(rhs_trace);
    }

    // scatter traces, recover interiors, update displacement
    Eigen::VectorXd uhat_new = g_new;
    for (int f = 0; f < disc_.n_facets(); ++f)
      for (int d = 0; d < 2; ++d) {
        if (dofmap_.component_constrained(f, d)) continue;
        for (int l = 0; l < ne; ++l) {
          const int full = dofmap_.full_trace_index(f, d, l);
          uhat_new[full] = uhat_free[dofmap_.free_index(full)];
        }
      }

    Eigen::VectorXd u_old;
    if (state.has_disp) u_old = state.u;

    parallel_for(static_cast<std::size_t>(n_elem), [&](std::size_t es) {
      const int e = static_cast<int>(es);
      Eigen::VectorXd x_i = interior_solution[es];
      if (!monolithic) {
        // interior recovery: subtract the free-trace coupling (constrained
        // slots were already folded into the interior RHS)
        const auto& g = disc_.geometry(e);
        Eigen::VectorXd delta(6 * ne);
        for (int le = 0; le < 3; ++le) {
          const int f = g.facet[static_cast<std::size_t>(le)];
          for (int d = 0; d < 2; ++d)
            for (int l = 0; l < ne; ++l) {
              const int slot = le * 2 * ne + d * ne + l;
              delta[slot] = dofmap_.component_constrained(f, d)
                                ? 0.0
                                : uhat_new[dofmap_.full_trace_index(f, d, l)];
            }
        }
        x_i.noalias() -= system_.recovery(e) * delta;
      }
      state.sigma.segment(static_cast<Eigen::Index>(e) * 3 * ns, 3 * ns) = x_i.head(3 * ns);
      state.u.segment(static_cast<Eigen::Index>(e) * 2 * nu, 2 * nu) = x_i.segment(3 * ns, 2 * nu);
    });

    if (state.has_disp) {
      state.disp += (0.5 * dt_) * (u_old + state.u);
    }
    state.uhat = uhat_new;
    state.time = t_np1;
  }

  /// Full uncondensed solve: unknowns are all interior dofs followed by the
  /// free trace dofs. Fills interior_solution and returns the free traces.
  Eigen::VectorXd monolithic_solve(const StateVector& state,
                                   const std::vector<Eigen::VectorXd>& interior_rhs,
                                   std::vector<Eigen::VectorXd>& interior_solution) const {
    const int ns = disc_.n_sigma();
    const int nu = disc_.n_velocity();
    const int ne = disc_.n_trace();
    const int ni = 3 * ns + 2 * nu;
    const int n_elem = disc_.n_elements();
    const int n_interior = n_elem * ni;
    const int n = n_interior + dofmap_.n_free_trace_dofs();
    std::vector<Triplet> triplets;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    const auto global_index = [&](int e, int local) -> int {
      if (local < ni) return e * ni + local;
      const auto& g = disc_.geometry(e);
      const int slot = local - ni;
      const int le = slot / (2 * ne);
      const int d = (slot % (2 * ne)) / ne;
      const int l = slot % ne;
      const int f = g.facet[static_cast<std::size_t>(le)];
      if (dofmap_.component_constrained(f, d)) return -1;
      return n_interior + dofmap_.free_index(dofmap_.full_trace_index(f, d, l));
    };
    for (int e = 0; e < n_elem; ++e) {
      const auto& op = system_.element_operator(e);
      const int nloc = static_cast<int>(op.size());
      // mass part
      for (int i = 0; i < ns; ++i)
        if (op.phase == Phase::solid)
          for (int c = 0; c < 3; ++c)
            for (int cc = 0; cc < 3; ++cc)
              if (op.mass.sigma_mass(c, cc) != 0.0)
                triplets.push_back({e * ni + c * ns + i, e * ni + cc * ns + i, op.mass.sigma_mass(c, cc)});
      for (int j = 0; j < 2 * nu; ++j)
        triplets.push_back({e * ni + 3 * ns + j, e * ni + 3 * ns + j, op.mass.u_mass});
      for (int r = 0; r < nloc; ++r) {
        const int gr = global_index(e, r);
        if (gr < 0) continue;
        for (int c = 0; c < nloc; ++c) {
          const int gc = global_index(e, c);
          if (gc < 0 || op.h(r, c) == 0.0) continue;
          triplets.push_back({gr, gc, op.h(r, c)});
        }
        rhs[gr] += interior_rhs[static_cast<std::size_t>(e)][r];
      }
    }
    const Eigen::VectorXd loads = facet_loads(state.time, state.time + dt_);
    rhs.tail(dofmap_.n_free_trace_dofs()) += loads;
    const CsrMatrix full(n, std::move(triplets));
    const Eigen::VectorXd solution = solve_direct(full, rhs);
    for (int e = 0; e < n_elem; ++e)
      interior_solution[static_cast<std::size_t>(e)] = solution.segment(e * ni, ni);
    return solution.tail(dofmap_.n_free_trace_dofs());
  }

  const Discretization& disc_;
  const DofMap& dofmap_;
  const Problem& problem_;
  double dt_;
  CondensedSystem system_;
};

} // namespace hdgfsi

#endif
