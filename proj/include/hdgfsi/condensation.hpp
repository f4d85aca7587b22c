// Static condensation of the one-step CN system onto the facet traces, plus
// the monolithic (uncondensed) assembly kept as a testing oracle.

#ifndef HDGFSI_CONDENSATION_HPP
#define HDGFSI_CONDENSATION_HPP

#include "hdgfsi/assembly.hpp"
#include "hdgfsi/sparse.hpp"
#include "hdgfsi/space.hpp"

#include <optional>
#include <vector>

namespace hdgfsi {

struct SolverOptions {
  bool iterative = false;
  double tol = 1e-12;
  int max_iterations = 2000;
};

/// Element-local factorized blocks plus the global sparse matrix over the
/// unconstrained trace dofs for one CN step size.
class CondensedSystem {
public:
  CondensedSystem(const Discretization& disc, const DofMap& dofmap, const MaterialSet& materials,
                  double dt, SolverOptions options = {})
      : disc_(disc), dofmap_(dofmap), materials_(materials), dt_(dt), options_(options) {
    const int n_elem = disc.n_elements();
    const int ni = disc.interior_dofs_per_element();
    ops_.resize(static_cast<std::size_t>(n_elem));
    interior_lu_.resize(static_cast<std::size_t>(n_elem));
    recovery_.resize(static_cast<std::size_t>(n_elem));
    std::vector<Eigen::MatrixXd> schur(static_cast<std::size_t>(n_elem));
    std::vector<std::string> failures(static_cast<std::size_t>(n_elem));
    parallel_for(static_cast<std::size_t>(n_elem), [&](std::size_t e) {
      const LocalBlocks blocks = assemble_local(disc_, dofmap_, materials_, static_cast<int>(e));
      CnLocalOperator op = cn_local_operator(disc_, blocks, materials_, dt_);
      const Eigen::Index nt = op.size() - ni;
      Eigen::MatrixXd a_ii = op.h.topLeftCorner(ni, ni);
      for (int i = 0; i < disc_.n_sigma(); ++i)
        if (op.phase == Phase::solid)
          for (int c = 0; c < 3; ++c)
            for (int cc = 0; cc < 3; ++cc)
              a_ii(c * disc_.n_sigma() + i, cc * disc_.n_sigma() + i) += op.mass.sigma_mass(c, cc);
      a_ii.diagonal().segment(3 * disc_.n_sigma(), 2 * disc_.n_velocity()).array() += op.mass.u_mass;
      Eigen::PartialPivLU<Eigen::MatrixXd> lu(a_ii);
      // PartialPivLU has no rank check; a degenerate block surfaces as a
      // non-finite recovery map.
      Eigen::MatrixXd rec = lu.solve(op.h.topRightCorner(ni, nt));
      if (!rec.allFinite()) {
        failures[e] = "condense: interior factorization failed on element " + std::to_string(e);
        return;
      }
      schur[e] = op.h.bottomRightCorner(nt, nt) - op.h.bottomLeftCorner(nt, ni) * rec;
      ops_[e] = std::move(op);
      interior_lu_[e] = std::move(lu);
      recovery_[e] = std::move(rec);
    });
    for (const auto& f : failures)
      if (!f.empty()) throw Error(f);

    // Deterministic sequential insertion in element order.
    std::vector<Triplet> triplets;
    const int ne_tr = disc.n_trace();
    for (int e = 0; e < n_elem; ++e) {
      const auto& g = disc.geometry(e);
      const Eigen::MatrixXd& s = schur[static_cast<std::size_t>(e)];
      for (int le_r = 0; le_r < 3; ++le_r)
        for (int cr = 0; cr < 2; ++cr) {
          if (dofmap.component_constrained(g.facet[static_cast<std::size_t>(le_r)], cr)) continue;
          for (int lr = 0; lr < ne_tr; ++lr) {
            const int row = dofmap.free_index(
                dofmap.full_trace_index(g.facet[static_cast<std::size_t>(le_r)], cr, lr));
            const int local_row = le_r * 2 * ne_tr + cr * ne_tr + lr;
            for (int le_c = 0; le_c < 3; ++le_c)
              for (int cc = 0; cc < 2; ++cc) {
                if (dofmap.component_constrained(g.facet[static_cast<std::size_t>(le_c)], cc)) continue;
                for (int lc = 0; lc < ne_tr; ++lc) {
                  const int col = dofmap.free_index(
                      dofmap.full_trace_index(g.facet[static_cast<std::size_t>(le_c)], cc, lc));
                  const double v = s(local_row, le_c * 2 * ne_tr + cc * ne_tr + lc);
                  if (v != 0.0) triplets.push_back({row, col, v});
                }
              }
          }
        }
    }
    matrix_ = CsrMatrix(dofmap.n_free_trace_dofs(), std::move(triplets));
    if (!options_.iterative && dofmap.n_free_trace_dofs() > 0) direct_.emplace(matrix_);
  }

  double dt() const { return dt_; }
  const CsrMatrix& trace_matrix() const { return matrix_; }
  const CnLocalOperator& element_operator(int e) const { return ops_[static_cast<std::size_t>(e)]; }
  const Eigen::PartialPivLU<Eigen::MatrixXd>& interior_lu(int e) const {
    return interior_lu_[static_cast<std::size_t>(e)];
  }
  const Eigen::MatrixXd& recovery(int e) const { return recovery_[static_cast<std::size_t>(e)]; }

  Eigen::VectorXd solve_trace(const Eigen::VectorXd& rhs) const {
    if (rhs.size() == 0) return Eigen::VectorXd();
    if (direct_) return direct_->solve(rhs);
    return solve_iterative(matrix_, rhs, options_.tol, options_.max_iterations);
  }

private:
  const Discretization& disc_;
  const DofMap& dofmap_;
  MaterialSet materials_;
  double dt_;
  SolverOptions options_;
  std::vector<CnLocalOperator> ops_;
  std::vector<Eigen::PartialPivLU<Eigen::MatrixXd>> interior_lu_;
  std::vector<Eigen::MatrixXd> recovery_;
  CsrMatrix matrix_;
  std::optional<DirectSolver> direct_;
};

} // namespace hdgfsi

#endif
