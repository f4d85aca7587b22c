// Discrete spaces for the HDG scheme: P_k symmetric stress and P_{k+1}
// velocity per element, P_{k+1} vector traces per facet, with the shared
// reference-element tables and per-element geometry used by assembly.

#ifndef HDGFSI_SPACE_HPP
#define HDGFSI_SPACE_HPP

#include "hdgfsi/basis.hpp"
#include "hdgfsi/core.hpp"
#include "hdgfsi/materials.hpp"
#include "hdgfsi/mesh.hpp"
#include "hdgfsi/quadrature.hpp"

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hdgfsi {

/// Stabilization weight (k+1)^2 / h_F.
inline double stabilization_weight(int k, double h_f) {
  if (!(h_f > 0.0)) throw Error("stabilization_weight: h_F must be positive");
  double w = (k + 1.0) * (k + 1.0) / h_f;
  if (testing::defects().flip_stabilization_sign) w = -w;
  return w;
}

struct ElementGeometry {
  Mat2 jac;                      // [v1-v0 | v2-v0]
  Mat2 inv_jac_t;
  double det_jac = 0.0;          // = 2 * area
  double diameter = 0.0;
  std::array<int, 3> facet = {-1, -1, -1};
  std::array<bool, 3> forward = {true, true, true}; // local edge runs with the facet direction
  std::array<Vec2, 3> normal = {};                  // outward unit normals
  std::array<double, 3> edge_len = {};
};

/// Mesh + polynomial degree + cached quadrature/basis tables. Immutable and
/// shared by assembly, projection and error evaluation.
class Discretization {
public:
  Discretization(const Mesh& mesh, int k)
      : mesh_(mesh), k_(k), sigma_basis_(k), velocity_basis_(k + 1), trace_basis_(k + 1),
        volume_rule_(quad_triangle(2 * (k + 2) + 2)), edge_rule_(quad_edge(2 * (k + 2))) {
    if (k < 0) throw Error("Discretization: k must be >= 0");
    sigma_vol_ = sigma_basis_.value_table(volume_rule_);
    velocity_vol_ = velocity_basis_.value_table(volume_rule_);
    const Eigen::Index nq = static_cast<Eigen::Index>(volume_rule_.size());
    velocity_grad_xi_.resize(velocity_basis_.size(), nq);
    velocity_grad_eta_.resize(velocity_basis_.size(), nq);
    for (Eigen::Index q = 0; q < nq; ++q) {
      const auto g = velocity_basis_.gradients(volume_rule_.points[static_cast<std::size_t>(q)]);
      velocity_grad_xi_.col(q) = g.col(0);
      velocity_grad_eta_.col(q) = g.col(1);
    }
    trace_edge_ = trace_basis_.value_table(edge_rule_);
    for (int le = 0; le < 3; ++le) {
      for (int fw = 0; fw < 2; ++fw) {
        QuadratureRule mapped;
        mapped.weights = edge_rule_.weights;
        mapped.points.reserve(edge_rule_.size());
        for (std::size_t q = 0; q < edge_rule_.size(); ++q) {
          const double s = edge_rule_.points[q].x();
          mapped.points.push_back(edge_reference_point(le, fw == 1 ? s : 1.0 - s));
        }
        sigma_edge_[static_cast<std::size_t>(le)][static_cast<std::size_t>(fw)] = sigma_basis_.value_table(mapped);
        velocity_edge_[static_cast<std::size_t>(le)][static_cast<std::size_t>(fw)] =
            velocity_basis_.value_table(mapped);
      }
    }
    build_geometry();
  }

  const Mesh& mesh() const { return mesh_; }
  int degree() const { return k_; }
  int n_sigma() const { return sigma_basis_.size(); }      // scalar P_k dimension
  int n_velocity() const { return velocity_basis_.size(); } // scalar P_{k+1} dimension
  int n_trace() const { return trace_basis_.size(); }       // scalar edge P_{k+1} dimension
  int interior_dofs_per_element() const { return 3 * n_sigma() + 2 * n_velocity(); }
  int trace_dofs_per_facet() const { return 2 * n_trace(); }

  const TriangleBasis& sigma_basis() const { return sigma_basis_; }
  const TriangleBasis& velocity_basis() const { return velocity_basis_; }
  const EdgeBasis& trace_basis() const { return trace_basis_; }
  const QuadratureRule& volume_rule() const { return volume_rule_; }
  const QuadratureRule& edge_rule() const { return edge_rule_; }
  const Eigen::MatrixXd& sigma_volume_values() const { return sigma_vol_; }
  const Eigen::MatrixXd& velocity_volume_values() const { return velocity_vol_; }
  const Eigen::MatrixXd& velocity_grad_xi() const { return velocity_grad_xi_; }
  const Eigen::MatrixXd& velocity_grad_eta() const { return velocity_grad_eta_; }
  const Eigen::MatrixXd& trace_edge_values() const { return trace_edge_; }
  const Eigen::MatrixXd& sigma_edge_values(int le, bool forward) const {
    return sigma_edge_[static_cast<std::size_t>(le)][forward ? 1 : 0];
  }
  const Eigen::MatrixXd& velocity_edge_values(int le, bool forward) const {
    return velocity_edge_[static_cast<std::size_t>(le)][forward ? 1 : 0];
  }
  const ElementGeometry& geometry(int e) const { return geometry_[static_cast<std::size_t>(e)]; }
  Phase phase(int e) const { return mesh_.triangles[static_cast<std::size_t>(e)].tag; }
  int n_elements() const { return static_cast<int>(mesh_.triangles.size()); }
  int n_facets() const { return static_cast<int>(mesh_.facets.size()); }

  /// Physical point of a reference point in element e.
  Vec2 map_point(int e, const Vec2& ref) const {
    const auto& g = geometry_[static_cast<std::size_t>(e)];
    const auto& t = mesh_.triangles[static_cast<std::size_t>(e)];
    return mesh_.vertices[static_cast<std::size_t>(t.v[0])] + g.jac * ref;
  }

  /// Physical point at facet parameter s in [0,1] (facet direction v0 -> v1).
  Vec2 facet_point(int f, double s) const {
    const auto& ft = mesh_.facets[static_cast<std::size_t>(f)];
    return (1.0 - s) * mesh_.vertices[static_cast<std::size_t>(ft.v[0])] +
           s * mesh_.vertices[static_cast<std::size_t>(ft.v[1])];
  }

  /// Outward normal of the fluid-side element on an interface facet.
  Vec2 fluid_outward_normal(int f) const {
    const auto& ft = mesh_.facets[static_cast<std::size_t>(f)];
    if (ft.cls != FacetClass::interface) throw Error("fluid_outward_normal: not an interface facet");
    return phase(ft.elem[0]) == Phase::fluid ? ft.normal : Vec2(-ft.normal);
  }

  static Vec2 edge_reference_point(int le, double t) {
    switch (le) {
    case 0: return {t, 0.0};
    case 1: return {1.0 - t, t};
    default: return {0.0, 1.0 - t};
    }
  }

private:
  void build_geometry() {
    geometry_.resize(mesh_.triangles.size());
    // facet lookup per (element, local edge)
    for (int f = 0; f < static_cast<int>(mesh_.facets.size()); ++f) {
      const auto& ft = mesh_.facets[static_cast<std::size_t>(f)];
      for (int side = 0; side < 2; ++side) {
        const int e = ft.elem[static_cast<std::size_t>(side)];
        if (e < 0) continue;
        auto& g = geometry_[static_cast<std::size_t>(e)];
        const int le = ft.local_edge[static_cast<std::size_t>(side)];
        g.facet[static_cast<std::size_t>(le)] = f;
        const auto [a, b] =
            Mesh::local_edge_vertices(mesh_.triangles[static_cast<std::size_t>(e)], le);
        g.forward[static_cast<std::size_t>(le)] = (a == ft.v[0]);
        // element-local sign of the stored facet normal
        g.normal[static_cast<std::size_t>(le)] = (side == 0) ? ft.normal : Vec2(-ft.normal);
        g.edge_len[static_cast<std::size_t>(le)] = ft.length;
      }
    }
    for (int e = 0; e < static_cast<int>(mesh_.triangles.size()); ++e) {
      auto& g = geometry_[static_cast<std::size_t>(e)];
      const auto& t = mesh_.triangles[static_cast<std::size_t>(e)];
      const Vec2 v0 = mesh_.vertices[static_cast<std::size_t>(t.v[0])];
      const Vec2 v1 = mesh_.vertices[static_cast<std::size_t>(t.v[1])];
      const Vec2 v2 = mesh_.vertices[static_cast<std::size_t>(t.v[2])];
      g.jac.col(0) = v1 - v0;
      g.jac.col(1) = v2 - v0;
      g.det_jac = g.jac.determinant();
      if (!(g.det_jac > 0.0)) throw Error("Discretization: element " + std::to_string(e) + " is degenerate");
      g.inv_jac_t = g.jac.inverse().transpose();
      g.diameter = mesh_.element_diameter(e);
    }
  }

  const Mesh& mesh_;
  int k_;
  TriangleBasis sigma_basis_;
  TriangleBasis velocity_basis_;
  EdgeBasis trace_basis_;
  QuadratureRule volume_rule_;
  QuadratureRule edge_rule_;
  Eigen::MatrixXd sigma_vol_;
  Eigen::MatrixXd velocity_vol_;
  Eigen::MatrixXd velocity_grad_xi_;
  Eigen::MatrixXd velocity_grad_eta_;
  Eigen::MatrixXd trace_edge_;
  std::array<std::array<Eigen::MatrixXd, 2>, 3> sigma_edge_;
  std::array<std::array<Eigen::MatrixXd, 2>, 3> velocity_edge_;
  std::vector<ElementGeometry> geometry_;
};

enum class BcKind {
  velocity_dirichlet,              // uhat constrained to data
  traction,                        // sigma*n prescribed, trace equation loaded
  normal_stress_tangential_velocity, // (sigma n).n prescribed, tang(u) constrained
  tangential_stress_normal_velocity  // tang(sigma n) prescribed, u.n constrained
};

struct BoundaryCondition {
  BcKind kind = BcKind::velocity_dirichlet;
  /// Constrained velocity components are read from this field.
  std::function<Vec2(const Vec2&, double)> velocity;
  /// Prescribed traction sigma*n; free components are read from this field.
  std::function<Vec2(const Vec2&, double)> traction;
};

using BcTable = std::map<std::string, BoundaryCondition>;

/// Degree-of-freedom layout: contiguous interior blocks per element, one
/// trace block per facet with a per-facet frame (Cartesian, or normal/
/// tangential on mixed-condition facets) and a constrained-component mask.
class DofMap {
public:
  DofMap(const Discretization& disc, const BcTable& bcs) : disc_(disc) {
    const Mesh& mesh = disc.mesh();
    if (bcs.count("sigma") > 0) throw Error("DofMap: interface facets must not carry a boundary condition");
    const int nf = disc.n_facets();
    frames_.assign(static_cast<std::size_t>(nf), Mat2::Identity());
    constrained_.assign(static_cast<std::size_t>(nf), {false, false});
    bc_of_facet_.assign(static_cast<std::size_t>(nf), nullptr);
    for (int f = 0; f < nf; ++f) {
      const Facet& ft = mesh.facets[static_cast<std::size_t>(f)];
      if (ft.cls != FacetClass::boundary) continue;
      if (ft.label < 0)
        throw Error("DofMap: boundary facet without label at (" + std::to_string(mesh.facet_midpoint(f).x()) +
                    ", " + std::to_string(mesh.facet_midpoint(f).y()) + ")");
      const std::string& name = mesh.labels[static_cast<std::size_t>(ft.label)].name;
      auto it = bcs.find(name);
      if (it == bcs.end()) throw Error("DofMap: no boundary condition for label '" + name + "'");
      const BoundaryCondition& bc = it->second;
      bc_of_facet_[static_cast<std::size_t>(f)] = &bc;
      switch (bc.kind) {
      case BcKind::velocity_dirichlet:
        constrained_[static_cast<std::size_t>(f)] = {true, true};
        break;
      case BcKind::traction:
        break;
      case BcKind::normal_stress_tangential_velocity:
      case BcKind::tangential_stress_normal_velocity: {
        const Vec2 n = ft.normal; // outward on boundary facets
        Mat2 frame;
        frame.col(0) = n;
        frame.col(1) = Vec2(-n.y(), n.x());
        frames_[static_cast<std::size_t>(f)] = frame;
        if (bc.kind == BcKind::normal_stress_tangential_velocity)
          constrained_[static_cast<std::size_t>(f)] = {false, true}; // tangential component fixed
        else
          constrained_[static_cast<std::size_t>(f)] = {true, false}; // normal component fixed
        break;
      }
      }
    }
    // free-dof numbering over the full trace layout
    const int per_facet = disc.trace_dofs_per_facet();
    const int ne = disc.n_trace();
    free_index_.assign(static_cast<std::size_t>(nf * per_facet), -1);
    n_free_ = 0;
    for (int f = 0; f < nf; ++f)
      for (int comp = 0; comp < 2; ++comp) {
        if (constrained_[static_cast<std::size_t>(f)][static_cast<std::size_t>(comp)]) continue;
        for (int l = 0; l < ne; ++l)
          free_index_[static_cast<std::size_t>(full_trace_index(f, comp, l))] = n_free_++;
      }
  }

  const Discretization& discretization() const { return disc_; }
  int n_free_trace_dofs() const { return n_free_; }
  int full_trace_size() const { return disc_.n_facets() * disc_.trace_dofs_per_facet(); }
  int full_trace_index(int f, int comp, int l) const {
    return f * disc_.trace_dofs_per_facet() + comp * disc_.n_trace() + l;
  }
  int free_index(int full) const { return free_index_[static_cast<std::size_t>(full)]; }
  bool component_constrained(int f, int comp) const {
    return constrained_[static_cast<std::size_t>(f)][static_cast<std::size_t>(comp)];
  }
  bool facet_fully_constrained(int f) const {
    return constrained_[static_cast<std::size_t>(f)][0] && constrained_[static_cast<std::size_t>(f)][1];
  }
  const Mat2& frame(int f) const { return frames_[static_cast<std::size_t>(f)]; }
  const BoundaryCondition* boundary_condition(int f) const { return bc_of_facet_[static_cast<std::size_t>(f)]; }

  /// Fills the constrained slots of a full-layout trace vector with boundary
  /// data at time t (free slots untouched).
  void fill_constrained_values(double t, Eigen::VectorXd& full) const {
    const int ne = disc_.n_trace();
    const auto& rule = disc_.edge_rule();
    const auto& chi = disc_.trace_edge_values();
    for (int f = 0; f < disc_.n_facets(); ++f) {
      const BoundaryCondition* bc = bc_of_facet_[static_cast<std::size_t>(f)];
      if (bc == nullptr) continue;
      for (int comp = 0; comp < 2; ++comp) {
        if (!component_constrained(f, comp)) continue;
        const Vec2 dir = frames_[static_cast<std::size_t>(f)].col(comp);
        for (int l = 0; l < ne; ++l) full[full_trace_index(f, comp, l)] = 0.0;
        if (!bc->velocity) continue;
        for (std::size_t q = 0; q < rule.size(); ++q) {
          const Vec2 x = disc_.facet_point(f, rule.points[q].x());
          const double val = bc->velocity(x, t).dot(dir);
          for (int l = 0; l < ne; ++l)
            full[full_trace_index(f, comp, l)] += rule.weights[q] * val * chi(l, static_cast<Eigen::Index>(q));
        }
      }
    }
  }

private:
  const Discretization& disc_;
  std::vector<Mat2> frames_;
  std::vector<std::array<bool, 2>> constrained_;
  std::vector<const BoundaryCondition*> bc_of_facet_;
  std::vector<int> free_index_;
  int n_free_ = 0;
};

/// Discrete state: elementwise stress/velocity coefficients, full-layout
/// trace coefficients (constrained slots hold their boundary data), optional
/// elementwise displacement, and the time stamp.
struct StateVector {
  double time = 0.0;
  Eigen::VectorXd sigma; // per element: [s11 (n_sigma) | s22 | s12]
  Eigen::VectorXd u;     // per element: [u_x (n_velocity) | u_y]
  Eigen::VectorXd uhat;  // per facet:   [comp0 (n_trace) | comp1], in the facet frame
  Eigen::VectorXd disp;  // per element, same layout as u; meaningful on solid elements
  bool has_disp = false;

  static StateVector zero(const Discretization& disc, bool with_disp = false) {
    StateVector s;
    s.sigma = Eigen::VectorXd::Zero(disc.n_elements() * 3 * disc.n_sigma());
    s.u = Eigen::VectorXd::Zero(disc.n_elements() * 2 * disc.n_velocity());
    s.uhat = Eigen::VectorXd::Zero(disc.n_facets() * disc.trace_dofs_per_facet());
    s.has_disp = with_disp;
    if (with_disp) s.disp = Eigen::VectorXd::Zero(s.u.size());
    return s;
  }
};

/// Evaluates the discrete velocity at a reference point of element e.
inline Vec2 evaluate_velocity(const Discretization& disc, const StateVector& state, int e, const Vec2& ref) {
  const int nu = disc.n_velocity();
  const Eigen::VectorXd vals = disc.velocity_basis().values(ref);
  const auto block = state.u.segment(static_cast<Eigen::Index>(e) * 2 * nu, 2 * nu);
  Vec2 out = Vec2::Zero();
  for (int j = 0; j < nu; ++j) {
    out.x() += block[j] * vals[j];
    out.y() += block[nu + j] * vals[j];
  }
  return out;
}

inline Vec2 evaluate_displacement(const Discretization& disc, const StateVector& state, int e, const Vec2& ref) {
  if (!state.has_disp) throw Error("evaluate_displacement: state carries no displacement");
  const int nu = disc.n_velocity();
  const Eigen::VectorXd vals = disc.velocity_basis().values(ref);
  const auto block = state.disp.segment(static_cast<Eigen::Index>(e) * 2 * nu, 2 * nu);
  Vec2 out = Vec2::Zero();
  for (int j = 0; j < nu; ++j) {
    out.x() += block[j] * vals[j];
    out.y() += block[nu + j] * vals[j];
  }
  return out;
}

inline SymTensor2 evaluate_stress(const Discretization& disc, const StateVector& state, int e, const Vec2& ref) {
  const int ns = disc.n_sigma();
  const Eigen::VectorXd vals = disc.sigma_basis().values(ref);
  const auto block = state.sigma.segment(static_cast<Eigen::Index>(e) * 3 * ns, 3 * ns);
  SymTensor2 out;
  for (int i = 0; i < ns; ++i) {
    out.s11 += block[i] * vals[i];
    out.s22 += block[ns + i] * vals[i];
    out.s12 += block[2 * ns + i] * vals[i];
  }
  return out;
}

} // namespace hdgfsi

#endif
