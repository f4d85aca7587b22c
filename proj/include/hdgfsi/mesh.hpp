// Conforming triangular meshes of partitioned fluid/solid domains: structured
// generation, facet classification, boundary labels and ASCII file I/O.

#ifndef HDGFSI_MESH_HPP
#define HDGFSI_MESH_HPP

#include "hdgfsi/core.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace hdgfsi {

enum class FacetClass { interior, boundary, interface };

struct Triangle {
  std::array<int, 3> v;
  Phase tag = Phase::fluid;
};

struct Facet {
  std::array<int, 2> v;               // global vertex ids, v[0] < v[1]
  FacetClass cls = FacetClass::interior;
  std::array<int, 2> elem = {-1, -1}; // adjacent elements, elem[0] < elem[1]
  std::array<int, 2> local_edge = {-1, -1};
  Vec2 normal = Vec2::Zero();         // from elem[0] to elem[1]; outward on the boundary
  double length = 0.0;
  int label = -1;                     // index into Mesh::labels, -1 if unlabeled
};

struct BoundaryLabel {
  std::string name;
  std::vector<int> facets;
};

/// Immutable after finalize(); safe for concurrent read access.
class Mesh {
public:
  std::vector<Vec2> vertices;
  std::vector<Triangle> triangles;
  std::vector<Facet> facets;
  std::vector<BoundaryLabel> labels;

  /// Builds facet connectivity and classification from vertices/triangles.
  void finalize() {
    facets.clear();
    std::map<std::pair<int, int>, int> index;
    const int nv = static_cast<int>(vertices.size());
    for (int e = 0; e < static_cast<int>(triangles.size()); ++e) {
      const auto& t = triangles[static_cast<std::size_t>(e)];
      for (int i = 0; i < 3; ++i) {
        if (t.v[static_cast<std::size_t>(i)] < 0 || t.v[static_cast<std::size_t>(i)] >= nv)
          throw Error("mesh: triangle " + std::to_string(e) + " references vertex out of range");
      }
      if (signed_area(e) <= 0.0)
        throw Error("mesh: triangle " + std::to_string(e) + " has non-positive area");
      for (int le = 0; le < 3; ++le) {
        const auto [a, b] = local_edge_vertices(t, le);
        const auto key = std::minmax(a, b);
        auto it = index.find(key);
        if (it == index.end()) {
          Facet f;
          f.v = {key.first, key.second};
          f.elem[0] = e;
          f.local_edge[0] = le;
          index.emplace(key, static_cast<int>(facets.size()));
          facets.push_back(f);
        } else {
          Facet& f = facets[static_cast<std::size_t>(it->second)];
          if (f.elem[1] != -1)
            throw Error("mesh: facet shared by more than two triangles");
          f.elem[1] = e;
          f.local_edge[1] = le;
        }
      }
    }
    for (auto& f : facets) {
      const Vec2 a = vertices[static_cast<std::size_t>(f.v[0])];
      const Vec2 b = vertices[static_cast<std::size_t>(f.v[1])];
      f.length = (b - a).norm();
      const Vec2 tangent = (b - a) / f.length;
      Vec2 n(tangent.y(), -tangent.x());
      if (f.elem[1] == -1) {
        f.cls = FacetClass::boundary;
        if (n.dot(centroid(f.elem[0]) - 0.5 * (a + b)) > 0.0) n = -n; // outward
      } else {
        const Phase t0 = triangles[static_cast<std::size_t>(f.elem[0])].tag;
        const Phase t1 = triangles[static_cast<std::size_t>(f.elem[1])].tag;
        f.cls = (t0 != t1) ? FacetClass::interface : FacetClass::interior;
        if (n.dot(centroid(f.elem[1]) - centroid(f.elem[0])) < 0.0) n = -n;
      }
      f.normal = n;
    }
  }

  double signed_area(int e) const {
    const auto& t = triangles[static_cast<std::size_t>(e)];
    const Vec2 a = vertices[static_cast<std::size_t>(t.v[0])];
    const Vec2 b = vertices[static_cast<std::size_t>(t.v[1])];
    const Vec2 c = vertices[static_cast<std::size_t>(t.v[2])];
    return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
  }

  Vec2 centroid(int e) const {
    const auto& t = triangles[static_cast<std::size_t>(e)];
    return (vertices[static_cast<std::size_t>(t.v[0])] + vertices[static_cast<std::size_t>(t.v[1])] +
            vertices[static_cast<std::size_t>(t.v[2])]) /
           3.0;
  }

  Vec2 facet_midpoint(int f) const {
    const auto& ft = facets[static_cast<std::size_t>(f)];
    return 0.5 * (vertices[static_cast<std::size_t>(ft.v[0])] + vertices[static_cast<std::size_t>(ft.v[1])]);
  }

  /// Diameter of element e (longest edge).
  double element_diameter(int e) const {
    const auto& t = triangles[static_cast<std::size_t>(e)];
    double h = 0.0;
    for (int i = 0; i < 3; ++i) {
      const Vec2 a = vertices[static_cast<std::size_t>(t.v[static_cast<std::size_t>(i)])];
      const Vec2 b = vertices[static_cast<std::size_t>(t.v[static_cast<std::size_t>((i + 1) % 3)])];
      h = std::max(h, (b - a).norm());
    }
    return h;
  }

  double max_diameter() const {
    double h = 0.0;
    for (int e = 0; e < static_cast<int>(triangles.size()); ++e) h = std::max(h, element_diameter(e));
    return h;
  }

  /// Local quasi-uniformity constant: max over elements and their facets of
  /// h_K / h_F.
  double quasi_uniformity_constant() const {
    double gamma = 0.0;
    for (const auto& f : facets) {
      for (int side = 0; side < 2; ++side) {
        if (f.elem[static_cast<std::size_t>(side)] < 0) continue;
        gamma = std::max(gamma, element_diameter(f.elem[static_cast<std::size_t>(side)]) / f.length);
      }
    }
    return gamma;
  }

  const BoundaryLabel* find_label(const std::string& name) const {
    for (const auto& l : labels)
      if (l.name == name) return &l;
    return nullptr;
  }

  /// Vertex ids (tail, head) of local edge le in element orientation.
  static std::pair<int, int> local_edge_vertices(const Triangle& t, int le) {
    switch (le) {
    case 0: return {t.v[0], t.v[1]};
    case 1: return {t.v[1], t.v[2]};
    default: return {t.v[2], t.v[0]};
    }
  }
};

/// Uniform triangulation of an axis-aligned rectangle: nx-by-ny cells, each
/// split into two triangles along the same diagonal. Elements above split_y
/// are tagged solid, below fluid; facets on split_y classify as interface.
inline Mesh generate_structured(const Vec2& lo, const Vec2& hi, int nx, int ny,
                                std::optional<double> split_y = std::nullopt) {
  if (nx < 1 || ny < 1) throw Error("generate_structured: nx, ny must be >= 1");
  if (!(hi.x() > lo.x()) || !(hi.y() > lo.y())) throw Error("generate_structured: empty rectangle");
  const double dx = (hi.x() - lo.x()) / nx;
  const double dy = (hi.y() - lo.y()) / ny;
  if (split_y) {
    const double r = (*split_y - lo.y()) / dy;
    if (std::abs(r - std::round(r)) > 1e-9 * ny || *split_y < lo.y() || *split_y > hi.y())
      throw Error("generate_structured: split_y = " + std::to_string(*split_y) +
                  " does not lie on a mesh line");
  }
  Mesh mesh;
  mesh.vertices.reserve(static_cast<std::size_t>((nx + 1) * (ny + 1)));
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      mesh.vertices.emplace_back(lo.x() + i * dx, lo.y() + j * dy);
  const auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };
  mesh.triangles.reserve(static_cast<std::size_t>(2 * nx * ny));
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double yc = lo.y() + (j + 0.5) * dy;
      const Phase tag = (split_y && yc > *split_y) ? Phase::solid : Phase::fluid;
      mesh.triangles.push_back({{vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)}, tag});
      mesh.triangles.push_back({{vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)}, tag});
    }
  }
  mesh.finalize();
  return mesh;
}

/// Named predicate on facet midpoints, used to attach boundary labels.
struct LabelPredicate {
  std::string name;
  std::function<bool(const Vec2&)> covers;
};

/// Assigns exactly one label to every boundary facet and the label `sigma` to
/// every interface facet. Uncovered or doubly-covered boundary facets are
/// reported with their midpoints.
inline void classify_facets(Mesh& mesh, const std::vector<LabelPredicate>& predicates) {
  mesh.labels.clear();
  mesh.labels.reserve(predicates.size() + 1);
  for (const auto& p : predicates) mesh.labels.push_back({p.name, {}});
  int sigma_label = -1;
  for (auto& f : mesh.facets) f.label = -1;
  std::string errors;
  for (int fi = 0; fi < static_cast<int>(mesh.facets.size()); ++fi) {
    Facet& f = mesh.facets[static_cast<std::size_t>(fi)];
    if (f.cls == FacetClass::interface) {
      if (sigma_label == -1) {
        sigma_label = static_cast<int>(mesh.labels.size());
        mesh.labels.push_back({"sigma", {}});
      }
      f.label = sigma_label;
      mesh.labels[static_cast<std::size_t>(sigma_label)].facets.push_back(fi);
      continue;
    }
    if (f.cls != FacetClass::boundary) continue;
    const Vec2 mid = mesh.facet_midpoint(fi);
    int hit = -1;
    for (int p = 0; p < static_cast<int>(predicates.size()); ++p) {
      if (!predicates[static_cast<std::size_t>(p)].covers(mid)) continue;
      if (hit != -1) {
        std::ostringstream os;
        os << "facet at (" << mid.x() << ", " << mid.y() << ") covered by labels '"
           << predicates[static_cast<std::size_t>(hit)].name << "' and '"
           << predicates[static_cast<std::size_t>(p)].name << "'\n";
        errors += os.str();
      }
      hit = p;
    }
    if (hit == -1) {
      std::ostringstream os;
      os << "boundary facet at (" << mid.x() << ", " << mid.y() << ") carries no label\n";
      errors += os.str();
      continue;
    }
    f.label = hit;
    mesh.labels[static_cast<std::size_t>(hit)].facets.push_back(fi);
  }
  if (!errors.empty()) throw Error("classify_facets:\n" + errors);
}

namespace detail {

inline std::string format_coord(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

} // namespace detail

/// ASCII format: `hdgfsi-mesh v1`, `<nv> <nt>`, nv vertex lines, nt triangle
/// lines `i0 i1 i2 tag`, then optional `label <name> <count>` blocks listing
/// facet vertex pairs.
inline void save_mesh(const Mesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("save_mesh: cannot open " + path);
  out << "hdgfsi-mesh v1\n" << mesh.vertices.size() << " " << mesh.triangles.size() << "\n";
  for (const auto& v : mesh.vertices)
    out << detail::format_coord(v.x()) << " " << detail::format_coord(v.y()) << "\n";
  for (const auto& t : mesh.triangles)
    out << t.v[0] << " " << t.v[1] << " " << t.v[2] << " " << (t.tag == Phase::solid ? 's' : 'f') << "\n";
  for (const auto& label : mesh.labels) {
    if (label.name == "sigma") continue; // rebuilt from subdomain tags on load
    out << "label " << label.name << " " << label.facets.size() << "\n";
    for (int f : label.facets) {
      const auto& ft = mesh.facets[static_cast<std::size_t>(f)];
      out << ft.v[0] << " " << ft.v[1] << "\n";
    }
  }
  if (!out) throw Error("save_mesh: write failed for " + path);
}

inline Mesh load_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("load_mesh: cannot open " + path);
  std::string line;
  int lineno = 0;
  const auto next_line = [&]() -> std::string& {
    if (!std::getline(in, line)) throw Error("load_mesh: unexpected end of file, line " + std::to_string(lineno + 1));
    ++lineno;
    return line;
  };
  if (next_line() != "hdgfsi-mesh v1") throw Error("load_mesh: malformed header, line 1");
  std::size_t nv = 0, nt = 0;
  {
    std::istringstream is(next_line());
    if (!(is >> nv >> nt)) throw Error("load_mesh: malformed count line, line 2");
  }
  Mesh mesh;
  mesh.vertices.reserve(nv);
  for (std::size_t i = 0; i < nv; ++i) {
    std::istringstream is(next_line());
    double x = 0.0, y = 0.0;
    if (!(is >> x >> y)) throw Error("load_mesh: malformed vertex, line " + std::to_string(lineno));
    mesh.vertices.emplace_back(x, y);
  }
  mesh.triangles.reserve(nt);
  for (std::size_t i = 0; i < nt; ++i) {
    std::istringstream is(next_line());
    int a = 0, b = 0, c = 0;
    char tag = 0;
    if (!(is >> a >> b >> c >> tag) || (tag != 's' && tag != 'f'))
      throw Error("load_mesh: malformed triangle, line " + std::to_string(lineno));
    for (int idx : {a, b, c})
      if (idx < 0 || idx >= static_cast<int>(nv))
        throw Error("load_mesh: vertex index out of range, line " + std::to_string(lineno));
    mesh.triangles.push_back({{a, b, c}, tag == 's' ? Phase::solid : Phase::fluid});
  }
  try {
    mesh.finalize();
  } catch (const Error& err) {
    throw Error(std::string("load_mesh: ") + err.what());
  }
  // Label blocks reference facets by vertex pair.
  std::map<std::pair<int, int>, int> facet_of;
  for (int f = 0; f < static_cast<int>(mesh.facets.size()); ++f)
    facet_of[{mesh.facets[static_cast<std::size_t>(f)].v[0], mesh.facets[static_cast<std::size_t>(f)].v[1]}] = f;
  std::vector<LabelPredicate> dummy;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream is(line);
    std::string keyword, name;
    std::size_t count = 0;
    if (!(is >> keyword >> name >> count) || keyword != "label")
      throw Error("load_mesh: malformed label header, line " + std::to_string(lineno));
    BoundaryLabel label{name, {}};
    const int label_id = static_cast<int>(mesh.labels.size());
    for (std::size_t i = 0; i < count; ++i) {
      std::istringstream fs(next_line());
      int a = 0, b = 0;
      if (!(fs >> a >> b)) throw Error("load_mesh: malformed label facet, line " + std::to_string(lineno));
      const auto key = std::minmax(a, b);
      auto it = facet_of.find({key.first, key.second});
      if (it == facet_of.end())
        throw Error("load_mesh: label references unknown facet, line " + std::to_string(lineno));
      label.facets.push_back(it->second);
      mesh.facets[static_cast<std::size_t>(it->second)].label = label_id;
    }
    mesh.labels.push_back(std::move(label));
  }
  // Interface facets always carry the `sigma` label.
  int sigma_label = -1;
  for (int f = 0; f < static_cast<int>(mesh.facets.size()); ++f) {
    if (mesh.facets[static_cast<std::size_t>(f)].cls != FacetClass::interface) continue;
    if (sigma_label == -1) {
      sigma_label = static_cast<int>(mesh.labels.size());
      mesh.labels.push_back({"sigma", {}});
    }
    mesh.facets[static_cast<std::size_t>(f)].label = sigma_label;
    mesh.labels[static_cast<std::size_t>(sigma_label)].facets.push_back(f);
  }
  return mesh;
}

} // namespace hdgfsi

#endif
