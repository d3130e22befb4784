#include "kerrfem/mesh.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "kerrfem/error.hpp"

namespace kerrfem {

namespace {

double signed_det(const Mesh& mesh, const Tet& t) {
  const Vec3& x0 = mesh.vertices[t[0]];
  return Mat3::from_columns(mesh.vertices[t[1]] - x0, mesh.vertices[t[2]] - x0,
                            mesh.vertices[t[3]] - x0)
      .determinant();
}

}  // namespace

double Mesh::mesh_size() const {
  double h = 0.0;
  for (const Tet& t : tets)
    for (const auto& [a, b] : kLocalEdges) h = std::max(h, norm(vertices[t[a]] - vertices[t[b]]));
  return h;
}

double Mesh::volume(std::size_t tet) const { return signed_det(*this, tets.at(tet)) / 6.0; }

Mesh make_mesh(std::vector<Vec3> vertices, std::vector<Tet> tets) {
  Mesh mesh{std::move(vertices), std::move(tets)};
  const std::size_t nv = mesh.vertices.size();
  std::set<Tet> seen;
  for (std::size_t k = 0; k < mesh.tets.size(); ++k) {
    Tet& t = mesh.tets[k];
    for (std::size_t v : t)
      if (v >= nv)
        throw InvalidArgument("tet " + std::to_string(k) + " references vertex " +
                              std::to_string(v) + " out of range");
    Tet key = t;
    std::sort(key.begin(), key.end());
    if (std::adjacent_find(key.begin(), key.end()) != key.end())
      throw InvalidArgument("tet " + std::to_string(k) + " repeats a vertex");
    if (!seen.insert(key).second)
      throw InvalidArgument("duplicate tet " + std::to_string(k));

    const double det = signed_det(mesh, t);
    // Relative to the local length scale cubed.
    double scale = 0.0;
    for (const auto& [a, b] : kLocalEdges)
      scale = std::max(scale, norm(mesh.vertices[t[a]] - mesh.vertices[t[b]]));
    if (std::abs(det) <= 1e-14 * scale * scale * scale)
      throw InvalidArgument("degenerate (zero-volume) tet " + std::to_string(k));
    if (det < 0) std::swap(t[2], t[3]);
  }
  return mesh;
}

Mesh generate_structured_cube(std::size_t n) {
  if (n == 0) throw InvalidArgument("structured cube needs n >= 1");
  const std::size_t m = n + 1;
  const double step = 1.0 / static_cast<double>(n);
  auto vid = [m](std::size_t i, std::size_t j, std::size_t k) { return i + m * (j + m * k); };

  std::vector<Vec3> vertices;
  vertices.reserve(m * m * m);
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t i = 0; i < m; ++i)
        vertices.push_back({static_cast<double>(i) * step, static_cast<double>(j) * step,
                            static_cast<double>(k) * step});

  // Each permutation of the axes gives one monotone path 000 -> 111.
  static constexpr std::array<std::array<int, 3>, 6> kPerms{
      {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};

  std::vector<Tet> tets;
  tets.reserve(6 * n * n * n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i)
        for (const auto& perm : kPerms) {
          std::array<std::size_t, 3> c{i, j, k};
          Tet t{};
          t[0] = vid(c[0], c[1], c[2]);
          for (int s = 0; s < 3; ++s) {
            ++c[perm[s]];
            t[s + 1] = vid(c[0], c[1], c[2]);
          }
          tets.push_back(t);
        }
  return make_mesh(std::move(vertices), std::move(tets));
}

TetGeometry tet_geometry(const std::array<Vec3, 4>& x) {
  TetGeometry g;
  g.origin = x[0];
  g.jacobian = Mat3::from_columns(x[1] - x[0], x[2] - x[0], x[3] - x[0]);
  g.det = g.jacobian.determinant();
  double scale = 0.0;
  for (const auto& [a, b] : kLocalEdges) scale = std::max(scale, norm(x[a] - x[b]));
  if (!(std::abs(g.det) > 1e-14 * scale * scale * scale))
    throw InvalidArgument("degenerate tet geometry (det J = " + std::to_string(g.det) + ")");
  g.inverse_transpose = g.jacobian.inverse().transposed();
  return g;
}

TetGeometry tet_geometry(const Mesh& mesh, std::size_t tet) {
  if (tet >= mesh.tets.size()) throw InvalidArgument("tet index out of range");
  const Tet& t = mesh.tets[tet];
  return tet_geometry({mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]],
                       mesh.vertices[t[3]]});
}

Topology build_topology(const Mesh& mesh) {
  Topology topo;
  const std::size_t nt = mesh.tets.size();

  std::map<std::array<std::size_t, 2>, std::size_t> edge_index;
  std::map<std::array<std::size_t, 3>, std::size_t> face_index;
  for (const Tet& t : mesh.tets) {
    for (const auto& [a, b] : kLocalEdges)
      edge_index.emplace(std::array{std::min(t[a], t[b]), std::max(t[a], t[b])}, 0);
    for (const auto& lf : kLocalFaces) {
      std::array<std::size_t, 3> f{t[lf[0]], t[lf[1]], t[lf[2]]};
      std::sort(f.begin(), f.end());
      face_index.emplace(f, 0);
    }
  }
  // Sorted-key numbering keeps the assignment reproducible.
  for (auto& [key, id] : edge_index) {
    id = topo.edges.size();
    topo.edges.push_back(key);
  }
  for (auto& [key, id] : face_index) {
    id = topo.faces.size();
    topo.faces.push_back(key);
  }

  topo.tet_edges.resize(nt);
  topo.tet_edge_signs.resize(nt);
  topo.tet_faces.resize(nt);
  topo.tet_face_signs.resize(nt);
  std::vector<int> face_count(topo.faces.size(), 0);

  for (std::size_t k = 0; k < nt; ++k) {
    const Tet& t = mesh.tets[k];
    for (int le = 0; le < 6; ++le) {
      const std::size_t a = t[kLocalEdges[le][0]];
      const std::size_t b = t[kLocalEdges[le][1]];
      topo.tet_edges[k][le] = edge_index.at({std::min(a, b), std::max(a, b)});
      topo.tet_edge_signs[k][le] = a < b ? 1 : -1;
    }
    for (int lf = 0; lf < 4; ++lf) {
      std::array<std::size_t, 3> f{t[kLocalFaces[lf][0]], t[kLocalFaces[lf][1]],
                                   t[kLocalFaces[lf][2]]};
      std::sort(f.begin(), f.end());
      const std::size_t id = face_index.at(f);
      topo.tet_faces[k][lf] = id;
      if (++face_count[id] > 2)
        throw InvalidArgument("non-manifold face shared by more than two tets");
      const Vec3& xa = mesh.vertices[f[0]];
      const Vec3 normal = cross(mesh.vertices[f[1]] - xa, mesh.vertices[f[2]] - xa);
      const Vec3 outward = xa - mesh.vertices[t[lf]];  // from opposite vertex
      topo.tet_face_signs[k][lf] = dot(normal, outward) > 0 ? 1 : -1;
    }
  }

  topo.boundary_vertex.assign(mesh.vertices.size(), false);
  topo.boundary_edge.assign(topo.edges.size(), false);
  topo.boundary_face.assign(topo.faces.size(), false);
  for (std::size_t f = 0; f < topo.faces.size(); ++f) {
    if (face_count[f] != 1) continue;
    topo.boundary_face[f] = true;
    const auto& [a, b, c] = topo.faces[f];
    topo.boundary_vertex[a] = topo.boundary_vertex[b] = topo.boundary_vertex[c] = true;
    topo.boundary_edge[edge_index.at({a, b})] = true;
    topo.boundary_edge[edge_index.at({b, c})] = true;
    topo.boundary_edge[edge_index.at({a, c})] = true;
  }
  return topo;
}

void write_mesh(const Mesh& mesh, std::ostream& out) {
  out << "tetmesh 1\n" << mesh.vertices.size() << ' ' << mesh.tets.size() << '\n';
  char buf[96];
  for (const Vec3& v : mesh.vertices) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", v.x, v.y, v.z);
    out << buf;
  }
  for (const Tet& t : mesh.tets) out << t[0] << ' ' << t[1] << ' ' << t[2] << ' ' << t[3] << '\n';
}

void write_mesh_file(const Mesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_mesh(mesh, out);
  if (!out) throw IoError("write failed for '" + path + "'");
}

Mesh read_mesh(std::istream& in) {
  // Strip comments, then read as one token stream.
  std::ostringstream clean;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    clean << line << '\n';
  }
  std::istringstream ts(clean.str());
  std::string magic;
  int version = 0;
  if (!(ts >> magic >> version) || magic != "tetmesh")
    throw IoError("mesh file: missing 'tetmesh <version>' header");
  if (version != 1) throw IoError("mesh file: unsupported version " + std::to_string(version));
  std::size_t nv = 0, nt = 0;
  if (!(ts >> nv >> nt)) throw IoError("mesh file: missing '<nv> <nt>' counts");
  std::vector<Vec3> vertices(nv);
  for (std::size_t i = 0; i < nv; ++i)
    if (!(ts >> vertices[i].x >> vertices[i].y >> vertices[i].z))
      throw IoError("mesh file: truncated vertex block at vertex " + std::to_string(i));
  std::vector<Tet> tets(nt);
  for (std::size_t i = 0; i < nt; ++i)
    if (!(ts >> tets[i][0] >> tets[i][1] >> tets[i][2] >> tets[i][3]))
      throw IoError("mesh file: truncated tet block at tet " + std::to_string(i));
  std::string extra;
  if (ts >> extra) throw IoError("mesh file: trailing data '" + extra + "'");
  return make_mesh(std::move(vertices), std::move(tets));
}

Mesh read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open mesh file '" + path + "'");
  return read_mesh(in);
}

}  // namespace kerrfem
