#include "pnsdg/mesh.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <stdexcept>

namespace pnsdg {

double Mesh::cell_volume(int c) const {
  if (dim == 2) {
    const Vec a = cell_vertex(c, 0), b = cell_vertex(c, 1), d = cell_vertex(c, 2);
    return 0.5 * std::abs((b[0] - a[0]) * (d[1] - a[1]) - (d[0] - a[0]) * (b[1] - a[1]));
  }
  const Vec a = cell_vertex(c, 0);
  const Vec u = cell_vertex(c, 1) - a, v = cell_vertex(c, 2) - a, w = cell_vertex(c, 3) - a;
  return std::abs(dot(u, cross(v, w))) / 6.0;
}

double Mesh::cell_diameter(int c) const {
  double d = 0.0;
  for (int i = 0; i <= dim; ++i)
    for (int j = i + 1; j <= dim; ++j) d = std::max(d, norm(cell_vertex(c, i) - cell_vertex(c, j)));
  return d;
}

Vec Mesh::cell_centroid(int c) const {
  Vec g(dim);
  for (int i = 0; i <= dim; ++i) g += cell_vertex(c, i);
  return g * (1.0 / (dim + 1));
}

double Mesh::max_diameter() const {
  double d = 0.0;
  for (int c = 0; c < n_cells(); ++c) d = std::max(d, cell_diameter(c));
  return d;
}

Mesh unit_square_initial() {
  Mesh m;
  m.dim = 2;
  m.level = 0;
  m.vertices = {Vec(0.0, 0.0), Vec(1.0, 0.0), Vec(1.0, 1.0), Vec(0.0, 1.0), Vec(0.5, 0.5)};
  m.cells = {{0, 1, 4, -1}, {1, 2, 4, -1}, {2, 3, 4, -1}, {3, 0, 4, -1}};
  m.parent.assign(4, -1);
  return m;
}

Mesh unit_cube_kuhn() {
  Mesh m;
  m.dim = 3;
  m.level = 0;
  for (int z = 0; z < 2; ++z)
    for (int y = 0; y < 2; ++y)
      for (int x = 0; x < 2; ++x) m.vertices.push_back(Vec((double)x, (double)y, (double)z));
  auto corner = [](int x, int y, int z) { return x + 2 * y + 4 * z; };
  // One tetrahedron per monotone lattice path 0 -> (1,1,1); the first
  // permutation gives conv{0, e1, e1+e2, e1+e2+e3}.
  const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  for (auto& pm : perms) {
    int coords[3] = {0, 0, 0};
    std::array<int, 4> cell{};
    cell[0] = corner(0, 0, 0);
    for (int s = 0; s < 3; ++s) {
      coords[pm[s]] = 1;
      cell[s + 1] = corner(coords[0], coords[1], coords[2]);
    }
    m.cells.push_back(cell);
  }
  m.parent.assign(6, -1);
  return m;
}

namespace {

struct VertexKey {
  std::array<double, 3> c;
  bool operator<(const VertexKey& o) const { return c < o.c; }
};

}  // namespace

Mesh red_refine(const Mesh& mesh) {
  Mesh f;
  f.dim = mesh.dim;
  f.level = mesh.level + 1;
  f.vertices = mesh.vertices;

  std::map<VertexKey, int> index;
  for (int v = 0; v < mesh.n_vertices(); ++v)
    index[{{mesh.vertices[v][0], mesh.vertices[v][1], mesh.vertices[v][2]}}] = v;

  // Midpoints of dyadic coordinates are exact in binary floating point, so the
  // key lookup deduplicates shared edge midpoints exactly.
  auto midpoint = [&](int a, int b) {
    Vec m = 0.5 * (mesh.vertices[a] + mesh.vertices[b]);
    m.dim = mesh.dim;
    const VertexKey key{{m[0], m[1], m[2]}};
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    const int id = f.n_vertices();
    f.vertices.push_back(m);
    index.emplace(key, id);
    return id;
  };

  for (int c = 0; c < mesh.n_cells(); ++c) {
    const auto& K = mesh.cells[c];
    if (mesh.dim == 2) {
      const int v0 = K[0], v1 = K[1], v2 = K[2];
      const int m01 = midpoint(v0, v1), m12 = midpoint(v1, v2), m02 = midpoint(v0, v2);
      const std::array<int, 4> kids[4] = {
          {v0, m01, m02, -1}, {m01, v1, m12, -1}, {m02, m12, v2, -1}, {m01, m12, m02, -1}};
      for (auto& kid : kids) {
        f.cells.push_back(kid);
        f.parent.push_back(c);
      }
    } else {
      const int v0 = K[0], v1 = K[1], v2 = K[2], v3 = K[3];
      const int m01 = midpoint(v0, v1), m02 = midpoint(v0, v2), m03 = midpoint(v0, v3);
      const int m12 = midpoint(v1, v2), m13 = midpoint(v1, v3), m23 = midpoint(v2, v3);
      // Four corner children plus the octahedron cut along the m02-m13
      // diagonal, which keeps the refinement of a Kuhn mesh Kuhn-structured.
      const std::array<int, 4> kids[8] = {
          {v0, m01, m02, m03},  {m01, v1, m12, m13},  {m02, m12, v2, m23},  {m03, m13, m23, v3},
          {m01, m02, m03, m13}, {m01, m02, m12, m13}, {m02, m03, m13, m23}, {m02, m12, m13, m23}};
      for (auto& kid : kids) {
        f.cells.push_back(kid);
        f.parent.push_back(c);
      }
    }
  }
  return f;
}

Mesh uniform_mesh(int dim, int level) {
  Mesh m = (dim == 2) ? unit_square_initial() : unit_cube_kuhn();
  for (int i = 0; i < level; ++i) m = red_refine(m);
  return m;
}

FaceTopology build_faces(const Mesh& mesh) {
  FaceTopology topo;
  const int d = mesh.dim;
  topo.cell_faces.assign(mesh.n_cells(), std::vector<int>(d + 1, -1));

  std::map<std::array<int, 3>, int> lookup;  // sorted vertex ids -> face index
  for (int c = 0; c < mesh.n_cells(); ++c) {
    for (int lf = 0; lf <= d; ++lf) {
      // Local face lf consists of all cell vertices except the lf-th.
      std::array<int, 3> fv{-1, -1, -1};
      int n = 0;
      for (int k = 0; k <= d; ++k)
        if (k != lf) fv[n++] = mesh.cells[c][k];
      std::array<int, 3> key = fv;
      std::sort(key.begin(), key.begin() + d);
      if (d == 2) key[2] = -1;

      auto it = lookup.find(key);
      if (it == lookup.end()) {
        Face face;
        face.verts = fv;
        face.cell_minus = c;
        lookup.emplace(key, static_cast<int>(topo.faces.size()));
        topo.cell_faces[c][lf] = static_cast<int>(topo.faces.size());
        topo.faces.push_back(face);
      } else {
        Face& face = topo.faces[it->second];
        if (face.cell_plus != -1) throw std::runtime_error("build_faces: face shared by >2 cells");
        face.cell_plus = c;
        topo.cell_faces[c][lf] = it->second;
      }
    }
  }

  for (Face& face : topo.faces) {
    const Vec a = mesh.vertices[face.verts[0]];
    const Vec b = mesh.vertices[face.verts[1]];
    if (d == 2) {
      const Vec t = b - a;
      face.measure = norm(t);
      face.diameter = face.measure;
      face.normal = Vec(t[1] / face.measure, -t[0] / face.measure);
    } else {
      const Vec c = mesh.vertices[face.verts[2]];
      const Vec n = cross(b - a, c - a);
      const double nn = norm(n);
      face.measure = 0.5 * nn;
      face.normal = (1.0 / nn) * n;
      face.normal.dim = 3;
      face.diameter = std::max({norm(b - a), norm(c - a), norm(c - b)});
    }
    face.boundary = (face.cell_plus == -1);

    // Orient the normal out of cell_minus.
    Vec fc(d);
    for (int k = 0; k < d; ++k) fc += mesh.vertices[face.verts[k]];
    fc *= 1.0 / d;
    const Vec out = fc - mesh.cell_centroid(face.cell_minus);
    if (dot(out, face.normal) < 0.0) face.normal *= -1.0;

    if (face.boundary)
      ++topo.n_boundary;
    else
      ++topo.n_interior;
  }
  return topo;
}

void dump_mesh(const Mesh& mesh, std::ostream& os) {
  os << mesh.dim << "\n" << mesh.n_vertices() << "\n";
  for (const Vec& v : mesh.vertices) {
    for (int i = 0; i < mesh.dim; ++i) os << (i ? " " : "") << v[i];
    os << "\n";
  }
  os << mesh.n_cells() << "\n";
  for (const auto& c : mesh.cells) {
    for (int k = 0; k <= mesh.dim; ++k) os << (k ? " " : "") << c[k];
    os << "\n";
  }
}

}  // namespace pnsdg
