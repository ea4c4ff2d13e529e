#pragma once

// Uniform simplicial meshes of the unit square / unit cube and their face
// topology.  Refinement is "red": every simplex is split into 2^dim children
// through edge midpoints; all vertex coordinates stay dyadic, so vertex
// deduplication uses exact floating-point comparison.

#include <array>
#include <iosfwd>
#include <vector>

#include "pnsdg/tensor.hpp"

namespace pnsdg {

struct Mesh {
  int dim = 2;
  int level = 0;
  std::vector<Vec> vertices;
  std::vector<std::array<int, 4>> cells;  // dim+1 vertex ids per cell
  std::vector<int> parent;                // index of the parent cell (-1 at level 0)

  int n_cells() const { return static_cast<int>(cells.size()); }
  int n_vertices() const { return static_cast<int>(vertices.size()); }
  Vec cell_vertex(int c, int k) const { return vertices[cells[c][k]]; }

  double cell_volume(int c) const;    // unsigned
  double cell_diameter(int c) const;  // longest edge
  Vec cell_centroid(int c) const;
  double max_diameter() const;
  // Nominal mesh size 2^{-level}; equals the max diameter in 2D, and the max
  // diameter divided by sqrt(3) in 3D.
  double h_level() const { return std::ldexp(1.0, -level); }
};

// Four triangles cut along both diagonals of the unit square (5 vertices).
Mesh unit_square_initial();

// Six tetrahedra through the main diagonal of the unit cube; cell 0 is
// conv{0, e1, e1+e2, e1+e2+e3}.
Mesh unit_cube_kuhn();

// One uniform red refinement; children of cell c occupy indices
// 2^dim * c .. 2^dim * c + (2^dim - 1) and record c as parent.
Mesh red_refine(const Mesh& mesh);

// Convenience: refine `level` times from the given initial mesh builder.
Mesh uniform_mesh(int dim, int level);

struct Face {
  std::array<int, 3> verts{-1, -1, -1};  // face_dim+1 vertex ids
  int cell_minus = -1;  // first adjacent cell; the stored normal points out of it
  int cell_plus = -1;   // second adjacent cell, -1 on the boundary
  Vec normal;           // unit; outward from cell_minus (outward from Omega on boundary)
  double measure = 0.0;  // length (2D) or area (3D)
  double diameter = 0.0;  // longest edge of the face
  bool boundary = false;
};

struct FaceTopology {
  std::vector<Face> faces;
  std::vector<std::vector<int>> cell_faces;  // per cell, dim+1 face ids
  int n_interior = 0;
  int n_boundary = 0;
};

FaceTopology build_faces(const Mesh& mesh);

// Plain-text dump: dim / #vertices / coords / #cells / indices.
void dump_mesh(const Mesh& mesh, std::ostream& os);

}  // namespace pnsdg
