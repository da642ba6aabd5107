#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "shlab/surface.hpp"

namespace shlab {

// Uniform lattice of samples, index (i * n[1] + j) * n[2] + l. Periodic
// axes wrap; position along an axis is origin + index * spacing, reduced
// modulo n * spacing on periodic axes.
struct Lattice {
    std::array<int, 3> n{};
    std::array<bool, 3> periodic{};
    Vec3 origin{};
    Vec3 spacing{1, 1, 1};

    std::size_t size() const { return std::size_t(n[0]) * n[1] * n[2]; }
    std::size_t index(int i, int j, int l) const { return (std::size_t(i) * n[1] + j) * n[2] + l; }
};

Lattice lattice_of(const Grid& g);

// Isosurface {f = t} by marching tetrahedra on the Freudenthal split of each
// cube. Vertices sit on lattice edges and are shared by adjacent cells;
// triangles are oriented with normals toward increasing f. A sample equal
// to t counts as below the level.
TriMesh march_tetrahedra(const Lattice& L, const std::vector<double>& f, double t);

// Connected pieces (by shared vertices) with V, E, F and a closedness flag:
// closed means every edge borders exactly two triangles.
std::vector<SurfacePiece> split_pieces(const TriMesh& mesh);

// V - E + F per piece; throws OpenMesh if a piece is not closed.
std::vector<long> euler_characteristic(const std::vector<SurfacePiece>& pieces);
long euler_characteristic(const TriMesh& mesh);

}  // namespace shlab
