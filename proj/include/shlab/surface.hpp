#pragma once

#include <array>
#include <memory>
#include <vector>

#include "shlab/data.hpp"
#include "shlab/field.hpp"
#include "shlab/geometry.hpp"

namespace shlab {

// A mesh vertex sits on a grid edge: position = (1 - s) node a + s node b.
struct EdgeVertex {
    std::size_t a = 0, b = 0;
    double s = 0;
};

struct TriMesh {
    std::vector<Vec3> pos;         // coordinates (r, xi, theta) or (x, y, z)
    std::vector<EdgeVertex> src;   // empty for meshes not tied to a grid
    std::vector<std::array<int, 3>> tri;
};

struct SurfacePiece {
    TriMesh mesh;
    long V = 0, E = 0, F = 0;
    bool closed = true;
};

struct LevelSurface {
    double t = 0;
    bool coordinate_torus = false;  // Radial1D: the torus r = r_star
    double r_star = 0;
    std::vector<SurfacePiece> pieces;
    bool regular = true;
    std::shared_ptr<const ScalarField> source;  // field whose level set this is
};

enum class NormalOrientation { TowardInfinity, Outer, Inner };

struct SurfaceGeometry {
    std::vector<double> H, tr_k, theta_plus, theta_minus;
    std::vector<Sym3> II, chi_plus, chi_minus;  // tangential coordinate components
    std::vector<double> chi_plus_norm, chi_minus_norm;
    std::vector<double> dA;  // area carried by each sample
    double area = 0;
};

// Pointwise surface quantities; all tensors are tangential.
struct SurfacePoint {
    double H = 0, tr_k = 0;
    Sym3 II, k_t;
    double chi_plus_norm = 0, chi_minus_norm = 0;
    double area_density = 0;  // coordinate surfaces only
};

// Coordinate surface {x^axis = const} with unit normal along +x^axis
// (sign = +1) or -x^axis (sign = -1).
SurfacePoint coordinate_surface_point(const PointGeometry& pg, const Sym3& g, const Sym3& k, int axis,
                                      int sign);

// Level set of u through a point with normal sign * grad u / |grad u|.
SurfacePoint level_set_point(const PointGeometry& pg, const Sym3& k, const Jet& uj, int sign);

SurfaceGeometry surface_geometry(const InitialDataSet& data, const LevelSurface& surface,
                                 NormalOrientation orientation);

// Induced-metric area of a triangle with coordinate vertices p0, p1, p2 under
// the (constant) metric g; periodic differences use the minimal image.
double triangle_area(const Grid* grid, const Sym3& g, const Vec3& p0, const Vec3& p1, const Vec3& p2);

}  // namespace shlab
