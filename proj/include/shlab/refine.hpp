#pragma once

#include <vector>

#include "shlab/models.hpp"
#include "shlab/report.hpp"

namespace shlab {

// Three error studies on base, 2x, 4x, ... refined grids (refinements + 1
// grids): scalar curvature against the closed form, the discrete residual of
// the closed-form solution (Kottler: r, PpWave: ppwave_u), and the bulk
// quadrature of |grad u| against adaptive 1D quadrature. Needs a radial model
// without excisions; the residual study is skipped for models without a
// closed-form solution.
std::vector<RefinementRow> refinement_study(const ModelSpec& model, const Grid& base, int refinements);

// Dyadic refinement: radial intervals and angular counts doubled.
Grid refine_grid(const Grid& g);

}  // namespace shlab
