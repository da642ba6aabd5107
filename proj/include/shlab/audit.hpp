#pragma once

#include <vector>

#include "shlab/models.hpp"

namespace shlab {

struct RhoChartSample {
    double rho = 0, r = 0;
    // Largest orthonormal-frame deviation from the closed form in rho.
    double closed_form_dev = 0;
    // rho^3 times the orthonormal-frame size of g - (rho^-2 drho^2 + rho^2 ghat + m / rho).
    double scaled_remainder = 0;
};

struct PpWaveAuditResult {
    double hessian_max = 0;  // sup |Hess u + |grad u| k|_g with closed-form derivatives
    double mu_max = 0, J_max = 0;
    double hessian_r = 0;    // where the sup was attained
    std::vector<double> radii;
    AsymptoticTensors asym;
    double energy = 0;       // torus average of the mass aspect
    std::vector<RhoChartSample> rho_chart;
};

// Closed-form checks of the pp-wave slice on `samples` radii in [r0, r_max]
// and the rho-chart expansion at the given rho values.
PpWaveAuditResult ppwave_audit(const ModelSpec& model, double r_max, int samples,
                               const std::vector<double>& rho_values);

}  // namespace shlab
