#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "shlab/data.hpp"
#include "shlab/geometry.hpp"

namespace shlab {

enum class ModelKind { Kottler, PpWave, WarpedProduct, PerturbedKottler };

// Warped products dt^2 + f(t)^2 ghat written in the chart r = e^t.
enum class WarpProfile {
    Exponential,  // f = e^{kappa t}
    MinimalNeck,  // f = e^t (1 + e^{-3t})^{2/3}: minimal torus at t = 0
};
enum class LambdaProfile {
    Unit,           // k = -g
    LogDerivative,  // k = -(d log f / dt) g
};

struct Perturbation {
    double amplitude = 0.0;  // epsilon
    double decay = 4.0;      // q >= 3
    std::vector<std::pair<int, int>> modes{{0, 0}};
};

struct ModelSpec {
    ModelKind kind = ModelKind::Kottler;
    double r0 = 1.0;
    double period_xi = 1.0, period_theta = 1.0;
    WarpProfile warp = WarpProfile::Exponential;
    double warp_rate = 1.0;  // kappa for the exponential profile
    LambdaProfile lambda = LambdaProfile::Unit;
    std::optional<Perturbation> perturbation;
};

// Constant tensors on T^2 in (xi, theta) components: {xixi, xitheta, thetatheta}.
struct AsymptoticTensors {
    std::array<double, 3> m{}, p{};
    double tr_m = 0, tr_p = 0;
    double mass_aspect = 0;
    bool weakened_radial_decay = false;
};

void validate(const ModelSpec& spec);

InitialDataSet build_model(const ModelSpec& spec, const Grid& grid);
AsymptoticTensors analytic_asymptotics(const ModelSpec& spec);

struct PpWaveValue {
    double u = 0;
    double du = 0;
};
PpWaveValue ppwave_u(double r, double r0);
double ppwave_rho(double r);
double ppwave_drho_dr(double r);

// Radial coordinate in which the model takes the asymptotic form
// r^-2 dr^2 + r^2 ghat + r^-1 m + ... (rho for the pp-wave, r otherwise).
double asymptotic_radius(const ModelSpec& spec, double r);
double asymptotic_radius_derivative(const ModelSpec& spec, double r);

// Outer Dirichlet value for a solve anchored at u = 0 on the inner torus:
// the asymptotic radius of the truncation torus minus that of the inner torus.
double truncation_value(const ModelSpec& spec, double r_min, double r_max);

// True when the model depends on r only with diagonal g and k.
bool is_radial(const ModelSpec& spec);

// Exact jet of (g, k) at radius r for radial models (closed-form derivatives).
MetricJet analytic_jet(const ModelSpec& spec, double r);

// Angular profile sum of cos(2 pi (a xi / P_xi + b theta / P_theta)).
double perturbation_profile(const ModelSpec& spec, double xi, double theta);

}  // namespace shlab
