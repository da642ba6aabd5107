#include "shlab/models.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <string>

#include "shlab/dual.hpp"
#include "shlab/errors.hpp"

namespace shlab {

namespace {

using std::pow;
using std::sqrt;

int constant_modes(const Perturbation& p) {
    int n = 0;
    for (const auto& [a, b] : p.modes)
        if (a == 0 && b == 0) ++n;
    return n;
}

// Diagonal components (rr, xixi, thetatheta) of g and k at radius r; c is
// the angular perturbation profile at the sample.
template <class T>
void components(const ModelSpec& s, const T& r, double c, T g[3], T k[3]) {
    switch (s.kind) {
        case ModelKind::Kottler: {
            g[0] = pow(r, -2.0);
            g[1] = r * r;
            g[2] = r * r;
            for (int a = 0; a < 3; ++a) k[a] = -g[a];
            return;
        }
        case ModelKind::PpWave: {
            const T A = T(1.0) - pow(r, -3.0);
            const T sA = sqrt(A);
            g[0] = pow(r, -2.0) / A;
            g[1] = r * r * A;
            g[2] = r * r;
            k[0] = -(pow(r, -2.0) / sA);
            k[1] = -(r * r * sA * (T(1.0) + T(0.5) * pow(r, -3.0)));
            k[2] = -(r * r * sA);
            return;
        }
        case ModelKind::WarpedProduct: {
            T f2, lam;
            if (s.warp == WarpProfile::Exponential) {
                f2 = pow(r, 2.0 * s.warp_rate);
                lam = T(s.warp_rate);
            } else {
                const T x = pow(r, -3.0);
                f2 = r * r * pow(T(1.0) + x, 4.0 / 3.0);
                lam = (T(1.0) - x) / (T(1.0) + x);
            }
            g[0] = pow(r, -2.0);
            g[1] = f2;
            g[2] = f2;
            const T scale = s.lambda == LambdaProfile::Unit ? T(1.0) : lam;
            for (int a = 0; a < 3; ++a) k[a] = -(scale * g[a]);
            return;
        }
        case ModelKind::PerturbedKottler: {
            const auto& p = *s.perturbation;
            const T bump = T(1.0) + T(p.amplitude * c) * pow(r, -p.decay);
            g[0] = pow(r, -2.0);
            g[1] = r * r * bump;
            g[2] = r * r * bump;
            for (int a = 0; a < 3; ++a) k[a] = -g[a];
            return;
        }
    }
}

}  // namespace

double perturbation_profile(const ModelSpec& s, double xi, double theta) {
    if (!s.perturbation) return 0.0;
    double c = 0;
    for (const auto& [a, b] : s.perturbation->modes)
        c += std::cos(2 * std::numbers::pi * (a * xi / s.period_xi + b * theta / s.period_theta));
    return c;
}

bool is_radial(const ModelSpec& s) {
    if (s.kind != ModelKind::PerturbedKottler) return true;
    for (const auto& [a, b] : s.perturbation->modes)
        if (a != 0 || b != 0) return false;
    return true;
}

void validate(const ModelSpec& s) {
    if (!(s.period_xi > 0) || !(s.period_theta > 0)) throw InvalidSpec("model periods must be positive");
    if (s.kind == ModelKind::PpWave && !(s.r0 > 1.0)) throw InvalidSpec("PpWave requires r0 > 1");
    if (!(s.r0 >= 1.0)) throw InvalidSpec("model.r0 must be >= 1");
    if (s.kind == ModelKind::WarpedProduct && !(s.warp_rate > 0)) throw InvalidSpec("warp rate must be positive");
    if (s.kind == ModelKind::PerturbedKottler) {
        if (!s.perturbation) throw InvalidSpec("PerturbedKottler requires a perturbation block");
        const auto& p = *s.perturbation;
        if (!(p.decay >= 3.0)) throw InvalidSpec("perturbation decay exponent q must be >= 3");
        if (p.modes.empty()) throw InvalidSpec("perturbation needs at least one mode");
        // sup |profile| <= number of modes; r^-q <= r0^-q
        if (!(std::abs(p.amplitude) * double(p.modes.size()) * std::pow(s.r0, -p.decay) < 1.0))
            throw InvalidSpec("perturbation amplitude too large: metric would degenerate");
    }
}

InitialDataSet build_model(const ModelSpec& s, const Grid& grid) {
    validate(s);
    grid.validate();
    if (grid.r_min < s.r0 - 1e-12) throw InvalidSpec("grid.r_min lies below model.r0");
    if (!is_radial(s) && !grid.is3d()) throw InvalidSpec("angular perturbation modes need the Torus3D backend");
    Grid G = grid;
    G.period_xi = s.period_xi;
    G.period_theta = s.period_theta;
    auto gs = [&](double r, double xi, double th) {
        double g[3], k[3];
        components<double>(s, r, perturbation_profile(s, xi, th), g, k);
        return Sym3::diag(g[0], g[1], g[2]);
    };
    auto ks = [&](double r, double xi, double th) {
        double g[3], k[3];
        components<double>(s, r, perturbation_profile(s, xi, th), g, k);
        return Sym3::diag(k[0], k[1], k[2]);
    };
    InitialDataSet d = sample_data(G, gs, ks);
    static const char* tags[] = {"Kottler", "PpWave", "WarpedProduct", "PerturbedKottler"};
    d.analytic_source = tags[int(s.kind)];
    if (s.kind == ModelKind::PpWave) d.weakened_radial_decay = true;
    if (s.kind == ModelKind::WarpedProduct && s.warp == WarpProfile::MinimalNeck &&
        s.lambda == LambdaProfile::LogDerivative)
        d.weakened_radial_decay = true;
    return d;
}

AsymptoticTensors analytic_asymptotics(const ModelSpec& s) {
    validate(s);
    AsymptoticTensors a;
    switch (s.kind) {
        case ModelKind::Kottler:
            break;
        case ModelKind::PpWave:
            a.m = {-2.0 / 3.0, 0.0, 1.0 / 3.0};
            a.p = {-1.0, 0.0, 0.5};
            a.weakened_radial_decay = true;
            break;
        case ModelKind::WarpedProduct:
            if (s.warp == WarpProfile::Exponential) {
                if (s.warp_rate != 1.0)
                    throw NoExpansionKnown("warped product with f = e^{kappa t}, kappa != 1, is not asymptotic to b");
            } else {
                a.m = {4.0 / 3.0, 0.0, 4.0 / 3.0};
                if (s.lambda == LambdaProfile::LogDerivative) {
                    a.p = {2.0, 0.0, 2.0};
                    a.weakened_radial_decay = true;
                }
            }
            break;
        case ModelKind::PerturbedKottler: {
            const auto& p = *s.perturbation;
            if (p.decay == 3.0) {
                // Torus average of the mass aspect; only constant modes survive.
                const double e = p.amplitude * constant_modes(p);
                a.m = {e, 0.0, e};
            }
            break;
        }
    }
    a.tr_m = a.m[0] + a.m[2];
    a.tr_p = a.p[0] + a.p[2];
    a.mass_aspect = 3.0 * a.tr_m - 2.0 * a.tr_p;
    return a;
}

PpWaveValue ppwave_u(double r, double r0) {
    if (!(r0 > 1.0)) throw DomainError("ppwave_u requires r0 > 1");
    if (r < r0) throw DomainError("ppwave_u: r below r0");
    auto f = [](double s) { return 1.0 / std::sqrt(1.0 - 1.0 / (s * s * s)); };
    PpWaveValue out;
    out.du = f(r);
    if (r == r0) return out;
    double err = 0;
    out.u = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, r0, r, 15, 1e-12, &err);
    if (err > 1e-10) throw DomainError("ppwave_u quadrature did not reach 1e-10");
    return out;
}

namespace {

template <class T>
T rho_of(const T& r) {
    const T x = pow(r, -3.0);
    // 1 - sqrt(1 - x) written without cancellation
    const T gap = x / (T(1.0) + sqrt(T(1.0) - x));
    return T(std::pow(4.0, -1.0 / 3.0)) * pow(r, -1.0) * pow(gap, -2.0 / 3.0);
}

}  // namespace

double ppwave_rho(double r) {
    if (!(r > 1.0)) throw DomainError("ppwave_rho requires r > 1");
    return rho_of(r);
}

double ppwave_drho_dr(double r) {
    if (!(r > 1.0)) throw DomainError("ppwave_rho requires r > 1");
    return rho_of(Dual2::variable(r)).d;
}

double asymptotic_radius(const ModelSpec& s, double r) {
    return s.kind == ModelKind::PpWave ? ppwave_rho(r) : r;
}

double asymptotic_radius_derivative(const ModelSpec& s, double r) {
    return s.kind == ModelKind::PpWave ? ppwave_drho_dr(r) : 1.0;
}

double truncation_value(const ModelSpec& s, double r_min, double r_max) {
    return asymptotic_radius(s, r_max) - asymptotic_radius(s, r_min);
}

MetricJet analytic_jet(const ModelSpec& s, double r) {
    if (!is_radial(s)) throw InvalidSpec("analytic_jet needs a radial model");
    Dual2 g[3], k[3];
    const double c = s.perturbation ? constant_modes(*s.perturbation) : 0.0;
    components<Dual2>(s, Dual2::variable(r), c, g, k);
    MetricJet J;
    J.g = Sym3::diag(g[0].v, g[1].v, g[2].v);
    J.k = Sym3::diag(k[0].v, k[1].v, k[2].v);
    J.dg[0] = Sym3::diag(g[0].d, g[1].d, g[2].d);
    J.dk[0] = Sym3::diag(k[0].d, k[1].d, k[2].d);
    J.ddg[0][0] = Sym3::diag(g[0].dd, g[1].dd, g[2].dd);
    return J;
}

}  // namespace shlab
