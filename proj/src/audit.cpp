#include "shlab/audit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include <boost/math/tools/roots.hpp>

#include "shlab/energy.hpp"
#include "shlab/errors.hpp"

namespace shlab {

namespace {

double r_of_rho(double rho) {
    auto f = [rho](double r) { return ppwave_rho(r) - rho; };
    std::uintmax_t it = 200;
    const auto tol = boost::math::tools::eps_tolerance<double>(52);
    const auto [a, b] = boost::math::tools::toms748_solve(f, 1.0 + 1e-9, 4.0 * rho + 4.0, tol, it);
    return 0.5 * (a + b);
}

}  // namespace

PpWaveAuditResult ppwave_audit(const ModelSpec& model, double r_max, int samples,
                               const std::vector<double>& rho_values) {
    if (model.kind != ModelKind::PpWave) throw InvalidSpec("ppwave_audit needs the PpWave model");
    if (samples < 2 || !(r_max > model.r0)) throw InvalidSpec("ppwave_audit: bad sampling range");
    PpWaveAuditResult A;
    for (int s = 0; s < samples; ++s) {
        const double r = model.r0 * std::pow(r_max / model.r0, double(s) / (samples - 1));
        A.radii.push_back(r);
        const MetricJet J = analytic_jet(model, r);
        const PointGeometry pg = evaluate_point(J);
        const double q = 1.0 - std::pow(r, -3);
        const double du = 1.0 / std::sqrt(q);
        const double ddu = -1.5 * std::pow(r, -4) / (q * std::sqrt(q));
        const double grad = std::sqrt(pg.ginv(0, 0)) * du;
        Sym3 S;
        for (int a = 0; a < 3; ++a)
            for (int b = a; b < 3; ++b)
                S(a, b) = (a == 0 && b == 0 ? ddu : 0.0) - pg.gamma[0](a, b) * du + J.k(a, b) * grad;
        const double h = std::sqrt(norm2(pg.ginv, S));
        if (h > A.hessian_max) {
            A.hessian_max = h;
            A.hessian_r = r;
        }
        A.mu_max = std::max(A.mu_max, std::abs(pg.mu));
        A.J_max = std::max(A.J_max, pg.J_norm);
    }
    A.asym = analytic_asymptotics(model);
    A.energy = energy_from_mass_aspect(A.asym, model.period_xi, model.period_theta);

    for (double rho : rho_values) {
        RhoChartSample c;
        c.rho = rho;
        c.r = r_of_rho(rho);
        const MetricJet J = analytic_jet(model, c.r);
        const double drho = ppwave_drho_dr(c.r);
        const double g_rho = J.g(0, 0) / (drho * drho);
        const double x = 0.25 * std::pow(rho, -3);
        const double conf = rho * rho * std::pow(1 + x, 4.0 / 3.0);
        const double cf_xi = conf * std::pow((1 - x) / (1 + x), 2);
        const double cf_th = conf;
        const double w_rr = rho * rho, w_t = 1.0 / (rho * rho);  // orthonormal-frame weights
        c.closed_form_dev = std::max({w_rr * std::abs(g_rho - 1.0 / (rho * rho)), w_t * std::abs(J.g(1, 1) - cf_xi),
                                      w_t * std::abs(J.g(2, 2) - cf_th)});
        const double rem = std::max({w_rr * std::abs(g_rho - 1.0 / (rho * rho)),
                                     w_t * std::abs(J.g(1, 1) - rho * rho - A.asym.m[0] / rho),
                                     w_t * std::abs(J.g(2, 2) - rho * rho - A.asym.m[2] / rho)});
        c.scaled_remainder = rho * rho * rho * rem;
        A.rho_chart.push_back(c);
    }
    return A;
}

}  // namespace shlab
