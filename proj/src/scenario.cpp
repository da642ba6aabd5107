#include "shlab/scenario.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "shlab/audit.hpp"
#include "shlab/barriers.hpp"
#include "shlab/energy.hpp"
#include "shlab/errors.hpp"
#include "shlab/identity.hpp"
#include "shlab/refine.hpp"
#include "shlab/rigidity.hpp"

namespace shlab {

namespace {

Json solution_json(const SpacetimeHarmonicSolution& s) {
    const Grid& G = *s.u.grid;
    Json j;
    j["picard_iterations"] = s.picard_iters;
    j["linear_iterations"] = s.linear_iters;
    j["residual_norm"] = s.residual_norm;
    j["grad_floor"] = s.grad_floor;
    Json bv = Json::object();
    for (const auto& [id, v] : s.boundary_values) bv[std::to_string(id)] = v;
    j["boundary_values"] = bv;
    Json nd = Json::object();
    for (const auto& [id, f] : s.normal_derivatives) {
        Json c;
        c["min_d_upsilon"] = f.min_upsilon();
        int i, jx, l;
        G.unpack(f.argmin_upsilon().node, i, jx, l);
        c["argmin_d_upsilon"] = {{"r", G.r(i)}, {"xi", G.xi(jx)}, {"theta", G.theta(l)}, {"face_axis", f.argmin_upsilon().axis}};
        c["max_d_upsilon"] = f.max_upsilon();
        c["min_n_u"] = f.min_n();
        c["max_n_u"] = f.max_n();
        nd[std::to_string(id)] = c;
    }
    j["normal_derivatives"] = nd;
    return j;
}

Json grid_json(const Grid& g) {
    Json j;
    j["backend"] = g.is3d() ? "Torus3D" : "Radial1D";
    j["r_min"] = g.r_min;
    j["r_max"] = g.r_max;
    j["n_r"] = g.n_r;
    j["n_xi"] = g.nxi();
    j["n_theta"] = g.nth();
    j["h"] = g.spacing();
    j["components"] = g.component_count();
    return j;
}

class Runner {
public:
    Runner(const ScenarioConfig& c, const RunOptions& o) : cfg(c), opt(o) {
        out.output_dir = o.output_dir.value_or(c.output_dir);
        tol = c.tolerance * o.tolerance_scale;
    }

    RunResult run() {
        std::filesystem::create_directories(out.output_dir);
        const auto t0 = std::chrono::steady_clock::now();
        Json results;
        switch (cfg.pipeline) {
            case Pipeline::Solve: results = solve(); break;
            case Pipeline::Tune: results = tune(); break;
            case Pipeline::VerifyIdentity: results = identity(); break;
            case Pipeline::Energy: results = energy(); break;
            case Pipeline::Penrose: results = penrose(); break;
            case Pipeline::Barriers: results = barriers(); break;
            case Pipeline::Rigidity: results = rigidity(); break;
            case Pipeline::PpWaveAudit: results = audit(); break;
            case Pipeline::Refine: results = refine(); break;
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

        Json report;
        report["schema_version"] = kSchemaVersion;
        report["pipeline"] = pipeline_name(cfg.pipeline);
        report["config"] = cfg.echo;
        report["tolerance_scale"] = opt.tolerance_scale;
        report["grid"] = grid_json(cfg.grid);
        report["results"] = results;
        Json checks = Json::array();
        for (const auto& c : out.checks) {
            checks.push_back(to_json(c));
            out.all_pass = out.all_pass && c.pass;
        }
        report["checks"] = checks;
        report["pass"] = out.all_pass;
        std::vector<std::string> csv;
        for (const auto& f : out.files)
            if (f.ends_with(".csv")) csv.push_back(f);
        write_plot_script(out.output_dir, csv);
        out.files.push_back("plot.py");
        out.files.push_back("report.json");
        Json files = Json::array();
        for (const auto& f : out.files) files.push_back(f);
        report["files"] = files;
        write_json(out.output_dir / "report.json", report);
        // Wall-clock data lives apart from the report so the report stays reproducible.
        Json timing;
        timing["seconds"] = seconds;
        timing["threads"] = opt.threads;
        write_json(out.output_dir / "timing.json", timing);
        out.report = std::move(report);
        return std::move(out);
    }

private:
    const ScenarioConfig& cfg;
    const RunOptions& opt;
    RunResult out;
    double tol = 0;
    std::optional<InitialDataSet> data_;

    const InitialDataSet& data() {
        if (!data_) data_ = build_model(cfg.model, cfg.grid);
        return *data_;
    }
    void check(Check c) { out.checks.push_back(std::move(c)); }
    void file(const std::string& name) { out.files.push_back(name); }
    std::filesystem::path path(const std::string& name) const { return out.output_dir / name; }

    FluxParams flux_params() const { return FluxParams{cfg.tuner}; }

    // Boundary values anchored at 0 on the inner torus and the truncation
    // value outside; boxes are tuned when present.
    SpacetimeHarmonicSolution anchored_solution(Json& results) {
        const auto& d = data();
        if (cfg.grid.excisions.empty()) {
            return solve_dirichlet(
                d, {{kInnerTorus, 0.0}, {kOuterTorus, truncation_value(cfg.model, cfg.grid.r_min, cfg.grid.r_max)}},
                cfg.solver);
        }
        TunerReport t = tune_boundary_constants(d, cfg.tuner);
        results["tuned_boxes"] = t.fixed_point;
        return std::move(t.solution);
    }

    void profile(const InitialDataSet& d, const ScalarField& u) {
        write_profile_csv(path("profile.csv"), d, u);
        file("profile.csv");
    }

    Json solve() {
        Json r;
        BoundaryValues v{{kInnerTorus, 0.0},
                         {kOuterTorus, truncation_value(cfg.model, cfg.grid.r_min, cfg.grid.r_max)}};
        for (const auto& [id, x] : cfg.boundary_values) v[id] = x;
        for (int id = kFirstBox; id < cfg.grid.component_count(); ++id)
            if (!v.count(id))
                throw ConfigError("boundary_values." + std::to_string(id) + ": required for box components");
        const auto sol = solve_dirichlet(data(), v, cfg.solver);
        r["solution"] = solution_json(sol);
        if (is_radial(cfg.model) && cfg.grid.excisions.empty() &&
            (cfg.model.kind == ModelKind::Kottler || cfg.model.kind == ModelKind::PpWave)) {
            // Affine image of the closed-form solution with the same end values.
            auto closed = [&](double x) {
                return cfg.model.kind == ModelKind::PpWave ? ppwave_u(x, cfg.model.r0).u : x;
            };
            const double a = closed(cfg.grid.r_min), b = closed(cfg.grid.r_max);
            const double lo = v[kInnerTorus], hi = v[kOuterTorus];
            double err = 0;
            const Grid& G = cfg.grid;
            for (std::size_t n = 0; n < G.size(); ++n) {
                if (!data().topology().usable(n)) continue;
                int i, j, l;
                G.unpack(n, i, j, l);
                err = std::max(err, std::abs(sol.u[n] - (lo + (hi - lo) * (closed(G.r(i)) - a) / (b - a))));
            }
            r["closed_form_error"] = err;
        }
        profile(data(), sol.u);
        return r;
    }

    Json tune() {
        Json r;
        if (cfg.grid.excisions.empty()) throw ConfigError("grid.excisions: the tune pipeline needs at least one box");
        const auto t = tune_boundary_constants(data(), cfg.tuner);
        r["fixed_point"] = t.fixed_point;
        Json it = Json::array();
        for (const auto& a : t.iterates) it.push_back(a);
        r["iterates"] = it;
        r["phi_tol"] = t.phi_tol;
        r["converged"] = t.converged;
        r["root_solves"] = t.bisection_counts;
        const double h = cfg.grid.spacing();
        for (const auto& [id, m] : t.min_normal_derivatives) {
            r["min_d_upsilon"][std::to_string(id)] = m;
            check(upper_check("box " + std::to_string(id) + " |min d_upsilon u| within 5h", std::abs(m),
                              5 * h * opt.tolerance_scale));
        }
        for (std::size_t j = 1; j < t.iterates.size(); ++j)
            for (std::size_t c = 0; c < t.iterates[j].size(); ++c)
                if (t.iterates[j][c] > t.iterates[j - 1][c] + cfg.tuner.outer_tol)
                    check(upper_check("monotone iterates", t.iterates[j][c] - t.iterates[j - 1][c], cfg.tuner.outer_tol));
        r["solution"] = solution_json(t.solution);
        write_iterates_csv(path("tuner_iterates.csv"), t);
        file("tuner_iterates.csv");
        profile(data(), t.solution.u);
        return r;
    }

    Json identity() {
        Json r;
        const auto sol = anchored_solution(r);
        const auto cf = compute_constraints(data());
        const auto v = verify_identity(data(), sol, cf, cfg.levels, tol);
        r["solution"] = solution_json(sol);
        r["hessian_term"] = v.bulk.hessian_term;
        r["hessian_floored"] = v.bulk.hessian_floored;
        r["floored_samples"] = v.bulk.floored_samples;
        r["energy_term"] = v.bulk.energy_term;
        r["euler_integral"] = v.euler.value;
        r["skipped_levels_measure"] = v.euler.skipped_measure;
        Json fl = Json::object();
        for (const auto& [id, f] : v.flux) {
            Json c;
            c["flux"] = f.flux;
            c["area"] = f.area;
            c["max_abs_theta_plus"] = f.max_abs_theta_plus;
            fl[std::to_string(id)] = c;
        }
        r["flux"] = fl;
        r["plus_flux_sum"] = v.plus_flux_sum;
        r["minus_flux_sum"] = v.minus_flux_sum;
        r["outer_flux"] = v.outer_flux;
        r["lhs"] = v.lhs;
        r["rhs"] = v.rhs;
        r["margin"] = v.margin;
        check(lower_check("identity margin (rhs - lhs)", v.margin, -tol));
        std::vector<std::vector<double>> rows;
        for (std::size_t i = 0; i < v.euler.levels.size(); ++i)
            rows.push_back({v.euler.levels[i], double(v.euler.chi[i]), v.euler.skipped[i] ? 1.0 : 0.0});
        write_csv(path("levels.csv"), {"t", "chi", "skipped"}, rows);
        file("levels.csv");
        if (cfg.export_meshes && cfg.grid.is3d()) export_meshes(sol);
        profile(data(), sol.u);
        return r;
    }

    void export_meshes(const SpacetimeHarmonicSolution& sol) {
        auto u = std::make_shared<const ScalarField>(sol.u);
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (std::size_t n = 0; n < u->size(); ++n)
            if (data().topology().usable(n)) {
                lo = std::min(lo, (*u)[n]);
                hi = std::max(hi, (*u)[n]);
            }
        for (int q = 1; q <= 3; ++q) {
            const double t = lo + (hi - lo) * q / 4.0;
            LevelSurface S;
            try {
                S = extract_level_set(data(), u, t, sol.grad_floor);
            } catch (const NearCriticalLevel&) {
                continue;
            }
            TriMesh all;
            for (const auto& p : S.pieces) {
                const int base = int(all.pos.size());
                all.pos.insert(all.pos.end(), p.mesh.pos.begin(), p.mesh.pos.end());
                for (auto tri : p.mesh.tri) all.tri.push_back({tri[0] + base, tri[1] + base, tri[2] + base});
            }
            const std::string name = "level_" + std::to_string(q) + ".mesh";
            write_mesh(path(name), all);
            file(name);
        }
    }

    std::optional<double> mass_aspect_energy(Json& r) {
        try {
            const auto a = analytic_asymptotics(cfg.model);
            const double E = energy_from_mass_aspect(a, cfg.model.period_xi, cfg.model.period_theta);
            r["tr_m"] = a.tr_m;
            r["tr_p"] = a.tr_p;
            r["E_mass_aspect"] = E;
            return E;
        } catch (const NoExpansionKnown& e) {
            r["E_mass_aspect"] = nullptr;
            r["E_mass_aspect_note"] = e.what();
            return std::nullopt;
        }
    }

    // Largest theta_+ on the inner torus with respect to the normal toward infinity.
    double inner_theta_plus() {
        const auto& d = data();
        const Grid& G = *d.grid;
        double m = -std::numeric_limits<double>::infinity();
        for (int j = 0; j < G.nxi(); ++j)
            for (int l = 0; l < G.nth(); ++l) {
                const std::size_t n = G.index(0, j, l);
                const auto sp = coordinate_surface_point(d.geometry().pt[n], d.g[n], d.k[n], 0, 1);
                m = std::max(m, sp.H + sp.tr_k);
            }
        return m;
    }

    Json energy() {
        Json r;
        const auto E = mass_aspect_energy(r);
        const auto est = energy_from_flux(data(), cfg.radii, flux_params(), &cfg.model);
        r["radii"] = est.radii;
        r["flux"] = est.flux;
        r["E_flux"] = est.E_flux;
        r["fit_b"] = est.fit_b;
        write_flux_csv(path("flux.csv"), est);
        file("flux.csv");
        const auto sol = truncated_solve(data(), cfg.grid.n_r - 1, flux_params(), &cfg.model);
        const double lb = energy_lower_bound(data(), sol, compute_constraints(data()));
        r["lower_bound_rhs"] = lb;
        r["truncation_radius"] = cfg.grid.r_max;
        const double theta = inner_theta_plus();
        r["inner_max_theta_plus"] = theta;
        if (E) {
            check(upper_check("|E_flux - E_mass_aspect|", std::abs(est.E_flux - *E),
                              std::max(0.05 * std::abs(*E), 1e-3 * opt.tolerance_scale)));
            // The lower bound is a theorem only for a weakly outer trapped inner boundary.
            if (theta <= tol) check(lower_check("E - lower bound", *E - lb, -tol));
            else r["lower_bound_note"] = "inner torus is not weakly outer trapped; lower bound not asserted";
        }
        profile(data(), sol.u);
        return r;
    }

    Json penrose() {
        Json r;
        const auto E = mass_aspect_energy(r);
        if (!E) throw ConfigError("model: the penrose pipeline needs a known mass aspect");
        const auto sol = truncated_solve(data(), cfg.grid.n_r - 1, flux_params(), &cfg.model);
        const auto p = penrose_bound(data(), sol, *E, tol);
        r["applicable"] = p.applicable;
        r["reason"] = p.reason;
        r["C"] = p.C;
        r["area"] = p.area;
        r["bound"] = p.bound;
        r["k_plus_g"] = p.k_plus_g;
        r["max_abs_H"] = p.max_abs_H;
        r["H_tolerance"] = p.H_tolerance;
        if (p.applicable) check(lower_check("E - Penrose bound", *E - p.bound, -tol));
        profile(data(), sol.u);
        return r;
    }

    Json barriers() {
        Json r;
        BarrierParams bp = cfg.barriers;
        bp.bracket_tol *= opt.tolerance_scale;
        const auto B = build_barriers(data(), cfg.model, bp);
        r["lambda"] = B.lambda;
        r["varsigma"] = B.varsigma;
        r["c0"] = B.c0;
        r["c1"] = B.c1;
        r["r0"] = B.r0;
        r["r1"] = B.r1;
        r["rho0"] = B.rho0;
        r["rho1"] = B.rho1;
        r["exterior_samples_plus"] = B.exterior_plus;
        r["exterior_samples_minus"] = B.exterior_minus;
        r["worst_residual_plus"] = B.worst_plus;
        r["worst_residual_plus_r"] = B.worst_r_plus;
        r["worst_residual_minus"] = B.worst_minus;
        r["worst_residual_minus_r"] = B.worst_r_minus;
        r["gluing_ok"] = B.gluing_ok;
        check(lower_check("z+ supersolution sign fraction", B.sign_fraction_plus, bp.min_sign_fraction));
        check(lower_check("z- subsolution sign fraction", B.sign_fraction_minus, bp.min_sign_fraction));
        check(lower_check("min (u - z-) on exterior", B.bracket_low, -bp.bracket_tol));
        check(lower_check("min (z+ - u) on exterior", B.bracket_high, -bp.bracket_tol));
        const Grid& G = cfg.grid;
        std::vector<std::vector<double>> rows;
        for (int i = 0; i < G.n_r; ++i) {
            const std::size_t n = G.index(i, 0, 0);
            rows.push_back({G.r(i), B.u[n], B.z_minus[n], B.z_plus[n]});
        }
        write_csv(path("barriers.csv"), {"r", "u", "z_minus", "z_plus"}, rows);
        file("barriers.csv");
        return r;
    }

    Json rigidity() {
        Json r;
        const auto sol = anchored_solution(r);
        const auto R = rigidity_diagnostics(data(), sol, compute_constraints(data()), cfg.levels, tol);
        const double h = cfg.grid.spacing();
        r["chi_plus_norm"] = R.chi_plus_norm;
        r["gauss_flatness"] = R.gauss_flatness;
        r["x_gradient_match"] = R.x_gradient_match;
        r["dec_saturation"] = R.dec_saturation;
        r["equality_threshold"] = 10 * h * h;
        r["skipped_levels"] = R.skipped_levels;
        std::vector<std::vector<double>> rows;
        for (const auto& L : R.levels) {
            rows.push_back({L.t, double(L.chi), L.chi_plus_norm, L.gauss, L.x_gradient, L.dec, L.x_gradient_l2,
                            L.gauss_bonnet});
            if (L.balance_checked)
                check(upper_check("Gauss-Bonnet balance at t=" + format_number(L.t), std::abs(L.gauss_bonnet),
                                  tol * std::max(1.0, L.area)));
        }
        write_csv(path("rigidity.csv"),
                  {"t", "chi", "chi_plus", "gauss", "x_gradient", "dec", "x_gradient_l2", "gauss_bonnet"}, rows);
        file("rigidity.csv");
        profile(data(), sol.u);
        return r;
    }

    Json audit() {
        Json r;
        const std::vector<double> rhos{10, 20, 40};
        const auto A = ppwave_audit(cfg.model, std::max(cfg.grid.r_max, 41.0), 64, rhos);
        r["hessian_max"] = A.hessian_max;
        r["hessian_argmax_r"] = A.hessian_r;
        r["mu_max"] = A.mu_max;
        r["J_max"] = A.J_max;
        r["tr_m"] = A.asym.tr_m;
        r["tr_p"] = A.asym.tr_p;
        r["mass_aspect"] = A.asym.mass_aspect;
        r["E"] = A.energy;
        const double s = opt.tolerance_scale;
        check(upper_check("|spacetime Hessian of u|", A.hessian_max, 1e-8 * s));
        check(upper_check("|mu|", A.mu_max, 1e-8 * s));
        check(upper_check("|J|", A.J_max, 1e-8 * s));
        check(upper_check("|mass aspect|", std::abs(A.asym.mass_aspect), 0.0));
        check(upper_check("|Tr m + 1/3|", std::abs(A.asym.tr_m + 1.0 / 3.0), 1e-15));
        check(upper_check("|Tr p + 1/2|", std::abs(A.asym.tr_p + 0.5), 1e-15));
        Json chart = Json::array();
        std::vector<std::vector<double>> rows;
        for (std::size_t i = 0; i < A.rho_chart.size(); ++i) {
            const auto& c = A.rho_chart[i];
            Json e;
            e["rho"] = c.rho;
            e["r"] = c.r;
            e["closed_form_dev"] = c.closed_form_dev;
            e["scaled_remainder"] = c.scaled_remainder;
            chart.push_back(e);
            rows.push_back({c.rho, c.r, c.closed_form_dev, c.scaled_remainder});
            const std::string at = " at rho=" + format_number(c.rho);
            check(upper_check("rho-chart closed form" + at, c.closed_form_dev, 1e-10 * s));
            check(upper_check("rho^3 |remainder|" + at, c.scaled_remainder, 1e-2 * s));
            if (i > 0)
                check(upper_check("remainder decay ratio" + at, c.scaled_remainder / A.rho_chart[i - 1].scaled_remainder,
                                  0.5));
        }
        r["rho_chart"] = chart;
        write_csv(path("rho_chart.csv"), {"rho", "r", "closed_form_dev", "scaled_remainder"}, rows);
        file("rho_chart.csv");
        return r;
    }

    Json refine() {
        Json r;
        const auto rows = refinement_study(cfg.model, cfg.grid, cfg.refinements);
        Json table = Json::array();
        for (const auto& row : rows) {
            Json e;
            e["study"] = row.study;
            e["h"] = row.h;
            e["error"] = row.error;
            e["order"] = row.order;
            table.push_back(e);
            if (!std::isnan(row.order))
                check(lower_check(row.study + " order at h=" + format_number(row.h), row.order, 1.8));
        }
        r["table"] = table;
        write_refinement_csv(path("refinement.csv"), rows);
        file("refinement.csv");
        return r;
    }
};

}  // namespace

RunResult run_scenario(const ScenarioConfig& config, const RunOptions& options) {
    return Runner(config, options).run();
}

}  // namespace shlab
