#include "shlab/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "shlab/errors.hpp"
#include "shlab/geometry.hpp"
#include "shlab/levelset.hpp"

namespace shlab {

namespace {

std::ofstream open(const std::filesystem::path& file) {
    if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
    std::ofstream out(file);
    if (!out) throw Error("cannot write " + file.string());
    return out;
}

void row(std::ostream& out, const std::vector<double>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << format_number(v[i]);
    out << '\n';
}

}  // namespace

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

Check upper_check(std::string name, double value, double tolerance) {
    return {std::move(name), value, tolerance, tolerance - value, value <= tolerance};
}

Check lower_check(std::string name, double value, double tolerance) {
    return {std::move(name), value, tolerance, value - tolerance, value >= tolerance};
}

Json to_json(const Check& c) {
    Json j;
    j["name"] = c.name;
    j["value"] = c.value;
    j["tolerance"] = c.tolerance;
    j["margin"] = c.margin;
    j["pass"] = c.pass;
    return j;
}

void write_profile_csv(const std::filesystem::path& file, const InitialDataSet& data, const ScalarField& u) {
    const Grid& G = *data.grid;
    const auto& C = data.geometry();
    const auto& topo = data.topology();
    const Differentiator D(G, topo, function_accuracy(G));
    const ScalarField res = residual(data, u);
    const ConstraintFields cf = compute_constraints(data);
    auto out = open(file);
    out << "r,u,grad_u,residual,theta_plus,mu,dec_margin\n";
    for (int i = 0; i < G.n_r; ++i) {
        const std::size_t n = G.index(i, 0, 0);
        if (!topo.usable(n)) continue;
        const auto& pg = C.pt[n];
        const double grad = gradient_norm(pg, D.jet(u.v.data(), n).d);
        const SurfacePoint sp = coordinate_surface_point(pg, data.g[n], data.k[n], 0, 1);
        row(out, {G.r(i), u[n], grad, res[n], sp.H + sp.tr_k, cf.mu[n], cf.dec_margin[n]});
    }
}

void write_flux_csv(const std::filesystem::path& file, const EnergyEstimate& e) {
    auto out = open(file);
    out << "r,flux,extrapolant\n";
    for (std::size_t i = 0; i < e.radii.size(); ++i)
        row(out, {e.radii[i], e.flux[i], e.E_flux + e.fit_b / e.radii[i]});
}

void write_iterates_csv(const std::filesystem::path& file, const TunerReport& t) {
    auto out = open(file);
    out << "iteration";
    const std::size_t m = t.fixed_point.size();
    for (std::size_t c = 0; c < m; ++c) out << ",a" << (kFirstBox + int(c));
    out << '\n';
    for (std::size_t j = 0; j < t.iterates.size(); ++j) {
        std::vector<double> v{double(j)};
        v.insert(v.end(), t.iterates[j].begin(), t.iterates[j].end());
        row(out, v);
    }
}

void write_refinement_csv(const std::filesystem::path& file, const std::vector<RefinementRow>& rows) {
    auto out = open(file);
    out << "study,h,error,order\n";
    for (const auto& r : rows)
        out << r.study << ',' << format_number(r.h) << ',' << format_number(r.error) << ','
            << format_number(r.order) << '\n';
}

void write_csv(const std::filesystem::path& file, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    auto out = open(file);
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << '\n';
    for (const auto& r : rows) row(out, r);
}

void write_mesh(const std::filesystem::path& file, const TriMesh& mesh) {
    auto out = open(file);
    for (const auto& p : mesh.pos)
        out << "v " << format_number(p[0]) << ' ' << format_number(p[1]) << ' ' << format_number(p[2]) << '\n';
    for (const auto& t : mesh.tri) out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
}

void write_plot_script(const std::filesystem::path& dir, const std::vector<std::string>& csv_files) {
    auto out = open(dir / "plot.py");
    out << R"(#!/usr/bin/env python3
"""Regenerates figures from the CSV files written next to this script."""
import csv
import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

HERE = pathlib.Path(__file__).resolve().parent
FILES = [)";
    for (std::size_t i = 0; i < csv_files.size(); ++i) out << (i ? ", " : "") << '"' << csv_files[i] << '"';
    out << R"(]


def load(name):
    with open(HERE / name, newline="") as fh:
        rows = list(csv.DictReader(fh))
    return rows


def column(rows, key):
    out = []
    for r in rows:
        try:
            out.append(float(r[key]))
        except ValueError:
            out.append(float("nan"))
    return out


def plot_table(name):
    rows = load(name)
    if not rows:
        return
    keys = list(rows[0].keys())
    if name == "refinement.csv":
        fig, ax = plt.subplots()
        for study in sorted({r["study"] for r in rows}):
            sub = [r for r in rows if r["study"] == study]
            ax.loglog(column(sub, "h"), column(sub, "error"), "o-", label=study)
        ax.set_xlabel("h")
        ax.set_ylabel("error")
        ax.legend()
    else:
        x = column(rows, keys[0])
        series = keys[1:]
        fig, axes = plt.subplots(len(series), 1, figsize=(6, 2.2 * len(series)), sharex=True, squeeze=False)
        for ax, key in zip(axes[:, 0], series):
            ax.plot(x, column(rows, key), ".-")
            ax.set_ylabel(key)
        axes[-1, 0].set_xlabel(keys[0])
    fig.tight_layout()
    fig.savefig(HERE / (pathlib.Path(name).stem + ".png"), dpi=120)
    plt.close(fig)


if __name__ == "__main__":
    for f in FILES:
        if (HERE / f).exists():
            plot_table(f)
)";
}

void write_json(const std::filesystem::path& file, const Json& j) {
    auto out = open(file);
    out << j.dump(2) << '\n';
}

}  // namespace shlab
