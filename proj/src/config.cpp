#include "shlab/config.hpp"

#include <fstream>
#include <set>

#include "shlab/errors.hpp"

namespace shlab {

using nlohmann::json;

namespace {

constexpr const char* kPipelineNames[] = {"solve",   "tune",     "verify-identity", "energy",  "penrose",
                                          "barriers", "rigidity", "ppwave-audit",   "refine"};

// Object reader that records the path for diagnostics and rejects keys that
// were never asked for.
class Node {
public:
    Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) fail(path_.empty() ? "top level must be an object" : "must be an object");
    }

    bool has(const std::string& key) const { return j_.contains(key); }

    const json& raw(const std::string& key) {
        seen_.insert(key);
        if (!j_.contains(key)) throw ConfigError(field(key) + ": required field missing");
        return j_.at(key);
    }

    Node child(const std::string& key) { return Node(raw(key), field(key)); }

    double number(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_number()) throw ConfigError(field(key) + ": expected a number");
        return v.get<double>();
    }
    double number(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

    int integer(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_number_integer()) throw ConfigError(field(key) + ": expected an integer");
        return v.get<int>();
    }
    int integer(const std::string& key, int fallback) { return has(key) ? integer(key) : fallback; }

    bool boolean(const std::string& key, bool fallback) {
        if (!has(key)) return fallback;
        const json& v = raw(key);
        if (!v.is_boolean()) throw ConfigError(field(key) + ": expected true or false");
        return v.get<bool>();
    }

    std::string string(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_string()) throw ConfigError(field(key) + ": expected a string");
        return v.get<std::string>();
    }

    template <class E, std::size_t N>
    E choice(const std::string& key, const char* const (&names)[N], E fallback) {
        if (!has(key)) return fallback;
        const std::string s = string(key);
        for (std::size_t i = 0; i < N; ++i)
            if (s == names[i]) return E(i);
        std::string all;
        for (std::size_t i = 0; i < N; ++i) all += (i ? ", " : "") + std::string(names[i]);
        throw ConfigError(field(key) + ": unknown value \"" + s + "\" (expected one of " + all + ")");
    }

    std::vector<double> numbers(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_array()) throw ConfigError(field(key) + ": expected an array of numbers");
        std::vector<double> out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number()) throw ConfigError(field(key) + "[" + std::to_string(i) + "]: expected a number");
            out.push_back(v[i].get<double>());
        }
        return out;
    }

    std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
    [[noreturn]] void fail(const std::string& msg) const { throw ConfigError((path_.empty() ? "" : path_ + ": ") + msg); }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key())) throw ConfigError(field(it.key()) + ": unknown key");
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

// Wraps library validation so the message carries the section path.
template <class F>
void checked(const std::string& path, F&& f) {
    try {
        f();
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

ModelSpec parse_model(Node n) {
    static const char* const kinds[] = {"Kottler", "PpWave", "WarpedProduct", "PerturbedKottler"};
    static const char* const warps[] = {"Exponential", "MinimalNeck"};
    static const char* const lambdas[] = {"Unit", "LogDerivative"};
    ModelSpec m;
    m.kind = n.choice("kind", kinds, ModelKind::Kottler);
    if (!n.has("kind")) n.raw("kind");
    m.r0 = n.number("r0", m.kind == ModelKind::PpWave ? 1.5 : 1.0);
    m.period_xi = n.number("period_xi", 1.0);
    m.period_theta = n.number("period_theta", 1.0);
    m.warp = n.choice("warp", warps, WarpProfile::Exponential);
    m.warp_rate = n.number("warp_rate", 1.0);
    m.lambda = n.choice("lambda", lambdas, LambdaProfile::Unit);
    if (n.has("perturbation")) {
        Node p = n.child("perturbation");
        Perturbation q;
        q.amplitude = p.number("amplitude");
        q.decay = p.number("decay", 4.0);
        if (p.has("modes")) {
            q.modes.clear();
            const json& modes = p.raw("modes");
            const std::string path = p.field("modes");
            if (!modes.is_array()) throw ConfigError(path + ": expected an array of [a, b] pairs");
            for (std::size_t i = 0; i < modes.size(); ++i) {
                const json& e = modes[i];
                if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer())
                    throw ConfigError(path + "[" + std::to_string(i) + "]: expected [a, b] with integer entries");
                q.modes.emplace_back(e[0].get<int>(), e[1].get<int>());
            }
        }
        p.finish();
        m.perturbation = q;
    }
    n.finish();
    checked("model", [&] { validate(m); });
    return m;
}

Grid parse_grid(Node n, const ModelSpec& m) {
    static const char* const backends[] = {"Radial1D", "Torus3D"};
    static const char* const sides[] = {"OuterPlus", "InnerMinus"};
    Grid g;
    g.backend = n.choice("backend", backends, Backend::Radial1D);
    g.r_min = n.number("r_min");
    g.r_max = n.number("r_max");
    g.n_r = n.integer("n_r");
    g.period_xi = m.period_xi;
    g.period_theta = m.period_theta;
    if (g.is3d()) {
        g.n_xi = n.integer("n_xi");
        g.n_theta = n.integer("n_theta");
    } else {
        g.n_xi = n.integer("n_xi", 1);
        g.n_theta = n.integer("n_theta", 1);
    }
    if (n.has("excisions")) {
        const json& list = n.raw("excisions");
        const std::string path = n.field("excisions");
        if (!list.is_array()) throw ConfigError(path + ": expected an array");
        for (std::size_t i = 0; i < list.size(); ++i) {
            Node b(list[i], path + "[" + std::to_string(i) + "]");
            auto range = [&](const char* key) {
                const auto v = b.numbers(key);
                if (v.size() != 2) throw ConfigError(b.field(key) + ": expected [low, high]");
                return v;
            };
            const auto r = range("r"), xi = range("xi"), th = range("theta");
            const auto side = b.choice("kind", sides, 0);
            b.finish();
            checked(b.field("r"), [&] {
                g.excisions.push_back(box_from_coords(g, r[0], r[1], xi[0], xi[1], th[0], th[1],
                                                      side == 0 ? ComponentKind::OuterPlus
                                                                : ComponentKind::InnerMinus));
            });
        }
    }
    n.finish();
    checked("grid", [&] { g.validate(); });
    return g;
}

SolverParams parse_solver(Node n) {
    SolverParams s;
    if (n.has("grad_floor")) s.grad_floor = n.number("grad_floor");
    s.picard_tol = n.number("picard_tol", s.picard_tol);
    s.picard_max = n.integer("picard_max", s.picard_max);
    s.linear_tol = n.number("linear_tol", s.linear_tol);
    s.linear_max = n.integer("linear_max", s.linear_max);
    s.damping = n.number("damping", s.damping);
    n.finish();
    checked("solver", [&] { validate(s); });
    return s;
}

void parse_tuner(Node n, TunerParams& t) {
    static const char* const methods[] = {"bisection", "illinois"};
    t.method = n.choice("method", methods, t.method);
    if (n.has("phi_tol")) t.phi_tol = n.number("phi_tol");
    t.value_tol = n.number("value_tol", t.value_tol);
    t.max_root_steps = n.integer("max_root_steps", t.max_root_steps);
    t.outer_tol = n.number("outer_tol", t.outer_tol);
    t.outer_max = n.integer("outer_max", t.outer_max);
    n.finish();
    if (!(t.value_tol > 0) || !(t.outer_tol > 0) || t.max_root_steps < 1 || t.outer_max < 1)
        throw ConfigError("tuner: tolerances and step limits must be positive");
}

void parse_barriers(Node n, BarrierParams& b) {
    b.rho0 = n.number("rho0", b.rho0);
    b.rho1 = n.number("rho1", b.rho1);
    if (n.has("lambda")) b.lambda = n.number("lambda");
    if (n.has("varsigma")) b.varsigma = n.number("varsigma");
    b.bracket_tol = n.number("bracket_tol", b.bracket_tol);
    b.min_sign_fraction = n.number("min_sign_fraction", b.min_sign_fraction);
    b.strict = n.boolean("strict", b.strict);
    n.finish();
}

}  // namespace

const char* pipeline_name(Pipeline p) { return kPipelineNames[int(p)]; }

std::optional<Pipeline> pipeline_from_name(const std::string& s) {
    for (int i = 0; i < int(std::size(kPipelineNames)); ++i)
        if (s == kPipelineNames[i]) return Pipeline(i);
    return std::nullopt;
}

ScenarioConfig parse_config(const json& doc, std::optional<Pipeline> pipeline) {
    Node top(doc, "");
    const int version = top.integer("schema_version");
    if (version != kSchemaVersion)
        throw ConfigError("schema_version: unsupported version " + std::to_string(version) + " (expected " +
                          std::to_string(kSchemaVersion) + ")");
    ScenarioConfig c;
    c.pipeline = top.choice("pipeline", kPipelineNames, Pipeline::Solve);
    if (pipeline) c.pipeline = *pipeline;
    else if (!top.has("pipeline")) top.raw("pipeline");
    c.model = parse_model(top.child("model"));
    c.grid = parse_grid(top.child("grid"), c.model);
    if (top.has("solver")) c.solver = parse_solver(top.child("solver"));
    c.tuner.solver = c.solver;
    if (top.has("tuner")) parse_tuner(top.child("tuner"), c.tuner);
    if (top.has("boundary_values")) {
        Node bv = top.child("boundary_values");
        for (int id = 0; id < c.grid.component_count(); ++id)
            if (bv.has(std::to_string(id))) c.boundary_values[id] = bv.number(std::to_string(id));
        bv.finish();
    }
    if (top.has("radii")) c.radii = top.numbers("radii");
    if (c.pipeline == Pipeline::Energy && c.radii.size() < 3) top.fail("radii: the energy pipeline needs at least three radii");
    for (std::size_t i = 0; i < c.radii.size(); ++i) {
        if (!(c.radii[i] > c.grid.r_min && c.radii[i] <= c.grid.r_max) || (i && !(c.radii[i] > c.radii[i - 1])))
            throw ConfigError("radii[" + std::to_string(i) + "]: must be increasing and inside (r_min, r_max]");
    }
    c.levels = top.integer("levels", c.levels);
    if (c.levels < 16) throw ConfigError("levels: at least 16 level samples are required");
    c.tolerance = top.number("tolerance", c.tolerance);
    if (!(c.tolerance > 0)) throw ConfigError("tolerance: must be positive");
    c.barriers.solve.tuner = c.tuner;
    if (top.has("barriers")) parse_barriers(top.child("barriers"), c.barriers);
    c.refinements = top.integer("refinements", c.refinements);
    if (c.refinements < 1 || c.refinements > 6) throw ConfigError("refinements: must lie in [1, 6]");
    c.export_meshes = top.boolean("export_meshes", false);
    if (top.has("output_dir")) c.output_dir = top.string("output_dir");
    top.finish();
    if (c.pipeline == Pipeline::PpWaveAudit && c.model.kind != ModelKind::PpWave)
        throw ConfigError("model.kind: the ppwave-audit pipeline requires PpWave");
    if (c.pipeline == Pipeline::Barriers && !is_radial(c.model) && c.model.kind != ModelKind::PerturbedKottler)
        throw ConfigError("model.kind: barriers need analytic asymptotic tensors");
    c.echo = nlohmann::ordered_json::parse(doc.dump());
    return c;
}

ScenarioConfig load_config(const std::filesystem::path& file, std::optional<Pipeline> pipeline) {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot open config file " + file.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(file.string() + ": " + e.what());
    }
    return parse_config(doc, pipeline);
}

}  // namespace shlab
