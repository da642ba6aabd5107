#include "shlab/data.hpp"

#include <mutex>
#include <string>

#include "shlab/errors.hpp"
#include "shlab/geometry.hpp"

namespace shlab {

namespace detail {
struct DataCache {
    std::once_flag topo_once, geom_once;
    std::unique_ptr<Topology> topo;
    std::unique_ptr<GeometryCache> geom;
};
}  // namespace detail

const Topology& InitialDataSet::topology() const {
    std::call_once(cache->topo_once, [&] { cache->topo = std::make_unique<Topology>(Topology::build(*grid)); });
    return *cache->topo;
}

const GeometryCache& InitialDataSet::geometry() const {
    std::call_once(cache->geom_once, [&] { cache->geom = std::make_unique<GeometryCache>(build_geometry_cache(*this)); });
    return *cache->geom;
}

void InitialDataSet::reset_cache() { cache = std::make_shared<detail::DataCache>(); }

const BoundaryComponent& InitialDataSet::component(int id) const {
    for (const auto& c : boundary)
        if (c.id == id) return c;
    throw UnknownComponent("no boundary component with id " + std::to_string(id));
}

static std::vector<BoundaryComponent> default_boundary(const Grid& g) {
    std::vector<BoundaryComponent> b;
    b.push_back({kInnerTorus, ComponentKind::InnerMinus, 1});
    b.push_back({kOuterTorus, ComponentKind::AsymptoticTorus, 1});
    for (std::size_t e = 0; e < g.excisions.size(); ++e)
        b.push_back({kFirstBox + int(e), g.excisions[e].kind, 0});
    return b;
}

InitialDataSet sample_data(const Grid& grid, const TensorSampler& gs, const TensorSampler& ks) {
    grid.validate();
    InitialDataSet d;
    d.grid = std::make_shared<const Grid>(grid);
    d.g = TensorField(d.grid);
    d.k = TensorField(d.grid);
    for (int i = 0; i < grid.n_r; ++i)
        for (int j = 0; j < grid.nxi(); ++j)
            for (int l = 0; l < grid.nth(); ++l) {
                const std::size_t n = grid.index(i, j, l);
                d.g[n] = gs(grid.r(i), grid.xi(j), grid.theta(l));
                d.k[n] = ks(grid.r(i), grid.xi(j), grid.theta(l));
            }
    d.boundary = default_boundary(grid);
    d.cache = std::make_shared<detail::DataCache>();
    validate(d);
    return d;
}

void validate(const InitialDataSet& d) {
    d.grid->validate();
    for (std::size_t n = 0; n < d.g.size(); ++n) {
        if (!positive_definite(d.g[n]))
            throw SingularMetric("metric not positive definite at sample " + std::to_string(n));
        if (!d.grid->is3d()) {
            const auto& g = d.g[n];
            const auto& k = d.k[n];
            if (g(0, 1) != 0 || g(0, 2) != 0 || g(1, 2) != 0 || k(0, 1) != 0 || k(0, 2) != 0 || k(1, 2) != 0)
                throw InvalidGrid("Radial1D data must be diagonal");
        }
    }
    for (const auto& c : d.boundary)
        if (c.kind == ComponentKind::OuterPlus && c.id != kOuterTorus && c.genus != 0)
            throw InvalidGrid("OuterPlus component " + std::to_string(c.id) + " must have genus 0");
}

InitialDataSet restrict_radially(const InitialDataSet& d, int i_max) {
    const Grid& G = *d.grid;
    if (i_max < 7 || i_max >= G.n_r) throw InvalidGrid("radial restriction index out of range");
    Grid sub = G;
    sub.n_r = i_max + 1;
    sub.r_max = G.r(i_max);
    sub.validate();
    InitialDataSet out;
    out.grid = std::make_shared<const Grid>(sub);
    out.g = TensorField(out.grid);
    out.k = TensorField(out.grid);
    for (std::size_t n = 0; n < sub.size(); ++n) {
        out.g[n] = d.g[n];
        out.k[n] = d.k[n];
    }
    out.boundary = d.boundary;
    out.analytic_source = d.analytic_source;
    out.weakened_radial_decay = d.weakened_radial_decay;
    out.cache = std::make_shared<detail::DataCache>();
    return out;
}

}  // namespace shlab
