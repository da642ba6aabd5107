#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "shlab/field.hpp"
#include "shlab/grid.hpp"

namespace shlab {

struct BoundaryComponent {
    int id = 0;
    ComponentKind kind = ComponentKind::OuterPlus;
    int genus = 0;
};

struct GeometryCache;

namespace detail {
struct DataCache;
}

struct InitialDataSet {
    std::shared_ptr<const Grid> grid;
    TensorField g;
    TensorField k;
    std::vector<BoundaryComponent> boundary;
    std::optional<std::string> analytic_source;
    // k + g decays only like O(r^-5) in the radial-radial slot.
    bool weakened_radial_decay = false;

    const Topology& topology() const;
    // Metric-derived quantities at every node, computed once on first use.
    const GeometryCache& geometry() const;
    const BoundaryComponent& component(int id) const;
    // Must be called after g or k are modified in place; copies share the cache.
    void reset_cache();

    std::shared_ptr<detail::DataCache> cache;
};

using TensorSampler = std::function<Sym3(double r, double xi, double theta)>;

// Samples g and k on every node of the grid and attaches default boundary
// metadata (inner torus, outer torus, one genus-0 component per excision).
InitialDataSet sample_data(const Grid& grid, const TensorSampler& g, const TensorSampler& k);

// Throws SingularMetric / InvalidGrid when invariants fail.
void validate(const InitialDataSet& data);

// Sub-domain with r index in [0, i_max]; excisions must fit inside.
InitialDataSet restrict_radially(const InitialDataSet& data, int i_max);

}  // namespace shlab
