#pragma once

#include <memory>
#include <vector>

#include "shlab/grid.hpp"
#include "shlab/tensor.hpp"

namespace shlab {

template <class T>
struct SampledField {
    std::shared_ptr<const Grid> grid;
    std::vector<T> v;

    SampledField() = default;
    explicit SampledField(std::shared_ptr<const Grid> g, T init = T{})
        : grid(std::move(g)), v(grid->size(), init) {}

    T& operator[](std::size_t n) { return v[n]; }
    const T& operator[](std::size_t n) const { return v[n]; }
    std::size_t size() const { return v.size(); }
};

using ScalarField = SampledField<double>;
using TensorField = SampledField<Sym3>;
using CovectorField = SampledField<Vec3>;

}  // namespace shlab
