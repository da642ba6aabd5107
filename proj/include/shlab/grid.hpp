#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace shlab {

enum class Backend { Radial1D, Torus3D };

// Which side of the energy condition a boundary component sits on.
// AsymptoticTorus is the outer truncation torus (the anchored u = 1 component).
enum class ComponentKind { OuterPlus, InnerMinus, AsymptoticTorus };

// Axis-aligned excision in index space, bounds inclusive. The six faces are
// boundary samples; strictly interior nodes are removed from the domain.
struct ExcisionBox {
    int r_lo = 0, r_hi = 0;
    int xi_lo = 0, xi_hi = 0;
    int th_lo = 0, th_hi = 0;
    ComponentKind kind = ComponentKind::OuterPlus;

    bool contains(int i, int j, int l) const {
        return i >= r_lo && i <= r_hi && j >= xi_lo && j <= xi_hi && l >= th_lo && l <= th_hi;
    }
    bool strictly_contains(int i, int j, int l) const {
        return i > r_lo && i < r_hi && j > xi_lo && j < xi_hi && l > th_lo && l < th_hi;
    }
};

enum class NodeKind : std::uint8_t { Interior, Boundary, Void };

// Component ids: 0 = inner torus (r = r_min), 1 = outer truncation torus
// (r = r_max), 2 + b = excision box b.
inline constexpr int kInnerTorus = 0;
inline constexpr int kOuterTorus = 1;
inline constexpr int kFirstBox = 2;

struct Grid {
    Backend backend = Backend::Radial1D;
    double r_min = 1.0, r_max = 2.0;
    int n_r = 64;
    double period_xi = 1.0, period_theta = 1.0;
    int n_xi = 1, n_theta = 1;
    std::vector<ExcisionBox> excisions;

    static Grid radial(double r_min, double r_max, int n_r, double p_xi = 1.0, double p_th = 1.0);
    static Grid torus(double r_min, double r_max, int n_r, int n_xi, int n_theta,
                      double p_xi = 1.0, double p_th = 1.0);

    void validate() const;

    bool is3d() const { return backend == Backend::Torus3D; }
    int nxi() const { return is3d() ? n_xi : 1; }
    int nth() const { return is3d() ? n_theta : 1; }
    std::size_t size() const { return std::size_t(n_r) * nxi() * nth(); }
    std::size_t index(int i, int j, int l) const {
        return (std::size_t(i) * nxi() + j) * nth() + l;
    }
    void unpack(std::size_t n, int& i, int& j, int& l) const {
        l = int(n % nth());
        n /= nth();
        j = int(n % nxi());
        i = int(n / nxi());
    }

    double h_r() const { return (r_max - r_min) / (n_r - 1); }
    double h_xi() const { return period_xi / nxi(); }
    double h_theta() const { return period_theta / nth(); }
    double h(int axis) const { return axis == 0 ? h_r() : (axis == 1 ? h_xi() : h_theta()); }
    // Largest coordinate spacing in use; the "h" of tolerance rules.
    double spacing() const;

    double r(int i) const { return r_min + i * h_r(); }
    double xi(int j) const { return j * h_xi(); }
    double theta(int l) const { return l * h_theta(); }
    double torus_area() const { return period_xi * period_theta; }

    int wrap(int axis, int j) const {
        const int n = axis == 1 ? nxi() : nth();
        j %= n;
        return j < 0 ? j + n : j;
    }

    int component_count() const { return kFirstBox + int(excisions.size()); }
};

// Node classification derived from a grid.
struct Topology {
    std::vector<NodeKind> kind;
    std::vector<int> component;  // -1 for interior and void nodes

    static Topology build(const Grid& g);
    bool usable(std::size_t n) const { return kind[n] != NodeKind::Void; }
};

// Snap a coordinate box to grid indices (nearest nodes).
ExcisionBox box_from_coords(const Grid& g, double r_lo, double r_hi, double xi_lo, double xi_hi,
                            double th_lo, double th_hi,
                            ComponentKind kind = ComponentKind::OuterPlus);

}  // namespace shlab
