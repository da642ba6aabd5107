#include "shlab/marching.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_map>

#include "shlab/errors.hpp"

namespace shlab {

Lattice lattice_of(const Grid& g) {
    Lattice L;
    L.n = {g.n_r, g.nxi(), g.nth()};
    L.periodic = {false, g.is3d(), g.is3d()};
    L.origin = {g.r_min, 0.0, 0.0};
    L.spacing = {g.h_r(), g.h_xi(), g.h_theta()};
    return L;
}

namespace {

// Corner offsets of the unit cube indexed by bits (axis 0 = bit 0).
constexpr std::array<std::array<int, 3>, 8> kCorner = {{
    {0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}, {0, 0, 1}, {1, 0, 1}, {0, 1, 1}, {1, 1, 1}}};

// Freudenthal split: one tetrahedron per axis permutation, walking from
// corner 0 to corner 7.
std::array<std::array<int, 4>, 6> freudenthal() {
    std::array<std::array<int, 4>, 6> tets{};
    std::array<int, 3> perm = {0, 1, 2};
    int k = 0;
    do {
        int c = 0;
        tets[k][0] = 0;
        for (int s = 0; s < 3; ++s) {
            c |= 1 << perm[s];
            tets[k][s + 1] = c;
        }
        ++k;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return tets;
}

Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

struct Builder {
    const Lattice& L;
    const std::vector<double>& f;
    double t;
    TriMesh mesh;
    std::unordered_map<std::uint64_t, int> edge_vertex;

    std::size_t node(const std::array<int, 3>& p) const {
        int q[3];
        for (int a = 0; a < 3; ++a) q[a] = L.periodic[a] ? ((p[a] % L.n[a]) + L.n[a]) % L.n[a] : p[a];
        return L.index(q[0], q[1], q[2]);
    }

    // Vertex on the lattice edge between unwrapped points pa, pb.
    int vertex(const std::array<int, 3>& pa, const std::array<int, 3>& pb, Vec3& unwrapped) {
        std::size_t a = node(pa), b = node(pb);
        std::array<int, 3> qa = pa, qb = pb;
        if (a > b) {
            std::swap(a, b);
            std::swap(qa, qb);
        }
        const double fa = f[a], fb = f[b];
        const double s = (t - fa) / (fb - fa);
        for (int x = 0; x < 3; ++x) unwrapped[x] = qa[x] + s * (qb[x] - qa[x]);
        const std::uint64_t key = std::uint64_t(a) * std::uint64_t(L.size()) + b;
        auto it = edge_vertex.find(key);
        if (it != edge_vertex.end()) return it->second;
        Vec3 pos;
        for (int x = 0; x < 3; ++x) {
            double c = unwrapped[x];
            if (L.periodic[x]) c = std::fmod(std::fmod(c, L.n[x]) + L.n[x], L.n[x]);
            pos[x] = L.origin[x] + c * L.spacing[x];
        }
        const int id = int(mesh.pos.size());
        mesh.pos.push_back(pos);
        mesh.src.push_back({a, b, s});
        edge_vertex.emplace(key, id);
        return id;
    }

    void triangle(int v0, int v1, int v2, const Vec3& p0, const Vec3& p1, const Vec3& p2, const Vec3& up) {
        if (v0 == v1 || v1 == v2 || v0 == v2) return;
        const Vec3 e1{p1[0] - p0[0], p1[1] - p0[1], p1[2] - p0[2]};
        const Vec3 e2{p2[0] - p0[0], p2[1] - p0[1], p2[2] - p0[2]};
        if (dot(cross(e1, e2), up) >= 0) mesh.tri.push_back({v0, v1, v2});
        else mesh.tri.push_back({v0, v2, v1});
    }

    void tet(const std::array<std::array<int, 3>, 4>& p) {
        std::array<bool, 4> above{};
        int count = 0;
        for (int q = 0; q < 4; ++q) {
            above[q] = f[node(p[q])] > t;
            count += above[q];
        }
        if (count == 0 || count == 4) return;
        std::vector<int> hi, lo;
        for (int q = 0; q < 4; ++q) (above[q] ? hi : lo).push_back(q);
        // Direction of increasing f: from the low corners toward the high ones.
        Vec3 up{};
        for (int q : hi)
            for (int x = 0; x < 3; ++x) up[x] += double(p[q][x]) / hi.size();
        for (int q : lo)
            for (int x = 0; x < 3; ++x) up[x] -= double(p[q][x]) / lo.size();
        if (hi.size() == 1 || lo.size() == 1) {
            const bool lone_hi = hi.size() == 1;
            const int a = lone_hi ? hi[0] : lo[0];
            const auto& others = lone_hi ? lo : hi;
            Vec3 w[3];
            int v[3];
            for (int m = 0; m < 3; ++m) v[m] = vertex(p[a], p[others[m]], w[m]);
            triangle(v[0], v[1], v[2], w[0], w[1], w[2], up);
            return;
        }
        // Two above, two below: quadrilateral through four edges.
        Vec3 w[4];
        int v[4];
        v[0] = vertex(p[hi[0]], p[lo[0]], w[0]);
        v[1] = vertex(p[hi[0]], p[lo[1]], w[1]);
        v[2] = vertex(p[hi[1]], p[lo[1]], w[2]);
        v[3] = vertex(p[hi[1]], p[lo[0]], w[3]);
        triangle(v[0], v[1], v[2], w[0], w[1], w[2], up);
        triangle(v[0], v[2], v[3], w[0], w[2], w[3], up);
    }
};

}  // namespace

TriMesh march_tetrahedra(const Lattice& L, const std::vector<double>& f, double t) {
    if (f.size() != L.size()) throw InvalidGrid("lattice and sample count disagree");
    static const auto tets = freudenthal();
    Builder B{L, f, t, {}, {}};
    int cells[3];
    for (int a = 0; a < 3; ++a) cells[a] = L.periodic[a] ? L.n[a] : L.n[a] - 1;
    for (int i = 0; i < cells[0]; ++i)
        for (int j = 0; j < cells[1]; ++j)
            for (int l = 0; l < cells[2]; ++l) {
                // Skip cubes entirely on one side of the level.
                int above = 0;
                for (const auto& c : kCorner) above += f[B.node({i + c[0], j + c[1], l + c[2]})] > t;
                if (above == 0 || above == 8) continue;
                for (const auto& T : tets) {
                    std::array<std::array<int, 3>, 4> p;
                    for (int q = 0; q < 4; ++q)
                        p[q] = {i + kCorner[T[q]][0], j + kCorner[T[q]][1], l + kCorner[T[q]][2]};
                    B.tet(p);
                }
            }
    return std::move(B.mesh);
}

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void join(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

std::vector<SurfacePiece> split_pieces(const TriMesh& mesh) {
    const int nv = int(mesh.pos.size());
    UnionFind uf(nv);
    for (const auto& t : mesh.tri) {
        uf.join(t[0], t[1]);
        uf.join(t[1], t[2]);
    }
    std::map<int, int> root_piece;
    for (const auto& t : mesh.tri) {
        const int r = uf.find(t[0]);
        if (!root_piece.count(r)) root_piece.emplace(r, int(root_piece.size()));
    }
    // Pieces are numbered by their first triangle, which keeps output deterministic.
    std::vector<SurfacePiece> pieces(root_piece.size());
    std::vector<int> local(nv, -1);
    for (const auto& t : mesh.tri) {
        const int p = root_piece.at(uf.find(t[0]));
        auto& M = pieces[p].mesh;
        std::array<int, 3> nt;
        for (int q = 0; q < 3; ++q) {
            const int v = t[q];
            if (local[v] < 0) {
                local[v] = int(M.pos.size());
                M.pos.push_back(mesh.pos[v]);
                if (!mesh.src.empty()) M.src.push_back(mesh.src[v]);
            }
            nt[q] = local[v];
        }
        M.tri.push_back(nt);
    }
    for (auto& P : pieces) {
        std::map<std::pair<int, int>, int> edge_count;
        for (const auto& t : P.mesh.tri)
            for (int q = 0; q < 3; ++q) {
                const int a = t[q], b = t[(q + 1) % 3];
                ++edge_count[{std::min(a, b), std::max(a, b)}];
            }
        P.V = long(P.mesh.pos.size());
        P.E = long(edge_count.size());
        P.F = long(P.mesh.tri.size());
        P.closed = std::all_of(edge_count.begin(), edge_count.end(), [](const auto& e) { return e.second == 2; });
    }
    return pieces;
}

std::vector<long> euler_characteristic(const std::vector<SurfacePiece>& pieces) {
    std::vector<long> chi;
    for (const auto& p : pieces) {
        if (!p.closed) throw OpenMesh("surface piece has a boundary edge or a non-manifold edge");
        chi.push_back(p.V - p.E + p.F);
    }
    return chi;
}

long euler_characteristic(const TriMesh& mesh) {
    long total = 0;
    for (long c : euler_characteristic(split_pieces(mesh))) total += c;
    return total;
}

}  // namespace shlab
