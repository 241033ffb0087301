#include "nodalheat/nodal.hpp"

#include <cmath>

#include <numeric>

namespace nodalheat {

namespace {

struct DisjointSets {
    std::vector<int> parent;
    explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int a) {
        while (parent[static_cast<std::size_t>(a)] != a) {
            int& p = parent[static_cast<std::size_t>(a)];
            p = parent[static_cast<std::size_t>(p)];
            a = p;
        }
        return a;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (a < b) parent[static_cast<std::size_t>(b)] = a;
        else parent[static_cast<std::size_t>(a)] = b;
    }
};

} // namespace

DomainMask label_nodal_domains(const ScalarField& field) {
    const GridSpec& g = field.grid;
    const double eps = zero_perturbation * field.max_abs();
    std::vector<int> sign(g.size(), 0);
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (!field.supported(k)) continue;
        double v = field.values[k];
        if (std::abs(v) <= eps) v = eps;
        sign[k] = v > 0.0 ? 1 : (v < 0.0 ? -1 : 0);
    }

    DisjointSets sets(g.size());
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const std::size_t k = g.index(i, j);
            if (sign[k] == 0) continue;
            int ir = i + 1;
            if (ir == g.nx && g.periodic_x) ir = 0;
            if (ir < g.nx && sign[g.index(ir, j)] == sign[k]) sets.unite(static_cast<int>(k), static_cast<int>(g.index(ir, j)));
            int ju = j + 1;
            if (ju == g.ny && g.periodic_y) ju = 0;
            if (ju < g.ny && sign[g.index(i, ju)] == sign[k]) sets.unite(static_cast<int>(k), static_cast<int>(g.index(i, ju)));
        }
    }

    DomainMask mask;
    mask.grid = g;
    mask.labels.assign(g.size(), 0);
    std::vector<int> root_label(g.size(), 0);
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (sign[k] == 0) continue;
        const auto root = static_cast<std::size_t>(sets.find(static_cast<int>(k)));
        if (root_label[root] == 0) {
            mask.signs.push_back(sign[k]);
            mask.areas.push_back(0.0);
            root_label[root] = static_cast<int>(mask.signs.size());
        }
        const int l = root_label[root];
        mask.labels[k] = l;
        mask.areas[static_cast<std::size_t>(l - 1)] += g.cell_area();
    }
    return mask;
}

} // namespace nodalheat
