#include "qchrome/canonical.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace qchrome {

std::size_t CanonicalFormHash::operator()(const CanonicalForm& f) const noexcept {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (Bits w : f.words) {
        h ^= static_cast<std::size_t>(w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
        h *= 0x100000001b3ULL;
    }
    return h;
}

namespace {

using Partition = std::vector<Bits>;

// Splits cells until every cell is equitable with respect to every other.
// Splitting order depends only on the cell sequence, so the result commutes
// with relabeling.
void refine(const Graph& g, Partition& cells) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t s = 0; s < cells.size(); ++s) {
            Bits splitter = cells[s];
            for (std::size_t c = 0; c < cells.size(); ++c) {
                Bits cell = cells[c];
                if (popcount(cell) == 1) continue;
                int lo = 64, hi = -1;
                for_each_bit(cell, [&](int v) {
                    int cnt = popcount(g.neighbors(v) & splitter);
                    lo = std::min(lo, cnt);
                    hi = std::max(hi, cnt);
                });
                if (lo == hi) continue;
                std::map<int, Bits> frags;
                for_each_bit(cell, [&](int v) { frags[popcount(g.neighbors(v) & splitter)] |= bit(v); });
                std::vector<Bits> pieces;
                for (auto& [cnt, mask] : frags) pieces.push_back(mask);
                cells.erase(cells.begin() + static_cast<std::ptrdiff_t>(c));
                cells.insert(cells.begin() + static_cast<std::ptrdiff_t>(c), pieces.begin(), pieces.end());
                if (s > c) s += pieces.size() - 1;
                c += pieces.size() - 1;
                splitter = cells[s];
                changed = true;
            }
        }
    }
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

class Searcher {
public:
    explicit Searcher(const Graph& g) : g_(g), n_(g.order()) {}

    void run(Partition root) {
        refine(g_, root);
        std::vector<int> prefix;
        search(root, prefix);
    }

    std::vector<int> best_order;
    std::vector<Bits> best_cert;
    std::vector<std::vector<int>> generators;

private:
    std::vector<Bits> certificate(const std::vector<int>& order) const {
        std::vector<int> pos(n_);
        for (int p = 0; p < n_; ++p) pos[order[p]] = p;
        std::vector<Bits> rows(n_);
        for (int p = 0; p < n_; ++p) {
            Bits r = 0;
            for_each_bit(g_.neighbors(order[p]), [&](int u) { r |= bit(pos[u]); });
            rows[p] = r;
        }
        return rows;
    }

    void leaf(const Partition& cells) {
        std::vector<int> order;
        order.reserve(n_);
        for (Bits c : cells) order.push_back(lowest(c));
        auto cert = certificate(order);
        if (best_order.empty() || cert < best_cert) {
            best_cert = std::move(cert);
            best_order = std::move(order);
        } else if (cert == best_cert) {
            std::vector<int> perm(n_);
            for (int p = 0; p < n_; ++p) perm[order[p]] = best_order[p];
            bool identity = true;
            for (int v = 0; v < n_ && identity; ++v) identity = perm[v] == v;
            if (!identity) generators.push_back(std::move(perm));
        }
    }

    // Orbit representatives under the generators fixing `prefix` pointwise.
    UnionFind stabilizer_orbits(const std::vector<int>& prefix) const {
        UnionFind uf(n_);
        for (const auto& gen : generators) {
            bool fixes = std::all_of(prefix.begin(), prefix.end(), [&](int v) { return gen[v] == v; });
            if (!fixes) continue;
            for (int v = 0; v < n_; ++v) uf.unite(v, gen[v]);
        }
        return uf;
    }

    void search(const Partition& cells, std::vector<int>& prefix) {
        std::size_t target = cells.size();
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (popcount(cells[i]) > 1) {
                target = i;
                break;
            }
        }
        if (target == cells.size()) {
            leaf(cells);
            return;
        }
        std::vector<int> explored;
        std::size_t gens_seen = 0;
        UnionFind orbits(n_);
        for (int v : bits_to_vector(cells[target])) {
            if (!explored.empty()) {
                if (generators.size() != gens_seen) {
                    orbits = stabilizer_orbits(prefix);
                    gens_seen = generators.size();
                }
                int rv = orbits.find(v);
                bool redundant = std::any_of(explored.begin(), explored.end(), [&](int w) { return orbits.find(w) == rv; });
                if (redundant) continue;
            }
            Partition child;
            child.reserve(cells.size() + 1);
            for (std::size_t i = 0; i < cells.size(); ++i) {
                if (i == target) {
                    child.push_back(bit(v));
                    child.push_back(cells[i] & ~bit(v));
                } else {
                    child.push_back(cells[i]);
                }
            }
            refine(g_, child);
            prefix.push_back(v);
            search(child, prefix);
            prefix.pop_back();
            explored.push_back(v);
        }
    }

    const Graph& g_;
    int n_;
};

}  // namespace

CanonicalLabeling canonical_labeling(const Graph& g, std::span<const int> colors) {
    const int n = g.order();
    CanonicalLabeling out;
    out.form.words.push_back(static_cast<Bits>(n));
    if (n == 0) return out;
    if (!colors.empty() && static_cast<int>(colors.size()) != n)
        throw std::invalid_argument("canonical_labeling: colour vector length differs from graph order");

    Partition root;
    std::vector<Bits> color_sizes;
    if (colors.empty()) {
        root.push_back(g.vertex_mask());
    } else {
        std::map<int, Bits> by_color;
        for (int v = 0; v < n; ++v) by_color[colors[v]] |= bit(v);
        for (auto& [c, mask] : by_color) {
            root.push_back(mask);
            color_sizes.push_back(static_cast<Bits>(popcount(mask)));
        }
    }

    Searcher s(g);
    s.run(root);
    out.order = s.best_order;
    out.generators = std::move(s.generators);
    UnionFind uf(n);
    for (const auto& gen : out.generators)
        for (int v = 0; v < n; ++v) uf.unite(v, gen[v]);
    out.orbit.resize(n);
    for (int v = 0; v < n; ++v) out.orbit[v] = uf.find(v);
    out.form.words.insert(out.form.words.end(), color_sizes.begin(), color_sizes.end());
    out.form.words.insert(out.form.words.end(), s.best_cert.begin(), s.best_cert.end());
    return out;
}

CanonicalForm canonical_form(const Graph& g) { return canonical_labeling(g).form; }

bool isomorphic(const Graph& a, const Graph& b) {
    if (a.order() != b.order() || a.edge_count() != b.edge_count()) return false;
    return canonical_form(a) == canonical_form(b);
}

}  // namespace qchrome
