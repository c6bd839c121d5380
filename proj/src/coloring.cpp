#include "qchrome/coloring.hpp"

#include <algorithm>
#include <sstream>

namespace qchrome {

bool ColoringWitness::is_proper(const Graph& g) const {
    if (static_cast<int>(colors.size()) != g.order()) return false;
    for (int c : colors)
        if (c < 0) return false;
    for (auto [u, v] : g.edges())
        if (colors[u] == colors[v]) return false;
    return true;
}

int ColoringWitness::colors_used() const {
    Bits seen = 0;
    for (int c : colors) seen |= bit(c);
    return popcount(seen);
}

Bits ColoringWitness::color_class(int c) const {
    Bits out = 0;
    for (std::size_t v = 0; v < colors.size(); ++v)
        if (colors[v] == c) out |= bit(static_cast<int>(v));
    return out;
}

std::string ColoringWitness::to_text() const {
    std::ostringstream os;
    for (std::size_t v = 0; v < colors.size(); ++v) os << v + 1 << ':' << colors[v] + 1 << '\n';
    return os.str();
}

std::vector<int> seed_clique(const Graph& g) {
    std::vector<int> clique;
    Bits cand = g.vertex_mask();
    while (cand) {
        int best = -1;
        for_each_bit(cand, [&](int v) {
            if (best < 0 || g.degree(v) > g.degree(best)) best = v;
        });
        clique.push_back(best);
        cand &= g.neighbors(best);
    }
    return clique;
}

namespace {

// DSATUR-style backtracking over per-colour vertex masks.
class Engine {
public:
    using Visit = std::function<bool(const std::vector<Bits>&)>;

    Engine(const Graph& g, int k, Symmetry sym, const Visit& visit)
        : g_(g), k_(k), sym_(sym), visit_(visit), cls_(static_cast<std::size_t>(std::max(k, 0)), 0) {}

    // Returns false if the visitor stopped the search.
    bool run() {
        const int n = g_.order();
        if (n == 0) return visit_(cls_);
        if (k_ <= 0) return true;
        uncolored_ = g_.vertex_mask();
        used_ = 0;
        if (sym_ != Symmetry::None) {
            auto seed = seed_clique(g_);
            if (static_cast<int>(seed.size()) > k_) return true;
            for (std::size_t i = 0; i < seed.size(); ++i) {
                cls_[i] |= bit(seed[i]);
                uncolored_ &= ~bit(seed[i]);
            }
            used_ = static_cast<int>(seed.size());
        }
        return search();
    }

private:
    int limit() const { return sym_ == Symmetry::Canonical ? std::min(used_ + 1, k_) : k_; }

    bool search() {
        if (uncolored_ == 0) return visit_(cls_);
        const int lim = limit();
        int pick = -1, pick_free = 1 << 30, pick_deg = -1;
        Bits pick_opts = 0;
        for_each_bit(uncolored_, [&](int v) {
            if (pick_free == 0) return;
            Bits nb = g_.neighbors(v);
            Bits opts = 0;
            for (int c = 0; c < lim; ++c)
                if ((cls_[c] & nb) == 0) opts |= bit(c);
            int free = popcount(opts);
            int deg = popcount(nb & uncolored_);
            if (free < pick_free || (free == pick_free && deg > pick_deg)) {
                pick = v;
                pick_free = free;
                pick_deg = deg;
                pick_opts = opts;
            }
        });
        if (pick_free == 0) return true;
        uncolored_ &= ~bit(pick);
        bool go_on = true;
        for_each_bit(pick_opts, [&](int c) {
            if (!go_on) return;
            int saved = used_;
            if (c >= used_) used_ = c + 1;
            cls_[c] |= bit(pick);
            go_on = search();
            cls_[c] &= ~bit(pick);
            used_ = saved;
        });
        uncolored_ |= bit(pick);
        return go_on;
    }

    const Graph& g_;
    int k_;
    Symmetry sym_;
    const Visit& visit_;
    std::vector<Bits> cls_;
    Bits uncolored_ = 0;
    int used_ = 0;
};

ColoringWitness witness_from_masks(int n, const std::vector<Bits>& cls) {
    ColoringWitness w;
    w.colors.assign(static_cast<std::size_t>(n), -1);
    for (std::size_t c = 0; c < cls.size(); ++c) for_each_bit(cls[c], [&](int v) { w.colors[v] = static_cast<int>(c); });
    return w;
}

}  // namespace

bool for_each_coloring(const Graph& g, int k, Symmetry sym, const std::function<bool(const std::vector<Bits>&)>& visit) {
    Engine e(g, k, sym, visit);
    return e.run();
}

std::optional<ColoringWitness> is_k_colorable(const Graph& g, int k) {
    if (k < 0) return std::nullopt;
    std::optional<ColoringWitness> out;
    for_each_coloring(g, k, Symmetry::Canonical, [&](const std::vector<Bits>& cls) {
        out = witness_from_masks(g.order(), cls);
        return false;
    });
    return out;
}

int chromatic_number(const Graph& g) {
    int k = clique_number(g);
    while (!is_k_colorable(g, k)) ++k;
    return k;
}

ColoringList enumerate_colorings(const Graph& g, int k, std::size_t cap, Symmetry sym) {
    if (cap < 1) throw std::invalid_argument("enumerate_colorings: cap must be at least 1");
    ColoringList out;
    for_each_coloring(g, k, sym, [&](const std::vector<Bits>& cls) {
        if (out.colorings.size() == cap) {
            out.truncated = true;
            return false;
        }
        out.colorings.push_back(witness_from_masks(g.order(), cls));
        return true;
    });
    return out;
}

std::vector<Bits> color_class_sets(const Graph& g, int k, std::size_t max_sets, std::size_t coloring_cap) {
    std::vector<Bits> out;
    std::size_t seen = 0;
    for_each_coloring(g, k, Symmetry::Canonical, [&](const std::vector<Bits>& cls) {
        if (seen++ == coloring_cap) return false;
        for (Bits s : cls)
            if (s && popcount(s) <= 2) out.push_back(s);
        return true;
    });
    std::sort(out.begin(), out.end(), [](Bits a, Bits b) {
        int pa = popcount(a), pb = popcount(b);
        return pa != pb ? pa < pb : a < b;
    });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    if (max_sets != 0 && out.size() > max_sets) out.resize(max_sets);
    return out;
}

AssignmentList monochromatic_assignments(const Graph& g, int u, int v, int k, std::size_t cap, Symmetry sym) {
    if (u < 0 || v < 0 || u >= g.order() || v >= g.order() || !g.adjacent(u, v))
        throw std::invalid_argument("monochromatic_assignments: (" + std::to_string(u + 1) + "," + std::to_string(v + 1) +
                                    ") is not an edge");
    Graph h = vertex_identify(g, u, v);
    // h vertex i corresponds to g vertex i + (i >= u).
    AssignmentList out;
    const int n = g.order();
    for_each_coloring(h, k, sym, [&](const std::vector<Bits>& cls) {
        if (out.assignments.size() == cap) {
            out.gave_up = true;
            out.assignments.clear();
            return false;
        }
        ColoringWitness w;
        w.colors.assign(static_cast<std::size_t>(n), -1);
        for (std::size_t c = 0; c < cls.size(); ++c)
            for_each_bit(cls[c], [&](int i) { w.colors[i + (i >= u ? 1 : 0)] = static_cast<int>(c); });
        w.colors[u] = w.colors[v];
        out.assignments.push_back(std::move(w));
        return true;
    });
    return out;
}

bool is_edge_critical(const Graph& g, int k) {
    const int n = g.order();
    if (n == 0) return k == 0;
    if (k < 1) return false;
    for (int v = 0; v < n; ++v)
        if (g.degree(v) == 0) return false;
    if (g.min_degree() < k - 1) return false;
    if (is_k_colorable(g, k - 1)) return false;
    Graph h = g;
    for (auto [a, b] : g.edges()) {
        h.remove_edge(a, b);
        bool ok = is_k_colorable(h, k - 1).has_value();
        h.add_edge(a, b);
        if (!ok) return false;
    }
    return true;
}

}  // namespace qchrome
