#include "qchrome/critgen.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <unordered_set>

#include "qchrome/canonical.hpp"
#include "qchrome/coloring.hpp"

namespace qchrome {

void EnumerationConfig::validate() const {
    auto bad = [](const std::string& m) { throw std::invalid_argument("enumeration config: " + m); };
    if (k < 4 || k > n) bad("need 4 <= k <= n");
    if (n > 24) bad("n above 24 is not supported");
    if (num_edges < 1) bad("num_edges must be at least 1");
    if (assignment_cap < 1) bad("assignment_cap must be at least 1");
    if (split_modulus < 1) bad("split modulus must be at least 1");
    if (split_residue < 0 || split_residue >= split_modulus) bad("split residue outside [0, modulus)");
    if (split_level < 0 || split_level >= n) bad("split level outside [0, n)");
}

int EnumerationConfig::effective_split_level() const { return split_level > 0 ? split_level : std::max(1, n - 3); }

std::optional<ParentPrecomp> precompute_parent(const Graph& g, const EnumerationConfig& cfg) {
    const int k = cfg.k;
    if (!is_k_colorable(g, k - 1) || is_k_colorable(g, k - 2)) return std::nullopt;
    ParentPrecomp pre;
    pre.class_sets = color_class_sets(g, k - 1, cfg.num_sets, cfg.assignment_cap);
    for (auto [u, v] : g.edges()) {
        if (pre.edges.size() == cfg.num_edges) break;
        auto res = monochromatic_assignments(g, u, v, k - 1, cfg.assignment_cap, Symmetry::Canonical);
        if (res.gave_up) continue;
        StoredEdge se;
        se.edge = {u, v};
        for (auto& w : res.assignments) {
            std::vector<Bits> cls(static_cast<std::size_t>(k - 1), 0);
            for (std::size_t x = 0; x < w.colors.size(); ++x) cls[w.colors[x]] |= bit(static_cast<int>(x));
            se.assignments.push_back(std::move(cls));
        }
        pre.edges.push_back(std::move(se));
    }
    std::stable_sort(pre.edges.begin(), pre.edges.end(),
                     [](const StoredEdge& a, const StoredEdge& b) { return a.assignments.size() < b.assignments.size(); });
    return pre;
}

namespace {

bool test1(Bits nbrs, const ParentPrecomp& pre) {
    for (Bits s : pre.class_sets)
        if ((s & nbrs) == 0) return false;
    return true;
}

bool test2(Bits nbrs, const ParentPrecomp& pre) {
    for (const auto& se : pre.edges) {
        bool found = false;
        for (const auto& cls : se.assignments) {
            for (Bits c : cls)
                if ((c & nbrs) == 0) {
                    found = true;
                    break;
                }
            if (found) break;
        }
        if (!found) return false;
    }
    return true;
}

}  // namespace

bool preprune_neighborhood(Bits nbrs, const ParentPrecomp& pre) { return test1(nbrs, pre) && test2(nbrs, pre); }

bool preprune_child(const Graph& child, const ParentPrecomp& pre) {
    int last = child.order() - 1;
    return preprune_neighborhood(child.neighbors(last), pre);
}

namespace {

// Calls f(S) for every subset S of `pool` with |S| == size.
template <class F>
void for_each_subset(Bits pool, int size, F&& f) {
    std::vector<int> items = bits_to_vector(pool);
    int m = static_cast<int>(items.size());
    if (size < 0 || size > m) return;
    std::vector<int> idx(size);
    for (int i = 0; i < size; ++i) idx[i] = i;
    while (true) {
        Bits s = 0;
        for (int i : idx) s |= bit(items[i]);
        f(s);
        int i = size - 1;
        while (i >= 0 && idx[i] == m - size + i) --i;
        if (i < 0) return;
        ++idx[i];
        for (int j = i + 1; j < size; ++j) idx[j] = idx[j - 1] + 1;
    }
}

int nbr_degree_sum(const Graph& g, int v) {
    int s = 0;
    for_each_bit(g.neighbors(v), [&](int u) { s += g.degree(u); });
    return s;
}

int nbr_edges(const Graph& g, int v) {
    int s = 0;
    Bits nb = g.neighbors(v);
    for_each_bit(nb, [&](int u) { s += popcount(g.neighbors(u) & nb); });
    return s / 2;
}

struct Verdict {
    bool accept = false;
    std::optional<CanonicalLabeling> labeling;
};

// Accept iff the last vertex lies in the orbit of the canonically chosen
// minimum-degree vertex.
Verdict canonical_last(const Graph& g) {
    const int last = g.order() - 1;
    const int dmin = g.min_degree();
    if (g.degree(last) != dmin) return {};
    Bits cand = 0;
    for (int v = 0; v <= last; ++v)
        if (g.degree(v) == dmin) cand |= bit(v);
    if (cand == bit(last)) return {true, std::nullopt};

    auto narrow = [&](auto&& inv) {
        int best = 1 << 30;
        for_each_bit(cand, [&](int v) { best = std::min(best, inv(v)); });
        Bits keep = 0;
        for_each_bit(cand, [&](int v) {
            if (inv(v) == best) keep |= bit(v);
        });
        cand = keep;
    };
    narrow([&](int v) { return nbr_degree_sum(g, v); });
    if (!(cand & bit(last))) return {};
    if (cand == bit(last)) return {true, std::nullopt};
    narrow([&](int v) { return nbr_edges(g, v); });
    if (!(cand & bit(last))) return {};
    if (cand == bit(last)) return {true, std::nullopt};

    std::vector<int> colors(static_cast<std::size_t>(g.order()), 1);
    for_each_bit(cand, [&](int v) { colors[v] = 0; });
    CanonicalLabeling lab = canonical_labeling(g, colors);
    bool ok = lab.orbit[last] == lab.orbit[lab.order[0]];
    return {ok, std::move(lab)};
}

Bits apply_perm(Bits s, const std::vector<int>& perm) {
    Bits out = 0;
    for_each_bit(s, [&](int v) { out |= bit(perm[v]); });
    return out;
}

// True if no automorphism maps s to a numerically smaller mask.
bool orbit_minimal(Bits s, const std::vector<std::vector<int>>& gens) {
    if (gens.empty()) return true;
    std::unordered_set<Bits> seen{s};
    std::vector<Bits> stack{s};
    while (!stack.empty()) {
        Bits cur = stack.back();
        stack.pop_back();
        for (const auto& g : gens) {
            Bits img = apply_perm(cur, g);
            if (img < s) return false;
            if (seen.insert(img).second) stack.push_back(img);
        }
    }
    return true;
}

class Generator {
public:
    Generator(const EnumerationConfig& cfg, const std::function<void(const Graph&)>& sink, EnumerationStats& stats)
        : cfg_(cfg), sink_(sink), stats_(stats), split_level_(cfg.effective_split_level()) {
        stats_.nodes_per_level.assign(static_cast<std::size_t>(cfg.n + 1), 0);
    }

    void run() {
        Graph one(1);
        visit(one, std::nullopt);
    }

private:
    const std::vector<std::vector<int>>& automorphisms(const Graph& g, std::optional<CanonicalLabeling>& lab) {
        if (!lab) lab = canonical_labeling(g);
        return lab->generators;
    }

    void visit(const Graph& g, std::optional<CanonicalLabeling> lab) {
        const int m = g.order();
        ++stats_.nodes_per_level[m];
        if (m == split_level_ && cfg_.split_modulus > 1) {
            bool mine = split_counter_++ % static_cast<std::uint64_t>(cfg_.split_modulus) ==
                        static_cast<std::uint64_t>(cfg_.split_residue);
            if (!mine) return;
        }
        if (m == cfg_.n - 1) {
            final_level(g, lab);
            return;
        }
        const int k = cfg_.k;
        const int rem = cfg_.n - m - 1;  // vertices still to come after the child
        const int dmin = g.min_degree();
        // Old vertex u needs deg(u) + [u in N] + rem >= k - 1.
        Bits must = 0;
        for (int u = 0; u < m; ++u) {
            if (g.degree(u) + rem + 1 < k - 1) return;
            if (g.degree(u) + rem < k - 1) must |= bit(u);
        }
        const int lo = std::max({0, k - 1 - rem, popcount(must)});
        const int hi = std::min(m, dmin + 1);
        for (int s = lo; s <= hi; ++s) {
            // the new vertex has minimum degree in the child
            Bits low = must;
            for (int u = 0; u < m; ++u)
                if (g.degree(u) < s) low |= bit(u);
            int extra = s - popcount(low);
            if (extra < 0) continue;
            for_each_subset(g.vertex_mask() & ~low, extra, [&](Bits add) {
                Bits nbrs = low | add;
                Graph child = g;
                child.add_vertex(nbrs);
                if (m + 1 == cfg_.n - 1 && !lookahead_ok(child)) return;
                Verdict v = canonical_last(child);
                if (!v.accept) return;
                if (!is_k_colorable(child, k - 1)) return;
                if (!orbit_minimal(nbrs, automorphisms(g, lab))) return;
                visit(child, std::move(v.labeling));
            });
        }
    }

    // Parent of the final level: the last vertex of the final graph has
    // minimum degree >= k - 1 and every other vertex at least that degree.
    bool lookahead_ok(const Graph& p) const {
        const int k = cfg_.k;
        int tight = 0;
        for (int u = 0; u < p.order(); ++u) {
            if (p.degree(u) < k - 2) return false;
            if (p.degree(u) == k - 2) ++tight;
        }
        return tight <= k - 1;
    }

    void final_level(const Graph& g, std::optional<CanonicalLabeling>& lab) {
        const int m = g.order();
        const int k = cfg_.k;
        auto pre = precompute_parent(g, cfg_);
        if (!pre) {
            ++stats_.parents_rejected;
            return;
        }
        for (const auto& se : pre->edges)
            if (se.assignments.empty()) {
                ++stats_.parents_rejected;
                return;
            }
        Bits singles = 0;
        std::vector<Bits> pairs;
        for (Bits s : pre->class_sets) {
            if (popcount(s) == 1)
                singles |= s;
            else
                pairs.push_back(s);
        }
        const int dmin = g.min_degree();
        for (int s = k - 1; s <= std::min(m, dmin + 1); ++s) {
            Bits low = 0;
            for (int u = 0; u < m; ++u)
                if (g.degree(u) < s) low |= bit(u);
            Bits forced = low | singles;
            int extra = s - popcount(forced);
            if (extra < 0) continue;
            for_each_subset(g.vertex_mask() & ~forced, extra, [&](Bits add) {
                Bits nbrs = forced | add;
                for (Bits p : pairs)
                    if ((p & nbrs) == 0) {
                        ++stats_.test1_pruned;
                        return;
                    }
                if (!test2(nbrs, *pre)) {
                    ++stats_.test2_pruned;
                    return;
                }
                if (!orbit_minimal(nbrs, automorphisms(g, lab))) return;
                Graph child = g;
                child.add_vertex(nbrs);
                if (!canonical_last(child).accept) return;
                ++stats_.full_checks;
                if (!is_edge_critical(child, k)) return;
                ++stats_.emitted;
                ++stats_.nodes_per_level[cfg_.n];
                sink_(child);
            });
        }
    }

    const EnumerationConfig& cfg_;
    const std::function<void(const Graph&)>& sink_;
    EnumerationStats& stats_;
    int split_level_;
    std::uint64_t split_counter_ = 0;
};

}  // namespace

std::uint64_t enumerate_edge_critical(const EnumerationConfig& cfg, const std::function<void(const Graph&)>& sink,
                                      EnumerationStats* stats) {
    cfg.validate();
    EnumerationStats local;
    EnumerationStats& st = stats ? *stats : local;
    st = EnumerationStats{};
    Generator gen(cfg, sink, st);
    gen.run();
    return st.emitted;
}

}  // namespace qchrome
