#include "qchrome/graph.hpp"

#include <algorithm>

namespace qchrome {

Graph::Graph(int n) : n_(n) {
    if (n < 0 || n > kMaxVertices)
        throw std::invalid_argument("graph order " + std::to_string(n) + " outside [0, 64]");
}

Graph::Graph(int n, const std::vector<std::pair<int, int>>& edges) : Graph(n) {
    for (auto [u, v] : edges) add_edge(u, v);
}

Graph Graph::complete(int n) {
    Graph g(n);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) g.add_edge(u, v);
    return g;
}

Graph Graph::cycle(int n) {
    Graph g(n);
    for (int u = 0; u < n; ++u) g.add_edge(u, (u + 1) % n);
    return g;
}

Graph Graph::path(int n) {
    Graph g(n);
    for (int u = 0; u + 1 < n; ++u) g.add_edge(u, u + 1);
    return g;
}

Graph Graph::complete_bipartite(int a, int b) {
    Graph g(a + b);
    for (int u = 0; u < a; ++u)
        for (int v = 0; v < b; ++v) g.add_edge(u, a + v);
    return g;
}

Graph Graph::petersen() {
    Graph g(10);
    for (int i = 0; i < 5; ++i) {
        g.add_edge(i, (i + 1) % 5);
        g.add_edge(i, i + 5);
        g.add_edge(5 + i, 5 + (i + 2) % 5);
    }
    return g;
}

void Graph::check_vertex(int v) const {
    if (v < 0 || v >= n_) throw std::out_of_range("vertex " + std::to_string(v) + " out of range");
}

int Graph::min_degree() const {
    int best = n_ == 0 ? 0 : n_;
    for (int v = 0; v < n_; ++v) best = std::min(best, degree(v));
    return best;
}

int Graph::max_degree() const {
    int best = 0;
    for (int v = 0; v < n_; ++v) best = std::max(best, degree(v));
    return best;
}

int Graph::edge_count() const {
    int twice = 0;
    for (int v = 0; v < n_; ++v) twice += degree(v);
    return twice / 2;
}

std::vector<std::pair<int, int>> Graph::edges() const {
    std::vector<std::pair<int, int>> out;
    for (int u = 0; u < n_; ++u)
        for_each_bit(rows_[u] & ~(bit(u + 1) - 1), [&](int v) { out.emplace_back(u, v); });
    return out;
}

void Graph::add_edge(int u, int v) {
    check_vertex(u);
    check_vertex(v);
    if (u == v) throw std::invalid_argument("self-loop on vertex " + std::to_string(u));
    rows_[u] |= bit(v);
    rows_[v] |= bit(u);
}

void Graph::remove_edge(int u, int v) {
    check_vertex(u);
    check_vertex(v);
    rows_[u] &= ~bit(v);
    rows_[v] &= ~bit(u);
}

int Graph::add_vertex(Bits nbrs) {
    if (n_ == kMaxVertices) throw std::length_error("graph already has 64 vertices");
    if (nbrs & ~vertex_mask()) throw std::invalid_argument("neighbourhood outside vertex set");
    int v = n_++;
    rows_[v] = nbrs;
    for_each_bit(nbrs, [&](int u) { rows_[u] |= bit(v); });
    return v;
}

Graph Graph::delete_vertex(int v) const {
    check_vertex(v);
    return induced(vertex_mask() & ~bit(v));
}

Graph Graph::induced(Bits keep) const {
    keep &= vertex_mask();
    std::vector<int> perm = bits_to_vector(keep);
    return relabeled(perm);
}

Graph Graph::relabeled(const std::vector<int>& perm) const {
    Graph g(static_cast<int>(perm.size()));
    for (std::size_t i = 0; i < perm.size(); ++i)
        for (std::size_t j = i + 1; j < perm.size(); ++j)
            if (adjacent(perm[i], perm[j])) g.add_edge(static_cast<int>(i), static_cast<int>(j));
    return g;
}

bool Graph::is_clique(Bits s) const {
    Bits rest = s;
    while (rest) {
        int v = lowest(rest);
        rest &= rest - 1;
        if ((rows_[v] & rest) != rest) return false;
    }
    return true;
}

bool Graph::is_independent(Bits s) const {
    bool ok = true;
    for_each_bit(s, [&](int v) { ok = ok && (rows_[v] & s) == 0; });
    return ok;
}

// graph6 ---------------------------------------------------------------------

Graph parse_graph6(std::string_view text) {
    while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.remove_suffix(1);
    if (text.empty()) throw Graph6Error("empty graph6 string", 0);
    auto byte_at = [&](std::size_t i) {
        int c = static_cast<unsigned char>(text[i]);
        if (c < 63 || c > 126) throw Graph6Error("byte " + std::to_string(c) + " outside [63,126]", i);
        return c - 63;
    };
    int n = byte_at(0);
    if (n > 62) throw Graph6Error("graph orders above 62 are not supported", 0);
    std::size_t nbits = static_cast<std::size_t>(n) * (n - 1) / 2;
    std::size_t nbytes = (nbits + 5) / 6;
    if (text.size() != 1 + nbytes)
        throw Graph6Error("expected " + std::to_string(1 + nbytes) + " bytes for n=" + std::to_string(n) +
                              ", found " + std::to_string(text.size()),
                          std::min(text.size(), 1 + nbytes));
    Graph g(n);
    std::size_t k = 0;
    for (int j = 1; j < n; ++j) {
        for (int i = 0; i < j; ++i, ++k) {
            int b = byte_at(1 + k / 6);
            if ((b >> (5 - k % 6)) & 1) g.add_edge(i, j);
        }
    }
    if (nbytes > 0) {
        std::size_t last = nbytes;  // offset of final byte
        int pad = static_cast<int>(nbytes * 6 - nbits);
        int b = byte_at(last);
        if (b & ((1 << pad) - 1)) throw Graph6Error("nonzero padding bits", last);
    }
    return g;
}

std::string emit_graph6(const Graph& g) {
    int n = g.order();
    if (n > 62) throw std::invalid_argument("graph6 output supports at most 62 vertices, got " + std::to_string(n));
    std::string out(1, static_cast<char>(63 + n));
    int acc = 0, used = 0;
    for (int j = 1; j < n; ++j) {
        for (int i = 0; i < j; ++i) {
            acc = (acc << 1) | (g.adjacent(i, j) ? 1 : 0);
            if (++used == 6) {
                out.push_back(static_cast<char>(63 + acc));
                acc = used = 0;
            }
        }
    }
    if (used > 0) out.push_back(static_cast<char>(63 + (acc << (6 - used))));
    return out;
}

// cliques --------------------------------------------------------------------

namespace {

// Bron-Kerbosch with Tomita pivoting.
void bron_kerbosch(const Graph& g, Bits r, Bits p, Bits x, std::vector<Bits>& out) {
    if (p == 0) {
        if (x == 0) out.push_back(r);
        return;
    }
    int pivot = -1, best = -1;
    for_each_bit(p | x, [&](int u) {
        int c = popcount(p & g.neighbors(u));
        if (c > best) {
            best = c;
            pivot = u;
        }
    });
    Bits cand = p & ~g.neighbors(pivot);
    while (cand) {
        int v = lowest(cand);
        cand &= cand - 1;
        bron_kerbosch(g, r | bit(v), p & g.neighbors(v), x & g.neighbors(v), out);
        p &= ~bit(v);
        x |= bit(v);
    }
}

bool lex_less(Bits a, Bits b) {
    // Compare sorted vertex lists lexicographically.
    while (a && b) {
        int x = lowest(a), y = lowest(b);
        if (x != y) return x < y;
        a &= a - 1;
        b &= b - 1;
    }
    return a == 0 && b != 0;
}

void max_clique_search(const Graph& g, Bits r, int rsize, Bits p, Bits& best, int& best_size) {
    if (p == 0) {
        if (rsize > best_size) {
            best_size = rsize;
            best = r;
        }
        return;
    }
    // Greedy colouring bound on p.
    std::vector<int> order;
    std::vector<int> bound;
    Bits uncolored = p;
    int color = 0;
    while (uncolored) {
        ++color;
        Bits avail = uncolored;
        while (avail) {
            int v = lowest(avail);
            avail &= ~g.neighbors(v) & ~bit(v);
            uncolored &= ~bit(v);
            order.push_back(v);
            bound.push_back(color);
        }
    }
    for (int i = static_cast<int>(order.size()) - 1; i >= 0; --i) {
        if (rsize + bound[i] <= best_size) return;
        int v = order[i];
        max_clique_search(g, r | bit(v), rsize + 1, p & g.neighbors(v), best, best_size);
        p &= ~bit(v);
    }
}

}  // namespace

std::vector<Bits> maximal_clique_masks(const Graph& g) {
    std::vector<Bits> out;
    if (g.order() == 0) return out;
    bron_kerbosch(g, 0, g.vertex_mask(), 0, out);
    std::sort(out.begin(), out.end(), lex_less);
    return out;
}

std::vector<std::vector<int>> maximal_cliques(const Graph& g) {
    std::vector<std::vector<int>> out;
    for (Bits c : maximal_clique_masks(g)) out.push_back(bits_to_vector(c));
    return out;
}

Bits maximum_clique(const Graph& g) {
    Bits best = 0;
    int best_size = 0;
    max_clique_search(g, 0, 0, g.vertex_mask(), best, best_size);
    return best;
}

int clique_number(const Graph& g) { return popcount(maximum_clique(g)); }

// identifications --------------------------------------------------------------

Graph vertex_identify(const Graph& g, int u, int v) {
    if (u == v) throw std::invalid_argument("vertex_identify needs two distinct vertices");
    if (u < 0 || v < 0 || u >= g.order() || v >= g.order()) throw std::out_of_range("vertex_identify: vertex out of range");
    Graph h = g;
    for_each_bit(g.neighbors(u) & ~bit(v), [&](int w) { h.add_edge(v, w); });
    return h.delete_vertex(u);
}

Graph set_identify(const Graph& g, Bits s) {
    if (popcount(s) < 2) throw std::invalid_argument("set_identify needs at least two vertices");
    if (s & ~g.vertex_mask()) throw std::out_of_range("set_identify: vertex out of range");
    Graph h = g;
    Bits outside = g.vertex_mask() & ~s;
    for_each_bit(s, [&](int u) {
        Bits rest = s & ~bit(u);
        for_each_bit(outside, [&](int w) {
            if ((g.neighbors(w) & rest) == rest) h.add_edge(u, w);
        });
    });
    return h;
}

Graph cartesian_with_complete(const Graph& g, int k) {
    if (k < 1) throw std::invalid_argument("cartesian_with_complete needs k >= 1");
    Graph h(g.order() * k);
    for (int u = 0; u < g.order(); ++u) {
        for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j) h.add_edge(u * k + i, u * k + j);
    }
    for (auto [u, v] : g.edges())
        for (int i = 0; i < k; ++i) h.add_edge(u * k + i, v * k + i);
    return h;
}

}  // namespace qchrome
