#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qchrome {

using Bits = std::uint64_t;

inline constexpr Bits bit(int v) { return Bits{1} << v; }
inline int popcount(Bits b) { return std::popcount(b); }
inline int lowest(Bits b) { return std::countr_zero(b); }

/// Calls f(v) for every set bit v of b, lowest first.
template <class F>
inline void for_each_bit(Bits b, F&& f) {
    while (b) {
        f(std::countr_zero(b));
        b &= b - 1;
    }
}

inline std::vector<int> bits_to_vector(Bits b) {
    std::vector<int> out;
    for_each_bit(b, [&](int v) { out.push_back(v); });
    return out;
}

/// Finite simple graph on at most 64 vertices with dense bitset rows.
///
/// Vertices are 0-based inside the library. Everything that faces a user
/// (clique listings, clump indices, CLI output) adds one.
class Graph {
public:
    static constexpr int kMaxVertices = 64;

    Graph() = default;
    explicit Graph(int n);
    Graph(int n, const std::vector<std::pair<int, int>>& edges);

    static Graph complete(int n);
    static Graph cycle(int n);
    static Graph path(int n);
    static Graph complete_bipartite(int a, int b);
    static Graph petersen();

    int order() const { return n_; }
    Bits vertex_mask() const { return n_ == 64 ? ~Bits{0} : bit(n_) - 1; }

    bool adjacent(int u, int v) const { return (rows_[u] >> v) & 1U; }
    Bits neighbors(int v) const { return rows_[v]; }
    int degree(int v) const { return popcount(rows_[v]); }
    int min_degree() const;
    int max_degree() const;
    int edge_count() const;
    std::vector<std::pair<int, int>> edges() const;

    void add_edge(int u, int v);
    void remove_edge(int u, int v);

    /// Appends a vertex adjacent to `nbrs` and returns its index.
    int add_vertex(Bits nbrs);
    Graph delete_vertex(int v) const;
    Graph induced(Bits keep) const;
    /// Graph whose vertex i is this graph's vertex perm[i].
    Graph relabeled(const std::vector<int>& perm) const;

    bool is_clique(Bits s) const;
    bool is_independent(Bits s) const;

    friend bool operator==(const Graph& a, const Graph& b) {
        if (a.n_ != b.n_) return false;
        for (int i = 0; i < a.n_; ++i)
            if (a.rows_[i] != b.rows_[i]) return false;
        return true;
    }

private:
    void check_vertex(int v) const;

    int n_ = 0;
    std::array<Bits, kMaxVertices> rows_{};
};

class Graph6Error : public std::runtime_error {
public:
    Graph6Error(const std::string& what, std::size_t offset)
        : std::runtime_error(what + " at byte " + std::to_string(offset)), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

/// Parses one graph6 record (n <= 62). A single trailing newline is accepted.
Graph parse_graph6(std::string_view text);
/// Throws std::invalid_argument for n > 62.
std::string emit_graph6(const Graph& g);

/// Inclusion-maximal cliques, each sorted ascending, list sorted lexicographically.
std::vector<std::vector<int>> maximal_cliques(const Graph& g);
std::vector<Bits> maximal_clique_masks(const Graph& g);
int clique_number(const Graph& g);
/// A maximum clique as a bitmask (exact branch and bound).
Bits maximum_clique(const Graph& g);

/// Deletes u and joins v to every former neighbour of u. Remaining vertices
/// keep their relative order.
Graph vertex_identify(const Graph& g, int u, int v);
/// Adds (u,w) for u in s, w outside s, whenever w is adjacent to all of s - {u}
/// in the original graph.
Graph set_identify(const Graph& g, Bits s);
/// G box K_k; vertex (u,i) has index u*k + i.
Graph cartesian_with_complete(const Graph& g, int k);

}  // namespace qchrome
