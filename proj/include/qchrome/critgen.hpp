#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "qchrome/graph.hpp"

namespace qchrome {

struct EnumerationConfig {
    int n = 4;
    int k = 4;
    /// Independent sets kept per parent; 0 keeps all of them.
    std::size_t num_sets = 0;
    std::size_t num_edges = 4;
    std::size_t assignment_cap = 5000;
    int split_residue = 0;
    int split_modulus = 1;
    /// Depth at which nodes are dealt out to residues; 0 picks n - 3.
    int split_level = 0;

    /// Throws std::invalid_argument on inconsistent settings.
    void validate() const;
    int effective_split_level() const;
};

struct StoredEdge {
    std::pair<int, int> edge;
    /// Each assignment as per-colour vertex masks over the parent (k-1 colours).
    std::vector<std::vector<Bits>> assignments;
};

struct ParentPrecomp {
    std::vector<Bits> class_sets;
    /// Sorted by ascending assignment count.
    std::vector<StoredEdge> edges;
};

/// Rejects (nullopt) unless chi(g) = k - 1.
std::optional<ParentPrecomp> precompute_parent(const Graph& g, const EnumerationConfig& cfg);

/// True if the child survives both heuristic tests. The child's last vertex
/// is the new one; the first n-1 vertices are the parent the data came from.
bool preprune_child(const Graph& child, const ParentPrecomp& pre);
/// Same tests on the new vertex's neighbourhood mask.
bool preprune_neighborhood(Bits nbrs, const ParentPrecomp& pre);

struct EnumerationStats {
    std::vector<std::uint64_t> nodes_per_level;
    std::uint64_t parents_rejected = 0;
    std::uint64_t test1_pruned = 0;
    std::uint64_t test2_pruned = 0;
    std::uint64_t full_checks = 0;
    std::uint64_t emitted = 0;
};

/// Emits each edge-k-critical graph on cfg.n vertices once up to isomorphism
/// (restricted to the configured split). Returns the number emitted.
std::uint64_t enumerate_edge_critical(const EnumerationConfig& cfg, const std::function<void(const Graph&)>& sink,
                                      EnumerationStats* stats = nullptr);

}  // namespace qchrome
