#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qchrome/graph.hpp"
#include "qchrome/verdict.hpp"
#include "qchrome/xi_sdp.hpp"

namespace qchrome {

/// Copy of K_{k-1,2}: every left vertex adjacent to both right vertices.
struct BranchCopy {
    std::vector<int> left;
    int right[2] = {0, 0};

    bool operator==(const BranchCopy& o) const { return left == o.left && right[0] == o.right[0] && right[1] == o.right[1]; }
};

struct BranchGraph {
    enum class Kind { IdentifyRight, IdentifyLeft, SetIdentify };
    Kind kind;
    /// Vertices identified (pair kinds) or the set S, in the parent's labels.
    /// Pair kinds delete the higher vertex and merge it into the lower one.
    Bits vertices;
    Graph graph;
};

/// Throws std::invalid_argument when the copy is not valid in g.
void check_branch_copy(const Graph& g, const BranchCopy& copy, int k);

/// The non-dropped graphs of the expansion rule, in the order: right pair,
/// left pairs, left subsets of size >= 3 (by increasing mask).
std::vector<BranchGraph> branch_graphs(const Graph& g, const BranchCopy& copy, int k);

/// Random draws (cap 10 n^2 when max_draws is 0), then an exhaustive sweep.
/// Returns a copy whose set identifications all add an edge.
std::optional<BranchCopy> find_branchable_biclique(const Graph& g, int k, std::mt19937_64& rng, std::size_t max_draws = 0);

struct ProofNode {
    enum class Outcome { Certificate, Branch, AllDropped, Failure, Budget };
    std::string graph6;
    Outcome outcome = Outcome::Failure;
    std::optional<SdpCertificate> certificate;
    std::optional<BranchCopy> copy;
    std::vector<int> children;
    std::string note;
};

std::string to_string(ProofNode::Outcome o);

struct ProofTree {
    int k = 0;
    std::uint64_t seed = 0;
    bool success = false;
    bool budget_exhausted = false;
    int root = 0;
    std::vector<ProofNode> nodes;
    std::size_t nodes_visited = 0;
    std::size_t sdp_evaluations = 0;
    double seconds = 0.0;

    std::string to_json() const;
    /// Throws std::invalid_argument on malformed input.
    static ProofTree from_json(const std::string& text);
};

struct OrthrankOptions {
    std::size_t max_nodes = 100000;
    double max_seconds = 0.0;   ///< 0: no limit
    std::uint64_t seed = 1;
    Rational eps = Rational(1, 1000);
    SdpOptions sdp;
    bool memo = true;
};

/// Tries to prove that g has no k-dimensional orthogonal representation.
/// k = 2 only tries the base certificate; branching needs k >= 3.
ProofTree prove_no_k_dim_rep(const Graph& g, int k, const OrthrankOptions& opts = {});

/// Offline replay: copy validity, branch lists, leaf certificates. Children
/// may be isomorphic to the expected graphs (memoised nodes).
Verdict check_proof_tree(const ProofTree& tree);

}  // namespace qchrome
