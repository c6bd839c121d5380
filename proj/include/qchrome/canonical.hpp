#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "qchrome/graph.hpp"

namespace qchrome {

/// Isomorphism-invariant token: the order followed by the adjacency rows of
/// the canonically relabeled graph (plus colour-class sizes when coloured).
struct CanonicalForm {
    std::vector<Bits> words;

    auto operator<=>(const CanonicalForm&) const = default;
    bool operator==(const CanonicalForm&) const = default;
};

struct CanonicalFormHash {
    std::size_t operator()(const CanonicalForm& f) const noexcept;
};

struct CanonicalLabeling {
    /// order[p] = vertex placed at canonical position p.
    std::vector<int> order;
    /// Automorphisms found during the search; they generate the full group
    /// of the (coloured) graph. Each maps vertex v to perm[v].
    std::vector<std::vector<int>> generators;
    /// orbit[v] = smallest vertex in v's automorphism orbit.
    std::vector<int> orbit;
    CanonicalForm form;
};

/// Canonical labeling by equitable refinement and backtracking with
/// automorphism pruning. `colors` (optional, one entry per vertex) fixes an
/// ordered initial partition: vertices with smaller colour values come first.
CanonicalLabeling canonical_labeling(const Graph& g, std::span<const int> colors = {});

CanonicalForm canonical_form(const Graph& g);

bool isomorphic(const Graph& a, const Graph& b);

}  // namespace qchrome
