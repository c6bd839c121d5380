#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qchrome/graph.hpp"

namespace qchrome {

/// colors[v] in [0, k). Proper when no edge is monochromatic.
struct ColoringWitness {
    std::vector<int> colors;

    bool is_proper(const Graph& g) const;
    int colors_used() const;
    /// Vertices holding colour c.
    Bits color_class(int c) const;
    /// "vertex:colour" lines, both 1-based.
    std::string to_text() const;
};

/// How the backtracking search breaks colour symmetry.
enum class Symmetry {
    None,         ///< every proper colouring
    CliqueSeed,   ///< vertex i of a seed clique is forced to colour i
    Canonical,    ///< clique seed plus "next unused colour" for the rest
};

/// Greedy seed clique: highest degree first, ties by label.
std::vector<int> seed_clique(const Graph& g);

std::optional<ColoringWitness> is_k_colorable(const Graph& g, int k);
int chromatic_number(const Graph& g);

struct ColoringList {
    std::vector<ColoringWitness> colorings;
    bool truncated = false;
};

/// All proper k-colourings modulo the chosen symmetry breaking. Stops and
/// sets `truncated` once more than `cap` colourings exist.
ColoringList enumerate_colorings(const Graph& g, int k, std::size_t cap, Symmetry sym = Symmetry::CliqueSeed);

/// Visits colourings (as per-colour vertex masks) until the visitor returns false.
/// Returns false if the visit was stopped early.
bool for_each_coloring(const Graph& g, int k, Symmetry sym, const std::function<bool(const std::vector<Bits>&)>& visit);

/// Distinct independent sets of size <= 2 that occur as whole colour classes
/// among the first `coloring_cap` colourings found (one per colour
/// partition). Singletons come first, then pairs, in mask order.
/// `max_sets` == 0 means no limit.
std::vector<Bits> color_class_sets(const Graph& g, int k, std::size_t max_sets = 0, std::size_t coloring_cap = 5000);

struct AssignmentList {
    std::vector<ColoringWitness> assignments;
    bool gave_up = false;
};

/// Colourings of g in which u and v share a colour and every other edge is
/// proper, computed through vertex_identify(g, u, v). Gives up once more
/// than `cap` exist. Throws std::invalid_argument if (u,v) is not an edge.
AssignmentList monochromatic_assignments(const Graph& g, int u, int v, int k, std::size_t cap = 5000,
                                         Symmetry sym = Symmetry::None);

bool is_edge_critical(const Graph& g, int k);

}  // namespace qchrome
