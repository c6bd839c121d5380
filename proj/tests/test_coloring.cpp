#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "oracles.hpp"
#include "qchrome/coloring.hpp"

using namespace qchrome;

namespace {

using oracle::brute_chi;
using oracle::brute_count;
using oracle::brute_edge_critical;


Graph random_graph(int n, double p, std::mt19937_64& rng) {
    std::bernoulli_distribution coin(p);
    Graph g(n);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (coin(rng)) g.add_edge(u, v);
    return g;
}


}  // namespace

TEST_CASE("colourability basics") {
    CHECK_FALSE(is_k_colorable(Graph::complete(4), 3));
    auto w = is_k_colorable(Graph::cycle(5), 3);
    REQUIRE(w);
    CHECK(w->is_proper(Graph::cycle(5)));
    CHECK(chromatic_number(Graph::complete(6)) == 6);
    CHECK(chromatic_number(Graph::petersen()) == 3);
    CHECK(chromatic_number(Graph::cycle(7)) == 3);
    CHECK(chromatic_number(Graph(3)) == 1);
    CHECK(chromatic_number(Graph(0)) == 0);
    CHECK(w->to_text().substr(0, 4) == "1:1\n");
}

TEST_CASE("chromatic number agrees with brute force") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 120; ++trial) {
        int n = 1 + static_cast<int>(rng() % 8);
        Graph g = random_graph(n, 0.55, rng);
        int chi = chromatic_number(g);
        CHECK(chi == brute_chi(g));
        auto w = is_k_colorable(g, chi);
        REQUIRE(w);
        CHECK(w->is_proper(g));
        if (chi > 0) CHECK_FALSE(is_k_colorable(g, chi - 1));
    }
}

TEST_CASE("enumeration counts") {
    auto k3 = enumerate_colorings(Graph::complete(3), 3, 1000);
    CHECK(k3.colorings.size() == 1);
    CHECK(enumerate_colorings(Graph::complete(4), 3, 1000).colorings.empty());
    auto c5 = enumerate_colorings(Graph::cycle(5), 3, 1000, Symmetry::None);
    CHECK(c5.colorings.size() == 30);
    CHECK(brute_count(Graph::cycle(5), 3) == 30);
    auto capped = enumerate_colorings(Graph::cycle(5), 3, 10, Symmetry::None);
    CHECK(capped.truncated);
    CHECK(capped.colorings.size() == 10);

    // symmetry-broken counts times k! / (k - used)! recover the full count
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 60; ++trial) {
        int n = 1 + static_cast<int>(rng() % 7);
        int k = 1 + static_cast<int>(rng() % 4);
        Graph g = random_graph(n, 0.4, rng);
        auto all = enumerate_colorings(g, k, 1000000, Symmetry::None);
        CHECK(static_cast<long>(all.colorings.size()) == brute_count(g, k));
        for (auto& c : all.colorings) CHECK(c.is_proper(g));
        auto canon = enumerate_colorings(g, k, 1000000, Symmetry::Canonical);
        long recovered = 0;
        for (auto& c : canon.colorings) {
            long f = 1;
            for (int i = 0; i < c.colors_used(); ++i) f *= k - i;
            recovered += f;
        }
        CHECK(recovered == brute_count(g, k));
    }
}

TEST_CASE("colour class sets") {
    auto c5 = color_class_sets(Graph::cycle(5), 3);
    CHECK_FALSE(c5.empty());
    for (Bits s : c5) {
        CHECK(popcount(s) <= 2);
        CHECK(Graph::cycle(5).is_independent(s));
    }
    auto k4 = color_class_sets(Graph::complete(4), 4);
    CHECK(k4 == std::vector<Bits>{bit(0), bit(1), bit(2), bit(3)});

    // Oracle: collect classes of size <= 2 from full enumeration.
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 60; ++trial) {
        int n = 2 + static_cast<int>(rng() % 6);
        int k = 2 + static_cast<int>(rng() % 3);
        Graph g = random_graph(n, 0.45, rng);
        std::set<Bits> want;
        for (auto& c : enumerate_colorings(g, k, 1000000, Symmetry::None).colorings)
            for (int col = 0; col < k; ++col) {
                Bits s = c.color_class(col);
                if (s && popcount(s) <= 2) want.insert(s);
            }
        auto got = color_class_sets(g, k);
        CHECK(std::set<Bits>(got.begin(), got.end()) == want);
        // soundness of adding a vertex to a stored class
        for (Bits s : got) {
            Graph h = g;
            Bits nb = g.vertex_mask() & ~s;
            h.add_vertex(nb & ((rng() | 1) & g.vertex_mask()));
            if ((h.neighbors(n) & s) == 0) CHECK(is_k_colorable(h, k));
        }
    }
}

TEST_CASE("monochromatic assignments") {
    auto k4 = monochromatic_assignments(Graph::complete(4), 0, 1, 3);
    CHECK(k4.assignments.size() == 6);
    CHECK(monochromatic_assignments(Graph::cycle(4), 0, 1, 2).assignments.empty());
    CHECK_THROWS_AS(monochromatic_assignments(Graph::cycle(4), 0, 2, 2), std::invalid_argument);

    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 60; ++trial) {
        int n = 3 + static_cast<int>(rng() % 5);
        Graph g = random_graph(n, 0.5, rng);
        auto edges = g.edges();
        if (edges.empty()) continue;
        auto [u, v] = edges[rng() % edges.size()];
        int k = 2 + static_cast<int>(rng() % 2);
        auto res = monochromatic_assignments(g, u, v, k, 100000);
        Graph h = g;
        h.remove_edge(u, v);
        long want = 0;
        for (auto& c : enumerate_colorings(h, k, 1000000, Symmetry::None).colorings) want += c.colors[u] == c.colors[v];
        CHECK(static_cast<long>(res.assignments.size()) == want);
        for (auto& a : res.assignments) {
            CHECK(a.colors[u] == a.colors[v]);
            CHECK(a.is_proper(h));
        }
        if (!res.assignments.empty()) CHECK(is_k_colorable(h, k));
    }
    auto capped = monochromatic_assignments(Graph::cycle(7), 0, 1, 3, 3);
    CHECK(capped.gave_up);
}

TEST_CASE("edge criticality") {
    CHECK(is_edge_critical(Graph::complete(4), 4));
    CHECK(is_edge_critical(Graph::cycle(5), 3));
    CHECK_FALSE(is_edge_critical(Graph::cycle(6), 3));
    CHECK_FALSE(is_edge_critical(Graph::petersen(), 3));
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 150; ++trial) {
        int n = 3 + static_cast<int>(rng() % 5);
        Graph g = random_graph(n, 0.6, rng);
        for (int k = 3; k <= 5; ++k) {
            bool crit = is_edge_critical(g, k);
            CHECK(crit == brute_edge_critical(g, k));
            if (crit) CHECK(g.min_degree() >= k - 1);
        }
    }
}
