#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <random>

#include "oracles.hpp"
#include "qchrome/critgen.hpp"

using namespace qchrome;

namespace {

std::vector<Graph> run(int n, int k, int res = 0, int mod = 1) {
    EnumerationConfig cfg;
    cfg.n = n;
    cfg.k = k;
    cfg.split_residue = res;
    cfg.split_modulus = mod;
    std::vector<Graph> out;
    enumerate_edge_critical(cfg, [&](const Graph& g) { out.push_back(g); });
    return out;
}

std::set<CanonicalForm> forms(const std::vector<Graph>& gs) {
    std::set<CanonicalForm> s;
    for (auto& g : gs) s.insert(canonical_form(g));
    return s;
}

}  // namespace

TEST_CASE("config validation") {
    EnumerationConfig cfg;
    cfg.n = 5;
    cfg.k = 3;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.k = 6;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.k = 4;
    CHECK_NOTHROW(cfg.validate());
    cfg.split_modulus = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.split_modulus = 3;
    cfg.split_residue = 3;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.split_residue = 2;
    cfg.num_edges = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("small table cells") {
    const std::map<std::pair<int, int>, std::size_t> table = {
        {{4, 4}, 1}, {{5, 4}, 0}, {{6, 4}, 1}, {{7, 4}, 2}, {{8, 4}, 5},  {{5, 5}, 1},
        {{6, 5}, 0}, {{7, 5}, 1}, {{8, 5}, 2}, {{6, 6}, 1}, {{7, 6}, 0}, {{8, 6}, 1},
    };
    for (auto [nk, count] : table) {
        auto gs = run(nk.first, nk.second);
        CHECK(gs.size() == count);
        for (auto& g : gs) CHECK(is_edge_critical(g, nk.second));
        CHECK(forms(gs).size() == gs.size());
    }
    auto k4 = run(4, 4);
    REQUIRE(k4.size() == 1);
    CHECK(isomorphic(k4[0], Graph::complete(4)));
}

TEST_CASE("oracle equivalence up to eight vertices") {
    for (int k = 4; k <= 5; ++k)
        for (int n = k; n <= 8; ++n) {
            auto got = run(n, k);
            CHECK(forms(got) == oracle::critical_forms(n, k));
            CHECK(forms(got).size() == got.size());
        }
}

TEST_CASE("split residues partition the output") {
    auto full = run(9, 4);
    CHECK(full.size() == 21);
    for (int mod : {2, 3, 7}) {
        std::vector<CanonicalForm> all;
        for (int r = 0; r < mod; ++r)
            for (auto& g : run(9, 4, r, mod)) all.push_back(canonical_form(g));
        std::set<CanonicalForm> uniq(all.begin(), all.end());
        CHECK(uniq.size() == all.size());
        CHECK(uniq == forms(full));
    }
}

TEST_CASE("parent precomputation") {
    EnumerationConfig cfg;
    cfg.n = 5;
    cfg.k = 4;
    CHECK_FALSE(precompute_parent(Graph::complete(4), cfg));
    CHECK_FALSE(precompute_parent(Graph::cycle(4), cfg));
    auto pre = precompute_parent(Graph::cycle(5), cfg);
    REQUIRE(pre);
    CHECK(pre->edges.size() == 4);
    for (std::size_t i = 1; i < pre->edges.size(); ++i)
        CHECK(pre->edges[i - 1].assignments.size() <= pre->edges[i].assignments.size());
    for (auto& se : pre->edges)
        for (auto& cls : se.assignments) {
            // proper except on the stored edge
            Graph h = Graph::cycle(5);
            h.remove_edge(se.edge.first, se.edge.second);
            for (Bits c : cls) CHECK(h.is_independent(c));
            Bits all = 0;
            for (Bits c : cls) all |= c;
            CHECK(all == h.vertex_mask());
        }
}

TEST_CASE("empty assignment list sorts first") {
    // C5 with its hub split into adjacent h1 ~ {0,1,2}, h2 ~ {3,4}: chi 3,
    // but contracting h1h2 gives the wheel W5, which needs 4 colours.
    Graph g = Graph::cycle(5);
    int h1 = g.add_vertex(bit(0) | bit(1) | bit(2));
    int h2 = g.add_vertex(bit(3) | bit(4) | bit(h1));
    REQUIRE(chromatic_number(g) == 3);
    EnumerationConfig cfg;
    cfg.n = 8;
    cfg.k = 4;
    cfg.num_edges = g.edge_count();
    auto pre = precompute_parent(g, cfg);
    REQUIRE(pre);
    CHECK(pre->edges.front().assignments.empty());
    CHECK(pre->edges.front().edge == std::pair<int, int>{h1, h2});
    for (std::size_t i = 1; i < pre->edges.size(); ++i) CHECK_FALSE(pre->edges[i].assignments.empty());
}

TEST_CASE("preprune decisions") {
    EnumerationConfig cfg;
    cfg.n = 6;
    cfg.k = 4;
    Graph c5 = Graph::cycle(5);
    auto pre = precompute_parent(c5, cfg);
    REQUIRE(pre);
    Graph lonely = c5;
    lonely.add_vertex(0);
    CHECK_FALSE(preprune_child(lonely, *pre));
    Graph wheel = c5;
    wheel.add_vertex(c5.vertex_mask());
    CHECK(preprune_child(wheel, *pre));
    CHECK(is_edge_critical(wheel, 4));

    cfg.n = 4;
    auto k3 = precompute_parent(Graph::complete(3), cfg);
    REQUIRE(k3);
    Graph k4 = Graph::complete(3);
    k4.add_vertex(k4.vertex_mask());
    CHECK(preprune_child(k4, *k3));
}

TEST_CASE("heuristic tests are sound on random children") {
    std::mt19937_64 rng(31);
    int checked = 0;
    for (int trial = 0; trial < 400; ++trial) {
        int m = 5 + static_cast<int>(rng() % 4);
        int k = 4 + static_cast<int>(rng() % 2);
        Graph g(m);
        std::bernoulli_distribution coin(0.5);
        for (int u = 0; u < m; ++u)
            for (int v = u + 1; v < m; ++v)
                if (coin(rng)) g.add_edge(u, v);
        EnumerationConfig cfg;
        cfg.n = m + 1;
        cfg.k = k;
        auto pre = precompute_parent(g, cfg);
        if (!pre) continue;
        for (Bits nb = 0; nb < (Bits{1} << m); ++nb) {
            Graph child = g;
            child.add_vertex(nb);
            bool t1 = true;
            for (Bits s : pre->class_sets)
                if ((s & nb) == 0) t1 = false;
            if (!t1) CHECK(is_k_colorable(child, k - 1));
            if (!preprune_child(child, *pre)) CHECK_FALSE(is_edge_critical(child, k));
            ++checked;
        }
    }
    CHECK(checked > 1000);
}
