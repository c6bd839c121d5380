#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "oracles.hpp"
#include "qchrome/canonical.hpp"
#include "qchrome/orthrank.hpp"

using namespace qchrome;

namespace {

const std::string kG21 = "TX_ac~QhaBO_TDaO@dDewW_gCd?WWI_c[?lg";

Graph random_graph(int n, double p, std::mt19937_64& rng) {
    std::bernoulli_distribution coin(p);
    Graph g(n);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (coin(rng)) g.add_edge(u, v);
    return g;
}

// representation of a branch graph pulled back to the parent
Eigen::MatrixXd lift_rep(const BranchGraph& bg, const Eigen::MatrixXd& x, int n) {
    if (bg.kind == BranchGraph::Kind::SetIdentify) return x;
    int lo = lowest(bg.vertices), hi = 63 - std::countl_zero(bg.vertices);
    Eigen::MatrixXd y(x.rows(), n);
    for (int w = 0; w < n; ++w) y.col(w) = w == hi ? x.col(lo) : x.col(w < hi ? w : w - 1);
    return y;
}

}  // namespace

TEST_CASE("branch lists") {
    // k = 3 on C4: left {0}, right {1, 3}... use K_{2,2} with sides {0,2} and {1,3}
    Graph c4 = Graph::cycle(4);
    BranchCopy c3{{0, 2}, {1, 3}};
    auto b3 = branch_graphs(c4, c3, 3);
    CHECK(b3.size() == 2);
    for (auto& bg : b3) CHECK(bg.graph.order() == 3);

    // k = 4, K_{3,2} plus a vertex seeing two left vertices: right pair,
    // three left pairs, the set
    Graph k32 = Graph::complete_bipartite(3, 2);
    k32.add_vertex(bit(0) | bit(1));
    BranchCopy c4k{{0, 1, 2}, {3, 4}};
    auto b4 = branch_graphs(k32, c4k, 4);
    REQUIRE(b4.size() == 5);
    CHECK(b4[0].kind == BranchGraph::Kind::IdentifyRight);
    CHECK(b4[1].kind == BranchGraph::Kind::IdentifyLeft);
    CHECK(b4[4].kind == BranchGraph::Kind::SetIdentify);
    CHECK(b4[4].vertices == (bit(0) | bit(1) | bit(2)));
    CHECK(b4[4].graph.edge_count() == k32.edge_count() + 1);
    CHECK(b4[4].graph.adjacent(2, 5));

    // left triangle: only the right pair survives
    Graph tri = k32;
    tri.add_edge(0, 1);
    tri.add_edge(1, 2);
    tri.add_edge(0, 2);
    auto bt = branch_graphs(tri, c4k, 4);
    REQUIRE(bt.size() == 1);
    CHECK(bt[0].kind == BranchGraph::Kind::IdentifyRight);
    tri.add_edge(3, 4);
    CHECK(branch_graphs(tri, c4k, 4).empty());

    // a path on the left: the set is dropped (middle vertex sees both ends)
    Graph path = k32;
    path.add_edge(0, 1);
    path.add_edge(1, 2);
    auto bp = branch_graphs(path, c4k, 4);
    CHECK(bp.size() == 2);

    CHECK_THROWS_AS(branch_graphs(c4, BranchCopy{{0, 1}, {2, 3}}, 3), std::invalid_argument);
    CHECK_THROWS_AS(branch_graphs(c4, BranchCopy{{0}, {1, 3}}, 3), std::invalid_argument);
    CHECK_THROWS_AS(branch_graphs(c4, c3, 2), std::invalid_argument);
    CHECK_THROWS_AS(branch_graphs(k32, BranchCopy{{0, 0, 2}, {3, 4}}, 4), std::invalid_argument);
}

TEST_CASE("branch progress") {
    std::mt19937_64 rng(5);
    int seen = 0;
    for (int trial = 0; trial < 200; ++trial) {
        int k = 3 + trial % 2;
        Graph g = random_graph(9, 0.55, rng);
        auto copy = find_branchable_biclique(g, k, rng);
        if (!copy) continue;
        ++seen;
        check_branch_copy(g, *copy, k);
        for (auto& bg : branch_graphs(g, *copy, k)) {
            if (bg.kind == BranchGraph::Kind::SetIdentify) {
                CHECK(bg.graph.order() == g.order());
                CHECK(bg.graph.edge_count() > g.edge_count());
            } else {
                CHECK(bg.graph.order() == g.order() - 1);
            }
        }
    }
    CHECK(seen > 50);
}

TEST_CASE("biclique search") {
    std::mt19937_64 rng(1);
    CHECK_FALSE(find_branchable_biclique(Graph::cycle(6), 3, rng));
    CHECK_FALSE(find_branchable_biclique(Graph::petersen(), 3, rng));
    auto c = find_branchable_biclique(Graph::complete_bipartite(2, 3), 3, rng);
    REQUIRE(c);
    CHECK_NOTHROW(check_branch_copy(Graph::complete_bipartite(2, 3), *c, 3));
    Graph g21 = parse_graph6(kG21);
    auto c21 = find_branchable_biclique(g21, 4, rng);
    REQUIRE(c21);
    CHECK(c21->left.size() == 3);
    // the exhaustive sweep finds copies the random phase skipped
    auto sweep = find_branchable_biclique(g21, 4, rng, 1);
    CHECK(sweep);
    CHECK_THROWS_AS(find_branchable_biclique(g21, 2, rng), std::invalid_argument);

    std::mt19937_64 r1(9), r2(9);
    CHECK(*find_branchable_biclique(g21, 4, r1) == *find_branchable_biclique(g21, 4, r2));
}

TEST_CASE("proofs at the root") {
    auto t = prove_no_k_dim_rep(Graph::complete(5), 4);
    CHECK(t.success);
    CHECK(t.nodes.size() == 1);
    CHECK(t.nodes[0].outcome == ProofNode::Outcome::Certificate);
    CHECK(check_proof_tree(t).ok);

    auto c5 = prove_no_k_dim_rep(Graph::cycle(5), 2);
    CHECK(c5.success);
    CHECK(check_proof_tree(c5).ok);

    // C5 has a 3-dimensional representation
    auto c53 = prove_no_k_dim_rep(Graph::cycle(5), 3);
    CHECK_FALSE(c53.success);
    CHECK_FALSE(check_proof_tree(c53).ok);

    CHECK_THROWS_AS(prove_no_k_dim_rep(Graph::complete(3), 1), std::invalid_argument);
}

TEST_CASE("budget limits") {
    Graph g = parse_graph6(kG21);
    OrthrankOptions o;
    o.max_nodes = 1;
    auto t = prove_no_k_dim_rep(g, 4, o);
    CHECK_FALSE(t.success);
    CHECK(t.budget_exhausted);
    CHECK(t.nodes_visited == 1);
    // structural failure is not a budget stop
    auto c = prove_no_k_dim_rep(Graph::cycle(6), 3);
    CHECK_FALSE(c.success);
    CHECK_FALSE(c.budget_exhausted);
    CHECK(c.nodes[c.root].outcome == ProofNode::Outcome::Failure);
}

TEST_CASE("soundness against numeric representations") {
    std::mt19937_64 rng(21);
    int with_rep = 0;
    for (int trial = 0; trial < 60; ++trial) {
        int n = 6 + trial % 3;
        int k = 3;
        Graph g = random_graph(n, 0.45 + 0.05 * (trial % 4), rng);
        auto rep = oracle::find_orthogonal_rep(g, k, trial);
        if (rep.size() == 0) continue;
        REQUIRE(oracle::is_orthogonal_rep(g, rep));
        ++with_rep;
        OrthrankOptions o;
        o.seed = trial;
        o.max_nodes = 200;
        CHECK_FALSE(prove_no_k_dim_rep(g, k, o).success);
    }
    CHECK(with_rep > 20);
}

TEST_CASE("branch representations lift to the parent") {
    std::mt19937_64 rng(33);
    int lifted = 0;
    for (int trial = 0; trial < 80 && lifted < 60; ++trial) {
        int k = 3 + trial % 2;
        Graph g = random_graph(7, 0.5, rng);
        auto copy = find_branchable_biclique(g, k, rng);
        if (!copy) continue;
        for (auto& bg : branch_graphs(g, *copy, k)) {
            auto rep = oracle::find_orthogonal_rep(bg.graph, k, trial, 4, 2000);
            if (rep.size() == 0) continue;
            ++lifted;
            CHECK(oracle::is_orthogonal_rep(g, lift_rep(bg, rep, g.order())));
        }
    }
    CHECK(lifted > 20);
}

TEST_CASE("determinism and serialisation") {
    Graph g = parse_graph6(kG21);
    OrthrankOptions o;
    o.seed = 3;
    o.max_nodes = 12;
    auto a = prove_no_k_dim_rep(g, 4, o);
    auto b = prove_no_k_dim_rep(g, 4, o);
    CHECK(a.budget_exhausted);
    CHECK_FALSE(a.success);
    REQUIRE(a.nodes.size() == b.nodes.size());
    for (std::size_t i = 0; i < a.nodes.size(); ++i) {
        CHECK(a.nodes[i].graph6 == b.nodes[i].graph6);
        CHECK(a.nodes[i].children == b.nodes[i].children);
        CHECK(a.nodes[i].outcome == b.nodes[i].outcome);
    }
    auto back = ProofTree::from_json(a.to_json());
    CHECK(back.nodes.size() == a.nodes.size());
    CHECK(back.budget_exhausted);
    CHECK(back.to_json() == a.to_json());
    CHECK(check_proof_tree(back).detail == "tree records no proof");
    CHECK_THROWS_AS(ProofTree::from_json("{}"), std::invalid_argument);
    CHECK_THROWS_AS(ProofTree::from_json("[1"), std::invalid_argument);
}

TEST_CASE("G21 has no four-dimensional representation") {
    Graph g = parse_graph6(kG21);
    auto t = prove_no_k_dim_rep(g, 4);
    REQUIRE(t.success);
    CHECK(t.nodes_visited <= 5000);
    CHECK(t.nodes[t.root].outcome == ProofNode::Outcome::Branch);
    auto text = t.to_json();
    auto back = ProofTree::from_json(text);
    auto v = check_proof_tree(back);
    CHECK_MESSAGE(v.ok, v.detail);

    // tampering: a wrong child, a missing branch, a weakened certificate
    auto bad = back;
    int root = bad.root;
    std::swap(bad.nodes[root].children.front(), bad.nodes[root].children.back());
    if (bad.nodes[root].children.front() != back.nodes[root].children.front() &&
        !isomorphic(parse_graph6(bad.nodes[bad.nodes[root].children.front()].graph6),
                    parse_graph6(back.nodes[back.nodes[root].children.front()].graph6)))
        CHECK_FALSE(check_proof_tree(bad).ok);
    bad = back;
    bad.nodes[root].children.pop_back();
    CHECK_FALSE(check_proof_tree(bad).ok);
    bad = back;
    for (auto& nd : bad.nodes)
        if (nd.certificate) {
            nd.certificate->bound = nd.certificate->bound + 1;
            break;
        }
    CHECK_FALSE(check_proof_tree(bad).ok);
    bad = back;
    for (auto& nd : bad.nodes)
        if (nd.certificate) {
            nd.certificate->k = 4;
            break;
        }
    CHECK_FALSE(check_proof_tree(bad).ok);
    bad = back;
    bad.nodes[root].children[0] = root;
    CHECK_FALSE(check_proof_tree(bad).ok);
}
