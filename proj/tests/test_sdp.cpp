#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "qchrome/graph.hpp"
#include "qchrome/sdp.hpp"

using namespace qchrome;

namespace {

SymMatrix random_sym(int d, std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    SymMatrix m(d);
    for (int j = 0; j < d; ++j)
        for (int i = 0; i <= j; ++i) m(i, j) = nd(rng);
    return m;
}

// theta(G): max <J, X>, tr X = 1, X_uv = 0 on edges, X psd.
SdpProblem theta_program(const Graph& g) {
    SdpProblem p;
    p.dim = g.order();
    p.sense = Sense::Maximize;
    for (int i = 0; i < g.order(); ++i)
        for (int j = i; j < g.order(); ++j) add_entry(p.objective, i, j, i == j ? 1.0 : 2.0);
    SdpEquality tr;
    for (int i = 0; i < g.order(); ++i) add_entry(tr.a, i, i, 1.0);
    tr.b = 1.0;
    p.equalities.push_back(tr);
    for (auto [u, v] : g.edges()) {
        SdpEquality e;
        add_entry(e.a, u, v, 1.0);
        p.equalities.push_back(e);
    }
    return p;
}

}  // namespace

TEST_CASE("psd projection") {
    SymMatrix id = SymMatrix::identity(4);
    CHECK(project_psd(id).max_abs_diff(id) < 1e-14);
    SymMatrix d = SymMatrix::diagonal({3.0, -2.0});
    CHECK(project_psd(d).max_abs_diff(SymMatrix::diagonal({3.0, 0.0})) < 1e-14);

    std::mt19937_64 rng(5);
    for (int t = 0; t < 50; ++t) {
        int n = 1 + static_cast<int>(rng() % 12);
        SymMatrix m = random_sym(n, rng);
        SymMatrix x = project_psd(m);
        CHECK(x.min_eigenvalue() > -1e-10);
        SymMatrix diff(n);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i <= j; ++i) diff(i, j) = x(i, j) - m(i, j);
        CHECK(std::abs(diff.frobenius_dot(x)) < 1e-8);
        // residual is negative semidefinite
        auto ev = diff.eigenvalues();
        CHECK(ev.front() > -1e-10);
        CHECK(project_psd(x).max_abs_diff(x) < 1e-10);
    }
}

TEST_CASE("add_entry pairs with the trace product") {
    SparseSym a;
    add_entry(a, 0, 1, 3.0);
    add_entry(a, 2, 2, 1.5);
    SymMatrix x(3);
    x(0, 1) = 2.0;
    x(2, 2) = 4.0;
    double v = 0;
    for (auto& t : a) v += (t.i == t.j ? 1.0 : 2.0) * t.v * x(t.i, t.j);
    CHECK(v == doctest::Approx(3.0 * 2.0 + 1.5 * 4.0));
}

TEST_CASE("min trace with a pinned corner") {
    SdpProblem p;
    p.dim = 3;
    for (int i = 0; i < 3; ++i) add_entry(p.objective, i, i, 1.0);
    SdpEquality e;
    add_entry(e.a, 0, 0, 1.0);
    e.b = 1.0;
    p.equalities.push_back(e);
    auto s = solve_sdp(p);
    CHECK(s.status == SdpStatus::Optimal);
    CHECK(s.objective == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(s.dual_objective == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(s.primal_residual < 1e-5);
}

TEST_CASE("lovasz theta of the five-cycle") {
    auto s = solve_sdp(theta_program(Graph::cycle(5)));
    CHECK(s.status == SdpStatus::Optimal);
    CHECK(std::abs(s.objective - std::sqrt(5.0)) < 1e-4);
    CHECK(std::abs(s.dual_objective - std::sqrt(5.0)) < 1e-4);
    // theta of K_n is 1, of the empty graph n
    CHECK(std::abs(solve_sdp(theta_program(Graph::complete(4))).objective - 1.0) < 1e-4);
    CHECK(std::abs(solve_sdp(theta_program(Graph(4))).objective - 4.0) < 1e-4);
}

TEST_CASE("matrix-form duals reproduce the dual objective") {
    // Z = C - sum y A - sum l G - N must be psd for the minimised form.
    SdpProblem p = theta_program(Graph::cycle(5));
    p.entrywise_nonneg = true;
    SdpInequality cap;
    add_entry(cap.g, 0, 1, 1.0);
    cap.h = 0.05;
    cap.rel = Relation::LessEq;
    p.inequalities.push_back(cap);
    auto s = solve_sdp(p);
    REQUIRE(s.status == SdpStatus::Optimal);
    const int d = p.dim;
    // minimised objective is -<C,X>
    SymMatrix z(d);
    auto acc = [&](const SparseSym& a, double w) {
        for (auto& t : a) {
            z(t.i, t.j) += w * t.v;
        }
    };
    acc(p.objective, -1.0);
    double dobj = 0;
    for (std::size_t r = 0; r < p.equalities.size(); ++r) {
        if (std::isnan(s.eq_duals[r])) continue;
        acc(p.equalities[r].a, -s.eq_duals[r]);
        dobj += s.eq_duals[r] * p.equalities[r].b;
    }
    CHECK(s.ineq_duals[0] <= 1e-6);
    acc(p.inequalities[0].g, -s.ineq_duals[0]);
    dobj += s.ineq_duals[0] * p.inequalities[0].h;
    for (int j = 0; j < d; ++j)
        for (int i = 0; i <= j; ++i) {
            CHECK(s.dual_nonneg(i, j) >= -1e-6);
            z(i, j) -= s.dual_nonneg(i, j);
        }
    // pinned edge entries carry a free multiplier; fold them in
    SymMatrix zf = z;
    for (auto [u, v] : Graph::cycle(5).edges()) zf(u, v) = s.dual_psd(u, v);
    CHECK(zf.max_abs_diff(s.dual_psd) < 1e-4);
    CHECK(s.dual_psd.min_eigenvalue() > -1e-5);
    CHECK(-dobj == doctest::Approx(s.dual_objective).epsilon(1e-6));
}

TEST_CASE("presolve detects inconsistent pins") {
    SdpProblem p;
    p.dim = 2;
    SdpEquality a, b;
    add_entry(a.a, 0, 0, 1.0);
    a.b = 1.0;
    add_entry(b.a, 0, 0, 2.0);
    b.b = 3.0;
    p.equalities = {a, b};
    CHECK(solve_sdp(p).status == SdpStatus::InfeasibleSuspected);
    SdpProblem bad;
    bad.dim = 2;
    add_entry(bad.objective, 0, 2, 1.0);
    CHECK_THROWS_AS(solve_sdp(bad), std::invalid_argument);
}

TEST_CASE("deterministic") {
    auto p = theta_program(Graph::cycle(7));
    auto a = solve_sdp(p), b = solve_sdp(p);
    CHECK(a.objective == b.objective);
    CHECK(a.iterations == b.iterations);
}
