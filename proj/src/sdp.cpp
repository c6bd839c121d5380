#include "qchrome/sdp.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>

#include "linalg.hpp"

namespace qchrome {

// SymMatrix ------------------------------------------------------------------

SymMatrix SymMatrix::identity(int d) {
    SymMatrix m(d);
    for (int i = 0; i < d; ++i) m(i, i) = 1.0;
    return m;
}

SymMatrix SymMatrix::diagonal(const std::vector<double>& diag) {
    SymMatrix m(static_cast<int>(diag.size()));
    for (int i = 0; i < m.dim(); ++i) m(i, i) = diag[i];
    return m;
}

std::vector<double> SymMatrix::dense() const {
    std::vector<double> out(static_cast<std::size_t>(d_) * d_);
    for (int i = 0; i < d_; ++i)
        for (int j = 0; j < d_; ++j) out[static_cast<std::size_t>(i) * d_ + j] = (*this)(i, j);
    return out;
}

SymMatrix SymMatrix::from_dense(int d, const std::vector<double>& full) {
    SymMatrix m(d);
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j)
            m(i, j) = 0.5 * (full[static_cast<std::size_t>(i) * d + j] + full[static_cast<std::size_t>(j) * d + i]);
    return m;
}

double SymMatrix::frobenius_dot(const SymMatrix& o) const {
    double s = 0;
    for (int j = 0; j < d_; ++j)
        for (int i = 0; i <= j; ++i) s += (i == j ? 1.0 : 2.0) * (*this)(i, j) * o(i, j);
    return s;
}

double SymMatrix::max_abs_diff(const SymMatrix& o) const {
    double m = 0;
    for (std::size_t e = 0; e < a_.size(); ++e) m = std::max(m, std::abs(a_[e] - o.a_[e]));
    return m;
}

namespace {

Eigen::MatrixXd to_eigen(const SymMatrix& m) {
    Eigen::MatrixXd a(m.dim(), m.dim());
    for (int i = 0; i < m.dim(); ++i)
        for (int j = 0; j < m.dim(); ++j) a(i, j) = m(i, j);
    return a;
}

SymMatrix from_eigen(const Eigen::MatrixXd& a) {
    SymMatrix m(static_cast<int>(a.rows()));
    for (int j = 0; j < m.dim(); ++j)
        for (int i = 0; i <= j; ++i) m(i, j) = 0.5 * (a(i, j) + a(j, i));
    return m;
}

}  // namespace

std::vector<double> SymMatrix::eigenvalues() const {
    Eigen::VectorXd w = detail::sym_eigenvalues(to_eigen(*this));
    return {w.data(), w.data() + w.size()};
}

double SymMatrix::min_eigenvalue() const {
    if (d_ == 0) return 0.0;
    return eigenvalues().front();
}

SymMatrix project_psd(const SymMatrix& m) {
    Eigen::MatrixXd a = to_eigen(m);
    detail::project_psd_inplace(a);
    return from_eigen(a);
}

void add_entry(SparseSym& a, int i, int j, double coef) { a.push_back({i, j, i == j ? coef : 0.5 * coef}); }

void SdpProblem::validate() const {
    auto check = [&](const SparseSym& s, const char* what) {
        for (const auto& t : s)
            if (t.i < 0 || t.j < 0 || t.i >= dim || t.j >= dim)
                throw std::invalid_argument(std::string("sdp problem: ") + what + " index outside dimension " +
                                            std::to_string(dim));
    };
    if (dim < 0) throw std::invalid_argument("sdp problem: negative dimension");
    check(objective, "objective");
    for (const auto& e : equalities) check(e.a, "equality");
    for (const auto& g : inequalities) check(g.g, "inequality");
}

std::string to_string(SdpStatus s) {
    switch (s) {
        case SdpStatus::Optimal: return "optimal";
        case SdpStatus::MaxIter: return "max_iter";
        case SdpStatus::InfeasibleSuspected: return "infeasible_suspected";
    }
    return "unknown";
}

// Solver ---------------------------------------------------------------------

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;

// Coefficient of X_e (upper entry e) in <A, X>.
std::map<std::size_t, double> functional(const SparseSym& a, const SymMatrix& shape) {
    std::map<std::size_t, double> out;
    for (const auto& t : a) out[shape.index(t.i, t.j)] += t.i == t.j ? t.v : 2.0 * t.v;
    for (auto it = out.begin(); it != out.end();) it = it->second == 0.0 ? out.erase(it) : std::next(it);
    return out;
}

struct Presolved {
    int d = 0;
    std::size_t entries = 0;
    std::vector<int> var_of;         // entry -> variable, or -1 when fixed
    std::vector<double> fixed;       // entry value when fixed
    std::vector<double> weight;      // <X, F_v> multiplicity of each entry (1 diag, 2 off)
    int nvar = 0;
    Vec c;                           // objective over variables (minimisation)
    double c0 = 0.0;
    // rows: eq, ineq (<=), nonneg, psd
    std::vector<Eigen::Triplet<double>> trip;
    std::vector<double> b;
    int n_eq = 0, n_in = 0, n_nn = 0, n_psd = 0;
    std::vector<int> eq_row;         // original equality -> row or -1
    std::vector<int> in_row;         // original inequality -> row or -1
    std::vector<double> in_sign;     // +1 for <=, -1 for >=
    std::vector<int> nn_var;         // nonneg row -> variable
    bool infeasible = false;
};

struct UnionFind {
    std::vector<std::size_t> p;
    explicit UnionFind(std::size_t n) : p(n) { std::iota(p.begin(), p.end(), std::size_t{0}); }
    std::size_t find(std::size_t x) {
        while (p[x] != x) x = p[x] = p[p[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) p[std::max(a, b)] = std::min(a, b);
    }
};

Presolved presolve(const SdpProblem& p) {
    Presolved ps;
    ps.d = p.dim;
    SymMatrix shape(p.dim);
    ps.entries = static_cast<std::size_t>(p.dim) * (p.dim + 1) / 2;
    ps.weight.resize(ps.entries);
    for (int j = 0; j < p.dim; ++j)
        for (int i = 0; i <= j; ++i) ps.weight[shape.index(i, j)] = i == j ? 1.0 : 2.0;

    UnionFind uf(ps.entries);
    std::vector<char> pinned(ps.entries, 0);
    std::vector<double> pin_val(ps.entries, 0.0);
    std::vector<std::map<std::size_t, double>> eq_f(p.equalities.size());
    std::vector<char> eq_done(p.equalities.size(), 0);
    const double tiny = 1e-12;
    for (std::size_t r = 0; r < p.equalities.size(); ++r) {
        eq_f[r] = functional(p.equalities[r].a, shape);
        const auto& f = eq_f[r];
        double b = p.equalities[r].b;
        if (f.size() == 1) {
            auto [e, a] = *f.begin();
            double v = b / a;
            if (pinned[e] && std::abs(pin_val[e] - v) > tiny) ps.infeasible = true;
            pinned[e] = 1;
            pin_val[e] = v;
            eq_done[r] = 1;
        } else if (f.size() == 2 && b == 0.0) {
            auto it = f.begin();
            auto [e1, a1] = *it++;
            auto [e2, a2] = *it;
            if (a1 == -a2) {
                uf.unite(e1, e2);
                eq_done[r] = 1;
            }
        }
    }
    // class values
    std::vector<char> cls_pinned(ps.entries, 0);
    std::vector<double> cls_val(ps.entries, 0.0);
    for (std::size_t e = 0; e < ps.entries; ++e) {
        if (!pinned[e]) continue;
        std::size_t r = uf.find(e);
        if (cls_pinned[r] && std::abs(cls_val[r] - pin_val[e]) > tiny) ps.infeasible = true;
        cls_pinned[r] = 1;
        cls_val[r] = pin_val[e];
    }
    ps.var_of.assign(ps.entries, -1);
    ps.fixed.assign(ps.entries, 0.0);
    std::vector<int> var_of_root(ps.entries, -1);
    for (std::size_t e = 0; e < ps.entries; ++e) {
        std::size_t r = uf.find(e);
        if (cls_pinned[r]) {
            ps.fixed[e] = cls_val[r];
            continue;
        }
        if (var_of_root[r] < 0) var_of_root[r] = ps.nvar++;
        ps.var_of[e] = var_of_root[r];
    }

    const double sgn = p.sense == Sense::Minimize ? 1.0 : -1.0;
    ps.c = Vec::Zero(ps.nvar);
    for (auto [e, a] : functional(p.objective, shape)) {
        if (ps.var_of[e] >= 0)
            ps.c(ps.var_of[e]) += sgn * a;
        else
            ps.c0 += sgn * a * ps.fixed[e];
    }

    int row = 0;
    auto add_row = [&](const std::map<std::size_t, double>& f, double scale, double rhs) {
        std::map<int, double> byvar;
        for (auto [e, a] : f) {
            if (ps.var_of[e] >= 0)
                byvar[ps.var_of[e]] += a;
            else
                rhs -= a * ps.fixed[e];
        }
        for (auto [v, a] : byvar)
            if (a != 0.0) ps.trip.emplace_back(row, v, scale * a);
        ps.b.push_back(scale * rhs);
        return row++;
    };

    ps.eq_row.assign(p.equalities.size(), -1);
    for (std::size_t r = 0; r < p.equalities.size(); ++r) {
        if (eq_done[r]) continue;
        ps.eq_row[r] = add_row(eq_f[r], 1.0, p.equalities[r].b);
        ++ps.n_eq;
    }
    ps.in_row.assign(p.inequalities.size(), -1);
    ps.in_sign.assign(p.inequalities.size(), 1.0);
    for (std::size_t r = 0; r < p.inequalities.size(); ++r) {
        double s = p.inequalities[r].rel == Relation::LessEq ? 1.0 : -1.0;
        ps.in_sign[r] = s;
        ps.in_row[r] = add_row(functional(p.inequalities[r].g, shape), s, p.inequalities[r].h);
        ++ps.n_in;
    }
    if (p.entrywise_nonneg) {
        for (std::size_t e = 0; e < ps.entries; ++e)
            if (ps.var_of[e] < 0 && ps.fixed[e] < -tiny) ps.infeasible = true;
        std::vector<char> seen(static_cast<std::size_t>(ps.nvar), 0);
        for (std::size_t e = 0; e < ps.entries; ++e) {
            int v = ps.var_of[e];
            if (v < 0 || seen[v]) continue;
            seen[v] = 1;
            ps.trip.emplace_back(row, v, -1.0);
            ps.b.push_back(0.0);
            ps.nn_var.push_back(v);
            ++row;
            ++ps.n_nn;
        }
    }
    // psd block in svec order (column by column, upper triangle)
    const double r2 = std::sqrt(2.0);
    for (int j = 0; j < p.dim; ++j)
        for (int i = 0; i <= j; ++i) {
            std::size_t e = shape.index(i, j);
            double w = i == j ? 1.0 : r2;
            if (ps.var_of[e] >= 0) {
                ps.trip.emplace_back(row, ps.var_of[e], -w);
                ps.b.push_back(0.0);
            } else {
                ps.b.push_back(w * ps.fixed[e]);
            }
            ++row;
            ++ps.n_psd;
        }
    return ps;
}

struct Admm {
    const Presolved& ps;
    const SdpOptions& opt;
    int m = 0, n = 0;
    SpMat A;            // scaled
    Vec b, c;           // scaled
    Vec D, E;           // variable and row scaling
    double cs = 1.0;    // cost scaling
    Vec rho_row;        // per-row step
    double rho = 0.1;
    Eigen::SimplicialLDLT<SpMat> ldlt;
    Vec x, s, lam;
    int psd_start = 0;
    int d = 0;

    Admm(const Presolved& p, const SdpOptions& o) : ps(p), opt(o) {
        m = static_cast<int>(ps.b.size());
        n = ps.nvar;
        d = ps.d;
        psd_start = ps.n_eq + ps.n_in + ps.n_nn;
        A.resize(m, n);
        A.setFromTriplets(ps.trip.begin(), ps.trip.end());
        b = Eigen::Map<const Vec>(ps.b.data(), m);
        c = ps.c;
        equilibrate();
        rho = opt.rho;
        rho_row.resize(m);
        set_rho();
        x = Vec::Zero(n);
        s = Vec::Zero(m);
        lam = Vec::Zero(m);
        factor();
    }

    // Modified Ruiz scaling; the psd block shares one row scale.
    void equilibrate() {
        D = Vec::Ones(n);
        E = Vec::Ones(m);
        for (int pass = 0; pass < 15; ++pass) {
            Vec colmax = Vec::Zero(n), rowmax = Vec::Zero(m);
            for (int k = 0; k < A.outerSize(); ++k)
                for (SpMat::InnerIterator it(A, k); it; ++it) {
                    double v = std::abs(it.value());
                    colmax(it.col()) = std::max(colmax(it.col()), v);
                    rowmax(it.row()) = std::max(rowmax(it.row()), v);
                }
            Vec dc(n), dr(m);
            for (int j = 0; j < n; ++j) dc(j) = colmax(j) > 0 ? 1.0 / std::sqrt(colmax(j)) : 1.0;
            double psd_max = 0;
            for (int r = psd_start; r < m; ++r) psd_max = std::max(psd_max, rowmax(r));
            for (int r = 0; r < m; ++r) {
                double v = r >= psd_start ? psd_max : rowmax(r);
                dr(r) = v > 0 ? 1.0 / std::sqrt(v) : 1.0;
            }
            A = dr.asDiagonal() * A * dc.asDiagonal();
            D = D.cwiseProduct(dc);
            E = E.cwiseProduct(dr);
        }
        b = E.cwiseProduct(b);
        c = D.cwiseProduct(c);
        double cn = c.cwiseAbs().maxCoeff();
        cs = cn > 0 ? 1.0 / std::max(cn, 1e-4) : 1.0;
        cs = std::min(cs, 1e4);
        c *= cs;
    }

    void set_rho() {
        for (int r = 0; r < m; ++r) rho_row(r) = r < ps.n_eq ? rho * 1e3 : rho;
    }

    void factor() {
        SpMat K = A.transpose() * rho_row.asDiagonal() * A;
        SpMat I(n, n);
        I.setIdentity();
        K += opt.sigma * I;
        ldlt.compute(K);
        if (ldlt.info() != Eigen::Success) throw NumericError("sdp: factorisation of the linear system failed");
    }

    void project(Vec& v) const {
        for (int r = ps.n_eq; r < psd_start; ++r) v(r) = std::max(v(r), 0.0);
        for (int r = 0; r < ps.n_eq; ++r) v(r) = 0.0;
        if (d == 0) return;
        // psd block: unscale the common factor, project, rescale
        double e = E(psd_start);
        Eigen::MatrixXd Xm(d, d);
        const double r2 = std::sqrt(2.0);
        int r = psd_start;
        for (int j = 0; j < d; ++j)
            for (int i = 0; i <= j; ++i, ++r) {
                double val = v(r) / e;
                if (i == j)
                    Xm(i, i) = val;
                else
                    Xm(i, j) = Xm(j, i) = val / r2;
            }
        detail::project_psd_inplace(Xm);
        r = psd_start;
        for (int j = 0; j < d; ++j)
            for (int i = 0; i <= j; ++i, ++r) v(r) = e * (i == j ? Xm(i, i) : r2 * Xm(i, j));
    }

    struct Res {
        double rp, rd, pobj, dobj, np, nd;
    };

    Res residuals() const {
        Vec ax = A * x;
        Vec rp = E.cwiseInverse().cwiseProduct(ax + s - b);
        Vec atl = A.transpose() * lam;
        Vec rd = D.cwiseInverse().cwiseProduct(c - atl) / cs;
        Res r;
        r.rp = rp.size() ? rp.cwiseAbs().maxCoeff() : 0.0;
        r.rd = rd.size() ? rd.cwiseAbs().maxCoeff() : 0.0;
        auto inf = [](const Vec& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; };
        r.np = std::max({inf(E.cwiseInverse().cwiseProduct(ax)), inf(E.cwiseInverse().cwiseProduct(s)),
                         inf(E.cwiseInverse().cwiseProduct(b))});
        r.nd = std::max(inf(D.cwiseInverse().cwiseProduct(c)) / cs, inf(D.cwiseInverse().cwiseProduct(atl)) / cs);
        r.pobj = c.dot(x) / cs;
        r.dobj = b.dot(lam) / cs;
        return r;
    }

    int run(SdpStatus& status) {
        auto t0 = std::chrono::steady_clock::now();
        const double alpha = opt.alpha;
        Vec rhs(n), xt(n), st(m), v(m);
        int last_update = 0;
        status = SdpStatus::MaxIter;
        int it = 0;
        for (it = 1; it <= opt.max_iter; ++it) {
            rhs = opt.sigma * x - c + A.transpose() * (rho_row.cwiseProduct(b - s) + lam);
            xt = ldlt.solve(rhs);
            st = b - A * xt;
            x = alpha * xt + (1 - alpha) * x;
            v = alpha * st + (1 - alpha) * s + lam.cwiseQuotient(rho_row);
            Vec snew = v;
            project(snew);
            lam = rho_row.cwiseProduct(v - snew);
            s = snew;
            if (it % opt.check_every != 0) continue;
            Res r = residuals();
            double gap = std::abs(r.pobj - r.dobj);
            if (r.rp <= opt.tol * (1 + r.np) && r.rd <= opt.tol * (1 + r.nd) &&
                gap <= opt.tol * (1 + std::abs(r.pobj) + std::abs(r.dobj))) {
                status = SdpStatus::Optimal;
                break;
            }
            if (!std::isfinite(r.rp) || !std::isfinite(r.rd)) {
                status = SdpStatus::InfeasibleSuspected;
                break;
            }
            if (opt.time_limit > 0 &&
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() > opt.time_limit)
                break;
            if (opt.adaptive_rho && it - last_update >= 4 * opt.check_every) {
                double pr = r.rp / std::max(r.np, 1e-10);
                double du = r.rd / std::max(r.nd, 1e-10);
                double ratio = std::sqrt(pr / std::max(du, 1e-30));
                if (ratio > 5.0 || ratio < 0.2) {
                    double nr = std::clamp(rho * ratio, 1e-6, 1e6);
                    // keep the scaled multiplier consistent
                    rho = nr;
                    set_rho();
                    factor();
                    last_update = it;
                }
            }
        }
        return std::min(it, opt.max_iter);
    }
};

}  // namespace

SdpSolution solve_sdp(const SdpProblem& p, const SdpOptions& opts) {
    p.validate();
    auto t0 = std::chrono::steady_clock::now();
    Presolved ps = presolve(p);
    SdpSolution sol;
    const int d = p.dim;
    const double sgn = p.sense == Sense::Minimize ? 1.0 : -1.0;

    Vec x = Vec::Zero(ps.nvar);
    Vec lam = Vec::Zero(static_cast<Eigen::Index>(ps.b.size()));
    if (ps.infeasible) {
        sol.status = SdpStatus::InfeasibleSuspected;
    } else if (ps.nvar == 0) {
        sol.status = SdpStatus::Optimal;
    } else {
        Admm admm(ps, opts);
        sol.iterations = admm.run(sol.status);
        x = admm.D.cwiseProduct(admm.x);
        lam = admm.E.cwiseProduct(admm.lam) / admm.cs;
    }

    // primal matrix
    sol.primal = SymMatrix(d);
    SymMatrix shape(d);
    for (int j = 0; j < d; ++j)
        for (int i = 0; i <= j; ++i) {
            std::size_t e = shape.index(i, j);
            sol.primal(i, j) = ps.var_of[e] >= 0 ? x(ps.var_of[e]) : ps.fixed[e];
        }

    // duals in matrix form
    const double nan = std::numeric_limits<double>::quiet_NaN();
    sol.eq_duals.assign(p.equalities.size(), nan);
    for (std::size_t r = 0; r < p.equalities.size(); ++r)
        if (ps.eq_row[r] >= 0) sol.eq_duals[r] = lam(ps.eq_row[r]);
    sol.ineq_duals.assign(p.inequalities.size(), nan);
    for (std::size_t r = 0; r < p.inequalities.size(); ++r) sol.ineq_duals[r] = ps.in_sign[r] * lam(ps.in_row[r]);
    sol.dual_nonneg = SymMatrix(d);
    if (ps.n_nn > 0) {
        std::vector<double> wsum(static_cast<std::size_t>(ps.nvar), 0.0);
        for (std::size_t e = 0; e < ps.entries; ++e)
            if (ps.var_of[e] >= 0) wsum[ps.var_of[e]] += ps.weight[e];
        std::vector<double> nv(static_cast<std::size_t>(ps.nvar), 0.0);
        int r0 = ps.n_eq + ps.n_in;
        for (int k = 0; k < ps.n_nn; ++k) nv[ps.nn_var[k]] = -lam(r0 + k);
        for (int j = 0; j < d; ++j)
            for (int i = 0; i <= j; ++i) {
                int v = ps.var_of[shape.index(i, j)];
                if (v >= 0) sol.dual_nonneg(i, j) = nv[v] / wsum[v];
            }
    }
    sol.dual_psd = SymMatrix(d);
    {
        int r = ps.n_eq + ps.n_in + ps.n_nn;
        const double r2 = std::sqrt(2.0);
        for (int j = 0; j < d; ++j)
            for (int i = 0; i <= j; ++i, ++r) sol.dual_psd(i, j) = -lam(r) / (i == j ? 1.0 : r2);
    }

    // objective values and residuals from the returned points
    double pobj = ps.c0 + ps.c.dot(x);
    double dobj = ps.c0 + Eigen::Map<const Vec>(ps.b.data(), static_cast<Eigen::Index>(ps.b.size())).dot(lam);
    sol.objective = sgn * pobj;
    sol.dual_objective = sgn * dobj;

    double rp = 0;
    auto viol_eq = [&](const SparseSym& a, double rhs) {
        double v = 0;
        for (const auto& t : a) v += (t.i == t.j ? 1.0 : 2.0) * t.v * sol.primal(t.i, t.j);
        return v - rhs;
    };
    for (const auto& e : p.equalities) rp = std::max(rp, std::abs(viol_eq(e.a, e.b)));
    for (const auto& g : p.inequalities) {
        double v = viol_eq(g.g, g.h);
        rp = std::max(rp, g.rel == Relation::LessEq ? std::max(v, 0.0) : std::max(-v, 0.0));
    }
    if (p.entrywise_nonneg)
        for (int j = 0; j < d; ++j)
            for (int i = 0; i <= j; ++i) rp = std::max(rp, -sol.primal(i, j));
    if (d > 0) rp = std::max(rp, -sol.primal.min_eigenvalue());
    sol.primal_residual = rp;

    if (ps.nvar > 0) {
        Presolved const& q = ps;
        SpMat A(static_cast<Eigen::Index>(q.b.size()), q.nvar);
        A.setFromTriplets(q.trip.begin(), q.trip.end());
        Vec rd = q.c - A.transpose() * lam;
        double rdv = rd.cwiseAbs().maxCoeff();
        // cone membership of the multipliers
        for (int r = q.n_eq; r < q.n_eq + q.n_in + q.n_nn; ++r) rdv = std::max(rdv, lam(r));
        if (d > 0) rdv = std::max(rdv, -sol.dual_psd.min_eigenvalue());
        sol.dual_residual = rdv;
    }
    sol.gap = std::abs(pobj - dobj) / (1 + std::abs(pobj) + std::abs(dobj));
    sol.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return sol;
}

}  // namespace qchrome
