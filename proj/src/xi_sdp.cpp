#include "qchrome/xi_sdp.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qchrome {

XiSdpProgram build_xi_sdp_program(const Graph& g) {
    const int n = g.order();
    if (n < 1) throw std::invalid_argument("xi_sdp: graph must have at least one vertex");
    XiSdpProgram out;
    SdpProblem& p = out.problem;
    p.dim = n + 1;
    p.sense = Sense::Minimize;
    p.entrywise_nonneg = true;
    add_entry(p.objective, 0, 0, 1.0);
    for (int v = 1; v <= n; ++v) {
        SdpEquality diag, row;
        add_entry(diag.a, v, v, 1.0);
        diag.b = 1.0;
        add_entry(row.a, 0, v, 1.0);
        row.b = 1.0;
        p.equalities.push_back(diag);
        p.equalities.push_back(row);
    }
    out.cliques = maximal_clique_masks(g);
    const int nc = static_cast<int>(out.cliques.size());
    for (int c = 0; c < nc; ++c)
        for (int j = 0; j < n; ++j) {
            SdpInequality r;
            for_each_bit(out.cliques[c], [&](int i) { add_entry(r.g, i + 1, j + 1, 1.0); });
            r.h = 1.0;
            r.rel = Relation::LessEq;
            p.inequalities.push_back(r);
            out.le_rows.emplace_back(c, j);
        }
    for (int a = 0; a < nc; ++a)
        for (int b = a; b < nc; ++b) {
            SdpInequality r;
            add_entry(r.g, 0, 0, 1.0);
            for_each_bit(out.cliques[a], [&](int i) {
                for_each_bit(out.cliques[b], [&](int j) { add_entry(r.g, i + 1, j + 1, 1.0); });
            });
            r.h = popcount(out.cliques[a]) + popcount(out.cliques[b]);
            r.rel = Relation::GreaterEq;
            p.inequalities.push_back(r);
            out.ge_rows.emplace_back(a, b);
        }
    return out;
}

double xi_sdp(const Graph& g, const SdpOptions& opts) {
    auto prog = build_xi_sdp_program(g);
    return solve_sdp(prog.problem, opts).objective;
}

// Certificate text -----------------------------------------------------------

namespace {

std::string set_text(Bits s) {
    std::string out;
    for_each_bit(s, [&](int v) {
        if (!out.empty()) out += ',';
        out += std::to_string(v + 1);
    });
    return out;
}

Bits parse_set(const std::string& text, int line) {
    Bits s = 0;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        int v = 0;
        try {
            std::size_t used = 0;
            v = std::stoi(item, &used);
            if (used != item.size()) throw std::invalid_argument("");
        } catch (const std::exception&) {
            throw std::invalid_argument("certificate line " + std::to_string(line) + ": bad vertex '" + item + "'");
        }
        if (v < 1 || v > 64)
            throw std::invalid_argument("certificate line " + std::to_string(line) + ": vertex out of range");
        s |= bit(v - 1);
    }
    if (s == 0) throw std::invalid_argument("certificate line " + std::to_string(line) + ": empty vertex set");
    return s;
}

constexpr const char* kHeader = "xi-sdp-certificate v1";

}  // namespace

std::string SdpCertificate::to_text() const {
    std::ostringstream os;
    os << kHeader << "\n";
    os << "graph6 " << graph6 << "\n";
    os << "k " << k << "\n";
    os << "eps " << format_rational(eps) << "\n";
    for (std::size_t v = 0; v < pin_diag.size(); ++v) os << "pin-diag " << v + 1 << " " << format_rational(pin_diag[v]) << "\n";
    for (std::size_t v = 0; v < pin_row.size(); ++v) os << "pin-row " << v + 1 << " " << format_rational(pin_row[v]) << "\n";
    for (const auto& r : le) os << "clique-le " << r.j + 1 << " " << set_text(r.s) << " " << format_rational(r.lambda) << "\n";
    for (const auto& r : ge)
        os << "clique-ge " << set_text(r.s) << " | " << set_text(r.t) << " " << format_rational(r.lambda) << "\n";
    for (const auto& e : nonneg) os << "nonneg " << e.i << " " << e.j << " " << format_rational(e.value) << "\n";
    os << "bound " << format_rational(bound) << "\n";
    return os.str();
}

SdpCertificate SdpCertificate::parse(const std::string& text) {
    SdpCertificate c;
    std::istringstream in(text);
    std::string line;
    int ln = 0;
    bool header = false, have_bound = false, have_k = false, have_eps = false;
    auto fail = [&](const std::string& msg) -> void {
        throw std::invalid_argument("certificate line " + std::to_string(ln) + ": " + msg);
    };
    auto index_slot = [&](std::vector<Rational>& vec, int v, const Rational& q) {
        if (v < 1 || v > 64) fail("vertex out of range");
        if (static_cast<int>(vec.size()) < v) vec.resize(v, Rational(0));
        vec[v - 1] = q;
    };
    while (std::getline(in, line)) {
        ++ln;
        if (line.empty() || line[0] == '#') continue;
        if (!header) {
            if (line != kHeader) fail("expected '" + std::string(kHeader) + "'");
            header = true;
            continue;
        }
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        std::vector<std::string> f;
        for (std::string w; ls >> w;) f.push_back(w);
        try {
            if (key == "graph6" && f.size() == 1) {
                c.graph6 = f[0];
            } else if (key == "k" && f.size() == 1) {
                c.k = std::stoi(f[0]);
                have_k = true;
            } else if (key == "eps" && f.size() == 1) {
                c.eps = parse_rational(f[0]);
                have_eps = true;
            } else if (key == "pin-diag" && f.size() == 2) {
                index_slot(c.pin_diag, std::stoi(f[0]), parse_rational(f[1]));
            } else if (key == "pin-row" && f.size() == 2) {
                index_slot(c.pin_row, std::stoi(f[0]), parse_rational(f[1]));
            } else if (key == "clique-le" && f.size() == 3) {
                c.le.push_back({std::stoi(f[0]) - 1, parse_set(f[1], ln), parse_rational(f[2])});
            } else if (key == "clique-ge" && f.size() == 4 && f[1] == "|") {
                c.ge.push_back({parse_set(f[0], ln), parse_set(f[2], ln), parse_rational(f[3])});
            } else if (key == "nonneg" && f.size() == 3) {
                c.nonneg.push_back({std::stoi(f[0]), std::stoi(f[1]), parse_rational(f[2])});
            } else if (key == "bound" && f.size() == 1) {
                c.bound = parse_rational(f[0]);
                have_bound = true;
            } else {
                fail("unrecognised record '" + key + "'");
            }
        } catch (const std::invalid_argument& e) {
            std::string what = e.what();
            if (what.rfind("certificate line", 0) == 0) throw;
            fail("bad field: " + what);
        } catch (const std::out_of_range&) {
            fail("number out of range");
        }
    }
    if (!header) throw std::invalid_argument("certificate: missing header");
    if (c.graph6.empty() || !have_k || !have_eps || !have_bound)
        throw std::invalid_argument("certificate: graph6, k, eps and bound are required");
    return c;
}

// Exact checker --------------------------------------------------------------

namespace {

// Adds w * (coefficient matrix of M[i][j]) to z; off-diagonal terms split in halves.
void add_sym(RationalMatrix& z, int i, int j, const Rational& w) {
    if (i == j) {
        z[i][i] += w;
    } else {
        Rational h = w / 2;
        z[i][j] += h;
        z[j][i] += h;
    }
}

}  // namespace

CertificateCheck check_certificate(const SdpCertificate& cert) {
    CertificateCheck res;
    auto reject = [&](std::string why) {
        res.ok = false;
        res.reason = std::move(why);
        return res;
    };
    Graph g;
    try {
        g = parse_graph6(cert.graph6);
    } catch (const std::exception& e) {
        return reject(std::string("graph6: ") + e.what());
    }
    const int n = g.order();
    if (n < 1) return reject("graph has no vertices");
    if (cert.k < 2) return reject("k must be at least 2");
    if (sgn(cert.eps) <= 0) return reject("eps must be positive");
    if (static_cast<int>(cert.pin_diag.size()) > n || static_cast<int>(cert.pin_row.size()) > n)
        return reject("pin multiplier for a vertex outside the graph");
    const Bits all = g.vertex_mask();

    RationalMatrix z(n + 1, std::vector<Rational>(n + 1, Rational(0)));
    z[0][0] = 1;
    Rational bound = 0;
    for (const auto& r : cert.le) {
        if (r.j < 0 || r.j >= n) return reject("clique-le vertex out of range");
        if ((r.s & ~all) || !g.is_clique(r.s)) return reject("clique-le set " + set_text(r.s) + " is not a clique");
        if (sgn(r.lambda) < 0) return reject("negative clique-le multiplier");
        for_each_bit(r.s, [&](int i) { add_sym(z, i + 1, r.j + 1, r.lambda); });
        bound -= r.lambda;
    }
    for (const auto& r : cert.ge) {
        if ((r.s & ~all) || !g.is_clique(r.s)) return reject("clique-ge set " + set_text(r.s) + " is not a clique");
        if ((r.t & ~all) || !g.is_clique(r.t)) return reject("clique-ge set " + set_text(r.t) + " is not a clique");
        if (sgn(r.lambda) < 0) return reject("negative clique-ge multiplier");
        z[0][0] -= r.lambda;
        for_each_bit(r.s, [&](int i) { for_each_bit(r.t, [&](int j) { add_sym(z, i + 1, j + 1, -r.lambda); }); });
        bound += r.lambda * (popcount(r.s) + popcount(r.t));
    }
    for (const auto& e : cert.nonneg) {
        if (e.i < 0 || e.j < e.i || e.j > n) return reject("nonneg entry index out of range");
        if (sgn(e.value) < 0) return reject("negative nonneg multiplier");
        z[e.i][e.j] -= e.value;
        if (e.i != e.j) z[e.j][e.i] -= e.value;
    }
    for (std::size_t v = 0; v < cert.pin_diag.size(); ++v) {
        add_sym(z, v + 1, v + 1, -cert.pin_diag[v]);
        bound += cert.pin_diag[v];
    }
    for (std::size_t v = 0; v < cert.pin_row.size(); ++v) {
        add_sym(z, 0, v + 1, -cert.pin_row[v]);
        bound += cert.pin_row[v];
    }
    res.bound = bound;
    if (bound < cert.bound) return reject("stated bound " + format_rational(cert.bound) + " exceeds the dual value " + format_rational(bound));
    if (cert.bound < cert.k - 1 + cert.eps) return reject("bound " + format_rational(cert.bound) + " is below k - 1 + eps");
    if (!is_positive_definite(std::move(z))) return reject("slack matrix is not positive definite");
    res.ok = true;
    return res;
}

// Certification --------------------------------------------------------------

namespace {

double min_eig(const RationalMatrix& z) {
    SymMatrix m(static_cast<int>(z.size()));
    for (std::size_t j = 0; j < z.size(); ++j)
        for (std::size_t i = 0; i <= j; ++i) m(i, j) = z[i][j].get_d();
    return m.min_eigenvalue();
}

// common denominator keeps the exact slack matrix cheap to factor
constexpr double kGrid = 1e8;

Rational round_grid(double x) {
    Rational r(mpz_class(static_cast<long>(std::llround(x * kGrid))), mpz_class(100000000));
    r.canonicalize();
    return r;
}

Rational clamp_round(double x) {
    if (!(x > 1e-11)) return Rational(0);
    return round_grid(x);
}

}  // namespace

CertifyResult certify_lower_bound(const Graph& g, int k, const Rational& eps, const SdpOptions& opts) {
    if (k < 2) throw std::invalid_argument("certify_lower_bound: k must be at least 2");
    if (sgn(eps) <= 0) throw std::invalid_argument("certify_lower_bound: eps must be positive");
    CertifyResult out;
    const int n = g.order();
    XiSdpProgram prog = build_xi_sdp_program(g);
    SdpSolution sol = solve_sdp(prog.problem, opts);
    out.numeric_value = sol.objective;
    const double target = k - 1 + eps.get_d();
    if (!(sol.dual_objective > target)) {
        out.reason = "numeric dual value " + std::to_string(sol.dual_objective) + " does not exceed k - 1 + eps";
        return out;
    }

    SdpCertificate cert;
    cert.graph6 = emit_graph6(g);
    cert.k = k;
    cert.eps = eps;
    RationalMatrix rest(n + 1, std::vector<Rational>(n + 1, Rational(0)));
    rest[0][0] = 1;
    Rational base = 0;
    const std::size_t nle = prog.le_rows.size();
    for (std::size_t r = 0; r < prog.problem.inequalities.size(); ++r) {
        double l = sol.ineq_duals[r];
        if (r < nle) {
            Rational lam = clamp_round(-l);
            if (lam == 0) continue;
            auto [c, j] = prog.le_rows[r];
            cert.le.push_back({j, prog.cliques[c], lam});
            for_each_bit(prog.cliques[c], [&](int i) { add_sym(rest, i + 1, j + 1, lam); });
            base -= lam;
        } else {
            Rational lam = clamp_round(l);
            if (lam == 0) continue;
            auto [a, b] = prog.ge_rows[r - nle];
            Bits s = prog.cliques[a], t = prog.cliques[b];
            cert.ge.push_back({s, t, lam});
            rest[0][0] -= lam;
            for_each_bit(s, [&](int i) { for_each_bit(t, [&](int j) { add_sym(rest, i + 1, j + 1, -lam); }); });
            base += lam * (popcount(s) + popcount(t));
        }
    }
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= j; ++i) {
            if ((i == 0 && j > 0) || (i == j && i > 0)) continue;
            Rational v = clamp_round(sol.dual_nonneg(i, j));
            if (v == 0) continue;
            cert.nonneg.push_back({i, j, v});
            rest[i][j] -= v;
            if (i != j) rest[j][i] -= v;
        }
    // pin multipliers absorb the difference to the numeric slack matrix
    cert.pin_diag.resize(n);
    cert.pin_row.resize(n);
    RationalMatrix z = rest;
    for (int v = 1; v <= n; ++v) {
        Rational zd = round_grid(sol.dual_psd(v, v));
        Rational zr = round_grid(sol.dual_psd(0, v));
        cert.pin_diag[v - 1] = rest[v][v] - zd;
        cert.pin_row[v - 1] = 2 * (rest[0][v] - zr);
        z[v][v] = zd;
        z[0][v] = z[v][0] = zr;
        base += cert.pin_diag[v - 1] + cert.pin_row[v - 1];
    }
    const double lmin = min_eig(z);

    // scale every multiplier by t = 1 - delta and move delta onto the diagonal:
    // the slack becomes t Z + delta I
    double d0 = std::max(1e-9, 2.0 * std::max(0.0, -lmin) + 1e-9);
    Rational delta = 0;
    for (int attempt = 0; attempt < 8; ++attempt, d0 *= 10) {
        if (d0 >= 0.5) break;
        // power of ten at or above d0
        int e = static_cast<int>(std::ceil(-std::log10(d0)));
        mpz_class den;
        mpz_ui_pow_ui(den.get_mpz_t(), 10, static_cast<unsigned long>(std::max(e, 0)));
        delta = Rational(1, den);
        if (delta.get_d() < d0) delta = Rational(10, den);
        Rational t = 1 - delta;
        SdpCertificate c = cert;
        for (auto& r : c.le) r.lambda *= t;
        for (auto& r : c.ge) r.lambda *= t;
        for (auto& e2 : c.nonneg) e2.value *= t;
        for (auto& y : c.pin_row) y *= t;
        for (auto& y : c.pin_diag) y = y * t - delta;
        Rational exact = t * base - delta * n;
        if (exact < k - 1 + eps) {
            out.reason = "rounded bound falls below k - 1 + eps after repair";
            return out;
        }
        // state a short rational below the exact dual value
        mpz_class fl;
        Rational scaled = exact * 1000000;
        mpz_fdiv_q(fl.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
        c.bound = Rational(fl, 1000000);
        c.bound.canonicalize();
        if (c.bound < k - 1 + eps) c.bound = exact;
        auto chk = check_certificate(c);
        if (chk.ok) {
            out.certificate = std::move(c);
            out.reason.clear();
            return out;
        }
        out.reason = chk.reason;
        d0 = std::max(d0, delta.get_d());
    }
    if (out.reason.empty()) out.reason = "repair did not reach a positive definite slack matrix";
    return out;
}

}  // namespace qchrome
