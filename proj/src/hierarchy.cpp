#include "qchrome/hierarchy.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

#include <Eigen/Dense>

#include "json.hpp"
#include "linalg.hpp"
#include "qchrome/coloring.hpp"

namespace qchrome {

std::optional<Word> reduce_word(const Word& w, int k) {
    Word out;
    out.reserve(w.size());
    for (int s : w) {
        if (!out.empty() && out.back() / k == s / k) {
            if (out.back() == s) continue;
            return std::nullopt;
        }
        out.push_back(s);
    }
    return out;
}

std::optional<Word> trace_key(const Word& w, int k) {
    auto r = reduce_word(w, k);
    if (!r) return std::nullopt;
    Word& c = *r;
    while (c.size() >= 2 && c.front() / k == c.back() / k) {
        if (c.front() != c.back()) return std::nullopt;
        c.pop_back();
    }
    Word best = c;
    const std::size_t len = c.size();
    for (int pass = 0; pass < 2; ++pass) {
        Word rot(len);
        for (std::size_t s = 0; s < len; ++s) {
            for (std::size_t t = 0; t < len; ++t) rot[t] = c[(s + t) % len];
            if (rot < best) best = rot;
        }
        std::reverse(c.begin(), c.end());
    }
    return best;
}

std::string to_string(Level l) {
    switch (l) {
        case Level::S1: return "S1";
        case Level::S: return "S";
        case Level::SPrime: return "S'";
        case Level::SDoublePrime: return "S''";
        case Level::Full: return "full";
    }
    return "?";
}

Level parse_level(const std::string& s) {
    for (Level l : {Level::S1, Level::S, Level::SPrime, Level::SDoublePrime, Level::Full})
        if (to_string(l) == s) return l;
    throw std::invalid_argument("unknown level '" + s + "' (expected S1, S, S', S'' or full)");
}

MonomialSet monomial_set(const Graph& g, int k, Level level, std::uint64_t seed) {
    if (k < 1) throw std::invalid_argument("monomial_set: k must be positive");
    const int n = g.order();
    MonomialSet m;
    m.level = level;
    m.seed = seed;
    m.words.push_back({});
    for (int s = 0; s < n * k; ++s) m.words.push_back({s});
    std::mt19937_64 rng(seed);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            if (x == y) continue;
            for (int a = 0; a < k; ++a)
                for (int b = 0; b < k; ++b) {
                    bool keep = false;
                    switch (level) {
                        case Level::S1: break;
                        case Level::S: keep = a == b && x < y; break;
                        case Level::SPrime: keep = a == b; break;
                        case Level::SDoublePrime: keep = x < y || (rng() >> 63) != 0; break;
                        case Level::Full: keep = true; break;
                    }
                    if (keep) m.words.push_back({symbol(x, a, k), symbol(y, b, k)});
                }
        }
    return m;
}

// Program construction -------------------------------------------------------

namespace {

struct ClassUF {
    std::vector<int> parent;
    std::vector<char> fixed;
    std::vector<Rational> value;

    int add(bool is_fixed, const Rational& v) {
        parent.push_back(static_cast<int>(parent.size()));
        fixed.push_back(is_fixed);
        value.push_back(v);
        return parent.back();
    }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    // false on conflicting fixed values
    bool fix(int x, const Rational& v) {
        x = find(x);
        if (fixed[x]) return value[x] == v;
        fixed[x] = 1;
        value[x] = v;
        return true;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return true;
        if (a > b) std::swap(a, b);
        if (fixed[b] && !fix(a, value[b])) return false;
        parent[b] = a;
        return true;
    }
};

using RawRow = std::map<int, long>;   // class -> coefficient; rhs is 0

Word concat_rev(const Word& u, const Word& v) {
    Word w(u.rbegin(), u.rend());
    w.insert(w.end(), v.begin(), v.end());
    return w;
}

}  // namespace

SyncProgram build_sync_program(const Graph& g, int k, const std::vector<Word>& words) {
    if (k < 1) throw std::invalid_argument("build_sync_program: k must be positive");
    const int n = g.order();
    const int dim = static_cast<int>(words.size());
    SyncProgram p;
    p.graph = g;
    p.k = k;
    p.words = words;
    p.q = Rational(1, n + 2 * g.edge_count());

    std::map<Word, int> index;
    for (int i = 0; i < dim; ++i) {
        for (int s : words[i])
            if (s < 0 || s >= n * k) throw std::invalid_argument("build_sync_program: symbol out of range");
        auto r = reduce_word(words[i], k);
        if (!r || *r != words[i]) throw std::invalid_argument("build_sync_program: word is not reduced");
        if (!index.emplace(words[i], i).second) throw std::invalid_argument("build_sync_program: repeated word");
    }
    if (!index.count(Word{})) throw std::invalid_argument("build_sync_program: empty word missing");
    for (int s = 0; s < n * k; ++s)
        if (!index.count(Word{s})) throw std::invalid_argument("build_sync_program: length-1 word missing");

    ClassUF uf;
    const int zero_class = uf.add(true, Rational(0));
    std::vector<char> short_key{0};
    std::map<Word, int> class_of_key;
    auto class_of = [&](const Word& w) {
        auto key = trace_key(w, k);
        if (!key) return zero_class;
        auto it = class_of_key.find(*key);
        if (it != class_of_key.end()) return it->second;
        int c = key->empty() ? uf.add(true, Rational(1)) : uf.add(false, Rational(0));
        short_key.push_back(key->size() <= 2);
        class_of_key.emplace(*key, c);
        return c;
    };

    const std::size_t npos = static_cast<std::size_t>(dim) * (dim + 1) / 2;
    std::vector<int> pos_raw(npos);
    SymMatrix shape(dim);
    for (int j = 0; j < dim; ++j)
        for (int i = 0; i <= j; ++i) pos_raw[shape.index(i, j)] = class_of(concat_rev(words[i], words[j]));

    // completeness: sum_a Gamma[u][v E^x_a] = Gamma[u][v] (and prepended),
    // only when every reduced nonzero word of the sum is in the set
    std::set<RawRow> raw_rows;
    for (int j = 0; j < dim; ++j)
        for (int x = 0; x < n; ++x)
            for (int mode = 0; mode < 2; ++mode) {
                std::vector<int> targets;
                bool complete = true;
                for (int a = 0; a < k && complete; ++a) {
                    Word w = words[j];
                    if (mode == 0)
                        w.push_back(symbol(x, a, k));
                    else
                        w.insert(w.begin(), symbol(x, a, k));
                    auto r = reduce_word(w, k);
                    if (!r) continue;
                    auto it = index.find(*r);
                    if (it == index.end())
                        complete = false;
                    else
                        targets.push_back(it->second);
                }
                if (!complete) continue;
                for (int i = 0; i < dim; ++i) {
                    RawRow row;
                    for (int t : targets) row[pos_raw[shape.index(i, t)]] += 1;
                    row[pos_raw[shape.index(i, j)]] -= 1;
                    std::erase_if(row, [](const auto& kv) { return kv.second == 0; });
                    if (!row.empty()) raw_rows.insert(std::move(row));
                }
            }

    // fold single-term and a = -b rows into the class structure
    std::vector<RawRow> pending(raw_rows.begin(), raw_rows.end());
    struct Norm {
        std::map<int, Rational> terms;
        Rational rhs;
    };
    auto normalise = [&](const RawRow& row) {
        Norm out;
        for (auto [c, a] : row) {
            int r = uf.find(c);
            if (uf.fixed[r])
                out.rhs -= a * uf.value[r];
            else
                out.terms[r] += a;
        }
        std::erase_if(out.terms, [](const auto& kv) { return kv.second == 0; });
        return out;
    };
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& row : pending) {
            Norm nr = normalise(row);
            if (nr.terms.empty()) {
                if (nr.rhs != 0) throw std::logic_error("build_sync_program: inconsistent completeness rows");
            } else if (nr.terms.size() == 1) {
                auto [c, a] = *nr.terms.begin();
                if (!uf.fix(c, nr.rhs / a)) throw std::logic_error("build_sync_program: inconsistent completeness rows");
                changed = true;
            } else if (nr.terms.size() == 2 && nr.rhs == 0 && nr.terms.begin()->second == -std::next(nr.terms.begin())->second) {
                uf.unite(nr.terms.begin()->first, std::next(nr.terms.begin())->first);
                changed = true;
            }
        }
    }

    // final classes
    std::vector<int> final_id(uf.parent.size(), -1);
    for (std::size_t c = 0; c < uf.parent.size(); ++c) {
        int r = uf.find(static_cast<int>(c));
        if (final_id[r] < 0) {
            final_id[r] = p.num_classes++;
            p.fixed.push_back(uf.fixed[r]);
            p.value.push_back(uf.value[r]);
        }
        final_id[c] = final_id[r];
    }
    std::vector<char> nonneg(p.num_classes, 0);
    for (std::size_t c = 0; c < uf.parent.size(); ++c)
        if (short_key[c]) nonneg[final_id[c]] = 1;
    for (int c = 0; c < p.num_classes; ++c)
        if (nonneg[c] && !p.fixed[c]) p.nonneg_classes.push_back(c);
    p.position_class.resize(npos);
    for (std::size_t e = 0; e < npos; ++e) p.position_class[e] = final_id[pos_raw[e]];

    std::set<std::pair<std::vector<std::pair<int, Rational>>, Rational>> seen_rows;
    for (const auto& row : pending) {
        Norm nr = normalise(row);
        if (nr.terms.size() < 2) continue;
        SyncProgram::Row out;
        for (auto& [c, a] : nr.terms) out.terms.emplace_back(final_id[c], a);
        std::sort(out.terms.begin(), out.terms.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
        out.rhs = nr.rhs;
        // scale so the first coefficient is 1 before deduplicating
        Rational lead = out.terms.front().second;
        for (auto& t : out.terms) t.second /= lead;
        out.rhs /= lead;
        if (seen_rows.emplace(out.terms, out.rhs).second) p.rows.push_back(std::move(out));
    }

    // objective over legal ordered pairs
    std::vector<Rational> pos_obj(npos, Rational(0));
    p.objective.assign(p.num_classes, Rational(0));
    auto add_obj = [&](int x, int a, int y, int b) {
        int i = index.at(Word{symbol(x, a, k)}), j = index.at(Word{symbol(y, b, k)});
        std::size_t e = shape.index(i, j);
        pos_obj[e] += p.q;
        p.objective[p.position_class[e]] += p.q;
    };
    for (int x = 0; x < n; ++x) {
        for (int a = 0; a < k; ++a) add_obj(x, a, x, a);
        for_each_bit(g.neighbors(x), [&](int y) {
            for (int a = 0; a < k; ++a)
                for (int b = 0; b < k; ++b)
                    if (a != b) add_obj(x, a, y, b);
        });
    }

    for (int w = 0; w < dim; ++w)
        if (!p.fixed[p.position_class[shape.index(w, w)]]) p.diag_words.push_back(w);

    // the numeric program over Gamma
    SdpProblem& sp = p.problem;
    sp.dim = dim;
    sp.sense = Sense::Maximize;
    for (int j = 0; j < dim; ++j)
        for (int i = 0; i <= j; ++i) {
            std::size_t e = shape.index(i, j);
            if (pos_obj[e] != 0) add_entry(sp.objective, i, j, pos_obj[e].get_d());
        }
    std::vector<std::pair<int, int>> rep(p.num_classes, {-1, -1});
    for (int j = 0; j < dim; ++j)
        for (int i = 0; i <= j; ++i) {
            int c = p.position_class[shape.index(i, j)];
            SdpEquality eq;
            if (p.fixed[c]) {
                add_entry(eq.a, i, j, 1.0);
                eq.b = p.value[c].get_d();
            } else if (rep[c].first < 0) {
                rep[c] = {i, j};
                continue;
            } else {
                add_entry(eq.a, i, j, 1.0);
                add_entry(eq.a, rep[c].first, rep[c].second, -1.0);
            }
            sp.equalities.push_back(std::move(eq));
        }
    for (const auto& row : p.rows) {
        SdpEquality eq;
        for (auto& [c, a] : row.terms) add_entry(eq.a, rep[c].first, rep[c].second, a.get_d());
        eq.b = row.rhs.get_d();
        sp.equalities.push_back(std::move(eq));
    }
    for (int w : p.diag_words) {
        SdpInequality in;
        add_entry(in.g, w, w, 1.0);
        in.h = 1.0;
        in.rel = Relation::LessEq;
        sp.inequalities.push_back(std::move(in));
    }
    for (int c : p.nonneg_classes) {
        SdpInequality in;
        add_entry(in.g, rep[c].first, rep[c].second, 1.0);
        in.h = 0.0;
        in.rel = Relation::GreaterEq;
        sp.inequalities.push_back(std::move(in));
    }
    return p;
}

// Certificates ---------------------------------------------------------------

namespace {

struct Residuals {
    std::vector<Rational> res;   // per class
    Rational bound;
};

// class residuals c_K + <Z, B_K> + sum mu a - sum lambda, and the bound
Residuals residuals(const SyncProgram& p, const RationalMatrix& z, const std::vector<Rational>& mu,
                    const std::vector<Rational>& lambda, const std::vector<Rational>& nu) {
    const int dim = static_cast<int>(p.words.size());
    Residuals r;
    std::vector<Rational> zb(p.num_classes, Rational(0));
    SymMatrix shape(dim);
    for (int j = 0; j < dim; ++j)
        for (int i = 0; i <= j; ++i) {
            int c = p.position_class[shape.index(i, j)];
            if (i == j)
                zb[c] += z[i][j];
            else
                zb[c] += 2 * z[i][j];
        }
    r.res.assign(p.num_classes, Rational(0));
    r.bound = 0;
    for (int c = 0; c < p.num_classes; ++c) {
        if (p.fixed[c])
            r.bound += p.value[c] * (p.objective[c] + zb[c]);
        else
            r.res[c] = p.objective[c] + zb[c];
    }
    for (std::size_t t = 0; t < p.rows.size(); ++t) {
        for (auto& [c, a] : p.rows[t].terms) r.res[c] += mu[t] * a;
        r.bound -= mu[t] * p.rows[t].rhs;
    }
    for (std::size_t t = 0; t < p.diag_words.size(); ++t) {
        int w = p.diag_words[t];
        r.res[p.position_class[shape.index(w, w)]] -= lambda[t];
        r.bound += lambda[t];
    }
    for (std::size_t t = 0; t < p.nonneg_classes.size(); ++t) r.res[p.nonneg_classes[t]] += nu[t];
    return r;
}

}  // namespace

std::string HierarchyCertificate::to_json() const {
    using nlohmann::json;
    json ws = json::array();
    for (const auto& w : words) {
        json jw = json::array();
        for (int s : w) jw.push_back({s / k + 1, s % k + 1});
        ws.push_back(jw);
    }
    json mus = json::array(), lams = json::array(), nus = json::array(), zs = json::array();
    for (const auto& m : mu) mus.push_back(format_rational(m));
    for (const auto& v : nu) nus.push_back(format_rational(v));
    for (const auto& l : lambda) lams.push_back(format_rational(l));
    for (std::size_t j = 0; j < z.size(); ++j)
        for (std::size_t i = 0; i <= j; ++i)
            if (z[i][j] != 0) zs.push_back({i, j, format_rational(z[i][j])});
    json doc = {{"format", "sync-hierarchy-certificate"},
                {"version", 1},
                {"graph6", graph6},
                {"k", k},
                {"words", ws},
                {"mu", mus},
                {"lambda", lams},
                {"nu", nus},
                {"z", zs},
                {"bound", format_rational(bound)}};
    return doc.dump();
}

HierarchyCertificate HierarchyCertificate::from_json(const std::string& text) {
    using nlohmann::json;
    HierarchyCertificate c;
    try {
        json doc = json::parse(text);
        if (doc.at("format") != "sync-hierarchy-certificate") throw std::invalid_argument("not a hierarchy certificate");
        if (doc.at("version").get<int>() != 1) throw std::invalid_argument("unsupported certificate version");
        c.graph6 = doc.at("graph6").get<std::string>();
        c.k = doc.at("k").get<int>();
        if (c.k < 1) throw std::invalid_argument("k must be positive");
        for (const auto& jw : doc.at("words")) {
            Word w;
            for (const auto& s : jw) {
                int x = s.at(0).get<int>() - 1, a = s.at(1).get<int>() - 1;
                if (x < 0 || a < 0 || a >= c.k) throw std::invalid_argument("symbol out of range");
                w.push_back(symbol(x, a, c.k));
            }
            c.words.push_back(std::move(w));
        }
        for (const auto& m : doc.at("mu")) c.mu.push_back(parse_rational(m.get<std::string>()));
        for (const auto& l : doc.at("lambda")) c.lambda.push_back(parse_rational(l.get<std::string>()));
        for (const auto& v : doc.at("nu")) c.nu.push_back(parse_rational(v.get<std::string>()));
        const std::size_t dim = c.words.size();
        c.z.assign(dim, std::vector<Rational>(dim, Rational(0)));
        for (const auto& e : doc.at("z")) {
            std::size_t i = e.at(0).get<std::size_t>(), j = e.at(1).get<std::size_t>();
            if (i > j || j >= dim) throw std::invalid_argument("z entry out of range");
            c.z[i][j] = c.z[j][i] = parse_rational(e.at(2).get<std::string>());
        }
        c.bound = parse_rational(doc.at("bound").get<std::string>());
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("hierarchy certificate: ") + e.what());
    }
    return c;
}

HierarchyCheck check_hierarchy_certificate(const HierarchyCertificate& cert) {
    HierarchyCheck out;
    auto reject = [&](std::string why) {
        out.ok = false;
        out.reason = std::move(why);
        return out;
    };
    Graph g;
    try {
        g = parse_graph6(cert.graph6);
    } catch (const std::exception& e) {
        return reject(std::string("graph6: ") + e.what());
    }
    for (const auto& w : cert.words)
        for (int s : w)
            if (s >= g.order() * cert.k) return reject("symbol outside the graph");
    SyncProgram p;
    try {
        p = build_sync_program(g, cert.k, cert.words);
    } catch (const std::exception& e) {
        return reject(e.what());
    }
    if (cert.mu.size() != p.rows.size()) return reject("expected " + std::to_string(p.rows.size()) + " completeness multipliers");
    if (cert.lambda.size() != p.diag_words.size()) return reject("expected " + std::to_string(p.diag_words.size()) + " diagonal multipliers");
    if (cert.nu.size() != p.nonneg_classes.size()) return reject("expected " + std::to_string(p.nonneg_classes.size()) + " nonnegativity multipliers");
    if (cert.z.size() != p.words.size()) return reject("slack matrix has the wrong size");
    for (const auto& l : cert.lambda)
        if (sgn(l) < 0) return reject("negative diagonal multiplier");
    for (const auto& v : cert.nu)
        if (sgn(v) < 0) return reject("negative nonnegativity multiplier");
    Residuals r = residuals(p, cert.z, cert.mu, cert.lambda, cert.nu);
    for (int c = 0; c < p.num_classes; ++c)
        if (!p.fixed[c] && r.res[c] != 0) return reject("stationarity fails for class " + std::to_string(c));
    out.bound = r.bound;
    if (cert.bound < r.bound) return reject("stated bound " + format_rational(cert.bound) + " is below the dual value " + format_rational(r.bound));
    if (cert.bound >= 1) return reject("bound " + format_rational(cert.bound) + " does not rule out a perfect strategy");
    std::string why;
    if (!psd_by_cholesky_hint(cert.z, &why)) return reject("slack matrix: " + why);
    out.ok = true;
    return out;
}

// Solving --------------------------------------------------------------------

namespace {

std::optional<HierarchyCertificate> make_certificate(const SyncProgram& p, const SdpSolution& sol, std::string& note) {
    const int dim = static_cast<int>(p.words.size());
    SymMatrix shape(dim);
    const std::size_t nrow = p.rows.size();
    const std::size_t first_row = p.problem.equalities.size() - nrow;

    // class positions and weights
    std::vector<std::vector<std::pair<int, int>>> members(p.num_classes);
    for (int j = 0; j < dim; ++j)
        for (int i = 0; i <= j; ++i) members[p.position_class[shape.index(i, j)]].emplace_back(i, j);

    Eigen::MatrixXd z(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) z(i, j) = sol.dual_psd(i, j);
    std::vector<double> mu(nrow), lam(p.diag_words.size());
    for (std::size_t t = 0; t < nrow; ++t) {
        mu[t] = sol.eq_duals[first_row + t];
        if (!std::isfinite(mu[t])) mu[t] = 0.0;
    }
    for (std::size_t t = 0; t < lam.size(); ++t) lam[t] = std::max(0.0, -sol.ineq_duals[t]);
    std::vector<double> nu(p.nonneg_classes.size());
    for (std::size_t t = 0; t < nu.size(); ++t) nu[t] = std::max(0.0, sol.ineq_duals[lam.size() + t]);

    // fixed part of each class equation (everything but Z)
    std::vector<double> base(p.num_classes, 0.0);
    for (int c = 0; c < p.num_classes; ++c) base[c] = p.objective[c].get_d();
    for (std::size_t t = 0; t < nrow; ++t)
        for (auto& [c, a] : p.rows[t].terms) base[c] += mu[t] * a.get_d();
    for (std::size_t t = 0; t < lam.size(); ++t) {
        int w = p.diag_words[t];
        base[p.position_class[shape.index(w, w)]] -= lam[t];
    }
    for (std::size_t t = 0; t < nu.size(); ++t) base[p.nonneg_classes[t]] += nu[t];
    auto absorb = [&]() {
        for (int c = 0; c < p.num_classes; ++c) {
            if (p.fixed[c]) continue;
            double s = base[c], wsum = 0.0;
            for (auto [i, j] : members[c]) {
                s += (i == j ? 1.0 : 2.0) * z(i, j);
                wsum += i == j ? 1.0 : 2.0;
            }
            double d = s / wsum;
            for (auto [i, j] : members[c]) {
                z(i, j) -= d;
                if (i != j) z(j, i) -= d;
            }
        }
    };
    for (int it = 0; it < 40; ++it) {
        absorb();
        detail::project_psd_inplace(z);
    }
    absorb();

    RationalMatrix zr(dim, std::vector<Rational>(dim));
    for (int j = 0; j < dim; ++j)
        for (int i = 0; i <= j; ++i) zr[i][j] = zr[j][i] = dyadic(z(i, j));
    std::vector<Rational> mur(nrow), lamr(lam.size());
    for (std::size_t t = 0; t < nrow; ++t) mur[t] = dyadic(mu[t]);
    for (std::size_t t = 0; t < lam.size(); ++t) lamr[t] = dyadic(lam[t]);
    std::vector<Rational> nur(nu.size());
    for (std::size_t t = 0; t < nu.size(); ++t) nur[t] = dyadic(nu[t]);
    // exact stationarity: push each class residual into one position
    Residuals r = residuals(p, zr, mur, lamr, nur);
    for (int c = 0; c < p.num_classes; ++c) {
        if (p.fixed[c] || r.res[c] == 0) continue;
        auto [i, j] = members[c].front();
        if (i == j) {
            zr[i][i] -= r.res[c];
        } else {
            Rational h = r.res[c] / 2;
            zr[i][j] -= h;
            zr[j][i] -= h;
        }
    }
    Eigen::MatrixXd zd(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) zd(i, j) = zr[i][j].get_d();
    double lmin = detail::sym_eigenvalues(zd)(0);

    // shift by delta I: free diagonal classes pay through lambda
    double want = std::max(1e-10, 2.0 * std::max(0.0, -lmin) + 1e-10);
    int e = static_cast<int>(std::ceil(std::log2(want)));
    for (int attempt = 0; attempt < 6; ++attempt, e += 4) {
        Rational delta = e >= 0 ? Rational(mpz_class(1) << e) : Rational(mpz_class(1), mpz_class(1) << -e);
        HierarchyCertificate c;
        c.graph6 = emit_graph6(p.graph);
        c.k = p.k;
        c.words = p.words;
        c.mu = mur;
        c.lambda = lamr;
        c.nu = nur;
        c.z = zr;
        for (int i = 0; i < dim; ++i) c.z[i][i] += delta;
        for (auto& l : c.lambda) l += delta;
        Residuals rr = residuals(p, c.z, c.mu, c.lambda, c.nu);
        if (rr.bound >= 1) {
            note = "bound reaches 1 after repair";
            return std::nullopt;
        }
        // state a short rational at or above the dual value
        mpz_class num;
        Rational scaled = rr.bound * 1000000000;
        mpz_cdiv_q(num.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
        c.bound = Rational(num, 1000000000);
        c.bound.canonicalize();
        if (c.bound >= 1) c.bound = rr.bound;
        auto chk = check_hierarchy_certificate(c);
        if (chk.ok) return c;
        note = chk.reason;
    }
    return std::nullopt;
}

}  // namespace

SyncResult sync_value_upper_bound(const Graph& g, int k, const MonomialSet& m, const HierarchyOptions& opts) {
    auto t0 = std::chrono::steady_clock::now();
    SyncResult res;
    res.level = m.level;
    SyncProgram p = build_sync_program(g, k, m);
    res.dim = p.problem.dim;
    SdpSolution sol = solve_sdp(p.problem, opts.sdp);
    res.value = sol.objective;
    res.dual_value = sol.dual_objective;
    res.status = sol.status;
    const double top = std::max(res.value, res.dual_value);
    res.below_one = top <= 1.0 - 10.0 * opts.sdp.tol;
    if (res.below_one && opts.certify) {
        if (1.0 - top > opts.certify_margin) {
            std::string note;
            res.certificate = make_certificate(p, sol, note);
            if (!res.certificate) res.note = "numeric only: " + note;
        } else {
            res.note = "numeric only: margin below the certification threshold";
        }
    }
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

PipelineReport quantum_lb_pipeline(const Graph& g, const PipelineOptions& opts) {
    auto t0 = std::chrono::steady_clock::now();
    PipelineReport rep;
    rep.graph6 = emit_graph6(g);
    rep.chi = opts.chi > 0 ? opts.chi : chromatic_number(g);
    if (rep.chi < 3) throw std::invalid_argument("quantum_lb_pipeline: chromatic number must be at least 3");
    rep.k = rep.chi - 1;
    auto since = [](auto a) { return std::chrono::duration<double>(std::chrono::steady_clock::now() - a).count(); };

    {
        auto t = std::chrono::steady_clock::now();
        PipelineStep st;
        st.name = "xi-sdp";
        st.dim = g.order() + 1;
        auto c = certify_lower_bound(g, rep.chi, opts.eps, opts.sdp);
        st.value = c.numeric_value;
        st.success = c.certificate.has_value();
        st.exact = st.success;
        st.note = c.reason;
        st.seconds = since(t);
        rep.steps.push_back(st);
        if (st.success) {
            rep.xi_certificate = std::move(c.certificate);
            rep.resolved = true;
            rep.resolved_by = st.name;
        }
    }
    for (Level level : {Level::S, Level::SPrime, Level::SDoublePrime}) {
        if (rep.resolved) break;
        auto m = monomial_set(g, rep.k, level, opts.seed);
        auto r = sync_value_upper_bound(g, rep.k, m, opts.hierarchy);
        PipelineStep st;
        st.name = to_string(level);
        st.dim = r.dim;
        st.value = r.value;
        st.success = r.below_one;
        st.exact = r.certificate.has_value();
        st.note = r.note;
        st.seconds = r.seconds;
        rep.steps.push_back(st);
        if (st.success) {
            rep.hierarchy_certificate = std::move(r.certificate);
            rep.resolved = true;
            rep.resolved_by = st.name;
        }
    }
    rep.seconds = since(t0);
    return rep;
}

}  // namespace qchrome
