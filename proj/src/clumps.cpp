#include "qchrome/clumps.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace qchrome {

// ExactScalar ----------------------------------------------------------------

namespace {

// n = f^2 * s with s squarefree
std::pair<long, long> split_square(long n) {
    if (n <= 0) throw std::invalid_argument("square root of a non-positive integer");
    long f = 1, s = 1;
    for (long p = 2; p * p <= n; ++p) {
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        for (int t = 0; t < e / 2; ++t) f *= p;
        if (e % 2) s *= p;
    }
    s *= n;
    return {f, s};
}

GaussianRational gmul(const GaussianRational& a, const GaussianRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

}  // namespace

ExactScalar::ExactScalar(long v) {
    if (v != 0) terms_[1] = {Rational(v), Rational(0)};
}

ExactScalar ExactScalar::entry(long re, long im, long sqrt_denom) {
    auto [f, s] = split_square(sqrt_denom);
    // 1 / (f sqrt s) = sqrt s / (f s)
    ExactScalar out;
    Rational scale(1, f * s);
    scale.canonicalize();
    GaussianRational c{Rational(re) * scale, Rational(im) * scale};
    if (c.re != 0 || c.im != 0) out.terms_[s] = c;
    return out;
}

ExactScalar ExactScalar::sqrt_of(const Rational& q) {
    if (sgn(q) < 0) throw std::invalid_argument("sqrt_of: negative argument");
    ExactScalar out;
    if (sgn(q) == 0) return out;
    mpz_class pr = q.get_num() * q.get_den();
    if (!pr.fits_slong_p()) throw std::invalid_argument("sqrt_of: argument too large");
    auto [f, s] = split_square(pr.get_si());
    Rational c(f, 1);
    c /= Rational(q.get_den());
    out.terms_[s] = {c, Rational(0)};
    return out;
}

ExactScalar ExactScalar::from_gaussian(const GaussianRational& g) {
    ExactScalar out;
    if (g.re != 0 || g.im != 0) out.terms_[1] = g;
    return out;
}

void ExactScalar::tidy(long key) {
    auto it = terms_.find(key);
    if (it != terms_.end() && it->second.re == 0 && it->second.im == 0) terms_.erase(it);
}

ExactScalar& ExactScalar::operator+=(const ExactScalar& o) {
    for (const auto& [s, c] : o.terms_) {
        auto& t = terms_[s];
        t.re += c.re;
        t.im += c.im;
        tidy(s);
    }
    return *this;
}

ExactScalar& ExactScalar::operator-=(const ExactScalar& o) {
    for (const auto& [s, c] : o.terms_) {
        auto& t = terms_[s];
        t.re -= c.re;
        t.im -= c.im;
        tidy(s);
    }
    return *this;
}

ExactScalar operator*(const ExactScalar& a, const ExactScalar& b) {
    ExactScalar out;
    for (const auto& [s, x] : a.terms_)
        for (const auto& [t, y] : b.terms_) {
            long key = s, f = 1;
            if (s != 1 || t != 1) {
                long g = std::gcd(s, t);
                // sqrt(s) sqrt(t) = g sqrt(s t / g^2)
                key = (s / g) * (t / g);
                f = g;
            }
            GaussianRational p = gmul(x, y);
            auto& acc = out.terms_[key];
            acc.re += p.re * f;
            acc.im += p.im * f;
            out.tidy(key);
        }
    return out;
}

ExactScalar ExactScalar::operator-() const {
    ExactScalar out = *this;
    for (auto& [s, c] : out.terms_) {
        c.re = -c.re;
        c.im = -c.im;
    }
    return out;
}

ExactScalar ExactScalar::conj() const {
    ExactScalar out = *this;
    for (auto& [s, c] : out.terms_) c.im = -c.im;
    return out;
}

std::complex<double> ExactScalar::to_complex() const {
    std::complex<double> z = 0;
    for (const auto& [s, c] : terms_) z += std::complex<double>(c.re.get_d(), c.im.get_d()) * std::sqrt(double(s));
    return z;
}

std::string ExactScalar::to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [s, c] : terms_) {
        if (!out.empty()) out += " + ";
        out += "(" + format_rational(c.re) + (sgn(c.im) < 0 ? "" : "+") + format_rational(c.im) + "i)";
        if (s != 1) out += "*sqrt(" + std::to_string(s) + ")";
    }
    return out;
}

ExactScalar inner(const ExactVector& a, const ExactVector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("inner product of vectors of different lengths");
    ExactScalar s;
    for (std::size_t t = 0; t < a.size(); ++t)
        if (!a[t].is_zero() && !b[t].is_zero()) s += a[t].conj() * b[t];
    return s;
}

// Clumps ---------------------------------------------------------------------

void VectorClump::check_shape() const {
    if (r < 1 || k < 1) throw std::invalid_argument("clump needs r >= 1 and k >= 1");
    if (static_cast<int>(vectors.size()) != r) throw std::invalid_argument("clump has the wrong number of rows");
    for (const auto& row : vectors) {
        if (static_cast<int>(row.size()) != k) throw std::invalid_argument("clump row has the wrong number of vectors");
        for (const auto& v : row) {
            if (static_cast<int>(v.size()) != r * k)
                throw std::invalid_argument("clump vector is not in dimension r*k = " + std::to_string(r * k));
            for (const auto& e : v)
                if (e.sqrt_denom < 1) throw std::invalid_argument("clump entry with non-positive denominator");
        }
    }
}

ExactVector VectorClump::exact(int i, int j) const {
    ExactVector out;
    out.reserve(vectors[i][j].size());
    for (const auto& e : vectors[i][j]) out.push_back(ExactScalar::entry(e.re_num, e.im_num, e.sqrt_denom));
    return out;
}

Eigen::VectorXcd VectorClump::numeric(int i, int j) const {
    const auto& v = vectors[i][j];
    Eigen::VectorXcd out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t t = 0; t < v.size(); ++t)
        out(t) = std::complex<double>(v[t].re_num, v[t].im_num) / std::sqrt(double(v[t].sqrt_denom));
    return out;
}

Verdict is_valid_clump(const VectorClump& c) {
    c.check_shape();
    std::vector<ExactVector> all;
    for (int i = 0; i < c.r; ++i)
        for (int j = 0; j < c.k; ++j) all.push_back(c.exact(i, j));
    Verdict v;
    for (std::size_t a = 0; a < all.size(); ++a) {
        if (!(inner(all[a], all[a]) == ExactScalar(1))) {
            v.detail = "vector (" + std::to_string(a / c.k + 1) + "," + std::to_string(a % c.k + 1) + ") is not a unit vector";
            return v;
        }
        for (std::size_t b = a + 1; b < all.size(); ++b)
            if (!inner(all[a], all[b]).is_zero()) {
                v.detail = "vectors (" + std::to_string(a / c.k + 1) + "," + std::to_string(a % c.k + 1) + ") and (" +
                           std::to_string(b / c.k + 1) + "," + std::to_string(b % c.k + 1) + ") are not orthogonal";
                return v;
            }
    }
    v.ok = true;
    return v;
}

bool clumps_orthogonal(const VectorClump& a, const VectorClump& b) {
    a.check_shape();
    b.check_shape();
    if (a.r != b.r || a.k != b.k) throw std::invalid_argument("clumps of different shapes");
    for (int i = 0; i < a.r; ++i)
        for (int i2 = 0; i2 < b.r; ++i2) {
            ExactScalar s;
            for (int j = 0; j < a.k; ++j) s += inner(a.exact(i, j), b.exact(i2, j));
            if (!s.is_zero()) return false;
        }
    return true;
}

Graph orthogonality_graph(const std::vector<VectorClump>& cs) {
    if (cs.size() > 64) throw std::invalid_argument("at most 64 clumps");
    for (const auto& c : cs) {
        c.check_shape();
        if (c.r != cs.front().r || c.k != cs.front().k) throw std::invalid_argument("clumps of different shapes");
    }
    Graph g(static_cast<int>(cs.size()));
    for (std::size_t a = 0; a < cs.size(); ++a)
        for (std::size_t b = a + 1; b < cs.size(); ++b)
            if (clumps_orthogonal(cs[a], cs[b])) g.add_edge(static_cast<int>(a), static_cast<int>(b));
    return g;
}

// JSON -----------------------------------------------------------------------

std::vector<VectorClump> parse_clumps_json(const std::string& text) {
    using nlohmann::json;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("clump file: ") + e.what());
    }
    if (!doc.is_array()) throw std::invalid_argument("clump file: expected a JSON array");
    std::vector<VectorClump> out;
    for (std::size_t n = 0; n < doc.size(); ++n) {
        const std::string where = "clump " + std::to_string(n + 1) + ": ";
        try {
            const auto& o = doc[n];
            VectorClump c;
            c.r = o.at("r").get<int>();
            c.k = o.at("k").get<int>();
            for (const auto& row : o.at("vectors")) {
                c.vectors.emplace_back();
                for (const auto& vec : row) {
                    c.vectors.back().emplace_back();
                    for (const auto& e : vec)
                        c.vectors.back().back().push_back(
                            {e.at("re_num").get<long>(), e.at("im_num").get<long>(), e.at("sqrt_denom").get<long>()});
                }
            }
            c.check_shape();
            auto v = is_valid_clump(c);
            if (!v) throw std::invalid_argument(v.detail);
            out.push_back(std::move(c));
        } catch (const json::exception& e) {
            throw std::invalid_argument("clump file: " + where + e.what());
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("clump file: " + where + e.what());
        }
    }
    return out;
}

std::string clumps_to_json(const std::vector<VectorClump>& cs) {
    using nlohmann::json;
    json doc = json::array();
    for (const auto& c : cs) {
        json rows = json::array();
        for (const auto& row : c.vectors) {
            json jr = json::array();
            for (const auto& vec : row) {
                json jv = json::array();
                for (const auto& e : vec) jv.push_back({{"re_num", e.re_num}, {"im_num", e.im_num}, {"sqrt_denom", e.sqrt_denom}});
                jr.push_back(jv);
            }
            rows.push_back(jr);
        }
        doc.push_back({{"r", c.r}, {"k", c.k}, {"vectors", rows}});
    }
    return doc.dump();
}

std::vector<VectorClump> load_clumps(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open clump file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_clumps_json(ss.str());
}

// Lift -----------------------------------------------------------------------

namespace {

using ExactMatrix = std::vector<ExactScalar>;

ExactMatrix exact_mul(const ExactMatrix& a, const ExactMatrix& b, int d) {
    ExactMatrix c(static_cast<std::size_t>(d) * d);
    for (int i = 0; i < d; ++i)
        for (int t = 0; t < d; ++t) {
            const ExactScalar& x = a[i * d + t];
            if (x.is_zero()) continue;
            for (int j = 0; j < d; ++j) {
                const ExactScalar& y = b[t * d + j];
                if (!y.is_zero()) c[i * d + j] += x * y;
            }
        }
    return c;
}

bool exact_is_zero(const ExactMatrix& a) {
    return std::all_of(a.begin(), a.end(), [](const ExactScalar& x) { return x.is_zero(); });
}

std::string outcome_name(int c) { return std::to_string(c + 1); }

}  // namespace

MeasurementFamily lift_to_quantum_coloring(const Graph& g, const std::vector<VectorClump>& rep) {
    const int n = g.order();
    if (static_cast<int>(rep.size()) != n) throw std::invalid_argument("lift: one clump per vertex required");
    if (n == 0) return {};
    const int r = rep.front().r, k = rep.front().k;
    for (int v = 0; v < n; ++v) {
        rep[v].check_shape();
        if (rep[v].r != r || rep[v].k != k) throw std::invalid_argument("lift: clumps of different shapes");
        auto ok = is_valid_clump(rep[v]);
        if (!ok) throw std::invalid_argument("lift: clump of vertex " + std::to_string(v + 1) + ": " + ok.detail);
    }
    for (auto [u, v] : g.edges())
        if (!clumps_orthogonal(rep[u], rep[v]))
            throw std::invalid_argument("lift: clumps of edge " + std::to_string(u + 1) + "-" + std::to_string(v + 1) +
                                        " are not orthogonal");

    MeasurementFamily fam;
    const int rk = r * k;
    const int d = rk * k;
    fam.dim = d;
    fam.rank = r;
    fam.outcomes = k * k;
    fam.exact = k <= 2;
    fam.projectors.resize(n);
    if (fam.exact) fam.exact_projectors.resize(n);

    for (int v = 0; v < n; ++v) {
        for (int c1 = 0; c1 < k; ++c1)
            for (int c2 = 0; c2 < k; ++c2) {
                if (fam.exact) {
                    const ExactScalar norm = ExactScalar::sqrt_of(Rational(1, k));
                    std::vector<ExactVector> phis;
                    for (int i = 0; i < r; ++i) {
                        ExactVector phi(d);
                        for (int j = 0; j < k; ++j) {
                            // zeta = -1 for k = 2
                            ExactScalar coef = ((c1 * j) % 2 == 1 && k == 2) ? -norm : norm;
                            ExactVector psi = rep[v].exact(i, (j + c2) % k);
                            for (int t = 0; t < rk; ++t)
                                if (!psi[t].is_zero()) phi[j * rk + t] = coef * psi[t];
                        }
                        phis.push_back(std::move(phi));
                    }
                    ExactMatrix e(static_cast<std::size_t>(d) * d);
                    for (const auto& phi : phis)
                        for (int a = 0; a < d; ++a) {
                            if (phi[a].is_zero()) continue;
                            for (int b = 0; b < d; ++b)
                                if (!phi[b].is_zero()) e[a * d + b] += phi[a] * phi[b].conj();
                        }
                    Eigen::MatrixXcd num(d, d);
                    for (int a = 0; a < d; ++a)
                        for (int b = 0; b < d; ++b) num(a, b) = e[a * d + b].to_complex();
                    fam.exact_projectors[v].push_back(std::move(e));
                    fam.projectors[v].push_back(std::move(num));
                } else {
                    const std::complex<double> zeta = std::polar(1.0, 2.0 * M_PI / k);
                    Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(d, d);
                    for (int i = 0; i < r; ++i) {
                        Eigen::VectorXcd phi = Eigen::VectorXcd::Zero(d);
                        for (int j = 0; j < k; ++j)
                            phi.segment(j * rk, rk) = std::pow(zeta, c1 * j) * rep[v].numeric(i, (j + c2) % k);
                        phi /= std::sqrt(double(k));
                        e += phi * phi.adjoint();
                    }
                    fam.projectors[v].push_back(std::move(e));
                }
            }
    }
    return fam;
}

MeasurementFamily classical_family(const std::vector<int>& colors, int k) {
    MeasurementFamily fam;
    fam.dim = k;
    fam.rank = 0;
    fam.outcomes = k;
    fam.exact = true;
    for (int c : colors) {
        if (c < 0 || c >= k) throw std::invalid_argument("classical_family: colour out of range");
        std::vector<ExactMatrix> ex;
        std::vector<Eigen::MatrixXcd> nu;
        for (int o = 0; o < k; ++o) {
            ExactMatrix e(static_cast<std::size_t>(k) * k);
            Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(k, k);
            if (o == c) {
                for (int t = 0; t < k; ++t) {
                    e[t * k + t] = ExactScalar(1);
                    m(t, t) = 1.0;
                }
            }
            ex.push_back(std::move(e));
            nu.push_back(std::move(m));
        }
        fam.exact_projectors.push_back(std::move(ex));
        fam.projectors.push_back(std::move(nu));
    }
    return fam;
}

Verdict verify_quantum_coloring(const Graph& g, const MeasurementFamily& fam, int k) {
    Verdict res;
    auto fail = [&](std::string why) {
        res.ok = false;
        res.detail = std::move(why);
        return res;
    };
    const int n = g.order();
    const int d = fam.dim;
    if (static_cast<int>(fam.projectors.size()) != n) return fail("family does not cover every vertex");
    if (fam.exact && static_cast<int>(fam.exact_projectors.size()) != n) return fail("exact projectors missing");
    for (int v = 0; v < n; ++v) {
        const std::string who = "vertex " + std::to_string(v + 1);
        if (static_cast<int>(fam.projectors[v].size()) != k) return fail(who + ": expected " + std::to_string(k) + " projectors");
        if (fam.exact) {
            if (static_cast<int>(fam.exact_projectors[v].size()) != k) return fail(who + ": expected " + std::to_string(k) + " projectors");
            ExactMatrix sum(static_cast<std::size_t>(d) * d);
            for (int c = 0; c < k; ++c) {
                const auto& e = fam.exact_projectors[v][c];
                if (static_cast<int>(e.size()) != d * d) return fail(who + ": projector of the wrong size");
                for (int a = 0; a < d; ++a)
                    for (int b = a; b < d; ++b)
                        if (!(e[a * d + b] == e[b * d + a].conj()))
                            return fail(who + ", outcome " + outcome_name(c) + ": not Hermitian");
                if (!(exact_mul(e, e, d) == e)) return fail(who + ", outcome " + outcome_name(c) + ": not idempotent");
                if (fam.rank > 0) {
                    ExactScalar tr;
                    for (int a = 0; a < d; ++a) tr += e[a * d + a];
                    if (!(tr == ExactScalar(fam.rank))) return fail(who + ", outcome " + outcome_name(c) + ": wrong rank");
                }
                for (std::size_t t = 0; t < sum.size(); ++t) sum[t] += e[t];
            }
            for (int a = 0; a < d; ++a) sum[a * d + a] -= ExactScalar(1);
            if (!exact_is_zero(sum)) return fail(who + ": projectors do not sum to the identity");
        } else {
            const double tol = 1e-9;
            Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(d, d);
            for (int c = 0; c < k; ++c) {
                const auto& e = fam.projectors[v][c];
                if (e.rows() != d || e.cols() != d) return fail(who + ": projector of the wrong size");
                if ((e - e.adjoint()).norm() > tol) return fail(who + ", outcome " + outcome_name(c) + ": not Hermitian");
                if ((e * e - e).norm() > tol) return fail(who + ", outcome " + outcome_name(c) + ": not idempotent");
                if (fam.rank > 0 && std::abs(e.trace() - double(fam.rank)) > tol)
                    return fail(who + ", outcome " + outcome_name(c) + ": wrong rank");
                sum += e;
            }
            if ((sum - Eigen::MatrixXcd::Identity(d, d)).norm() > tol) return fail(who + ": projectors do not sum to the identity");
        }
    }
    for (auto [u, v] : g.edges())
        for (int c = 0; c < k; ++c) {
            bool clash = fam.exact ? !exact_is_zero(exact_mul(fam.exact_projectors[u][c], fam.exact_projectors[v][c], d))
                                   : (fam.projectors[u][c] * fam.projectors[v][c]).norm() > 1e-9;
            if (clash)
                return fail("edge " + std::to_string(u + 1) + "-" + std::to_string(v + 1) + ", outcome " + outcome_name(c) +
                            ": projectors do not annihilate");
        }
    res.ok = true;
    return res;
}

// Numeric clumps -------------------------------------------------------------

bool numeric_clump_valid(const NumericClump& c, double tol) {
    std::vector<Eigen::VectorXcd> all;
    for (const auto& row : c.vectors)
        for (const auto& v : row) {
            if (v.size() != c.r * c.k) return false;
            all.push_back(v);
        }
    if (static_cast<int>(all.size()) != c.r * c.k) return false;
    for (std::size_t a = 0; a < all.size(); ++a)
        for (std::size_t b = a; b < all.size(); ++b) {
            std::complex<double> ip = all[a].dot(all[b]);
            if (std::abs(ip - (a == b ? 1.0 : 0.0)) > tol) return false;
        }
    return true;
}

bool numeric_clumps_orthogonal(const NumericClump& a, const NumericClump& b, double tol) {
    if (a.r != b.r || a.k != b.k) throw std::invalid_argument("clumps of different shapes");
    for (int i = 0; i < a.r; ++i)
        for (int i2 = 0; i2 < b.r; ++i2) {
            std::complex<double> s = 0;
            for (int j = 0; j < a.k; ++j) s += a.vectors[i][j].dot(b.vectors[i2][j]);
            if (std::abs(s) > tol) return false;
        }
    return true;
}

std::vector<NumericClump> extract_clump_representation(const MeasurementFamily& fam) {
    if (fam.rank < 1) throw std::invalid_argument("extract_clump_representation: ranks must be uniform");
    if (fam.rank * fam.outcomes != fam.dim)
        throw std::invalid_argument("extract_clump_representation: dimension is not rank * outcomes");
    std::vector<NumericClump> out;
    for (const auto& per : fam.projectors) {
        NumericClump c;
        c.r = fam.rank;
        c.k = fam.outcomes;
        c.vectors.assign(c.r, std::vector<Eigen::VectorXcd>(c.k));
        for (int o = 0; o < fam.outcomes; ++o) {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(per[o]);
            if (es.info() != Eigen::Success) throw std::runtime_error("extract_clump_representation: eigensolver failed");
            int i = 0;
            for (Eigen::Index t = 0; t < es.eigenvalues().size(); ++t)
                if (es.eigenvalues()(t) > 0.5) {
                    if (i >= c.r) throw std::invalid_argument("extract_clump_representation: projector rank too large");
                    c.vectors[i++][o] = es.eigenvectors().col(t);
                }
            if (i != c.r) throw std::invalid_argument("extract_clump_representation: projector rank too small");
        }
        out.push_back(std::move(c));
    }
    return out;
}

// Sign clumps ----------------------------------------------------------------

namespace {

using IVec = std::array<int, 4>;

int dot(const IVec& a, const IVec& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]; }

std::vector<ClumpEntry> normalised(const IVec& v) {
    long w = dot(v, v);
    std::vector<ClumpEntry> out;
    for (int x : v) out.push_back({x, 0, w});
    return out;
}

IVec neg(IVec v) {
    for (int& x : v) x = -x;
    return v;
}

}  // namespace

std::vector<VectorClump> enumerate_sign_clumps() {
    // sign representatives: first nonzero entry positive
    std::vector<IVec> reps;
    for (int code = 0; code < 81; ++code) {
        IVec v;
        int c = code;
        for (int t = 0; t < 4; ++t) {
            v[t] = c % 3 - 1;
            c /= 3;
        }
        auto first = std::find_if(v.begin(), v.end(), [](int x) { return x != 0; });
        if (first != v.end() && *first > 0) reps.push_back(v);
    }
    std::sort(reps.begin(), reps.end());
    const int m = static_cast<int>(reps.size());
    std::vector<std::array<int, 4>> bases;
    for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b) {
            if (dot(reps[a], reps[b])) continue;
            for (int c = b + 1; c < m; ++c) {
                if (dot(reps[a], reps[c]) || dot(reps[b], reps[c])) continue;
                for (int d = c + 1; d < m; ++d)
                    if (!dot(reps[a], reps[d]) && !dot(reps[b], reps[d]) && !dot(reps[c], reps[d]))
                        bases.push_back({a, b, c, d});
            }
        }
    // row = (first vector as representative, signed second vector)
    using Row = std::pair<IVec, IVec>;
    std::set<std::pair<Row, Row>> seen;
    std::vector<VectorClump> out;
    for (const auto& basis : bases) {
        std::array<int, 4> perm = basis;
        do {
            for (int s = 0; s < 4; ++s) {
                IVec v01 = reps[perm[1]], v11 = reps[perm[3]];
                if (s & 1) v01 = neg(v01);
                if (s & 2) v11 = neg(v11);
                Row r0{reps[perm[0]], v01}, r1{reps[perm[2]], v11};
                if (r1 < r0) std::swap(r0, r1);
                if (!seen.insert({r0, r1}).second) continue;
                VectorClump c;
                c.r = 2;
                c.k = 2;
                c.vectors = {{normalised(r0.first), normalised(r0.second)}, {normalised(r1.first), normalised(r1.second)}};
                out.push_back(std::move(c));
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    return out;
}

namespace {

bool sign_equal(const ExactVector& a, const ExactVector& b, int sign) {
    for (std::size_t t = 0; t < a.size(); ++t)
        if (!(a[t] == (sign > 0 ? b[t] : -b[t]))) return false;
    return true;
}

template <class RowMatch>
bool match_rows(const VectorClump& a, const VectorClump& b, RowMatch row_match) {
    a.check_shape();
    b.check_shape();
    if (a.r != b.r || a.k != b.k) return false;
    std::vector<int> perm(a.r);
    std::iota(perm.begin(), perm.end(), 0);
    do {
        bool ok = true;
        for (int i = 0; i < a.r && ok; ++i) ok = row_match(i, perm[i]);
        if (ok) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

}  // namespace

bool same_up_to_vector_signs(const VectorClump& a, const VectorClump& b) {
    return match_rows(a, b, [&](int i, int i2) {
        for (int j = 0; j < a.k; ++j) {
            auto x = a.exact(i, j), y = b.exact(i2, j);
            if (!sign_equal(x, y, 1) && !sign_equal(x, y, -1)) return false;
        }
        return true;
    });
}

bool same_up_to_row_signs(const VectorClump& a, const VectorClump& b) {
    return match_rows(a, b, [&](int i, int i2) {
        for (int sign : {1, -1}) {
            bool ok = true;
            for (int j = 0; j < a.k && ok; ++j) ok = sign_equal(a.exact(i, j), b.exact(i2, j), sign);
            if (ok) return true;
        }
        return false;
    });
}

}  // namespace qchrome
