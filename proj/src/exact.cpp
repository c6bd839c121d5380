#include "qchrome/exact.hpp"

#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "linalg.hpp"
#include <stdexcept>

namespace qchrome {

Rational rationalize(double x, long max_den) {
    if (!std::isfinite(x)) throw std::invalid_argument("rationalize: non-finite value");
    if (max_den < 1) throw std::invalid_argument("rationalize: denominator cap must be positive");
    // exact value of the double, then its continued fraction
    Rational v(x);
    v.canonicalize();
    mpz_class p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    Rational rest = v;
    for (int it = 0; it < 200; ++it) {
        mpz_class a;
        mpz_fdiv_q(a.get_mpz_t(), rest.get_num_mpz_t(), rest.get_den_mpz_t());
        mpz_class p2 = a * p1 + p0, q2 = a * q1 + q0;
        if (q2 > max_den) {
            // semiconvergent with the largest admissible step
            mpz_class t = (mpz_class(max_den) - q0) / q1;
            Rational semi(t * p1 + p0, t * q1 + q0), conv(p1, q1);
            semi.canonicalize();
            conv.canonicalize();
            Rational ds = abs(semi - v), dc = abs(conv - v);
            return ds < dc ? semi : conv;
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        Rational frac = rest - Rational(a);
        if (frac == 0) break;
        rest = 1 / frac;
    }
    Rational best(p1, q1);
    best.canonicalize();
    return best;
}

Rational parse_rational(std::string_view text) {
    std::string s(text);
    if (s.empty()) throw std::invalid_argument("empty rational");
    for (std::size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        bool ok = (c >= '0' && c <= '9') || c == '/' || (c == '-' && (i == 0 || s[i - 1] == '/'));
        if (!ok) throw std::invalid_argument("malformed rational '" + s + "'");
    }
    Rational q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("malformed rational '" + s + "'");
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
    q.canonicalize();
    return q;
}

std::string format_rational(const Rational& q) {
    Rational c = q;
    c.canonicalize();
    return c.get_str(10);
}

bool is_positive_definite(RationalMatrix a) {
    const std::size_t n = a.size();
    for (std::size_t k = 0; k < n; ++k) {
        if (a[k].size() != n) throw std::invalid_argument("is_positive_definite: matrix is not square");
    }
    for (std::size_t k = 0; k < n; ++k) {
        if (sgn(a[k][k]) <= 0) return false;
        for (std::size_t i = k + 1; i < n; ++i) {
            if (a[i][k] == 0) continue;
            Rational f = a[i][k] / a[k][k];
            for (std::size_t j = k + 1; j < n; ++j)
                if (a[k][j] != 0) a[i][j] -= f * a[k][j];
        }
    }
    return true;
}

Rational dyadic(double x, int bits) {
    if (!std::isfinite(x)) throw std::invalid_argument("dyadic: non-finite value");
    mpz_class num(std::nearbyint(std::ldexp(x, bits)));
    mpz_class den = 1;
    den <<= bits;
    Rational q(num, den);
    q.canonicalize();
    return q;
}

bool psd_by_cholesky_hint(const RationalMatrix& a, std::string* why) {
    auto fail = [&](const char* msg) {
        if (why) *why = msg;
        return false;
    };
    const int n = static_cast<int>(a.size());
    for (const auto& row : a)
        if (static_cast<int>(row.size()) != n) throw std::invalid_argument("psd_by_cholesky_hint: matrix is not square");
    if (n == 0) return true;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j)
            if (a[i][j] != a[j][i]) return fail("matrix is not symmetric");
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = a[i][j].get_d();
    const double lmin = detail::sym_eigenvalues(m)(0);
    if (!(lmin > 0)) return fail("numeric minimum eigenvalue is not positive");
    Eigen::MatrixXd shifted = m - 0.5 * lmin * Eigen::MatrixXd::Identity(n, n);
    Eigen::LLT<Eigen::MatrixXd> llt(shifted);
    if (llt.info() != Eigen::Success) return fail("floating-point Cholesky failed");
    Eigen::MatrixXd l = llt.matrixL();

    // everything as integers over a common scale
    constexpr int kBits = 60;
    mpz_class den = 1;
    for (const auto& row : a)
        for (const auto& q : row) den = lcm(den, mpz_class(q.get_den()));
    mpz_class two = 1;
    two <<= 2 * kBits;
    mpz_class scale = lcm(den, two);
    mpz_class ll_factor = scale / two;
    std::vector<std::vector<mpz_class>> li(n);
    for (int i = 0; i < n; ++i) {
        li[i].resize(i + 1);
        for (int t = 0; t <= i; ++t) li[i][t] = mpz_class(std::nearbyint(std::ldexp(l(i, t), kBits)));
    }
    std::vector<mpz_class> offsum(n, 0);
    std::vector<mpz_class> diag(n);
    mpz_class acc, r;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) {
            acc = 0;
            for (int t = 0; t <= j; ++t) acc += li[i][t] * li[j][t];
            r = mpz_class(a[i][j].get_num() * (scale / a[i][j].get_den())) - acc * ll_factor;
            if (i == j) {
                diag[i] = r;
            } else {
                mpz_class ar = abs(r);
                offsum[i] += ar;
                offsum[j] += ar;
            }
        }
    for (int i = 0; i < n; ++i)
        if (diag[i] < offsum[i]) return fail("remainder is not diagonally dominant");
    return true;
}

}  // namespace qchrome
