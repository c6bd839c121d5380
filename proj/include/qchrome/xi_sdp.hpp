#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qchrome/exact.hpp"
#include "qchrome/graph.hpp"
#include "qchrome/sdp.hpp"

namespace qchrome {

/// Row bookkeeping of the xi_SDP program; matrix index 0 is the extra
/// row/column, vertex v sits at index v + 1.
struct XiSdpProgram {
    SdpProblem problem;
    std::vector<Bits> cliques;
    /// inequality r < le_rows.size(): sum_{i in S} M[i][j] <= 1
    std::vector<std::pair<int, int>> le_rows;   // (clique index, vertex j)
    /// following rows: M[0][0] + sum_{S x T} M[i][j] >= |S| + |T|
    std::vector<std::pair<int, int>> ge_rows;   // (clique index, clique index), S <= T
};

/// min M00 over the (n+1)-dimensional program; maximal cliques only,
/// clique pairs unordered including S = T.
XiSdpProgram build_xi_sdp_program(const Graph& g);

double xi_sdp(const Graph& g, const SdpOptions& opts = {});

struct SdpCertificate {
    struct CliqueLe {
        int j;
        Bits s;
        Rational lambda;
    };
    struct CliqueGe {
        Bits s;
        Bits t;
        Rational lambda;
    };
    struct Entry {
        int i;
        int j;
        Rational value;
    };

    std::string graph6;
    int k = 0;
    Rational eps;
    std::vector<Rational> pin_diag;   ///< multiplier of M[v+1][v+1] = 1
    std::vector<Rational> pin_row;    ///< multiplier of M[0][v+1] = 1
    std::vector<CliqueLe> le;
    std::vector<CliqueGe> ge;
    std::vector<Entry> nonneg;        ///< entries of N (i <= j, matrix indices)
    Rational bound;

    std::string to_text() const;
    /// Throws std::invalid_argument with a line number on malformed input.
    static SdpCertificate parse(const std::string& text);
};

struct CertificateCheck {
    bool ok = false;
    std::string reason;
    Rational bound;
};

/// Independent exact check: rebuilds the slack matrix from the graph and the
/// multipliers, requires it positive definite, the stated bound at most the
/// dual value, and the stated bound >= k - 1 + eps.
CertificateCheck check_certificate(const SdpCertificate& cert);

struct CertifyResult {
    std::optional<SdpCertificate> certificate;
    double numeric_value = 0.0;
    std::string reason;
};

/// Numeric solve, rational rounding and a scaling repair. Failure is
/// reported through an empty certificate.
CertifyResult certify_lower_bound(const Graph& g, int k, const Rational& eps = Rational(1, 1000),
                                  const SdpOptions& opts = {});

}  // namespace qchrome
