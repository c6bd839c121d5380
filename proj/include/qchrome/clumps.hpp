#pragma once

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <string>
#include <vector>

#include "qchrome/exact.hpp"
#include "qchrome/graph.hpp"
#include "qchrome/verdict.hpp"

namespace qchrome {

struct GaussianRational {
    Rational re;
    Rational im;
    bool operator==(const GaussianRational&) const = default;
};

/// Exact element of Q(i) adjoined square roots: sum over squarefree s of c_s * sqrt(s).
/// Zero testing is exact since square roots of distinct squarefree integers
/// are linearly independent over Q(i).
class ExactScalar {
public:
    ExactScalar() = default;
    ExactScalar(long v);  // NOLINT: integers convert
    /// (re + i im) / sqrt(d), d >= 1.
    static ExactScalar entry(long re, long im, long sqrt_denom);
    static ExactScalar sqrt_of(const Rational& q);
    static ExactScalar from_gaussian(const GaussianRational& g);

    ExactScalar& operator+=(const ExactScalar& o);
    ExactScalar& operator-=(const ExactScalar& o);
    friend ExactScalar operator+(ExactScalar a, const ExactScalar& b) { return a += b; }
    friend ExactScalar operator-(ExactScalar a, const ExactScalar& b) { return a -= b; }
    friend ExactScalar operator*(const ExactScalar& a, const ExactScalar& b);
    ExactScalar operator-() const;
    ExactScalar conj() const;

    bool is_zero() const { return terms_.empty(); }
    bool operator==(const ExactScalar& o) const { return (*this - o).is_zero(); }
    std::complex<double> to_complex() const;
    std::string to_string() const;

private:
    std::map<long, GaussianRational> terms_;
    void tidy(long key);
};

using ExactVector = std::vector<ExactScalar>;

/// <a|b>, conjugate-linear in a.
ExactScalar inner(const ExactVector& a, const ExactVector& b);

/// Stored entry of a clump file: (re_num + i im_num) / sqrt(sqrt_denom).
struct ClumpEntry {
    long re_num = 0;
    long im_num = 0;
    long sqrt_denom = 1;
    bool operator==(const ClumpEntry&) const = default;
};

/// (r,k)-clump: vectors[i][j], each of length r*k.
struct VectorClump {
    int r = 0;
    int k = 0;
    std::vector<std::vector<std::vector<ClumpEntry>>> vectors;

    ExactVector exact(int i, int j) const;
    Eigen::VectorXcd numeric(int i, int j) const;
    /// Throws std::invalid_argument on a shape mismatch.
    void check_shape() const;
};

Verdict is_valid_clump(const VectorClump& c);
bool clumps_orthogonal(const VectorClump& a, const VectorClump& b);
/// Vertex i is clump i; edge iff orthogonal.
Graph orthogonality_graph(const std::vector<VectorClump>& cs);

std::vector<VectorClump> parse_clumps_json(const std::string& text);
std::string clumps_to_json(const std::vector<VectorClump>& cs);
std::vector<VectorClump> load_clumps(const std::string& path);

/// Projective measurements, one list of `outcomes` projectors per vertex.
/// The exact matrices are filled when the construction stayed exact; the
/// numeric ones always are.
struct MeasurementFamily {
    int dim = 0;
    int rank = 0;  ///< 0 when ranks are not uniform
    int outcomes = 0;
    bool exact = false;
    std::vector<std::vector<std::vector<ExactScalar>>> exact_projectors;  // [v][c], row-major
    std::vector<std::vector<Eigen::MatrixXcd>> projectors;                 // [v][c]
};

/// Rank-r quantum k^2-colouring from an (r,k)-clump representation; outcome
/// (c1, c2) has index c1 * k + c2. Exact for k <= 2.
MeasurementFamily lift_to_quantum_coloring(const Graph& g, const std::vector<VectorClump>& rep);

/// Per vertex: k Hermitian idempotents of the declared rank summing to the
/// identity; per edge and colour E^u_c E^v_c = 0.
Verdict verify_quantum_coloring(const Graph& g, const MeasurementFamily& fam, int k);

/// Classical colouring: E^v_c is the identity on C^k for c = colour(v), zero otherwise.
MeasurementFamily classical_family(const std::vector<int>& colors, int k);

/// Numeric clump: vectors[i][j] in C^{rk}.
struct NumericClump {
    int r = 0;
    int k = 0;
    std::vector<std::vector<Eigen::VectorXcd>> vectors;
};

bool numeric_clump_valid(const NumericClump& c, double tol = 1e-9);
bool numeric_clumps_orthogonal(const NumericClump& a, const NumericClump& b, double tol = 1e-9);
/// Orthonormal bases of the projector supports (numeric; requires uniform rank).
std::vector<NumericClump> extract_clump_representation(const MeasurementFamily& fam);

/// Every (2,2)-clump of normalised {-1,0,1}^4 vectors, up to the sign of a
/// whole row and the order of the rows.
std::vector<VectorClump> enumerate_sign_clumps();

/// Same clump up to row order and a sign per vector.
bool same_up_to_vector_signs(const VectorClump& a, const VectorClump& b);
/// Same clump up to row order and a sign per row; preserves orthogonality
/// to every other clump.
bool same_up_to_row_signs(const VectorClump& a, const VectorClump& b);

}  // namespace qchrome
