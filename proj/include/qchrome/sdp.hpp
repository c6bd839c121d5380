#pragma once

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qchrome {

/// Dense symmetric matrix; only the upper triangle is stored.
class SymMatrix {
public:
    SymMatrix() = default;
    explicit SymMatrix(int d, double fill = 0.0) : d_(d), a_(static_cast<std::size_t>(d) * (d + 1) / 2, fill) {}

    static SymMatrix identity(int d);
    static SymMatrix diagonal(const std::vector<double>& diag);

    int dim() const { return d_; }
    double operator()(int i, int j) const { return a_[index(i, j)]; }
    double& operator()(int i, int j) { return a_[index(i, j)]; }
    /// Row-major full copy.
    std::vector<double> dense() const;
    static SymMatrix from_dense(int d, const std::vector<double>& full);

    double frobenius_dot(const SymMatrix& o) const;
    double max_abs_diff(const SymMatrix& o) const;
    double min_eigenvalue() const;
    std::vector<double> eigenvalues() const;

    std::size_t index(int i, int j) const {
        if (i > j) std::swap(i, j);
        return static_cast<std::size_t>(j) * (j + 1) / 2 + i;
    }

private:
    int d_ = 0;
    std::vector<double> a_;
};

class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Nearest PSD matrix in Frobenius norm (negative eigenvalues clamped).
SymMatrix project_psd(const SymMatrix& m);

/// One coefficient of a symmetric coefficient matrix A with A_ij = A_ji = v.
/// The pairing is the trace inner product <A, X> = sum_ij A_ij X_ij, so a
/// single off-diagonal term contributes 2 v X_ij.
struct SymTerm {
    int i;
    int j;
    double v;
};
using SparseSym = std::vector<SymTerm>;

/// Adds coef * X_ij to a linear functional stored as a SparseSym.
void add_entry(SparseSym& a, int i, int j, double coef);

enum class Relation { LessEq, GreaterEq };
enum class Sense { Minimize, Maximize };

struct SdpEquality {
    SparseSym a;
    double b = 0.0;
};

struct SdpInequality {
    SparseSym g;
    double h = 0.0;
    Relation rel = Relation::LessEq;
};

struct SdpProblem {
    int dim = 0;
    SparseSym objective;
    Sense sense = Sense::Minimize;
    std::vector<SdpEquality> equalities;
    std::vector<SdpInequality> inequalities;
    bool entrywise_nonneg = false;

    /// Throws std::invalid_argument for out-of-range indices.
    void validate() const;
};

struct SdpOptions {
    double tol = 1e-6;
    int max_iter = 20000;
    double rho = 0.1;
    double sigma = 1e-6;
    double alpha = 1.6;
    bool adaptive_rho = true;
    int check_every = 25;
    /// Wall-clock limit in seconds; 0 disables it.
    double time_limit = 0.0;
};

enum class SdpStatus { Optimal, MaxIter, InfeasibleSuspected };
std::string to_string(SdpStatus s);

struct SdpSolution {
    SymMatrix primal;
    /// Multipliers in the matrix-form dual of a minimisation problem
    /// (maximisation is handled as minimising the negated objective):
    ///   Z = C - sum y_i A_i - sum l_j G_j - N,  Z psd, N >= 0,
    ///   l_j <= 0 for <= rows and l_j >= 0 for >= rows.
    /// Entries of constraints removed by presolve (single-entry pins and
    /// pairwise identifications) are NaN.
    std::vector<double> eq_duals;
    std::vector<double> ineq_duals;
    SymMatrix dual_psd;
    SymMatrix dual_nonneg;
    /// Objective values in the problem's own sense.
    double objective = 0.0;
    double dual_objective = 0.0;
    SdpStatus status = SdpStatus::MaxIter;
    /// Recomputed from the returned primal/dual points.
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    double gap = 0.0;
    int iterations = 0;
    double seconds = 0.0;
};

/// Operator-splitting (ADMM) solver on the presolved entry-class form.
SdpSolution solve_sdp(const SdpProblem& p, const SdpOptions& opts = {});

}  // namespace qchrome
