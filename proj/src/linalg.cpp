#include "linalg.hpp"

#include <lapacke.h>

#include <sstream>

#include "qchrome/sdp.hpp"

namespace qchrome::detail {

namespace {

[[noreturn]] void fail(const Eigen::MatrixXd& a, int info) {
    std::ostringstream os;
    os << "symmetric eigensolver failed (info " << info << ") on " << a.rows() << "x" << a.cols() << " matrix";
    if (a.rows() <= 24) {
        os << ":\n";
        os.precision(17);
        os << a;
    }
    throw NumericError(os.str());
}

}  // namespace

void sym_eig(const Eigen::MatrixXd& a, Eigen::VectorXd& w, Eigen::MatrixXd& v) {
    const auto n = static_cast<lapack_int>(a.rows());
    v = a;
    w.resize(n);
    if (n == 0) return;
    lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'U', n, v.data(), n, w.data());
    if (info != 0 || !w.allFinite()) fail(a, static_cast<int>(info));
}

Eigen::VectorXd sym_eigenvalues(const Eigen::MatrixXd& a) {
    const auto n = static_cast<lapack_int>(a.rows());
    Eigen::MatrixXd tmp = a;
    Eigen::VectorXd w(n);
    if (n == 0) return w;
    lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'U', n, tmp.data(), n, w.data());
    if (info != 0 || !w.allFinite()) fail(a, static_cast<int>(info));
    return w;
}

void project_psd_inplace(Eigen::MatrixXd& a) {
    Eigen::VectorXd w;
    Eigen::MatrixXd v;
    sym_eig(a, w, v);
    const Eigen::Index n = w.size();
    Eigen::Index neg = 0;
    while (neg < n && w(neg) < 0) ++neg;
    if (neg == 0) return;
    if (neg == n) {
        a.setZero();
        return;
    }
    // Rebuild from whichever side of the spectrum is smaller.
    if (neg <= n - neg) {
        auto vn = v.leftCols(neg);
        a.noalias() -= vn * w.head(neg).asDiagonal() * vn.transpose();
    } else {
        auto vp = v.rightCols(n - neg);
        a.noalias() = vp * w.tail(n - neg).asDiagonal() * vp.transpose();
    }
    a = 0.5 * (a + a.transpose()).eval();
}

}  // namespace qchrome::detail
