#ifndef GHF_LINALG_HPP
#define GHF_LINALG_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <functional>
#include <mutex>
#include <numeric>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"
#include "tridiag.hpp"

namespace ghf {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using cplx = std::complex<double>;

struct BlockKey {
    int n = 0;
    int l = 1;
    int size = 0;
};

/// One dense symmetric block per (n, l).
struct BlockDiagOperator {
    std::vector<BlockKey> layout;
    std::vector<Mat> blocks;

    std::size_t dim() const {
        std::size_t s = 0;
        for (auto& b : layout) s += b.size;
        return s;
    }
    double asymmetry() const {
        double worst = 0;
        for (auto& b : blocks) {
            double nrm = std::max(1e-300, b.cwiseAbs().maxCoeff());
            worst = std::max(worst, (b - b.transpose()).cwiseAbs().maxCoeff() / nrm);
        }
        return worst;
    }
};

/// Runs fn(i) for i in [0, count); results must be written to disjoint slots.
inline void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
    if (threads <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr err;
    std::mutex m;
    int nt = std::min(threads, count);
    for (int t = 0; t < nt; ++t)
        pool.emplace_back([&] {
            for (int i = next++; i < count; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> g(m);
                    if (!err) err = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

/// Lower Cholesky factor; throws with the failing pivot index.
inline Mat cholesky_factor(const Mat& a) {
    const int n = static_cast<int>(a.rows());
    Mat l = Mat::Zero(n, n);
    for (int j = 0; j < n; ++j) {
        double s = a(j, j);
        for (int k = 0; k < j; ++k) s -= l(j, k) * l(j, k);
        if (!(s > 0)) throw linalg_error("cholesky: matrix not positive definite", j);
        l(j, j) = std::sqrt(s);
        for (int i = j + 1; i < n; ++i) {
            double t = a(i, j);
            for (int k = 0; k < j; ++k) t -= l(i, k) * l(j, k);
            l(i, j) = t / l(j, j);
        }
    }
    return l;
}

inline Vec cholesky_solve(const Mat& a, const Vec& b) {
    Mat l = cholesky_factor(a);
    Vec y = l.triangularView<Eigen::Lower>().solve(b);
    return l.transpose().triangularView<Eigen::Upper>().solve(y);
}

struct Eigenpairs {
    Vec values;
    Mat vectors; // columns
};

namespace detail {
// ascending values, ties kept in order; each vector's first nonzero entry made positive
inline void canonicalize(Eigenpairs& ep) {
    const int n = static_cast<int>(ep.values.size());
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return ep.values[a] < ep.values[b]; });
    Eigenpairs out;
    out.values.resize(n);
    out.vectors.resize(ep.vectors.rows(), n);
    for (int i = 0; i < n; ++i) {
        out.values[i] = ep.values[idx[i]];
        Vec v = ep.vectors.col(idx[i]);
        double tol = 1e-12 * v.cwiseAbs().maxCoeff();
        for (int r = 0; r < v.size(); ++r)
            if (std::abs(v[r]) > tol) {
                if (v[r] < 0) v = -v;
                break;
            }
        out.vectors.col(i) = v;
    }
    ep = std::move(out);
}
} // namespace detail

inline Eigenpairs symtridiag_eig(const std::vector<double>& diag, const std::vector<double>& off) {
    const int n = static_cast<int>(diag.size());
    std::vector<double> d = diag;
    std::vector<double> z(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) z[static_cast<std::size_t>(i) * n + i] = 1.0;
    symtridiag_ql(d, off, &z, n);
    Eigenpairs ep;
    ep.values = Eigen::Map<Vec>(d.data(), n);
    ep.vectors = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(z.data(), n, n);
    detail::canonicalize(ep);
    return ep;
}

/// Smallest `count` eigenpairs of S u = lambda M u. With shift c the matrix
/// passed as S is taken to be D = S + cM and lambda = eig(D, M) - c.
inline Eigenpairs generalized_eig_smallest(const Mat& s, const Mat& m, int count, double shift = 0.0) {
    const int n = static_cast<int>(s.rows());
    Mat l = cholesky_factor(m);
    // C = L^{-1} S L^{-T}
    Mat x = l.triangularView<Eigen::Lower>().solve(s);
    Mat c = l.triangularView<Eigen::Lower>().solve(x.transpose());
    c = 0.5 * (c + c.transpose());
    Eigen::SelfAdjointEigenSolver<Mat> es(c);
    if (es.info() != Eigen::Success) throw linalg_error("generalized_eig: eigensolver failed", 0);
    Eigenpairs ep;
    ep.values = es.eigenvalues().array() - shift;
    ep.vectors = l.transpose().triangularView<Eigen::Upper>().solve(es.eigenvectors());
    detail::canonicalize(ep);
    int k = std::min(count, n);
    ep.values.conservativeResize(k);
    ep.vectors.conservativeResize(n, k);
    return ep;
}

inline CVec complex_block_solve(const CMat& a, const CVec& b) {
    Eigen::PartialPivLU<CMat> lu(a);
    const CMat& f = lu.matrixLU();
    double big = f.cwiseAbs().maxCoeff();
    for (int i = 0; i < f.rows(); ++i)
        if (std::abs(f(i, i)) <= 1e-15 * big || big == 0.0)
            throw linalg_error("complex_block_solve: singular matrix", i);
    return lu.solve(b);
}

} // namespace ghf

#endif // GHF_LINALG_HPP
