#ifndef GHF_EIGEN_SOLVER_HPP
#define GHF_EIGEN_SOLVER_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "basis.hpp"
#include "harmonics.hpp"
#include "linalg.hpp"
#include "muntz.hpp"

namespace ghf {

enum class PotentialKind { coulomb, fractional };

/// -1/2 Laplace + Z |x|^{2 alpha}; coulomb: alpha = -1/2, theta = 1/2;
/// fractional: alpha = (nu - mu)/(mu + 1), theta = 1/(mu + 1).
struct EigenProblem {
    int d = 3;
    PotentialKind kind = PotentialKind::coulomb;
    double Z = -1.0;
    int mu = 1;
    int nu = 0;
    double kappa = 4.0;
    Truncation trunc; // N harmonic degrees, K + 1 radial modes per block
    int count = 10;
    int threads = 1;

    double theta() const { return kind == PotentialKind::coulomb ? 0.5 : 1.0 / (mu + 1.0); }
};

struct EigenBlocks {
    Mat S, M, D; // D = S + (kappa^2/8) M for the Coulomb scheme, empty otherwise
};

inline EigenBlocks assemble_coulomb(const EigenProblem& p, int n) {
    if (!(p.Z < 0)) throw domain_error("coulomb: Z must be negative");
    if (p.d < 2) throw domain_error("coulomb: d must be at least 2");
    MuntzSpec s = make_muntz_spec(p.d, 0.5, n, p.kappa);
    const int K = p.trunc.K;
    const double k = p.kappa;
    EigenBlocks b;
    b.S = 0.5 * std::pow(k, 2.0 - p.d) * stiffness_block(s, K) + p.Z * std::pow(k, 1.0 - p.d) * power_potential_block(s, -0.5, K);
    b.M = std::pow(k, -p.d) * power_potential_block(s, 0.0, K);
    b.D = b.S + k * k / 8.0 * b.M;
    double scale = b.D.cwiseAbs().maxCoeff();
    Mat off = b.D;
    off.diagonal().setZero();
    if (off.cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw domain_error("coulomb: S + kappa^2/8 M is not diagonal");
    return b;
}

inline EigenBlocks assemble_fractional(const EigenProblem& p, int n) {
    if (p.mu < 0 || p.nu < 0) throw domain_error("fractional: mu and nu must be nonnegative integers");
    if (p.d == 1 && p.mu % 2 == 0) throw domain_error("fractional: d = 1 needs odd mu");
    MuntzSpec s = make_muntz_spec(p.d, p.theta(), n, p.kappa);
    const int K = p.trunc.K;
    EigenBlocks b;
    b.S = 0.5 * std::pow(p.kappa, 2.0 - p.d) * stiffness_block(s, K) + p.Z * fractional_power_block(s, p.mu, p.nu, K);
    b.M = fractional_power_block(s, p.mu, p.mu, K);
    double tol = 1e-14 * std::max(b.S.cwiseAbs().maxCoeff(), b.M.cwiseAbs().maxCoeff());
    if (bandwidth(b.M, tol) > p.mu) throw domain_error("fractional: mass bandwidth exceeds mu");
    if (bandwidth(b.S, tol) > std::max(p.nu, 1)) throw domain_error("fractional: stiffness bandwidth exceeds max(nu,1)");
    return b;
}

struct EigenEntry {
    double value = 0.0;
    int n = 0;
    int l = 1;
    int rank_in_block = 0;
    Vec vector;
};

struct EigenResult {
    std::vector<EigenEntry> entries; // ascending, stable across (n, l)
    double max_residual = 0.0;       // max ||S u - lambda M u|| / ||M u||
};

inline EigenResult solve_eigs(const EigenProblem& p) {
    std::vector<int> degrees;
    int nmax = p.d == 1 ? std::min(p.trunc.N, 1) : p.trunc.N;
    for (int n = 0; n <= nmax; ++n) degrees.push_back(n);
    std::vector<Eigenpairs> per(degrees.size());
    std::vector<double> res(degrees.size(), 0.0);
    parallel_for(static_cast<int>(degrees.size()), p.threads, [&](int i) {
        int n = degrees[i];
        EigenBlocks b = p.kind == PotentialKind::coulomb ? assemble_coulomb(p, n) : assemble_fractional(p, n);
        Eigenpairs ep = p.kind == PotentialKind::coulomb
                            ? generalized_eig_smallest(b.D, b.M, p.count, p.kappa * p.kappa / 8.0)
                            : generalized_eig_smallest(b.S, b.M, p.count);
        for (int j = 0; j < ep.values.size(); ++j) {
            Vec u = ep.vectors.col(j);
            Vec mu = b.M * u;
            res[i] = std::max(res[i], (b.S * u - ep.values[j] * mu).norm() / mu.norm());
        }
        per[i] = std::move(ep);
    });
    EigenResult out;
    for (std::size_t i = 0; i < degrees.size(); ++i) {
        out.max_residual = std::max(out.max_residual, res[i]);
        int n = degrees[i];
        for (int l = 1; l <= harmonic_dim(p.d, n); ++l)
            for (int j = 0; j < per[i].values.size(); ++j)
                out.entries.push_back({per[i].values[j], n, l, j, per[i].vectors.col(j)});
    }
    std::stable_sort(out.entries.begin(), out.entries.end(),
                     [](const EigenEntry& a, const EigenEntry& b) { return a.value < b.value; });
    if (static_cast<int>(out.entries.size()) > p.count) out.entries.resize(p.count);
    return out;
}

struct CoulombLevel {
    double value = 0.0;
    int multiplicity = 0;
    double kappa = 0.0; // scaling in which the eigenfunctions are single modes
    // eigenfunction of degree n (< i) and order l: HH^{1/2,n}_{i-1-n,l}(kappa x)
    std::function<double(int, int, const Point&)> eigenfunction;
};

/// lambda_i = -2 Z^2/(2i+d-3)^2 with multiplicity ((i-1)_{d-1} + (i)_{d-1})/(d-1)!.
inline CoulombLevel exact_coulomb(int d, double Z, int i) {
    if (Z == 0.0) throw domain_error("exact_coulomb: Z must be nonzero");
    if (i < 1) throw domain_error("exact_coulomb: i must be at least 1");
    if (d < 2) throw domain_error("exact_coulomb: d must be at least 2");
    CoulombLevel c;
    double den = 2.0 * i + d - 3;
    c.value = -2 * Z * Z / (den * den);
    double fac = std::exp(std::lgamma(d));
    c.multiplicity = static_cast<int>(std::lround((pochhammer(i - 1, d - 1) + pochhammer(i, d - 1)) / fac));
    c.kappa = 4 * std::abs(Z) / den;
    double kap = c.kappa;
    c.eigenfunction = [d, i, kap](int n, int l, const Point& x) {
        if (n > i - 1) throw domain_error("exact_coulomb: degree exceeds i-1");
        MuntzSpec s = make_muntz_spec(d, 0.5, n, kap);
        Point y{};
        for (int q = 0; q < d; ++q) y[q] = kap * x[q];
        return muntz_eval(s, i - 1 - n, l, y);
    };
    return c;
}

} // namespace ghf

#endif // GHF_EIGEN_SOLVER_HPP
