#ifndef GHF_VERIFY_HPP
#define GHF_VERIFY_HPP

#include <cmath>
#include <complex>
#include <vector>

#include "basis.hpp"
#include "harmonics.hpp"
#include "linalg.hpp"
#include "specfun.hpp"

namespace ghf {

/// Member list in canonical (n, l, k) order for rectangular truncation.
inline std::vector<BasisIndex> basis_members(int d, int N, int K) {
    std::vector<BasisIndex> out;
    for (auto& h : harmonic_indices(d, d == 1 ? std::min(N, 1) : N))
        for (int k = 0; k <= K; ++k) out.push_back({k, h});
    return out;
}

namespace detail {
// Gram of members radial(n)_k(r) Y_l^n over a tensor rule: radial rule for r^p e^{-r^2}
// (scaled weights, enveloped values) times a sphere rule, assembled block by block
template <class RadialFn>
Mat tensor_gram(int d, int N, int K, double p, RadialFn radial) {
    const int Q = K + N + 8;
    QuadratureRule q = gauss_laguerre_rule(Q, (p - 1.0) / 2.0);
    const int nmax = d == 1 ? std::min(N, 1) : N;
    std::vector<Mat> vals(nmax + 1, Mat(K + 1, Q));
    for (int n = 0; n <= nmax; ++n)
        for (int i = 0; i < Q; ++i) {
            std::vector<double> core = radial(n, K, std::sqrt(q.nodes[i])); // includes r^n
            for (int k = 0; k <= K; ++k) vals[n](k, i) = core[k];
        }
    Vec w(Q);
    for (int i = 0; i < Q; ++i) w[i] = 0.5 * q.scaled_weights[i];
    SphereRule sph = sphere_rule(d, std::max(2 * N, 1));
    auto hs = harmonic_indices(d, nmax);
    Mat y(hs.size(), sph.points.size());
    for (std::size_t a = 0; a < hs.size(); ++a)
        for (std::size_t b = 0; b < sph.points.size(); ++b) y(a, b) = sph_eval(hs[a], sph.points[b]);
    Mat ang = y * Eigen::Map<const Vec>(sph.weights.data(), sph.weights.size()).asDiagonal() * y.transpose();
    const int B = K + 1;
    Mat g(hs.size() * B, hs.size() * B);
    for (std::size_t a = 0; a < hs.size(); ++a)
        for (std::size_t b = 0; b < hs.size(); ++b) {
            Mat rad = vals[hs[a].n] * w.asDiagonal() * vals[hs[b].n].transpose();
            g.block(a * B, b * B, B, B) = ang(a, b) * rad;
        }
    return g;
}
} // namespace detail

/// Full Gram matrix of the GHFs under |x|^{2mu}, all (n, l, k) with n <= N, k <= K.
inline Mat gram_ghf(int d, double mu, int N, int K) {
    return detail::tensor_gram(d, N, K, 2 * mu + d - 1, [&](int n, int kk, double r) {
        auto c = ghf_core_all(d, mu, n, kk, r);
        for (auto& v : c) v *= std::pow(r, n);
        return c;
    });
}

/// Full Gram matrix of the GHPs under |x|^{2mu} e^{-|x|^2}, scaled to gamma_k gamma_j = 1.
/// The raw Gram is diag(gamma); entry (a, b) returned as G_ab / sqrt(gamma_a gamma_b).
inline Mat gram_ghp_normalized(int d, double mu, int N, int K) {
    return detail::tensor_gram(d, N, K, 2 * mu + d - 1, [&](int n, int kk, double r) {
        std::vector<double> c(kk + 1);
        double a = n + d / 2.0 - 1.0 + mu;
        auto lag = laguerre_all(kk, a, r * r);
        for (int k = 0; k <= kk; ++k)
            c[k] = lag[k] * std::pow(r, n) * std::exp(-0.5 * r * r - 0.5 * gamma_norm_log(d, mu, k, n));
        return c;
    });
}

/// ((-Laplace)^{s/2} Hcheck, (-Laplace)^{s/2} Hcheck') in frequency space:
/// F[Hcheck^{s,n}_k] = (-i)^{n+2k} sum_j C^k_j Hhat^{0,n}_j, integrated against |xi|^{2s}.
inline Mat energy_gram_aghf(int d, double s_, int N, int K) {
    std::vector<Mat> conn;
    for (int n = 0; n <= N; ++n) conn.push_back(connection_coeffs(s_, 0.0, n, d, K));
    Mat g = detail::tensor_gram(d, N, K, 2 * s_ + d - 1, [&](int n, int kk, double r) {
        auto h0 = ghf_core_all(d, 0.0, n, kk, r);
        Vec v = conn[n] * Eigen::Map<Vec>(h0.data(), kk + 1);
        std::vector<double> c(v.data(), v.data() + v.size());
        for (auto& x : c) x *= std::pow(r, n);
        return c;
    });
    // phases (-i)^{n+2k} conj((-i)^{m+2j}) are real on the surviving (n = m) blocks
    auto members = basis_members(d, N, K);
    for (std::size_t a = 0; a < members.size(); ++a)
        for (std::size_t b = 0; b < members.size(); ++b) {
            int pa = members[a].h.n + 2 * members[a].k, pb = members[b].h.n + 2 * members[b].k;
            cplx ph = std::pow(cplx(0, -1), pa) * std::conj(std::pow(cplx(0, -1), pb));
            g(a, b) *= ph.real();
        }
    return g;
}

/// max_xi |F[Hcheck^{mu,n}_{k,l}] - (-i)^{n+2k} Hhat^{mu,n}_{k,l}| for k = 0..K (d = 1, 2).
inline std::vector<double> fourier_residuals(int d, double mu, int n, int l, int K, const std::vector<Point>& xi,
                                             const FourierGrid& g = {}, bool* tail = nullptr) {
    Mat sm = aghf_matrix(mu, n, d, K);
    HarmonicIndex h{d, n, l};
    auto u = [&](const Point& x, std::vector<cplx>& out) {
        double r = norm(x, d);
        auto h0 = ghf_core_all(d, 0.0, n, K, r);
        Vec v = sm * Eigen::Map<Vec>(h0.data(), K + 1);
        double y = solid_harmonic(h, x);
        for (int k = 0; k <= K; ++k) out[k] = cplx(v[k] * y, 0.0);
    };
    auto fr = numeric_fourier_many(d, u, K + 1, xi, g);
    std::vector<double> worst(K + 1, 0.0);
    for (int k = 0; k <= K; ++k) {
        if (tail && fr[k].tail_warning) *tail = true;
        cplx ph = std::pow(cplx(0, -1), n + 2 * k);
        for (std::size_t i = 0; i < xi.size(); ++i)
            worst[k] = std::max(worst[k], std::abs(fr[k].values[i] - ph * ghf_eval(mu, {k, h}, xi[i])));
    }
    return worst;
}

/// max |(-Laplace + |x|^2) Hhat^{0,n}_{k,l} - (4k+2n+d) Hhat| over the radii, radial FD.
inline double hermite_schrodinger_residual(int d, int k, int n, const std::vector<double>& rgrid, double h = 1e-4) {
    auto f = [&](double r) { return ghf_radial_eval(d, 0.0, k, n, r); };
    double worst = 0;
    for (double r : rgrid) {
        double f0 = f(r), fp = f(r + h), fm = f(r - h);
        double lap = (fp - 2 * f0 + fm) / (h * h) + (d - 1) / r * (fp - fm) / (2 * h) - n * (n + d - 2.0) / (r * r) * f0;
        worst = std::max(worst, std::abs(-lap + r * r * f0 - (4.0 * k + 2 * n + d) * f0));
    }
    return worst;
}

} // namespace ghf

#endif // GHF_VERIFY_HPP
