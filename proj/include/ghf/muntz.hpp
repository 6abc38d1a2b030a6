#ifndef GHF_MUNTZ_HPP
#define GHF_MUNTZ_HPP

#include <cmath>
#include <functional>
#include <ostream>
#include <vector>

#include "harmonics.hpp"
#include "linalg.hpp"
#include "specfun.hpp"

namespace ghf {

struct MuntzSpec {
    int d = 3;
    double theta = 0.5;
    int n = 0;
    double kappa = 1.0;
    double beta = 0.0; // (n + d/2 - 1)/theta
    int start = 0;     // first admissible k; > 0 only in the d = 1, n = 0 space with beta a negative integer
};

inline MuntzSpec make_muntz_spec(int d, double theta, int n, double kappa = 1.0) {
    if (d < 1 || d > 3) throw domain_error("muntz: unsupported dimension");
    if (!(theta > 0)) throw domain_error("muntz: theta must be positive");
    MuntzSpec s;
    s.d = d;
    s.theta = theta;
    s.n = n;
    s.kappa = kappa;
    s.beta = (n + d / 2.0 - 1.0) / theta;
    if (d == 1 && n > 1) throw domain_error("muntz: d = 1 has harmonic degrees 0 and 1 only");
    if (s.beta <= -1.0) {
        // only the d = 1 singular space: beta_0 = -(mu+1)/2 a negative integer
        double m = -s.beta;
        if (d != 1 || n != 0 || !detail::near_int(m, 1e-12))
            throw domain_error("muntz: theta below max(1-d/2, 0) outside the d = 1 special space");
        s.beta = -std::round(m);
        s.start = static_cast<int>(std::lround(m));
    } else if (d >= 2 && !(theta > std::max(1.0 - d / 2.0, 0.0))) {
        throw domain_error("muntz: theta must exceed max(1-d/2, 0)");
    }
    return s;
}

namespace detail {
inline double muntz_logc(const MuntzSpec& s, int k) {
    return 0.5 * (std::log(2.0) + log_factorial(k) - std::lgamma(k + s.beta + 1.0));
}
// the special space coincides with a regular block of index beta' = -beta shifted by start
inline MuntzSpec regular_equivalent(const MuntzSpec& s) {
    if (s.start == 0) return s;
    MuntzSpec r = s;
    r.beta = -s.beta;
    r.start = 0;
    return r;
}
} // namespace detail

/// c_k L_k^{(beta)}(r^{2 theta}) e^{-r^{2 theta}/2} for k = start .. start + K (index 0 is k = start).
inline std::vector<double> muntz_core_all(const MuntzSpec& s, int K, double r) {
    double rho = std::pow(r, 2 * s.theta);
    int top = s.start + K;
    std::vector<double> lag = laguerre_all(top, s.beta, rho);
    std::vector<double> out(K + 1);
    for (int j = 0; j <= K; ++j) {
        int k = s.start + j;
        out[j] = lag[k] * std::exp(detail::muntz_logc(s, k) - 0.5 * rho);
    }
    return out;
}

/// radial profile c_k L e^{..} r^n (k counted from start)
inline double muntz_radial(const MuntzSpec& s, int j, double r) {
    if (s.n > 0 && r == 0.0) return 0.0;
    return muntz_core_all(s, j, r)[j] * std::pow(r, s.n);
}

inline double muntz_eval(const MuntzSpec& s, int j, int l, const Point& x) {
    double r = norm(x, s.d);
    return muntz_core_all(s, j, r)[j] * solid_harmonic({s.d, s.n, l}, x);
}

/// (grad, grad) block: diagonal theta(beta+2k+1), off-diagonal theta sqrt((k+1)(beta+k+1)).
inline Mat stiffness_block(const MuntzSpec& s0, int K) {
    MuntzSpec s = detail::regular_equivalent(s0);
    Mat a = Mat::Zero(K + 1, K + 1);
    for (int k = 0; k <= K; ++k) {
        a(k, k) = s.theta * (s.beta + 2 * k + 1);
        if (k < K) a(k, k + 1) = a(k + 1, k) = s.theta * std::sqrt((k + 1.0) * (s.beta + k + 1));
    }
    return a;
}

/// (|x|^{2 alpha} u, v) block. The Gamma ratio Gamma(m+1-t)/Gamma(1-t) is kept as the
/// Pochhammer (1-t)_m, which vanishes for m > q when t - 1 = q is a nonnegative integer.
inline Mat power_potential_block(const MuntzSpec& s0, double alpha, int K) {
    // the special space behaves like n = 1: its members carry a factor |x|
    int neff = s0.start > 0 ? 1 : s0.n;
    if (!(neff + s0.d / 2.0 + alpha > 0)) throw domain_error("power_potential_block: need n + d/2 + alpha > 0");
    MuntzSpec s = detail::regular_equivalent(s0);
    const double t = (1.0 + alpha) / s.theta;
    int band = K;
    double tq = t - 1.0;
    bool integer = tq > -1e-9 && detail::near_int(tq, 1e-9);
    if (integer) band = static_cast<int>(std::lround(tq));
    const double onet = integer ? -std::round(tq) : 1.0 - t;
    // (1-t)_m / m! with sign
    std::vector<double> pm(K + 1);
    pm[0] = 1.0;
    for (int m = 1; m <= K; ++m) pm[m] = pm[m - 1] * (onet + m - 1) / m;
    std::vector<double> lc(K + 1);
    for (int k = 0; k <= K; ++k) lc[k] = detail::muntz_logc(s, k);
    Mat a = Mat::Zero(K + 1, K + 1);
    const int q = band;
    for (int k = 0; k <= K; ++k)
        for (int j = k; j <= K && j - k <= band; ++j) {
            double sum = 0.0;
            int p0 = std::max(0, j - band);
            for (int p = p0; p <= k; ++p) {
                double w = pm[k - p] * pm[j - p];
                if (w == 0.0) continue;
                if (integer) {
                    // c_k c_j Gamma(p+beta+q+1)/p! = 2 sqrt(k!/p! j!/p! (k+beta+1)_{p+q-k} (j+beta+1)_{p+q-j})
                    double r = 4.0;
                    for (int i = p + 1; i <= k; ++i) r *= i;
                    for (int i = p + 1; i <= j; ++i) r *= i;
                    for (int i = k + 1; i <= p + q; ++i) r *= s.beta + i;
                    for (int i = j + 1; i <= p + q; ++i) r *= s.beta + i;
                    sum += w * std::sqrt(r);
                } else {
                    sum += w * std::exp(lc[k] + lc[j] + std::lgamma(p + s.beta + t) - log_factorial(p));
                }
            }
            a(k, j) = a(j, k) = sum / (2 * s.theta);
        }
    return a;
}

/// Block for |x|^{(2q-2mu)/(mu+1)} with theta = 1/(mu+1), scaled by kappa^{-2 alpha - d}.
inline Mat fractional_power_block(const MuntzSpec& s, double mu, int q, int K) {
    if (q < 0) throw domain_error("fractional_power_block: q must be nonnegative");
    double alpha = (q - mu) / (mu + 1.0);
    return std::pow(s.kappa, -2 * alpha - s.d) * power_potential_block(s, alpha, K);
}

/// Bandwidth of a square matrix (largest |i-j| with a nonzero entry above tol).
inline int bandwidth(const Mat& a, double tol = 0.0) {
    int bw = 0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            if (std::abs(a(i, j)) > tol) bw = std::max(bw, std::abs(i - j));
    return bw;
}

/// Max over the grid of |[-Laplace + theta^2 r^{4theta-2}] u - 2 theta^2 (beta+2k+1) r^{2theta-2} u|,
/// radial part by central differences, angular part by -n(n+d-2)/r^2.
inline double schrodinger_residual(const MuntzSpec& s, int j, const std::vector<double>& rgrid, double h = 1e-4) {
    const int k = s.start + j;
    const double th = s.theta;
    double worst = 0.0;
    auto f = [&](double r) { return muntz_radial(s, j, r); };
    for (double r : rgrid) {
        double f0 = f(r), fp = f(r + h), fm = f(r - h);
        double d1 = (fp - fm) / (2 * h);
        double d2 = (fp - 2 * f0 + fm) / (h * h);
        double lap = d2 + (s.d - 1) / r * d1 - s.n * (s.n + s.d - 2.0) / (r * r) * f0;
        double lhs = -lap + th * th * std::pow(r, 4 * th - 2) * f0;
        double rhs = 2 * th * th * (s.beta + 2 * k + 1) * std::pow(r, 2 * th - 2) * f0;
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

inline void write_triplets(const Mat& a, std::ostream& os, double tol = 0.0) {
    os << "row,col,value\n";
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            if (std::abs(a(i, j)) > tol) os << i << "," << j << "," << a(i, j) << "\n";
}

} // namespace ghf

#endif // GHF_MUNTZ_HPP
