#ifndef GHF_SPECFUN_HPP
#define GHF_SPECFUN_HPP

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "tridiag.hpp"

namespace ghf {

namespace detail {
inline bool is_nonpos_int(double x, double tol = 0.0) {
    if (x > tol) return false;
    return std::abs(x - std::round(x)) <= tol;
}
inline bool near_int(double x, double tol) {
    return std::abs(x - std::round(x)) <= tol;
}
} // namespace detail

/// ln|Gamma(x)| and the sign of Gamma(x); x must not be a pole.
inline std::pair<double, int> gamma_ln_signed(double x) {
    if (detail::is_nonpos_int(x))
        throw domain_error("gamma pole at " + std::to_string(x));
    int sg = 1;
#if defined(__GLIBC__)
    double v = ::lgamma_r(x, &sg);
#else
    double v = std::lgamma(x);
    if (x < 0 && static_cast<long long>(std::floor(x)) % 2 != 0) sg = -1;
#endif
    return {v, sg};
}

inline double gamma_ln(double x) {
    if (!(x > 0)) throw domain_error("gamma_ln: argument must be positive");
    return gamma_ln_signed(x).first;
}

/// 1/Gamma(x), zero at the poles.
inline double rgamma(double x) {
    if (detail::is_nonpos_int(x)) return 0.0;
    auto [l, s] = gamma_ln_signed(x);
    return s * std::exp(-l);
}

inline double gamma_fn(double x) {
    auto [l, s] = gamma_ln_signed(x);
    return s * std::exp(l);
}

/// rising factorial (a)_m
inline double pochhammer(double a, int m) {
    double p = 1.0;
    for (int i = 0; i < m; ++i) p *= a + i;
    return p;
}

inline double log_factorial(int k) { return std::lgamma(k + 1.0); }

inline double digamma(double x) {
    if (detail::is_nonpos_int(x)) throw domain_error("digamma pole");
    double acc = 0.0;
    if (x < 0.5) {
        // reflection
        return digamma(1.0 - x) - pi / std::tan(pi * x);
    }
    while (x < 16.0) {
        acc -= 1.0 / x;
        x += 1.0;
    }
    double r = 1.0 / (x * x);
    double series = r * (1.0 / 12 - r * (1.0 / 120 - r * (1.0 / 252 - r * (1.0 / 240 - r * (1.0 / 132)))));
    return acc + std::log(x) - 0.5 / x - series;
}

/// L_k^{(alpha)}(z) by the forward three-term recurrence. Any real alpha.
inline double laguerre_eval(int k, double alpha, double z) {
    if (k == 0) return 1.0;
    double l0 = 1.0, l1 = 1.0 + alpha - z;
    for (int j = 1; j < k; ++j) {
        double l2 = ((2.0 * j + alpha + 1.0 - z) * l1 - (j + alpha) * l0) / (j + 1.0);
        l0 = l1;
        l1 = l2;
    }
    return l1;
}

/// L_0 .. L_K at z
inline std::vector<double> laguerre_all(int K, double alpha, double z) {
    std::vector<double> out(K + 1);
    out[0] = 1.0;
    if (K >= 1) out[1] = 1.0 + alpha - z;
    for (int j = 1; j < K; ++j)
        out[j + 1] = ((2.0 * j + alpha + 1.0 - z) * out[j] - (j + alpha) * out[j - 1]) / (j + 1.0);
    return out;
}

inline double jacobi_eval(int k, double a, double b, double x) {
    if (k == 0) return 1.0;
    double p0 = 1.0;
    double p1 = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * x;
    for (int n = 1; n < k; ++n) {
        double s = 2.0 * n + a + b;
        double c1 = 2.0 * (n + 1) * (n + a + b + 1) * s;
        double c2 = (s + 1) * (a * a - b * b);
        double c3 = s * (s + 1) * (s + 2);
        double c4 = 2.0 * (n + a) * (n + b) * (s + 2);
        double p2 = ((c2 + c3 * x) * p1 - c4 * p0) / c1;
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

namespace detail {
inline constexpr int hyp_max_terms = 10000;
inline constexpr double hyp_tol = 1e-14;

// plain 1F1 power series
inline double m_series(double a, double b, double z) {
    double term = 1.0, sum = 1.0;
    for (int n = 0; n < hyp_max_terms; ++n) {
        term *= (a + n) / (b + n) * z / (n + 1.0);
        sum += term;
        if (term == 0.0 || std::abs(term) < hyp_tol * std::abs(sum)) return sum;
    }
    throw convergence_error("kummer_1f1: series did not converge");
}

// 2F1 power series, |z| < 1
inline double f_series(double a, double b, double c, double z) {
    double term = 1.0, sum = 1.0;
    for (int n = 0; n < hyp_max_terms; ++n) {
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z;
        sum += term;
        if (term == 0.0 || std::abs(term) < hyp_tol * std::abs(sum)) return sum;
    }
    throw convergence_error("gauss_2f1: series did not converge");
}

// Gamma(p1)Gamma(p2)/(Gamma(q1)Gamma(q2)) with poles in q giving zero
inline double gamma_ratio(double p1, double p2, double q1, double q2) {
    if (is_nonpos_int(q1) || is_nonpos_int(q2)) return 0.0;
    auto [a1, s1] = gamma_ln_signed(p1);
    auto [a2, s2] = gamma_ln_signed(p2);
    auto [b1, t1] = gamma_ln_signed(q1);
    auto [b2, t2] = gamma_ln_signed(q2);
    return s1 * s2 * t1 * t2 * std::exp(a1 + a2 - b1 - b2);
}

// 2F1(a,b;c;w) for w in [0,1): direct series near 0, the 1-w connection otherwise
inline double f_unit(double a, double b, double c, double w) {
    if (w <= 0.5) return f_series(a, b, c, w);
    double u = 1.0 - w;
    double m = c - a - b;
    if (!near_int(m, 1e-12)) {
        double t1 = gamma_ratio(c, m, c - a, c - b) * f_series(a, b, 1.0 - m, u);
        double t2 = gamma_ratio(c, -m, a, b) * std::pow(u, m) * f_series(c - a, c - b, m + 1.0, u);
        return t1 + t2;
    }
    int mi = static_cast<int>(std::lround(m));
    double lu = std::log(u);
    if (mi >= 0) {
        // c = a + b + mi
        double first = 0.0;
        if (mi > 0) {
            double pre = gamma_fn(mi) * gamma_ratio(c, 1.0, a + mi, b + mi);
            double t = 1.0;
            for (int n = 0; n < mi; ++n) {
                first += t;
                t *= (a + n) * (b + n) / ((n + 1.0) * (1.0 - mi + n)) * u;
            }
            first *= pre;
        }
        double pre2 = gamma_ratio(c, 1.0, a, b);
        double second = 0.0;
        if (pre2 != 0.0) {
            double t = std::exp(-log_factorial(mi));
            for (int n = 0; n < hyp_max_terms; ++n) {
                double br = lu - digamma(n + 1.0) - digamma(n + mi + 1.0)
                            + digamma(a + n + mi) + digamma(b + n + mi);
                double add = t * br;
                second += add;
                if (std::abs(t) < hyp_tol * std::abs(second) && n > 2) break;
                if (n == hyp_max_terms - 1) throw convergence_error("gauss_2f1: log series");
                t *= (a + mi + n) * (b + mi + n) / ((n + 1.0) * (n + mi + 1.0)) * u;
            }
            second *= pre2 * std::pow(-u, mi);
        }
        return first - second;
    }
    // c = a + b - k with k >= 1
    int k = -mi;
    double first = 0.0;
    {
        double pre = gamma_fn(k) * gamma_ratio(c, 1.0, a, b) * std::pow(u, -k);
        double t = 1.0;
        for (int n = 0; n < k; ++n) {
            first += t;
            t *= (a - k + n) * (b - k + n) / ((n + 1.0) * (1.0 - k + n)) * u;
        }
        first *= pre;
    }
    double pre2 = gamma_ratio(c, 1.0, a - k, b - k);
    double second = 0.0;
    if (pre2 != 0.0) {
        double t = std::exp(-log_factorial(k));
        for (int n = 0; n < hyp_max_terms; ++n) {
            double br = lu - digamma(n + 1.0) - digamma(n + k + 1.0) + digamma(a + n) + digamma(b + n);
            second += t * br;
            if (std::abs(t) < hyp_tol * std::abs(second) && n > 2) break;
            if (n == hyp_max_terms - 1) throw convergence_error("gauss_2f1: log series");
            t *= (a + n) * (b + n) / ((n + 1.0) * (n + k + 1.0)) * u;
        }
        second *= pre2 * ((k % 2) ? -1.0 : 1.0);
    }
    return first - second;
}
} // namespace detail

/// 1F1(a;b;z). For z < 0 the Kummer transform is used, and for large |z| the
/// algebraic asymptotic expansion.
inline double kummer_1f1(double a, double b, double z) {
    if (detail::is_nonpos_int(b)) throw domain_error("kummer_1f1: b is a nonpositive integer");
    if (z == 0.0) return 1.0;
    if (z > 0) return detail::m_series(a, b, z);
    double x = -z;
    bool poly = detail::is_nonpos_int(b - a);
    if (x <= 40.0 || poly) return std::exp(z) * detail::m_series(b - a, b, x);
    if (detail::is_nonpos_int(a)) return detail::m_series(a, b, z);
    // large negative z: Gamma(b)/Gamma(b-a) x^{-a} sum (a)_s (1+a-b)_s / s! x^{-s}
    double term = 1.0, sum = 1.0, prev = 1.0;
    for (int s = 0; s < detail::hyp_max_terms; ++s) {
        double next = term * (a + s) * (1.0 + a - b + s) / ((s + 1.0) * x);
        if (std::abs(next) > std::abs(prev) && s > 0) break; // smallest term reached
        term = next;
        sum += term;
        prev = std::abs(term);
        if (term == 0.0 || std::abs(term) < detail::hyp_tol * std::abs(sum)) break;
    }
    auto [gb, sb] = gamma_ln_signed(b);
    auto [gba, sba] = gamma_ln_signed(b - a);
    return sb * sba * std::exp(gb - gba - a * std::log(x)) * sum;
}

/// 2F1(a,b;c;z) for z <= 0 through the Pfaff map w = z/(z-1).
inline double gauss_2f1(double a, double b, double c, double z) {
    if (detail::is_nonpos_int(c)) throw domain_error("gauss_2f1: c is a nonpositive integer");
    if (z > 0) throw domain_error("gauss_2f1: only z <= 0 is supported");
    if (z == 0.0) return 1.0;
    double w = z / (z - 1.0);
    return std::pow(1.0 - z, -a) * detail::f_unit(a, c - b, c, w);
}

struct QuadratureRule {
    enum class Kind { gauss_laguerre, gauss_legendre, periodic_trapezoid };
    Kind kind = Kind::gauss_laguerre;
    double alpha = 0.0;
    std::vector<double> nodes, weights;
    // Laguerre kinds: weights with the exponential factor divided out, stable where
    // the plain weights underflow (function-weight form of the rule)
    std::vector<double> scaled_weights;
    int exactness_degree = 0;
    std::size_t size() const { return nodes.size(); }
};

namespace detail {
// Christoffel form w e^z = Gamma(alpha+1) e^z / sum_k (orthonormal L_k)^2, rescaled on the fly
inline double laguerre_scaled_weight(int size, double alpha, double z) {
    double p0 = 1.0, p1 = 0.0, sum = 1.0, lscale = 0.0;
    const double big = 1e100;
    if (size > 1) {
        p1 = (alpha + 1.0 - z) / std::sqrt(alpha + 1.0);
        sum += p1 * p1;
    }
    for (int k = 1; k + 1 < size; ++k) {
        double p2 = ((2.0 * k + alpha + 1.0 - z) * p1 - std::sqrt(k * (k + alpha)) * p0) / std::sqrt((k + 1.0) * (k + alpha + 1.0));
        p0 = p1;
        p1 = p2;
        if (std::abs(p1) > big) {
            p0 /= big;
            p1 /= big;
            sum /= big * big;
            lscale += std::log(big);
        }
        sum += p1 * p1;
    }
    return std::exp(gamma_ln(alpha + 1.0) + z - 2.0 * lscale - std::log(sum));
}
} // namespace detail

/// Golub-Welsch: nodes ascending, weights Gamma(alpha+1) v0^2.
inline QuadratureRule gauss_laguerre_rule(int size, double alpha) {
    if (size < 1) throw domain_error("gauss_laguerre_rule: size must be >= 1");
    if (!(alpha > -1)) throw domain_error("gauss_laguerre_rule: alpha must exceed -1");
    std::vector<double> d(size), e(size, 0.0), z(size, 0.0);
    for (int k = 0; k < size; ++k) d[k] = 2.0 * k + alpha + 1.0;
    for (int k = 1; k < size; ++k) e[k - 1] = std::sqrt(k * (k + alpha));
    z[0] = 1.0;
    symtridiag_ql(d, e, &z, 1);
    QuadratureRule q;
    q.kind = QuadratureRule::Kind::gauss_laguerre;
    q.alpha = alpha;
    q.exactness_degree = 2 * size - 1;
    q.nodes = d;
    q.weights.resize(size);
    double g = std::exp(gamma_ln(alpha + 1.0));
    for (int i = 0; i < size; ++i) q.weights[i] = g * z[i] * z[i];
    q.scaled_weights.resize(size);
    // the eigenvector weights are more accurate near the origin; the Christoffel form only in the far tail
    for (int i = 0; i < size; ++i)
        q.scaled_weights[i] = q.weights[i] > 1e-200 ? q.weights[i] * std::exp(q.nodes[i])
                                                    : detail::laguerre_scaled_weight(size, alpha, q.nodes[i]);
    return q;
}

inline QuadratureRule gauss_legendre_rule(int size) {
    if (size < 1) throw domain_error("gauss_legendre_rule: size must be >= 1");
    std::vector<double> d(size, 0.0), e(size, 0.0), z(size, 0.0);
    for (int k = 1; k < size; ++k) e[k - 1] = k / std::sqrt(4.0 * k * k - 1.0);
    z[0] = 1.0;
    symtridiag_ql(d, e, &z, 1);
    QuadratureRule q;
    q.kind = QuadratureRule::Kind::gauss_legendre;
    q.exactness_degree = 2 * size - 1;
    q.nodes = d;
    q.weights.resize(size);
    for (int i = 0; i < size; ++i) q.weights[i] = 2.0 * z[i] * z[i];
    return q;
}

/// Rule in r for the weight r^{2mu+2n+d-1} e^{-r^2} on (0, inf).
inline QuadratureRule radial_rule(int d, int n, double mu, int size) {
    double a = n + (d - 2) / 2.0 + mu;
    if (!(a > -1)) throw domain_error("radial_rule: n + (d-2)/2 + mu must exceed -1");
    QuadratureRule q = gauss_laguerre_rule(size, a);
    for (auto& x : q.nodes) x = std::sqrt(x);
    for (auto& w : q.weights) w *= 0.5;
    for (auto& w : q.scaled_weights) w *= 0.5; // weight r^{2a+1} only
    return q;
}

/// Rule in r for the weight r^p e^{-r^2/2} on (0, inf).
inline QuadratureRule radial_rule_half(double p, int size) {
    double a = (p - 1.0) / 2.0;
    QuadratureRule q = gauss_laguerre_rule(size, a);
    double f = std::pow(2.0, a);
    for (auto& x : q.nodes) x = std::sqrt(2.0 * x);
    for (auto& w : q.weights) w *= f;
    for (auto& w : q.scaled_weights) w *= f; // weight r^p only
    return q;
}

} // namespace ghf

#endif // GHF_SPECFUN_HPP
