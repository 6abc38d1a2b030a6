#ifndef GHF_HARMONICS_HPP
#define GHF_HARMONICS_HPP

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "errors.hpp"
#include "specfun.hpp"

namespace ghf {

using Point = std::array<double, 3>; // unused trailing coordinates are zero

inline double norm(const Point& x, int d) {
    double s = 0;
    for (int i = 0; i < d; ++i) s += x[i] * x[i];
    return std::sqrt(s);
}

struct HarmonicIndex {
    int d = 2;
    int n = 0;
    int l = 1; // 1-based, l <= harmonic_dim(d, n)
};

inline int harmonic_dim(int d, int n) {
    if (n < 0) return 0;
    switch (d) {
    case 1: return n <= 1 ? 1 : 0;
    case 2: return n == 0 ? 1 : 2;
    case 3: return 2 * n + 1;
    default: throw domain_error("harmonic_dim: unsupported dimension");
    }
}

inline double sphere_area(int d) {
    switch (d) {
    case 1: return 2.0;
    case 2: return 2.0 * pi;
    case 3: return 4.0 * pi;
    default: throw domain_error("sphere_area: unsupported dimension");
    }
}

namespace detail {
inline void check_index(const HarmonicIndex& h) {
    if (h.d < 1 || h.d > 3) throw domain_error("harmonics: unsupported dimension");
    if (h.l < 1 || h.l > harmonic_dim(h.d, h.n)) throw domain_error("harmonics: index out of range");
}

// d = 3 constant for sin^l(theta) P^{(l,l)}_{n-l}(cos theta) * trig(l phi)
inline double sph3_norm(int n, int l) {
    int k = n - l;
    double lh = (2.0 * l + 1) * std::log(2.0) - std::log(2.0 * k + 2 * l + 1)
                + 2 * std::lgamma(k + l + 1.0) - std::lgamma(k + 2.0 * l + 1) - std::lgamma(k + 1.0);
    double h = std::exp(lh);
    return l == 0 ? 1.0 / std::sqrt(2 * pi * h) : 1.0 / std::sqrt(pi * h);
}

// splits the 1-based order into (m, cos/sin) for d = 3
inline void sph3_order(int l1, int& m, bool& is_sin) {
    if (l1 == 1) {
        m = 0;
        is_sin = false;
    } else {
        m = l1 / 2;
        is_sin = (l1 % 2) == 1;
    }
}
} // namespace detail

/// r^n Y_l^n(x/|x|): the solid harmonic, a polynomial in x.
inline double solid_harmonic(const HarmonicIndex& h, const Point& x) {
    detail::check_index(h);
    const int n = h.n;
    switch (h.d) {
    case 1:
        return (n == 0 ? 1.0 : x[0]) / std::sqrt(2.0);
    case 2: {
        if (n == 0) return 1.0 / std::sqrt(2 * pi);
        std::complex<double> w = std::pow(std::complex<double>(x[0], x[1]), n);
        return (h.l == 1 ? w.real() : w.imag()) / std::sqrt(pi);
    }
    default: {
        int m;
        bool is_sin;
        detail::sph3_order(h.l, m, is_sin);
        double r = norm(x, 3);
        std::complex<double> w = std::pow(std::complex<double>(x[0], x[1]), m);
        double trig = m == 0 ? 1.0 : (is_sin ? w.imag() : w.real());
        if (r == 0.0) return n == 0 ? detail::sph3_norm(0, 0) : 0.0;
        // r^{n-m} P^{(m,m)}_{n-m}(z/r), computed without dividing when n == m
        double p = n == m ? 1.0 : std::pow(r, n - m) * jacobi_eval(n - m, m, m, x[2] / r);
        return detail::sph3_norm(n, m) * trig * p;
    }
    }
}

/// Y_l^n at a unit direction.
inline double sph_eval(const HarmonicIndex& h, const Point& dir) {
    detail::check_index(h);
    if (h.d == 1) return (h.n == 0 ? 1.0 : (dir[0] >= 0 ? 1.0 : -1.0)) / std::sqrt(2.0);
    return solid_harmonic(h, dir);
}

struct SphereRule {
    int d = 2;
    std::vector<Point> points;
    std::vector<double> weights;
};

/// Exact for products of harmonics of degree <= degree.
inline SphereRule sphere_rule(int d, int degree) {
    SphereRule s;
    s.d = d;
    if (d == 1) {
        s.points = {Point{-1, 0, 0}, Point{1, 0, 0}};
        s.weights = {1.0, 1.0};
        return s;
    }
    int nphi = 2 * degree + 1;
    if (d == 2) {
        for (int j = 0; j < nphi; ++j) {
            double t = 2 * pi * j / nphi;
            s.points.push_back({std::cos(t), std::sin(t), 0});
            s.weights.push_back(2 * pi / nphi);
        }
        return s;
    }
    if (d != 3) throw domain_error("sphere_rule: unsupported dimension");
    QuadratureRule g = gauss_legendre_rule(degree + 1);
    for (std::size_t i = 0; i < g.size(); ++i) {
        double c = g.nodes[i], sn = std::sqrt(std::max(0.0, 1 - c * c));
        for (int j = 0; j < nphi; ++j) {
            double t = 2 * pi * j / nphi;
            s.points.push_back({sn * std::cos(t), sn * std::sin(t), c});
            s.weights.push_back(g.weights[i] * 2 * pi / nphi);
        }
    }
    return s;
}

/// All (n, l) with n <= nmax in canonical order.
inline std::vector<HarmonicIndex> harmonic_indices(int d, int nmax) {
    std::vector<HarmonicIndex> out;
    for (int n = 0; n <= nmax; ++n)
        for (int l = 1; l <= harmonic_dim(d, n); ++l) out.push_back({d, n, l});
    return out;
}

} // namespace ghf

#endif // GHF_HARMONICS_HPP
