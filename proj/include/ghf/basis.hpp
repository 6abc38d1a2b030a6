#ifndef GHF_BASIS_HPP
#define GHF_BASIS_HPP

#include <cmath>
#include <complex>
#include <fstream>
#include <functional>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "harmonics.hpp"
#include "linalg.hpp"
#include "specfun.hpp"

namespace ghf {

enum class Family { GHF, AGHF, MUNTZ };

inline const char* family_name(Family f) {
    switch (f) {
    case Family::GHF: return "GHF";
    case Family::AGHF: return "AGHF";
    default: return "MUNTZ";
    }
}

inline Family parse_family(const std::string& s) {
    if (s == "GHF" || s == "ghf") return Family::GHF;
    if (s == "AGHF" || s == "aghf") return Family::AGHF;
    if (s == "MUNTZ" || s == "muntz") return Family::MUNTZ;
    throw domain_error("unknown basis family '" + s + "'");
}

struct BasisSpec {
    Family family = Family::GHF;
    int d = 2;
    double param = 0.0; // mu, s or theta
    double kappa = 1.0;
};

struct BasisIndex {
    int k = 0;
    HarmonicIndex h;
};

namespace detail {
inline void check_mu(double mu) {
    if (!(mu > -0.5)) throw domain_error("GHF parameter must exceed -1/2");
}
inline double lag_alpha(int d, int n, double mu) { return n + d / 2.0 - 1.0 + mu; }
} // namespace detail

inline double gamma_norm_log(int d, double mu, int k, int n) {
    return std::lgamma(k + n + d / 2.0 + mu) - std::log(2.0) - log_factorial(k);
}

/// gamma^{mu,d}_{k,n} = Gamma(k+n+d/2+mu) / (2 k!)
inline double gamma_norm(int d, double mu, int k, int n) {
    detail::check_mu(mu);
    return std::exp(gamma_norm_log(d, mu, k, n));
}

/// r^n L_k^{(n+d/2-1+mu)}(r^2) Y_l^n
inline double ghp_eval(double mu, const BasisIndex& idx, const Point& x) {
    detail::check_mu(mu);
    const int d = idx.h.d;
    double r = norm(x, d);
    return laguerre_eval(idx.k, detail::lag_alpha(d, idx.h.n, mu), r * r) * solid_harmonic(idx.h, x);
}

/// Radial cores g_0..g_K at r with Hhat_{k,l}^{mu,n}(x) = g_k(|x|) r^n Y_l^n(xhat).
/// Uses the orthonormal Laguerre recurrence with log-scale tracking so that
/// large r neither overflows nor underflows prematurely. With envelope = false
/// the factor e^{-r^2/2} is left out.
inline std::vector<double> ghf_core_all(int d, double mu, int n, int K, double r, bool envelope = true) {
    detail::check_mu(mu);
    const double a = detail::lag_alpha(d, n, mu);
    const double rho = r * r;
    std::vector<double> out(K + 1);
    double lscale = -0.5 * gamma_norm_log(d, mu, 0, n) - (envelope ? 0.5 * rho : 0.0);
    double p0 = 1.0, p1 = 0.0;
    out[0] = std::exp(lscale);
    if (K == 0) return out;
    p1 = (a + 1.0 - rho) / std::sqrt(a + 1.0);
    out[1] = p1 * std::exp(lscale);
    const double big = 1e100;
    for (int k = 1; k < K; ++k) {
        double ak = std::sqrt((k + 1.0) * (k + a + 1.0));
        double ck = std::sqrt(k * (k + a));
        double p2 = ((2.0 * k + a + 1.0 - rho) * p1 - ck * p0) / ak;
        p0 = p1;
        p1 = p2;
        if (std::abs(p1) > big) {
            p0 /= big;
            p1 /= big;
            lscale += std::log(big);
        }
        out[k + 1] = p1 * std::exp(lscale);
    }
    return out;
}

/// Radial profile g_k(r) r^n.
inline double ghf_radial_eval(int d, double mu, int k, int n, double r) {
    if (n > 0 && r == 0.0) return 0.0;
    return ghf_core_all(d, mu, n, k, r)[k] * std::pow(r, n);
}

inline double ghf_eval(double mu, const BasisIndex& idx, const Point& x) {
    const int d = idx.h.d;
    double r = norm(x, d);
    return ghf_core_all(d, mu, idx.h.n, idx.k, r)[idx.k] * solid_harmonic(idx.h, x);
}

/// Lower-triangular {}^mu_nu C^k_j, 0 <= j <= k <= kmax, so that
/// Hhat^{mu} = sum_j C^k_j Hhat^{nu}.
inline Mat connection_coeffs(double mu, double nu, int n, int d, int kmax) {
    detail::check_mu(mu);
    detail::check_mu(nu);
    const double lam = mu - nu;
    std::vector<double> poch(kmax + 1); // (lam)_m / m!
    poch[0] = 1.0;
    for (int m = 1; m <= kmax; ++m) poch[m] = poch[m - 1] * (lam + m - 1.0) / m;
    const double hd = n + d / 2.0;
    Mat c = Mat::Zero(kmax + 1, kmax + 1);
    for (int k = 0; k <= kmax; ++k)
        for (int j = 0; j <= k; ++j) {
            if (poch[k - j] == 0.0) continue;
            // the factorials cancel on the diagonal, so mu == nu gives exactly 1 there
            double lg = 0.5 * ((k == j ? 0.0 : log_factorial(k) - log_factorial(j)) + std::lgamma(j + hd + nu)
                               - std::lgamma(k + hd + mu));
            c(k, j) = poch[k - j] * std::exp(lg);
        }
    return c;
}

/// Rows k: coefficients of Hcheck^{mu,n}_k in the mu = 0 GHFs.
inline Mat aghf_matrix(double mu, int n, int d, int kmax) {
    Mat c = connection_coeffs(mu, 0.0, n, d, kmax);
    for (int k = 0; k <= kmax; ++k)
        for (int j = 0; j <= k; ++j)
            if ((k - j) % 2) c(k, j) = -c(k, j);
    return c;
}

/// A-GHF radial cores, same layout as ghf_core_all.
inline std::vector<double> aghf_core_all(int d, double mu, int n, int K, double r) {
    Mat s = aghf_matrix(mu, n, d, K);
    std::vector<double> h0 = ghf_core_all(d, 0.0, n, K, r);
    Vec out = s * Eigen::Map<Vec>(h0.data(), K + 1);
    return {out.data(), out.data() + out.size()};
}

inline double aghf_eval(double mu, const BasisIndex& idx, const Point& x) {
    const int d = idx.h.d;
    return aghf_core_all(d, mu, idx.h.n, idx.k, norm(x, d))[idx.k] * solid_harmonic(idx.h, x);
}

// ---------------------------------------------------------------------------
// one dimension, Szego numbering H_m^{(mu)}, m = 2k or 2k+1

/// H_m^{(mu)}(x) in the normalisation (-1)^k 2^{2k} k! L_k^{(mu-1/2)}(x^2) etc.
inline double szego_ghp(int m, double mu, double x) {
    int k = m / 2;
    double sg = (k % 2) ? -1.0 : 1.0;
    double c = sg * std::exp(2.0 * k * std::log(2.0) + log_factorial(k));
    if (m % 2 == 0) return c * laguerre_eval(k, mu - 0.5, x * x);
    return 2.0 * c * x * laguerre_eval(k, mu + 0.5, x * x);
}

/// gamma_m^{(mu)} = 2^{2m} [m/2]! Gamma([(m+1)/2] + mu + 1/2)
inline double szego_gamma(int m, double mu) {
    return std::exp(2.0 * m * std::log(2.0) + log_factorial(m / 2) + std::lgamma((m + 1) / 2 + mu + 0.5));
}

/// Orthonormal Hhat_0^{(mu)} .. Hhat_M^{(mu)} at x.
inline std::vector<double> szego_ghf_all(double mu, int M, double x, bool envelope = true) {
    std::vector<double> out(M + 1, 0.0);
    int ke = M / 2, ko = (M - 1) / 2;
    double r = std::abs(x);
    auto ev = ghf_core_all(1, mu, 0, ke, r, envelope);
    for (int k = 0; k <= ke; ++k) out[2 * k] = ((k % 2) ? -1.0 : 1.0) * ev[k] / std::sqrt(2.0);
    if (M >= 1) {
        auto od = ghf_core_all(1, mu, 1, ko, r, envelope);
        for (int k = 0; k <= ko; ++k) out[2 * k + 1] = ((k % 2) ? -1.0 : 1.0) * od[k] * x / std::sqrt(2.0);
    }
    return out;
}

/// Signed 1D A-GHF coefficients {}^mu_0 Chat^m_j (j + m even) from the closed form.
inline double szego_aghf_coeff(double mu, int m, int j) {
    if ((m + j) % 2 || j > m) return 0.0;
    int h = (m - j) / 2;
    double sg = (h % 2) ? -1.0 : 1.0;
    double num = 0.5 * (std::lgamma(m / 2 + 1.0) + std::lgamma((j + 1) / 2 + 0.5));
    double den = 0.5 * (std::lgamma((m + 1) / 2 + mu + 0.5) + std::lgamma(j / 2 + 1.0));
    // Gamma(h + mu)/(Gamma(mu) Gamma(h+1)) = (mu)_h / h!
    double ph = 1.0;
    for (int i = 0; i < h; ++i) ph *= (mu + i) / (i + 1.0);
    return sg * std::exp(num - den) * ph;
}

struct ModifiedDerivative {
    double mu_even = 0.0;     // family of the image of the even part
    std::vector<double> even; // coefficients in H^{(mu+m-1)}_i
    double mu_odd = 0.0;
    std::vector<double> odd;  // coefficients in H^{(mu+m)}_i
};

/// D_x^m on an expansion sum_i c_i H_i^{(mu)}:
/// D^m H_{2k} = d_k H^{(mu+m-1)}_{2k-2m+1}, D^m H_{2k+1} = d_k H^{(mu+m)}_{2k-2m+1},
/// d_k = 4^m k!/(k-m)!.
inline ModifiedDerivative modified_derivative(const std::vector<double>& c, double mu, int m) {
    ModifiedDerivative out;
    out.mu_even = mu + m - 1;
    out.mu_odd = mu + m;
    int M = static_cast<int>(c.size());
    out.even.assign(std::max(M, 1), 0.0);
    out.odd.assign(std::max(M, 1), 0.0);
    for (int i = 0; i < M; ++i) {
        int k = i / 2;
        if (k < m || c[i] == 0.0) continue;
        double dk = std::exp(m * std::log(4.0) + log_factorial(k) - log_factorial(k - m));
        int tgt = 2 * k - 2 * m + 1;
        (i % 2 == 0 ? out.even : out.odd)[tgt] += dk * c[i];
    }
    return out;
}

/// Coefficients of f in the orthonormal 1D GHFs (weighted = true, weight |x|^{2mu})
/// or in the GHPs H_m^{(mu)} (weighted = false, weight |x|^{2mu} e^{-x^2}).
inline std::vector<double> project_1d(const std::function<double(double)>& f, double mu, int N, bool weighted,
                                      int quad_size = 0) {
    detail::check_mu(mu);
    int Q = quad_size > 0 ? quad_size : std::max(2 * N + 16, 64);
    if (Q < N + 1) throw domain_error("project_1d: quadrature size below N+1");
    std::vector<double> c(N + 1, 0.0);
    if (weighted) {
        QuadratureRule q = radial_rule_half(2.0 * mu, Q);
        for (std::size_t i = 0; i < q.size(); ++i)
            for (double sg : {1.0, -1.0}) {
                double x = sg * q.nodes[i];
                double fx = f(x);
                if (fx == 0.0) continue;
                auto h = szego_ghf_all(mu, N, x);
                for (int m = 0; m <= N; ++m) c[m] += q.scaled_weights[i] * fx * h[m];
            }
    } else {
        QuadratureRule q = radial_rule(1, 0, mu, Q);
        for (std::size_t i = 0; i < q.size(); ++i)
            for (double sg : {1.0, -1.0}) {
                double x = sg * q.nodes[i];
                double fx = f(x);
                for (int m = 0; m <= N; ++m) c[m] += q.weights[i] * fx * szego_ghp(m, mu, x);
            }
        for (int m = 0; m <= N; ++m) c[m] /= szego_gamma(m, mu);
    }
    return c;
}

// ---------------------------------------------------------------------------
// spectral fields

struct Truncation {
    int N = 0;               // max harmonic degree
    int K = 0;               // max radial degree (rectangular)
    bool triangular = false; // 2k + n <= N instead
    int kmax(int n) const { return triangular ? (N - n) / 2 : K; }
};

inline std::vector<BlockKey> field_layout(int d, const Truncation& t) {
    std::vector<BlockKey> out;
    int nmax = d == 1 ? std::min(t.N, 1) : t.N;
    for (int n = 0; n <= nmax; ++n) {
        int km = t.kmax(n);
        if (km < 0) continue;
        for (int l = 1; l <= harmonic_dim(d, n); ++l) out.push_back({n, l, km + 1});
    }
    return out;
}

struct SpectralField {
    BasisSpec spec;
    Truncation trunc;
    std::vector<cplx> coeffs; // n outer, l middle, k inner

    std::vector<BlockKey> layout() const { return field_layout(spec.d, trunc); }
    static SpectralField zeros(const BasisSpec& s, const Truncation& t) {
        SpectralField f{s, t, {}};
        std::size_t sz = 0;
        for (auto& b : f.layout()) sz += b.size;
        f.coeffs.assign(sz, cplx(0.0, 0.0));
        return f;
    }
};

/// Radial cores for a family at radius r (kappa applied by the caller).
inline std::vector<double> family_core_all(const BasisSpec& s, int n, int K, double r) {
    switch (s.family) {
    case Family::GHF: return ghf_core_all(s.d, s.param, n, K, r);
    case Family::AGHF: return aghf_core_all(s.d, s.param, n, K, r);
    default: throw domain_error("family_core_all: use muntz_eval for the Muntz family");
    }
}

/// Sum of the field at x (GHF and A-GHF families, argument scaled by kappa).
inline cplx evaluate_field(const SpectralField& f, const Point& x0) {
    const int d = f.spec.d;
    Point x{};
    for (int i = 0; i < d; ++i) x[i] = f.spec.kappa * x0[i];
    double r = norm(x, d);
    cplx sum(0, 0);
    std::size_t off = 0;
    int last_n = -1;
    std::vector<double> core;
    for (auto& b : f.layout()) {
        if (b.n != last_n) {
            core = family_core_all(f.spec, b.n, b.size - 1, r);
            last_n = b.n;
        }
        double y = solid_harmonic({d, b.n, b.l}, x);
        for (int k = 0; k < b.size; ++k) sum += f.coeffs[off + k] * core[k] * y;
        off += b.size;
    }
    return sum;
}

inline void write_field_csv(const SpectralField& f, std::ostream& os) {
    os << "# family=" << family_name(f.spec.family) << " d=" << f.spec.d << " param=" << f.spec.param
       << " kappa=" << f.spec.kappa << " N=" << f.trunc.N << " K=" << f.trunc.K
       << " truncation=" << (f.trunc.triangular ? "triangular" : "rectangular") << "\n";
    os << "n,l,k,re,im\n";
    os << std::setprecision(17);
    std::size_t off = 0;
    for (auto& b : f.layout()) {
        for (int k = 0; k < b.size; ++k)
            os << b.n << "," << b.l << "," << k << "," << f.coeffs[off + k].real() << "," << f.coeffs[off + k].imag()
               << "\n";
        off += b.size;
    }
}

inline SpectralField read_field_csv(std::istream& is) {
    SpectralField f;
    std::string line;
    std::getline(is, line);
    std::istringstream hs(line.substr(line.find('#') + 1));
    std::string tok;
    while (hs >> tok) {
        auto eq = tok.find('=');
        std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
        if (key == "family") f.spec.family = parse_family(val);
        else if (key == "d") f.spec.d = std::stoi(val);
        else if (key == "param") f.spec.param = std::stod(val);
        else if (key == "kappa") f.spec.kappa = std::stod(val);
        else if (key == "N") f.trunc.N = std::stoi(val);
        else if (key == "K") f.trunc.K = std::stoi(val);
        else if (key == "truncation") f.trunc.triangular = val == "triangular";
    }
    std::getline(is, line); // column names
    SpectralField z = SpectralField::zeros(f.spec, f.trunc);
    f.coeffs = z.coeffs;
    std::size_t i = 0;
    while (std::getline(is, line) && i < f.coeffs.size()) {
        if (line.empty()) continue;
        std::vector<std::string> cols;
        std::stringstream ls(line);
        std::string c;
        while (std::getline(ls, c, ',')) cols.push_back(c);
        f.coeffs[i++] = cplx(std::stod(cols.at(3)), std::stod(cols.at(4)));
    }
    return f;
}

// ---------------------------------------------------------------------------
// numerical Fourier transform, F[u](xi) = (2 pi)^{-d/2} int e^{-i xi.x} u(x) dx

struct FourierGrid {
    double half_width = 12.0;
    double step = 0.05;
};

struct FourierResult {
    std::vector<cplx> values;
    bool tail_warning = false; // boundary samples above 1e-12 of the peak
};

/// Trapezoidal transform on [-L, L]^d (d = 1, 2) of `count` functions sampled together;
/// u(x, out) fills out[0..count).
inline std::vector<FourierResult> numeric_fourier_many(int d, const std::function<void(const Point&, std::vector<cplx>&)>& u,
                                                      int count, const std::vector<Point>& xi, const FourierGrid& g = {}) {
    if (d < 1 || d > 2) throw domain_error("numeric_fourier: d must be 1 or 2");
    const int m = static_cast<int>(std::lround(2 * g.half_width / g.step));
    const double h = 2 * g.half_width / m;
    std::vector<double> xs(m + 1);
    for (int i = 0; i <= m; ++i) xs[i] = -g.half_width + i * h;
    const int ny = d == 1 ? 1 : m + 1;
    const std::size_t npts = static_cast<std::size_t>(m + 1) * ny;
    // samples[c][i * ny + j]
    std::vector<std::vector<cplx>> smp(count, std::vector<cplx>(npts));
    std::vector<double> peak(count, 0.0), edge(count, 0.0);
    std::vector<cplx> buf(count);
    for (int i = 0; i <= m; ++i)
        for (int j = 0; j < ny; ++j) {
            u({xs[i], d == 1 ? 0.0 : xs[j], 0}, buf);
            bool boundary = i == 0 || i == m || (d == 2 && (j == 0 || j == m));
            for (int c = 0; c < count; ++c) {
                smp[c][static_cast<std::size_t>(i) * ny + j] = buf[c];
                peak[c] = std::max(peak[c], std::abs(buf[c]));
                if (boundary) edge[c] = std::max(edge[c], std::abs(buf[c]));
            }
        }
    std::vector<FourierResult> res(count);
    std::vector<cplx> e1(m + 1), e2(ny);
    const double scale = std::pow(h / std::sqrt(2 * pi), d);
    for (auto& q : xi) {
        for (int i = 0; i <= m; ++i) e1[i] = std::polar(1.0, -q[0] * xs[i]);
        for (int j = 0; j < ny; ++j) e2[j] = d == 1 ? cplx(1, 0) : std::polar(1.0, -q[1] * xs[j]);
        for (int c = 0; c < count; ++c) {
            cplx acc(0, 0);
            for (int i = 0; i <= m; ++i) {
                cplx row(0, 0);
                const cplx* si = &smp[c][static_cast<std::size_t>(i) * ny];
                for (int j = 0; j < ny; ++j) row += si[j] * e2[j];
                acc += row * e1[i];
            }
            res[c].values.push_back(acc * scale);
        }
    }
    for (int c = 0; c < count; ++c) res[c].tail_warning = edge[c] > 1e-12 * peak[c];
    return res;
}

inline FourierResult numeric_fourier(int d, const std::function<cplx(const Point&)>& u, const std::vector<Point>& xi,
                                     const FourierGrid& g = {}) {
    auto one = [&](const Point& x, std::vector<cplx>& out) { out[0] = u(x); };
    return numeric_fourier_many(d, one, 1, xi, g).front();
}

} // namespace ghf

#endif // GHF_BASIS_HPP
