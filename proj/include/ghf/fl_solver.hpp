#ifndef GHF_FL_SOLVER_HPP
#define GHF_FL_SOLVER_HPP

#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "basis.hpp"
#include "harmonics.hpp"
#include "linalg.hpp"
#include "specfun.hpp"

namespace ghf {

using RealFn = std::function<double(const Point&)>;
using ComplexFn = std::function<cplx(const Point&)>;

/// (M^n)_{kj} = (-1)^{k+j} sum_p {}^s_0C^k_p {}^s_0C^j_p, the A-GHF Gram block.
inline Mat assemble_mass(double s, int d, int n, int K) {
    Mat a = aghf_matrix(s, n, d, K);
    return a * a.transpose();
}

struct ProjectionOptions {
    int quad_size = 0;     // 0: max(2K+16, 64)
    int sphere_degree = -1; // -1: 2N + 8
    bool radial = false;    // source depends on |x| only
    int threads = 1;
};

/// (f, Hcheck^{s,n}_{k,l}) for every mode of the truncation. Nodes come from the
/// e^{-r^2/2} rule, applied in function-weight form to the enveloped A-GHFs.
inline SpectralField project_rhs_complex(const ComplexFn& f, int d, double s, const Truncation& t,
                                 const ProjectionOptions& opt = {}) {
    BasisSpec spec{Family::AGHF, d, s, 1.0};
    SpectralField out = SpectralField::zeros(spec, t);
    auto layout = out.layout();
    int kmax = 0;
    for (auto& b : layout) kmax = std::max(kmax, b.size - 1);
    const int Q = opt.quad_size > 0 ? opt.quad_size : std::max(2 * kmax + 16, 64);
    QuadratureRule q = radial_rule_half(d - 1.0, Q);
    SphereRule sph = sphere_rule(d, opt.sphere_degree >= 0 ? opt.sphere_degree : 2 * t.N + 8);
    if (opt.radial) {
        // one direction is enough; the angular integral of Y^0 is sqrt(|S^{d-1}|)
        sph.points = {Point{1, 0, 0}};
        sph.weights = {sphere_area(d)};
    }
    const int nr = static_cast<int>(q.size());
    const int na = static_cast<int>(sph.points.size());
    // samples f(r_i w_a)
    std::vector<cplx> fs(static_cast<std::size_t>(nr) * na);
    parallel_for(nr, opt.threads, [&](int i) {
        for (int a = 0; a < na; ++a) {
            Point x{};
            for (int c = 0; c < d; ++c) x[c] = q.nodes[i] * sph.points[a][c];
            fs[static_cast<std::size_t>(i) * na + a] = f(x);
        }
    });
    std::vector<std::size_t> offsets;
    std::size_t off = 0;
    for (auto& b : layout) {
        offsets.push_back(off);
        off += b.size;
    }
    std::map<int, Mat> smat;
    for (auto& b : layout)
        if (!smat.count(b.n)) smat[b.n] = aghf_matrix(s, b.n, d, b.size - 1);
    parallel_for(static_cast<int>(layout.size()), opt.threads, [&](int bi) {
        const BlockKey& b = layout[bi];
        if (opt.radial && b.n > 0) return;
        const int K = b.size - 1;
        // angular projection g_i = sum_a w_a f(r_i w_a) Y(w_a)
        Eigen::VectorXcd proj0 = Eigen::VectorXcd::Zero(K + 1);
        std::vector<double> wy(na);
        for (int a = 0; a < na; ++a) wy[a] = sph.weights[a] * sph_eval({d, b.n, b.l}, sph.points[a]);
        for (int i = 0; i < nr; ++i) {
            cplx g(0, 0);
            for (int a = 0; a < na; ++a) g += wy[a] * fs[static_cast<std::size_t>(i) * na + a];
            if (g == cplx(0, 0)) continue;
            auto core = ghf_core_all(d, 0.0, b.n, K, q.nodes[i]);
            double rn = std::pow(q.nodes[i], b.n);
            for (int k = 0; k <= K; ++k) proj0[k] += q.scaled_weights[i] * g * core[k] * rn;
        }
        Eigen::VectorXcd res = smat.at(b.n).cast<cplx>() * proj0;
        for (int k = 0; k <= K; ++k) out.coeffs[offsets[bi] + k] = res[k];
    });
    return out;
}

inline SpectralField project_rhs(const RealFn& f, int d, double s, const Truncation& t,
                                 const ProjectionOptions& opt = {}) {
    return project_rhs_complex([&](const Point& x) { return cplx(f(x), 0.0); }, d, s, t, opt);
}

/// A-GHF coefficients to mu = 0 GHF coefficients (same layout).
inline SpectralField aghf_to_ghf0(const SpectralField& f) {
    if (f.spec.family != Family::AGHF) throw domain_error("aghf_to_ghf0: field is not in the A-GHF basis");
    SpectralField g = f;
    g.spec.family = Family::GHF;
    g.spec.param = 0.0;
    std::size_t off = 0;
    std::map<int, Mat> smat;
    for (auto& b : f.layout()) {
        if (!smat.count(b.n)) smat[b.n] = aghf_matrix(f.spec.param, b.n, f.spec.d, b.size - 1);
        Eigen::VectorXcd u(b.size);
        for (int k = 0; k < b.size; ++k) u[k] = f.coeffs[off + k];
        Eigen::VectorXcd v = smat[b.n].transpose().cast<cplx>() * u;
        for (int k = 0; k < b.size; ++k) g.coeffs[off + k] = v[k];
        off += b.size;
    }
    return g;
}

inline std::vector<cplx> evaluate_field(const SpectralField& f, const std::vector<Point>& pts, int threads = 1) {
    SpectralField g = f.spec.family == Family::AGHF ? aghf_to_ghf0(f) : f;
    std::vector<cplx> out(pts.size());
    parallel_for(static_cast<int>(pts.size()), threads, [&](int i) { out[i] = evaluate_field(g, pts[i]); });
    return out;
}

struct Lattice {
    double half_width = 6.0;
    double step = 0.25;
};

/// Tensor lattice |x|_inf <= half_width.
inline std::vector<Point> lattice_points(int d, const Lattice& lat = {}) {
    int m = static_cast<int>(std::lround(2 * lat.half_width / lat.step));
    std::vector<Point> pts;
    std::vector<double> xs(m + 1);
    for (int i = 0; i <= m; ++i) xs[i] = -lat.half_width + i * lat.step;
    if (d == 1)
        for (double a : xs) pts.push_back({a, 0, 0});
    else if (d == 2)
        for (double a : xs)
            for (double b : xs) pts.push_back({a, b, 0});
    else
        for (double a : xs)
            for (double b : xs)
                for (double c : xs) pts.push_back({a, b, c});
    return pts;
}

struct ErrorNorms {
    double max_error = 0.0;
    double l2_error = 0.0; // lattice Riemann sum
};

inline ErrorNorms field_errors(const SpectralField& f, const ComplexFn& exact, int threads = 1, const Lattice& lat = {}) {
    auto pts = lattice_points(f.spec.d, lat);
    auto vals = evaluate_field(f, pts, threads);
    ErrorNorms e;
    double s2 = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        double err = std::abs(vals[i] - exact(pts[i]));
        e.max_error = std::max(e.max_error, err);
        s2 += err * err;
    }
    e.l2_error = std::sqrt(s2 * std::pow(lat.step, f.spec.d));
    return e;
}

inline double max_error(const SpectralField& f, const ComplexFn& exact, int threads = 1, const Lattice& lat = {}) {
    return field_errors(f, exact, threads, lat).max_error;
}

enum class SourceKind { exp, algebraic };

/// f_e = gamma e^{-r^2} + 2^{2s} Gamma(s+d/2)/Gamma(d/2) 1F1(s+d/2; d/2; -r^2)
/// f_a = gamma (1+r^2)^{-rr} + 2^{2s} Gamma(s+rr) Gamma(s+d/2)/(Gamma(rr) Gamma(d/2)) 2F1(s+rr, s+d/2; d/2; -r^2)
inline std::function<double(double)> manufactured_source(SourceKind kind, int d, double s, double gamma, double rr = 2.0) {
    const double hd = d / 2.0;
    if (kind == SourceKind::exp) {
        double c = std::exp(2 * s * std::log(2.0) + std::lgamma(s + hd) - std::lgamma(hd));
        return [=](double r) { return gamma * std::exp(-r * r) + c * kummer_1f1(s + hd, hd, -r * r); };
    }
    if (!(rr > 0)) throw domain_error("manufactured_source: r must be positive");
    double c = std::exp(2 * s * std::log(2.0) + std::lgamma(s + rr) + std::lgamma(s + hd) - std::lgamma(rr) - std::lgamma(hd));
    return [=](double r) {
        return gamma * std::pow(1 + r * r, -rr) + c * gauss_2f1(s + rr, s + hd, hd, -r * r);
    };
}

inline std::function<double(double)> manufactured_solution(SourceKind kind, double rr = 2.0) {
    if (kind == SourceKind::exp) return [](double r) { return std::exp(-r * r); };
    return [rr](double r) { return std::pow(1 + r * r, -rr); };
}

struct FLProblem {
    int d = 2;
    double s = 0.5;
    double gamma = 1.0;
    RealFn source;
    bool radial_source = false;
    Truncation trunc;
    int threads = 1;
};

/// Block-wise Cholesky solve of (I + gamma M) u = f; coefficients in the A-GHF basis.
inline SpectralField solve(const FLProblem& p) {
    if (!(p.s > 0 && p.s < 1)) throw domain_error("FL problem: s must lie in (0,1)");
    if (!(p.gamma > 0)) throw domain_error("FL problem: gamma must be positive");
    ProjectionOptions opt;
    opt.radial = p.radial_source;
    opt.threads = p.threads;
    SpectralField rhs = project_rhs(p.source, p.d, p.s, p.trunc, opt);
    SpectralField u = rhs;
    auto layout = u.layout();
    std::vector<std::size_t> offsets;
    std::size_t off = 0;
    for (auto& b : layout) {
        offsets.push_back(off);
        off += b.size;
    }
    std::map<int, Mat> sys;
    for (auto& b : layout)
        if (!sys.count(b.n)) sys[b.n] = Mat::Identity(b.size, b.size) + p.gamma * assemble_mass(p.s, p.d, b.n, b.size - 1);
    parallel_for(static_cast<int>(layout.size()), p.threads, [&](int bi) {
        const BlockKey& b = layout[bi];
        Vec f(b.size);
        bool zero = true;
        for (int k = 0; k < b.size; ++k) {
            f[k] = rhs.coeffs[offsets[bi] + k].real();
            zero = zero && f[k] == 0.0;
        }
        Vec x = zero ? Vec::Zero(b.size) : cholesky_solve(sys.at(b.n), f);
        for (int k = 0; k < b.size; ++k) u.coeffs[offsets[bi] + k] = cplx(x[k], 0.0);
    });
    return u;
}

} // namespace ghf

#endif // GHF_FL_SOLVER_HPP
