#ifndef GHF_TDSE_HPP
#define GHF_TDSE_HPP

#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <vector>

#include "basis.hpp"
#include "fl_solver.hpp"
#include "linalg.hpp"

namespace ghf {

/// (|x|^{2mu} Hcheck^{s,n}_k, Hcheck^{s,n}_j) as B B^T with B = (signed s->0 map)(0->mu connection).
inline Mat assemble_potential(double s, double mu, int d, int n, int K) {
    Mat b = aghf_matrix(s, n, d, K) * connection_coeffs(0.0, mu, n, d, K);
    return b * b.transpose();
}

using SpaceTimeFn = std::function<cplx(const Point&, double)>;

struct TDSEProblem {
    int d = 2;
    double s = 1.0;
    double mu = 0.0;
    double gamma = 1.0;
    double dt = 0.01;
    double t_end = 1.0;
    ComplexFn psi0;
    SpaceTimeFn source; // empty: no source
    bool radial = false;  // psi0 and source depend on |x| only
    Truncation trunc;
    std::vector<double> output_times;
    int threads = 1;
};

/// Per-degree operators: mass M, Hamiltonian A = I/2 + (gamma^2/2) V and the CN factorisation.
struct CNOperators {
    double dt = 0.0;
    std::map<int, Mat> mass, ham;
    std::map<int, Eigen::PartialPivLU<CMat>> lhs;
    std::map<int, CMat> rhs;
};

inline CNOperators build_cn(const TDSEProblem& p) {
    CNOperators ops;
    ops.dt = p.dt;
    for (auto& b : field_layout(p.d, p.trunc)) {
        if (ops.mass.count(b.n)) continue;
        int K = b.size - 1;
        Mat m = assemble_mass(p.s, p.d, b.n, K);
        Mat a = 0.5 * Mat::Identity(b.size, b.size) + 0.5 * p.gamma * p.gamma * assemble_potential(p.s, p.mu, p.d, b.n, K);
        const cplx i(0, 1);
        CMat l = i * m.cast<cplx>() / p.dt - 0.5 * a.cast<cplx>();
        ops.rhs[b.n] = i * m.cast<cplx>() / p.dt + 0.5 * a.cast<cplx>();
        ops.lhs.emplace(b.n, Eigen::PartialPivLU<CMat>(l));
        ops.mass[b.n] = m;
        ops.ham[b.n] = a;
    }
    return ops;
}

/// One Crank-Nicolson step; `source` holds (f(t^{n+1/2}), Hcheck) or is empty.
inline SpectralField cn_step(const SpectralField& state, const CNOperators& ops, const SpectralField* source = nullptr,
                             int threads = 1) {
    SpectralField next = state;
    auto layout = state.layout();
    std::vector<std::size_t> offsets;
    std::size_t off = 0;
    for (auto& b : layout) {
        offsets.push_back(off);
        off += b.size;
    }
    parallel_for(static_cast<int>(layout.size()), threads, [&](int bi) {
        const BlockKey& b = layout[bi];
        CVec u(b.size);
        for (int k = 0; k < b.size; ++k) u[k] = state.coeffs[offsets[bi] + k];
        CVec r = ops.rhs.at(b.n) * u;
        if (source)
            for (int k = 0; k < b.size; ++k) r[k] += source->coeffs[offsets[bi] + k];
        CVec v = ops.lhs.at(b.n).solve(r);
        for (int k = 0; k < b.size; ++k) next.coeffs[offsets[bi] + k] = v[k];
    });
    return next;
}

/// psi^* M psi
inline double mass_norm(const SpectralField& f, const std::map<int, Mat>& mass) {
    double s = 0;
    std::size_t off = 0;
    for (auto& b : f.layout()) {
        CVec u(b.size);
        for (int k = 0; k < b.size; ++k) u[k] = f.coeffs[off + k];
        s += (u.adjoint() * mass.at(b.n).cast<cplx>() * u)(0, 0).real();
        off += b.size;
    }
    return s;
}

/// Coefficients of the M-orthogonal projection of g: solve M u = (g, Hcheck) per block.
inline SpectralField project_state(const ComplexFn& g, const TDSEProblem& p, const std::map<int, Mat>& mass) {
    ProjectionOptions opt;
    opt.radial = p.radial;
    opt.threads = p.threads;
    SpectralField f = project_rhs_complex(g, p.d, p.s, p.trunc, opt);
    std::size_t off = 0;
    for (auto& b : f.layout()) {
        CVec rhs(b.size);
        for (int k = 0; k < b.size; ++k) rhs[k] = f.coeffs[off + k];
        Eigen::LLT<Mat> llt(mass.at(b.n));
        CVec u = llt.solve(rhs.real()).cast<cplx>() + cplx(0, 1) * llt.solve(rhs.imag()).cast<cplx>();
        for (int k = 0; k < b.size; ++k) f.coeffs[off + k] = u[k];
        off += b.size;
    }
    return f;
}

struct Trajectory {
    std::vector<double> times;
    std::vector<SpectralField> states;
    std::vector<double> norms; // psi^* M psi after every step, index 0 the initial state
};

inline Trajectory run(const TDSEProblem& p) {
    if (!(p.dt > 0)) throw domain_error("TDSE: dt must be positive");
    if (!(p.s > 0 && p.s <= 1)) throw domain_error("TDSE: s must lie in (0,1]");
    if (!(p.mu > -0.5)) throw domain_error("TDSE: mu must exceed -1/2");
    CNOperators ops = build_cn(p);
    SpectralField psi = project_state(p.psi0, p, ops.mass);
    Trajectory tr;
    tr.norms.push_back(mass_norm(psi, ops.mass));
    const int steps = static_cast<int>(std::lround(p.t_end / p.dt));
    std::vector<double> outs = p.output_times;
    std::sort(outs.begin(), outs.end());
    std::size_t next_out = 0;
    auto record = [&](double t) {
        while (next_out < outs.size() && std::abs(outs[next_out] - t) <= 0.5 * p.dt) {
            tr.times.push_back(t);
            tr.states.push_back(psi);
            ++next_out;
        }
    };
    record(0.0);
    ProjectionOptions opt;
    opt.radial = p.radial;
    opt.threads = p.threads;
    for (int n = 0; n < steps; ++n) {
        double tm = (n + 0.5) * p.dt;
        if (p.source) {
            SpectralField f = project_rhs_complex([&](const Point& x) { return p.source(x, tm); }, p.d, p.s, p.trunc, opt);
            psi = cn_step(psi, ops, &f, p.threads);
        } else {
            psi = cn_step(psi, ops, nullptr, p.threads);
        }
        tr.norms.push_back(mass_norm(psi, ops.mass));
        record((n + 1) * p.dt);
    }
    return tr;
}

/// Source for the manufactured solution psi = e^{-|x|^2 - t} of
/// i psi_t = [1/2 (-Laplace)^s + (gamma^2/2)|x|^{2mu}] psi + f.
inline SpaceTimeFn manufactured_tdse_source(int d, double s, double mu, double gamma) {
    const double hd = d / 2.0;
    const double c = std::exp(2 * s * std::log(2.0) + std::lgamma(s + hd) - std::lgamma(hd));
    return [=](const Point& x, double t) {
        double r2 = 0;
        for (int i = 0; i < d; ++i) r2 += x[i] * x[i];
        double e = std::exp(-t);
        double g = std::exp(-r2);
        double frac = c * kummer_1f1(s + hd, hd, -r2);
        double pot = 0.5 * gamma * gamma * std::pow(r2, mu) * g;
        return cplx(-e * (0.5 * frac + pot), -e * g);
    };
}

} // namespace ghf

#endif // GHF_TDSE_HPP
