// Acceptance runner: one PASS/FAIL line per criterion, tolerances fixed below.
// Exit status is 0 once every criterion has been evaluated; --strict makes any FAIL nonzero.
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "ghf/basis.hpp"
#include "ghf/eigen_solver.hpp"
#include "ghf/fl_solver.hpp"
#include "ghf/muntz.hpp"
#include "ghf/tdse.hpp"
#include "ghf/verify.hpp"
#include "oracle_data.hpp"

using namespace ghf;

namespace tol {
constexpr double gram = 1e-10, gram_seconds = 60;
constexpr double fourier = 1e-6, fourier_seconds = 120;
constexpr double energy = 1e-8;
constexpr double schrodinger = 1e-5;
constexpr double muntz_energy = 1e-12;
constexpr double hydrogen = 1e-8, hydrogen_seconds = 30;
constexpr double fl_at_40 = 1e-6, fl_fit_r2 = 0.95;
constexpr double cn_ratio_lo = 3.6, cn_ratio_hi = 4.4, cn_drift = 1e-12;
constexpr double projection_slope_rel = 0.25;
constexpr double oracle = 1e-9;
} // namespace tol

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& what, const std::string& detail) {
    std::printf("%s %2d %s: %s\n", ok ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string fmt(const char* f, ...) {
    char buf[1024];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

double seconds(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double id_defect(const Mat& g) { return (g - Mat::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff(); }

// least squares y = a + b x, returns (b, r^2)
std::pair<double, double> line_fit(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = x.size();
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) mx += x[i] / n, my += y[i] / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    double b = sxy / sxx;
    return {b, sxy * sxy / (sxx * syy)};
}

void orthonormality() {
    auto t0 = std::chrono::steady_clock::now();
    double ghf = 0, ghp = 0;
    for (int d : {1, 2, 3})
        for (double mu : {-0.3, 0.0, 0.5, 1.5}) {
            ghf = std::max(ghf, id_defect(gram_ghf(d, mu, 6, 25)));
            ghp = std::max(ghp, id_defect(gram_ghp_normalized(d, mu, 6, 25)));
        }
    double t = seconds(t0);
    report(1, ghf < tol::gram && ghp < tol::gram && t < tol::gram_seconds, "GHF/GHP orthonormality",
           fmt("max|G-I| GHF %.2e, GHP/gamma %.2e (tol %.0e); %.1f s (limit %.0f s)", ghf, ghp, tol::gram, t,
               tol::gram_seconds));
}

void fourier_pair() {
    auto t0 = std::chrono::steady_clock::now();
    double worst = 0;
    bool tail = false;
    std::vector<Point> xi1, xi2;
    for (int i = -16; i <= 16; ++i) xi1.push_back({0.5 * i, 0, 0});
    for (int i = -8; i <= 8; ++i)
        for (int j = -8; j <= 8; j += 4) xi2.push_back({double(i), double(j), 0});
    for (double mu : {0.0, 0.5}) {
        for (int n = 0; n <= 1; ++n)
            for (double r : fourier_residuals(1, mu, n, 1, 8 - n, xi1, {}, &tail)) worst = std::max(worst, r);
        for (int n = 0; n <= 8; ++n)
            for (int l = 1; l <= harmonic_dim(2, n); ++l)
                for (double r : fourier_residuals(2, mu, n, l, 8 - n, xi2, {}, &tail)) worst = std::max(worst, r);
    }
    double t = seconds(t0);
    report(2, worst < tol::fourier && t < tol::fourier_seconds && !tail, "Fourier pair",
           fmt("max residual %.2e over d = 1, 2, k+n <= 8 (tol %.0e); tail warning %s; %.1f s (limit %.0f s)", worst,
               tol::fourier, tail ? "yes" : "no", t, tol::fourier_seconds));
}

void fractional_sobolev() {
    double worst = 0;
    for (int d : {1, 2, 3})
        for (double s : {0.3, 0.5, 0.7}) worst = std::max(worst, id_defect(energy_gram_aghf(d, s, 4, 20)));
    report(3, worst < tol::energy, "fractional Sobolev orthonormality",
           fmt("max|G-I| %.2e for s in {0.3, 0.5, 0.7}, d = 1..3 (tol %.0e)", worst, tol::energy));
}

void schrodinger_identities() {
    std::vector<double> rg;
    for (int i = 0; i <= 48; ++i) rg.push_back(0.2 + 0.1 * i);
    double herm = 0, mz = 0;
    for (int d : {1, 2, 3})
        for (int n = 0; n <= (d == 1 ? 1 : 4); ++n)
            for (int k = 0; k <= 6; ++k) herm = std::max(herm, hermite_schrodinger_residual(d, k, n, rg));
    for (double th : {0.5, 1.0 / 3, 1.0})
        for (int d : {1, 2, 3}) {
            if (d == 1 && th <= 0.5) continue; // d = 1 needs theta > 1/2 outside the singular space
            for (int n = 0; n <= (d == 1 ? 1 : 4); ++n) {
                auto s = make_muntz_spec(d, th, n);
                for (int k = 0; k <= 6; ++k) mz = std::max(mz, schrodinger_residual(s, k, rg));
            }
        }
    report(4, herm < tol::schrodinger && mz < tol::schrodinger, "Schrodinger eigen-identities",
           fmt("FD residual Hermite %.2e, Muntz %.2e on r in [0.2, 5] (tol %.0e)", herm, mz, tol::schrodinger));
}

void muntz_energy() {
    double worst = 0;
    int blocks = 0;
    for (int d : {1, 2, 3})
        for (double th : {0.25, 1.0 / 3, 0.5, 2.0 / 3, 1.0, 2.0})
            for (int n : {0, 1, 2, 4}) {
                if (d == 1 && n > 1) continue;
                MuntzSpec s;
                try {
                    s = make_muntz_spec(d, th, n);
                } catch (const domain_error&) {
                    continue; // inadmissible theta for this space
                }
                const int K = 100;
                Mat a = stiffness_block(s, K) + th * th * power_potential_block(s, 2 * th - 1, K);
                for (int k = 0; k <= K; ++k) a(k, k) -= 2 * th * (s.beta + 2 * (k + s.start) + 1);
                worst = std::max(worst, a.cwiseAbs().maxCoeff());
                ++blocks;
            }
    report(5, worst < tol::muntz_energy, "Muntz energy orthogonality",
           fmt("max deviation %.2e over %d blocks, K = 100 (tol %.0e)", worst, blocks, tol::muntz_energy));
}

void hydrogen() {
    auto t0 = std::chrono::steady_clock::now();
    EigenProblem p;
    p.d = 3;
    p.Z = -1;
    p.kappa = 4;
    p.trunc.N = 4;
    p.trunc.K = 60;
    p.count = 20;
    auto r = solve_eigs(p);
    double t = seconds(t0);
    // group into distinct levels
    std::vector<double> vals;
    std::vector<int> mult;
    std::vector<int> maxn;
    for (auto& e : r.entries) {
        if (vals.empty() || std::abs(e.value - vals.back()) > 1e-6) {
            vals.push_back(e.value);
            mult.push_back(0);
            maxn.push_back(0);
        }
        ++mult.back();
        maxn.back() = std::max(maxn.back(), e.n);
        vals.back() = std::min(vals.back(), e.value);
    }
    bool ok = vals.size() >= 4 && t < tol::hydrogen_seconds;
    vals.resize(std::max<std::size_t>(vals.size(), 3), 0.0);
    mult.resize(vals.size(), 0);
    maxn.resize(vals.size(), 0);
    double err = 0;
    const int want[3] = {1, 4, 9};
    for (int i = 0; i < 3 && ok; ++i) {
        double ex = exact_coulomb(3, -1.0, i + 1).value;
        for (auto& e : r.entries)
            if (std::abs(e.value - ex) < 1e-6) err = std::max(err, std::abs(e.value - ex));
        ok = ok && mult[i] == want[i] && maxn[i] <= 2;
    }
    ok = ok && err < tol::hydrogen;
    report(6, ok, "hydrogen spectrum",
           fmt("levels %.12f (x%d), %.12f (x%d), %.12f (x%d); max abs error %.2e (tol %.0e); residual %.1e; %.1f s "
               "(limit %.0f s)",
               vals[0], mult[0], vals[1], mult[1], vals[2], mult[2], err, tol::hydrogen, r.max_residual, t,
               tol::hydrogen_seconds));
}

SpectralField fl_solve(SourceKind kind, int K) {
    FLProblem p;
    p.d = 2;
    p.s = 0.5;
    p.gamma = 1.0;
    auto src = manufactured_source(kind, 2, 0.5, 1.0, 2.0);
    p.source = [src](const Point& x) { return src(norm(x, 2)); };
    p.radial_source = true;
    p.trunc.K = K;
    return solve(p);
}

void fl_solver() {
    auto ue = manufactured_solution(SourceKind::exp);
    auto exact_e = [&](const Point& x) { return cplx(ue(norm(x, 2)), 0); };
    std::vector<double> errs;
    std::string col;
    for (int K = 4; K <= 40; K += 4) {
        errs.push_back(max_error(fl_solve(SourceKind::exp, K), exact_e));
        col += fmt("%s%.1e", col.empty() ? "" : " ", errs.back());
    }
    bool decreasing = true;
    for (std::size_t i = 1; i < errs.size(); ++i) decreasing = decreasing && errs[i] < errs[i - 1];
    // best approximation floor at K = 40: M-orthogonal projection of u_e itself
    Truncation t;
    t.K = 40;
    ProjectionOptions opt;
    opt.radial = true;
    auto b = project_rhs([&](const Point& x) { return ue(norm(x, 2)); }, 2, 0.5, t, opt);
    Vec f(41);
    for (int k = 0; k <= 40; ++k) f[k] = b.coeffs[k].real();
    Vec c = cholesky_solve(assemble_mass(0.5, 2, 0, 40), f);
    for (int k = 0; k <= 40; ++k) b.coeffs[k] = c[k];
    double floor40 = max_error(b, exact_e);

    // algebraic solution on a wide lattice (its error peaks in the tail)
    auto ua = manufactured_solution(SourceKind::algebraic, 2.0);
    Lattice wide;
    wide.half_width = 20;
    wide.step = 0.25;
    std::vector<double> lk, le;
    for (int K : {8, 16, 32, 64, 128, 256}) {
        double e = field_errors(fl_solve(SourceKind::algebraic, K), [&](const Point& x) { return cplx(ua(norm(x, 2)), 0); },
                                4, wide)
                       .max_error;
        lk.push_back(std::log(K));
        le.push_back(std::log(e));
    }
    auto [slope, r2] = line_fit(lk, le);
    bool ok = decreasing && errs.back() < tol::fl_at_40 && slope < 0 && r2 >= tol::fl_fit_r2;
    report(7, ok, "fractional Laplacian solver",
           fmt("u_e max error K=4..40: %s; strictly decreasing %s; K=40 %.1e (tol %.0e, projection floor %.1e); u_a "
               "log-log slope %.2f, r^2 %.3f (need < 0, >= %.2f)",
               col.c_str(), decreasing ? "yes" : "no", errs.back(), tol::fl_at_40, floor40, slope, r2, tol::fl_fit_r2));
}

void crank_nicolson() {
    auto gauss = [](const Point& x) { return cplx(std::exp(-(x[0] * x[0] + x[1] * x[1])), 0); };
    std::vector<double> errs;
    for (double dt : {0.1, 0.05, 0.025, 0.0125}) {
        TDSEProblem p;
        p.d = 2;
        p.s = 0.5;
        p.mu = 1.0;
        p.dt = dt;
        p.t_end = 1.0;
        p.psi0 = gauss;
        p.source = manufactured_tdse_source(2, 0.5, 1.0, 1.0);
        p.radial = true;
        p.trunc.K = 30;
        p.output_times = {1.0};
        auto tr = run(p);
        errs.push_back(max_error(tr.states.back(), [&](const Point& x) { return gauss(x) * std::exp(-1.0); }));
    }
    bool ok = true;
    std::string ratios;
    for (std::size_t i = 1; i < errs.size(); ++i) {
        double q = errs[i - 1] / errs[i];
        ok = ok && q >= tol::cn_ratio_lo && q <= tol::cn_ratio_hi;
        ratios += fmt("%s%.3f", ratios.empty() ? "" : " ", q);
    }
    TDSEProblem p;
    p.d = 2;
    p.s = 0.7;
    p.mu = 0.5;
    p.dt = 0.01;
    p.t_end = 1.0;
    p.psi0 = [](const Point& x) {
        double r = norm(x, 2);
        return std::exp(cplx(-r * r, -r));
    };
    p.radial = true;
    p.trunc.K = 40;
    auto tr = run(p);
    double drift = 0;
    for (std::size_t i = 1; i < tr.norms.size(); ++i)
        drift = std::max(drift, std::abs(tr.norms[i] - tr.norms[i - 1]) / tr.norms[0]);
    ok = ok && drift < tol::cn_drift;
    report(8, ok, "Crank-Nicolson order and conservation",
           fmt("error ratios for dt 0.1 -> 0.0125: %s (need [%.1f, %.1f]); relative M-norm drift %.1e per step (tol %.0e)",
               ratios.c_str(), tol::cn_ratio_lo, tol::cn_ratio_hi, drift, tol::cn_drift));
}

void projection_rates() {
    bool ok = true;
    std::string out;
    for (int m : {1, 2})
        for (double mu : {0.5, 1.5}) {
            // (1+x^2)^{-h} has exactly m modified derivatives in the weighted space
            double h = (m + 0.1 + mu + 0.5) / 2;
            double nrm = std::exp(std::lgamma(mu + 0.5) + std::lgamma(2 * h - mu - 0.5) - std::lgamma(2 * h));
            std::vector<double> ln, le;
            for (int N = 32; N <= 1024; N *= 2) {
                auto c = project_1d([h](double x) { return std::pow(1 + x * x, -h); }, mu, N, true);
                double s2 = 0;
                for (double v : c) s2 += v * v;
                ln.push_back(std::log(N));
                le.push_back(0.5 * std::log(std::max(nrm - s2, 1e-300)));
            }
            double slope = line_fit(ln, le).first;
            double target = -m / 2.0;
            bool good = std::abs(slope - target) <= tol::projection_slope_rel * std::abs(target);
            ok = ok && good;
            out += fmt("%sm=%d mu=%.1f slope %.3f", out.empty() ? "" : "; ", m, mu, slope);
        }
    report(9, ok, "1D projection rates", out + fmt(" (target -m/2 within %.0f%%)", 100 * tol::projection_slope_rel));
}

double block_diff(const Mat& a, const oracle::Block& b) {
    double w = 0;
    for (int k = 0; k < 5; ++k)
        for (int j = 0; j < 5; ++j) w = std::max(w, std::abs(a(k, j) - b[k][j]));
    return w;
}

void oracle_equivalence() {
    std::map<std::string, double> worst;
    int blocks = 0;
    for (auto& c : oracle::mass) worst["mass"] = std::max(worst["mass"], block_diff(assemble_mass(c.s, c.d, c.n, 4), c.m)), ++blocks;
    for (auto& c : oracle::potential)
        worst["potential"] = std::max(worst["potential"], block_diff(assemble_potential(c.s, c.mu, c.d, c.n, 4), c.m)), ++blocks;
    for (auto& c : oracle::connection)
        worst["connection"] = std::max(worst["connection"], block_diff(connection_coeffs(c.mu, c.nu, c.n, c.d, 4), c.m)), ++blocks;
    for (auto& c : oracle::muntz_potential)
        worst["muntz potential"] = std::max(
            worst["muntz potential"], block_diff(power_potential_block(make_muntz_spec(c.d, c.theta, c.n), c.alpha, 4), c.m)),
        ++blocks;
    for (auto& c : oracle::muntz_stiffness)
        worst["muntz stiffness"] =
            std::max(worst["muntz stiffness"], block_diff(stiffness_block(make_muntz_spec(c.d, c.theta, c.n), 4), c.m)),
        ++blocks;
    for (auto& c : oracle::fractional)
        worst["fractional"] = std::max(
            worst["fractional"],
            block_diff(fractional_power_block(make_muntz_spec(c.d, 1.0 / (c.mu + 1), c.n, c.kappa), c.mu, c.q, 4), c.m)),
        ++blocks;
    double all = 0;
    std::string out;
    for (auto& [k, v] : worst) {
        all = std::max(all, v);
        out += fmt("%s%s %.1e", out.empty() ? "" : ", ", k.c_str(), v);
    }
    report(10, all < tol::oracle, "closed-form entries vs quadrature oracle",
           fmt("%d blocks of 5x5: %s (tol %.0e)", blocks, out.c_str(), tol::oracle));
}

} // namespace

int main(int argc, char** argv) {
    bool strict = argc > 1 && std::strcmp(argv[1], "--strict") == 0;
    const std::vector<std::function<void()>> checks = {orthonormality, fourier_pair,  fractional_sobolev, schrodinger_identities,
                                                       muntz_energy,   hydrogen,      fl_solver,          crank_nicolson,
                                                       projection_rates, oracle_equivalence};
    for (std::size_t i = 0; i < checks.size(); ++i) {
        try {
            checks[i]();
        } catch (const std::exception& e) {
            report(static_cast<int>(i + 1), false, "exception", e.what());
        }
    }
    std::printf("%d of %zu criteria failed\n", failures, checks.size());
    return strict && failures ? 1 : 0;
}
