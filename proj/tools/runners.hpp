#ifndef GHF_TOOLS_RUNNERS_HPP
#define GHF_TOOLS_RUNNERS_HPP

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "ghf/basis.hpp"
#include "ghf/eigen_solver.hpp"
#include "ghf/fl_solver.hpp"
#include "ghf/muntz.hpp"
#include "ghf/tdse.hpp"
#include "ghf/verify.hpp"

#include "config.hpp"

namespace ghf::cli {

struct RunContext {
    std::filesystem::path out_dir = ".";
    int threads = 1;
    std::string command;
    std::vector<std::string> written; // files, in write order
};

namespace detail {

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

class CsvFile {
  public:
    CsvFile(RunContext& ctx, const Config& cfg, const std::string& name) {
        std::filesystem::create_directories(ctx.out_dir);
        path_ = ctx.out_dir / name;
        os_.open(path_);
        if (!os_) throw config_error("", "cannot write " + path_.string());
        os_ << "# ghf " << ctx.command << " config_hash=" << cfg.hash() << "\n";
        os_ << "# config=" << cfg.canonical() << "\n";
        os_ << std::setprecision(17);
        ctx.written.push_back(path_.string());
    }
    std::ostream& os() { return os_; }

  private:
    std::filesystem::path path_;
    std::ofstream os_;
};

inline Truncation read_truncation(Config& c, int n_default, int k_default) {
    Truncation t;
    t.N = c.get<int>("N", n_default);
    t.K = c.get<int>("K", k_default);
    t.triangular = c.choice("truncation", "rectangular", {"rectangular", "triangular"}) == "triangular";
    c.check(t.N >= 0, "N", "must be nonnegative");
    c.check(t.K >= 0, "K", "must be nonnegative");
    return t;
}

inline int read_dim(Config& c, int fallback) {
    int d = c.get<int>("d", fallback);
    c.check(d >= 1 && d <= 3, "d", "must be 1, 2 or 3");
    return d;
}

/// Least-squares slope of log(y) against log(x) (or against x when semilog).
inline double fit_slope(const std::vector<double>& x, const std::vector<double>& y, bool semilog = false) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(y[i] > 0)) continue;
        double a = semilog ? x[i] : std::log(x[i]), b = std::log(y[i]);
        sx += a;
        sy += b;
        sxx += a * a;
        sxy += a * b;
        ++m;
    }
    if (m < 2) return std::nan("");
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

} // namespace detail

// ---------------------------------------------------------------------------
// basis: values of requested members, Gram residuals, Fourier residuals

inline void run_basis(Config& c, RunContext& ctx) {
    Family fam = parse_family(c.choice("family", "ghf", {"ghf", "aghf", "muntz"}));
    int d = detail::read_dim(c, 2);
    double param = c.get<double>("param", fam == Family::MUNTZ ? 1.0 : 0.0);
    double kappa = c.get<double>("kappa", 1.0);
    c.check(kappa > 0, "kappa", "must be positive");
    if (fam != Family::MUNTZ) c.check(param > -0.5, "param", "must exceed -1/2");
    auto members = c.get<std::vector<std::vector<int>>>("members", {});
    for (auto& m : members) {
        c.check(m.size() == 3, "members", "entries are [k, n, l]");
        c.check(m[0] >= 0 && m[1] >= 0 && m[2] >= 1 && m[2] <= harmonic_dim(d, m[1]), "members", "index out of range");
    }
    auto points = c.get<std::vector<std::vector<double>>>("points", {std::vector<double>(d, 0.5)});
    for (auto& p : points) c.check(p.size() == static_cast<std::size_t>(d), "points", "each point needs d coordinates");
    bool gram = c.get<bool>("gram", false);
    int gN = c.get<int>("gram_N", 2), gK = c.get<int>("gram_K", 10);
    c.check(gN >= 0 && gK >= 0, "gram_K", "gram truncation must be nonnegative");
    bool fourier = c.get<bool>("fourier", false);
    int fmax = c.get<int>("fourier_max_degree", 4);
    if (fourier) {
        c.check(d <= 2, "fourier", "the Fourier check runs for d = 1, 2");
        c.check(fam != Family::MUNTZ, "fourier", "not available for the Muntz family");
    }
    std::vector<MuntzSpec> mspecs;
    if (fam == Family::MUNTZ)
        for (auto& m : members) mspecs.push_back(make_muntz_spec(d, param, m[1], kappa));
    c.finish();

    if (!members.empty()) {
        detail::CsvFile f(ctx, c, "basis_values.csv");
        f.os() << "k,n,l,x1,x2,x3,value\n";
        for (std::size_t i = 0; i < members.size(); ++i) {
            auto& m = members[i];
            BasisIndex idx{m[0], {d, m[1], m[2]}};
            for (auto& p0 : points) {
                Point x{}, y{};
                for (int q = 0; q < d; ++q) {
                    x[q] = p0[q];
                    y[q] = kappa * p0[q];
                }
                double v = 0;
                switch (fam) {
                case Family::GHF: v = ghf_eval(param, idx, y); break;
                case Family::AGHF: v = aghf_eval(param, idx, y); break;
                case Family::MUNTZ: v = muntz_eval(mspecs[i], idx.k, idx.h.l, y); break;
                }
                f.os() << m[0] << "," << m[1] << "," << m[2] << "," << x[0] << "," << x[1] << "," << x[2] << "," << v
                       << "\n";
            }
        }
    }
    if (gram) {
        detail::CsvFile f(ctx, c, "basis_gram.csv");
        f.os() << "n,l,k,m,i,j,value,expected,residual\n";
        double worst = 0;
        if (fam == Family::MUNTZ) {
            // energy inner product (grad u, grad v) + theta^2 (|x|^{4 theta - 2} u, v)
            for (int n = 0; n <= (d == 1 ? std::min(gN, 1) : gN); ++n) {
                MuntzSpec s = make_muntz_spec(d, param, n, 1.0);
                Mat a = stiffness_block(s, gK) + param * param * power_potential_block(s, 2 * param - 1, gK);
                for (int k = 0; k <= gK; ++k)
                    for (int j = 0; j <= gK; ++j) {
                        double ex = k == j ? 2 * param * (s.beta + 2 * (k + s.start) + 1) : 0.0;
                        double r = std::abs(a(k, j) - ex);
                        worst = std::max(worst, r);
                        f.os() << n << ",1," << k << "," << n << ",1," << j << "," << a(k, j) << "," << ex << "," << r
                               << "\n";
                    }
            }
        } else {
            Mat g = fam == Family::GHF ? gram_ghf(d, param, gN, gK) : energy_gram_aghf(d, param, gN, gK);
            auto mem = basis_members(d, gN, gK);
            for (std::size_t a = 0; a < mem.size(); ++a)
                for (std::size_t b = 0; b < mem.size(); ++b) {
                    double ex = a == b ? 1.0 : 0.0, r = std::abs(g(a, b) - ex);
                    worst = std::max(worst, r);
                    f.os() << mem[a].h.n << "," << mem[a].h.l << "," << mem[a].k << "," << mem[b].h.n << ","
                           << mem[b].h.l << "," << mem[b].k << "," << g(a, b) << "," << ex << "," << r << "\n";
                }
        }
        f.os() << "# max_residual=" << worst << "\n";
    }
    if (fourier) {
        detail::CsvFile f(ctx, c, "basis_fourier.csv");
        f.os() << "k,n,l,max_residual,tail_warning\n";
        std::vector<Point> xi;
        for (int i = -8; i <= 8; ++i)
            if (d == 1) xi.push_back({double(i), 0, 0});
            else
                for (int j = -8; j <= 8; j += 4) xi.push_back({double(i), double(j), 0});
        for (int n = 0; n <= (d == 1 ? std::min(fmax, 1) : fmax); ++n)
            for (int l = 1; l <= harmonic_dim(d, n); ++l) {
                int K = d == 1 ? (fmax - n) / 2 : fmax - n;
                bool tail = false;
                auto res = fourier_residuals(d, param, n, l, K, xi, {}, &tail);
                for (int k = 0; k <= K; ++k) f.os() << k << "," << n << "," << l << "," << res[k] << "," << tail << "\n";
            }
    }
}

// ---------------------------------------------------------------------------
// solve-fl

struct FLSetup {
    int d = 2;
    double s = 0.5, gamma = 1.0, r = 2.0;
    SourceKind kind = SourceKind::exp;
    Truncation trunc;
    Lattice lattice;
};

inline FLSetup read_fl(Config& c) {
    FLSetup p;
    p.d = detail::read_dim(c, 2);
    p.s = c.get<double>("s", 0.5);
    c.check(p.s > 0 && p.s < 1, "s", "must lie in (0, 1)");
    p.gamma = c.get<double>("gamma", 1.0);
    c.check(p.gamma > 0, "gamma", "must be positive");
    p.kind = c.choice("source", "exp", {"exp", "algebraic"}) == "exp" ? SourceKind::exp : SourceKind::algebraic;
    p.r = c.get<double>("r", 2.0);
    c.check(p.r > 0, "r", "must be positive");
    p.lattice.half_width = c.get<double>("lattice_half_width", 6.0);
    p.lattice.step = c.get<double>("lattice_step", 0.25);
    c.check(p.lattice.half_width > 0 && p.lattice.step > 0, "lattice_step", "lattice must be positive");
    return p;
}

inline SpectralField solve_fl(const FLSetup& p, const Truncation& t, int threads) {
    FLProblem prob;
    prob.d = p.d;
    prob.s = p.s;
    prob.gamma = p.gamma;
    auto src = manufactured_source(p.kind, p.d, p.s, p.gamma, p.r);
    int d = p.d;
    prob.source = [src, d](const Point& x) { return src(norm(x, d)); };
    prob.radial_source = true;
    prob.trunc = t;
    prob.threads = threads;
    return solve(prob);
}

inline ErrorNorms fl_errors(const FLSetup& p, const SpectralField& u, int threads) {
    auto ex = manufactured_solution(p.kind, p.r);
    int d = p.d;
    return field_errors(u, [&](const Point& x) { return cplx(ex(norm(x, d)), 0.0); }, threads, p.lattice);
}

inline void run_solve_fl(Config& c, RunContext& ctx) {
    FLSetup p = read_fl(c);
    p.trunc = detail::read_truncation(c, 0, 32);
    c.finish();
    auto t0 = std::chrono::steady_clock::now();
    SpectralField u = solve_fl(p, p.trunc, ctx.threads);
    double secs = detail::seconds_since(t0);
    ErrorNorms e = fl_errors(p, u, ctx.threads);
    {
        detail::CsvFile f(ctx, c, "fl_field.csv");
        write_field_csv(u, f.os());
    }
    detail::CsvFile f(ctx, c, "fl_error.csv");
    f.os() << "K,max_error,l2_error,seconds\n" << p.trunc.K << "," << e.max_error << "," << e.l2_error << "," << secs
           << "\n";
}

// ---------------------------------------------------------------------------
// evolve

struct EvolveSetup {
    TDSEProblem prob;
    std::string initial;
    double sigma = 1.0, chirp = 0.0;
    Lattice lattice;
};

inline EvolveSetup read_evolve(Config& c) {
    EvolveSetup e;
    TDSEProblem& p = e.prob;
    p.d = detail::read_dim(c, 2);
    p.s = c.get<double>("s", 1.0);
    c.check(p.s > 0 && p.s <= 1, "s", "must lie in (0, 1]");
    p.mu = c.get<double>("mu", 0.0);
    c.check(p.mu > -0.5, "mu", "must exceed -1/2");
    p.gamma = c.get<double>("gamma", 1.0);
    c.check(p.gamma > 0, "gamma", "must be positive");
    p.dt = c.get<double>("dt", 0.01);
    c.check(p.dt > 0, "dt", "must be positive");
    p.t_end = c.get<double>("t_end", 1.0);
    c.check(p.t_end > 0, "t_end", "must be positive");
    p.trunc = detail::read_truncation(c, 0, 30);
    e.initial = c.choice("initial", "beam", {"beam", "manufactured"});
    e.sigma = c.get<double>("sigma", 1.0);
    c.check(e.sigma > 0, "sigma", "must be positive");
    e.chirp = c.get<double>("C", 0.0);
    p.output_times = c.get<std::vector<double>>("output_times", {p.t_end});
    for (double t : p.output_times) c.check(t >= 0 && t <= p.t_end + 1e-12, "output_times", "must lie in [0, t_end]");
    e.lattice.half_width = c.get<double>("lattice_half_width", 6.0);
    e.lattice.step = c.get<double>("lattice_step", 0.25);
    c.check(e.lattice.half_width > 0 && e.lattice.step > 0, "lattice_step", "lattice must be positive");
    const int d = p.d;
    p.radial = true;
    if (e.initial == "beam") {
        double sg = e.sigma, ch = e.chirp;
        p.psi0 = [=](const Point& x) {
            double r = norm(x, d);
            return std::exp(cplx(-sg * r * r, -ch * r));
        };
    } else {
        p.psi0 = [=](const Point& x) {
            double r = norm(x, d);
            return cplx(std::exp(-r * r), 0.0);
        };
        p.source = manufactured_tdse_source(d, p.s, p.mu, p.gamma);
    }
    return e;
}

inline void run_evolve(Config& c, RunContext& ctx) {
    EvolveSetup e = read_evolve(c);
    c.finish();
    e.prob.threads = ctx.threads;
    Trajectory tr = run(e.prob);
    {
        detail::CsvFile f(ctx, c, "evolve_norms.csv");
        f.os() << "step,t,norm\n";
        for (std::size_t i = 0; i < tr.norms.size(); ++i) f.os() << i << "," << i * e.prob.dt << "," << tr.norms[i] << "\n";
    }
    auto pts = lattice_points(e.prob.d, e.lattice);
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        std::ostringstream name;
        name << "evolve_t" << std::fixed << std::setprecision(4) << tr.times[i] << ".csv";
        detail::CsvFile f(ctx, c, name.str());
        auto vals = evaluate_field(tr.states[i], pts, ctx.threads);
        f.os() << "x1,x2,x3,re,im,abs2\n";
        for (std::size_t q = 0; q < pts.size(); ++q)
            f.os() << pts[q][0] << "," << pts[q][1] << "," << pts[q][2] << "," << vals[q].real() << "," << vals[q].imag()
                   << "," << std::norm(vals[q]) << "\n";
    }
}

// ---------------------------------------------------------------------------
// eigen

inline EigenProblem read_eigen(Config& c) {
    EigenProblem p;
    p.d = detail::read_dim(c, 3);
    p.kind = c.choice("potential", "coulomb", {"coulomb", "fractional"}) == "coulomb" ? PotentialKind::coulomb
                                                                                      : PotentialKind::fractional;
    p.Z = c.get<double>("Z", -1.0);
    p.mu = c.get<int>("mu", 1);
    p.nu = c.get<int>("nu", 0);
    p.kappa = c.get<double>("kappa", p.kind == PotentialKind::coulomb ? 4.0 : 1.0);
    c.check(p.kappa > 0, "kappa", "must be positive");
    p.trunc = detail::read_truncation(c, 2, 40);
    c.check(!p.trunc.triangular, "truncation", "eigen runs use rectangular truncation");
    p.count = c.get<int>("count", 10);
    c.check(p.count >= 1, "count", "must be positive");
    if (p.kind == PotentialKind::coulomb) {
        c.check(p.Z < 0, "Z", "Coulomb runs need Z < 0");
        c.check(p.d >= 2, "d", "Coulomb runs need d >= 2");
    } else {
        c.check(p.mu >= 0 && p.nu >= 0, "mu", "mu and nu must be nonnegative integers");
        c.check(p.d != 1 || p.mu % 2 == 1, "mu", "d = 1 needs odd mu");
    }
    return p;
}

/// Exact Coulomb levels repeated by multiplicity, or a self-run at 4K.
inline std::vector<double> eigen_reference(const EigenProblem& p, int count) {
    std::vector<double> ref;
    if (p.kind == PotentialKind::coulomb) {
        for (int i = 1; static_cast<int>(ref.size()) < count; ++i) {
            CoulombLevel lv = exact_coulomb(p.d, p.Z, i);
            // levels are only complete when every degree n < i fits the truncation
            for (int m = 0; m < lv.multiplicity && static_cast<int>(ref.size()) < count; ++m) ref.push_back(lv.value);
        }
        return ref;
    }
    EigenProblem hi = p;
    hi.trunc.K = 4 * p.trunc.K;
    hi.count = count;
    for (auto& e : solve_eigs(hi).entries) ref.push_back(e.value);
    return ref;
}

inline void run_eigen(Config& c, RunContext& ctx) {
    EigenProblem p = read_eigen(c);
    c.finish();
    p.threads = ctx.threads;
    EigenResult r = solve_eigs(p);
    auto ref = eigen_reference(p, static_cast<int>(r.entries.size()));
    detail::CsvFile f(ctx, c, "eigen.csv");
    f.os() << "rank,n,l,eigenvalue,abs_error_vs_reference\n";
    for (std::size_t i = 0; i < r.entries.size(); ++i) {
        double err = i < ref.size() ? std::abs(r.entries[i].value - ref[i]) : std::nan("");
        f.os() << i + 1 << "," << r.entries[i].n << "," << r.entries[i].l << "," << r.entries[i].value << "," << err
               << "\n";
    }
    f.os() << "# max_residual=" << r.max_residual << "\n";
}

// ---------------------------------------------------------------------------
// converge: sweeps over K, dt or N

inline void run_converge(Config& c, RunContext& ctx) {
    std::string problem = c.choice("problem", "fl", {"fl", "hydrogen", "eigen", "cn", "projection"});
    std::vector<double> xs;
    std::vector<double> errs, secs;
    std::string xname;
    bool semilog = false; // exponential decay is fitted on a semilog axis
    std::vector<std::function<double()>> jobs;

    if (problem == "fl") {
        FLSetup p = read_fl(c);
        Truncation base = detail::read_truncation(c, 0, 0);
        auto ks = c.require<std::vector<int>>("K_values");
        for (int k : ks) c.check(k >= 0, "K_values", "must be nonnegative");
        c.finish();
        xname = "K";
        semilog = p.kind == SourceKind::exp;
        for (int k : ks) {
            xs.push_back(k);
            jobs.push_back([=] {
                Truncation t = base;
                t.K = k;
                return fl_errors(p, solve_fl(p, t, 1), 1).max_error;
            });
        }
    } else if (problem == "hydrogen" || problem == "eigen") {
        EigenProblem p = read_eigen(c);
        auto ks = c.require<std::vector<int>>("K_values");
        for (int k : ks) c.check(k >= 1, "K_values", "must be positive");
        int levels = c.get<int>("levels", 3);
        c.check(levels >= 1, "levels", "must be positive");
        c.finish();
        if (problem == "hydrogen") c.check(p.kind == PotentialKind::coulomb, "potential", "hydrogen sweeps are Coulomb runs");
        xname = "K";
        semilog = true;
        // first `levels` eigenvalues against the exact spectrum or a 4x self-run at the largest K
        EigenProblem refp = p;
        refp.trunc.K = *std::max_element(ks.begin(), ks.end());
        refp.count = levels;
        auto ref = eigen_reference(refp, levels);
        for (int k : ks) {
            xs.push_back(k);
            jobs.push_back([=] {
                EigenProblem q = p;
                q.trunc.K = k;
                q.count = levels;
                auto r = solve_eigs(q);
                double e = 0;
                for (int i = 0; i < levels && i < static_cast<int>(r.entries.size()); ++i)
                    e = std::max(e, std::abs(r.entries[i].value - ref[i]));
                return e;
            });
        }
    } else if (problem == "cn") {
        EvolveSetup e = read_evolve(c);
        auto dts = c.require<std::vector<double>>("dt_values");
        for (double v : dts) c.check(v > 0, "dt_values", "must be positive");
        c.finish();
        c.check(e.initial == "manufactured", "initial", "dt sweeps need the manufactured solution");
        xname = "dt";
        for (double dt : dts) {
            xs.push_back(dt);
            jobs.push_back([=] {
                TDSEProblem q = e.prob;
                q.dt = dt;
                q.output_times = {q.t_end};
                Trajectory tr = run(q);
                double te = tr.times.back();
                int d = q.d;
                return field_errors(tr.states.back(), [&](const Point& x) {
                           double r = norm(x, d);
                           return cplx(std::exp(-r * r - te), 0.0);
                       }, 1, e.lattice).max_error;
            });
        }
    } else {
        // 1D projection error of (1 + x^2)^{-h} in the weighted norm, by Parseval
        double mu = c.get<double>("mu", 0.5);
        c.check(mu > -0.5, "mu", "must exceed -1/2");
        double h = c.get<double>("h", 1.3);
        c.check(2 * h > mu + 0.5, "h", "need 2h > mu + 1/2 for a finite norm");
        auto ns = c.require<std::vector<int>>("N_values");
        for (int n : ns) c.check(n >= 0, "N_values", "must be nonnegative");
        c.finish();
        xname = "N";
        for (int n : ns) {
            xs.push_back(n);
            jobs.push_back([=] {
                auto cf = project_1d([h](double x) { return std::pow(1 + x * x, -h); }, mu, n, true);
                double s2 = 0;
                for (double v : cf) s2 += v * v;
                double nrm = std::exp(std::lgamma(mu + 0.5) + std::lgamma(2 * h - mu - 0.5) - std::lgamma(2 * h));
                return std::sqrt(std::max(nrm - s2, 0.0));
            });
        }
    }

    errs.assign(jobs.size(), 0.0);
    secs.assign(jobs.size(), 0.0);
    parallel_for(static_cast<int>(jobs.size()), ctx.threads, [&](int i) {
        auto t0 = std::chrono::steady_clock::now();
        errs[i] = jobs[i]();
        secs[i] = detail::seconds_since(t0);
    });
    detail::CsvFile f(ctx, c, "converge.csv");
    f.os() << xname << ",error,seconds\n";
    for (std::size_t i = 0; i < xs.size(); ++i) f.os() << xs[i] << "," << errs[i] << "," << secs[i] << "\n";
    f.os() << "# slope=" << detail::fit_slope(xs, errs, semilog) << (semilog ? " (log error vs K)" : " (log-log)") << "\n";
}

inline void dispatch(const std::string& cmd, Config& c, RunContext& ctx) {
    ctx.command = cmd;
    if (cmd == "basis") run_basis(c, ctx);
    else if (cmd == "solve-fl") run_solve_fl(c, ctx);
    else if (cmd == "evolve") run_evolve(c, ctx);
    else if (cmd == "eigen") run_eigen(c, ctx);
    else if (cmd == "converge") run_converge(c, ctx);
    else throw config_error("", "unknown command " + cmd);
}

} // namespace ghf::cli

#endif // GHF_TOOLS_RUNNERS_HPP
