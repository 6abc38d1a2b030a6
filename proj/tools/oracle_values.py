#!/usr/bin/env python3
"""Reference values for the test suite, computed with mpmath.

Every matrix entry is an integral evaluated by adaptive quadrature at 25 digits,
using explicit Laguerre sums rather than recurrences or closed-form entries.
Writes tests/oracle_data.hpp; rerun after changing a grid.
"""
import os
import pickle
import sys

import mpmath as mp

mp.mp.dps = 25
SIZE = 5
HERE = os.path.dirname(os.path.abspath(__file__))
OUT = os.path.join(HERE, "..", "tests", "oracle_data.hpp")


_LAG = {}


def lag_coeffs(k, a):
    # explicit sum coefficients, highest degree first; valid for negative integer a as well
    key = (k, a)
    if key not in _LAG:
        c = [(-1) ** i * mp.binomial(k + a, k - i) / mp.factorial(i) for i in range(k + 1)]
        _LAG[key] = (c[::-1], [i * c[i] for i in range(1, k + 1)][::-1])
    return _LAG[key]


def lag(k, a, x):
    return mp.polyval(lag_coeffs(k, a)[0], x)


def lag_d(k, a, x):
    d = lag_coeffs(k, a)[1]
    return mp.polyval(d, x) if d else mp.mpf(0)


def radial(g, theta=1, kappa=1):
    """int_0^inf g(r) dr via rho = (kappa r)^{2 theta}."""
    theta = mp.mpf(theta)
    kappa = mp.mpf(kappa)

    def h(rho):
        if rho == 0:
            return mp.mpf(0)
        r = rho ** (1 / (2 * theta)) / kappa
        return g(r) * rho ** (1 / (2 * theta) - 1) / (2 * theta * kappa)

    # rho = u^10 on [0, 1] smooths rho^a endpoint singularities (a > -1), which tanh-sinh alone resolves poorly
    head = mp.quad(lambda u: h(u ** 10) * 10 * u ** 9, [0, 1])
    return head + mp.quad(h, [1, 5, 20, 60, 150, mp.inf])


# generalized Hermite functions, radial part (harmonic factor carried separately)
def ghf(d, mu, n, k):
    a = n + mp.mpf(d) / 2 - 1 + mu
    lg = mp.loggamma(k + n + mp.mpf(d) / 2 + mu) - mp.log(2) - mp.loggamma(k + 1)
    c = mp.exp(-lg / 2)
    return lambda r: c * mp.exp(-r * r / 2) * r ** n * lag(k, a, r * r)


def conn(mu, nu, n, d, k, j):
    lam = mp.mpf(mu) - nu
    if lam == 0:
        return mp.mpf(1 if k == j else 0)
    hd = n + mp.mpf(d) / 2
    return mp.rf(lam, k - j) / mp.factorial(k - j) * mp.sqrt(
        mp.factorial(k) * mp.gamma(j + hd + nu) / (mp.factorial(j) * mp.gamma(k + hd + mu)))


def aghf(d, s, n, k):
    terms = [((-1) ** (k - j) * conn(s, 0, n, d, k, j), ghf(d, 0, n, j)) for j in range(k + 1)]
    return lambda r: mp.fsum(c * f(r) for c, f in terms)


def muntz(d, theta, n, k):
    theta = mp.mpf(theta)
    beta = (n + mp.mpf(d) / 2 - 1) / theta
    if beta <= -1:
        beta = mp.nint(beta)
    c = mp.sqrt(2 * mp.factorial(k) / mp.gamma(k + beta + 1))
    f = lambda r: c * lag(k, beta, r ** (2 * theta)) * mp.exp(-r ** (2 * theta) / 2) * r ** n

    def df(r):
        rho = r ** (2 * theta)
        dr = 2 * theta * r ** (2 * theta - 1)
        L = lag(k, beta, rho)
        out = (lag_d(k, beta, rho) * dr - dr * L / 2) * r ** n
        if n:
            out += n * r ** (n - 1) * L
        return c * mp.exp(-rho / 2) * out

    return f, df


def muntz_start(d, theta, n):
    beta = (n + mp.mpf(d) / 2 - 1) / mp.mpf(theta)
    return int(-mp.nint(beta)) if beta <= -1 else 0


def sym_block(entry):
    m = [[None] * SIZE for _ in range(SIZE)]
    for k in range(SIZE):
        for j in range(k, SIZE):
            m[k][j] = m[j][k] = entry(k, j)
    return m


# ---------------------------------------------------------------------------

def scalars():
    out = {}
    out["lgamma_10_5"] = mp.loggamma(mp.mpf("10.5"))
    out["hyp1f1_125_1_m4"] = mp.hyp1f1(mp.mpf("1.25"), 1, -4)
    out["hyp2f1_23_18_15_m9"] = mp.hyp2f1(mp.mpf("2.3"), mp.mpf("1.8"), mp.mpf("1.5"), -9)
    x = mp.mpf("0.3")
    out["jacobi_3_1_1_03"] = mp.jacobi(3, 1, 1, x)
    out["gamma_moment_4_5"] = mp.gamma(mp.mpf("4.5"))
    out["laguerre_2_0_1"] = lag(2, 0, 1)
    # C^3_1 for (mu, nu, n, d) = (0.7, 0, 1, 2): int Hhat^mu_3 Hhat^0_1 r^{d-1} dr
    f3, f1 = ghf(2, mp.mpf("0.7"), 1, 3), ghf(2, 0, 1, 1)
    out["conn_07_0_n1_d2_31"] = radial(lambda r: f3(r) * f1(r) * r)
    # mass entry (2,1), s = 0.5, n = 0, d = 2 by Parseval: (-1)^{k+j} int Hhat^s_k Hhat^s_j
    g2, g1 = ghf(2, mp.mpf("0.5"), 0, 2), ghf(2, mp.mpf("0.5"), 0, 1)
    out["mass_05_n0_d2_21"] = -radial(lambda r: g2(r) * g1(r) * r)
    # potential entry (1,2), s = 0.5, mu = 0.7, n = 0, d = 2
    h1, h2 = aghf(2, mp.mpf("0.5"), 0, 1), aghf(2, mp.mpf("0.5"), 0, 2)
    out["pot_05_07_n0_d2_12"] = radial(lambda r: r ** mp.mpf("1.4") * h1(r) * h2(r) * r)
    # Muntz k = 0, n = 0, d = 2, theta = 1/2 at r = 1 (Y = 1/sqrt(2 pi))
    out["muntz_k0_d2_half_r1"] = mp.sqrt(2) * mp.exp(mp.mpf(-1) / 2) / mp.sqrt(2 * mp.pi)
    return out


def hyp_grids():
    g1 = []
    for a, b in [("1.25", "1"), ("1.5", "1"), ("2.2", "1.5"), ("0.8", "0.5"), ("3", "1.5"), ("1.3", "0.5")]:
        for z in ["-0.5", "-4", "-20", "-60", "-150", "-400"]:
            g1.append((a, b, z, mp.hyp1f1(mp.mpf(a), mp.mpf(b), mp.mpf(z))))
    g2 = []
    for s in ["0.3", "0.5", "0.7"]:
        for d in [1, 2, 3]:
            a = mp.mpf(s) + 2
            b = mp.mpf(s) + mp.mpf(d) / 2
            c = mp.mpf(d) / 2
            for z in ["-0.5", "-3", "-30", "-400"]:
                g2.append((mp.nstr(a, 17), mp.nstr(b, 17), mp.nstr(c, 17), z, mp.hyp2f1(a, b, c, mp.mpf(z))))
    for z in ["-2", "-50", "-800"]:
        g2.append(("2.5", "1.5", "1", z, mp.hyp2f1(mp.mpf("2.5"), mp.mpf("1.5"), 1, mp.mpf(z))))
    g2.append(("2.3", "1.8", "1.5", "-9", mp.hyp2f1(mp.mpf("2.3"), mp.mpf("1.8"), mp.mpf("1.5"), -9)))
    g2.append(("1", "1", "2", "-1", mp.log(2)))
    return g1, g2


def mass_blocks():
    out = []
    for s in ["0.3", "0.5", "0.7"]:
        for d in [1, 2, 3]:
            for n in ([0, 1] if d == 1 else [0, 1, 2]):
                sv = mp.mpf(s)
                fs = [ghf(d, sv, n, k) for k in range(SIZE)]
                m = sym_block(lambda k, j: (-1) ** (k + j) * radial(lambda r: fs[k](r) * fs[j](r) * r ** (d - 1)))
                out.append((d, s, n, m))
    return out


def potential_blocks():
    out = []
    for s, mu in [("0.5", "0.7"), ("0.3", "1"), ("0.7", "0.5"), ("0.5", "2")]:
        for d in [1, 2, 3]:
            for n in [0, 1]:
                hs = [aghf(d, mp.mpf(s), n, k) for k in range(SIZE)]
                w = 2 * mp.mpf(mu)
                m = sym_block(lambda k, j: radial(lambda r: r ** w * hs[k](r) * hs[j](r) * r ** (d - 1)))
                out.append((d, s, mu, n, m))
    return out


def connection_blocks():
    out = []
    for mu, nu, n, d in [("0.7", "0", 1, 2), ("0", "0.7", 0, 3), ("1.5", "0.5", 2, 3), ("0.5", "-0.3", 0, 1), ("-0.3", "1.5", 1, 2)]:
        mv, nv = mp.mpf(mu), mp.mpf(nu)
        fm = [ghf(d, mv, n, k) for k in range(SIZE)]
        fn = [ghf(d, nv, n, k) for k in range(SIZE)]
        m = [[mp.mpf(0)] * SIZE for _ in range(SIZE)]
        for k in range(SIZE):
            for j in range(k + 1):
                m[k][j] = radial(lambda r: fm[k](r) * fn[j](r) * r ** (2 * nv + d - 1))
        out.append((mu, nu, n, d, m))
    return out


THETAS = {"1/2": mp.mpf(1) / 2, "1/3": mp.mpf(1) / 3, "1": mp.mpf(1), "2/3": mp.mpf(2) / 3, "1/4": mp.mpf(1) / 4}


def muntz_cases():
    cases = []
    for d in [2, 3]:
        for th in ["1/2", "1/3", "1", "2/3"]:
            for n in [0, 1, 2]:
                cases.append((d, th, n))
    cases.append((1, "1", 0))
    cases.append((1, "1", 1))
    cases.append((1, "1/2", 0))  # beta_0 = -1, shifted start
    cases.append((1, "1/4", 0))  # beta_0 = -2
    return cases


def muntz_potential_blocks():
    out = []
    for d, th, n in muntz_cases():
        t = THETAS[th]
        start = muntz_start(d, t, n)
        for alpha in ["-0.5", "0", "0.25", "2t-1", "-0.3"]:
            av = 2 * t - 1 if alpha == "2t-1" else mp.mpf(alpha)
            neff = 1 if start else n
            if not (neff + mp.mpf(d) / 2 + av > 0):
                continue
            fs = [muntz(d, t, n, start + k)[0] for k in range(SIZE)]
            m = sym_block(lambda k, j: radial(lambda r: r ** (2 * av) * fs[k](r) * fs[j](r) * r ** (d - 1), t))
            out.append((d, th, n, mp.nstr(av, 20), m))
    return out


def muntz_stiffness_blocks():
    out = []
    for d, th, n in muntz_cases():
        t = THETAS[th]
        start = muntz_start(d, t, n)
        fs = [muntz(d, t, n, start + k) for k in range(SIZE)]
        ang = n * (n + d - 2)
        m = sym_block(lambda k, j: radial(
            lambda r: (fs[k][1](r) * fs[j][1](r) + ang * fs[k][0](r) * fs[j][0](r) / r ** 2) * r ** (d - 1), t))
        out.append((d, th, n, m))
    return out


def fractional_blocks():
    out = []
    for d, mu, q, n, kappa in [(3, 1, 0, 0, "2"), (3, 1, 1, 1, "2"), (3, 1, 2, 0, "2"), (2, 2, 1, 0, "1.5"),
                               (2, 2, 3, 1, "1.5"), (1, 1, 0, 0, "1.3"), (1, 1, 2, 0, "1.3"), (1, 3, 1, 1, "0.8"),
                               (1, 3, 4, 0, "0.8")]:
        t = mp.mpf(1) / (mu + 1)
        start = muntz_start(d, t, n)
        alpha = mp.mpf(q - mu) / (mu + 1)
        kv = mp.mpf(kappa)
        fs = [muntz(d, t, n, start + k)[0] for k in range(SIZE)]
        m = sym_block(lambda k, j: radial(
            lambda r: r ** (2 * alpha) * fs[k](kv * r) * fs[j](kv * r) * r ** (d - 1), t, kv))
        out.append((d, mu, q, n, kappa, m))
    return out


# ---------------------------------------------------------------------------

def num(x):
    return mp.nstr(x, 17) if x != 0 else "0.0"


def emit_matrix(m):
    rows = ["{" + ", ".join(num(v) for v in row) + "}" for row in m]
    return "{{" + ", ".join(rows) + "}}"


def cached(name, fn):
    # optional checkpoint directory so an interrupted run can resume
    cdir = os.environ.get("ORACLE_CACHE")
    path = os.path.join(cdir, name + ".pkl") if cdir else None
    if path and os.path.exists(path):
        with open(path, "rb") as fh:
            return pickle.load(fh)
    val = fn()
    if path:
        os.makedirs(cdir, exist_ok=True)
        with open(path, "wb") as fh:
            pickle.dump(val, fh)
    print(name, "done", file=sys.stderr)
    return val


def main():
    sc = cached("scalars", scalars)
    g1, g2 = cached("hyp", hyp_grids)
    mass = cached("mass", mass_blocks)
    pot = cached("potential", potential_blocks)
    con = cached("connection", connection_blocks)
    mpot = cached("muntz_potential", muntz_potential_blocks)
    mst = cached("muntz_stiffness", muntz_stiffness_blocks)
    frac = cached("fractional", fractional_blocks)
    L = []
    w = L.append
    w("// generated by tools/oracle_values.py; do not edit")
    w("#pragma once")
    w("#include <array>")
    w("")
    w("namespace oracle {")
    w("")
    w("using Block = std::array<std::array<double, 5>, 5>;")
    w("")
    for k, v in sc.items():
        w(f"inline constexpr double {k} = {num(v)};")
    w("")
    w("struct Hyp1 { double a, b, z, value; };")
    w("inline constexpr Hyp1 hyp1f1_grid[] = {")
    for a, b, z, v in g1:
        w(f"    {{{a}, {b}, {z}, {num(v)}}},")
    w("};")
    w("struct Hyp2 { double a, b, c, z, value; };")
    w("inline constexpr Hyp2 hyp2f1_grid[] = {")
    for a, b, c, z, v in g2:
        w(f"    {{{a}, {b}, {c}, {z}, {num(v)}}},")
    w("};")
    w("")
    w("struct MassCase { int d; double s; int n; Block m; };")
    w("inline constexpr MassCase mass[] = {")
    for d, s, n, m in mass:
        w(f"    {{{d}, {s}, {n}, {emit_matrix(m)}}},")
    w("};")
    w("struct PotentialCase { int d; double s, mu; int n; Block m; };")
    w("inline constexpr PotentialCase potential[] = {")
    for d, s, mu, n, m in pot:
        w(f"    {{{d}, {s}, {mu}, {n}, {emit_matrix(m)}}},")
    w("};")
    w("struct ConnectionCase { double mu, nu; int n, d; Block m; };")
    w("inline constexpr ConnectionCase connection[] = {")
    for mu, nu, n, d, m in con:
        w(f"    {{{mu}, {nu}, {n}, {d}, {emit_matrix(m)}}},")
    w("};")
    w("struct MuntzPotentialCase { int d; double theta; int n; double alpha; Block m; };")
    w("inline constexpr MuntzPotentialCase muntz_potential[] = {")
    for d, th, n, a, m in mpot:
        w(f"    {{{d}, {th}.0, {n}, {a}, {emit_matrix(m)}}},".replace("/", ".0/"))
    w("};")
    w("struct MuntzStiffnessCase { int d; double theta; int n; Block m; };")
    w("inline constexpr MuntzStiffnessCase muntz_stiffness[] = {")
    for d, th, n, m in mst:
        w(f"    {{{d}, {th}.0, {n}, {emit_matrix(m)}}},".replace("/", ".0/"))
    w("};")
    w("struct FractionalCase { int d, mu, q, n; double kappa; Block m; };")
    w("inline constexpr FractionalCase fractional[] = {")
    for d, mu, q, n, kappa, m in frac:
        w(f"    {{{d}, {mu}, {q}, {n}, {kappa}, {emit_matrix(m)}}},")
    w("};")
    w("")
    w("} // namespace oracle")
    with open(OUT, "w") as fh:
        fh.write("\n".join(L) + "\n")
    print("wrote", os.path.normpath(OUT), file=sys.stderr)


if __name__ == "__main__":
    main()
