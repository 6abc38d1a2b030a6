#ifndef GHF_TRIDIAG_HPP
#define GHF_TRIDIAG_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "errors.hpp"

namespace ghf {

/// Implicit QL with Wilkinson shifts on a symmetric tridiagonal matrix.
/// d: diagonal (overwritten by ascending eigenvalues), e: e[i] couples i and i+1.
/// z: optional zrows x n row-major block whose columns are rotated along,
/// so z = I gives eigenvectors and z = e_0^T gives their first components.
inline void symtridiag_ql(std::vector<double>& d, std::vector<double> e,
                          std::vector<double>* z, int zrows) {
    const int n = static_cast<int>(d.size());
    if (n == 0) return;
    e.resize(n, 0.0);
    e[n - 1] = 0.0;
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) + dd == dd) break;
            }
            if (m != l) {
                if (++iter > 60) throw linalg_error("symtridiag_ql: no convergence", l);
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                int i;
                for (i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    if (z) {
                        for (int k = 0; k < zrows; ++k) {
                            double* row = z->data() + static_cast<std::size_t>(k) * n;
                            f = row[i + 1];
                            row[i + 1] = s * row[i] + c * f;
                            row[i] = c * row[i] - s * f;
                        }
                    }
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return d[a] < d[b]; });
    std::vector<double> ds(n);
    for (int i = 0; i < n; ++i) ds[i] = d[idx[i]];
    d = ds;
    if (z) {
        std::vector<double> zs(z->size());
        for (int k = 0; k < zrows; ++k)
            for (int i = 0; i < n; ++i)
                zs[static_cast<std::size_t>(k) * n + i] = (*z)[static_cast<std::size_t>(k) * n + idx[i]];
        *z = zs;
    }
}

} // namespace ghf

#endif // GHF_TRIDIAG_HPP
