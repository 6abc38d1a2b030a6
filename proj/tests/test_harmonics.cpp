#include <catch_amalgamated.hpp>

#include <cmath>

#include "ghf/harmonics.hpp"

using namespace ghf;
using Catch::Matchers::WithinAbs;

TEST_CASE("harmonic space dimensions") {
    CHECK(harmonic_dim(1, 0) == 1);
    CHECK(harmonic_dim(1, 1) == 1);
    CHECK(harmonic_dim(2, 0) == 1);
    CHECK(harmonic_dim(2, 5) == 2);
    for (int n = 0; n < 8; ++n) CHECK(harmonic_dim(3, n) == 2 * n + 1);
    CHECK(harmonic_indices(3, 2).size() == 9);
}

TEST_CASE("sphere areas") {
    CHECK_THAT(sphere_area(1), WithinAbs(2.0, 1e-15));
    CHECK_THAT(sphere_area(2), WithinAbs(2 * pi, 1e-14));
    CHECK_THAT(sphere_area(3), WithinAbs(4 * pi, 1e-14));
}

TEST_CASE("harmonics are orthonormal on the sphere") {
    for (int d : {1, 2, 3}) {
        int nmax = d == 1 ? 1 : 6;
        auto hs = harmonic_indices(d, nmax);
        auto rule = sphere_rule(d, 2 * nmax);
        double worst = 0;
        for (auto& a : hs)
            for (auto& b : hs) {
                double s = 0;
                for (std::size_t i = 0; i < rule.points.size(); ++i)
                    s += rule.weights[i] * sph_eval(a, rule.points[i]) * sph_eval(b, rule.points[i]);
                bool same = a.n == b.n && a.l == b.l;
                worst = std::max(worst, std::abs(s - (same ? 1.0 : 0.0)));
            }
        INFO("d=" << d);
        CHECK(worst < 1e-13);
    }
}

TEST_CASE("solid harmonics are homogeneous and harmonic") {
    const double h = 1e-3;
    for (int d : {2, 3})
        for (auto& hi : harmonic_indices(d, 4)) {
            Point x{0.3, -0.7, d == 3 ? 0.45 : 0.0};
            Point y{};
            for (int i = 0; i < d; ++i) y[i] = 1.7 * x[i];
            CHECK_THAT(solid_harmonic(hi, y), WithinAbs(std::pow(1.7, hi.n) * solid_harmonic(hi, x), 1e-12));
            double lap = 0;
            for (int i = 0; i < d; ++i) {
                Point p = x, m = x;
                p[i] += h;
                m[i] -= h;
                lap += solid_harmonic(hi, p) - 2 * solid_harmonic(hi, x) + solid_harmonic(hi, m);
            }
            CHECK_THAT(lap / (h * h), WithinAbs(0.0, 1e-5));
        }
}

TEST_CASE("invalid harmonic indices are rejected") {
    CHECK_THROWS_AS(sph_eval({3, 2, 6}, Point{0, 0, 1}), domain_error);
    CHECK_THROWS_AS(sph_eval({1, 2, 1}, Point{1, 0, 0}), domain_error);
}
