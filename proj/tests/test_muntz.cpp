#include <catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "ghf/muntz.hpp"
#include "oracle_data.hpp"

using namespace ghf;
using Catch::Matchers::WithinAbs;

namespace {
double max_diff(const Mat& a, const oracle::Block& b) {
    double w = 0;
    for (int k = 0; k < 5; ++k)
        for (int j = 0; j < 5; ++j) w = std::max(w, std::abs(a(k, j) - b[k][j]));
    return w;
}
} // namespace

TEST_CASE("Muntz spec and special space") {
    auto s = make_muntz_spec(3, 0.5, 2);
    CHECK(s.beta == 5.0);
    CHECK(s.start == 0);
    auto sp = make_muntz_spec(1, 0.5, 0);
    CHECK(sp.beta == -1.0);
    CHECK(sp.start == 1);
    auto sq = make_muntz_spec(1, 0.25, 0);
    CHECK(sq.start == 2);
    CHECK_THROWS_AS(make_muntz_spec(1, 0.4, 0), domain_error);
    CHECK_THROWS_AS(make_muntz_spec(2, 0.0, 0), domain_error);
    CHECK_THROWS_AS(make_muntz_spec(1, 1.0, 2), domain_error);
}

TEST_CASE("Muntz value at a point") {
    auto s = make_muntz_spec(2, 0.5, 0);
    CHECK_THAT(muntz_eval(s, 0, 1, Point{1, 0, 0}), WithinAbs(oracle::muntz_k0_d2_half_r1, 1e-15));
    CHECK_THAT(muntz_eval(s, 0, 1, Point{0.6, 0.8, 0}), WithinAbs(oracle::muntz_k0_d2_half_r1, 1e-15));
}

TEST_CASE("energy orthogonality up to K = 100") {
    for (int d : {1, 2, 3})
        for (double th : {1.0 / 3, 0.5, 1.0, 2.0})
            for (int n : {0, 1, 3}) {
                if (d == 1 && n > 1) continue;
                if (d == 1 && th < 0.5) continue;
                auto s = make_muntz_spec(d, th, n);
                const int K = 100;
                Mat a = stiffness_block(s, K) + th * th * power_potential_block(s, 2 * th - 1, K);
                for (int k = 0; k <= K; ++k) a(k, k) -= 2 * th * (s.beta + 2 * (k + s.start) + 1);
                INFO("d=" << d << " theta=" << th << " n=" << n);
                CHECK(a.cwiseAbs().maxCoeff() < 1e-12);
            }
}

TEST_CASE("Muntz potential blocks against quadrature") {
    for (auto& c : oracle::muntz_potential) {
        auto s = make_muntz_spec(c.d, c.theta, c.n);
        INFO("d=" << c.d << " theta=" << c.theta << " n=" << c.n << " alpha=" << c.alpha);
        CHECK(max_diff(power_potential_block(s, c.alpha, 4), c.m) < 1e-9);
    }
}

TEST_CASE("Muntz stiffness blocks against quadrature") {
    for (auto& c : oracle::muntz_stiffness) {
        auto s = make_muntz_spec(c.d, c.theta, c.n);
        INFO("d=" << c.d << " theta=" << c.theta << " n=" << c.n);
        CHECK(max_diff(stiffness_block(s, 4), c.m) < 1e-9);
    }
}

TEST_CASE("fractional power blocks against quadrature") {
    for (auto& c : oracle::fractional) {
        auto s = make_muntz_spec(c.d, 1.0 / (c.mu + 1), c.n, c.kappa);
        INFO("d=" << c.d << " mu=" << c.mu << " q=" << c.q << " n=" << c.n);
        CHECK(max_diff(fractional_power_block(s, c.mu, c.q, 4), c.m) < 1e-9);
    }
}

TEST_CASE("integer exponents give banded blocks") {
    auto s = make_muntz_spec(3, 0.5, 1);
    CHECK(bandwidth(power_potential_block(s, 0.0, 20), 1e-13) == 1);  // t = 2
    CHECK(bandwidth(power_potential_block(s, -0.5, 20), 1e-13) == 0); // t = 1
    CHECK(bandwidth(power_potential_block(s, 0.5, 20), 1e-13) == 2);
    CHECK(bandwidth(stiffness_block(s, 20)) == 1);
    CHECK(bandwidth(power_potential_block(s, 0.25, 8), 1e-13) == 8);
    CHECK_THROWS_AS(power_potential_block(make_muntz_spec(2, 0.5, 0), -1.0, 4), domain_error);
}

TEST_CASE("Muntz functions solve the radial Schrodinger identity") {
    std::vector<double> rg;
    for (double r = 0.2; r <= 5.0 + 1e-9; r += 0.2) rg.push_back(r);
    for (int d : {2, 3})
        for (double th : {1.0 / 3, 0.5, 1.0})
            for (int n : {0, 2, 4})
                for (int k : {0, 3, 6}) {
                    auto s = make_muntz_spec(d, th, n);
                    INFO("d=" << d << " theta=" << th << " n=" << n << " k=" << k);
                    CHECK(schrodinger_residual(s, k, rg) < 1e-5);
                }
    auto sp = make_muntz_spec(1, 0.5, 0);
    CHECK(schrodinger_residual(sp, 2, rg) < 1e-5);
}

TEST_CASE("triplet output") {
    std::ostringstream os;
    write_triplets(stiffness_block(make_muntz_spec(3, 0.5, 0), 2), os);
    CHECK(os.str().rfind("row,col,value\n0,0,", 0) == 0);
}
