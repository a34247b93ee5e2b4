#include "clusterdyn/grouprep.hpp"
#include "clusterdyn/chain.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

using namespace clusterdyn;

TEST_CASE("identity element materializes as the identity matrix") {
    const Mat3 m = matrix_of(GroupElement{0.0, 0.0, 0.0, 0.7});
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(m[i][j] == (i == j ? 1.0 : 0.0));
}

TEST_CASE("matrix layout") {
    const GroupElement g{0.8, -0.3, 0.5, 0.25};
    const Mat3 m = matrix_of(g);
    CHECK(m[0][0] == doctest::Approx(std::exp(-0.2)).epsilon(1e-16));
    CHECK(m[1][1] == m[0][0]);
    CHECK(m[2][2] == 1.0);
    CHECK(m[1][2] == -0.3);
    CHECK(m[0][2] == 0.5);
    CHECK(m[0][1] == 0.0);
    CHECK(m[1][0] == 0.0);
    CHECK(m[2][0] == 0.0);
    CHECK(m[2][1] == 0.0);
    // det = e^{-2 z a}
    const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                       m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                       m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    CHECK(det == doctest::Approx(std::exp(-0.4)).epsilon(1e-14));
}

TEST_CASE("parameter product equals the matrix product") {
    std::mt19937_64 rng(307);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const double z = 0.5 * std::abs(u(rng)) + 0.01;
        const GroupElement g1{u(rng), u(rng), u(rng), z};
        const GroupElement g2{u(rng), u(rng), u(rng), z};
        const Mat3 direct = mat3_mul(matrix_of(g1), matrix_of(g2));
        const Mat3 through = matrix_of(group_product(g1, g2));
        for (int r = 0; r < 3; ++r)
            for (int s = 0; s < 3; ++s) CHECK(std::abs(direct[r][s] - through[r][s]) <= 1e-14);
    }
}

TEST_CASE("product is associative") {
    std::mt19937_64 rng(311);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const GroupElement a{u(rng), u(rng), u(rng), 0.3};
        const GroupElement b{u(rng), u(rng), u(rng), 0.3};
        const GroupElement c{u(rng), u(rng), u(rng), 0.3};
        const GroupElement lhs = group_product(group_product(a, b), c);
        const GroupElement rhs = group_product(a, group_product(b, c));
        CHECK(std::abs(lhs.a - rhs.a) <= 1e-14);
        CHECK(std::abs(lhs.b - rhs.b) <= 1e-14);
        CHECK(std::abs(lhs.c - rhs.c) <= 1e-14);
    }
}

TEST_CASE("mixed deformation parameters are rejected") {
    const GroupElement g1{0.1, 0.2, 0.3, 0.25};
    const GroupElement g2{0.1, 0.2, 0.3, 0.35};
    CHECK_THROWS_AS(group_product(g1, g2), std::invalid_argument);
}

TEST_CASE("n-fold product equals the cluster map bitwise") {
    const double z = 0.3;
    const ChainState chain = oracle::random_chain(DeformParams{z, 1.0}, 5, 313);
    GroupElement acc{chain.sites[0].s3, chain.sites[0].splus, chain.sites[0].sminus, z};
    for (int m = 2; m <= 5; ++m) {
        const SiteState& s = chain.sites[static_cast<std::size_t>(m - 1)];
        acc = group_product(acc, GroupElement{s.s3, s.splus, s.sminus, z});
        const ClusterVars v = cluster(chain, m);
        CHECK(acc.a == v.s3m);
        CHECK(acc.b == v.spm);
        CHECK(acc.c == v.smm);
    }
}

TEST_CASE("one-parameter subgroups match the exponential of the generators") {
    const double z = 0.4;
    const LieGenerators gen = lie_generators(z);
    auto scaled = [](const Mat3& m, double t) {
        Mat3 r = m;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r[i][j] *= t;
        return r;
    };
    for (double t : {-0.7, 0.3, 1.1}) {
        const Mat3 ed = oracle::expm(scaled(gen.d, t));
        const Mat3 md = matrix_of(GroupElement{t, 0.0, 0.0, z});
        const Mat3 e1 = oracle::expm(scaled(gen.p1, t));
        const Mat3 m1 = matrix_of(GroupElement{0.0, t, 0.0, z});
        const Mat3 e2 = oracle::expm(scaled(gen.p2, t));
        const Mat3 m2 = matrix_of(GroupElement{0.0, 0.0, t, z});
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                CHECK(std::abs(ed[i][j] - md[i][j]) <= 1e-12);
                CHECK(std::abs(e1[i][j] - m1[i][j]) <= 1e-12);
                CHECK(std::abs(e2[i][j] - m2[i][j]) <= 1e-12);
            }
    }
}

TEST_CASE("generator commutators close the solvable algebra exactly") {
    const double z = 0.6;
    const LieGenerators gen = lie_generators(z);
    auto bracket = [](const Mat3& x, const Mat3& y) {
        const Mat3 xy = mat3_mul(x, y), yx = mat3_mul(y, x);
        Mat3 r{};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r[i][j] = xy[i][j] - yx[i][j];
        return r;
    };
    const Mat3 dp1 = bracket(gen.d, gen.p1);
    const Mat3 dp2 = bracket(gen.d, gen.p2);
    const Mat3 p12 = bracket(gen.p1, gen.p2);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            CHECK(dp1[i][j] == -z * gen.p1[i][j]);
            CHECK(dp2[i][j] == -z * gen.p2[i][j]);
            CHECK(p12[i][j] == 0.0);
        }
}

TEST_CASE("group multiplication is a poisson map for the bracket family") {
    CHECK(poisson_lie_check(DeformParams{0.0, 1.0}, 100, 11) <= 1e-14);
    CHECK(poisson_lie_check(DeformParams{0.37, 0.0}, 100, 12) <= 1e-12);
    CHECK(poisson_lie_check(DeformParams{0.37, 1.0}, 100, 13) <= 1e-12);
}
