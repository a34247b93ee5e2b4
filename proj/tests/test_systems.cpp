#include "clusterdyn/errors.hpp"
#include "clusterdyn/systems.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

using namespace clusterdyn;

TEST_CASE("hamiltonian closed values") {
    ChainState c;
    c.params = DeformParams{0.0, 1.0};
    c.sites = {SiteState{2.0, 0.0, 0.0}, SiteState{0.0, 1.0, 1.0}};
    const SystemKind gaudin{SystemTag::gaudin_kappa, c.params};
    CHECK(hamiltonian(gaudin, c) == doctest::Approx(2.0).epsilon(1e-15));

    ChainState q;
    q.params = DeformParams{0.0, 0.0};
    q.sites = {SiteState{0.0, 1.0, 2.0}, SiteState{0.0, 3.0, 4.0}};
    const SystemKind qrs{SystemTag::qrs, q.params};
    CHECK(hamiltonian(qrs, q) == doctest::Approx(10.0).epsilon(1e-15));
}

TEST_CASE("gradient of the one-site gaudin energy") {
    // N=1, z=0, kappa=1: H = s3^2/4 + s+s-, grad = (s3/2, s-, s+).
    ChainState c;
    c.params = DeformParams{0.0, 1.0};
    c.sites = {SiteState{0.8, -0.3, 0.9}};
    const SystemKind k{SystemTag::gaudin_kappa, c.params};
    const std::vector<double> g = grad_hamiltonian(k, c);
    CHECK(g[0] == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(g[1] == doctest::Approx(0.9).epsilon(1e-15));
    CHECK(g[2] == doctest::Approx(-0.3).epsilon(1e-15));
}

TEST_CASE("gradient matches finite differences across systems") {
    const std::vector<SystemKind> kinds{
        SystemKind{SystemTag::gaudin_kappa, DeformParams{0.0, 1.0}},
        SystemKind{SystemTag::gaudin_kappa, DeformParams{0.3, 1.0}},
        SystemKind{SystemTag::gaudin_kappa, DeformParams{0.3, 0.0}},
        SystemKind{SystemTag::qrs, DeformParams{0.3, 0.0}},
    };
    for (const SystemKind& k : kinds) {
        const ChainState c = oracle::random_chain(k.params, 3, 71);
        const std::vector<double> g = grad_hamiltonian(k, c);
        for (int q = 0; q < 9; ++q) {
            auto shift = [&](double h) {
                ChainState d = c;
                SiteState& s = d.sites[static_cast<std::size_t>(q / 3)];
                (q % 3 == 0 ? s.s3 : q % 3 == 1 ? s.splus : s.sminus) += h;
                return hamiltonian(k, d);
            };
            const double h = 5e-6;
            const double fd = (shift(h) - shift(-h)) / (2.0 * h);
            CHECK(std::abs(g[static_cast<std::size_t>(q)] - fd) <=
                  1e-6 * std::max(1.0, std::abs(fd)));
        }
    }
}

TEST_CASE("field vanishes when every ladder coordinate is zero") {
    ChainState c;
    c.params = DeformParams{0.4, 1.0};
    c.sites = {SiteState{0.7, 0.0, 0.0}, SiteState{-0.2, 0.0, 0.0}};
    const SystemKind k{SystemTag::gaudin_kappa, c.params};
    for (double f : vector_field(k, c)) CHECK(f == 0.0);
}

TEST_CASE("flat field variant agrees with the structured one") {
    const SystemKind k{SystemTag::gaudin_kappa, DeformParams{0.2, 1.0}};
    const ChainState c = oracle::random_chain(k.params, 4, 73);
    const std::vector<double> f = vector_field(k, c);
    std::vector<double> y(12), g(12);
    for (int i = 0; i < 4; ++i) {
        y[static_cast<std::size_t>(3 * i)] = c.sites[static_cast<std::size_t>(i)].s3;
        y[static_cast<std::size_t>(3 * i + 1)] = c.sites[static_cast<std::size_t>(i)].splus;
        y[static_cast<std::size_t>(3 * i + 2)] = c.sites[static_cast<std::size_t>(i)].sminus;
    }
    vector_field_flat(k, y, g);
    for (int i = 0; i < 12; ++i)
        CHECK(f[static_cast<std::size_t>(i)] == g[static_cast<std::size_t>(i)]);
}

TEST_CASE("every cluster obeys the closed gaudin equations") {
    for (const DeformParams p : {DeformParams{0.2, 1.0}, DeformParams{0.2, 0.0}}) {
        const SystemKind k{SystemTag::gaudin_kappa, p};
        const ChainState c = oracle::random_chain(p, 5, 79);
        const std::vector<double> f = vector_field(k, c);
        const Deltas d = deltas(c);
        for (int m = 1; m <= 5; ++m) {
            const std::vector<Mat3> jac = cluster_jacobian(c, m);
            Vec3 rate{};
            for (int s = 0; s < 5; ++s)
                for (int r = 0; r < 3; ++r)
                    for (int i = 0; i < 3; ++i)
                        rate[r] += jac[static_cast<std::size_t>(s)][r][i] *
                                   f[static_cast<std::size_t>(3 * s + i)];
            const Vec3 closed = cluster_rhs_gaudin(p, cluster(c, m), d);
            for (int r = 0; r < 3; ++r) CHECK(std::abs(rate[r] - closed[r]) <= 1e-11);
        }
    }
}

TEST_CASE("every cluster obeys the closed qrs equations") {
    const DeformParams p{0.2, 0.0};
    const SystemKind k{SystemTag::qrs, p};
    const ChainState c = oracle::random_chain(p, 5, 83);
    const std::vector<double> f = vector_field(k, c);
    const Deltas d = deltas(c);
    for (int m = 1; m <= 5; ++m) {
        const std::vector<Mat3> jac = cluster_jacobian(c, m);
        Vec3 rate{};
        for (int s = 0; s < 5; ++s)
            for (int r = 0; r < 3; ++r)
                for (int i = 0; i < 3; ++i)
                    rate[r] += jac[static_cast<std::size_t>(s)][r][i] *
                               f[static_cast<std::size_t>(3 * s + i)];
        const Vec3 closed = cluster_rhs_qrs(p, cluster(c, m), d.d3, d);
        for (int r = 0; r < 3; ++r) CHECK(std::abs(rate[r] - closed[r]) <= 1e-11);
    }
}

TEST_CASE("cluster equations contract to the undeformed linear system") {
    const Deltas d{0.3, 0.8, -0.4};
    ClusterVars v;
    v.m = 1;
    v.s3m = 0.5;
    v.spm = 0.7;
    v.smm = -0.2;
    const Vec3 f = cluster_rhs_gaudin(DeformParams{1e-10, 1.0}, v, d);
    const Vec3 expect{2.0 * (v.spm * d.dm - v.smm * d.dp), v.s3m * d.dp - v.spm * d.d3,
                      -v.s3m * d.dm + v.smm * d.d3};
    for (int r = 0; r < 3; ++r) CHECK(std::abs(f[r] - expect[r]) <= 1e-8);

    // Same limit through the explicit linear generator.
    const Mat3 m = linear_matrix_cg(d);
    const Vec3 lin = mat3_apply(m, Vec3{v.s3m, v.spm, v.smm});
    for (int r = 0; r < 3; ++r) CHECK(std::abs(f[r] - lin[r]) <= 1e-8);
}

TEST_CASE("energy is orthogonal to its own flow") {
    for (const SystemKind k :
         {SystemKind{SystemTag::gaudin_kappa, DeformParams{0.25, 1.0}},
          SystemKind{SystemTag::qrs, DeformParams{0.25, 0.0}}}) {
        const ChainState c = oracle::random_chain(k.params, 4, 89);
        const std::vector<double> g = grad_hamiltonian(k, c);
        const std::vector<double> f = vector_field(k, c);
        double dot = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) dot += g[i] * f[i];
        CHECK(std::abs(dot) <= 1e-12);
    }
}

TEST_CASE("casimir tower is flat along both flows") {
    for (const SystemKind k :
         {SystemKind{SystemTag::gaudin_kappa, DeformParams{0.3, 1.0}},
          SystemKind{SystemTag::qrs, DeformParams{0.3, 0.0}}}) {
        const ChainState c = oracle::random_chain(k.params, 4, 97);
        const std::vector<double> f = vector_field(k, c);
        const double eps = 1e-6;
        auto shifted = [&](double sgn) {
            ChainState d = c;
            for (int i = 0; i < 4; ++i) {
                d.sites[static_cast<std::size_t>(i)].s3 +=
                    sgn * eps * f[static_cast<std::size_t>(3 * i)];
                d.sites[static_cast<std::size_t>(i)].splus +=
                    sgn * eps * f[static_cast<std::size_t>(3 * i + 1)];
                d.sites[static_cast<std::size_t>(i)].sminus +=
                    sgn * eps * f[static_cast<std::size_t>(3 * i + 2)];
            }
            return casimir_tower(d);
        };
        const std::vector<double> up = shifted(1.0), dn = shifted(-1.0);
        const std::vector<double> base = casimir_tower(c);
        for (std::size_t j = 0; j < base.size(); ++j) {
            const double rate = (up[j] - dn[j]) / (2.0 * eps);
            CHECK(std::abs(rate) <= 1e-9 * std::max(1.0, std::abs(base[j])));
        }
    }
}

TEST_CASE("qrs n-cluster s3 drifts at the conserved rate") {
    const DeformParams p{0.2, 0.0};
    const SystemKind k{SystemTag::qrs, p};
    const ChainState c = oracle::random_chain(p, 4, 103);
    const std::vector<double> f = vector_field(k, c);
    double rate = 0.0;
    for (int i = 0; i < 4; ++i) rate += f[static_cast<std::size_t>(3 * i)];
    const Deltas cons = conserved_deltas(k, c);
    CHECK(std::abs(rate - 2.0 * (cons.dp - cons.dm)) <= 1e-12);
}

TEST_CASE("linear generator entries and its cubic identity") {
    const Deltas d{1.0, 2.0, 3.0};
    const Mat3 m = linear_matrix_cg(d);
    CHECK(m[0][0] == 0.0);
    CHECK(m[0][1] == 6.0);
    CHECK(m[0][2] == -4.0);
    CHECK(m[1][0] == 2.0);
    CHECK(m[1][1] == -1.0);
    CHECK(m[1][2] == 0.0);
    CHECK(m[2][0] == -3.0);
    CHECK(m[2][1] == 0.0);
    CHECK(m[2][2] == 1.0);
    // M^3 = 4 C M with C = d3^2/4 + d+ d-.
    const double cn = 0.25 + 6.0;
    const Mat3 m3 = mat3_mul(m, mat3_mul(m, m));
    for (int r = 0; r < 3; ++r)
        for (int s = 0; s < 3; ++s)
            CHECK(std::abs(m3[r][s] - 4.0 * cn * m[r][s]) <= 1e-12);
}

TEST_CASE("system validation") {
    CHECK_THROWS_AS(check_system(SystemKind{SystemTag::qrs, DeformParams{0.2, 1.0}}),
                    std::invalid_argument);
    ChainState c = oracle::random_chain(DeformParams{0.2, 1.0}, 2, 107);
    const SystemKind k{SystemTag::gaudin_kappa, DeformParams{0.3, 1.0}};
    CHECK_THROWS_AS(hamiltonian(k, c), std::invalid_argument);
}
