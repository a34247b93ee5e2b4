#include "clusterdyn/closedform.hpp"
#include "clusterdyn/errors.hpp"
#include "clusterdyn/integrate.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace clusterdyn;

namespace {

ClusterVars tracked_at(const Trajectory& tr, std::size_t sample, std::size_t slot) {
    return tr.clusters[sample][slot];
}

} // namespace

TEST_CASE("zero field gives a constant trajectory on the exact sample grid") {
    ChainState c;
    c.params = DeformParams{0.4, 1.0};
    c.sites = {SiteState{0.7, 0.0, 0.0}, SiteState{-0.2, 0.0, 0.0}};
    const SystemKind k{SystemTag::gaudin_kappa, c.params};
    IntegratorConfig cfg;
    cfg.t1 = 1.0;
    cfg.sample_every = 0.1;
    const Trajectory tr = integrate(k, c, cfg, {1});
    REQUIRE(tr.times.size() == 11);
    CHECK(tr.times.front() == 0.0);
    CHECK(tr.times.back() == 1.0);
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        CHECK(tr.states[i][0] == 0.7);
        CHECK(tr.states[i][3] == -0.2);
        CHECK(tracked_at(tr, i, 0).s3m == 0.7);
    }
    for (const auto& [name, drift] : invariant_drift(tr)) CHECK(drift == 0.0);
}

TEST_CASE("first sample carries the initial cluster values verbatim") {
    const SystemKind k{SystemTag::gaudin_kappa, DeformParams{0.2, 1.0}};
    const ChainState c = oracle::random_chain(k.params, 4, 211);
    IntegratorConfig cfg;
    cfg.t1 = 0.5;
    cfg.sample_every = 0.25;
    const Trajectory tr = integrate(k, c, cfg, {2, 4});
    const ClusterVars v2 = cluster(c, 2), v4 = cluster(c, 4);
    CHECK(tracked_at(tr, 0, 0).s3m == v2.s3m);
    CHECK(tracked_at(tr, 0, 0).spm == v2.spm);
    CHECK(tracked_at(tr, 0, 1).smm == v4.smm);
    CHECK(tr.n_sites == 4);
    REQUIRE(tr.invariant_names.size() == tr.invariants.front().size());
}

TEST_CASE("fixed-step integration reproduces the linear closed form") {
    // z=0: the cluster flow is linear, solved exactly by cg_solution.
    ChainState c;
    c.params = DeformParams{0.0, 1.0};
    c.sites = {SiteState{0.3, 0.7, -0.6}, SiteState{-0.3, 0.3, -0.4}};
    const SystemKind k{SystemTag::gaudin_kappa, c.params};
    IntegratorConfig cfg;
    cfg.method = Method::rk4_fixed;
    cfg.dt = 0.01;
    cfg.t1 = 5.0;
    cfg.sample_every = 0.5;
    const Trajectory tr = integrate(k, c, cfg, {1});
    const Deltas d = deltas(c);
    const ClusterVars v0 = cluster(c, 1);
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        const ClusterVars want = cg_solution(d, v0, tr.times[i]);
        CHECK(std::abs(tracked_at(tr, i, 0).s3m - want.s3m) <= 1e-7);
        CHECK(std::abs(tracked_at(tr, i, 0).spm - want.spm) <= 1e-7);
        CHECK(std::abs(tracked_at(tr, i, 0).smm - want.smm) <= 1e-7);
    }
}

TEST_CASE("adaptive integration tracks the kink closed form") {
    const DeformParams p{0.3, 0.0};
    const SystemKind k{SystemTag::gaudin_kappa, p};
    const ChainState c = oracle::random_chain(p, 3, 223);
    IntegratorConfig cfg;
    cfg.t1 = 6.0;
    cfg.rtol = 1e-12;
    cfg.atol = 1e-14;
    cfg.sample_every = 0.05;
    const Trajectory tr = integrate(k, c, cfg, {1, 2});
    const Deltas d = deltas(c);
    for (int slot = 0; slot < 2; ++slot) {
        const ClusterVars v0 = cluster(c, slot + 1);
        for (std::size_t i = 0; i < tr.times.size(); ++i) {
            const ClusterVars want = qpg_solution(p, d, v0, tr.times[i]);
            CHECK(std::abs(tracked_at(tr, i, static_cast<std::size_t>(slot)).spm - want.spm) <=
                  1e-7);
            CHECK(std::abs(tracked_at(tr, i, static_cast<std::size_t>(slot)).smm - want.smm) <=
                  1e-7);
            // s3 grows linearly once the decaying amplitude bottoms out, so
            // its comparison is relative.
            CHECK(std::abs(tracked_at(tr, i, static_cast<std::size_t>(slot)).s3m - want.s3m) <=
                  1e-7 * (1.0 + std::abs(want.s3m)));
        }
    }
    CHECK(tr.stats.accepted > 0);
    CHECK(tr.stats.evaluations > 0);
}

TEST_CASE("adaptive integration conserves the invariant tower") {
    const SystemKind k{SystemTag::gaudin_kappa, DeformParams{0.2, 0.0}};
    const ChainState c = oracle::random_chain(k.params, 5, 227);
    IntegratorConfig cfg;
    cfg.t1 = 10.0;
    cfg.sample_every = 0.1;
    const Trajectory tr = integrate(k, c, cfg, {});
    for (const auto& [name, drift] : invariant_drift(tr)) CHECK(drift <= 1e-8);
}

TEST_CASE("measured period of the pure rotation") {
    // deltas (0, 1, -1): C = -1, period pi.
    ChainState c;
    c.params = DeformParams{0.0, 1.0};
    c.sites = {SiteState{0.3, 0.7, -0.6}, SiteState{-0.3, 0.3, -0.4}};
    const SystemKind k{SystemTag::gaudin_kappa, c.params};
    IntegratorConfig cfg;
    cfg.t1 = 10.0;
    cfg.sample_every = 0.004;
    const Trajectory tr = integrate(k, c, cfg, {1});
    const double pi = std::acos(-1.0);
    CHECK(std::abs(measure_period(tr, 1) - pi) <= 1e-4 * pi);
    CHECK_THROWS_AS(measure_period(tr, 2), std::invalid_argument);
}

TEST_CASE("period measurement rejects stationary tracks") {
    ChainState c;
    c.params = DeformParams{0.1, 1.0};
    c.sites = {SiteState{0.5, 0.0, 0.0}};
    const SystemKind k{SystemTag::gaudin_kappa, c.params};
    IntegratorConfig cfg;
    cfg.t1 = 2.0;
    cfg.sample_every = 0.01;
    const Trajectory tr = integrate(k, c, cfg, {1});
    CHECK_THROWS_AS(measure_period(tr, 1), numerics_error);
}

TEST_CASE("integration configuration is validated") {
    const SystemKind k{SystemTag::gaudin_kappa, DeformParams{0.2, 1.0}};
    const ChainState c = oracle::random_chain(k.params, 2, 229);
    IntegratorConfig cfg;
    cfg.t1 = -1.0;
    CHECK_THROWS_AS(integrate(k, c, cfg, {}), std::invalid_argument);
    cfg.t1 = 1.0;
    cfg.method = Method::rk4_fixed;
    cfg.dt = 0.0;
    CHECK_THROWS_AS(integrate(k, c, cfg, {}), std::invalid_argument);
    cfg.method = Method::rk45_adaptive;
    cfg.rtol = 0.5;
    CHECK_THROWS_AS(integrate(k, c, cfg, {}), std::invalid_argument);
    cfg.rtol = 1e-10;
    CHECK_THROWS_AS(integrate(k, c, cfg, {5}), std::invalid_argument);

    ChainState mismatched = c;
    mismatched.params.z = 0.4;
    IntegratorConfig ok;
    ok.t1 = 1.0;
    CHECK_THROWS_AS(integrate(k, mismatched, ok, {}), std::invalid_argument);
}
