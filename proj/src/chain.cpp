#include "clusterdyn/chain.hpp"

#include "clusterdyn/errors.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace clusterdyn {

namespace {

// Plain accumulator below the threshold, Kahan-compensated above it; the
// plain path keeps short chains bit-identical with the group-product fold.
constexpr int kCompensateAbove = 1000;

struct Acc {
    double s = 0.0;
    double c = 0.0;
    bool comp = false;

    void add(double x) {
        if (!comp) { s += x; return; }
        const double y = x - c;
        const double t = s + y;
        c = (t - s) - y;
        s = t;
    }
};

ClusterVars fold(const ChainState& c, int first, int last) {
    const bool comp = (last - first) > kCompensateAbove;
    Acc p{0.0, 0.0, comp}, sp{0.0, 0.0, comp}, sm{0.0, 0.0, comp};
    for (int i = first; i < last; ++i) {
        const double w = std::exp(-c.params.z * p.s);
        sp.add(w * c.sites[i].splus);
        sm.add(w * c.sites[i].sminus);
        p.add(c.sites[i].s3);
    }
    return ClusterVars{last - first, p.s, sp.s, sm.s};
}

void check_m(const ChainState& c, int m, int hi) {
    if (m < 1 || m > hi)
        throw std::invalid_argument("cluster size m=" + std::to_string(m) +
                                    " out of range [1," + std::to_string(hi) +
                                    "] for a chain of " + std::to_string(c.n()) + " sites");
}

} // namespace

void check_chain(const ChainState& c) {
    check_params(c.params);
    if (c.sites.empty())
        throw std::invalid_argument("chain must have at least one site");
    for (const SiteState& s : c.sites)
        if (!std::isfinite(s.s3) || !std::isfinite(s.splus) || !std::isfinite(s.sminus))
            throw std::invalid_argument("chain contains a non-finite site coordinate");
}

ClusterVars cluster(const ChainState& c, int m) {
    check_chain(c);
    check_m(c, m, c.n());
    return fold(c, 0, m);
}

ClusterVars complementary_cluster(const ChainState& c, int m) {
    check_chain(c);
    check_m(c, m, c.n() - 1);
    return fold(c, m, c.n());
}

Deltas deltas(const ChainState& c) {
    const ClusterVars v = cluster(c, c.n());
    return Deltas{v.s3m, v.spm, v.smm};
}

std::vector<Mat3> cluster_jacobian(const ChainState& c, int m) {
    check_chain(c);
    check_m(c, m, c.n());
    const double z = c.params.z;
    std::vector<double> w(m);
    double p = 0.0;
    for (int i = 0; i < m; ++i) {
        w[i] = std::exp(-z * p);
        p += c.sites[i].s3;
    }
    // Tail sums T+-_k = sum_{i>k} w_i s+-_i: the dependence of s+-m on s3_k
    // runs through every later prefix.
    std::vector<double> tp(m), tm(m);
    double ap = 0.0, am = 0.0;
    for (int k = m - 1; k >= 0; --k) {
        tp[k] = ap;
        tm[k] = am;
        ap += w[k] * c.sites[k].splus;
        am += w[k] * c.sites[k].sminus;
    }
    std::vector<Mat3> blocks(c.n(), Mat3{});
    for (int k = 0; k < m; ++k) {
        blocks[k][0][0] = 1.0;
        blocks[k][1][0] = -z * tp[k];
        blocks[k][1][1] = w[k];
        blocks[k][2][0] = -z * tm[k];
        blocks[k][2][2] = w[k];
    }
    return blocks;
}

std::vector<double> casimir_tower(const ChainState& c) {
    check_chain(c);
    const int n = c.n();
    std::vector<double> t;
    t.reserve(2 * n - 1);
    for (int m = 1; m <= n; ++m)
        t.push_back(casimir(c.params, as_site(cluster(c, m))));
    for (int m = 1; m <= n - 1; ++m)
        t.push_back(casimir(c.params, as_site(complementary_cluster(c, m))));
    return t;
}

ChainState chain_on_casimir_surface(const DeformParams& p, int n, std::uint64_t seed,
                                    double target) {
    check_params(p);
    if (n < 1) throw std::invalid_argument("chain_on_casimir_surface: n must be >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> d3r(-0.5, 0.5);
    std::uniform_real_distribution<double> dpr(0.5, 1.5);
    std::uniform_real_distribution<double> s3r(-0.4, 0.4);
    std::uniform_real_distribution<double> spr(0.2, 0.8);
    const double d3 = d3r(rng);
    const double dp = dpr(rng);
    const double u = sinhc_z(p.z, 0.5 * d3);
    const double dm = (target - p.kappa * u * u) * std::exp(-p.z * d3) / dp;
    ChainState c;
    c.params = p;
    for (int i = 0; i + 1 < n; ++i) {
        const double a = s3r(rng), b = spr(rng), e = spr(rng);
        c.sites.push_back(SiteState{a, b, e});
    }
    double pref = 0.0, sp = 0.0, sm = 0.0;
    for (const SiteState& s : c.sites) {
        const double w = std::exp(-p.z * pref);
        sp += w * s.splus;
        sm += w * s.sminus;
        pref += s.s3;
    }
    const double back = std::exp(p.z * pref);
    c.sites.push_back(SiteState{d3 - pref, (dp - sp) * back, (dm - sm) * back});
    return c;
}

} // namespace clusterdyn
