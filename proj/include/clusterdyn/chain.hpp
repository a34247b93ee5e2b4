#ifndef CLUSTERDYN_CHAIN_HPP
#define CLUSTERDYN_CHAIN_HPP

#include "clusterdyn/algebra.hpp"

#include <cstdint>
#include <vector>

namespace clusterdyn {

// N independent copies of the one-site algebra.
struct ChainState {
    DeformParams params;
    std::vector<SiteState> sites;

    int n() const { return static_cast<int>(sites.size()); }
};

// Collective variables of the first m sites (m-cluster).
struct ClusterVars {
    int m = 0;
    double s3m = 0.0;
    double spm = 0.0;
    double smm = 0.0;
};

// N-cluster values, constant along every Gaudin flow.
struct Deltas {
    double d3 = 0.0;
    double dp = 0.0;
    double dm = 0.0;
};

inline SiteState as_site(const ClusterVars& v) { return SiteState{v.s3m, v.spm, v.smm}; }

void check_chain(const ChainState& c);

// m-cluster variables:
//   S3^(m) = sum_{i<=m} s3_i,
//   S+-^(m) = sum_{i<=m} exp(-z*P_i) s+-_i,  P_i = sum_{j<i} s3_j.
// m in [1, N].
ClusterVars cluster(const ChainState& c, int m);

// Same map evaluated on sites m+1..N with prefixes restarted. m in [1, N-1].
ClusterVars complementary_cluster(const ChainState& c, int m);

// cluster(c, N) rebadged.
Deltas deltas(const ChainState& c);

// Per-site 3x3 blocks of d(cluster(c,m))/d(site_k); blocks for k >= m are zero.
// Block layout: row = cluster component (s3m, spm, smm), col = site coordinate.
std::vector<Mat3> cluster_jacobian(const ChainState& c, int m);

// [C^(1) .. C^(N), C^(N-1)_comp .. C^(1)_comp]: the Casimirs of every left
// cluster followed by those of every complementary cluster (split m=1..N-1).
// Size 2N-1.
std::vector<double> casimir_tower(const ChainState& c);

// Random chain whose N-cluster Casimir equals target (up to rounding): the
// first N-1 sites are drawn uniformly, the last site absorbs a drawn
// (delta3, delta+) with delta- solved from the Casimir.
ChainState chain_on_casimir_surface(const DeformParams& p, int n, std::uint64_t seed,
                                    double target);

} // namespace clusterdyn

#endif
