#ifndef CLUSTERDYN_SYSTEMS_HPP
#define CLUSTERDYN_SYSTEMS_HPP

#include "clusterdyn/chain.hpp"

#include <span>
#include <vector>

namespace clusterdyn {

enum class SystemTag {
    gaudin_kappa, // H = Casimir of the N-cluster (kappa interpolates the family)
    qrs           // H = (S+^N + S-^N) exp(z S3^N / 2), requires kappa = 0
};

struct SystemKind {
    SystemTag tag = SystemTag::gaudin_kappa;
    DeformParams params;
};

void check_system(const SystemKind& k);

double hamiltonian(const SystemKind& k, const ChainState& c);

// Partials of the Hamiltonian with respect to the N-cluster variables.
Vec3 energy_cluster_grad(const SystemKind& k, const ClusterVars& v);

// Exact gradient wrt all 3N site coordinates, layout (s3_1, s+_1, s-_1, s3_2, ...).
std::vector<double> grad_hamiltonian(const SystemKind& k, const ChainState& c);

// Site-wise Hamiltonian vector field: block i is J(site_i) * grad_i.
std::vector<double> vector_field(const SystemKind& k, const ChainState& c);

// Flat-array variant used by the integrators; y and f have size 3N.
void vector_field_flat(const SystemKind& k, std::span<const double> y, std::span<double> f);

// Closed m-cluster equations of motion for the Gaudin family
// (same function of (cluster state, deltas) for every m):
//   dS3 = 2 (S+ d- - S- d+) e^{z d3}
//   dS+ = 2z d- e^{z d3} S+ (d+ - S+) - k*(sinh(z d3)/z) S+
//         + k*d+ e^{z d3} (1 - e^{-2 z S3})/(2z)
//   dS- = mirrored with opposite signs.
Vec3 cluster_rhs_gaudin(const DeformParams& p, const ClusterVars& v, const Deltas& d);

// Closed m-cluster equations for the qRS flow. d holds the S-basis N-cluster
// values at the same instant as v and s3N; the conserved combinations are
// exp(z*s3N/2)*(dp, dm).
Vec3 cluster_rhs_qrs(const DeformParams& p, const ClusterVars& v, double s3N, const Deltas& d);

// Linear generator of the undeformed (z=0, kappa=1) cluster flow:
// dS = M S with eigenvalues {0, +-2 sqrt(C^N)}, C^N = d3^2/4 + d+ d-.
Mat3 linear_matrix_cg(const Deltas& d);

// Invariants tracked along a flow. For Gaudin these are the S-basis deltas;
// for qRS, (S3^N, e^{z S3N/2} S+^N, e^{z S3N/2} S-^N) whose +- components are
// the conserved kink amplitudes (S3^N itself drifts linearly).
Deltas conserved_deltas(const SystemKind& k, const ChainState& c);

} // namespace clusterdyn

#endif
