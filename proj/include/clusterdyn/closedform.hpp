#ifndef CLUSTERDYN_CLOSEDFORM_HPP
#define CLUSTERDYN_CLOSEDFORM_HPP

#include "clusterdyn/chain.hpp"

namespace clusterdyn {

// Constants of the deformed (kappa=1) cluster motion:
//   a = 2 z e^{z d3}
//   b = 2 z d+ d- e^{z d3} - sinh(z d3)/z
//   c = d+ d- e^{z d3} / (2 z)
//   km from the conserved Casimir combination
//   omega = b^2 + 4 a c, with sqrt(omega)/2 = sqrt(C^N + z^2 (C^N)^2).
struct QCGConstants {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double km = 0.0;
    double omega = 0.0;
};

// Fitted kink constants. phi_* are the tanh offsets at t=0, t_* the kink
// center times; beta stores the initial S3^(N) for the qRS flow (0 otherwise).
struct KinkParams {
    double phi_plus = 0.0;
    double phi_minus = 0.0;
    double t_plus = 0.0;
    double t_minus = 0.0;
    double beta = 0.0;
};

struct FrequencyResult {
    enum class Branch { hyperbolic, periodic, boundary };
    double value = 0.0;
    Branch branch = Branch::boundary;
};

// cm / cnm are the Casimirs of the m-cluster and its complement.
// Requires z != 0 and kappa = 1; throws fit_error when the km combination
// degenerates to zero.
QCGConstants qcg_constants(const DeformParams& p, const Deltas& d, double cm, double cnm);

// Deformed cluster solution at time t, with init given at t=0. All sign
// regimes (hyperbolic, periodic, and imaginary tilde rescale) are handled by
// evaluating the shared tanh law over the complex plane and returning the
// real section.
ClusterVars qcg_solution(const DeformParams& p, const Deltas& d, const ClusterVars& init,
                         double cm, double cnm, double t);

// Undeformed linear solution exp(t M) init via the cubic minimal polynomial
// of M (exact in the oscillatory, hyperbolic, and critical branches).
ClusterVars cg_solution(const Deltas& d, const ClusterVars& init, double t);

// kappa=0 kink solution; S3 recovered from the conserved cluster Casimir,
// with an exact log-cosh quadrature as fallback.
ClusterVars qpg_solution(const DeformParams& p, const Deltas& d, const ClusterVars& init, double t);
KinkParams qpg_fit(const DeformParams& p, const Deltas& d, const ClusterVars& init);

// qRS kink solution. d holds the S-basis N-cluster values at t=0 and s3N0 the
// initial S3^(N); the conserved amplitudes are exp(z*s3N0/2)*(dp, dm).
ClusterVars qrs_solution(const DeformParams& p, const Deltas& d, const ClusterVars& init,
                         double s3N0, double t);
KinkParams qrs_fit(const DeformParams& p, const Deltas& d, const ClusterVars& init, double s3N0);
double qrs_s3n(const DeformParams& p, const Deltas& d, double s3N0, double t);

// Branch and rate of the deformed cluster motion: rate sqrt(C + z^2 C^2) on
// the hyperbolic side, frequency sqrt(-(C + z^2 C^2)) on the periodic side.
FrequencyResult deformed_frequency(const DeformParams& p, double cn);

} // namespace clusterdyn

#endif
