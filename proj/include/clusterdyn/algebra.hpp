#ifndef CLUSTERDYN_ALGEBRA_HPP
#define CLUSTERDYN_ALGEBRA_HPP

#include "clusterdyn/math_util.hpp"

namespace clusterdyn {

// Deformation z and contraction kappa of the one-parameter bracket family.
// kappa=1 is the deformed sl(2) bracket, kappa=0 the deformed Poincare one.
struct DeformParams {
    double z = 0.0;
    double kappa = 1.0;
};

// One degree of freedom in the S-basis: S3 = X3, S+- = exp(-z*X3/2)*X+-.
struct SiteState {
    double s3 = 0.0;
    double splus = 0.0;
    double sminus = 0.0;
};

// Throws std::invalid_argument when z or kappa is out of domain.
void check_params(const DeformParams& p);

// Antisymmetric structure matrix J[i][j] = {S_i, S_j} in the ordering
// (S3, S+, S-):
//   {S3,S+} = 2 S+,  {S3,S-} = -2 S-,
//   {S+,S-} = kappa*(1-exp(-2 z S3))/(2z) + 2 z S+ S-.
Mat3 structure_matrix(const DeformParams& p, const SiteState& s);

// Casimir I = (kappa/4)*(sinh(z s3/2)/(z/2))^2 + s+ s- exp(z s3).
double casimir(const DeformParams& p, const SiteState& s);

// Analytic gradient of casimir() with respect to (s3, s+, s-).
Vec3 casimir_grad(const DeformParams& p, const SiteState& s);

// X-basis <-> S-basis coordinate maps.
SiteState basis_from_x(const DeformParams& p, double x3, double xplus, double xminus);
Vec3 basis_to_x(const DeformParams& p, const SiteState& s);

// |Jacobi sum {{S_i,S_j},S_k} + cyclic| for the generator triple, assembled
// from structure_matrix and its analytic partials. Identically zero up to
// rounding: this bracket family satisfies the Jacobi identity.
double jacobi_residual(const DeformParams& p, const SiteState& s);

} // namespace clusterdyn

#endif
