#include "clusterdyn/algebra.hpp"

#include "clusterdyn/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace clusterdyn {

void check_params(const DeformParams& p) {
    if (!std::isfinite(p.z))
        throw std::invalid_argument("deformation z must be finite");
    if (!std::isfinite(p.kappa) || p.kappa < 0.0)
        throw std::invalid_argument("contraction kappa must be finite and >= 0");
}

Mat3 structure_matrix(const DeformParams& p, const SiteState& s) {
    check_params(p);
    Mat3 j{};
    j[0][1] = 2.0 * s.splus;
    j[0][2] = -2.0 * s.sminus;
    j[1][2] = p.kappa * expm1_ratio(p.z, s.s3) + 2.0 * p.z * s.splus * s.sminus;
    j[1][0] = -j[0][1];
    j[2][0] = -j[0][2];
    j[2][1] = -j[1][2];
    return j;
}

double casimir(const DeformParams& p, const SiteState& s) {
    check_params(p);
    const double u = sinhc_z(0.5 * p.z, s.s3); // sinh(z s3/2)/(z/2)
    return 0.25 * p.kappa * u * u + s.splus * s.sminus * std::exp(p.z * s.s3);
}

Vec3 casimir_grad(const DeformParams& p, const SiteState& s) {
    check_params(p);
    const double ez = std::exp(p.z * s.s3);
    Vec3 g{};
    g[0] = 0.5 * p.kappa * sinhc_z(p.z, s.s3) + p.z * s.splus * s.sminus * ez;
    g[1] = s.sminus * ez;
    g[2] = s.splus * ez;
    return g;
}

SiteState basis_from_x(const DeformParams& p, double x3, double xplus, double xminus) {
    check_params(p);
    const double w = std::exp(-0.5 * p.z * x3);
    return SiteState{x3, w * xplus, w * xminus};
}

Vec3 basis_to_x(const DeformParams& p, const SiteState& s) {
    check_params(p);
    const double w = std::exp(0.5 * p.z * s.s3);
    return Vec3{s.s3, w * s.splus, w * s.sminus};
}

double jacobi_residual(const DeformParams& p, const SiteState& s) {
    const Mat3 j = structure_matrix(p, s);
    // Analytic partials of the three independent entries wrt (s3, s+, s-).
    const Vec3 dj01{0.0, 2.0, 0.0};
    const Vec3 dj12{p.kappa * std::exp(-2.0 * p.z * s.s3),
                    2.0 * p.z * s.sminus, 2.0 * p.z * s.splus};
    const Vec3 dj20{0.0, 0.0, 2.0}; // J[2][0] = 2 s-
    double sum = 0.0;
    for (int l = 0; l < 3; ++l) {
        sum += dj01[l] * j[l][2]; // {{S3,S+}, S-}
        sum += dj12[l] * j[l][0]; // {{S+,S-}, S3}
        sum += dj20[l] * j[l][1]; // {{S-,S3}, S+}
    }
    return std::abs(sum);
}

} // namespace clusterdyn
