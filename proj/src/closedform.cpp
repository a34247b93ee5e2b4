#include "clusterdyn/closedform.hpp"

#include "clusterdyn/errors.hpp"
#include "clusterdyn/systems.hpp"

#include <cfloat>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace clusterdyn {

namespace {

using cplx = std::complex<double>;

bool finite(const cplx& v) {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
}

// Residual imaginary parts of the complex-continued solution are rounding
// noise; anything larger means the branch logic went wrong.
double real_section(const cplx& v, const char* what) {
    if (!finite(v) || std::abs(v.imag()) > 1e-6 * (1.0 + std::abs(v.real())))
        throw numerics_error(std::string("closed-form solution left the real section in ") + what);
    return v.real();
}

void require_deformed(const DeformParams& p) {
    check_params(p);
    if (std::abs(p.z) < kSmallZ)
        throw std::domain_error("undeformed limit z=0: use the linear cluster solution");
}

void require_amplitudes(const Deltas& d) {
    if (d.dp == 0.0 || d.dm == 0.0)
        throw fit_error("N-cluster amplitude d+ or d- vanishes (separatrix data)");
}

} // namespace

QCGConstants qcg_constants(const DeformParams& p, const Deltas& d, double cm, double cnm) {
    require_deformed(p);
    if (p.kappa != 1.0)
        throw std::invalid_argument("deformed cluster constants are defined on the kappa=1 bracket");
    const double z = p.z;
    const double e3 = std::exp(z * d.d3);
    QCGConstants k;
    k.a = 2.0 * z * e3;
    k.b = 2.0 * z * d.dp * d.dm * e3 - sinhc_z(z, d.d3);
    k.c = d.dp * d.dm * e3 / (2.0 * z);
    const double kub = cm - std::exp(-z * d.d3) * cnm - std::expm1(-z * d.d3) / (2.0 * z * z);
    if (kub == 0.0)
        throw fit_error("degenerate constant: the Casimir combination defining km vanishes");
    k.km = 1.0 / (kub * kub);
    k.omega = k.b * k.b + 4.0 * k.a * k.c;
    return k;
}

ClusterVars qcg_solution(const DeformParams& p, const Deltas& d, const ClusterVars& init,
                         double cm, double cnm, double t) {
    const QCGConstants k = qcg_constants(p, d, cm, cnm);
    require_amplitudes(d);
    if (k.omega == 0.0)
        throw fit_error("omega = 0: initial data on the branch boundary");

    const double boa = k.b / k.a;
    const double stp0 = init.spm * d.dm;
    const double stm0 = init.smm * d.dp;
    const double yp0 = stp0 + stm0 - boa;
    const double ym0 = stp0 - stm0;

    // Rescale of the symmetric combination; imaginary on part of phase space,
    // in which case the shift constants below come out complex and the tanh
    // law is evaluated as its analytic continuation.
    const double lambda = 1.0 + 4.0 * k.c * k.km / k.a;
    const cplx mu = std::sqrt(cplx(lambda, 0.0));
    if (mu == 0.0)
        throw fit_error("degenerate tilde rescale (1 + 4 c km / a = 0)");
    const cplx sq = std::sqrt(cplx(k.omega, 0.0));

    const cplx zp0 = (k.a / k.omega) * mu * yp0;
    const double zm0 = (k.a / k.omega) * ym0;
    const cplx wp0 = zp0 + zm0;
    const cplx wm0 = zp0 - zm0;

    // W+ = +tanh(th+)/sq, W- = -tanh(th-)/sq with th(t) = th0 + sq*t/2.
    const cplx thp0 = std::atanh(sq * wp0);
    const cplx thm0 = std::atanh(-(sq * wm0));
    if (!finite(thp0) || !finite(thm0))
        throw fit_error("initial data on the separatrix of the tanh law");

    const cplx thp = thp0 + 0.5 * sq * t;
    const cplx thm = thm0 + 0.5 * sq * t;
    const cplx wp = std::tanh(thp) / sq;
    const cplx wm = -std::tanh(thm) / sq;

    const cplx zp = 0.5 * (wp + wm);
    const cplx zm = 0.5 * (wp - wm);
    const cplx yp = (k.omega / k.a) * zp / mu;
    const cplx ym = (k.omega / k.a) * zm;

    const cplx stp = 0.5 * (yp + boa + ym);
    const cplx stm = 0.5 * (yp + boa - ym);
    const cplx st3 = k.km * yp * yp;

    const double st3r = real_section(st3, "e^{-2 z S3}");
    if (!(st3r > 0.0))
        throw fit_error("cluster S3 left the representable domain (e^{-2 z S3} <= 0)");
    ClusterVars out;
    out.m = init.m;
    out.s3m = -std::log(st3r) / (2.0 * p.z);
    out.spm = real_section(stp, "S+") / d.dm;
    out.smm = real_section(stm, "S-") / d.dp;
    return out;
}

ClusterVars cg_solution(const Deltas& d, const ClusterVars& init, double t) {
    const Mat3 m = linear_matrix_cg(d);
    const double cn = 0.25 * d.d3 * d.d3 + d.dp * d.dm;
    const double w2 = 4.0 * cn; // M^3 = w2 * M
    const double x = w2 * t * t;
    double f, g; // exp(tM) = I + f M + g M^2
    if (std::abs(x) < 1e-8) {
        f = t * (1.0 + x / 6.0 + x * x / 120.0);
        g = t * t * (0.5 + x / 24.0 + x * x / 720.0);
    } else if (w2 > 0.0) {
        const double w = std::sqrt(w2);
        f = std::sinh(w * t) / w;
        g = (std::cosh(w * t) - 1.0) / w2;
    } else {
        const double w = std::sqrt(-w2);
        f = std::sin(w * t) / w;
        g = (1.0 - std::cos(w * t)) / (-w2);
    }
    const Vec3 v{init.s3m, init.spm, init.smm};
    const Vec3 mv = mat3_apply(m, v);
    const Vec3 mmv = mat3_apply(m, mv);
    return ClusterVars{init.m, v[0] + f * mv[0] + g * mmv[0], v[1] + f * mv[1] + g * mmv[1],
                       v[2] + f * mv[2] + g * mmv[2]};
}

namespace {

struct QPGFit {
    double boa, rate, thp0, thm0;
};

QPGFit qpg_fit_impl(const DeformParams& p, const Deltas& d, const ClusterVars& init) {
    require_deformed(p);
    if (p.kappa != 0.0)
        throw std::invalid_argument("kink solution is defined on the kappa=0 bracket");
    require_amplitudes(d);
    QPGFit f;
    f.boa = d.dp * d.dm;
    const double b = 2.0 * p.z * f.boa * std::exp(p.z * d.d3);
    if (b == 0.0)
        throw fit_error("zero N-cluster Casimir: the kink rate vanishes");
    const double up = 2.0 * (init.spm * d.dm) / f.boa - 1.0;
    const double um = 1.0 - 2.0 * (init.smm * d.dp) / f.boa;
    if (std::abs(up) >= 1.0 || std::abs(um) >= 1.0)
        throw fit_error("initial data off the kink branch (tanh range exceeded)");
    f.rate = 0.5 * b;
    f.thp0 = std::atanh(up);
    f.thm0 = std::atanh(um);
    return f;
}

} // namespace

KinkParams qpg_fit(const DeformParams& p, const Deltas& d, const ClusterVars& init) {
    const QPGFit f = qpg_fit_impl(p, d, init);
    return KinkParams{f.thp0, f.thm0, -f.thp0 / f.rate, -f.thm0 / f.rate, 0.0};
}

ClusterVars qpg_solution(const DeformParams& p, const Deltas& d, const ClusterVars& init, double t) {
    const QPGFit f = qpg_fit_impl(p, d, init);
    const double thp = f.thp0 + f.rate * t;
    const double thm = f.thm0 + f.rate * t;
    ClusterVars out;
    out.m = init.m;
    out.spm = 0.5 * f.boa * (1.0 + std::tanh(thp)) / d.dm;
    out.smm = 0.5 * f.boa * (1.0 - std::tanh(thm)) / d.dp;
    // S3 from the conserved cluster Casimir; exact log-cosh quadrature of
    // dS3/dt when the product S+S- is not usable for the logarithm.
    const double cmval = casimir(p, as_site(init));
    const double prod = out.spm * out.smm;
    const double ratio = cmval / prod;
    if (prod != 0.0 && ratio > 0.0 && std::isfinite(ratio)) {
        out.s3m = std::log(ratio) / p.z;
    } else {
        out.s3m = init.s3m + (log_cosh(thp) - log_cosh(f.thp0) + log_cosh(thm) - log_cosh(f.thm0)) / p.z;
    }
    return out;
}

namespace {

struct QRSFit {
    double dxp, dxm, thp0, thm0;
};

QRSFit qrs_fit_impl(const DeformParams& p, const Deltas& d, const ClusterVars& init, double s3N0) {
    check_params(p);
    if (p.kappa != 0.0)
        throw std::invalid_argument("qRS solution is defined on the kappa=0 bracket");
    require_amplitudes(d);
    const double w0 = std::exp(0.5 * p.z * s3N0);
    QRSFit f;
    f.dxp = w0 * d.dp;
    f.dxm = w0 * d.dm;
    const double up = 2.0 * (init.spm * w0) / f.dxp - 1.0;
    const double um = 2.0 * (init.smm * w0) / f.dxm - 1.0;
    if (std::abs(up) >= 1.0 || std::abs(um) >= 1.0)
        throw fit_error("initial data off the kink branch (tanh range exceeded)");
    f.thp0 = std::atanh(up);
    f.thm0 = std::atanh(um);
    return f;
}

} // namespace

KinkParams qrs_fit(const DeformParams& p, const Deltas& d, const ClusterVars& init, double s3N0) {
    const QRSFit f = qrs_fit_impl(p, d, init, s3N0);
    const double rp = p.z * f.dxp;
    const double rm = p.z * f.dxm;
    KinkParams k{f.thp0, f.thm0, 0.0, 0.0, s3N0};
    if (rp != 0.0) k.t_plus = -f.thp0 / rp;
    if (rm != 0.0) k.t_minus = f.thm0 / rm;
    return k;
}

double qrs_s3n(const DeformParams& p, const Deltas& d, double s3N0, double t) {
    check_params(p);
    const double w0 = std::exp(0.5 * p.z * s3N0);
    return s3N0 + 2.0 * (w0 * d.dp - w0 * d.dm) * t;
}

ClusterVars qrs_solution(const DeformParams& p, const Deltas& d, const ClusterVars& init,
                         double s3N0, double t) {
    if (std::abs(p.z) < kSmallZ) {
        // Undeformed limit: S+- frozen, S3 drifts linearly.
        check_params(p);
        if (p.kappa != 0.0)
            throw std::invalid_argument("qRS solution is defined on the kappa=0 bracket");
        return ClusterVars{init.m, init.s3m + 2.0 * (init.spm - init.smm) * t, init.spm, init.smm};
    }
    const QRSFit f = qrs_fit_impl(p, d, init, s3N0);
    const double rp = p.z * f.dxp;
    const double rm = p.z * f.dxm;
    const double thp = f.thp0 + rp * t;
    const double thm = f.thm0 - rm * t; // decreasing kink for the lowering component
    const double yp = 0.5 * f.dxp * (1.0 + std::tanh(thp));
    const double ym = 0.5 * f.dxm * (1.0 + std::tanh(thm));
    const double s3n = s3N0 + 2.0 * (f.dxp - f.dxm) * t;
    const double w = std::exp(0.5 * p.z * s3n);
    ClusterVars out;
    out.m = init.m;
    out.spm = yp / w;
    out.smm = ym / w;
    const double cmval = casimir(p, as_site(init));
    const double prod = out.spm * out.smm;
    const double ratio = cmval / prod;
    if (prod != 0.0 && ratio > 0.0 && std::isfinite(ratio)) {
        out.s3m = std::log(ratio) / p.z;
    } else {
        out.s3m = init.s3m + (f.dxp - f.dxm) * t +
                  (log_cosh(thp) - log_cosh(f.thp0) + log_cosh(thm) - log_cosh(f.thm0)) / p.z;
    }
    return out;
}

FrequencyResult deformed_frequency(const DeformParams& p, double cn) {
    check_params(p);
    const double zz = p.z * p.z;
    const double disc = cn + zz * cn * cn;
    const double scale = std::abs(cn) + zz * cn * cn;
    if (std::abs(disc) <= 4.0 * DBL_EPSILON * scale)
        return FrequencyResult{0.0, FrequencyResult::Branch::boundary};
    if (disc > 0.0)
        return FrequencyResult{std::sqrt(disc), FrequencyResult::Branch::hyperbolic};
    return FrequencyResult{std::sqrt(-disc), FrequencyResult::Branch::periodic};
}

} // namespace clusterdyn
