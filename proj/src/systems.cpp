#include "clusterdyn/systems.hpp"

#include "clusterdyn/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace clusterdyn {

namespace {

void check_pair(const SystemKind& k, const ChainState& c) {
    check_system(k);
    check_chain(c);
    if (k.params.z != c.params.z || k.params.kappa != c.params.kappa)
        throw std::invalid_argument("system and chain carry different deformation parameters");
}

Vec3 energy_grad_at(const SystemKind& k, double s3N, double spN, double smN) {
    if (k.tag == SystemTag::gaudin_kappa)
        return casimir_grad(k.params, SiteState{s3N, spN, smN});
    const double w = std::exp(0.5 * k.params.z * s3N);
    return Vec3{0.5 * k.params.z * (spN + smN) * w, w, w};
}

// Shared O(N) pass: site gradient blocks via prefix weights and tail sums.
void grad_flat(const SystemKind& k, std::span<const double> y, std::span<double> g) {
    const int n = static_cast<int>(y.size()) / 3;
    const double z = k.params.z;
    std::vector<double> w(n);
    double p = 0.0, spN = 0.0, smN = 0.0;
    for (int i = 0; i < n; ++i) {
        w[i] = std::exp(-z * p);
        spN += w[i] * y[3 * i + 1];
        smN += w[i] * y[3 * i + 2];
        p += y[3 * i];
    }
    const Vec3 gc = energy_grad_at(k, p, spN, smN);
    double ap = 0.0, am = 0.0;
    for (int i = n - 1; i >= 0; --i) {
        g[3 * i] = gc[0] - z * (ap * gc[1] + am * gc[2]);
        g[3 * i + 1] = gc[1] * w[i];
        g[3 * i + 2] = gc[2] * w[i];
        ap += w[i] * y[3 * i + 1];
        am += w[i] * y[3 * i + 2];
    }
}

} // namespace

void check_system(const SystemKind& k) {
    check_params(k.params);
    if (k.tag == SystemTag::qrs && k.params.kappa != 0.0)
        throw std::invalid_argument("the qRS Hamiltonian is defined on the kappa=0 bracket");
}

double hamiltonian(const SystemKind& k, const ChainState& c) {
    check_pair(k, c);
    const ClusterVars v = cluster(c, c.n());
    if (k.tag == SystemTag::gaudin_kappa)
        return casimir(k.params, as_site(v));
    return (v.spm + v.smm) * std::exp(0.5 * k.params.z * v.s3m);
}

Vec3 energy_cluster_grad(const SystemKind& k, const ClusterVars& v) {
    check_system(k);
    return energy_grad_at(k, v.s3m, v.spm, v.smm);
}

std::vector<double> grad_hamiltonian(const SystemKind& k, const ChainState& c) {
    check_pair(k, c);
    std::vector<double> y(3 * c.n()), g(3 * c.n());
    for (int i = 0; i < c.n(); ++i) {
        y[3 * i] = c.sites[i].s3;
        y[3 * i + 1] = c.sites[i].splus;
        y[3 * i + 2] = c.sites[i].sminus;
    }
    grad_flat(k, y, g);
    return g;
}

void vector_field_flat(const SystemKind& k, std::span<const double> y, std::span<double> f) {
    const int n = static_cast<int>(y.size()) / 3;
    const double z = k.params.z;
    const double kap = k.params.kappa;
    std::vector<double> g(3 * n);
    grad_flat(k, y, g);
    for (int i = 0; i < n; ++i) {
        const double s3 = y[3 * i], sp = y[3 * i + 1], sm = y[3 * i + 2];
        const double j01 = 2.0 * sp;
        const double j02 = -2.0 * sm;
        const double j12 = kap * expm1_ratio(z, s3) + 2.0 * z * sp * sm;
        const double g0 = g[3 * i], g1 = g[3 * i + 1], g2 = g[3 * i + 2];
        f[3 * i] = j01 * g1 + j02 * g2;
        f[3 * i + 1] = -j01 * g0 + j12 * g2;
        f[3 * i + 2] = -j02 * g0 - j12 * g1;
    }
}

std::vector<double> vector_field(const SystemKind& k, const ChainState& c) {
    check_pair(k, c);
    std::vector<double> y(3 * c.n()), f(3 * c.n());
    for (int i = 0; i < c.n(); ++i) {
        y[3 * i] = c.sites[i].s3;
        y[3 * i + 1] = c.sites[i].splus;
        y[3 * i + 2] = c.sites[i].sminus;
    }
    vector_field_flat(k, y, f);
    return f;
}

Vec3 cluster_rhs_gaudin(const DeformParams& p, const ClusterVars& v, const Deltas& d) {
    check_params(p);
    const double z = p.z, kap = p.kappa;
    const double e3 = std::exp(z * d.d3);
    const double sig = sinhc_z(z, d.d3);
    const double r = expm1_ratio(z, v.s3m); // (1 - e^{-2 z S3})/(2z)
    Vec3 f{};
    f[0] = 2.0 * (v.spm * d.dm - v.smm * d.dp) * e3;
    f[1] = 2.0 * z * d.dm * e3 * v.spm * (d.dp - v.spm) - kap * sig * v.spm +
           kap * d.dp * e3 * r;
    f[2] = -2.0 * z * d.dp * e3 * v.smm * (d.dm - v.smm) + kap * sig * v.smm -
           kap * d.dm * e3 * r;
    return f;
}

Vec3 cluster_rhs_qrs(const DeformParams& p, const ClusterVars& v, double s3N, const Deltas& d) {
    check_params(p);
    const double z = p.z;
    const double w = std::exp(0.5 * z * s3N);
    const double sum = w * d.dp + w * d.dm; // conserved kink amplitudes, summed
    Vec3 f{};
    f[0] = 2.0 * (v.spm - v.smm) * w;
    f[1] = z * v.spm * (sum - 2.0 * v.spm * w);
    f[2] = -z * v.smm * (sum - 2.0 * v.smm * w);
    return f;
}

Mat3 linear_matrix_cg(const Deltas& d) {
    Mat3 m{};
    m[0][1] = 2.0 * d.dm;
    m[0][2] = -2.0 * d.dp;
    m[1][0] = d.dp;
    m[1][1] = -d.d3;
    m[2][0] = -d.dm;
    m[2][2] = d.d3;
    return m;
}

Deltas conserved_deltas(const SystemKind& k, const ChainState& c) {
    check_pair(k, c);
    const Deltas d = deltas(c);
    if (k.tag == SystemTag::gaudin_kappa)
        return d;
    const double w = std::exp(0.5 * k.params.z * d.d3);
    return Deltas{d.d3, w * d.dp, w * d.dm};
}

} // namespace clusterdyn
