#include "clusterdyn/integrate.hpp"

#include "clusterdyn/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>

namespace clusterdyn {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double kA21 = 1.0 / 5.0;
constexpr double kA31 = 3.0 / 40.0, kA32 = 9.0 / 40.0;
constexpr double kA41 = 44.0 / 45.0, kA42 = -56.0 / 15.0, kA43 = 32.0 / 9.0;
constexpr double kA51 = 19372.0 / 6561.0, kA52 = -25360.0 / 2187.0, kA53 = 64448.0 / 6561.0,
                 kA54 = -212.0 / 729.0;
constexpr double kA61 = 9017.0 / 3168.0, kA62 = -355.0 / 33.0, kA63 = 46732.0 / 5247.0,
                 kA64 = 49.0 / 176.0, kA65 = -5103.0 / 18656.0;
constexpr double kB1 = 35.0 / 384.0, kB3 = 500.0 / 1113.0, kB4 = 125.0 / 192.0,
                 kB5 = -2187.0 / 6784.0, kB6 = 11.0 / 84.0;
// 5th-order minus embedded 4th-order weights.
constexpr double kE1 = 71.0 / 57600.0, kE3 = -71.0 / 16695.0, kE4 = 71.0 / 1920.0,
                 kE5 = -17253.0 / 339200.0, kE6 = 22.0 / 525.0, kE7 = -1.0 / 40.0;

constexpr double kC2 = 1.0 / 5.0, kC3 = 3.0 / 10.0, kC4 = 4.0 / 5.0, kC5 = 8.0 / 9.0;

bool all_finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

std::vector<double> flatten(const ChainState& c) {
    std::vector<double> y(3 * static_cast<std::size_t>(c.n()));
    for (int i = 0; i < c.n(); ++i) {
        y[3 * i + 0] = c.sites[i].s3;
        y[3 * i + 1] = c.sites[i].splus;
        y[3 * i + 2] = c.sites[i].sminus;
    }
    return y;
}

ChainState unflatten(const DeformParams& p, const std::vector<double>& y) {
    ChainState c;
    c.params = p;
    c.sites.resize(y.size() / 3);
    for (std::size_t i = 0; i < c.sites.size(); ++i)
        c.sites[i] = SiteState{y[3 * i + 0], y[3 * i + 1], y[3 * i + 2]};
    return c;
}

struct Recorder {
    const SystemKind& kind;
    Trajectory& tr;

    void operator()(double t, const std::vector<double>& y) const {
        const ChainState c = unflatten(kind.params, y);
        tr.times.push_back(t);
        tr.states.push_back(y);
        std::vector<ClusterVars> cl;
        cl.reserve(tr.tracked_clusters.size());
        for (int m : tr.tracked_clusters) cl.push_back(cluster(c, m));
        tr.clusters.push_back(std::move(cl));
        std::vector<double> inv = casimir_tower(c);
        const Deltas d = conserved_deltas(kind, c);
        inv.push_back(d.d3);
        inv.push_back(d.dp);
        inv.push_back(d.dm);
        inv.push_back(hamiltonian(kind, c));
        tr.invariants.push_back(std::move(inv));
    }
};

// Emits every grid point t0 + k*sample_every falling in (t_prev, t_new] using
// cubic Hermite interpolation, then keeps (t_new, y_new, f_new) as the left
// endpoint of the next span. sample_every <= 0 records accepted steps as-is.
class Sampler {
public:
    Sampler(double t0, double t1, double every, Recorder rec)
        : t0_(t0), t1_(t1), every_(every), rec_(rec) {}

    void start(const std::vector<double>& y0) {
        rec_(t0_, y0);
        next_index_ = 1;
    }

    void advance(double ta, const std::vector<double>& ya, const std::vector<double>& fa,
                 double tb, const std::vector<double>& yb, const std::vector<double>& fb) {
        const double tiny = 1e-12 * std::max({1.0, std::abs(tb), std::abs(t1_)});
        if (every_ > 0.0) {
            double ts = t0_ + static_cast<double>(next_index_) * every_;
            while (ts <= tb + tiny && ts < t1_ - tiny) {
                rec_(ts, hermite(ta, ya, fa, tb, yb, fb, ts));
                ts = t0_ + static_cast<double>(++next_index_) * every_;
            }
        } else if (tb < t1_ - tiny) {
            rec_(tb, yb);
        }
        if (tb >= t1_ - tiny) rec_(t1_, yb);
    }

private:
    static std::vector<double> hermite(double ta, const std::vector<double>& ya,
                                       const std::vector<double>& fa, double tb,
                                       const std::vector<double>& yb,
                                       const std::vector<double>& fb, double ts) {
        const double h = tb - ta;
        const double u = (ts - ta) / h;
        // Incremental form: constant spans with zero slope reproduce ya exactly.
        const double cd = u * u * (3.0 - 2.0 * u);
        const double c0 = h * u * (1.0 - u) * (1.0 - u);
        const double c1 = -h * u * u * (1.0 - u);
        std::vector<double> out(ya.size());
        for (std::size_t i = 0; i < ya.size(); ++i)
            out[i] = ya[i] + cd * (yb[i] - ya[i]) + c0 * fa[i] + c1 * fb[i];
        return out;
    }

    double t0_, t1_, every_;
    Recorder rec_;
    std::size_t next_index_ = 0;
};

class Field {
public:
    Field(const SystemKind& k, StepStats& stats) : kind_(k), stats_(stats) {}

    void operator()(const std::vector<double>& y, std::vector<double>& f) const {
        vector_field_flat(kind_, std::span<const double>(y), std::span<double>(f));
        ++stats_.evaluations;
    }

private:
    const SystemKind& kind_;
    StepStats& stats_;
};

void run_rk4(const Field& field, std::vector<double> y, const IntegratorConfig& cfg,
             Sampler& sampler, StepStats& stats) {
    if (!(cfg.dt > 0.0)) throw std::invalid_argument("rk4_fixed requires dt > 0");
    const std::size_t n = y.size();
    std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n), ynew(n), fnew(n);
    double t = cfg.t0;
    field(y, k1);
    while (t < cfg.t1 - 1e-12 * std::max(1.0, std::abs(cfg.t1))) {
        const double h = std::min(cfg.dt, cfg.t1 - t);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
        field(tmp, k2);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
        field(tmp, k3);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * k3[i];
        field(tmp, k4);
        for (std::size_t i = 0; i < n; ++i)
            ynew[i] = y[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        if (!all_finite(ynew)) throw numerics_error("state became non-finite during integration");
        field(ynew, fnew);
        sampler.advance(t, y, k1, t + h, ynew, fnew);
        t += h;
        y.swap(ynew);
        k1.swap(fnew);
        ++stats.accepted;
    }
}

void run_dp54(const Field& field, std::vector<double> y, const IntegratorConfig& cfg,
              Sampler& sampler, StepStats& stats) {
    const std::size_t n = y.size();
    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), ynew(n);
    double t = cfg.t0;
    const double span = cfg.t1 - cfg.t0;
    double h = cfg.dt > 0.0 ? cfg.dt : span / 1000.0;
    h = std::min(h, span);
    field(y, k1);
    const double t_eps = 1e-12 * std::max(1.0, std::abs(cfg.t1));
    std::size_t iterations = 0;
    while (t < cfg.t1 - t_eps) {
        if (++iterations > 100'000'000)
            throw numerics_error("step budget exhausted before reaching the end time");
        h = std::min(h, cfg.t1 - t);
        if (h < 1e-14 * std::max(1.0, std::abs(t)))
            throw numerics_error("adaptive step collapsed below machine resolution");

        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * kA21 * k1[i];
        field(tmp, k2);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * (kA31 * k1[i] + kA32 * k2[i]);
        field(tmp, k3);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = y[i] + h * (kA41 * k1[i] + kA42 * k2[i] + kA43 * k3[i]);
        field(tmp, k4);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = y[i] + h * (kA51 * k1[i] + kA52 * k2[i] + kA53 * k3[i] + kA54 * k4[i]);
        field(tmp, k5);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = y[i] +
                     h * (kA61 * k1[i] + kA62 * k2[i] + kA63 * k3[i] + kA64 * k4[i] + kA65 * k5[i]);
        field(tmp, k6);
        for (std::size_t i = 0; i < n; ++i)
            ynew[i] = y[i] +
                      h * (kB1 * k1[i] + kB3 * k3[i] + kB4 * k4[i] + kB5 * k5[i] + kB6 * k6[i]);
        field(ynew, k7);

        double sumsq = 0.0;
        bool finite_step = all_finite(ynew);
        if (finite_step) {
            for (std::size_t i = 0; i < n; ++i) {
                const double err = h * (kE1 * k1[i] + kE3 * k3[i] + kE4 * k4[i] + kE5 * k5[i] +
                                        kE6 * k6[i] + kE7 * k7[i]);
                const double sc = cfg.atol + cfg.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
                sumsq += (err / sc) * (err / sc);
            }
        }
        const double errnorm =
            finite_step ? std::sqrt(sumsq / static_cast<double>(n)) : std::numeric_limits<double>::infinity();

        if (errnorm <= 1.0) {
            sampler.advance(t, y, k1, t + h, ynew, k7);
            t += h;
            y.swap(ynew);
            k1.swap(k7); // first-same-as-last
            ++stats.accepted;
            stats.max_err_ratio = std::max(stats.max_err_ratio, errnorm);
            const double factor =
                errnorm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(errnorm, -0.2), 0.2, 5.0);
            h *= factor;
        } else {
            ++stats.rejected;
            if (!finite_step) {
                h *= 0.2;
                if (!(h > 0.0) || !std::isfinite(h))
                    throw numerics_error("state became non-finite during integration");
            } else {
                h *= std::clamp(0.9 * std::pow(errnorm, -0.2), 0.2, 1.0);
            }
        }
    }
}

} // namespace

Trajectory integrate(const SystemKind& k, const ChainState& c0, const IntegratorConfig& cfg,
                     const std::vector<int>& tracked_clusters) {
    check_system(k);
    check_chain(c0);
    if (k.params.z != c0.params.z || k.params.kappa != c0.params.kappa)
        throw std::invalid_argument("system and chain deformation parameters differ");
    if (!(cfg.t1 > cfg.t0)) throw std::invalid_argument("integration window requires t1 > t0");
    if (cfg.method == Method::rk45_adaptive &&
        (!(cfg.rtol > 0.0) || cfg.rtol > 1e-2 || !(cfg.atol > 0.0) || cfg.atol > 1e-2))
        throw std::invalid_argument("adaptive tolerances must lie in (0, 1e-2]");
    for (int m : tracked_clusters)
        if (m < 1 || m > c0.n()) throw std::invalid_argument("tracked cluster index out of range");

    Trajectory tr;
    tr.system = k;
    tr.n_sites = static_cast<std::size_t>(c0.n());
    tr.tracked_clusters = tracked_clusters;
    for (int m = 1; m <= c0.n(); ++m) tr.invariant_names.push_back("C_" + std::to_string(m));
    for (int m = 1; m <= c0.n() - 1; ++m)
        tr.invariant_names.push_back("Cc_" + std::to_string(c0.n() - m));
    // Under the qRS flow the N-cluster s3 drifts linearly; it is recorded
    // for the drift-rate checks but is not an invariant.
    tr.invariant_names.push_back(k.tag == SystemTag::qrs ? "s3N" : "delta3");
    tr.invariant_names.push_back("deltap");
    tr.invariant_names.push_back("deltam");
    tr.invariant_names.push_back("H");

    Recorder rec{k, tr};
    Sampler sampler(cfg.t0, cfg.t1, cfg.sample_every, rec);
    Field field(k, tr.stats);
    const std::vector<double> y0 = flatten(c0);
    sampler.start(y0);
    if (cfg.method == Method::rk4_fixed)
        run_rk4(field, y0, cfg, sampler, tr.stats);
    else
        run_dp54(field, y0, cfg, sampler, tr.stats);
    return tr;
}

std::vector<std::pair<std::string, double>> invariant_drift(const Trajectory& tr) {
    std::vector<std::pair<std::string, double>> out;
    if (tr.invariants.empty()) return out;
    const std::vector<double>& first = tr.invariants.front();
    out.reserve(first.size());
    for (std::size_t j = 0; j < first.size(); ++j) {
        if (tr.invariant_names[j] == "s3N") continue;
        double worst = 0.0;
        for (const std::vector<double>& row : tr.invariants)
            worst = std::max(worst, std::abs(row[j] - first[j]));
        out.emplace_back(tr.invariant_names[j], worst / std::max(1.0, std::abs(first[j])));
    }
    return out;
}

double measure_period(const Trajectory& tr, int m) {
    std::size_t col = tr.tracked_clusters.size();
    for (std::size_t j = 0; j < tr.tracked_clusters.size(); ++j)
        if (tr.tracked_clusters[j] == m) col = j;
    if (col == tr.tracked_clusters.size())
        throw std::invalid_argument("cluster was not tracked during integration");
    if (tr.times.size() < 4) throw numerics_error("too few samples to measure a period");

    const ClusterVars ref = tr.clusters.front()[col];
    std::vector<double> dist2(tr.times.size());
    double dmax = 0.0;
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        const ClusterVars& v = tr.clusters[i][col];
        const double a = v.s3m - ref.s3m;
        const double b = v.spm - ref.spm;
        const double c = v.smm - ref.smm;
        dist2[i] = a * a + b * b + c * c;
        dmax = std::max(dmax, dist2[i]);
    }
    if (dmax == 0.0) throw numerics_error("trajectory is stationary; no period to measure");

    bool armed = false;
    for (std::size_t i = 1; i + 1 < dist2.size(); ++i) {
        if (!armed && dist2[i] > 0.25 * dmax) armed = true;
        if (armed && dist2[i] <= dist2[i - 1] && dist2[i] <= dist2[i + 1] &&
            dist2[i] < 0.1 * dmax) {
            const double x0 = tr.times[i - 1], x1 = tr.times[i], x2 = tr.times[i + 1];
            const double y0 = dist2[i - 1], y1 = dist2[i], y2 = dist2[i + 1];
            const double num =
                (x1 - x0) * (x1 - x0) * (y1 - y2) - (x1 - x2) * (x1 - x2) * (y1 - y0);
            const double den = (x1 - x0) * (y1 - y2) - (x1 - x2) * (y1 - y0);
            const double tstar = den != 0.0 ? x1 - 0.5 * num / den : x1;
            return tstar - tr.times.front();
        }
    }
    throw numerics_error("no first return completed inside the integration window");
}

} // namespace clusterdyn
