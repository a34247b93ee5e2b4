#include "clusterdyn/io.hpp"

#include "clusterdyn/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace clusterdyn {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string trajectory_csv(const Trajectory& tr) {
    std::ostringstream out;
    out << "t";
    for (int m : tr.tracked_clusters) out << ",s3m_" << m << ",sp_" << m << ",sm_" << m;
    for (int m : tr.tracked_clusters) out << ",C_" << m;
    out << ",delta3,deltap,deltam,H\n";
    const std::size_t n = tr.n_sites;
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        out << format_double(tr.times[i]);
        for (std::size_t j = 0; j < tr.tracked_clusters.size(); ++j) {
            const ClusterVars& v = tr.clusters[i][j];
            out << ',' << format_double(v.s3m) << ',' << format_double(v.spm) << ','
                << format_double(v.smm);
        }
        const std::vector<double>& inv = tr.invariants[i];
        for (int m : tr.tracked_clusters) out << ',' << format_double(inv[static_cast<std::size_t>(m - 1)]);
        // delta3, deltap, deltam sit after the 2N-1 tower entries, H last.
        const std::size_t base = 2 * n - 1;
        out << ',' << format_double(inv[base]) << ',' << format_double(inv[base + 1]) << ','
            << format_double(inv[base + 2]) << ',' << format_double(inv[base + 3]) << '\n';
    }
    return out.str();
}

nlohmann::ordered_json trajectory_json(const Trajectory& tr,
                                       const nlohmann::ordered_json& config_echo) {
    nlohmann::ordered_json j;
    j["config"] = config_echo;
    j["times"] = tr.times;
    nlohmann::ordered_json sites = nlohmann::ordered_json::array();
    for (const std::vector<double>& y : tr.states) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < tr.n_sites; ++i)
            row.push_back({y[3 * i], y[3 * i + 1], y[3 * i + 2]});
        sites.push_back(std::move(row));
    }
    j["sites"] = std::move(sites);
    nlohmann::ordered_json clusters;
    clusters["tracked"] = tr.tracked_clusters;
    nlohmann::ordered_json values = nlohmann::ordered_json::array();
    for (const std::vector<ClusterVars>& row : tr.clusters) {
        nlohmann::ordered_json r = nlohmann::ordered_json::array();
        for (const ClusterVars& v : row) r.push_back({v.s3m, v.spm, v.smm});
        values.push_back(std::move(r));
    }
    clusters["values"] = std::move(values);
    j["clusters"] = std::move(clusters);
    nlohmann::ordered_json inv;
    inv["names"] = tr.invariant_names;
    inv["values"] = tr.invariants;
    j["invariants"] = std::move(inv);
    return j;
}

Trajectory trajectory_from_json(const nlohmann::ordered_json& j) {
    Trajectory tr;
    const nlohmann::ordered_json& cfg = j.at("config");
    tr.system.params.z = cfg.at("z").get<double>();
    tr.system.params.kappa = cfg.at("kappa").get<double>();
    tr.system.tag =
        cfg.at("system").get<std::string>() == "qrs" ? SystemTag::qrs : SystemTag::gaudin_kappa;
    tr.times = j.at("times").get<std::vector<double>>();
    for (const auto& row : j.at("sites")) {
        std::vector<double> y;
        y.reserve(row.size() * 3);
        for (const auto& site : row)
            for (const auto& v : site) y.push_back(v.get<double>());
        tr.n_sites = row.size();
        tr.states.push_back(std::move(y));
    }
    tr.tracked_clusters = j.at("clusters").at("tracked").get<std::vector<int>>();
    for (const auto& row : j.at("clusters").at("values")) {
        std::vector<ClusterVars> r;
        std::size_t k = 0;
        for (const auto& v : row) {
            r.push_back(ClusterVars{tr.tracked_clusters[k], v.at(0).get<double>(),
                                    v.at(1).get<double>(), v.at(2).get<double>()});
            ++k;
        }
        tr.clusters.push_back(std::move(r));
    }
    tr.invariant_names = j.at("invariants").at("names").get<std::vector<std::string>>();
    tr.invariants = j.at("invariants").at("values").get<std::vector<std::vector<double>>>();
    return tr;
}

namespace {

struct Series {
    const char* label;
    const char* color;
    std::vector<double> y;
};

double nice_tick(double span) {
    const double raw = span / 6.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double mult : {1.0, 2.0, 5.0}) {
        if (raw <= mult * mag) return mult * mag;
    }
    return 10.0 * mag;
}

} // namespace

std::string cluster_svg(const Trajectory& tr, std::size_t cluster_index) {
    if (cluster_index >= tr.tracked_clusters.size())
        throw std::invalid_argument("cluster index out of range for SVG output");
    if (tr.times.size() < 2) throw std::invalid_argument("too few samples for SVG output");
    const int m = tr.tracked_clusters[cluster_index];
    Series series[3] = {{"s3", "#1f77b4", {}}, {"s+", "#2ca02c", {}}, {"s-", "#d62728", {}}};
    for (const std::vector<ClusterVars>& row : tr.clusters) {
        const ClusterVars& v = row[cluster_index];
        series[0].y.push_back(v.s3m);
        series[1].y.push_back(v.spm);
        series[2].y.push_back(v.smm);
    }
    double ymin = series[0].y[0], ymax = ymin;
    for (const Series& s : series)
        for (double v : s.y) {
            ymin = std::min(ymin, v);
            ymax = std::max(ymax, v);
        }
    if (ymax == ymin) {
        ymax += 0.5;
        ymin -= 0.5;
    }
    const double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;
    const double t0 = tr.times.front(), t1 = tr.times.back();

    const double width = 900, height = 480;
    const double left = 70, right = 20, top = 40, bottom = 50;
    const double pw = width - left - right, ph = height - top - bottom;
    auto sx = [&](double t) { return left + pw * (t - t0) / (t1 - t0); };
    auto sy = [&](double v) { return top + ph * (ymax - v) / (ymax - ymin); };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << left << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\">"
        << "cluster m=" << m << " time series</text>\n";
    out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"#333\"/>\n";

    const double xtick = nice_tick(t1 - t0);
    for (double t = std::ceil(t0 / xtick) * xtick; t <= t1 + 1e-9 * xtick; t += xtick) {
        out << "<line x1=\"" << sx(t) << "\" y1=\"" << top + ph << "\" x2=\"" << sx(t)
            << "\" y2=\"" << top + ph + 5 << "\" stroke=\"#333\"/>\n";
        out << "<text x=\"" << sx(t) << "\" y=\"" << top + ph + 20
            << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" << t
            << "</text>\n";
    }
    const double ytick = nice_tick(ymax - ymin);
    for (double v = std::ceil(ymin / ytick) * ytick; v <= ymax + 1e-9 * ytick; v += ytick) {
        out << "<line x1=\"" << left - 5 << "\" y1=\"" << sy(v) << "\" x2=\"" << left << "\" y2=\""
            << sy(v) << "\" stroke=\"#333\"/>\n";
        out << "<text x=\"" << left - 8 << "\" y=\"" << sy(v) + 4
            << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" << v
            << "</text>\n";
    }

    double lx = left + 10;
    for (const Series& s : series) {
        out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < tr.times.size(); ++i) {
            if (i) out << ' ';
            out << sx(tr.times[i]) << ',' << sy(s.y[i]);
        }
        out << "\"/>\n";
        out << "<rect x=\"" << lx << "\" y=\"" << top + 8 << "\" width=\"18\" height=\"4\" fill=\""
            << s.color << "\"/>\n";
        out << "<text x=\"" << lx + 24 << "\" y=\"" << top + 14
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << s.label << "</text>\n";
        lx += 80;
    }
    out << "</svg>\n";
    return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("cannot open output file: " + path);
    out << content;
    if (!out) throw config_error("failed writing output file: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw config_error("cannot open file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

} // namespace clusterdyn
