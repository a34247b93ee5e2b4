#ifndef CLUSTERDYN_IO_HPP
#define CLUSTERDYN_IO_HPP

#include "clusterdyn/integrate.hpp"

#include <json.hpp>

#include <cstddef>
#include <string>

namespace clusterdyn {

// Formats a double with 17 significant digits (lossless round trip).
std::string format_double(double v);

// Header: t, then (s3m_<m>, sp_<m>, sm_<m>) per tracked cluster, then
// C_<m> per tracked cluster, then delta3, deltap, deltam, H.
std::string trajectory_csv(const Trajectory& tr);

// {config, times, sites, clusters, invariants}
nlohmann::ordered_json trajectory_json(const Trajectory& tr,
                                       const nlohmann::ordered_json& config_echo);

// Inverse of trajectory_json; the config echo must carry system/z/kappa.
Trajectory trajectory_from_json(const nlohmann::ordered_json& j);

// Self-contained SVG line chart of the tracked cluster at position
// cluster_index (three series: s3m, sp_m, sm_m over time).
std::string cluster_svg(const Trajectory& tr, std::size_t cluster_index);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

} // namespace clusterdyn

#endif
