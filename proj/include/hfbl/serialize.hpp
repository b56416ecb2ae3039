#ifndef HFBL_SERIALIZE_HPP
#define HFBL_SERIALIZE_HPP

// Machine-readable output: CSV with '.' decimal separator, 17 significant
// digits and LF line endings; JSON as one top-level object per file. Every
// artifact carries the format version and the effective run configuration.

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hfbl/asymptotics.hpp"
#include "hfbl/phase.hpp"
#include "hfbl/shooting.hpp"
#include "hfbl/types.hpp"

namespace hfbl {

inline constexpr const char* kFormatVersion = "hfbl/1";

struct RunMeta {
  std::vector<std::pair<std::string, std::string>> config;

  void set(const std::string& key, const std::string& value) {
    config.emplace_back(key, value);
  }
  void set(const std::string& key, double value);
};

/// %.17g rendering used by every CSV cell.
std::string fmt17(double x);

std::string csv_preamble(const RunMeta& meta);

std::string trajectory_csv(const Trajectory& traj, const RunMeta& meta);
nlohmann::json trajectory_json(const Trajectory& traj, const RunMeta& meta);

nlohmann::json classification_json(const Classification& cls);
nlohmann::json report_json(const SolutionReport& rep, const RunMeta& meta);

std::string sweep_csv_header(const RunMeta& meta);
std::string sweep_csv_row(const SolutionReport& rep);

nlohmann::json alpha_interval_json(const Params& p, const AlphaInterval& iv,
                                   const RunMeta& meta);

std::string phase_points_csv(const std::vector<PhasePoint>& pts, const RunMeta& meta);
nlohmann::json gamma_star_json(const GammaStarResult& gs, const RunMeta& meta);
nlohmann::json equilibrium_json(const Equilibrium& eq);
nlohmann::json tail_fit_json(const TailFit& fit, double target_exponent,
                             const RunMeta& meta);

}  // namespace hfbl

#endif
