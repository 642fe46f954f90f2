#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "intdim/covers.hpp"
#include "intdim/equilibrium.hpp"
#include "intdim/geometry.hpp"
#include "intdim/profiles.hpp"
#include "intdim/projections.hpp"
#include "intdim/verify.hpp"

namespace intdim {

/// theta,m,mode,estimate,residual
std::string profile_csv(const std::vector<DimensionProfile>& profiles);

/// theta,s,r,quotient
std::string diagnostics_csv(const std::vector<DimensionProfile>& profiles);

/// frame_seed,theta,estimate,profile,violation_flag
std::string projection_csv(const ProjectionReport& report);

/// One point per row, comma-separated coordinates.
std::string points_csv(const Cloud& cloud);

/// corner coordinates, side, level per chosen cube.
std::string cells_csv(const CoverSumResult& result);

nlohmann::json to_json(const EquilibriumResult& eq);
nlohmann::json to_json(const SubspaceFrame& frame);
nlohmann::json frames_json(const ProjectionReport& report);
nlohmann::json to_json(const CheckReport& report);
/// {"pass": all pass, "checks": [...]}
nlohmann::json verification_json(const std::vector<CheckReport>& reports);

/// Writes the text, creating parent directories. Throws Error on failure.
void write_text(const std::string& path, const std::string& text);

}  // namespace intdim
