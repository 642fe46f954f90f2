#pragma once

#include <ostream>

#include "intdim/run_config.hpp"

namespace intdim {

inline constexpr const char* kToolVersion = "1.0.0";

/// Exit statuses of run().
inline constexpr int kExitOk = 0;
inline constexpr int kExitCompute = 1;
inline constexpr int kExitValidation = 2;

/// Executes one configured command, writing its CSV/JSON/SVG artifacts and manifest.json into
/// cfg.output. Validation failures return kExitValidation before anything is written; once
/// validation passes the manifest is written whatever happens next. A verify run whose checks
/// do not all pass returns kExitCompute.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace intdim
