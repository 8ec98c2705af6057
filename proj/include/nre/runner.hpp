#pragma once

#include "nre/report.hpp"

namespace nre {

/// Runs one experiment and writes its report files into config.out.
/// Operational errors propagate as Error; claim failures are recorded in
/// the report.
RunReport cmd_run(const ExperimentConfig& config);

/// 0 when every claim passed, 1 otherwise.
int exit_status(const RunReport& report);

}  // namespace nre
