#pragma once

#include "mechent/analysis.hpp"
#include "mechent/config.hpp"
#include "mechent/dynamics.hpp"
#include "mechent/gaussian.hpp"
#include "mechent/mathieu.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace mechent {

const char* code_version();

/// Comment preamble shared by every CSV: code version, scenario, units and
/// the resolved settings, one `# key = value` line each.
void write_preamble(std::ostream& out, const std::string& scenario, const KeyValueConfig& settings);

void write_timeseries_csv(std::ostream& out, const TrajectoryRecord& traj, double period);
void write_sweep_csv(std::ostream& out, const SweepResult& sweep);
void write_wigner_csv(std::ostream& out, const WignerField& field);

/// One `# t = ...` line followed by six comma-separated rows per snapshot.
void write_covariance_csv(std::ostream& out, const std::vector<CovarianceSnapshot>& snapshots);

void write_chart_csv(std::ostream& out, const std::vector<ChartCell>& cells);
void write_markers_csv(std::ostream& out, const std::vector<ChartMarker>& markers);

} // namespace mechent
