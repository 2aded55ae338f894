#pragma once

#include "tsfm/bench.hpp"

#include <string>
#include <vector>

namespace tsfm {

/// Markdown score table: one row per task, MASE/WQL columns per model, and a
/// closing row with geometric-mean relative scores.
std::string score_table_markdown(const RunOutput& run);

/// Plain-text aggregate summary (geometric means, ranks, exclusions, failures).
std::string summary_text(const RunOutput& run);

/// History, point forecast and the 10-90% band as a standalone SVG document.
std::string forecast_svg(const ForecastArtifact& forecast, int width = 800, int height = 320);

/// Writes scores.md, summary.txt and one SVG per requested task id (all tasks when
/// `task_ids` is empty). Returns the written paths.
std::vector<std::string> report(const RunOutput& run, const std::string& out_dir,
                                const std::vector<std::string>& task_ids = {});

} // namespace tsfm
