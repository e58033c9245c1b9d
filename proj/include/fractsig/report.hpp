#pragma once

#include <filesystem>
#include <vector>

#include "fractsig/analysis.hpp"

namespace fractsig {

// Renders an analysis into out_dir: CSV tables shaped like the reference
// result tables, per-feature histogram overlays, mean multifractal-spectrum
// and lacunarity curves per component count, and the (q, N) KS heatmap.
// Output bytes are deterministic for identical input. Returns emitted paths.
std::vector<std::filesystem::path> render_report(const AnalysisReport& analysis,
                                                 const std::filesystem::path& out_dir);

}  // namespace fractsig
