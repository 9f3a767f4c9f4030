#pragma once

#include <string>

#include <json.hpp>

namespace ergmpool {

// Row label of a term, e.g. "Sender effect of total skills".
std::string term_label(const std::string& term);
// Group column: "--", "RQ1a".."RQ2" for the research-question presets,
// "H1"/"H2" for the hypotheses, the model name otherwise.
std::string group_label(const std::string& model, const std::string& term);

// Estimate with bracketed interval, three significant digits:
// "1.05 [0.983, 1.11]".
std::string format_estimate(double mean, double lower, double upper);

// Two-column (seeking, giving) table of pooled estimates rendered from the
// pooled JSON document.
std::string render_report(const nlohmann::json& pooled);

struct ForestPlot {
  std::string csv;
  std::string svg;
};

// One row per term per network type. Throws ValidationError on malformed
// input or unordered interval bounds.
ForestPlot render_forest(const nlohmann::json& pooled);

}  // namespace ergmpool
