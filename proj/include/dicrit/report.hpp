#pragma once

#include <json.hpp>

#include "dicrit/config.hpp"
#include "dicrit/holonomy.hpp"
#include "dicrit/integral.hpp"

namespace dicrit {

using Json = nlohmann::ordered_json;

Json verdict_json(const Verdict& v);

struct RunResult {
  Json report;
  int exit_code = 0;
};

/// Full pipeline: blow-up, classification, criteria, holonomy, certificates.
RunResult run_analyze(const AnalysisConfig& cfg);
/// Blow-up trace only; steps < 0 means the full family chain.
RunResult run_blowup(const AnalysisConfig& cfg, int steps = -1);
/// Holonomy generator table (optionally with a CSV of orbit samples).
RunResult run_holonomy(const AnalysisConfig& cfg);
/// Classification of the germ / the family's blown-up points.
RunResult run_classify(const AnalysisConfig& cfg);
/// Dicriticalness section with its certificate.
RunResult run_section(const AnalysisConfig& cfg);
/// Candidate first-integral verification (2D and pulled-back 3D).
RunResult run_verify_integral(const AnalysisConfig& cfg);

/// Pretty print of the family transform shape (G)*(pn y dx + qn x dy) + x y (H) dw.
std::string family_transform_str(const DiffForm& form, int pn, int qn);

}  // namespace dicrit
