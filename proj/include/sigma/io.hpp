#pragma once

#include <iosfwd>
#include <string>

#include "sigma/dual_norm.hpp"
#include "sigma/prob_core.hpp"
#include "sigma/risk.hpp"

namespace sigma::io {

/// Dataset ingestion. CSV: columns y1..yd plus an optional weight column w
/// (header optional); JSON: {"weights": [...], "values": [[...], ...]} with
/// scalar rows also accepted as plain numbers. Weights default to uniform;
/// raw weights are normalized to probabilities. NaN or ragged rows are
/// rejected with their row index.
RandomVector ingest_csv(std::istream& in);
RandomVector ingest_json(std::istream& in);

/// Dispatch on extension (.json / .csv), else on a leading '{'.
RandomVector load_dataset(const std::string& path);

/// Doubles are emitted with 17 significant digits and fields in a fixed
/// order, so emitted files diff cleanly and re-ingest to identical values.
std::string format_double(double x);
std::string dataset_json(const RandomVector& v);
std::string certificate_json(const DualityCertificate& cert);
std::string risk_report_json(const RiskReport& report);
std::string dominance_json(const DominanceCheck& check);

}  // namespace sigma::io
