#pragma once

// JSON and CSV serialization of module results. JSON objects use sorted keys and
// shortest round-trip doubles, so equal results give byte-identical files.

#include "diraclab/coupling.hpp"
#include "diraclab/extremal.hpp"
#include "diraclab/zero_mode.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace diraclab {

using Json = nlohmann::json;

Json to_json(const CliffordReport& r);
Json to_json(const NormReport& r);
Json to_json(const FrameSweepReport& r);
Json to_json(const IdentityReport& r);
Json to_json(const WeakEquationReport& r);
Json to_json(const LossYauOracleReport& r);
Json to_json(const TailReport& r);
Json to_json(const DecayFitReport& r);
Json to_json(const ScanRecord& r);
Json to_json(const ScanSummary& r);
Json to_json(const NullityEstimate& r);
Json to_json(const InequalityRecord& r);
Json to_json(const TrialParams& p);
Json to_json(const SearchResult& r);
Json to_json(const LemmaFitReport& r);

/// Shortest decimal string that reads back to the same double ("nan", "inf", "-inf" otherwise).
std::string format_number(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// RFC 4180: CRLF line ends, fields with comma, quote or line break quoted, quotes doubled.
  std::string str() const;
};

CsvTable scan_table(const std::vector<ScanRecord>& records);
CsvTable inequality_table(const std::vector<InequalityRecord>& records);

/// 2-space indented dump with a trailing newline.
std::string dump_json(const Json& j);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace diraclab
