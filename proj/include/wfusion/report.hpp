// report.hpp
// Machine-readable report documents emitted by the command-line tool.
//
// Every document is {schema_version, command, parameters, results}. Tabular
// payloads are arrays of flat row objects; the CSV rendering is produced from
// the same rows, floats printed with 17 significant digits, so both formats
// carry identical numbers. Exact probabilities travel as "p/q" strings.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wfusion/fusion.hpp"
#include "wfusion/strategy.hpp"

namespace wfusion {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1.0.0";

struct ReportDocument {
    std::string schema_version = kSchemaVersion;
    std::string command;
    Json parameters = Json::object();
    Json results = Json::object();

    friend bool operator==(const ReportDocument&, const ReportDocument&) = default;
};

Json to_json(const ReportDocument& doc);

/// Throws std::invalid_argument when required fields are missing.
ReportDocument document_from_json(const Json& j);

std::string format_double(double x);

/// Flat rows to CSV with a header row; nested values are rejected.
std::string rows_to_csv(const Json& rows);

Json fusion_summary_json(const FusionReport& report);
Json fusion_branch_rows(const FusionReport& report);
ReportDocument fusion_document(const FusionReport& report, bool with_branches);

Json input_case_rows(const std::vector<InputCase>& cases);
ReportDocument table_document(int n, int m, GateKind gate);

struct SweepRange {
    int lo = 2;
    int hi = 2;
};

/// Largest size for which the sweep runs the state simulation.
inline constexpr int kMaxSweepSimulated = 12;
inline constexpr int kMaxSweepClosedForm = 10000;

/// Parses "a:b", "a..b" or "a". Throws std::invalid_argument.
SweepRange parse_range(const std::string& text);

Json sweep_rows(GateKind gate, SweepRange n, SweepRange m, bool closed_form_only);
ReportDocument sweep_document(GateKind gate, SweepRange n, SweepRange m, bool closed_form_only);

Json cost_result_json(const CostResult& r);
Json mc_stats_json(const McStats& s);
ReportDocument cost_document(const CostResult& r, const CostModel& model, std::optional<McStats> mc);

/// CSV rendering of a document: the rows of table-shaped payloads, or a
/// single flattened row for summaries.
std::string document_to_csv(const ReportDocument& doc);

}  // namespace wfusion
