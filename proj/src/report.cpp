#include "wfusion/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace wfusion {

Json to_json(const ReportDocument& doc) {
    Json j;
    j["schema_version"] = doc.schema_version;
    j["command"] = doc.command;
    j["parameters"] = doc.parameters;
    j["results"] = doc.results;
    return j;
}

ReportDocument document_from_json(const Json& j) {
    for (const char* key : {"schema_version", "command", "parameters", "results"}) {
        if (!j.contains(key)) throw std::invalid_argument(std::string("report document lacks '") + key + "'");
    }
    ReportDocument doc;
    doc.schema_version = j.at("schema_version").get<std::string>();
    doc.command = j.at("command").get<std::string>();
    doc.parameters = j.at("parameters");
    doc.results = j.at("results");
    return doc;
}

std::string format_double(double x) {
    if (!std::isfinite(x)) return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

std::string csv_cell(const Json& v) {
    switch (v.type()) {
        case Json::value_t::null: return "";
        case Json::value_t::boolean: return v.get<bool>() ? "true" : "false";
        case Json::value_t::number_integer: return std::to_string(v.get<std::int64_t>());
        case Json::value_t::number_unsigned: return std::to_string(v.get<std::uint64_t>());
        case Json::value_t::number_float: return format_double(v.get<double>());
        case Json::value_t::string: {
            const auto s = v.get<std::string>();
            if (s.find_first_of(",\"\n") == std::string::npos) return s;
            std::string quoted = "\"";
            for (char c : s) {
                if (c == '"') quoted += '"';
                quoted += c;
            }
            return quoted + "\"";
        }
        default: throw std::invalid_argument("CSV rows must be flat");
    }
}

Json optional_number(const std::optional<double>& x) { return x ? Json(*x) : Json(nullptr); }

}  // namespace

std::string rows_to_csv(const Json& rows) {
    if (!rows.is_array()) throw std::invalid_argument("CSV rendering needs an array of rows");
    std::ostringstream os;
    if (rows.empty()) return "";
    std::vector<std::string> header;
    for (const auto& [key, value] : rows.front().items()) header.push_back(key);
    for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
    os << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < header.size(); ++i) {
            os << (i ? "," : "") << csv_cell(row.contains(header[i]) ? row.at(header[i]) : Json(nullptr));
        }
        os << "\n";
    }
    return os.str();
}

// ---------- fuse ----------

Json fusion_summary_json(const FusionReport& r) {
    Json j;
    j["n"] = r.n;
    j["m"] = r.m;
    j["gate"] = std::string(to_string(r.gate));
    j["fused_size"] = r.fused_size;
    j["p_success"] = r.p_success;
    j["p_success_exact"] = to_string(r.exact_success);
    j["p_recycle"] = r.p_recycle;
    j["p_recycle_exact"] = to_string(r.exact_recycle);
    j["p_failure"] = r.p_failure;
    j["p_failure_exact"] = to_string(r.exact_failure);
    j["success_fidelity"] = r.success_fidelity;
    j["recycle_fidelity"] = r.recycle_fidelity;
    return j;
}

Json fusion_branch_rows(const FusionReport& r) {
    Json rows = Json::array();
    for (const auto& b : r.branches) {
        Json row;
        row["occupancy_d1"] = b.occupancy.d1;
        row["occupancy_d2"] = b.occupancy.d2;
        row["mode1_outcome"] = std::string(to_string(b.diag_results.at(0).outcome));
        row["mode2_outcome"] = std::string(to_string(b.diag_results.at(1).outcome));
        row["probability"] = b.probability;
        row["probability_exact"] = to_string(b.exact_probability);
        row["class"] = std::string(to_string(b.cls));
        row["correction_applied"] = b.correction_applied;
        row["fidelity"] = optional_number(b.fidelity);
        rows.push_back(std::move(row));
    }
    return rows;
}

ReportDocument fusion_document(const FusionReport& report, bool with_branches) {
    ReportDocument doc;
    doc.command = "fuse";
    doc.parameters = {{"n", report.n}, {"m", report.m}, {"gate", std::string(to_string(report.gate))},
                      {"branches", with_branches}};
    doc.results = fusion_summary_json(report);
    if (with_branches) doc.results["branches"] = fusion_branch_rows(report);
    return doc;
}

// ---------- table ----------

Json input_case_rows(const std::vector<InputCase>& cases) {
    Json rows = Json::array();
    for (const auto& c : cases) {
        Json row;
        row["pattern"] = c.pattern;
        row["probability"] = to_double(c.probability);
        row["probability_exact"] = to_string(c.probability);
        row["class"] = std::string(to_string(c.cls));
        rows.push_back(std::move(row));
    }
    return rows;
}

ReportDocument table_document(int n, int m, GateKind gate) {
    ReportDocument doc;
    doc.command = "table";
    doc.parameters = {{"n", n}, {"m", m}, {"gate", std::string(to_string(gate))}};
    doc.results["rows"] = input_case_rows(enumerate_input_cases(n, m, gate));
    return doc;
}

// ---------- sweep ----------

SweepRange parse_range(const std::string& text) {
    SweepRange r;
    std::string lo = text;
    std::string hi = text;
    if (auto p = text.find(".."); p != std::string::npos) {
        lo = text.substr(0, p);
        hi = text.substr(p + 2);
    } else if (auto q = text.find(':'); q != std::string::npos) {
        lo = text.substr(0, q);
        hi = text.substr(q + 1);
    }
    try {
        std::size_t used_lo = 0;
        std::size_t used_hi = 0;
        r.lo = std::stoi(lo, &used_lo);
        r.hi = std::stoi(hi, &used_hi);
        if (used_lo != lo.size() || used_hi != hi.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
        throw std::invalid_argument("cannot parse range '" + text + "' (expected a:b)");
    }
    if (r.lo > r.hi) throw std::invalid_argument("empty range '" + text + "'");
    return r;
}

Json sweep_rows(GateKind gate, SweepRange n, SweepRange m, bool closed_form_only) {
    const int limit = closed_form_only ? kMaxSweepClosedForm : kMaxSweepSimulated;
    for (const auto& r : {n, m}) {
        if (r.lo < 2) throw std::invalid_argument("sweep sizes must be at least 2 (minimum size 2)");
        if (r.hi > limit) {
            throw std::invalid_argument("sweep sizes must not exceed " + std::to_string(limit) +
                                        (closed_form_only ? "" : " in simulation mode (use --closed-form)"));
        }
    }
    Json rows = Json::array();
    for (int a = n.lo; a <= n.hi; ++a) {
        for (int b = m.lo; b <= m.hi; ++b) {
            const Rational exact = p_success(a, b, gate);
            Json row;
            row["n"] = a;
            row["m"] = b;
            row["p_success_closed"] = to_double(exact);
            row["p_success_exact"] = to_string(exact);
            if (closed_form_only) {
                row["p_success_sim"] = nullptr;
                row["abs_diff"] = nullptr;
                row["min_success_fidelity"] = nullptr;
            } else {
                const FusionReport rep = fuse(a, b, gate);
                row["p_success_sim"] = rep.p_success;
                row["abs_diff"] = std::abs(rep.p_success - to_double(exact));
                row["min_success_fidelity"] = rep.success_fidelity;
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

ReportDocument sweep_document(GateKind gate, SweepRange n, SweepRange m, bool closed_form_only) {
    ReportDocument doc;
    doc.command = "sweep";
    doc.parameters = {{"gate", std::string(to_string(gate))},
                      {"n_min", n.lo},
                      {"n_max", n.hi},
                      {"m_min", m.lo},
                      {"m_max", m.hi},
                      {"mode", closed_form_only ? "closed-form" : "simulate"}};
    doc.results["rows"] = sweep_rows(gate, n, m, closed_form_only);
    return doc;
}

// ---------- cost ----------

Json cost_result_json(const CostResult& r) {
    Json j;
    j["target_size"] = r.target_size;
    j["strategy_name"] = r.strategy_name;
    j["gate"] = std::string(to_string(r.gate));
    j["policy"] = std::string(to_string(r.policy));
    j["expected_bell_pairs"] = r.expected_bell_pairs;
    j["expected_ancillas"] = r.expected_ancillas;
    j["expected_attempts"] = r.expected_attempts;
    j["expected_cost_units"] = r.expected_cost_units;
    j["reachable"] = r.reachable;
    j["iterations"] = r.iterations;
    return j;
}

Json mc_stats_json(const McStats& s) {
    Json j;
    j["trials"] = s.trials;
    j["seed"] = s.seed;
    j["fusion_attempts"] = s.fusion_attempts;
    j["fusion_successes"] = s.fusion_successes;
    j["success_rate"] = s.success_rate;
    j["mean_bell_pairs"] = s.mean_bell_pairs;
    j["var_bell_pairs"] = s.var_bell_pairs;
    j["mean_ancillas"] = s.mean_ancillas;
    j["var_ancillas"] = s.var_ancillas;
    j["mean_attempts"] = s.mean_attempts;
    j["var_attempts"] = s.var_attempts;
    j["mean_cost_units"] = s.mean_cost_units;
    j["var_cost_units"] = s.var_cost_units;
    j["confidence_halfwidth_95"] = s.confidence_halfwidth_95;
    return j;
}

ReportDocument cost_document(const CostResult& r, const CostModel& model, std::optional<McStats> mc) {
    ReportDocument doc;
    doc.command = "cost";
    doc.parameters = {{"target", r.target_size},
                      {"gate", std::string(to_string(r.gate))},
                      {"policy", std::string(to_string(model.recycle_policy))},
                      {"strategy", r.strategy_name},
                      {"bell_pair_cost", model.bell_pair_cost},
                      {"ancilla_cost", model.ancilla_cost},
                      {"mc_trials", mc ? mc->trials : 0},
                      {"seed", mc ? mc->seed : 0}};
    doc.results["cost"] = cost_result_json(r);
    if (mc) {
        doc.results["monte_carlo"] = mc_stats_json(*mc);
        doc.results["discrepancy_standard_errors"] = discrepancy_in_standard_errors(r, *mc);
    }
    return doc;
}

std::string document_to_csv(const ReportDocument& doc) {
    const Json& res = doc.results;
    if (doc.command == "fuse") {
        if (!res.contains("branches")) return rows_to_csv(Json::array({res}));
        Json rows = Json::array();
        for (const auto& b : res.at("branches")) {
            Json row;
            row["n"] = res.at("n");
            row["m"] = res.at("m");
            row["gate"] = res.at("gate");
            for (const auto& [k, v] : b.items()) row[k] = v;
            rows.push_back(std::move(row));
        }
        return rows_to_csv(rows);
    }
    if (doc.command == "table" || doc.command == "sweep") return rows_to_csv(res.at("rows"));
    if (doc.command == "cost") {
        Json row = res.at("cost");
        if (res.contains("monte_carlo")) {
            for (const auto& [k, v] : res.at("monte_carlo").items()) row["mc_" + k] = v;
            row["discrepancy_standard_errors"] = res.at("discrepancy_standard_errors");
        }
        return rows_to_csv(Json::array({row}));
    }
    throw std::invalid_argument("no CSV rendering for command '" + doc.command + "'");
}

}  // namespace wfusion
