// wfusion: command-line front end for the W-state fusion simulator.
//
//   wfusion fuse  --n 2 --m 2 --gate fgf [--branches] [--json|--csv]
//   wfusion table --n 3 --m 3 --gate fg [--json|--csv]
//   wfusion sweep --gate fgf --n 2:8 --m 2:8 [--out FILE] [--format json|csv] [--closed-form]
//   wfusion cost  --target 6 --gate fgf [--policy discard|reuse] [--strategy balanced-tree|incremental]
//                 [--ancilla-cost 0.1] [--mc TRIALS] [--seed 0] [--json|--csv]
//
// Standard output receives exactly one complete document or nothing;
// diagnostics go to standard error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "wfusion/report.hpp"

#ifndef WFUSION_BUILD_ID
#define WFUSION_BUILD_ID "unknown"
#endif

namespace {

using namespace wfusion;

enum class Format { Json, Csv };

std::string render(const ReportDocument& doc, Format fmt) {
    if (fmt == Format::Csv) return document_to_csv(doc);
    return to_json(doc).dump(2) + "\n";
}

Format pick_format(bool csv) { return csv ? Format::Csv : Format::Json; }

void add_format_flags(CLI::App* cmd, bool& csv) {
    auto* json_flag = cmd->add_flag("--json", "Emit JSON (default)");
    auto* csv_flag = cmd->add_flag("--csv", csv, "Emit CSV");
    json_flag->excludes(csv_flag);
}

// Writes next to the destination first and renames, so readers never see a
// partial file.
void write_atomically(const std::string& path, const std::string& content) {
    const std::filesystem::path dest(path);
    std::filesystem::path tmp = dest;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("failed writing '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, dest, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw std::runtime_error("cannot move output into place at '" + path + "'");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact simulator for W-state fusion with and without a Fredkin gate"};
    app.require_subcommand(0, 1);

    bool show_version = false;
    app.add_flag("--version", show_version, "Print schema version and build identifier");

    // fuse
    int fuse_n = 0;
    int fuse_m = 0;
    std::string fuse_gate = "fgf";
    bool fuse_csv = false;
    bool fuse_branches = false;
    auto* fuse_cmd = app.add_subcommand("fuse", "Simulate one fusion and report every detection branch");
    fuse_cmd->add_option("--n", fuse_n, "Size of Alice's W state")->required();
    fuse_cmd->add_option("--m", fuse_m, "Size of Bob's W state")->required();
    fuse_cmd->add_option("--gate", fuse_gate, "fg or fgf");
    fuse_cmd->add_flag("--branches", fuse_branches, "Include every detection branch");
    add_format_flags(fuse_cmd, fuse_csv);

    // table
    int table_n = 0;
    int table_m = 0;
    std::string table_gate = "fg";
    bool table_csv = false;
    auto* table_cmd = app.add_subcommand("table", "Input-case table for the two gate photons");
    table_cmd->add_option("--n", table_n, "Size of Alice's W state")->required();
    table_cmd->add_option("--m", table_m, "Size of Bob's W state")->required();
    table_cmd->add_option("--gate", table_gate, "fg or fgf");
    add_format_flags(table_cmd, table_csv);

    // sweep
    std::string sweep_gate = "fgf";
    std::string sweep_n = "2:8";
    std::string sweep_m = "2:8";
    std::string sweep_out;
    std::string sweep_format = "csv";
    bool sweep_closed = false;
    auto* sweep_cmd = app.add_subcommand("sweep", "Simulated vs closed-form success probability over (n, m)");
    sweep_cmd->add_option("--gate", sweep_gate, "fg or fgf");
    sweep_cmd->add_option("--n", sweep_n, "Range of n, e.g. 2:8");
    sweep_cmd->add_option("--m", sweep_m, "Range of m, e.g. 2:8");
    sweep_cmd->add_option("--out", sweep_out, "Output file (standard output when omitted)");
    sweep_cmd->add_option("--format", sweep_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sweep_cmd->add_flag("--closed-form", sweep_closed, "Skip simulation; allows sizes up to 10000");

    // cost
    int cost_target = 0;
    std::string cost_gate = "fgf";
    std::string cost_policy = "discard";
    std::string cost_strategy = "balanced-tree";
    double cost_ancilla = 0.1;
    double cost_bell = 1.0;
    std::uint64_t cost_trials = 0;
    std::uint64_t cost_seed = 0;
    unsigned cost_threads = 0;
    bool cost_csv = false;
    auto* cost_cmd = app.add_subcommand("cost", "Expected resources to grow a W state of the target size");
    cost_cmd->add_option("--target", cost_target, "Target W state size (>= 3)")->required();
    cost_cmd->add_option("--gate", cost_gate, "fg or fgf");
    cost_cmd->add_option("--policy", cost_policy, "Recycle policy: discard or reuse");
    cost_cmd->add_option("--strategy", cost_strategy, "Pairing strategy: balanced-tree or incremental");
    cost_cmd->add_option("--ancilla-cost", cost_ancilla, "Cost units per single photon");
    cost_cmd->add_option("--bell-cost", cost_bell, "Cost units per Bell pair");
    cost_cmd->add_option("--mc", cost_trials, "Monte Carlo trials (0 disables)");
    cost_cmd->add_option("--seed", cost_seed, "Monte Carlo seed");
    cost_cmd->add_option("--threads", cost_threads, "Monte Carlo worker threads (0 = all cores)");
    add_format_flags(cost_cmd, cost_csv);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (show_version) {
            std::cout << "schema_version " << kSchemaVersion << "\nbuild " << WFUSION_BUILD_ID << "\n";
            return 0;
        }
        std::string output;
        if (fuse_cmd->parsed()) {
            const auto report = fuse(fuse_n, fuse_m, parse_gate(fuse_gate));
            output = render(fusion_document(report, fuse_branches), pick_format(fuse_csv));
        } else if (table_cmd->parsed()) {
            output = render(table_document(table_n, table_m, parse_gate(table_gate)), pick_format(table_csv));
        } else if (sweep_cmd->parsed()) {
            const auto doc =
                sweep_document(parse_gate(sweep_gate), parse_range(sweep_n), parse_range(sweep_m), sweep_closed);
            const std::string text = render(doc, sweep_format == "csv" ? Format::Csv : Format::Json);
            if (!sweep_out.empty()) {
                write_atomically(sweep_out, text);
                return 0;
            }
            output = text;
        } else if (cost_cmd->parsed()) {
            CostModel model;
            model.recycle_policy = parse_policy(cost_policy);
            model.ancilla_cost = cost_ancilla;
            model.bell_pair_cost = cost_bell;
            const GateKind gate = parse_gate(cost_gate);
            const PairingStrategy strategy = parse_strategy(cost_strategy);
            const CostResult result = expected_cost(cost_target, gate, model, strategy);
            std::optional<McStats> mc;
            if (cost_trials > 0) {
                mc = monte_carlo_growth(cost_target, gate, model, strategy, cost_trials, cost_seed, cost_threads);
            }
            output = render(cost_document(result, model, mc), pick_format(cost_csv));
        } else {
            std::cerr << app.help();
            return 1;
        }
        std::cout << output;
        std::cout.flush();
        return std::cout ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "wfusion: error: " << e.what() << "\n";
        return 2;
    }
}
