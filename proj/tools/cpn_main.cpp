#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cpn/builder.hpp"
#include "cpn/catalog.hpp"
#include "cpn/errors.hpp"
#include "cpn/export.hpp"
#include "cpn/graph.hpp"
#include "cpn/metrics.hpp"
#include "cpn/parser.hpp"
#include "cpn/roles.hpp"

namespace {

// Exit codes: 0 ok, 1 validation errors / cycles found / rejected content,
// 2 I/O failure, 3 DAG required but violated, 4 resource cap exceeded.
constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;
constexpr int kExitDagRequired = 3;
constexpr int kExitResourceCap = 4;

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw IoError("cannot read " + path);
    return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << content;
    out.flush();
    if (!out.good()) throw IoError("cannot write " + path);
}

struct CommonOptions {
    std::string input;
    std::string format = "auto";
    std::string coreq;
    std::string dangling = "stub";
    std::vector<std::string> lab_markers;
};

void add_common(CLI::App* cmd, CommonOptions& opts, const std::string& coreq_default) {
    opts.coreq = coreq_default;
    cmd->add_option("--input", opts.input, "catalogue file")->required();
    cmd->add_option("--format", opts.format, "input format")
        ->check(CLI::IsMember({"text", "structured", "auto"}))
        ->capture_default_str();
    cmd->add_option("--coreq", opts.coreq, "corequisite arc mode")
        ->check(CLI::IsMember({"directed", "bidirectional"}))
        ->capture_default_str();
    cmd->add_option("--dangling", opts.dangling, "policy for undefined referenced codes")
        ->check(CLI::IsMember({"stub", "drop", "error"}))
        ->capture_default_str();
    cmd->add_option("--lab-marker", opts.lab_markers,
                    "title substring marking the lab side of a corequisite pair (repeatable)");
}

cpn::ParseResult load_catalog(const CommonOptions& opts) {
    const std::string bytes = read_file(opts.input);
    if (opts.format == "structured") return cpn::parse_catalog_structured(bytes);
    if (opts.format == "text") return cpn::parse_catalog_text(bytes);
    try {
        return cpn::parse_catalog_structured(bytes);
    } catch (const cpn::SchemaViolationError&) {
        return cpn::parse_catalog_text(bytes);
    }
}

cpn::BuildPolicy make_policy(const CommonOptions& opts) {
    cpn::BuildPolicy policy;
    policy.coreq_mode = opts.coreq == "bidirectional" ? cpn::CoreqArcMode::bidirectional
                                                      : cpn::CoreqArcMode::directed;
    policy.dangling_mode = opts.dangling == "drop"    ? cpn::DanglingMode::drop
                           : opts.dangling == "error" ? cpn::DanglingMode::error
                                                      : cpn::DanglingMode::create_stub;
    if (!opts.lab_markers.empty()) policy.lab_title_markers = opts.lab_markers;
    return policy;
}

void print_diagnostics(const std::vector<cpn::ParseDiagnostic>& diagnostics, std::ostream& out) {
    for (const auto& d : diagnostics) {
        out << "line " << d.line << ": "
            << (d.severity == cpn::Severity::error ? "error" : "warning") << ": " << d.message
            << "\n";
    }
}

int run_validate(const CommonOptions& opts) {
    const auto parsed = load_catalog(opts);
    const auto findings = cpn::validate_catalog(parsed.catalog);

    print_diagnostics(parsed.diagnostics, std::cout);
    for (const auto& finding : findings) {
        std::cout << (finding.severity == cpn::Severity::error ? "error" : "warning") << ": "
                  << finding.message << "\n";
    }
    bool has_errors =
        std::any_of(findings.begin(), findings.end(),
                    [](const cpn::Finding& f) { return f.severity == cpn::Severity::error; }) ||
        std::any_of(parsed.diagnostics.begin(), parsed.diagnostics.end(),
                    [](const cpn::ParseDiagnostic& d) {
                        return d.severity == cpn::Severity::error;
                    });
    std::cout << (has_errors ? "invalid" : "ok") << ": " << parsed.catalog.records.size()
              << " records, " << findings.size() << " findings\n";
    return has_errors ? kExitValidation : kExitOk;
}

struct AnalyzeOptions {
    CommonOptions common;
    bool enforce_dag = true;
    bool require_dag = false;
    std::vector<std::string> export_formats;
    std::vector<std::string> export_paths;
    std::string report_path;
    int top_n = 10;
    std::uint64_t seed = 1;
    int permutations = 10000;
};

int run_analyze(const AnalyzeOptions& opts) {
    if (opts.export_formats.size() != opts.export_paths.size()) {
        std::cerr << "error: --export and --out must be given in pairs\n";
        return kExitValidation;
    }

    const auto parsed = load_catalog(opts.common);
    print_diagnostics(parsed.diagnostics, std::cerr);

    const auto policy = make_policy(opts.common);
    auto build = cpn::build_cpn(parsed.catalog, policy);
    cpn::BuildDiagnostics diagnostics = std::move(build.diagnostics);
    cpn::Cpn graph = std::move(build.cpn);

    if (opts.enforce_dag) {
        auto enforced = cpn::enforce_dag(graph, policy);
        diagnostics.removed_arcs = std::move(enforced.diagnostics.removed_arcs);
        diagnostics.unresolved_cycles = std::move(enforced.diagnostics.unresolved_cycles);
        graph = std::move(enforced.cpn);
    } else if (opts.require_dag) {
        diagnostics.unresolved_cycles = cpn::detect_cycles(graph);
    }
    if (opts.require_dag && !diagnostics.unresolved_cycles.empty()) {
        std::cerr << "error: DAG required but " << diagnostics.unresolved_cycles.size()
                  << " cycles remain:\n";
        for (const auto& cycle : diagnostics.unresolved_cycles) {
            std::cerr << " ";
            for (cpn::NodeId id : cycle) std::cerr << ' ' << graph.node(id).label() << " ->";
            std::cerr << ' ' << graph.node(cycle.front()).label() << "\n";
        }
        return kExitDagRequired;
    }

    auto metrics = cpn::degree_metrics(graph);
    const auto components = cpn::weakly_connected_components(graph);
    if (const auto* largest = components.largest()) {
        cpn::annotate_betweenness(metrics, cpn::betweenness(graph, *largest));
    }

    cpn::ReportInputs inputs;
    inputs.summary = cpn::summarize(graph);
    inputs.components = components;
    inputs.diagnostics = diagnostics;
    inputs.top_out_degree = cpn::top_table(graph, metrics, cpn::RankKey::weighted_out_degree,
                                           opts.top_n, /*include_cutoff_ties=*/true);
    inputs.top_betweenness = cpn::top_table(graph, metrics, cpn::RankKey::betweenness,
                                            opts.top_n, /*include_cutoff_ties=*/true);

    // Weighted degree vs betweenness over the largest component, when defined.
    std::vector<double> wk, bc;
    for (const auto& m : metrics) {
        if (!m.betweenness) continue;
        wk.push_back(m.wk);
        bc.push_back(*m.betweenness);
    }
    if (wk.size() >= 3) {
        try {
            cpn::SpearmanOptions sp;
            sp.seed = opts.seed;
            sp.permutations = opts.permutations;
            const auto result = cpn::spearman(wk, bc, sp);
            inputs.spearman = cpn::SpearmanSummary{result.rho, result.p_value,
                                                   static_cast<std::int64_t>(wk.size()),
                                                   sp.permutations, sp.seed};
        } catch (const cpn::DegenerateInputError&) {
            std::cerr << "note: rank correlation skipped (constant sequence)\n";
        }
    }

    const auto report = cpn::export_report(graph, inputs);
    std::cout << report.text;
    if (!opts.report_path.empty()) write_file(opts.report_path, report.json);

    for (std::size_t i = 0; i < opts.export_formats.size(); ++i) {
        cpn::ExportOptions export_options;
        const std::string& format = opts.export_formats[i];
        const std::string content =
            format == "graphml" ? cpn::export_graphml(graph, &metrics, nullptr, export_options)
                                : cpn::export_dot(graph, &metrics, nullptr, export_options);
        write_file(opts.export_paths[i], content);
    }
    return kExitOk;
}

struct CyclesOptions {
    CommonOptions common;
    std::size_t max_cycles = 100000;
};

int run_cycles(const CyclesOptions& opts) {
    const auto parsed = load_catalog(opts.common);
    print_diagnostics(parsed.diagnostics, std::cerr);

    const auto policy = make_policy(opts.common);
    const auto build = cpn::build_cpn(parsed.catalog, policy);
    const auto cycles = cpn::detect_cycles(build.cpn, opts.max_cycles);

    std::cout << cycles.size() << " cycles\n";
    for (const auto& cycle : cycles) {
        bool first = true;
        for (cpn::NodeId id : cycle) {
            if (!first) std::cout << " -> ";
            std::cout << build.cpn.node(id).label();
            first = false;
        }
        std::cout << " -> " << build.cpn.node(cycle.front()).label() << "\n";
    }
    return cycles.empty() ? kExitOk : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"curriculum prerequisite network toolkit"};
    app.require_subcommand(1);

    CommonOptions validate_opts;
    auto* validate_cmd = app.add_subcommand("validate", "parse a catalogue and check integrity");
    add_common(validate_cmd, validate_opts, "directed");

    AnalyzeOptions analyze_opts;
    auto* analyze_cmd =
        app.add_subcommand("analyze", "build the network, compute metrics, export");
    add_common(analyze_cmd, analyze_opts.common, "directed");
    analyze_cmd->add_flag("--enforce-dag,!--no-enforce-dag", analyze_opts.enforce_dag,
                          "apply the corequisite DAG repair (default on)");
    analyze_cmd->add_flag("--require-dag", analyze_opts.require_dag,
                          "fail when unresolved cycles remain");
    analyze_cmd->add_option("--export", analyze_opts.export_formats, "export format (repeatable)")
        ->check(CLI::IsMember({"graphml", "dot"}));
    analyze_cmd->add_option("--out", analyze_opts.export_paths,
                            "output path for the matching --export (repeatable)");
    analyze_cmd->add_option("--report", analyze_opts.report_path, "write the JSON report here");
    analyze_cmd->add_option("--top", analyze_opts.top_n, "rows in the top tables")
        ->capture_default_str();
    analyze_cmd->add_option("--seed", analyze_opts.seed, "permutation test seed")
        ->capture_default_str();
    analyze_cmd->add_option("--permutations", analyze_opts.permutations,
                            "permutation test iterations")
        ->capture_default_str();

    CyclesOptions cycles_opts;
    auto* cycles_cmd = app.add_subcommand("cycles", "list every elementary cycle");
    add_common(cycles_cmd, cycles_opts.common, "bidirectional");
    cycles_cmd->add_option("--max-cycles", cycles_opts.max_cycles, "enumeration cap")
        ->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate_cmd->parsed()) return run_validate(validate_opts);
        if (analyze_cmd->parsed()) return run_analyze(analyze_opts);
        if (cycles_cmd->parsed()) return run_cycles(cycles_opts);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const cpn::CycleLimitError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitResourceCap;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitOk;
}
