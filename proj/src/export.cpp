#include "cpn/export.hpp"

#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "cpn/errors.hpp"

namespace cpn {

namespace {

using nlohmann::json;

// Fixed rendering for arc weights: exactly 6 significant digits.
std::string format_weight(double w) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%#.6g", w);
    return buf;
}

std::string format_full(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string dot_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

void check_options(const std::vector<NodeMetrics>* metrics, const RoleAssignment* roles,
                   const ExportOptions& options) {
    if (options.size_by != SizeBy::none && metrics == nullptr) {
        throw MissingDataError("size_by requires node metrics");
    }
    if (options.include_roles && roles == nullptr) {
        throw MissingDataError("include_roles requires a role assignment");
    }
}

double size_value(const NodeMetrics& m, SizeBy size_by) {
    if (size_by == SizeBy::out_degree) return m.wk_out;
    return m.betweenness.value_or(0.0);
}

std::string roles_string(const RoleAssignment& roles, NodeId id) {
    std::string out;
    for (Role role : roles.at(static_cast<std::size_t>(id))) {
        if (!out.empty()) out += ' ';
        out += role_name(role);
    }
    return out;
}

std::string provenance_name(ArcProvenance p) {
    return p == ArcProvenance::prerequisite ? "prerequisite" : "corequisite";
}

}  // namespace

std::string export_graphml(const Cpn& cpn, const std::vector<NodeMetrics>* metrics,
                           const RoleAssignment* roles, const ExportOptions& options) {
    check_options(metrics, roles, options);

    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n";
    out << "  <key id=\"label\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n";
    out << "  <key id=\"member_codes\" for=\"node\" attr.name=\"member_codes\""
           " attr.type=\"string\"/>\n";
    if (metrics) {
        for (const char* name : {"k_in", "k_out", "k"}) {
            out << "  <key id=\"" << name << "\" for=\"node\" attr.name=\"" << name
                << "\" attr.type=\"int\"/>\n";
        }
        for (const char* name : {"wk_in", "wk_out", "wk", "betweenness"}) {
            out << "  <key id=\"" << name << "\" for=\"node\" attr.name=\"" << name
                << "\" attr.type=\"double\"/>\n";
        }
    }
    if (options.include_roles) {
        out << "  <key id=\"roles\" for=\"node\" attr.name=\"roles\" attr.type=\"string\"/>\n";
    }
    if (options.size_by != SizeBy::none) {
        out << "  <key id=\"size\" for=\"node\" attr.name=\"size\" attr.type=\"double\"/>\n";
    }
    if (options.include_weights) {
        out << "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n";
    }
    out << "  <key id=\"provenance\" for=\"edge\" attr.name=\"provenance\""
           " attr.type=\"string\"/>\n";
    out << "  <graph id=\"cpn\" edgedefault=\"directed\">\n";

    for (const auto& node : cpn.nodes()) {
        out << "    <node id=\"n" << node.id << "\">\n";
        out << "      <data key=\"label\">" << xml_escape(node.label()) << "</data>\n";
        std::string codes;
        for (const auto& code : node.member_codes) {
            if (!codes.empty()) codes += ';';
            codes += code.str();
        }
        out << "      <data key=\"member_codes\">" << xml_escape(codes) << "</data>\n";
        if (metrics) {
            const auto& m = metrics->at(static_cast<std::size_t>(node.id));
            out << "      <data key=\"k_in\">" << m.k_in << "</data>\n";
            out << "      <data key=\"k_out\">" << m.k_out << "</data>\n";
            out << "      <data key=\"k\">" << m.k << "</data>\n";
            out << "      <data key=\"wk_in\">" << format_full(m.wk_in) << "</data>\n";
            out << "      <data key=\"wk_out\">" << format_full(m.wk_out) << "</data>\n";
            out << "      <data key=\"wk\">" << format_full(m.wk) << "</data>\n";
            if (m.betweenness) {
                out << "      <data key=\"betweenness\">" << format_full(*m.betweenness)
                    << "</data>\n";
            }
        }
        if (options.include_roles) {
            out << "      <data key=\"roles\">" << roles_string(*roles, node.id) << "</data>\n";
        }
        if (options.size_by != SizeBy::none) {
            out << "      <data key=\"size\">"
                << format_full(size_value(metrics->at(static_cast<std::size_t>(node.id)),
                                          options.size_by))
                << "</data>\n";
        }
        out << "    </node>\n";
    }
    for (const auto& arc : cpn.arcs()) {
        out << "    <edge source=\"n" << arc.source << "\" target=\"n" << arc.target << "\">\n";
        if (options.include_weights) {
            out << "      <data key=\"weight\">" << format_weight(arc.weight) << "</data>\n";
        }
        out << "      <data key=\"provenance\">" << provenance_name(arc.provenance)
            << "</data>\n";
        out << "    </edge>\n";
    }
    out << "  </graph>\n";
    out << "</graphml>\n";
    return out.str();
}

std::string export_dot(const Cpn& cpn, const std::vector<NodeMetrics>* metrics,
                       const RoleAssignment* roles, const ExportOptions& options) {
    check_options(metrics, roles, options);

    std::ostringstream out;
    out << "digraph cpn {\n";
    for (const auto& node : cpn.nodes()) {
        out << "  \"" << dot_escape(node.label()) << "\"";
        std::vector<std::string> attrs;
        if (options.include_roles) {
            attrs.push_back("roles=\"" + roles_string(*roles, node.id) + "\"");
        }
        if (options.size_by != SizeBy::none) {
            attrs.push_back(
                "size=\"" +
                format_weight(size_value(metrics->at(static_cast<std::size_t>(node.id)),
                                         options.size_by)) +
                "\"");
        }
        if (!attrs.empty()) {
            out << " [";
            for (std::size_t i = 0; i < attrs.size(); ++i) {
                if (i) out << ", ";
                out << attrs[i];
            }
            out << "]";
        }
        out << ";\n";
    }
    for (const auto& arc : cpn.arcs()) {
        out << "  \"" << dot_escape(cpn.node(arc.source).label()) << "\" -> \""
            << dot_escape(cpn.node(arc.target).label()) << "\"";
        if (options.include_weights) {
            out << " [label=\"" << format_weight(arc.weight) << "\"]";
        }
        out << ";\n";
    }
    out << "}\n";
    return out.str();
}

namespace {

json scope_to_json(const ScopeSummary& scope) {
    json j;
    j["nodes"] = scope.nodes;
    j["arcs"] = scope.arcs;
    j["density"] = scope.density;
    j["weakly_connected_components"] = scope.components;
    j["mean_degree"] = scope.mean_k;
    j["mean_in_degree"] = scope.mean_k_in;
    j["mean_out_degree"] = scope.mean_k_out;
    j["mean_weighted_degree"] = scope.mean_wk;
    j["mean_weighted_in_degree"] = scope.mean_wk_in;
    j["mean_weighted_out_degree"] = scope.mean_wk_out;
    j["diameter"] = scope.diameter ? json(*scope.diameter) : json(nullptr);
    j["characteristic_path_length"] =
        scope.characteristic_path_length ? json(*scope.characteristic_path_length) : json(nullptr);
    j["mean_betweenness"] =
        scope.mean_betweenness ? json(*scope.mean_betweenness) : json(nullptr);
    return j;
}

json rows_to_json(const std::vector<TableRow>& rows) {
    json j = json::array();
    for (const auto& row : rows) j.push_back({{"label", row.label}, {"value", row.value}});
    return j;
}

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

void table_line(std::ostringstream& out, const std::string& name, const std::string& full,
                const std::string& largest) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%-28s %14s %20s\n", name.c_str(), full.c_str(),
                  largest.c_str());
    out << buf;
}

}  // namespace

RenderedReport export_report(const Cpn& cpn, const ReportInputs& inputs) {
    RenderedReport rendered;

    json doc;
    doc["summary"] = {{"full", scope_to_json(inputs.summary.full)},
                      {"largest_component", scope_to_json(inputs.summary.largest_component)}};
    doc["components"] = inputs.summary.component_sizes;
    doc["top_out_degree"] = rows_to_json(inputs.top_out_degree);
    doc["top_betweenness"] = rows_to_json(inputs.top_betweenness);

    json diag;
    diag["merged_groups"] = json::array();
    for (const auto& group : inputs.diagnostics.merged_groups) {
        json g = json::array();
        for (const auto& code : group) g.push_back(code.str());
        diag["merged_groups"].push_back(std::move(g));
    }
    diag["dangling_codes"] = json::array();
    for (const auto& code : inputs.diagnostics.dangling_codes) {
        diag["dangling_codes"].push_back(code.str());
    }
    diag["stub_nodes"] = json::array();
    for (NodeId id : inputs.diagnostics.stub_nodes) {
        diag["stub_nodes"].push_back({{"id", id}, {"label", cpn.node(id).label()}});
    }
    diag["removed_arcs"] = json::array();
    for (const auto& arc : inputs.diagnostics.removed_arcs) {
        diag["removed_arcs"].push_back({{"source", arc.source},
                                        {"target", arc.target},
                                        {"source_label", cpn.node(arc.source).label()},
                                        {"target_label", cpn.node(arc.target).label()},
                                        {"weight", arc.weight},
                                        {"provenance", provenance_name(arc.provenance)}});
    }
    diag["unresolved_cycles"] = json::array();
    for (const auto& cycle : inputs.diagnostics.unresolved_cycles) {
        json c = json::array();
        for (NodeId id : cycle) c.push_back(cpn.node(id).label());
        diag["unresolved_cycles"].push_back(std::move(c));
    }
    diag["self_loops"] = json::array();
    for (const auto& code : inputs.diagnostics.dropped_self_loops) {
        diag["self_loops"].push_back(code.str());
    }
    doc["diagnostics"] = std::move(diag);

    if (inputs.spearman) {
        doc["spearman"] = {{"rho", inputs.spearman->rho},
                           {"p_value", inputs.spearman->p_value},
                           {"n", inputs.spearman->n},
                           {"permutations", inputs.spearman->permutations},
                           {"seed", inputs.spearman->seed}};
    }
    rendered.json = doc.dump(2) + "\n";

    // Two-column table, one row per metric.
    std::ostringstream text;
    const auto& full = inputs.summary.full;
    const auto& largest = inputs.summary.largest_component;
    table_line(text, "metric", "full CPN", "largest component");
    auto int_row = [&](const std::string& name, std::int64_t a, std::int64_t b) {
        table_line(text, name, std::to_string(a), std::to_string(b));
    };
    int_row("nodes", full.nodes, largest.nodes);
    int_row("arcs", full.arcs, largest.arcs);
    table_line(text, "density", fmt("%.5f", full.density), fmt("%.5f", largest.density));
    int_row("weakly connected components", full.components, largest.components);
    table_line(text, "degree", fmt("%.2f", full.mean_k), fmt("%.2f", largest.mean_k));
    table_line(text, "in-degree", fmt("%.2f", full.mean_k_in), fmt("%.2f", largest.mean_k_in));
    table_line(text, "out-degree", fmt("%.2f", full.mean_k_out), fmt("%.2f", largest.mean_k_out));
    table_line(text, "weighted degree", fmt("%.2f", full.mean_wk), fmt("%.2f", largest.mean_wk));
    table_line(text, "weighted in-degree", fmt("%.2f", full.mean_wk_in),
               fmt("%.2f", largest.mean_wk_in));
    table_line(text, "weighted out-degree", fmt("%.2f", full.mean_wk_out),
               fmt("%.2f", largest.mean_wk_out));
    table_line(text, "diameter", "--",
               largest.diameter ? std::to_string(*largest.diameter) : "--");
    table_line(text, "characteristic path length", "--",
               largest.characteristic_path_length
                   ? fmt("%.2f", *largest.characteristic_path_length)
                   : "--");
    table_line(text, "betweenness centrality", "--",
               largest.mean_betweenness ? fmt("%.6f", *largest.mean_betweenness) : "--");

    auto render_rows = [&](const char* title, const std::vector<TableRow>& rows,
                           const char* value_spec) {
        text << "\n" << title << "\n";
        int rank = 1;
        for (const auto& row : rows) {
            char buf[128];
            std::snprintf(buf, sizeof(buf), "  %2d. %-32s %s\n", rank++, row.label.c_str(),
                          fmt(value_spec, row.value).c_str());
            text << buf;
        }
        if (rows.empty()) text << "  (none)\n";
    };
    render_rows("top courses by weighted out-degree", inputs.top_out_degree, "%.2f");
    render_rows("top courses by betweenness (largest component)", inputs.top_betweenness,
                "%.6f");

    text << "\ncomponent sizes:";
    for (auto size : inputs.summary.component_sizes) text << ' ' << size;
    text << "\n";

    const auto& d = inputs.diagnostics;
    if (!d.merged_groups.empty()) {
        text << "\nmerged cross-listing groups:\n";
        for (const auto& group : d.merged_groups) {
            text << " ";
            for (const auto& code : group) text << ' ' << code.str();
            text << "\n";
        }
    }
    if (!d.dangling_codes.empty()) {
        text << "\ndangling codes:";
        for (const auto& code : d.dangling_codes) text << ' ' << code.str();
        text << "\n";
    }
    if (!d.removed_arcs.empty()) {
        text << "\narcs removed by DAG enforcement:\n";
        for (const auto& arc : d.removed_arcs) {
            text << "  " << cpn.node(arc.source).label() << " -> "
                 << cpn.node(arc.target).label() << " (" << provenance_name(arc.provenance)
                 << ")\n";
        }
    }
    if (!d.unresolved_cycles.empty()) {
        text << "\nunresolved cycles:\n";
        for (const auto& cycle : d.unresolved_cycles) {
            text << " ";
            for (NodeId id : cycle) text << ' ' << cpn.node(id).label() << " ->";
            text << ' ' << cpn.node(cycle.front()).label() << "\n";
        }
    }
    if (inputs.spearman) {
        text << "\nspearman (weighted degree vs betweenness, largest component): rho = "
             << fmt("%.4f", inputs.spearman->rho) << ", p = "
             << fmt("%.6f", inputs.spearman->p_value) << " (" << inputs.spearman->n
             << " courses, " << inputs.spearman->permutations << " permutations)\n";
    }
    rendered.text = text.str();
    return rendered;
}

}  // namespace cpn
