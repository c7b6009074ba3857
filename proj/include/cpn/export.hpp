#ifndef CPN_EXPORT_HPP
#define CPN_EXPORT_HPP

#include <optional>
#include <string>
#include <vector>

#include "cpn/builder.hpp"
#include "cpn/graph.hpp"
#include "cpn/metrics.hpp"
#include "cpn/roles.hpp"

namespace cpn {

enum class SizeBy { none, out_degree, betweenness };

struct ExportOptions {
    bool include_weights = true;
    bool include_roles = false;
    SizeBy size_by = SizeBy::none;
};

/// GraphML document: typed keys declared up front, one node element per
/// CpnNode (label, member codes, optional metric/role/size attributes), one
/// directed edge per arc. Elements ordered by ascending node id, then arcs by
/// (source, target); identical inputs yield identical bytes. Weights carry
/// exactly 6 significant digits. Throws MissingDataError when include_roles
/// or size_by demand inputs that were not supplied.
std::string export_graphml(const Cpn& cpn, const std::vector<NodeMetrics>* metrics = nullptr,
                           const RoleAssignment* roles = nullptr,
                           const ExportOptions& options = {});

/// DOT digraph with quoted node labels; same ordering, option and error
/// behaviour as the GraphML export.
std::string export_dot(const Cpn& cpn, const std::vector<NodeMetrics>* metrics = nullptr,
                       const RoleAssignment* roles = nullptr, const ExportOptions& options = {});

struct SpearmanSummary {
    double rho = 0.0;
    double p_value = 1.0;
    std::int64_t n = 0;
    int permutations = 0;
    std::uint64_t seed = 0;
};

struct ReportInputs {
    SummaryReport summary;
    std::vector<TableRow> top_out_degree;
    std::vector<TableRow> top_betweenness;
    ComponentSet components;
    BuildDiagnostics diagnostics;
    std::optional<SpearmanSummary> spearman;
};

struct RenderedReport {
    std::string json;  // full precision, normative field names
    std::string text;  // two-column table plus top tables and diagnostics
};

RenderedReport export_report(const Cpn& cpn, const ReportInputs& inputs);

}  // namespace cpn

#endif
