#ifndef CPN_ROLES_HPP
#define CPN_ROLES_HPP

#include <set>
#include <string>
#include <vector>

#include "cpn/graph.hpp"
#include "cpn/metrics.hpp"

namespace cpn {

enum class Role { isolated, source, sink, hub, bridge, interior };

std::string role_name(Role role);

struct RoleThresholds {
    int hub_top_n = 10;
    int bridge_top_n = 10;
};

/// Role sets per node id (index == id). isolated excludes every other role;
/// every non-isolated node carries at least one role.
using RoleAssignment = std::vector<std::set<Role>>;

/// isolated <=> k = 0; source <=> k_in = 0 and k_out >= 1; sink symmetric;
/// hub <=> positive weighted out-degree ranking within hub_top_n (cutoff ties
/// included); bridge <=> positive betweenness ranking within bridge_top_n
/// among nodes that have a betweenness value; interior <=> none of the above.
/// Roles other than isolated may combine. Throws MissingMetricsError when the
/// metrics table does not cover every node.
RoleAssignment classify_roles(const Cpn& cpn, const std::vector<NodeMetrics>& metrics,
                              const RoleThresholds& thresholds = {});

enum class RankKey { weighted_out_degree, betweenness };

struct TableRow {
    std::string label;
    double value = 0.0;

    bool operator==(const TableRow&) const = default;
};

/// League table: descending by value, ties broken by ascending label,
/// truncated to n rows (plus the rows tied with the cutoff value when
/// include_cutoff_ties is set). Degree tables rank every node; betweenness
/// tables rank only nodes carrying a betweenness value.
std::vector<TableRow> top_table(const Cpn& cpn, const std::vector<NodeMetrics>& metrics,
                                RankKey key, int n, bool include_cutoff_ties = false);

}  // namespace cpn

#endif
