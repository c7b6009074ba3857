#include "cpn/roles.hpp"

#include <algorithm>

#include "cpn/errors.hpp"

namespace cpn {

std::string role_name(Role role) {
    switch (role) {
        case Role::isolated: return "isolated";
        case Role::source: return "source";
        case Role::sink: return "sink";
        case Role::hub: return "hub";
        case Role::bridge: return "bridge";
        case Role::interior: return "interior";
    }
    return "?";
}

namespace {

// Ids whose value ranks within the top n, cutoff ties included, zeros never.
std::vector<NodeId> top_ranked(std::vector<std::pair<double, NodeId>> ranked, int n) {
    std::vector<NodeId> out;
    if (ranked.empty() || n <= 0) return out;
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    const std::size_t cut = std::min<std::size_t>(static_cast<std::size_t>(n), ranked.size());
    const double cutoff = ranked[cut - 1].first;
    for (const auto& [value, id] : ranked) {
        if (value < cutoff || value <= 0.0) break;
        out.push_back(id);
    }
    return out;
}

}  // namespace

RoleAssignment classify_roles(const Cpn& cpn, const std::vector<NodeMetrics>& metrics,
                              const RoleThresholds& thresholds) {
    if (metrics.size() != cpn.node_count()) {
        throw MissingMetricsError("metrics table does not cover every node");
    }
    for (std::size_t i = 0; i < metrics.size(); ++i) {
        if (metrics[i].id != static_cast<NodeId>(i)) {
            throw MissingMetricsError("metrics table misses node " + std::to_string(i));
        }
    }

    RoleAssignment roles(cpn.node_count());

    std::vector<std::pair<double, NodeId>> by_out_degree;
    std::vector<std::pair<double, NodeId>> by_betweenness;
    for (const auto& m : metrics) {
        by_out_degree.emplace_back(m.wk_out, m.id);
        if (m.betweenness) by_betweenness.emplace_back(*m.betweenness, m.id);
    }
    const auto hubs = top_ranked(std::move(by_out_degree), thresholds.hub_top_n);
    const auto bridges = top_ranked(std::move(by_betweenness), thresholds.bridge_top_n);

    for (const auto& m : metrics) {
        auto& set = roles[static_cast<std::size_t>(m.id)];
        if (m.k == 0) {
            set.insert(Role::isolated);
            continue;
        }
        if (m.k_in == 0 && m.k_out >= 1) set.insert(Role::source);
        if (m.k_out == 0 && m.k_in >= 1) set.insert(Role::sink);
    }
    for (NodeId id : hubs) {
        if (!roles[static_cast<std::size_t>(id)].count(Role::isolated)) {
            roles[static_cast<std::size_t>(id)].insert(Role::hub);
        }
    }
    for (NodeId id : bridges) {
        if (!roles[static_cast<std::size_t>(id)].count(Role::isolated)) {
            roles[static_cast<std::size_t>(id)].insert(Role::bridge);
        }
    }
    for (auto& set : roles) {
        if (set.empty()) set.insert(Role::interior);
    }
    return roles;
}

std::vector<TableRow> top_table(const Cpn& cpn, const std::vector<NodeMetrics>& metrics,
                                RankKey key, int n, bool include_cutoff_ties) {
    std::vector<TableRow> rows;
    for (const auto& m : metrics) {
        if (key == RankKey::betweenness) {
            if (!m.betweenness) continue;
            rows.push_back({cpn.node(m.id).label(), *m.betweenness});
        } else {
            rows.push_back({cpn.node(m.id).label(), m.wk_out});
        }
    }
    std::sort(rows.begin(), rows.end(), [](const TableRow& a, const TableRow& b) {
        if (a.value != b.value) return a.value > b.value;
        return a.label < b.label;
    });
    if (n < 0) n = 0;
    std::size_t keep = std::min<std::size_t>(static_cast<std::size_t>(n), rows.size());
    if (include_cutoff_ties && keep > 0) {
        while (keep < rows.size() && rows[keep].value == rows[keep - 1].value) ++keep;
    }
    rows.resize(keep);
    return rows;
}

}  // namespace cpn
