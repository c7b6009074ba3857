// Test-only reference implementations and generators, independent of the
// library kernels they are used to check.

#ifndef CPN_TESTS_ORACLES_HPP
#define CPN_TESTS_ORACLES_HPP

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "cpn/builder.hpp"
#include "cpn/catalog.hpp"
#include "cpn/graph.hpp"

namespace oracles {

constexpr int kInf = 1 << 28;

struct LocalGraph {
    std::vector<cpn::NodeId> ids;  // sorted component, local index -> id
    std::vector<std::vector<int>> adj;
    std::vector<std::vector<int>> dist;  // Floyd-Warshall
};

inline LocalGraph localize(const cpn::Cpn& graph, std::vector<cpn::NodeId> component) {
    LocalGraph g;
    std::sort(component.begin(), component.end());
    g.ids = std::move(component);
    std::vector<int> local(graph.node_count(), -1);
    for (std::size_t i = 0; i < g.ids.size(); ++i) {
        local[static_cast<std::size_t>(g.ids[i])] = static_cast<int>(i);
    }
    const int n = static_cast<int>(g.ids.size());
    g.adj.resize(static_cast<std::size_t>(n));
    g.dist.assign(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), kInf));
    for (int i = 0; i < n; ++i) g.dist[i][i] = 0;
    for (const auto& arc : graph.arcs()) {
        int s = local[static_cast<std::size_t>(arc.source)];
        int t = local[static_cast<std::size_t>(arc.target)];
        if (s < 0 || t < 0) continue;
        g.adj[static_cast<std::size_t>(s)].push_back(t);
        g.dist[s][t] = 1;
    }
    for (int k = 0; k < n; ++k) {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                g.dist[i][j] = std::min(g.dist[i][j], g.dist[i][k] + g.dist[k][j]);
            }
        }
    }
    return g;
}

namespace detail {

inline void enumerate_paths(const LocalGraph& g, int u, int t, int s, std::vector<int>& path,
                            long long& sigma, std::vector<long long>& through) {
    if (u == t) {
        ++sigma;
        for (std::size_t i = 1; i + 1 < path.size(); ++i) ++through[path[i]];
        return;
    }
    for (int w : g.adj[static_cast<std::size_t>(u)]) {
        // stay on shortest paths only
        if (g.dist[s][u] + 1 != g.dist[s][w]) continue;
        if (g.dist[s][w] + g.dist[w][t] != g.dist[s][t]) continue;
        path.push_back(w);
        enumerate_paths(g, w, t, s, path, sigma, through);
        path.pop_back();
    }
}

}  // namespace detail

// Betweenness by explicit enumeration of every shortest path between every
// ordered pair. Returns (id, score) ascending by id.
inline std::vector<std::pair<cpn::NodeId, double>> betweenness_brute(
    const cpn::Cpn& graph, const std::vector<cpn::NodeId>& component, bool normalized = true) {
    const LocalGraph g = localize(graph, component);
    const int n = static_cast<int>(g.ids.size());
    std::vector<double> score(static_cast<std::size_t>(n), 0.0);

    for (int s = 0; s < n; ++s) {
        for (int t = 0; t < n; ++t) {
            if (s == t || g.dist[s][t] >= kInf || g.dist[s][t] < 2) continue;
            long long sigma = 0;
            std::vector<long long> through(static_cast<std::size_t>(n), 0);
            std::vector<int> path{s};
            detail::enumerate_paths(g, s, t, s, path, sigma, through);
            for (int v = 0; v < n; ++v) {
                if (through[v] > 0) {
                    score[v] += static_cast<double>(through[v]) / static_cast<double>(sigma);
                }
            }
        }
    }
    if (normalized) {
        if (n >= 3) {
            const double norm = static_cast<double>(n - 1) * static_cast<double>(n - 2);
            for (double& x : score) x /= norm;
        } else {
            std::fill(score.begin(), score.end(), 0.0);
        }
    }
    std::vector<std::pair<cpn::NodeId, double>> out;
    for (int i = 0; i < n; ++i) out.emplace_back(g.ids[static_cast<std::size_t>(i)], score[i]);
    return out;
}

struct BrutePathMetrics {
    int diameter = 0;
    double cpl = 0.0;
    long long pairs = 0;
};

inline BrutePathMetrics path_metrics_brute(const cpn::Cpn& graph,
                                           const std::vector<cpn::NodeId>& component) {
    const LocalGraph g = localize(graph, component);
    const int n = static_cast<int>(g.ids.size());
    BrutePathMetrics out;
    long long total = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j || g.dist[i][j] >= kInf) continue;
            total += g.dist[i][j];
            ++out.pairs;
            out.diameter = std::max(out.diameter, g.dist[i][j]);
        }
    }
    if (out.pairs > 0) out.cpl = static_cast<double>(total) / static_cast<double>(out.pairs);
    return out;
}

// Union-find closure of the cross-listing relation.
inline std::map<cpn::CourseCode, std::vector<cpn::CourseCode>> cross_groups_unionfind(
    const cpn::Catalog& catalog) {
    std::map<cpn::CourseCode, cpn::CourseCode> parent;
    std::function<cpn::CourseCode(cpn::CourseCode)> find =
        [&](cpn::CourseCode x) -> cpn::CourseCode {
        if (!parent.count(x)) parent[x] = x;
        if (parent[x] == x) return x;
        return parent[x] = find(parent[x]);
    };
    for (const auto& record : catalog.records) {
        for (const auto& cross : record.cross_listings) {
            if (cross == record.code) continue;
            auto a = find(record.code);
            auto b = find(cross);
            if (!(a == b)) parent[a] = b;
        }
    }
    std::map<cpn::CourseCode, std::vector<cpn::CourseCode>> groups;
    std::map<cpn::CourseCode, std::vector<cpn::CourseCode>> by_root;
    for (const auto& [code, _] : parent) by_root[find(code)].push_back(code);
    for (auto& [root, members] : by_root) {
        if (members.size() < 2) continue;
        std::sort(members.begin(), members.end());
        for (const auto& member : members) groups[member] = members;
    }
    return groups;
}

// Random DAG over n nodes: arcs only from lower to higher index.
inline cpn::Cpn random_dag(int n, double arc_probability, std::mt19937_64& rng,
                           bool random_weights = false) {
    cpn::Cpn graph;
    for (int i = 0; i < n; ++i) {
        graph.add_node({cpn::CourseCode{"T", std::to_string(i)}}, {"node " + std::to_string(i)});
    }
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (uniform(rng) >= arc_probability) continue;
            const double weight = random_weights ? 0.25 + 0.75 * uniform(rng) : 1.0;
            graph.add_arc(i, j, weight, cpn::ArcProvenance::prerequisite);
        }
    }
    return graph;
}

inline std::vector<cpn::NodeId> all_nodes(const cpn::Cpn& graph) {
    std::vector<cpn::NodeId> ids(graph.node_count());
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<cpn::NodeId>(i);
    return ids;
}

// Catalogue with OR-groups of size 1..4 whose alternatives are all distinct
// within each record; no corequisites or cross-listings, so every arc belongs
// to exactly one (record, group) pair.
inline cpn::Catalog random_catalog_for_weights(std::mt19937_64& rng) {
    cpn::Catalog catalog;
    const int n = 6 + static_cast<int>(rng() % 10);
    for (int i = 0; i < n; ++i) {
        cpn::CourseRecord record;
        record.code = {"GEN", std::to_string(100 + i)};
        record.title = "Course " + std::to_string(i);
        catalog.records.push_back(record);
    }
    for (int i = 0; i < n; ++i) {
        std::vector<int> others;
        for (int j = 0; j < n; ++j) {
            if (j != i) others.push_back(j);
        }
        std::shuffle(others.begin(), others.end(), rng);
        std::size_t cursor = 0;
        const int conjuncts = static_cast<int>(rng() % 3);
        for (int c = 0; c < conjuncts; ++c) {
            const std::size_t m = 1 + rng() % 4;
            if (cursor + m > others.size()) break;
            cpn::OrGroup group;
            for (std::size_t k = 0; k < m; ++k) {
                group.alternatives.push_back(catalog.records[others[cursor++]].code);
            }
            catalog.records[i].prerequisites.conjuncts.push_back(std::move(group));
        }
    }
    return catalog;
}

// Catalogue exercising everything the interchange format carries, including
// awkward strings, for round-trip checks.
inline cpn::Catalog random_catalog_full(std::mt19937_64& rng) {
    cpn::Catalog catalog = random_catalog_for_weights(rng);
    catalog.source_label = "random seed catalogue \"" + std::to_string(rng() % 1000) + "\"";
    const auto n = catalog.records.size();
    for (std::size_t i = 0; i < n; ++i) {
        auto& record = catalog.records[i];
        if (rng() % 3 == 0) {
            cpn::CoreqDecl coreq;
            coreq.target = catalog.records[rng() % n].code;
            coreq.mode = rng() % 2 ? cpn::CoreqStrength::hard : cpn::CoreqStrength::soft;
            record.corequisites.push_back(coreq);
        }
        if (rng() % 4 == 0) {
            cpn::CourseCode cross = catalog.records[rng() % n].code;
            if (!(cross == record.code) &&
                std::find(record.cross_listings.begin(), record.cross_listings.end(), cross) ==
                    record.cross_listings.end()) {
                record.cross_listings.push_back(cross);
            }
        }
        if (rng() % 3 == 0) {
            record.soft_rules.push_back("Junior standing or consent\tof \"instructor\" #" +
                                        std::to_string(rng() % 100));
        }
    }
    return catalog;
}

}  // namespace oracles

#endif
