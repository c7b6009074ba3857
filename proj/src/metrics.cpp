#include "cpn/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "cpn/errors.hpp"

namespace cpn {

std::vector<NodeMetrics> degree_metrics(const Cpn& cpn) {
    std::vector<NodeMetrics> metrics(cpn.node_count());
    for (std::size_t i = 0; i < metrics.size(); ++i) metrics[i].id = static_cast<NodeId>(i);
    for (const auto& arc : cpn.arcs()) {
        auto& src = metrics[static_cast<std::size_t>(arc.source)];
        auto& tgt = metrics[static_cast<std::size_t>(arc.target)];
        src.k_out += 1;
        src.wk_out += arc.weight;
        tgt.k_in += 1;
        tgt.wk_in += arc.weight;
    }
    for (auto& m : metrics) {
        m.k = m.k_in + m.k_out;
        m.wk = m.wk_in + m.wk_out;
    }
    return metrics;
}

double density(const Cpn& cpn) {
    const auto n = static_cast<double>(cpn.node_count());
    if (cpn.node_count() < 2) return 0.0;
    return 2.0 * static_cast<double>(cpn.arc_count()) / (n * (n - 1.0));
}

ComponentSet weakly_connected_components(const Cpn& cpn) {
    const std::size_t n = cpn.node_count();
    std::vector<std::vector<NodeId>> undirected(n);
    for (const auto& arc : cpn.arcs()) {
        undirected[static_cast<std::size_t>(arc.source)].push_back(arc.target);
        undirected[static_cast<std::size_t>(arc.target)].push_back(arc.source);
    }

    ComponentSet set;
    std::vector<bool> visited(n, false);
    for (std::size_t root = 0; root < n; ++root) {
        if (visited[root]) continue;
        std::vector<NodeId> component;
        std::vector<NodeId> stack{static_cast<NodeId>(root)};
        visited[root] = true;
        while (!stack.empty()) {
            NodeId v = stack.back();
            stack.pop_back();
            component.push_back(v);
            for (NodeId w : undirected[static_cast<std::size_t>(v)]) {
                if (!visited[static_cast<std::size_t>(w)]) {
                    visited[static_cast<std::size_t>(w)] = true;
                    stack.push_back(w);
                }
            }
        }
        std::sort(component.begin(), component.end());
        set.components.push_back(std::move(component));
    }
    std::sort(set.components.begin(), set.components.end(),
              [](const std::vector<NodeId>& a, const std::vector<NodeId>& b) {
                  if (a.size() != b.size()) return a.size() > b.size();
                  return a.front() < b.front();
              });
    return set;
}

void annotate_betweenness(std::vector<NodeMetrics>& metrics,
                          const std::vector<std::pair<NodeId, double>>& scores) {
    for (const auto& [id, score] : scores) {
        metrics.at(static_cast<std::size_t>(id)).betweenness = score;
    }
}

namespace {

std::vector<double> average_ranks(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
        i = j + 1;
    }
    return ranks;
}

double pearson(std::span<const double> a, std::span<const double> b) {
    const auto n = static_cast<double>(a.size());
    double mean_a = 0.0, mean_b = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        mean_a += a[i];
        mean_b += b[i];
    }
    mean_a /= n;
    mean_b /= n;
    double cov = 0.0, var_a = 0.0, var_b = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = a[i] - mean_a;
        const double db = b[i] - mean_b;
        cov += da * db;
        var_a += da * da;
        var_b += db * db;
    }
    return cov / std::sqrt(var_a * var_b);
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Platform-stable Fisher-Yates so identical seeds permute identically
// everywhere (std::shuffle is implementation-defined).
void shuffle_stable(std::vector<double>& values, std::uint64_t seed) {
    std::uint64_t state = seed;
    auto next = [&state] {
        state = splitmix64(state);
        return state;
    };
    for (std::size_t i = values.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(next() % i);
        std::swap(values[i - 1], values[j]);
    }
}

bool is_constant(std::span<const double> values) {
    return std::all_of(values.begin(), values.end(),
                       [&](double v) { return v == values.front(); });
}

}  // namespace

SpearmanResult spearman(std::span<const double> xs, std::span<const double> ys,
                        const SpearmanOptions& options) {
    if (xs.size() != ys.size()) throw std::invalid_argument("sequence lengths differ");
    if (xs.size() < 3) throw std::invalid_argument("need at least 3 points");
    if (is_constant(xs) || is_constant(ys)) {
        throw DegenerateInputError("rank correlation undefined for a constant sequence");
    }

    const auto rank_x = average_ranks(xs);
    const auto rank_y = average_ranks(ys);

    SpearmanResult result;
    result.rho = pearson(rank_x, rank_y);

    const double threshold = std::abs(result.rho) - 1e-12;
    const int permutations = options.permutations;
    std::int64_t hits = 0;
#pragma omp parallel for reduction(+ : hits) schedule(static)
    for (int iter = 0; iter < permutations; ++iter) {
        std::vector<double> permuted(rank_y);
        shuffle_stable(permuted,
                       splitmix64(options.seed) + static_cast<std::uint64_t>(iter));
        if (std::abs(pearson(rank_x, permuted)) >= threshold) ++hits;
    }
    result.p_value = (static_cast<double>(hits) + 1.0) / (static_cast<double>(permutations) + 1.0);
    return result;
}

SummaryReport summarize(const Cpn& cpn) {
    SummaryReport report;
    const auto metrics = degree_metrics(cpn);
    const auto components = weakly_connected_components(cpn);
    for (const auto& comp : components.components) {
        report.component_sizes.push_back(static_cast<std::int64_t>(comp.size()));
    }

    auto fill_scope = [&](ScopeSummary& scope, std::span<const NodeId> nodes,
                          std::int64_t arc_count, std::int64_t component_count) {
        scope.nodes = static_cast<std::int64_t>(nodes.size());
        scope.arcs = arc_count;
        scope.components = component_count;
        const auto n = static_cast<double>(scope.nodes);
        if (scope.nodes >= 2) {
            scope.density = 2.0 * static_cast<double>(arc_count) / (n * (n - 1.0));
        }
        if (scope.nodes == 0) return;
        double k = 0, k_in = 0, k_out = 0, wk = 0, wk_in = 0, wk_out = 0;
        for (NodeId v : nodes) {
            const auto& m = metrics[static_cast<std::size_t>(v)];
            k += m.k;
            k_in += m.k_in;
            k_out += m.k_out;
            wk += m.wk;
            wk_in += m.wk_in;
            wk_out += m.wk_out;
        }
        scope.mean_k = k / n;
        scope.mean_k_in = k_in / n;
        scope.mean_k_out = k_out / n;
        scope.mean_wk = wk / n;
        scope.mean_wk_in = wk_in / n;
        scope.mean_wk_out = wk_out / n;
    };

    std::vector<NodeId> all_nodes(cpn.node_count());
    std::iota(all_nodes.begin(), all_nodes.end(), 0);
    fill_scope(report.full, all_nodes, static_cast<std::int64_t>(cpn.arc_count()),
               static_cast<std::int64_t>(components.components.size()));

    const auto* largest = components.largest();
    if (!largest) return report;

    // Every arc incident to a component's node stays inside it, but count
    // explicitly anyway.
    std::vector<bool> in_largest(cpn.node_count(), false);
    for (NodeId v : *largest) in_largest[static_cast<std::size_t>(v)] = true;
    std::int64_t largest_arcs = 0;
    for (const auto& arc : cpn.arcs()) {
        if (in_largest[static_cast<std::size_t>(arc.source)] &&
            in_largest[static_cast<std::size_t>(arc.target)]) {
            ++largest_arcs;
        }
    }
    fill_scope(report.largest_component, *largest, largest_arcs, 1);

    try {
        const auto paths = path_metrics(cpn, *largest);
        if (paths.reachable_pairs >= 2) {
            report.largest_component.diameter = paths.diameter;
            report.largest_component.characteristic_path_length =
                paths.characteristic_path_length;
        }
    } catch (const NoReachablePairsError&) {
        // leave the path fields absent
    }

    const auto scores = betweenness(cpn, *largest);
    double total = 0.0;
    for (const auto& [id, score] : scores) total += score;
    report.largest_component.mean_betweenness =
        scores.empty() ? 0.0 : total / static_cast<double>(scores.size());
    return report;
}

}  // namespace cpn
