#include <algorithm>
#include <cstdint>
#include <vector>

#include "cpn/errors.hpp"
#include "cpn/metrics.hpp"

namespace cpn {

namespace {

// Subgraph induced by a component, relabelled to dense local indices in
// ascending id order.
struct Induced {
    std::vector<NodeId> ids;             // local -> global
    std::vector<std::vector<int>> adj;   // out-neighbours, ascending
    std::vector<std::vector<int>> radj;  // in-neighbours, ascending
};

Induced induce(const Cpn& cpn, std::span<const NodeId> component) {
    Induced g;
    g.ids.assign(component.begin(), component.end());
    std::sort(g.ids.begin(), g.ids.end());
    g.ids.erase(std::unique(g.ids.begin(), g.ids.end()), g.ids.end());

    std::vector<int> local(cpn.node_count(), -1);
    for (std::size_t i = 0; i < g.ids.size(); ++i) {
        local[static_cast<std::size_t>(g.ids[i])] = static_cast<int>(i);
    }
    g.adj.resize(g.ids.size());
    g.radj.resize(g.ids.size());
    for (const auto& arc : cpn.arcs()) {
        int s = local[static_cast<std::size_t>(arc.source)];
        int t = local[static_cast<std::size_t>(arc.target)];
        if (s < 0 || t < 0) continue;
        g.adj[static_cast<std::size_t>(s)].push_back(t);
        g.radj[static_cast<std::size_t>(t)].push_back(s);
    }
    for (auto& list : g.radj) std::sort(list.begin(), list.end());
    return g;  // arcs sorted by (source, target) => out-adjacency ascending
}

// Scratch space for one single-source pass, reused across sources. Flat
// buffers only; no allocation happens inside the pass.
struct BrandesScratch {
    std::vector<int> dist;
    std::vector<std::int64_t> sigma;
    std::vector<int> order;  // BFS visitation order

    explicit BrandesScratch(std::size_t n) : dist(n), sigma(n) { order.reserve(n); }
};

// Pair dependencies of one source, accumulated into delta (delta must be
// zero-filled, size n). Deterministic: FIFO BFS over ascending out-adjacency,
// dependency sweep over ascending in-adjacency.
void brandes_source(const Induced& g, int source, BrandesScratch& scratch,
                    std::vector<double>& delta) {
    std::fill(scratch.dist.begin(), scratch.dist.end(), -1);
    std::fill(scratch.sigma.begin(), scratch.sigma.end(), 0);
    scratch.order.clear();

    scratch.dist[static_cast<std::size_t>(source)] = 0;
    scratch.sigma[static_cast<std::size_t>(source)] = 1;
    scratch.order.push_back(source);
    for (std::size_t head = 0; head < scratch.order.size(); ++head) {
        const int v = scratch.order[head];
        const int next_dist = scratch.dist[static_cast<std::size_t>(v)] + 1;
        for (int w : g.adj[static_cast<std::size_t>(v)]) {
            if (scratch.dist[static_cast<std::size_t>(w)] < 0) {
                scratch.dist[static_cast<std::size_t>(w)] = next_dist;
                scratch.order.push_back(w);
            }
            if (scratch.dist[static_cast<std::size_t>(w)] == next_dist) {
                scratch.sigma[static_cast<std::size_t>(w)] +=
                    scratch.sigma[static_cast<std::size_t>(v)];
            }
        }
    }

    // Predecessors of w are the in-neighbours one BFS level up.
    for (auto it = scratch.order.rbegin(); it != scratch.order.rend(); ++it) {
        const int w = *it;
        const double coeff = 1.0 + delta[static_cast<std::size_t>(w)];
        for (int v : g.radj[static_cast<std::size_t>(w)]) {
            if (scratch.dist[static_cast<std::size_t>(v)] + 1 !=
                scratch.dist[static_cast<std::size_t>(w)]) {
                continue;
            }
            delta[static_cast<std::size_t>(v)] +=
                static_cast<double>(scratch.sigma[static_cast<std::size_t>(v)]) /
                static_cast<double>(scratch.sigma[static_cast<std::size_t>(w)]) * coeff;
        }
    }
    delta[static_cast<std::size_t>(source)] = 0.0;  // the source contributes nothing to itself
}

std::vector<std::pair<NodeId, double>> finish(const Induced& g, std::vector<double> score,
                                              bool normalized) {
    const std::size_t n = g.ids.size();
    if (normalized) {
        if (n >= 3) {
            const double norm = static_cast<double>(n - 1) * static_cast<double>(n - 2);
            for (double& s : score) s /= norm;
        } else {
            std::fill(score.begin(), score.end(), 0.0);
        }
    }
    std::vector<std::pair<NodeId, double>> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.emplace_back(g.ids[i], score[i]);
    return out;
}

}  // namespace

std::vector<std::pair<NodeId, double>> betweenness_serial(const Cpn& cpn,
                                                          std::span<const NodeId> component,
                                                          bool normalized) {
    const Induced g = induce(cpn, component);
    const std::size_t n = g.ids.size();
    std::vector<double> score(n, 0.0);
    BrandesScratch scratch(n);
    std::vector<double> delta(n, 0.0);
    for (std::size_t s = 0; s < n; ++s) {
        std::fill(delta.begin(), delta.end(), 0.0);
        brandes_source(g, static_cast<int>(s), scratch, delta);
        for (std::size_t v = 0; v < n; ++v) score[v] += delta[v];
    }
    return finish(g, std::move(score), normalized);
}

std::vector<std::pair<NodeId, double>> betweenness(const Cpn& cpn,
                                                   std::span<const NodeId> component,
                                                   bool normalized) {
    const Induced g = induce(cpn, component);
    const std::size_t n = g.ids.size();
    std::vector<double> score(n, 0.0);

    // Sources are processed in fixed-size blocks: each block's deltas are
    // computed in parallel, then folded into the totals in ascending source
    // order. The summation order is therefore identical to the serial kernel
    // and the result bit-identical for any thread count.
    constexpr std::size_t kBlock = 64;
    std::vector<std::vector<double>> deltas(std::min(kBlock, std::max<std::size_t>(n, 1)),
                                            std::vector<double>(n, 0.0));
#pragma omp parallel
    {
        BrandesScratch scratch(n);
        for (std::size_t base = 0; base < n; base += kBlock) {
            const auto count = static_cast<std::int64_t>(std::min(kBlock, n - base));
#pragma omp for schedule(dynamic)
            for (std::int64_t i = 0; i < count; ++i) {
                auto& delta = deltas[static_cast<std::size_t>(i)];
                std::fill(delta.begin(), delta.end(), 0.0);
                brandes_source(g, static_cast<int>(base + static_cast<std::size_t>(i)), scratch,
                               delta);
            }
#pragma omp single
            {
                for (std::int64_t i = 0; i < count; ++i) {
                    const auto& delta = deltas[static_cast<std::size_t>(i)];
                    for (std::size_t v = 0; v < n; ++v) score[v] += delta[v];
                }
            }
        }
    }
    return finish(g, std::move(score), normalized);
}

namespace {

// BFS distances from one source; returns (sum of finite distances, count,
// max), excluding the source itself.
struct SourceReach {
    std::int64_t sum = 0;
    std::int64_t pairs = 0;
    int max_dist = 0;
};

SourceReach bfs_reach(const Induced& g, int source, std::vector<int>& dist,
                      std::vector<int>& queue) {
    std::fill(dist.begin(), dist.end(), -1);
    queue.clear();
    dist[static_cast<std::size_t>(source)] = 0;
    queue.push_back(source);
    SourceReach reach;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        int v = queue[head];
        for (int w : g.adj[static_cast<std::size_t>(v)]) {
            if (dist[static_cast<std::size_t>(w)] >= 0) continue;
            dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(v)] + 1;
            queue.push_back(w);
            reach.sum += dist[static_cast<std::size_t>(w)];
            reach.pairs += 1;
            reach.max_dist = std::max(reach.max_dist, dist[static_cast<std::size_t>(w)]);
        }
    }
    return reach;
}

PathMetrics combine(std::int64_t sum, std::int64_t pairs, int max_dist) {
    if (pairs == 0) {
        throw NoReachablePairsError("component has no finite directed path between any pair");
    }
    PathMetrics out;
    out.diameter = max_dist;
    out.characteristic_path_length = static_cast<double>(sum) / static_cast<double>(pairs);
    out.reachable_pairs = pairs;
    return out;
}

}  // namespace

PathMetrics path_metrics_serial(const Cpn& cpn, std::span<const NodeId> component) {
    const Induced g = induce(cpn, component);
    const std::size_t n = g.ids.size();
    std::vector<int> dist(n);
    std::vector<int> queue;
    queue.reserve(n);
    std::int64_t sum = 0, pairs = 0;
    int max_dist = 0;
    for (std::size_t s = 0; s < n; ++s) {
        const auto reach = bfs_reach(g, static_cast<int>(s), dist, queue);
        sum += reach.sum;
        pairs += reach.pairs;
        max_dist = std::max(max_dist, reach.max_dist);
    }
    return combine(sum, pairs, max_dist);
}

PathMetrics path_metrics(const Cpn& cpn, std::span<const NodeId> component) {
    const Induced g = induce(cpn, component);
    const auto n = static_cast<std::int64_t>(g.ids.size());
    std::int64_t sum = 0, pairs = 0;
    int max_dist = 0;

    // Integer reductions are associative, so the parallel result matches the
    // serial kernel exactly.
#pragma omp parallel
    {
        std::vector<int> dist(static_cast<std::size_t>(n));
        std::vector<int> queue;
        queue.reserve(static_cast<std::size_t>(n));
#pragma omp for schedule(dynamic, 16) reduction(+ : sum, pairs) reduction(max : max_dist)
        for (std::int64_t s = 0; s < n; ++s) {
            const auto reach = bfs_reach(g, static_cast<int>(s), dist, queue);
            sum += reach.sum;
            pairs += reach.pairs;
            max_dist = std::max(max_dist, reach.max_dist);
        }
    }
    return combine(sum, pairs, max_dist);
}

}  // namespace cpn
