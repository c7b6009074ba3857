#ifndef CPN_METRICS_HPP
#define CPN_METRICS_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cpn/graph.hpp"

namespace cpn {

struct NodeMetrics {
    NodeId id = 0;
    int k_in = 0;
    int k_out = 0;
    int k = 0;           // k_in + k_out
    double wk_in = 0.0;  // summed incident arc weights, by direction
    double wk_out = 0.0;
    double wk = 0.0;
    /// Normalized betweenness; absent for nodes outside the analyzed component.
    std::optional<double> betweenness;
};

/// Degree family for every node, indexed by node id. Betweenness is left
/// absent; see betweenness() / annotate_betweenness().
std::vector<NodeMetrics> degree_metrics(const Cpn& cpn);

/// Undirected-form density 2m / (n(n-1)); 0 when n < 2.
double density(const Cpn& cpn);

/// Weakly connected components: partition of the node set ignoring arc
/// direction, each component ascending by id, components ordered by
/// descending size then smallest member id.
struct ComponentSet {
    std::vector<std::vector<NodeId>> components;

    const std::vector<NodeId>* largest() const {
        return components.empty() ? nullptr : &components.front();
    }
};

ComponentSet weakly_connected_components(const Cpn& cpn);

/// Directed unweighted betweenness over the subgraph induced by `component`
/// (pair-dependency accumulation, one BFS per source). Returns (node, score)
/// pairs ascending by id, one per component node. Normalization divides by
/// (n-1)(n-2) for n >= 3; components with n < 3 yield all zeros.
///
/// The parallel kernel distributes sources across OpenMP threads but
/// accumulates per-node sums in fixed ascending source order, so its output
/// is bit-identical to the serial reference regardless of schedule.
std::vector<std::pair<NodeId, double>> betweenness(const Cpn& cpn,
                                                   std::span<const NodeId> component,
                                                   bool normalized = true);

/// Serial reference implementation; kept for testing and benchmarking.
std::vector<std::pair<NodeId, double>> betweenness_serial(const Cpn& cpn,
                                                          std::span<const NodeId> component,
                                                          bool normalized = true);

/// Copy betweenness scores into a metrics table (matching by node id).
void annotate_betweenness(std::vector<NodeMetrics>& metrics,
                          const std::vector<std::pair<NodeId, double>>& scores);

struct PathMetrics {
    int diameter = 0;                        // longest finite shortest path
    double characteristic_path_length = 0.0; // mean over reachable ordered pairs
    std::int64_t reachable_pairs = 0;
};

/// BFS shortest paths over directed arcs within the induced subgraph. Throws
/// NoReachablePairsError when no ordered pair has a finite path.
PathMetrics path_metrics(const Cpn& cpn, std::span<const NodeId> component);

/// Serial reference implementation.
PathMetrics path_metrics_serial(const Cpn& cpn, std::span<const NodeId> component);

struct SpearmanOptions {
    int permutations = 10000;
    std::uint64_t seed = 1;
};

struct SpearmanResult {
    double rho = 0.0;
    double p_value = 1.0;  // two-sided Monte Carlo permutation estimate
};

/// Spearman rank correlation with average ranks for ties. Throws
/// std::invalid_argument on length mismatch or fewer than 3 points, and
/// DegenerateInputError when either sequence is constant.
SpearmanResult spearman(std::span<const double> xs, std::span<const double> ys,
                        const SpearmanOptions& options = {});

/// One column of the summary table.
struct ScopeSummary {
    std::int64_t nodes = 0;
    std::int64_t arcs = 0;
    double density = 0.0;
    std::int64_t components = 0;
    double mean_k = 0.0;
    double mean_k_in = 0.0;
    double mean_k_out = 0.0;
    double mean_wk = 0.0;
    double mean_wk_in = 0.0;
    double mean_wk_out = 0.0;
    std::optional<int> diameter;                       // largest component only
    std::optional<double> characteristic_path_length;  // largest component only
    std::optional<double> mean_betweenness;            // largest component only
};

struct SummaryReport {
    ScopeSummary full;
    ScopeSummary largest_component;
    std::vector<std::int64_t> component_sizes;  // descending
};

/// Full-graph and largest-component summary. Path and betweenness fields are
/// computed on the largest weakly connected component only and are absent
/// when that component has no reachable ordered pair.
SummaryReport summarize(const Cpn& cpn);

}  // namespace cpn

#endif
