// Compares the OpenMP metric kernels against their serial references on
// random layered DAGs: checks that the outputs agree (bit-identical for
// betweenness) and reports timings.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <vector>

#include <CLI11.hpp>

#include "cpn/graph.hpp"
#include "cpn/metrics.hpp"

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Random DAG: arcs only go from lower to higher index.
cpn::Cpn random_dag(int n, double avg_out_degree, std::uint64_t seed) {
    cpn::Cpn graph;
    for (int i = 0; i < n; ++i) {
        graph.add_node({cpn::CourseCode{"BENCH", std::to_string(i)}});
    }
    const double p = avg_out_degree / static_cast<double>(n);
    std::uint64_t state = seed;
    // Cap the forward window so path lengths stay interesting.
    const int window = std::max(8, n / 8);
    for (int i = 0; i + 1 < n; ++i) {
        for (int j = i + 1; j < std::min(n, i + 1 + window); ++j) {
            state = splitmix64(state);
            const double u = static_cast<double>(state >> 11) * 0x1.0p-53;
            if (u < p * n / window) {
                graph.add_arc(i, j, 1.0, cpn::ArcProvenance::prerequisite);
            }
        }
    }
    return graph;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"serial vs parallel metric kernel benchmark"};
    int nodes = 4000;
    double avg_out_degree = 4.0;
    std::uint64_t seed = 7;
    int reps = 3;
    app.add_option("--nodes", nodes, "graph size")->capture_default_str();
    app.add_option("--degree", avg_out_degree, "average out-degree")->capture_default_str();
    app.add_option("--seed", seed, "graph seed")->capture_default_str();
    app.add_option("--reps", reps, "repetitions (best time reported)")->capture_default_str();
    CLI11_PARSE(app, argc, argv);

    const auto graph = random_dag(nodes, avg_out_degree, seed);
    std::vector<cpn::NodeId> all(graph.node_count());
    std::iota(all.begin(), all.end(), 0);
    std::printf("graph: %zu nodes, %zu arcs\n", graph.node_count(), graph.arc_count());

    auto best = [&](auto&& fn) {
        double best_time = 1e300;
        for (int r = 0; r < reps; ++r) {
            const auto start = std::chrono::steady_clock::now();
            fn();
            best_time = std::min(best_time, seconds_since(start));
        }
        return best_time;
    };

    std::vector<std::pair<cpn::NodeId, double>> serial_scores, parallel_scores;
    const double t_bc_serial =
        best([&] { serial_scores = cpn::betweenness_serial(graph, all); });
    const double t_bc_parallel = best([&] { parallel_scores = cpn::betweenness(graph, all); });

    bool identical = serial_scores.size() == parallel_scores.size();
    for (std::size_t i = 0; identical && i < serial_scores.size(); ++i) {
        identical = serial_scores[i] == parallel_scores[i];
    }
    std::printf("betweenness   serial %8.3fs   parallel %8.3fs   speedup %5.2fx   %s\n",
                t_bc_serial, t_bc_parallel, t_bc_serial / t_bc_parallel,
                identical ? "bit-identical" : "MISMATCH");

    cpn::PathMetrics serial_paths{}, parallel_paths{};
    const double t_pm_serial = best([&] { serial_paths = cpn::path_metrics_serial(graph, all); });
    const double t_pm_parallel = best([&] { parallel_paths = cpn::path_metrics(graph, all); });
    const bool paths_equal = serial_paths.diameter == parallel_paths.diameter &&
                             serial_paths.reachable_pairs == parallel_paths.reachable_pairs &&
                             serial_paths.characteristic_path_length ==
                                 parallel_paths.characteristic_path_length;
    std::printf("path metrics  serial %8.3fs   parallel %8.3fs   speedup %5.2fx   %s\n",
                t_pm_serial, t_pm_parallel, t_pm_serial / t_pm_parallel,
                paths_equal ? "equal" : "MISMATCH");
    std::printf("diameter %d, cpl %.4f, reachable pairs %lld\n", serial_paths.diameter,
                serial_paths.characteristic_path_length,
                static_cast<long long>(serial_paths.reachable_pairs));

    return (identical && paths_equal) ? 0 : 1;
}
