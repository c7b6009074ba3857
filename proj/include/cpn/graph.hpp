#ifndef CPN_GRAPH_HPP
#define CPN_GRAPH_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cpn/catalog.hpp"

namespace cpn {

using NodeId = std::int32_t;

enum class ArcProvenance { prerequisite, corequisite };

/// A course node, possibly composite when cross-listed entries were merged.
struct CpnNode {
    NodeId id = 0;
    std::vector<CourseCode> member_codes;   // sorted, duplicate-free, nonempty
    std::vector<std::string> member_titles; // parallel to member_codes
    bool is_stub = false;                   // created for a dangling reference

    /// Codes joined by "/", e.g. "BIOL 310/CHEM 310".
    std::string label() const;

    bool operator==(const CpnNode&) const = default;
};

struct CpnArc {
    NodeId source = 0;
    NodeId target = 0;
    double weight = 1.0;  // in (0, 1]
    ArcProvenance provenance = ArcProvenance::prerequisite;

    bool operator==(const CpnArc&) const = default;
};

/// The curriculum prerequisite network: a directed weighted graph with arcs
/// pointing prerequisite -> dependent. Node ids are dense 0..n-1 in insertion
/// order; arcs are kept sorted by (source, target) with at most one arc per
/// ordered pair. Once built, a Cpn is treated as immutable and is safe to
/// share across threads for read-only analysis.
class Cpn {
public:
    NodeId add_node(std::vector<CourseCode> codes, std::vector<std::string> titles = {},
                    bool is_stub = false);
    /// Throws std::invalid_argument on self-loops, unknown endpoints,
    /// duplicate (source, target) pairs, or weights outside (0, 1].
    void add_arc(NodeId source, NodeId target, double weight, ArcProvenance provenance);

    std::span<const CpnNode> nodes() const { return nodes_; }
    std::span<const CpnArc> arcs() const { return arcs_; }
    std::size_t node_count() const { return nodes_.size(); }
    std::size_t arc_count() const { return arcs_.size(); }

    const CpnNode& node(NodeId id) const { return nodes_.at(static_cast<std::size_t>(id)); }
    std::optional<NodeId> node_of(const CourseCode& code) const;
    const CpnArc* find_arc(NodeId source, NodeId target) const;

    /// Out-neighbours per node, ascending target id.
    std::vector<std::vector<NodeId>> out_adjacency() const;
    /// In-neighbours per node, ascending source id.
    std::vector<std::vector<NodeId>> in_adjacency() const;

private:
    std::vector<CpnNode> nodes_;
    std::vector<CpnArc> arcs_;  // sorted by (source, target)
    std::map<CourseCode, NodeId> code_index_;
};

/// True iff the graph has no directed cycle.
bool is_dag(const Cpn& cpn);

/// Kahn's algorithm with ties broken by ascending node id. Throws NotADagError
/// naming one offending cycle when the graph is cyclic.
std::vector<NodeId> topological_order(const Cpn& cpn);

/// Every elementary directed cycle, each reported once: a cycle starts at its
/// smallest node id and the list is sorted lexicographically. Throws
/// CycleLimitError when more than max_cycles cycles exist.
std::vector<std::vector<NodeId>> detect_cycles(const Cpn& cpn, std::size_t max_cycles = 100000);

}  // namespace cpn

#endif
