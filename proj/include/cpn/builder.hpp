#ifndef CPN_BUILDER_HPP
#define CPN_BUILDER_HPP

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cpn/catalog.hpp"
#include "cpn/graph.hpp"

namespace cpn {

/// How corequisite declarations become arcs.
enum class CoreqArcMode {
    /// Hard pairs get arcs in both directions (introduces 2-cycles); soft
    /// pairs get a single arc target -> declarer.
    bidirectional,
    /// Every pair becomes one arc lecture -> lab, the lab being the course
    /// whose title matches a lab marker.
    directed,
};

/// What to do with referenced codes that have no record.
enum class DanglingMode { create_stub, drop, error };

struct BuildPolicy {
    CoreqArcMode coreq_mode = CoreqArcMode::directed;
    DanglingMode dangling_mode = DanglingMode::create_stub;
    /// Case-insensitive title substrings identifying the lab side of a
    /// corequisite pair; must be nonempty in directed mode.
    std::vector<std::string> lab_title_markers = {"lab", "laboratory"};
};

struct BuildDiagnostics {
    std::vector<std::vector<CourseCode>> merged_groups;
    std::vector<CourseCode> dangling_codes;
    std::vector<NodeId> stub_nodes;
    std::vector<CpnArc> removed_arcs;               // filled by enforce_dag
    std::vector<std::vector<NodeId>> unresolved_cycles;  // filled by enforce_dag
    std::vector<CourseCode> dropped_self_loops;     // bindings that collapsed onto one node
};

/// Every code involved in a cross-listing relation, mapped to its full
/// transitively-closed group (sorted). Codes outside any relation are absent.
using MergeMap = std::map<CourseCode, std::vector<CourseCode>>;

/// Close cross-listing relations transitively and merge each group into one
/// record: the lexicographically smallest member code becomes the record
/// code, clauses/corequisites/soft rules are concatenated in catalogue order.
std::pair<Catalog, MergeMap> resolve_cross_listings(const Catalog& catalog);

struct BuildResult {
    Cpn cpn;
    BuildDiagnostics diagnostics;
};

/// Build the network: one node per merged course group, prerequisite arcs of
/// weight 1/m per OR-group alternative (m = group size), corequisite arcs per
/// policy. Contributions landing on the same ordered pair are summed and
/// clamped to 1.0. Throws UnresolvableCorequisiteError or DanglingCodeError
/// per policy.
BuildResult build_cpn(const Catalog& catalog, const BuildPolicy& policy = {});

/// The corequisite repair: in every 2-cycle involving a corequisite arc with
/// exactly one lab endpoint, drop the lab -> lecture arc (never an arc of
/// prerequisite provenance). Remaining cycles are reported as unresolved.
/// Idempotent; the result is a DAG iff unresolved_cycles is empty.
BuildResult enforce_dag(const Cpn& cpn, const BuildPolicy& policy = {});

}  // namespace cpn

#endif
