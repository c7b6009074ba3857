#include "cpn/builder.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <set>
#include <stdexcept>

#include "cpn/errors.hpp"

namespace cpn {

namespace {

bool ci_contains(const std::string& haystack, const std::string& needle) {
    if (needle.empty()) return false;
    auto it = std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end(),
                          [](unsigned char a, unsigned char b) {
                              return std::tolower(a) == std::tolower(b);
                          });
    return it != haystack.end();
}

bool matches_lab_marker(const CpnNode& node, const std::vector<std::string>& markers) {
    for (const auto& title : node.member_titles) {
        for (const auto& marker : markers) {
            if (ci_contains(title, marker)) return true;
        }
    }
    return false;
}

}  // namespace

std::pair<Catalog, MergeMap> resolve_cross_listings(const Catalog& catalog) {
    // Transitive closure of the cross-listing relation via BFS over codes.
    std::map<CourseCode, std::vector<CourseCode>> relation;
    for (const auto& record : catalog.records) {
        for (const auto& cross : record.cross_listings) {
            if (cross == record.code) continue;
            relation[record.code].push_back(cross);
            relation[cross].push_back(record.code);
        }
    }

    MergeMap merge_map;
    std::set<CourseCode> visited;
    for (const auto& [code, _] : relation) {
        if (visited.count(code)) continue;
        std::vector<CourseCode> group;
        std::deque<CourseCode> queue{code};
        visited.insert(code);
        while (!queue.empty()) {
            CourseCode cur = queue.front();
            queue.pop_front();
            group.push_back(cur);
            for (const auto& next : relation[cur]) {
                if (visited.insert(next).second) queue.push_back(next);
            }
        }
        std::sort(group.begin(), group.end());
        for (const auto& member : group) merge_map[member] = group;
    }

    Catalog merged;
    merged.source_label = catalog.source_label;
    std::set<CourseCode> emitted;
    for (const auto& record : catalog.records) {
        auto it = merge_map.find(record.code);
        if (it == merge_map.end()) {
            merged.records.push_back(record);
            continue;
        }
        const auto& group = it->second;
        if (!emitted.insert(group.front()).second) continue;  // group already emitted

        CourseRecord out;
        // Canonical code: smallest member that has a record.
        for (const auto& member : group) {
            if (catalog.find(member)) {
                out.code = member;
                break;
            }
        }
        // Concatenate member records in catalogue order.
        for (const auto& member_record : catalog.records) {
            if (merge_map.count(member_record.code) == 0 ||
                merge_map.at(member_record.code).front() != group.front()) {
                continue;
            }
            if (!out.title.empty() && !member_record.title.empty()) out.title += " / ";
            out.title += member_record.title;
            for (const auto& conj : member_record.prerequisites.conjuncts) {
                out.prerequisites.conjuncts.push_back(conj);
            }
            for (const auto& coreq : member_record.corequisites) {
                out.corequisites.push_back(coreq);
            }
            for (const auto& soft : member_record.soft_rules) out.soft_rules.push_back(soft);
        }
        for (const auto& member : group) {
            if (member != out.code) out.cross_listings.push_back(member);
        }
        merged.records.push_back(std::move(out));
    }
    return {std::move(merged), std::move(merge_map)};
}

BuildResult build_cpn(const Catalog& catalog, const BuildPolicy& policy) {
    if (policy.coreq_mode == CoreqArcMode::directed && policy.lab_title_markers.empty()) {
        throw std::invalid_argument("directed corequisite mode needs lab title markers");
    }
    {
        std::set<CourseCode> codes;
        for (const auto& record : catalog.records) {
            if (!codes.insert(record.code).second) {
                throw std::invalid_argument("catalogue has duplicate course code " +
                                            record.code.str());
            }
        }
    }

    auto [merged, merge_map] = resolve_cross_listings(catalog);

    BuildResult result;
    Cpn& cpn = result.cpn;
    BuildDiagnostics& diag = result.diagnostics;

    for (const auto& [code, group] : merge_map) {
        if (code == group.front() && group.size() >= 2) diag.merged_groups.push_back(group);
    }

    for (const auto& record : merged.records) {
        std::vector<CourseCode> codes;
        std::vector<std::string> titles;
        auto it = merge_map.find(record.code);
        if (it != merge_map.end()) {
            for (const auto& member : it->second) {
                const CourseRecord* original = catalog.find(member);
                if (!original) {
                    // A cross-listing that points at no record.
                    switch (policy.dangling_mode) {
                        case DanglingMode::create_stub:
                            codes.push_back(member);  // alias of the composite node
                            titles.emplace_back();
                            diag.dangling_codes.push_back(member);
                            break;
                        case DanglingMode::drop:
                            diag.dangling_codes.push_back(member);
                            break;
                        case DanglingMode::error:
                            throw DanglingCodeError("cross-listing references undefined course " +
                                                    member.str());
                    }
                    continue;
                }
                codes.push_back(member);
                titles.push_back(original->title);
            }
        } else {
            codes.push_back(record.code);
            titles.push_back(record.title);
        }
        cpn.add_node(std::move(codes), std::move(titles));
    }

    // Stub nodes are appended after all course nodes, in first-encounter order.
    std::map<CourseCode, NodeId> stubs;
    auto resolve_code = [&](const CourseCode& code) -> std::optional<NodeId> {
        if (auto id = cpn.node_of(code)) return id;
        switch (policy.dangling_mode) {
            case DanglingMode::create_stub: {
                auto it = stubs.find(code);
                if (it != stubs.end()) return it->second;
                NodeId id = cpn.add_node({code}, {""}, /*is_stub=*/true);
                stubs[code] = id;
                diag.stub_nodes.push_back(id);
                diag.dangling_codes.push_back(code);
                return id;
            }
            case DanglingMode::drop:
                diag.dangling_codes.push_back(code);
                return std::nullopt;
            case DanglingMode::error:
                throw DanglingCodeError("reference to undefined course " + code.str());
        }
        return std::nullopt;
    };

    struct Acc {
        double weight = 0.0;
        bool prerequisite = false;
        bool corequisite = false;
    };
    std::map<std::pair<NodeId, NodeId>, Acc> acc;
    auto contribute = [&](NodeId source, NodeId target, double weight, ArcProvenance prov) {
        Acc& a = acc[{source, target}];
        a.weight += weight;
        if (prov == ArcProvenance::prerequisite) a.prerequisite = true;
        if (prov == ArcProvenance::corequisite) a.corequisite = true;
    };

    for (const auto& record : merged.records) {
        NodeId target = *cpn.node_of(record.code);

        for (const auto& group : record.prerequisites.conjuncts) {
            const double weight = 1.0 / static_cast<double>(group.alternatives.size());
            for (const auto& alt : group.alternatives) {
                auto source = resolve_code(alt);
                if (!source) continue;
                if (*source == target) {
                    diag.dropped_self_loops.push_back(alt);
                    continue;
                }
                contribute(*source, target, weight, ArcProvenance::prerequisite);
            }
        }

        for (const auto& coreq : record.corequisites) {
            auto other = resolve_code(coreq.target);
            if (!other) continue;
            if (*other == target) {
                diag.dropped_self_loops.push_back(coreq.target);
                continue;
            }
            if (policy.coreq_mode == CoreqArcMode::directed) {
                bool target_is_lab = matches_lab_marker(cpn.node(target), policy.lab_title_markers);
                bool other_is_lab = matches_lab_marker(cpn.node(*other), policy.lab_title_markers);
                if (target_is_lab == other_is_lab) {
                    throw UnresolvableCorequisiteError(
                        "cannot orient corequisite pair " + cpn.node(*other).label() + " / " +
                        cpn.node(target).label() +
                        (target_is_lab ? ": both titles match a lab marker"
                                       : ": neither title matches a lab marker"));
                }
                NodeId lab = target_is_lab ? target : *other;
                NodeId lecture = target_is_lab ? *other : target;
                contribute(lecture, lab, 1.0, ArcProvenance::corequisite);
            } else if (coreq.mode == CoreqStrength::hard) {
                contribute(target, *other, 1.0, ArcProvenance::corequisite);
                contribute(*other, target, 1.0, ArcProvenance::corequisite);
            } else {
                // Soft: the target may be taken earlier, so it may precede.
                contribute(*other, target, 1.0, ArcProvenance::corequisite);
            }
        }
    }

    for (const auto& [pair, a] : acc) {
        cpn.add_arc(pair.first, pair.second, std::min(a.weight, 1.0),
                    a.prerequisite ? ArcProvenance::prerequisite : ArcProvenance::corequisite);
    }

    std::sort(diag.dangling_codes.begin(), diag.dangling_codes.end());
    diag.dangling_codes.erase(
        std::unique(diag.dangling_codes.begin(), diag.dangling_codes.end()),
        diag.dangling_codes.end());
    return result;
}

BuildResult enforce_dag(const Cpn& cpn, const BuildPolicy& policy) {
    BuildResult result;
    BuildDiagnostics& diag = result.diagnostics;

    std::set<std::pair<NodeId, NodeId>> removed;
    for (const auto& arc : cpn.arcs()) {
        if (arc.source >= arc.target) continue;
        const CpnArc* back = cpn.find_arc(arc.target, arc.source);
        if (!back) continue;
        if (arc.provenance != ArcProvenance::corequisite &&
            back->provenance != ArcProvenance::corequisite) {
            continue;
        }
        bool source_is_lab = matches_lab_marker(cpn.node(arc.source), policy.lab_title_markers);
        bool target_is_lab = matches_lab_marker(cpn.node(arc.target), policy.lab_title_markers);
        if (source_is_lab == target_is_lab) continue;
        const CpnArc* lab_to_lecture = source_is_lab ? &arc : back;
        if (lab_to_lecture->provenance != ArcProvenance::corequisite) continue;
        removed.insert({lab_to_lecture->source, lab_to_lecture->target});
        diag.removed_arcs.push_back(*lab_to_lecture);
    }

    for (const auto& node : cpn.nodes()) {
        result.cpn.add_node(node.member_codes, node.member_titles, node.is_stub);
    }
    for (const auto& arc : cpn.arcs()) {
        if (removed.count({arc.source, arc.target})) continue;
        result.cpn.add_arc(arc.source, arc.target, arc.weight, arc.provenance);
    }

    diag.unresolved_cycles = detect_cycles(result.cpn);
    return result;
}

}  // namespace cpn
