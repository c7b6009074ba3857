#include "cpn/graph.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <stdexcept>

#include "cpn/errors.hpp"

namespace cpn {

std::string CpnNode::label() const {
    std::string out;
    for (const auto& code : member_codes) {
        if (!out.empty()) out += '/';
        out += code.str();
    }
    return out;
}

NodeId Cpn::add_node(std::vector<CourseCode> codes, std::vector<std::string> titles,
                     bool is_stub) {
    if (codes.empty()) throw std::invalid_argument("node needs at least one course code");
    titles.resize(codes.size());

    // Keep member codes sorted with their titles alongside.
    std::vector<std::size_t> order(codes.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return codes[a] < codes[b]; });

    CpnNode node;
    node.id = static_cast<NodeId>(nodes_.size());
    node.is_stub = is_stub;
    for (std::size_t i : order) {
        if (!node.member_codes.empty() && node.member_codes.back() == codes[i]) continue;
        node.member_codes.push_back(codes[i]);
        node.member_titles.push_back(titles[i]);
    }
    for (const auto& code : node.member_codes) {
        if (code_index_.count(code)) {
            throw std::invalid_argument("course code " + code.str() +
                                        " already belongs to another node");
        }
    }
    for (const auto& code : node.member_codes) code_index_[code] = node.id;
    nodes_.push_back(std::move(node));
    return nodes_.back().id;
}

void Cpn::add_arc(NodeId source, NodeId target, double weight, ArcProvenance provenance) {
    auto valid = [&](NodeId id) {
        return id >= 0 && static_cast<std::size_t>(id) < nodes_.size();
    };
    if (!valid(source) || !valid(target)) throw std::invalid_argument("arc endpoint unknown");
    if (source == target) throw std::invalid_argument("self-loop rejected");
    if (!(weight > 0.0) || weight > 1.0) throw std::invalid_argument("arc weight outside (0, 1]");

    CpnArc arc{source, target, weight, provenance};
    auto it = std::lower_bound(arcs_.begin(), arcs_.end(), arc, [](const CpnArc& a, const CpnArc& b) {
        return std::pair(a.source, a.target) < std::pair(b.source, b.target);
    });
    if (it != arcs_.end() && it->source == source && it->target == target) {
        throw std::invalid_argument("duplicate arc for ordered pair");
    }
    arcs_.insert(it, arc);
}

std::optional<NodeId> Cpn::node_of(const CourseCode& code) const {
    auto it = code_index_.find(code);
    if (it == code_index_.end()) return std::nullopt;
    return it->second;
}

const CpnArc* Cpn::find_arc(NodeId source, NodeId target) const {
    CpnArc probe{source, target, 1.0, ArcProvenance::prerequisite};
    auto it = std::lower_bound(arcs_.begin(), arcs_.end(), probe,
                               [](const CpnArc& a, const CpnArc& b) {
                                   return std::pair(a.source, a.target) <
                                          std::pair(b.source, b.target);
                               });
    if (it != arcs_.end() && it->source == source && it->target == target) return &*it;
    return nullptr;
}

std::vector<std::vector<NodeId>> Cpn::out_adjacency() const {
    std::vector<std::vector<NodeId>> adj(nodes_.size());
    for (const auto& arc : arcs_) adj[static_cast<std::size_t>(arc.source)].push_back(arc.target);
    return adj;  // arcs_ sorted by (source, target) => neighbour lists ascending
}

std::vector<std::vector<NodeId>> Cpn::in_adjacency() const {
    std::vector<std::vector<NodeId>> adj(nodes_.size());
    for (const auto& arc : arcs_) adj[static_cast<std::size_t>(arc.target)].push_back(arc.source);
    for (auto& list : adj) std::sort(list.begin(), list.end());
    return adj;
}

namespace {

// Kahn's algorithm; returns the processed prefix (full order iff acyclic).
std::vector<NodeId> kahn_order(const Cpn& cpn) {
    const std::size_t n = cpn.node_count();
    std::vector<int> in_degree(n, 0);
    auto adj = cpn.out_adjacency();
    for (const auto& arc : cpn.arcs()) ++in_degree[static_cast<std::size_t>(arc.target)];

    std::priority_queue<NodeId, std::vector<NodeId>, std::greater<NodeId>> ready;
    for (std::size_t v = 0; v < n; ++v) {
        if (in_degree[v] == 0) ready.push(static_cast<NodeId>(v));
    }
    std::vector<NodeId> order;
    order.reserve(n);
    while (!ready.empty()) {
        NodeId v = ready.top();
        ready.pop();
        order.push_back(v);
        for (NodeId w : adj[static_cast<std::size_t>(v)]) {
            if (--in_degree[static_cast<std::size_t>(w)] == 0) ready.push(w);
        }
    }
    return order;
}

// One directed cycle in a graph known to be cyclic, via iterative DFS.
std::vector<NodeId> find_one_cycle(const Cpn& cpn) {
    const std::size_t n = cpn.node_count();
    auto adj = cpn.out_adjacency();
    enum { white, grey, black };
    std::vector<char> colour(n, white);
    std::vector<NodeId> parent(n, -1);

    for (std::size_t root = 0; root < n; ++root) {
        if (colour[root] != white) continue;
        std::vector<std::pair<NodeId, std::size_t>> stack{{static_cast<NodeId>(root), 0}};
        colour[root] = grey;
        while (!stack.empty()) {
            auto& [v, next] = stack.back();
            if (next < adj[static_cast<std::size_t>(v)].size()) {
                NodeId w = adj[static_cast<std::size_t>(v)][next++];
                if (colour[w] == white) {
                    colour[w] = grey;
                    parent[static_cast<std::size_t>(w)] = v;
                    stack.emplace_back(w, 0);
                } else if (colour[w] == grey) {
                    std::vector<NodeId> cycle{w};
                    for (NodeId u = v; u != w; u = parent[static_cast<std::size_t>(u)]) {
                        cycle.push_back(u);
                    }
                    std::reverse(cycle.begin() + 1, cycle.end());
                    return cycle;
                }
            } else {
                colour[v] = black;
                stack.pop_back();
            }
        }
    }
    return {};
}

// Tarjan SCCs of the subgraph induced on node ids >= floor.
std::vector<std::vector<NodeId>> sccs_from(const std::vector<std::vector<NodeId>>& adj,
                                           NodeId floor) {
    const auto n = static_cast<NodeId>(adj.size());
    std::vector<int> index(static_cast<std::size_t>(n), -1);
    std::vector<int> low(static_cast<std::size_t>(n), 0);
    std::vector<bool> on_stack(static_cast<std::size_t>(n), false);
    std::vector<NodeId> stack;
    std::vector<std::vector<NodeId>> sccs;
    int counter = 0;

    struct Frame {
        NodeId v;
        std::size_t next;
    };
    for (NodeId root = floor; root < n; ++root) {
        if (index[static_cast<std::size_t>(root)] != -1) continue;
        std::vector<Frame> frames{{root, 0}};
        index[static_cast<std::size_t>(root)] = low[static_cast<std::size_t>(root)] = counter++;
        stack.push_back(root);
        on_stack[static_cast<std::size_t>(root)] = true;
        while (!frames.empty()) {
            auto& frame = frames.back();
            NodeId v = frame.v;
            bool descended = false;
            while (frame.next < adj[static_cast<std::size_t>(v)].size()) {
                NodeId w = adj[static_cast<std::size_t>(v)][frame.next++];
                if (w < floor) continue;
                if (index[static_cast<std::size_t>(w)] == -1) {
                    index[static_cast<std::size_t>(w)] = low[static_cast<std::size_t>(w)] =
                        counter++;
                    stack.push_back(w);
                    on_stack[static_cast<std::size_t>(w)] = true;
                    frames.push_back({w, 0});
                    descended = true;
                    break;
                }
                if (on_stack[static_cast<std::size_t>(w)]) {
                    low[static_cast<std::size_t>(v)] =
                        std::min(low[static_cast<std::size_t>(v)],
                                 index[static_cast<std::size_t>(w)]);
                }
            }
            if (descended) continue;
            if (low[static_cast<std::size_t>(v)] == index[static_cast<std::size_t>(v)]) {
                std::vector<NodeId> scc;
                NodeId w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[static_cast<std::size_t>(w)] = false;
                    scc.push_back(w);
                } while (w != v);
                std::sort(scc.begin(), scc.end());
                sccs.push_back(std::move(scc));
            }
            frames.pop_back();
            if (!frames.empty()) {
                NodeId parent = frames.back().v;
                low[static_cast<std::size_t>(parent)] =
                    std::min(low[static_cast<std::size_t>(parent)],
                             low[static_cast<std::size_t>(v)]);
            }
        }
    }
    return sccs;
}

// Johnson's elementary-circuit search within one SCC rooted at its least id.
class CircuitFinder {
public:
    CircuitFinder(const std::vector<std::vector<NodeId>>& adj, std::size_t cap,
                  std::vector<std::vector<NodeId>>& out)
        : adj_(adj),
          cap_(cap),
          out_(out),
          blocked_(adj.size(), false),
          block_map_(adj.size()) {}

    void run(NodeId start, const std::vector<NodeId>& scc) {
        in_scc_.assign(adj_.size(), false);
        for (NodeId v : scc) in_scc_[static_cast<std::size_t>(v)] = true;
        for (NodeId v : scc) {
            blocked_[static_cast<std::size_t>(v)] = false;
            block_map_[static_cast<std::size_t>(v)].clear();
        }
        start_ = start;
        circuit(start);
    }

private:
    bool circuit(NodeId v) {
        bool found = false;
        path_.push_back(v);
        blocked_[static_cast<std::size_t>(v)] = true;
        for (NodeId w : adj_[static_cast<std::size_t>(v)]) {
            if (w < start_ || !in_scc_[static_cast<std::size_t>(w)]) continue;
            if (w == start_) {
                if (out_.size() >= cap_) {
                    throw CycleLimitError("elementary cycle count exceeds cap of " +
                                          std::to_string(cap_));
                }
                out_.push_back(path_);
                found = true;
            } else if (!blocked_[static_cast<std::size_t>(w)]) {
                if (circuit(w)) found = true;
            }
        }
        if (found) {
            unblock(v);
        } else {
            for (NodeId w : adj_[static_cast<std::size_t>(v)]) {
                if (w < start_ || !in_scc_[static_cast<std::size_t>(w)]) continue;
                auto& preds = block_map_[static_cast<std::size_t>(w)];
                if (std::find(preds.begin(), preds.end(), v) == preds.end()) preds.push_back(v);
            }
        }
        path_.pop_back();
        return found;
    }

    void unblock(NodeId v) {
        blocked_[static_cast<std::size_t>(v)] = false;
        auto pending = std::move(block_map_[static_cast<std::size_t>(v)]);
        block_map_[static_cast<std::size_t>(v)].clear();
        for (NodeId w : pending) {
            if (blocked_[static_cast<std::size_t>(w)]) unblock(w);
        }
    }

    const std::vector<std::vector<NodeId>>& adj_;
    std::size_t cap_;
    std::vector<std::vector<NodeId>>& out_;
    std::vector<bool> blocked_;
    std::vector<std::vector<NodeId>> block_map_;
    std::vector<bool> in_scc_;
    std::vector<NodeId> path_;
    NodeId start_ = 0;
};

}  // namespace

bool is_dag(const Cpn& cpn) {
    return kahn_order(cpn).size() == cpn.node_count();
}

std::vector<NodeId> topological_order(const Cpn& cpn) {
    auto order = kahn_order(cpn);
    if (order.size() != cpn.node_count()) {
        auto cycle = find_one_cycle(cpn);
        std::string msg = "graph is not a DAG; cycle:";
        for (NodeId v : cycle) msg += " " + cpn.node(v).label();
        throw NotADagError(msg);
    }
    return order;
}

std::vector<std::vector<NodeId>> detect_cycles(const Cpn& cpn, std::size_t max_cycles) {
    std::vector<std::vector<NodeId>> cycles;
    const auto n = static_cast<NodeId>(cpn.node_count());
    if (n == 0) return cycles;
    auto adj = cpn.out_adjacency();

    CircuitFinder finder(adj, max_cycles, cycles);
    NodeId floor = 0;
    while (floor < n) {
        auto sccs = sccs_from(adj, floor);
        // Pick the component with the least vertex that still contains a cycle.
        const std::vector<NodeId>* best = nullptr;
        for (const auto& scc : sccs) {
            if (scc.size() < 2) continue;  // no self-loops by construction
            if (!best || scc.front() < best->front()) best = &scc;
        }
        if (!best) break;
        finder.run(best->front(), *best);
        floor = best->front() + 1;
    }
    std::sort(cycles.begin(), cycles.end());
    return cycles;
}

}  // namespace cpn
