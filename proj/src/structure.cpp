#include "efxo/structure.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <stdexcept>

namespace efxo {

namespace {

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n) {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void join(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (a > b) std::swap(a, b);
        parent_[b] = a;
    }

private:
    std::vector<std::size_t> parent_;
};

template <typename Keep>
std::vector<std::vector<VertexId>> components_over(const Instance& inst, Keep keep) {
    DisjointSets sets(inst.n());
    for (const auto& e : inst.edges()) {
        if (!e.is_loop() && keep(e)) sets.join(e.u, e.v);
    }
    std::map<std::size_t, std::vector<VertexId>> groups;
    for (VertexId x = 0; x < inst.n(); ++x) groups[sets.find(x)].push_back(x);
    std::vector<std::vector<VertexId>> out;
    out.reserve(groups.size());
    for (auto& [root, members] : groups) out.push_back(std::move(members));
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return out;
}

struct CondensedEdge {
    VertexId a;
    VertexId b;
    std::size_t heavy_count = 0;
    EdgeId lowest = 0;
};

struct HeavyView {
    std::vector<VertexId> vertices;
    std::vector<CondensedEdge> condensed;   // sorted by (a, b)
    std::optional<HeavySelfLoop> heavy_loop;  // lowest vertex, then lowest id
};

std::vector<VertexId> heavy_component_of(const Instance& inst, VertexId start) {
    std::vector<char> seen(inst.n(), 0);
    std::vector<VertexId> out{start};
    seen[start] = 1;
    for (std::size_t k = 0; k < out.size(); ++k) {
        VertexId x = out[k];
        for (EdgeId id : inst.incident(x)) {
            const auto& e = inst.edge(id);
            if (!e.is_heavy() || e.is_loop()) continue;
            VertexId y = e.other(x);
            if (!seen[y]) {
                seen[y] = 1;
                out.push_back(y);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

HeavyView heavy_view(const Instance& inst, const std::vector<VertexId>& component) {
    if (component.empty()) throw std::invalid_argument("empty vertex set");
    std::vector<VertexId> sorted = component;
    std::sort(sorted.begin(), sorted.end());
    for (VertexId x : sorted) {
        if (x >= inst.n()) throw std::invalid_argument("vertex out of range");
    }
    if (heavy_component_of(inst, sorted.front()) != sorted) {
        throw std::invalid_argument("vertex set is not a heavy component");
    }
    HeavyView view;
    view.vertices = sorted;
    std::map<std::pair<VertexId, VertexId>, CondensedEdge> pairs;
    for (VertexId x : sorted) {
        for (EdgeId id : inst.incident(x)) {
            const auto& e = inst.edge(id);
            if (!e.is_heavy()) continue;
            if (e.is_loop()) {
                if (!view.heavy_loop) view.heavy_loop = HeavySelfLoop{x, id};
                continue;
            }
            if (e.other(x) < x) continue;  // count each non-loop edge once
            auto key = std::minmax(e.u, e.v);
            auto [it, fresh] = pairs.try_emplace(key, CondensedEdge{key.first, key.second, 0, id});
            ++it->second.heavy_count;
            it->second.lowest = std::min(it->second.lowest, id);
        }
    }
    for (auto& [key, c] : pairs) view.condensed.push_back(c);
    return view;
}

/// BFS over condensed edges from the lowest vertex. Returns tree edge ids and
/// marks which condensed edges were used.
std::vector<EdgeId> bfs_tree(const HeavyView& view, std::vector<char>& used) {
    std::map<VertexId, std::vector<std::size_t>> adj;
    for (std::size_t k = 0; k < view.condensed.size(); ++k) {
        adj[view.condensed[k].a].push_back(k);
        adj[view.condensed[k].b].push_back(k);
    }
    used.assign(view.condensed.size(), 0);
    std::vector<EdgeId> tree;
    std::map<VertexId, bool> seen;
    std::deque<VertexId> queue{view.vertices.front()};
    seen[view.vertices.front()] = true;
    while (!queue.empty()) {
        VertexId x = queue.front();
        queue.pop_front();
        // neighbours in ascending order
        auto nbrs = adj[x];
        std::sort(nbrs.begin(), nbrs.end(), [&](std::size_t p, std::size_t q) {
            const auto& cp = view.condensed[p];
            const auto& cq = view.condensed[q];
            return (cp.a == x ? cp.b : cp.a) < (cq.a == x ? cq.b : cq.a);
        });
        for (std::size_t k : nbrs) {
            const auto& c = view.condensed[k];
            VertexId y = c.a == x ? c.b : c.a;
            if (seen[y]) continue;
            seen[y] = true;
            used[k] = 1;
            tree.push_back(c.lowest);
            queue.push_back(y);
        }
    }
    std::sort(tree.begin(), tree.end());
    return tree;
}

bool view_is_multitree(const HeavyView& view) {
    return !view.heavy_loop && view.condensed.size() + 1 == view.vertices.size();
}

}  // namespace

VertexId Type2::root() const {
    if (const auto* loop = std::get_if<HeavySelfLoop>(&witness)) return loop->vertex;
    return std::get<NonTreeHeavyEdge>(witness).root;
}

std::string label(const Classification& c) {
    switch (c.index()) {
        case 0: return "type1";
        case 1: return "type2";
        case 2: return "trivial";
        default: return "forbidden_odd_multitree";
    }
}

std::vector<std::vector<VertexId>> connected_components(const Instance& inst) {
    return components_over(inst, [](const Edge&) { return true; });
}

std::vector<std::vector<VertexId>> heavy_components(const Instance& inst) {
    return components_over(inst, [](const Edge& e) { return e.is_heavy(); });
}

bool is_multitree(const Instance& inst, const std::vector<VertexId>& component) {
    return view_is_multitree(heavy_view(inst, component));
}

bool is_odd_multitree(const Instance& inst, const std::vector<VertexId>& component) {
    auto view = heavy_view(inst, component);
    if (!view_is_multitree(view)) return false;
    return std::all_of(view.condensed.begin(), view.condensed.end(),
                       [](const CondensedEdge& c) { return c.heavy_count % 2 == 1; });
}

HeavyComponentInfo classify_heavy_component(const Instance& inst,
                                            const std::vector<VertexId>& component) {
    auto view = heavy_view(inst, component);
    HeavyComponentInfo info;
    info.vertices = view.vertices;
    if (view.vertices.size() == 1) {
        if (view.heavy_loop) {
            info.classification = Type2{*view.heavy_loop};
        } else {
            info.classification = Trivial{};
        }
        return info;
    }

    std::vector<char> used;
    info.heavy_spanning_tree = bfs_tree(view, used);

    if (!view_is_multitree(view)) {
        if (view.heavy_loop) {
            info.classification = Type2{*view.heavy_loop};
            return info;
        }
        for (std::size_t k = 0; k < view.condensed.size(); ++k) {
            if (used[k]) continue;
            const auto& c = view.condensed[k];
            info.classification = Type2{NonTreeHeavyEdge{c.lowest, c.a, c.b}};
            return info;
        }
        throw std::logic_error("non-multitree component without a non-tree edge");
    }

    // A multitree's condensed graph is its own spanning tree, so the special
    // pair's edge is always a tree edge.
    for (const auto& c : view.condensed) {
        if (c.heavy_count % 2 == 0) {
            info.classification = Type1{c.a, c.b};
            return info;
        }
    }
    info.classification = ForbiddenOddMultitree{};
    return info;
}

std::vector<HeavyComponentInfo> classify_all(const Instance& inst) {
    std::vector<HeavyComponentInfo> out;
    for (const auto& k : heavy_components(inst)) out.push_back(classify_heavy_component(inst, k));
    return out;
}

bool has_forbidden_structure(const Instance& inst) {
    for (const auto& info : classify_all(inst)) {
        if (info.is_forbidden()) return true;
    }
    return false;
}

std::optional<std::vector<int>> is_bipartite(const Instance& inst) {
    std::vector<int> color(inst.n(), -1);
    for (VertexId s = 0; s < inst.n(); ++s) {
        if (color[s] != -1) continue;
        color[s] = 0;
        std::deque<VertexId> queue{s};
        while (!queue.empty()) {
            VertexId x = queue.front();
            queue.pop_front();
            for (EdgeId id : inst.incident(x)) {
                const auto& e = inst.edge(id);
                if (e.is_loop()) continue;
                VertexId y = e.other(x);
                if (color[y] == -1) {
                    color[y] = 1 - color[x];
                    queue.push_back(y);
                } else if (color[y] == color[x]) {
                    return std::nullopt;
                }
            }
        }
    }
    return color;
}

}  // namespace efxo
