#include "efxo/solver.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <string>

namespace efxo {

namespace {

void tick(SolveStats* stats, std::uint64_t n = 1) {
    if (stats) stats->steps += n;
}

/// Orients tree edges away from the root set: the endpoint discovered later
/// owns the edge. Edges in `skip` are left alone.
void orient_tree_away(const Instance& inst, const std::vector<EdgeId>& tree,
                      const std::vector<VertexId>& roots, std::optional<EdgeId> skip,
                      PartialOrientation& pi, SolveStats* stats) {
    std::map<VertexId, std::vector<EdgeId>> adj;
    for (EdgeId e : tree) {
        adj[inst.edge(e).u].push_back(e);
        adj[inst.edge(e).v].push_back(e);
    }
    std::map<VertexId, bool> seen;
    std::deque<VertexId> queue(roots.begin(), roots.end());
    for (VertexId r : roots) seen[r] = true;
    while (!queue.empty()) {
        VertexId x = queue.front();
        queue.pop_front();
        for (EdgeId e : adj[x]) {
            tick(stats);
            if (skip && e == *skip) continue;
            VertexId y = inst.edge(e).other(x);
            if (seen[y]) continue;
            seen[y] = true;
            pi.assign(inst, e, y);
            queue.push_back(y);
        }
    }
}

std::vector<VertexId> adjacent_vertices(const Instance& inst, VertexId x) {
    std::vector<VertexId> out;
    for (EdgeId e : inst.incident(x)) {
        if (!inst.edge(e).is_loop()) out.push_back(inst.edge(e).other(x));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

void orient_loops(const Instance& inst, PartialOrientation& pi, VertexId x, SolveStats* stats) {
    for (EdgeId e : inst.incident(x)) {
        tick(stats);
        if (inst.edge(e).is_loop() && !pi.is_oriented(e)) pi.assign(inst, e, x);
    }
}

PartialOrientation solve_connected(const Instance& inst, SolveStats* stats) {
    if (inst.m() == 0) return PartialOrientation(0);
    bool any_heavy = std::any_of(inst.edges().begin(), inst.edges().end(),
                                 [](const Edge& e) { return e.is_heavy(); });
    if (!any_heavy) return all_light_orientation(inst, stats);
    auto state = orient_all_but_matching(inst, stats);
    return finish_matching(inst, state, stats);
}

struct SubInstance {
    Instance inst;
    std::vector<VertexId> vertices;  // local -> global
    std::vector<EdgeId> edges;       // local -> global
};

SubInstance restrict_to(const Instance& inst, const std::vector<VertexId>& vertices) {
    std::map<VertexId, VertexId> local;
    for (VertexId x : vertices) local.emplace(x, local.size());
    std::vector<EdgeId> edge_ids;
    for (VertexId x : vertices) {
        for (EdgeId e : inst.incident(x)) {
            if (inst.edge(e).u == x) edge_ids.push_back(e);  // count each edge once
        }
    }
    std::sort(edge_ids.begin(), edge_ids.end());
    std::vector<EdgeSpec> specs;
    specs.reserve(edge_ids.size());
    for (EdgeId e : edge_ids) {
        const auto& edge = inst.edge(e);
        specs.push_back({local.at(edge.u), local.at(edge.v), edge.cls});
    }
    return SubInstance{Instance::create(vertices.size(), inst.alpha(), inst.beta(), specs),
                       vertices, std::move(edge_ids)};
}

}  // namespace

Type1Orientation orient_type1(const Instance& inst, const HeavyComponentInfo& component,
                              SolveStats* stats) {
    const auto* type1 = std::get_if<Type1>(&component.classification);
    if (!type1) throw PipelineError("orient_type1 requires a type-1 component");
    Type1Orientation out{PartialOrientation(inst.m()), type1->v, type1->w};
    std::vector<EdgeId> heavy;
    std::vector<EdgeId> light;
    for (EdgeId e : edges_between(inst, type1->v, type1->w)) {
        tick(stats);
        (inst.edge(e).is_heavy() ? heavy : light).push_back(e);
    }
    if (heavy.empty() || heavy.size() % 2 != 0) {
        throw PipelineError("special pair does not carry an even number of heavy edges");
    }
    for (std::size_t k = 0; k < heavy.size(); ++k) {
        out.orientation.assign(inst, heavy[k], k < heavy.size() / 2 ? type1->v : type1->w);
    }
    std::size_t half = light.size() / 2;
    for (std::size_t k = 0; k < 2 * half; ++k) {
        out.orientation.assign(inst, light[k], k < half ? type1->v : type1->w);
    }

    std::optional<EdgeId> pair_edge;
    for (EdgeId e : component.heavy_spanning_tree) {
        if (inst.edge(e).joins(type1->v, type1->w)) pair_edge = e;
    }
    if (!pair_edge) throw PipelineError("spanning tree misses the special pair");
    orient_tree_away(inst, component.heavy_spanning_tree, {type1->v, type1->w}, pair_edge,
                     out.orientation, stats);
    return out;
}

PartialOrientation orient_type2(const Instance& inst, const HeavyComponentInfo& component,
                                SolveStats* stats) {
    const auto* type2 = std::get_if<Type2>(&component.classification);
    if (!type2) throw PipelineError("orient_type2 requires a type-2 component");
    PartialOrientation pi(inst.m());
    VertexId root = type2->root();
    orient_tree_away(inst, component.heavy_spanning_tree, {root}, std::nullopt, pi, stats);
    if (const auto* loop = std::get_if<HeavySelfLoop>(&type2->witness)) {
        pi.assign(inst, loop->edge, loop->vertex);
    } else {
        pi.assign(inst, std::get<NonTreeHeavyEdge>(type2->witness).edge, root);
    }
    return pi;
}

TwoAgentSplit two_agent_efx_split(std::span<const Rational> values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return values[x] > values[y]; });
    TwoAgentSplit split;
    Rational value_a(0);
    Rational value_b(0);
    for (std::size_t k : order) {
        if (value_b < value_a) {
            split.b.push_back(k);
            value_b += values[k];
        } else {
            split.a.push_back(k);
            value_a += values[k];
        }
    }
    if (value_a > value_b) std::swap(split.a, split.b);
    std::sort(split.a.begin(), split.a.end());
    std::sort(split.b.begin(), split.b.end());
    return split;
}

void extend_pair(const Instance& inst, PipelineState& state, VertexId i, VertexId j,
                 SolveStats* stats) {
    if (i == j) throw PipelineError("extend_pair needs two distinct vertices");
    auto& pi = state.orientation;
    auto between = edges_between(inst, i, j);
    tick(stats, between.size());

    std::vector<EdgeId> unoriented;
    std::vector<EdgeId> oriented;
    for (EdgeId e : between) (pi.is_oriented(e) ? oriented : unoriented).push_back(e);
    if (oriented.size() > 1) {
        throw PipelineError("more than one edge already oriented between " + std::to_string(i) +
                            " and " + std::to_string(j));
    }
    if (!oriented.empty() && pi.owned_by(oriented.front(), j)) std::swap(i, j);

    const Rational& alpha = inst.alpha();
    const Rational& beta = inst.beta();
    bool only_light = std::none_of(between.begin(), between.end(),
                                   [&](EdgeId e) { return inst.edge(e).is_heavy(); });
    Rational ui = utility(inst, pi, i);
    Rational uj = utility(inst, pi, j);
    bool holds = (ui >= alpha && uj >= alpha) || (ui >= beta && uj >= beta && only_light);
    if (!holds && oriented.empty()) {
        auto alone = [&](const Rational& u) { return u >= alpha || (u >= beta && only_light); };
        if (alone(ui)) {
            holds = true;
        } else if (alone(uj)) {
            std::swap(i, j);
            holds = true;
        }
    }
    if (!holds) {
        throw PipelineError("no extension condition holds for pair (" + std::to_string(i) + ", " +
                            std::to_string(j) + ")");
    }

    std::vector<Rational> values;
    values.reserve(unoriented.size());
    for (EdgeId e : unoriented) values.push_back(inst.weight(e));
    auto split = two_agent_efx_split(values);
    // j takes the weakly larger part, so j cannot envy i.
    for (std::size_t k : split.a) pi.assign(inst, unoriented[k], i);
    for (std::size_t k : split.b) pi.assign(inst, unoriented[k], j);
    orient_loops(inst, pi, i, stats);
    orient_loops(inst, pi, j, stats);
}

PartialOrientation all_light_orientation(const Instance& inst, SolveStats* stats) {
    for (const auto& e : inst.edges()) {
        if (e.is_heavy()) throw std::invalid_argument("all_light_orientation: heavy edge present");
    }
    PartialOrientation pi(inst.m());
    std::vector<std::size_t> load(inst.n(), 0);
    auto classes = parallel_classes(inst);
    // owned_low[k]: members of class k held by its lower endpoint.
    std::vector<std::size_t> owned_low(classes.size(), 0);
    for (std::size_t k = 0; k < classes.size(); ++k) {
        const auto& cls = classes[k];
        auto [a, b] = cls.endpoints;
        std::size_t size = cls.members.size();
        std::size_t to_a = cls.is_loop() ? size : (size + 1) / 2;
        for (std::size_t t = 0; t < size; ++t) {
            tick(stats);
            pi.assign(inst, cls.members[t], t < to_a ? a : b);
        }
        owned_low[k] = to_a;
        load[a] += to_a;
        if (!cls.is_loop()) load[b] += size - to_a;
    }
    if (inst.beta() == Rational(0)) return pi;  // every good is worth zero: nobody envies

    // Every edge is worth beta to both endpoints, so envy is a count
    // comparison. Moving one edge from j to a strongly envious i lowers
    // sum(load^2) by at least 2, so this terminates.
    auto strongly_envies = [&](std::size_t own, std::size_t held_by_other, std::size_t other_load) {
        if (held_by_other == 0) return false;
        std::size_t slack = other_load > held_by_other ? 0 : 1;
        return own + slack < held_by_other;
    };
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t k = 0; k < classes.size(); ++k) {
            const auto& cls = classes[k];
            if (cls.is_loop()) continue;
            tick(stats);
            auto [a, b] = cls.endpoints;
            std::size_t held_a = owned_low[k];
            std::size_t held_b = cls.members.size() - held_a;
            if (strongly_envies(load[a], held_b, load[b])) {
                for (EdgeId e : cls.members) {
                    if (pi.owned_by(e, b)) {
                        pi.assign(inst, e, a);
                        break;
                    }
                }
                ++owned_low[k];
                ++load[a];
                --load[b];
                changed = true;
            } else if (strongly_envies(load[b], held_a, load[a])) {
                for (EdgeId e : cls.members) {
                    if (pi.owned_by(e, a)) {
                        pi.assign(inst, e, b);
                        break;
                    }
                }
                --owned_low[k];
                --load[a];
                ++load[b];
                changed = true;
            }
        }
    }
    return pi;
}

PipelineState orient_all_but_matching(const Instance& inst, SolveStats* stats) {
    if (connected_components(inst).size() != 1) {
        throw PipelineError("orient_all_but_matching requires a connected instance");
    }
    PipelineState state{PartialOrientation(inst.m()), std::vector<char>(inst.n(), 0), {}, {}};
    auto& pi = state.orientation;

    auto merge = [&](const PartialOrientation& part) {
        for (EdgeId e = 0; e < inst.m(); ++e) {
            if (part.owner(e)) pi.assign(inst, e, *part.owner(e));
        }
        tick(stats, inst.m());
    };

    auto components = classify_all(inst);
    bool nontrivial = false;
    for (std::size_t c = 0; c < components.size(); ++c) {
        const auto& info = components[c];
        if (info.is_forbidden()) {
            throw PipelineError("instance contains a non-trivial odd multitree");
        }
        if (info.is_trivial()) continue;
        nontrivial = true;
        if (std::holds_alternative<Type1>(info.classification)) {
            auto part = orient_type1(inst, info, stats);
            merge(part.orientation);
            state.special_pairs.push_back({std::min(part.v, part.w), std::max(part.v, part.w), c});
        } else {
            merge(orient_type2(inst, info, stats));
        }
        for (VertexId x : info.vertices) state.processed[x] = 1;
    }
    if (!nontrivial) throw PipelineError("no non-trivial heavy component");

    // Propagate to trivial vertices: one light edge from a processed neighbour.
    std::deque<VertexId> queue;
    for (VertexId x = 0; x < inst.n(); ++x) {
        if (state.processed[x]) queue.push_back(x);
    }
    while (!queue.empty()) {
        VertexId i = queue.front();
        queue.pop_front();
        for (VertexId j : adjacent_vertices(inst, i)) {
            tick(stats);
            if (state.processed[j]) continue;
            auto between = edges_between(inst, i, j);
            EdgeId e = between.front();
            if (inst.edge(e).is_heavy() || pi.is_oriented(e)) {
                throw PipelineError("propagation met a heavy or oriented edge");
            }
            pi.assign(inst, e, j);
            state.processed[j] = 1;
            queue.push_back(j);
        }
    }

    std::set<std::pair<VertexId, VertexId>> special;
    for (const auto& sp : state.special_pairs) special.emplace(sp.v, sp.w);
    for (const auto& cls : parallel_classes(inst)) {
        if (cls.is_loop() || special.count(cls.endpoints)) continue;
        extend_pair(inst, state, cls.endpoints.first, cls.endpoints.second, stats);
    }
    for (VertexId x = 0; x < inst.n(); ++x) orient_loops(inst, pi, x, stats);

    for (EdgeId e = 0; e < inst.m(); ++e) {
        if (!pi.is_oriented(e)) state.matching.push_back(e);
    }
    return state;
}

PartialOrientation finish_matching(const Instance& inst, const PipelineState& state,
                                   SolveStats* stats) {
    PartialOrientation pi = state.orientation;
    std::vector<char> touched(inst.n(), 0);
    std::vector<EdgeId> residue;
    for (EdgeId e = 0; e < inst.m(); ++e) {
        tick(stats);
        if (pi.is_oriented(e)) continue;
        const auto& edge = inst.edge(e);
        if (edge.is_heavy()) throw PipelineError("unoriented heavy edge before matching completion");
        if (edge.is_loop()) throw PipelineError("unoriented self-loop before matching completion");
        if (touched[edge.u] || touched[edge.v]) {
            throw PipelineError("unoriented edges do not form a matching");
        }
        touched[edge.u] = touched[edge.v] = 1;
        residue.push_back(e);
    }

    auto owns_outside = [&](VertexId x, VertexId partner) {
        for (EdgeId e : inst.incident(x)) {
            tick(stats);
            if (state.orientation.owned_by(e, x) && !inst.edge(e).joins(x, partner)) return true;
        }
        return false;
    };

    for (EdgeId e : residue) {
        VertexId a = std::min(inst.edge(e).u, inst.edge(e).v);
        VertexId b = std::max(inst.edge(e).u, inst.edge(e).v);
        // Validate PEF on the pair (without the residual edge).
        Rational share_a(0);
        Rational share_b(0);
        for (EdgeId f : edges_between(inst, a, b)) {
            if (state.orientation.owned_by(f, a)) share_a += inst.weight(f);
            if (state.orientation.owned_by(f, b)) share_b += inst.weight(f);
        }
        if (share_a != share_b) throw PipelineError("residual pair is not privately envy-free");
        VertexId keeper = a;  // v_i in the lemma: keeps nothing new
        if (!owns_outside(a, b) && owns_outside(b, a)) keeper = b;
        pi.assign(inst, e, keeper == a ? b : a);
    }
    return pi;
}

SolveOutcome solve(const Instance& inst, SolveStats* stats) {
    for (const auto& info : classify_all(inst)) {
        tick(stats, info.vertices.size());
        if (info.is_forbidden()) return Refused{ForbiddenStructure{info.vertices}};
    }
    auto components = connected_components(inst);
    if (components.size() <= 1) return Oriented{solve_connected(inst, stats)};

    PartialOrientation merged(inst.m());
    for (const auto& vertices : components) {
        auto sub = restrict_to(inst, vertices);
        tick(stats, sub.edges.size() + vertices.size());
        auto local = solve_connected(sub.inst, stats);
        for (EdgeId e = 0; e < sub.edges.size(); ++e) {
            merged.assign(inst, sub.edges[e], sub.vertices[*local.owner(e)]);
        }
    }
    return Oriented{std::move(merged)};
}

}  // namespace efxo
