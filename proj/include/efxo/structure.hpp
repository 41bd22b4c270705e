#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "efxo/multigraph.hpp"

namespace efxo {

/// Non-odd multitree: (v, w) is the lexicographically smallest pair with an
/// even, positive number of heavy edges.
struct Type1 {
    VertexId v;
    VertexId w;
};

struct HeavySelfLoop {
    VertexId vertex;
    EdgeId edge;
};

/// A heavy edge whose condensed counterpart is not a tree edge. The tree is
/// re-rooted at `root`, the lower endpoint.
struct NonTreeHeavyEdge {
    EdgeId edge;
    VertexId root;
    VertexId other;
};

/// Heavy edges do not induce a multitree.
struct Type2 {
    std::variant<HeavySelfLoop, NonTreeHeavyEdge> witness;

    VertexId root() const;
};

struct Trivial {};
struct ForbiddenOddMultitree {};

using Classification = std::variant<Type1, Type2, Trivial, ForbiddenOddMultitree>;

std::string label(const Classification& c);

struct HeavyComponentInfo {
    std::vector<VertexId> vertices;
    Classification classification = Trivial{};
    /// |vertices| - 1 heavy non-loop edge ids; empty for Trivial.
    std::vector<EdgeId> heavy_spanning_tree;

    bool is_trivial() const { return std::holds_alternative<Trivial>(classification); }
    bool is_forbidden() const {
        return std::holds_alternative<ForbiddenOddMultitree>(classification);
    }
};

/// Connectivity over all edges; each set sorted, sets ordered by smallest member.
std::vector<std::vector<VertexId>> connected_components(const Instance& inst);

/// Connectivity over heavy non-loop edges, same ordering as above.
std::vector<std::vector<VertexId>> heavy_components(const Instance& inst);

/// The following take K as a vertex set and throw std::invalid_argument unless
/// K is exactly one heavy component.
bool is_multitree(const Instance& inst, const std::vector<VertexId>& component);
bool is_odd_multitree(const Instance& inst, const std::vector<VertexId>& component);
HeavyComponentInfo classify_heavy_component(const Instance& inst,
                                            const std::vector<VertexId>& component);

std::vector<HeavyComponentInfo> classify_all(const Instance& inst);

bool has_forbidden_structure(const Instance& inst);

/// Proper 2-colouring (0/1) ignoring self-loops, if one exists.
std::optional<std::vector<int>> is_bipartite(const Instance& inst);

}  // namespace efxo
