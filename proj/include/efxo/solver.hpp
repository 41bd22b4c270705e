#pragma once

#include <cstdint>
#include <set>
#include <utility>
#include <variant>
#include <vector>

#include "efxo/multigraph.hpp"
#include "efxo/structure.hpp"

namespace efxo {

/// Raised when a pipeline step is entered with its hypotheses violated. Seeing
/// one from solve() means a bug, not a property of the input.
class PipelineError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

struct Oriented {
    PartialOrientation orientation;
};

struct ForbiddenStructure {
    std::vector<VertexId> component;
};

struct Refused {
    ForbiddenStructure reason;
};

using SolveOutcome = std::variant<Oriented, Refused>;

/// Counts elementary edge/vertex visits; used to check polynomial scaling.
struct SolveStats {
    std::uint64_t steps = 0;
};

struct SpecialPair {
    VertexId v;
    VertexId w;
    std::size_t component;
};

struct PipelineState {
    PartialOrientation orientation;
    std::vector<char> processed;
    std::vector<SpecialPair> special_pairs;
    std::vector<EdgeId> matching;
};

struct Type1Orientation {
    PartialOrientation orientation;
    VertexId v;
    VertexId w;
};

/// Splits the special pair evenly (one light edge may stay unoriented) and
/// orients the remaining spanning-tree edges away from {v, w}.
Type1Orientation orient_type1(const Instance& inst, const HeavyComponentInfo& component,
                              SolveStats* stats = nullptr);

/// Tree edges away from the witness root, witness edge toward the root; every
/// vertex of the component ends up owning exactly one heavy edge.
PartialOrientation orient_type2(const Instance& inst, const HeavyComponentInfo& component,
                                SolveStats* stats = nullptr);

struct TwoAgentSplit {
    std::vector<std::size_t> a;
    std::vector<std::size_t> b;
};

/// EFX split of goods valued identically by both agents; value(b) >= value(a).
TwoAgentSplit two_agent_efx_split(std::span<const Rational> values);

/// Orients every edge between i and j and the self-loops at i and j, keeping
/// the orientation EF.
void extend_pair(const Instance& inst, PipelineState& state, VertexId i, VertexId j,
                 SolveStats* stats = nullptr);

/// EFX orientation of an instance without heavy edges.
PartialOrientation all_light_orientation(const Instance& inst, SolveStats* stats = nullptr);

/// EF orientation leaving only a light matching between special pairs.
PipelineState orient_all_but_matching(const Instance& inst, SolveStats* stats = nullptr);

/// Orients each residual matching edge toward the endpoint without outside edges.
PartialOrientation finish_matching(const Instance& inst, const PipelineState& state,
                                   SolveStats* stats = nullptr);

SolveOutcome solve(const Instance& inst, SolveStats* stats = nullptr);

}  // namespace efxo
