#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "efxo/multigraph.hpp"

namespace efxo {

struct Gate {
    enum class Op { Not, Or };
    std::string out;
    Op op;
    std::string a;
    std::string b;  // empty for NOT
};

/// NOT/OR circuit over named wires; gates appear in topological order.
struct Circuit {
    std::vector<std::string> inputs;
    std::vector<Gate> gates;
    std::string output;
};

using Assignment = std::map<std::string, bool>;

class CircuitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Line format: `input <name>`, `<name> = NOT <w>`, `<name> = OR <w> <w>`,
/// `output <name>`. Blank lines and `#` comments are ignored.
Circuit parse_circuit(std::string_view text);
std::string format_circuit(const Circuit& c);

/// Guarantees at least one NOT gate by appending NOT(NOT(first input)).
Circuit normalize_circuit(Circuit c);

/// Value of every wire under an assignment of the inputs.
std::map<std::string, bool> evaluate_circuit(const Circuit& c, const Assignment& inputs);

enum class Color { Red, Black };
enum class GadgetKind { Not, Or, Duplication, True };

std::string gadget_name(GadgetKind kind);

/// A heavy edge encoding a boolean: owned by `red` means true.
struct WireEdge {
    EdgeId edge;
    VertexId red;
    VertexId black;
};

struct GadgetRecord {
    GadgetKind kind;
    /// Global ids indexed by the gadget's local vertex / expanded edge order.
    std::vector<VertexId> vertices;
    std::vector<EdgeId> edges;
    /// Local expanded indices of the boundary wire edges (inputs, then output).
    std::vector<std::size_t> ports;
};

struct ReductionMap {
    Circuit circuit;  // normalized
    std::size_t q = 2;
    Rational alpha;
    Rational beta;
    /// copies[0] is the edge produced for the wire; further copies come from
    /// a chain of duplication gadgets.
    std::map<std::string, std::vector<WireEdge>> wires;
    std::vector<Color> colors;
    std::vector<GadgetRecord> gadgets;
};

struct Reduction {
    Instance instance;
    ReductionMap map;
};

/// Requires q >= 2 and alpha > q * beta; throws std::invalid_argument otherwise.
Reduction build_instance(const Circuit& c, std::size_t q, Rational alpha, Rational beta);
Reduction build_instance(const Circuit& c, std::size_t q);

Assignment extract_assignment(const ReductionMap& map, const PartialOrientation& pi);

/// EFX orientation whose wire edges follow the assignment, or nullopt when the
/// assignment does not satisfy the circuit.
std::optional<PartialOrientation> construct_orientation_from_assignment(
    const Instance& inst, const ReductionMap& map, const Assignment& assignment);

struct ReductionReport {
    bool bipartite = false;          // 2-colourable and every edge joins red to black
    bool weights = false;            // alpha > q * beta
    bool multiplicity = false;       // multiplicity == q
    bool odd_multitrees = false;     // every heavy component is a non-trivial odd multitree

    bool all() const { return bipartite && weights && multiplicity && odd_multitrees; }
};

ReductionReport verify_reduction_properties(const Instance& inst, const ReductionMap& map);

/// Standalone copy of one gadget, with edges in the gadget's expanded order.
struct GadgetInstance {
    Instance instance;
    std::vector<std::string> labels;
    std::vector<Color> colors;
    std::vector<std::size_t> ports;  // edge ids of the boundary wire edges
};

GadgetInstance standalone_gadget(GadgetKind kind, std::size_t q, Rational alpha, Rational beta);

/// The five-vertex subgadget H_q: vertices u1..u5 are 0..4, `e` joins u1-u2
/// and `e_prime` joins u4-u5.
struct SubgadgetInstance {
    Instance instance;
    EdgeId e;
    EdgeId e_prime;
};

SubgadgetInstance build_subgadget(std::size_t q, Rational alpha, Rational beta);

}  // namespace efxo
