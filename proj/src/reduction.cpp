#include "efxo/reduction.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

#include "efxo/fairness.hpp"
#include "efxo/oracle.hpp"
#include "efxo/structure.hpp"

namespace efxo {

namespace {

// ---------------------------------------------------------------------------
// Gadget adjacency tables; `QMinusOne` marks a class of q-1 parallel light edges.

enum class Count { One, QMinusOne };

struct TableVertex {
    const char* label;
    Color color;
};

struct TableEdge {
    int a;
    int b;
    EdgeClass cls;
    Count count;
};

struct Port {
    int edge;  // table edge index
    int red;
    int black;
};

struct GadgetTable {
    std::vector<TableVertex> vertices;
    std::vector<TableEdge> edges;
    std::vector<Port> inputs;
    std::optional<Port> output;
};

constexpr auto R = Color::Red;
constexpr auto B = Color::Black;
constexpr auto H = EdgeClass::Heavy;
constexpr auto L = EdgeClass::Light;
constexpr auto One = Count::One;
constexpr auto Qm1 = Count::QMinusOne;

// Two copies of H_q (top row u1..u5, bottom row v1..v5 read right to left)
// joined by the heavy edges x = u1-v5 and not_x = u5-v1.
const GadgetTable kNotTable{
    {{"u1", R}, {"u2", B}, {"u3", R}, {"u4", B}, {"u5", R},
     {"v1", B}, {"v2", R}, {"v3", B}, {"v4", R}, {"v5", B}},
    {{0, 9, H, One},   // x
     {4, 5, H, One},   // not_x
     {1, 2, H, One},
     {2, 3, H, One},
     {8, 7, H, One},
     {7, 6, H, One},
     {0, 1, L, One},
     {3, 4, L, One},
     {9, 8, L, One},
     {6, 5, L, One},
     {1, 2, L, Qm1},
     {2, 3, L, One},
     {8, 7, L, One},
     {7, 6, L, Qm1}},
    {{0, 0, 9}},
    Port{1, 4, 5},
};

// x = a-a', y = b-b', output c-c'.
const GadgetTable kOrTable{
    {{"a", R}, {"a'", B}, {"b", R}, {"b'", B}, {"v", R}, {"w", B},
     {"u", R}, {"v'", B}, {"u'", B}, {"c", R}, {"c'", B}},
    {{0, 1, H, One},   // x
     {2, 3, H, One},   // y
     {9, 10, H, One},  // x or y
     {4, 5, H, One},
     {5, 6, H, One},
     {4, 7, H, One},
     {6, 8, H, One},
     {1, 4, L, One},
     {5, 9, L, One},
     {6, 3, L, One},
     {0, 10, L, One},
     {2, 10, L, One}},
    {{0, 0, 1}, {1, 2, 3}},
    Port{2, 9, 10},
};

// Copies a-b onto c-d.
const GadgetTable kDuplicationTable{
    {{"a", R}, {"b", B}, {"c", R}, {"d", B}},
    {{0, 1, H, One}, {2, 3, H, One}, {0, 3, L, One}, {1, 2, L, One}},
    {{0, 0, 1}},
    Port{1, 2, 3},
};

// Hexagon u1..u6 with the tail u1-u7-u8-u9; u8-u9 is the edge forced true.
const GadgetTable kTrueTable{
    {{"u1", B}, {"u2", R}, {"u3", B}, {"u4", R}, {"u5", B},
     {"u6", R}, {"u7", R}, {"u8", B}, {"u9", R}},
    {{7, 8, H, One},  // true
     {1, 2, H, One},
     {2, 3, H, One},
     {4, 5, H, One},
     {0, 6, H, One},
     {0, 1, L, One},
     {3, 4, L, One},
     {5, 0, L, One},
     {6, 7, L, One},
     {1, 2, L, One},
     {2, 3, L, One}},
    {{0, 8, 7}},
    std::nullopt,
};

const GadgetTable kSubgadgetTable{
    {{"u1", R}, {"u2", B}, {"u3", R}, {"u4", B}, {"u5", R}},
    {{0, 1, L, One},  // e
     {3, 4, L, One},  // e'
     {1, 2, H, One},
     {2, 3, H, One},
     {1, 2, L, Qm1},
     {2, 3, L, One}},
    {},
    std::nullopt,
};

const GadgetTable& table_for(GadgetKind kind) {
    switch (kind) {
        case GadgetKind::Not: return kNotTable;
        case GadgetKind::Or: return kOrTable;
        case GadgetKind::Duplication: return kDuplicationTable;
        case GadgetKind::True: return kTrueTable;
    }
    throw std::logic_error("unknown gadget kind");
}

struct ExpandedEdge {
    int a;
    int b;
    EdgeClass cls;
    int table_edge;
};

std::vector<ExpandedEdge> expand(const GadgetTable& table, std::size_t q) {
    std::vector<ExpandedEdge> out;
    for (int k = 0; k < static_cast<int>(table.edges.size()); ++k) {
        const auto& e = table.edges[k];
        std::size_t copies = e.count == Count::One ? 1 : q - 1;
        for (std::size_t c = 0; c < copies; ++c) out.push_back({e.a, e.b, e.cls, k});
    }
    return out;
}

std::size_t expanded_index(const std::vector<ExpandedEdge>& edges, int table_edge) {
    for (std::size_t k = 0; k < edges.size(); ++k) {
        if (edges[k].table_edge == table_edge) return k;
    }
    throw std::logic_error("port edge missing from expansion");
}

void check_weights(std::size_t q, const Rational& alpha, const Rational& beta) {
    if (q < 2) throw std::invalid_argument("the construction needs multiplicity q >= 2");
    if (!(alpha > Rational(static_cast<std::int64_t>(q)) * beta)) {
        throw std::invalid_argument("the construction needs alpha > q * beta");
    }
}

// ---------------------------------------------------------------------------

std::vector<std::string> tokenize(std::string_view line) {
    std::vector<std::string> out;
    std::istringstream in{std::string(line)};
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

class Builder {
public:
    Builder(std::size_t q, Rational alpha, Rational beta) : q_(q) {
        map_.q = q;
        map_.alpha = alpha;
        map_.beta = beta;
    }

    WireEdge new_wire() {
        VertexId red = add_vertex(Color::Red);
        VertexId black = add_vertex(Color::Black);
        EdgeId e = add_edge(red, black, EdgeClass::Heavy);
        return {e, red, black};
    }

    /// Instantiates a gadget whose input ports reuse `inputs`; returns the
    /// output wire if the gadget has one.
    std::optional<WireEdge> add_gadget(GadgetKind kind, const std::vector<WireEdge>& inputs) {
        const auto& table = table_for(kind);
        auto expanded = expand(table, q_);
        GadgetRecord record{kind, std::vector<VertexId>(table.vertices.size()),
                            std::vector<EdgeId>(expanded.size()), {}};
        std::vector<char> bound(table.vertices.size(), 0);
        std::map<int, EdgeId> reused;
        for (std::size_t k = 0; k < table.inputs.size(); ++k) {
            const auto& port = table.inputs[k];
            record.vertices[port.red] = inputs.at(k).red;
            record.vertices[port.black] = inputs.at(k).black;
            bound[port.red] = bound[port.black] = 1;
            reused[port.edge] = inputs.at(k).edge;
        }
        for (std::size_t v = 0; v < table.vertices.size(); ++v) {
            if (!bound[v]) record.vertices[v] = add_vertex(table.vertices[v].color);
        }
        for (std::size_t k = 0; k < expanded.size(); ++k) {
            const auto& e = expanded[k];
            auto it = reused.find(e.table_edge);
            record.edges[k] = it != reused.end()
                                  ? it->second
                                  : add_edge(record.vertices[e.a], record.vertices[e.b], e.cls);
        }
        for (const auto& port : table.inputs) record.ports.push_back(expanded_index(expanded, port.edge));
        std::optional<WireEdge> out;
        if (table.output) {
            std::size_t local = expanded_index(expanded, table.output->edge);
            record.ports.push_back(local);
            out = WireEdge{record.edges[local], record.vertices[table.output->red],
                           record.vertices[table.output->black]};
        }
        map_.gadgets.push_back(std::move(record));
        return out;
    }

    Reduction finish() {
        return Reduction{Instance::create(map_.colors.size(), map_.alpha, map_.beta, specs_),
                         std::move(map_)};
    }

    ReductionMap& map() { return map_; }

private:
    VertexId add_vertex(Color c) {
        map_.colors.push_back(c);
        return map_.colors.size() - 1;
    }

    EdgeId add_edge(VertexId a, VertexId b, EdgeClass cls) {
        specs_.push_back({a, b, cls});
        return specs_.size() - 1;
    }

    std::size_t q_;
    ReductionMap map_;
    std::vector<EdgeSpec> specs_;
};

}  // namespace

std::string gadget_name(GadgetKind kind) {
    switch (kind) {
        case GadgetKind::Not: return "not";
        case GadgetKind::Or: return "or";
        case GadgetKind::Duplication: return "duplication";
        case GadgetKind::True: return "true";
    }
    return "unknown";
}

Circuit parse_circuit(std::string_view text) {
    Circuit c;
    std::set<std::string> defined;
    bool has_output = false;
    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    std::string line;
    auto fail = [&](const std::string& msg) {
        throw CircuitError("line " + std::to_string(line_no) + ": " + msg);
    };
    auto need = [&](const std::string& wire) {
        if (!defined.count(wire)) fail("undefined wire '" + wire + "'");
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        auto tok = tokenize(line);
        if (tok.empty()) continue;
        if (tok[0] == "input") {
            if (tok.size() != 2) fail("expected 'input <name>'");
            if (!defined.insert(tok[1]).second) fail("wire '" + tok[1] + "' defined twice");
            c.inputs.push_back(tok[1]);
        } else if (tok[0] == "output") {
            if (tok.size() != 2) fail("expected 'output <name>'");
            if (has_output) fail("more than one output");
            need(tok[1]);
            c.output = tok[1];
            has_output = true;
        } else if (tok.size() >= 3 && tok[1] == "=") {
            const std::string& op = tok[2];
            Gate g{tok[0], Gate::Op::Not, {}, {}};
            if (op == "AND") fail("AND gates are not supported; rewrite with NOT and OR");
            if (op == "NOT") {
                if (tok.size() != 4) fail("expected '<name> = NOT <wire>'");
                need(tok[3]);
                g.a = tok[3];
            } else if (op == "OR") {
                if (tok.size() != 5) fail("expected '<name> = OR <wire> <wire>'");
                need(tok[3]);
                need(tok[4]);
                g.op = Gate::Op::Or;
                g.a = tok[3];
                g.b = tok[4];
            } else {
                fail("unknown gate '" + op + "'");
            }
            if (!defined.insert(g.out).second) fail("wire '" + g.out + "' defined twice");
            c.gates.push_back(std::move(g));
        } else {
            fail("unrecognised line");
        }
    }
    if (!has_output) throw CircuitError("circuit has no output");
    return c;
}

std::string format_circuit(const Circuit& c) {
    std::ostringstream out;
    for (const auto& in : c.inputs) out << "input " << in << "\n";
    for (const auto& g : c.gates) {
        out << g.out << " = ";
        if (g.op == Gate::Op::Not) {
            out << "NOT " << g.a << "\n";
        } else {
            out << "OR " << g.a << " " << g.b << "\n";
        }
    }
    out << "output " << c.output << "\n";
    return out.str();
}

Circuit normalize_circuit(Circuit c) {
    bool has_not = std::any_of(c.gates.begin(), c.gates.end(),
                               [](const Gate& g) { return g.op == Gate::Op::Not; });
    if (has_not) return c;
    if (c.inputs.empty()) throw CircuitError("circuit has no inputs");
    std::set<std::string> names(c.inputs.begin(), c.inputs.end());
    for (const auto& g : c.gates) names.insert(g.out);
    auto fresh = [&](std::string base) {
        std::string name = base;
        for (int k = 0; names.count(name); ++k) name = base + "_" + std::to_string(k);
        names.insert(name);
        return name;
    };
    std::string n1 = fresh("n1");
    std::string n2 = fresh("n2");
    c.gates.push_back({n1, Gate::Op::Not, c.inputs.front(), {}});
    c.gates.push_back({n2, Gate::Op::Not, n1, {}});
    return c;
}

std::map<std::string, bool> evaluate_circuit(const Circuit& c, const Assignment& inputs) {
    std::map<std::string, bool> value;
    for (const auto& in : c.inputs) {
        auto it = inputs.find(in);
        if (it == inputs.end()) throw CircuitError("no value for input '" + in + "'");
        value[in] = it->second;
    }
    for (const auto& g : c.gates) {
        value[g.out] = g.op == Gate::Op::Not ? !value.at(g.a) : (value.at(g.a) || value.at(g.b));
    }
    return value;
}

Reduction build_instance(const Circuit& circuit, std::size_t q, Rational alpha, Rational beta) {
    check_weights(q, alpha, beta);
    Circuit c = normalize_circuit(circuit);

    std::map<std::string, std::size_t> uses;
    for (const auto& g : c.gates) {
        ++uses[g.a];
        if (g.op == Gate::Op::Or) ++uses[g.b];
    }
    ++uses[c.output];

    Builder builder(q, alpha, beta);
    auto& map = builder.map();
    map.circuit = c;
    std::map<std::string, std::deque<WireEdge>> available;

    // Chain duplication gadgets: copy k feeds the gadget producing copy k+1.
    auto register_wire = [&](const std::string& name, WireEdge first) {
        auto& copies = map.wires[name];
        copies.push_back(first);
        std::size_t needed = std::max<std::size_t>(uses[name], 1);
        while (copies.size() < needed) {
            copies.push_back(*builder.add_gadget(GadgetKind::Duplication, {copies.back()}));
        }
        available[name].assign(copies.begin(), copies.end());
    };
    auto take = [&](const std::string& name) {
        auto& queue = available.at(name);
        WireEdge w = queue.front();
        queue.pop_front();
        return w;
    };

    for (const auto& in : c.inputs) register_wire(in, builder.new_wire());
    for (const auto& g : c.gates) {
        std::optional<WireEdge> out;
        if (g.op == Gate::Op::Not) {
            out = builder.add_gadget(GadgetKind::Not, {take(g.a)});
        } else {
            WireEdge x = take(g.a);
            WireEdge y = take(g.b);
            out = builder.add_gadget(GadgetKind::Or, {x, y});
        }
        register_wire(g.out, *out);
    }
    builder.add_gadget(GadgetKind::True, {take(c.output)});
    return builder.finish();
}

Reduction build_instance(const Circuit& c, std::size_t q) {
    return build_instance(c, q, Rational(static_cast<std::int64_t>(q) + 1), Rational(1));
}

Assignment extract_assignment(const ReductionMap& map, const PartialOrientation& pi) {
    Assignment out;
    for (const auto& in : map.circuit.inputs) {
        const auto& wire = map.wires.at(in).front();
        out[in] = pi.owned_by(wire.edge, wire.red);
    }
    return out;
}

namespace {

/// Depth-first composition of gadget-local EFX completions, checking every
/// pair of vertices once both have all incident edges oriented.
class CompletionSearch {
public:
    CompletionSearch(const Instance& inst, const ReductionMap& map, PartialOrientation seed)
        : inst_(inst), map_(map), pi_(std::move(seed)), complete_(inst.n(), 0) {}

    bool run() {
        for (VertexId x = 0; x < inst_.n(); ++x) complete_[x] = is_complete(x);
        for (VertexId x = 0; x < inst_.n(); ++x) {
            if (complete_[x] && !pairs_ok(x)) return false;
        }
        return place(0);
    }

    const PartialOrientation& orientation() const { return pi_; }

private:
    using CacheKey = std::pair<GadgetKind, std::vector<bool>>;

    const std::vector<PartialOrientation>& local_completions(const GadgetRecord& g,
                                                             std::vector<bool> boundary) {
        CacheKey key{g.kind, boundary};
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        auto gadget = standalone_gadget(g.kind, map_.q, map_.alpha, map_.beta);
        const auto& table = table_for(g.kind);
        std::vector<Port> ports = table.inputs;
        if (table.output) ports.push_back(*table.output);
        std::vector<Constraint> constraints;
        for (std::size_t k = 0; k < gadget.ports.size(); ++k) {
            VertexId owner = boundary[k] ? static_cast<VertexId>(ports[k].red)
                                         : static_cast<VertexId>(ports[k].black);
            constraints.push_back({gadget.ports[k], owner});
        }
        auto found = all_efx_orientations(gadget.instance, constraints);
        return cache_.emplace(key, std::move(found)).first->second;
    }

    bool place(std::size_t index) {
        if (index == map_.gadgets.size()) return true;
        const auto& g = map_.gadgets[index];
        std::vector<bool> boundary;
        for (std::size_t local : g.ports) {
            EdgeId e = g.edges[local];
            VertexId red = g.vertices[red_of(g.kind, boundary.size())];
            boundary.push_back(pi_.owned_by(e, red));
        }
        for (const auto& local : local_completions(g, boundary)) {
            std::vector<EdgeId> placed;
            for (std::size_t k = 0; k < g.edges.size(); ++k) {
                EdgeId e = g.edges[k];
                if (pi_.is_oriented(e)) continue;
                pi_.assign(inst_, e, g.vertices[*local.owner(k)]);
                placed.push_back(e);
            }
            std::vector<VertexId> fresh;
            for (VertexId x : g.vertices) {
                if (!complete_[x] && is_complete(x)) {
                    complete_[x] = 1;
                    fresh.push_back(x);
                }
            }
            bool ok = std::all_of(fresh.begin(), fresh.end(), [&](VertexId x) { return pairs_ok(x); });
            if (ok && place(index + 1)) return true;
            for (VertexId x : fresh) complete_[x] = 0;
            for (EdgeId e : placed) pi_.clear(e);
        }
        return false;
    }

    static int red_of(GadgetKind kind, std::size_t port) {
        const auto& table = table_for(kind);
        if (port < table.inputs.size()) return table.inputs[port].red;
        return table.output->red;
    }

    bool is_complete(VertexId x) const {
        const auto& inc = inst_.incident(x);
        return std::all_of(inc.begin(), inc.end(), [&](EdgeId e) { return pi_.is_oriented(e); });
    }

    bool pairs_ok(VertexId x) const {
        for (EdgeId e : inst_.incident(x)) {
            const auto& edge = inst_.edge(e);
            if (edge.is_loop()) continue;
            VertexId y = edge.other(x);
            if (!complete_[y]) continue;
            if (strongly_envies(inst_, pi_, x, y).strongly_envies) return false;
            if (strongly_envies(inst_, pi_, y, x).strongly_envies) return false;
        }
        return true;
    }

    const Instance& inst_;
    const ReductionMap& map_;
    PartialOrientation pi_;
    std::vector<char> complete_;
    std::map<CacheKey, std::vector<PartialOrientation>> cache_;
};

}  // namespace

std::optional<PartialOrientation> construct_orientation_from_assignment(
    const Instance& inst, const ReductionMap& map, const Assignment& assignment) {
    auto values = evaluate_circuit(map.circuit, assignment);
    if (!values.at(map.circuit.output)) return std::nullopt;

    PartialOrientation seed(inst.m());
    for (const auto& [name, copies] : map.wires) {
        for (const auto& w : copies) seed.assign(inst, w.edge, values.at(name) ? w.red : w.black);
    }
    CompletionSearch search(inst, map, std::move(seed));
    if (!search.run()) return std::nullopt;
    const auto& pi = search.orientation();
    if (!pi.is_complete() || !is_efx(inst, pi)) return std::nullopt;
    return pi;
}

ReductionReport verify_reduction_properties(const Instance& inst, const ReductionMap& map) {
    ReductionReport report;
    bool colours_proper = map.colors.size() == inst.n();
    if (colours_proper) {
        for (const auto& e : inst.edges()) {
            if (map.colors[e.u] == map.colors[e.v]) colours_proper = false;
        }
    }
    report.bipartite = colours_proper && is_bipartite(inst).has_value();
    report.weights = inst.alpha() > Rational(static_cast<std::int64_t>(map.q)) * inst.beta();
    report.multiplicity = multiplicity(inst) == map.q;
    report.odd_multitrees = true;
    for (const auto& info : classify_all(inst)) {
        // Vertices without heavy edges are trivial components and carry no
        // heavy structure; every heavy component must be forbidden.
        if (info.is_trivial()) continue;
        if (!info.is_forbidden()) report.odd_multitrees = false;
    }
    return report;
}

GadgetInstance standalone_gadget(GadgetKind kind, std::size_t q, Rational alpha, Rational beta) {
    const auto& table = table_for(kind);
    if (q < 2) throw std::invalid_argument("gadgets need multiplicity q >= 2");
    auto expanded = expand(table, q);
    std::vector<EdgeSpec> specs;
    for (const auto& e : expanded) {
        specs.push_back({static_cast<VertexId>(e.a), static_cast<VertexId>(e.b), e.cls});
    }
    GadgetInstance out{Instance::create(table.vertices.size(), alpha, beta, specs), {}, {}, {}};
    for (const auto& v : table.vertices) {
        out.labels.emplace_back(v.label);
        out.colors.push_back(v.color);
    }
    for (const auto& port : table.inputs) out.ports.push_back(expanded_index(expanded, port.edge));
    if (table.output) out.ports.push_back(expanded_index(expanded, table.output->edge));
    return out;
}

SubgadgetInstance build_subgadget(std::size_t q, Rational alpha, Rational beta) {
    if (q < 2) throw std::invalid_argument("H_q needs q >= 2");
    auto expanded = expand(kSubgadgetTable, q);
    std::vector<EdgeSpec> specs;
    for (const auto& e : expanded) {
        specs.push_back({static_cast<VertexId>(e.a), static_cast<VertexId>(e.b), e.cls});
    }
    return SubgadgetInstance{Instance::create(5, alpha, beta, specs),
                             expanded_index(expanded, 0), expanded_index(expanded, 1)};
}

}  // namespace efxo
