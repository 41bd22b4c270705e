#pragma once

// Independent reference implementations used as test oracles. They work from
// the definitions directly and share no code with the library beyond the
// Instance container.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "efxo/multigraph.hpp"
#include "efxo/reduction.hpp"

namespace efxo::testing {

using Owners = std::vector<VertexId>;

inline Owners owners_of(const PartialOrientation& pi) {
    Owners out;
    for (const auto& o : pi.owners()) out.push_back(o.value());
    return out;
}

inline Rational edge_value(const Instance& inst, EdgeId e) {
    return inst.edge(e).cls == EdgeClass::Heavy ? inst.alpha() : inst.beta();
}

/// Value agent i assigns to everything owned by j.
inline Rational naive_value(const Instance& inst, const Owners& owners, VertexId i, VertexId j) {
    Rational total(0);
    for (EdgeId e = 0; e < inst.m(); ++e) {
        const auto& edge = inst.edge(e);
        if (owners[e] == j && (edge.u == i || edge.v == i)) total += edge_value(inst, e);
    }
    return total;
}

inline bool naive_strong_envy(const Instance& inst, const Owners& owners, VertexId i, VertexId j) {
    Rational own = naive_value(inst, owners, i, i);
    Rational theirs = naive_value(inst, owners, i, j);
    for (EdgeId e = 0; e < inst.m(); ++e) {
        if (owners[e] != j) continue;
        const auto& edge = inst.edge(e);
        Rational removed = (edge.u == i || edge.v == i) ? edge_value(inst, e) : Rational(0);
        if (own < theirs - removed) return true;
    }
    return false;
}

inline bool naive_is_efx(const Instance& inst, const Owners& owners) {
    for (VertexId i = 0; i < inst.n(); ++i) {
        for (VertexId j = 0; j < inst.n(); ++j) {
            if (i != j && naive_strong_envy(inst, owners, i, j)) return false;
        }
    }
    return true;
}

inline bool naive_is_ef(const Instance& inst, const Owners& owners) {
    for (VertexId i = 0; i < inst.n(); ++i) {
        for (VertexId j = 0; j < inst.n(); ++j) {
            if (i != j && naive_value(inst, owners, i, i) < naive_value(inst, owners, i, j)) return false;
        }
    }
    return true;
}

/// Plain 2^m enumeration over non-loop edges; loops go to their vertex.
inline std::optional<Owners> unreduced_efx_search(const Instance& inst) {
    std::vector<EdgeId> free;
    Owners owners(inst.m());
    for (EdgeId e = 0; e < inst.m(); ++e) {
        if (inst.edge(e).u == inst.edge(e).v) {
            owners[e] = inst.edge(e).u;
        } else {
            free.push_back(e);
        }
    }
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << free.size()); ++mask) {
        for (std::size_t k = 0; k < free.size(); ++k) {
            const auto& edge = inst.edge(free[k]);
            owners[free[k]] = (mask >> k & 1) ? edge.v : edge.u;
        }
        if (naive_is_efx(inst, owners)) return owners;
    }
    return std::nullopt;
}

/// Does any 2^k partition of `values` give an EFX split under the common valuation?
inline bool two_agent_efx(const std::vector<Rational>& values, const std::vector<int>& side) {
    Rational total[2] = {Rational(0), Rational(0)};
    for (std::size_t k = 0; k < values.size(); ++k) total[side[k]] += values[k];
    for (int me = 0; me < 2; ++me) {
        for (std::size_t k = 0; k < values.size(); ++k) {
            if (side[k] != me && total[me] < total[1 - me] - values[k]) return false;
        }
    }
    return true;
}

inline bool brute_two_agent_exists(const std::vector<Rational>& values) {
    std::vector<int> side(values.size());
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << values.size()); ++mask) {
        for (std::size_t k = 0; k < values.size(); ++k) side[k] = mask >> k & 1;
        if (two_agent_efx(values, side)) return true;
    }
    return false;
}

/// Random NOT/OR circuit with `gates` gates over 1..3 inputs; output is the last gate.
inline Circuit random_circuit(std::mt19937_64& rng, std::size_t gates) {
    Circuit c;
    std::size_t inputs = 1 + rng() % 3;
    std::vector<std::string> wires;
    for (std::size_t k = 0; k < inputs; ++k) {
        c.inputs.push_back("x" + std::to_string(k));
        wires.push_back(c.inputs.back());
    }
    for (std::size_t k = 0; k < gates; ++k) {
        Gate g;
        g.out = "g" + std::to_string(k);
        g.a = wires[rng() % wires.size()];
        if (rng() % 2 == 0) {
            g.op = Gate::Op::Not;
        } else {
            g.op = Gate::Op::Or;
            g.b = wires[rng() % wires.size()];
        }
        c.gates.push_back(g);
        wires.push_back(g.out);
    }
    c.output = wires.back();
    return c;
}

/// Direct recursive evaluation, independent of evaluate_circuit.
inline bool naive_eval(const Circuit& c, const Assignment& a, const std::string& wire) {
    auto it = a.find(wire);
    if (it != a.end()) return it->second;
    for (const auto& g : c.gates) {
        if (g.out != wire) continue;
        if (g.op == Gate::Op::Not) return !naive_eval(c, a, g.a);
        return naive_eval(c, a, g.a) || naive_eval(c, a, g.b);
    }
    throw std::logic_error("undefined wire " + wire);
}

inline std::optional<Assignment> satisfying_assignment(const Circuit& c) {
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << c.inputs.size()); ++mask) {
        Assignment a;
        for (std::size_t k = 0; k < c.inputs.size(); ++k) a[c.inputs[k]] = mask >> k & 1;
        if (naive_eval(c, a, c.output)) return a;
    }
    return std::nullopt;
}

/// n = 2: one heavy edge and q light self-loops at each endpoint.
inline Instance loop_pair_instance(std::size_t q, Rational alpha, Rational beta) {
    std::vector<EdgeSpec> specs{{0, 1, EdgeClass::Heavy}};
    for (std::size_t k = 0; k < q; ++k) {
        specs.push_back({0, 0, EdgeClass::Light});
        specs.push_back({1, 1, EdgeClass::Light});
    }
    return Instance::create(2, alpha, beta, specs);
}

}  // namespace efxo::testing
