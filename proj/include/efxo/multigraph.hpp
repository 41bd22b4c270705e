#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

namespace efxo {

/// Exact weight/utility type. Always stored in reduced form with a positive
/// denominator.
using Rational = boost::rational<std::int64_t>;

using VertexId = std::size_t;
using EdgeId = std::size_t;

/// Parses "p", "-p" or "p/q". Throws std::invalid_argument on malformed text
/// or a zero denominator.
Rational parse_rational(const std::string& text);
std::string format_rational(const Rational& r);

enum class EdgeClass { Heavy, Light };

struct EdgeSpec {
    VertexId u;
    VertexId v;
    EdgeClass cls;
};

struct Edge {
    EdgeId id;
    VertexId u;
    VertexId v;
    EdgeClass cls;

    bool is_loop() const { return u == v; }
    bool is_heavy() const { return cls == EdgeClass::Heavy; }
    bool incident(VertexId x) const { return u == x || v == x; }
    bool joins(VertexId a, VertexId b) const {
        return (u == a && v == b) || (u == b && v == a);
    }
    VertexId other(VertexId x) const { return u == x ? v : u; }
    friend bool operator==(const Edge&, const Edge&) = default;
};

/// A bi-valued symmetric multigraph. Immutable once built.
class Instance {
public:
    /// Validates alpha > beta >= 0 and endpoint ranges; throws
    /// std::invalid_argument otherwise. Edge ids are list positions.
    static Instance create(std::size_t n, Rational alpha, Rational beta,
                           std::span<const EdgeSpec> edges);

    std::size_t n() const { return n_; }
    std::size_t m() const { return edges_.size(); }
    const Rational& alpha() const { return alpha_; }
    const Rational& beta() const { return beta_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const Edge& edge(EdgeId e) const { return edges_.at(e); }
    const Rational& weight(EdgeId e) const {
        return edges_[e].is_heavy() ? alpha_ : beta_;
    }
    /// Edge ids incident with x in ascending order; a self-loop is listed once.
    const std::vector<EdgeId>& incident(VertexId x) const { return incidence_.at(x); }

    friend bool operator==(const Instance&, const Instance&) = default;

private:
    Instance() = default;

    std::size_t n_ = 0;
    Rational alpha_;
    Rational beta_;
    std::vector<Edge> edges_;
    std::vector<std::vector<EdgeId>> incidence_;
};

Instance new_instance(std::size_t n, Rational alpha, Rational beta,
                      std::span<const EdgeSpec> edges);

/// Per-edge owner assignment. Owners are always endpoints of their edge.
class PartialOrientation {
public:
    PartialOrientation() = default;
    explicit PartialOrientation(std::size_t m) : owners_(m) {}

    /// Validates every set owner against the instance.
    static PartialOrientation from_owners(const Instance& inst,
                                          std::vector<std::optional<VertexId>> owners);

    std::size_t size() const { return owners_.size(); }
    const std::optional<VertexId>& owner(EdgeId e) const { return owners_.at(e); }
    bool is_oriented(EdgeId e) const { return owners_.at(e).has_value(); }
    bool owned_by(EdgeId e, VertexId x) const { return owners_[e] == x; }
    bool is_complete() const;
    const std::vector<std::optional<VertexId>>& owners() const { return owners_; }

    /// Throws std::invalid_argument if owner is not an endpoint of e.
    void assign(const Instance& inst, EdgeId e, VertexId owner);
    void clear(EdgeId e) { owners_.at(e).reset(); }

    /// Edge ids owned by x, ascending.
    std::vector<EdgeId> bundle(const Instance& inst, VertexId x) const;

    friend bool operator==(const PartialOrientation&, const PartialOrientation&) = default;

private:
    std::vector<std::optional<VertexId>> owners_;
};

/// Edges sharing an unordered endpoint pair (first <= second), any weight.
struct ParallelClass {
    std::pair<VertexId, VertexId> endpoints;
    std::vector<EdgeId> members;
    std::size_t heavy_count = 0;
    std::size_t light_count = 0;

    bool is_loop() const { return endpoints.first == endpoints.second; }
};

/// u_i(pi_i): total weight owned by i.
Rational utility(const Instance& inst, const PartialOrientation& pi, VertexId i);

/// u_i(pi_j): weight of the edges between i and j that j owns. Requires i != j.
Rational utility_of_bundle_to(const Instance& inst, const PartialOrientation& pi,
                              VertexId i, VertexId j);

/// Sorted by endpoint pair; members ascending.
std::vector<ParallelClass> parallel_classes(const Instance& inst);

/// Largest parallel class size, 0 for an edgeless instance.
std::size_t multiplicity(const Instance& inst);

/// Non-loop edges between a and b, ascending.
std::vector<EdgeId> edges_between(const Instance& inst, VertexId a, VertexId b);

}  // namespace efxo
