#include "efxo/multigraph.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <stdexcept>

namespace efxo {

namespace {

std::int64_t parse_int(std::string_view s, const std::string& whole) {
    std::int64_t value = 0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (!s.empty() && s.front() == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || first == last) {
        throw std::invalid_argument("malformed rational: '" + whole + "'");
    }
    return value;
}

}  // namespace

Rational parse_rational(const std::string& text) {
    std::string_view s(text);
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    auto slash = s.find('/');
    if (slash == std::string_view::npos) return Rational(parse_int(s, text));
    std::int64_t num = parse_int(s.substr(0, slash), text);
    std::int64_t den = parse_int(s.substr(slash + 1), text);
    if (den == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
    return Rational(num, den);
}

std::string format_rational(const Rational& r) {
    if (r.denominator() == 1) return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

Instance Instance::create(std::size_t n, Rational alpha, Rational beta,
                          std::span<const EdgeSpec> edges) {
    if (beta < Rational(0)) throw std::invalid_argument("beta must be non-negative");
    if (!(alpha > beta)) throw std::invalid_argument("alpha must strictly exceed beta");
    Instance inst;
    inst.n_ = n;
    inst.alpha_ = alpha;
    inst.beta_ = beta;
    inst.incidence_.resize(n);
    inst.edges_.reserve(edges.size());
    for (std::size_t k = 0; k < edges.size(); ++k) {
        const auto& spec = edges[k];
        if (spec.u >= n || spec.v >= n) {
            throw std::invalid_argument("edge " + std::to_string(k) +
                                        " references a vertex out of range");
        }
        inst.edges_.push_back(Edge{k, spec.u, spec.v, spec.cls});
        inst.incidence_[spec.u].push_back(k);
        if (spec.v != spec.u) inst.incidence_[spec.v].push_back(k);
    }
    return inst;
}

Instance new_instance(std::size_t n, Rational alpha, Rational beta,
                      std::span<const EdgeSpec> edges) {
    return Instance::create(n, alpha, beta, edges);
}

PartialOrientation PartialOrientation::from_owners(const Instance& inst,
                                                   std::vector<std::optional<VertexId>> owners) {
    if (owners.size() != inst.m()) {
        throw std::invalid_argument("orientation has " + std::to_string(owners.size()) +
                                    " entries, instance has " + std::to_string(inst.m()) +
                                    " edges");
    }
    PartialOrientation pi(inst.m());
    for (EdgeId e = 0; e < owners.size(); ++e) {
        if (owners[e]) pi.assign(inst, e, *owners[e]);
    }
    return pi;
}

bool PartialOrientation::is_complete() const {
    return std::all_of(owners_.begin(), owners_.end(),
                       [](const auto& o) { return o.has_value(); });
}

void PartialOrientation::assign(const Instance& inst, EdgeId e, VertexId owner) {
    if (!inst.edge(e).incident(owner)) {
        throw std::invalid_argument("vertex " + std::to_string(owner) +
                                    " is not an endpoint of edge " + std::to_string(e));
    }
    owners_.at(e) = owner;
}

std::vector<EdgeId> PartialOrientation::bundle(const Instance& inst, VertexId x) const {
    std::vector<EdgeId> out;
    for (EdgeId e : inst.incident(x)) {
        if (owners_[e] == x) out.push_back(e);
    }
    return out;
}

Rational utility(const Instance& inst, const PartialOrientation& pi, VertexId i) {
    if (i >= inst.n()) throw std::out_of_range("vertex out of range");
    Rational total(0);
    for (EdgeId e : inst.incident(i)) {
        if (pi.owned_by(e, i)) total += inst.weight(e);
    }
    return total;
}

Rational utility_of_bundle_to(const Instance& inst, const PartialOrientation& pi,
                              VertexId i, VertexId j) {
    if (i >= inst.n() || j >= inst.n()) throw std::out_of_range("vertex out of range");
    if (i == j) throw std::invalid_argument("utility_of_bundle_to requires i != j");
    Rational total(0);
    for (EdgeId e : inst.incident(i)) {
        if (pi.owned_by(e, j)) total += inst.weight(e);
    }
    return total;
}

std::vector<ParallelClass> parallel_classes(const Instance& inst) {
    std::map<std::pair<VertexId, VertexId>, ParallelClass> by_pair;
    for (const auto& edge : inst.edges()) {
        auto key = std::minmax(edge.u, edge.v);
        auto& cls = by_pair[key];
        cls.endpoints = key;
        cls.members.push_back(edge.id);
        if (edge.is_heavy()) {
            ++cls.heavy_count;
        } else {
            ++cls.light_count;
        }
    }
    std::vector<ParallelClass> out;
    out.reserve(by_pair.size());
    for (auto& [key, cls] : by_pair) out.push_back(std::move(cls));
    return out;
}

std::size_t multiplicity(const Instance& inst) {
    std::size_t best = 0;
    for (const auto& cls : parallel_classes(inst)) best = std::max(best, cls.members.size());
    return best;
}

std::vector<EdgeId> edges_between(const Instance& inst, VertexId a, VertexId b) {
    std::vector<EdgeId> out;
    if (a == b) return out;
    const auto& small = inst.incident(a).size() <= inst.incident(b).size() ? inst.incident(a)
                                                                           : inst.incident(b);
    for (EdgeId e : small) {
        if (inst.edge(e).joins(a, b)) out.push_back(e);
    }
    return out;
}

}  // namespace efxo
