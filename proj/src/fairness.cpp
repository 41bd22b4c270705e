#include "efxo/fairness.hpp"

#include <algorithm>
#include <stdexcept>

namespace efxo {

namespace {

void check_pair(const Instance& inst, VertexId i, VertexId j) {
    if (i >= inst.n() || j >= inst.n()) throw std::out_of_range("vertex out of range");
    if (i == j) throw std::invalid_argument("envy is defined for i != j only");
}

// Vertices adjacent to x through a non-loop edge, ascending and unique.
std::vector<VertexId> neighbours(const Instance& inst, VertexId x) {
    std::vector<VertexId> out;
    for (EdgeId e : inst.incident(x)) {
        const auto& edge = inst.edge(e);
        if (!edge.is_loop()) out.push_back(edge.other(x));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

StrongEnvy strong_envy_given(const Instance& inst, const PartialOrientation& pi, VertexId i,
                             VertexId j, const Rational& own, const Rational& seen) {
    StrongEnvy result;
    if (!(own < seen)) return result;
    for (EdgeId e : inst.incident(j)) {
        if (!pi.owned_by(e, j)) continue;
        Rational loss = inst.edge(e).joins(i, j) ? inst.weight(e) : Rational(0);
        if (own < seen - loss) {
            result.strongly_envies = true;
            result.witness = e;
            return result;
        }
    }
    return result;
}

}  // namespace

bool EnvyReport::is_ef() const {
    for (const auto& c : cells_) {
        if (c.envies) return false;
    }
    return true;
}

bool EnvyReport::is_efx() const {
    for (const auto& c : cells_) {
        if (c.strongly_envies) return false;
    }
    return true;
}

bool envies(const Instance& inst, const PartialOrientation& pi, VertexId i, VertexId j) {
    check_pair(inst, i, j);
    return utility(inst, pi, i) < utility_of_bundle_to(inst, pi, i, j);
}

StrongEnvy strongly_envies(const Instance& inst, const PartialOrientation& pi, VertexId i,
                           VertexId j) {
    check_pair(inst, i, j);
    return strong_envy_given(inst, pi, i, j, utility(inst, pi, i),
                             utility_of_bundle_to(inst, pi, i, j));
}

EnvyReport envy_report(const Instance& inst, const PartialOrientation& pi) {
    EnvyReport report(inst.n());
    std::vector<Rational> own(inst.n());
    for (VertexId x = 0; x < inst.n(); ++x) own[x] = utility(inst, pi, x);
    // Non-adjacent pairs value each other's bundles at zero and never envy.
    for (VertexId i = 0; i < inst.n(); ++i) {
        for (VertexId j : neighbours(inst, i)) {
            Rational seen = utility_of_bundle_to(inst, pi, i, j);
            auto& cell = report.at(i, j);
            cell.envies = own[i] < seen;
            if (!cell.envies) continue;
            auto strong = strong_envy_given(inst, pi, i, j, own[i], seen);
            cell.strongly_envies = strong.strongly_envies;
            cell.witness_edge = strong.witness;
        }
    }
    return report;
}

bool is_ef(const Instance& inst, const PartialOrientation& pi) {
    return envy_report(inst, pi).is_ef();
}

bool is_efx(const Instance& inst, const PartialOrientation& pi) {
    return envy_report(inst, pi).is_efx();
}

bool is_pef_pair(const Instance& inst, const PartialOrientation& pi, VertexId i, VertexId j) {
    check_pair(inst, i, j);
    Rational share_i(0);
    Rational share_j(0);
    for (EdgeId e : edges_between(inst, i, j)) {
        if (pi.owned_by(e, i)) share_i += inst.weight(e);
        if (pi.owned_by(e, j)) share_j += inst.weight(e);
    }
    // u_i and u_j agree on every edge of E_ij, so the two PEF conditions coincide.
    return share_i == share_j;
}

}  // namespace efxo
