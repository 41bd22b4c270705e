#pragma once

#include <optional>
#include <vector>

#include "efxo/multigraph.hpp"

namespace efxo {

struct StrongEnvy {
    bool strongly_envies = false;
    /// Lowest-id edge of j's bundle whose removal still leaves i envious.
    std::optional<EdgeId> witness;
};

struct PairEnvy {
    bool envies = false;
    bool strongly_envies = false;
    std::optional<EdgeId> witness_edge;
};

/// Dense n x n table over ordered pairs; the diagonal stays empty.
class EnvyReport {
public:
    EnvyReport() = default;
    explicit EnvyReport(std::size_t n) : n_(n), cells_(n * n) {}

    std::size_t n() const { return n_; }
    const PairEnvy& at(VertexId i, VertexId j) const { return cells_.at(i * n_ + j); }
    PairEnvy& at(VertexId i, VertexId j) { return cells_.at(i * n_ + j); }

    bool is_ef() const;
    bool is_efx() const;

private:
    std::size_t n_ = 0;
    std::vector<PairEnvy> cells_;
};

bool envies(const Instance& inst, const PartialOrientation& pi, VertexId i, VertexId j);
StrongEnvy strongly_envies(const Instance& inst, const PartialOrientation& pi, VertexId i,
                           VertexId j);

EnvyReport envy_report(const Instance& inst, const PartialOrientation& pi);
bool is_ef(const Instance& inst, const PartialOrientation& pi);
bool is_efx(const Instance& inst, const PartialOrientation& pi);

/// Privately envy-free between i and j: equal value on each side of E_ij.
bool is_pef_pair(const Instance& inst, const PartialOrientation& pi, VertexId i, VertexId j);

}  // namespace efxo
