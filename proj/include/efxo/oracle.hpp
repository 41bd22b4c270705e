#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "efxo/multigraph.hpp"

namespace efxo {

/// Fixes one edge to a required owner.
struct Constraint {
    EdgeId edge;
    VertexId owner;
};

class BudgetExceeded : public std::runtime_error {
public:
    BudgetExceeded(std::uint64_t needed, std::uint64_t budget);
    std::uint64_t needed;
    std::uint64_t budget;
};

struct OracleOptions {
    std::uint64_t budget = std::uint64_t{1} << 24;
    /// 0 picks std::thread::hardware_concurrency().
    unsigned threads = 0;
};

/// Same-weight parallel edges are interchangeable, so an orientation is
/// determined up to symmetry by how many members of each (endpoint pair,
/// weight) pool go to the lower endpoint. Constrained edges and self-loops
/// are fixed and excluded from the pools.
class SplitSpace {
public:
    struct Pool {
        VertexId low;
        VertexId high;
        EdgeClass cls;
        std::vector<EdgeId> free;  // ascending
    };

    /// Throws std::invalid_argument on contradictory or invalid constraints.
    SplitSpace(const Instance& inst, std::span<const Constraint> constraints);

    const Instance& instance() const { return *inst_; }
    const std::vector<Pool>& pools() const { return pools_; }
    /// Number of representatives; saturates at UINT64_MAX.
    std::uint64_t size() const { return size_; }

    /// Per-pool count toward the lower endpoint for a representative index.
    std::vector<std::size_t> split_at(std::uint64_t index) const;
    /// Canonical expansion: lowest free ids go to the lower endpoint.
    PartialOrientation expand(std::span<const std::size_t> split) const;
    PartialOrientation expand_index(std::uint64_t index) const;

    const PartialOrientation& fixed() const { return fixed_; }

private:
    const Instance* inst_;
    std::vector<Pool> pools_;
    PartialOrientation fixed_;
    std::uint64_t size_ = 1;
};

std::uint64_t representative_count(const Instance& inst, std::span<const Constraint> constraints);

/// Streams one complete orientation per representative; stop by returning false.
void enumerate_orientations(const Instance& inst, std::span<const Constraint> constraints,
                            const std::function<bool(const PartialOrientation&)>& visit);

/// Lowest-index EFX representative, or nullopt if none exists.
std::optional<PartialOrientation> exists_efx_orientation(const Instance& inst,
                                                         std::span<const Constraint> constraints,
                                                         const OracleOptions& options = {});

std::vector<PartialOrientation> all_efx_orientations(const Instance& inst,
                                                     std::span<const Constraint> constraints,
                                                     const OracleOptions& options = {});

std::uint64_t count_efx_orientations(const Instance& inst, std::span<const Constraint> constraints,
                                     const OracleOptions& options = {});

}  // namespace efxo
