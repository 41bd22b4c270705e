#pragma once

#include <cstdint>
#include <stdexcept>

#include "efxo/multigraph.hpp"

namespace efxo {

struct GenParams {
    std::size_t vertices = 6;
    /// Target edge count; 0 picks 2 * vertices.
    std::size_t edges = 0;
    /// Upper bound on every parallel class size.
    std::size_t multiplicity = 2;
    double heavy_density = 0.5;
    double loop_probability = 0.0;
    Rational alpha{3};
    Rational beta{1};
    /// Resample until the instance has no forbidden structure.
    bool avoid_forbidden = false;
    /// Instead of resampling, break forbidden components in place.
    bool repair_forbidden = false;
    std::size_t max_attempts = 10000;
};

class GenerationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Connected random instance, deterministic under `seed`. Edge count may fall
/// short of the target when the multiplicity bound saturates every pair.
Instance gen_random_instance(const GenParams& params, std::uint64_t seed);

}  // namespace efxo
