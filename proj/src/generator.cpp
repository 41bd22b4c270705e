#include "efxo/generator.hpp"

#include <map>
#include <random>

#include "efxo/structure.hpp"

namespace efxo {

namespace {

// Bounded draws written out so output does not depend on the standard
// library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::size_t below(std::size_t bound) {
        const std::uint64_t b = bound;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % b;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return static_cast<std::size_t>(x % b);
    }

    bool chance(double p) {
        double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        return u < p;
    }

private:
    std::mt19937_64 engine_;
};

using PairKey = std::pair<VertexId, VertexId>;

PairKey key(VertexId a, VertexId b) { return a < b ? PairKey{a, b} : PairKey{b, a}; }

std::vector<EdgeSpec> sample_edges(const GenParams& p, Rng& rng) {
    const std::size_t n = p.vertices;
    const std::size_t target = p.edges == 0 ? 2 * n : p.edges;
    std::vector<EdgeSpec> specs;
    std::map<PairKey, std::size_t> count;
    auto cls = [&] { return rng.chance(p.heavy_density) ? EdgeClass::Heavy : EdgeClass::Light; };
    auto add = [&](VertexId a, VertexId b) {
        specs.push_back({a, b, cls()});
        ++count[key(a, b)];
    };
    for (VertexId v = 1; v < n; ++v) add(rng.below(v), v);
    const bool loops_possible = p.loop_probability > 0.0;
    if (n < 2 && !loops_possible) return specs;
    std::size_t attempts = 0;
    while (specs.size() < target && attempts++ < 64 * target) {
        VertexId a = rng.below(n);
        VertexId b = a;
        if (n >= 2 && !rng.chance(p.loop_probability)) {
            b = rng.below(n - 1);
            if (b >= a) ++b;
        }
        if (count[key(a, b)] < p.multiplicity) add(a, b);
    }
    return specs;
}

bool try_add(std::vector<EdgeSpec>& specs, std::map<PairKey, std::size_t>& count, std::size_t q,
             VertexId a, VertexId b) {
    if (count[key(a, b)] >= q) return false;
    specs.push_back({a, b, EdgeClass::Heavy});
    ++count[key(a, b)];
    return true;
}

bool promote_light(std::vector<EdgeSpec>& specs, VertexId a, VertexId b) {
    for (auto& s : specs) {
        if (key(s.u, s.v) == key(a, b) && s.cls == EdgeClass::Light) {
            s.cls = EdgeClass::Heavy;
            return true;
        }
    }
    return false;
}

// Makes one condensed tree edge even, or adds a heavy loop, in every forbidden
// component. Either change leaves the component outside the forbidden class.
std::vector<EdgeSpec> repair(const GenParams& p, std::vector<EdgeSpec> specs) {
    auto inst = Instance::create(p.vertices, p.alpha, p.beta, specs);
    std::map<PairKey, std::size_t> count;
    for (const auto& s : specs) ++count[key(s.u, s.v)];
    for (const auto& info : classify_all(inst)) {
        if (!info.is_forbidden()) continue;
        bool fixed = false;
        for (EdgeId t : info.heavy_spanning_tree) {
            const auto& e = inst.edge(t);
            if (try_add(specs, count, p.multiplicity, e.u, e.v) || promote_light(specs, e.u, e.v)) {
                fixed = true;
                break;
            }
        }
        for (std::size_t k = 0; !fixed && k < info.vertices.size(); ++k) {
            VertexId x = info.vertices[k];
            fixed = promote_light(specs, x, x) || try_add(specs, count, p.multiplicity, x, x);
        }
        if (!fixed) throw GenerationError("cannot repair forbidden component within the multiplicity bound");
    }
    return specs;
}

}  // namespace

Instance gen_random_instance(const GenParams& p, std::uint64_t seed) {
    if (p.vertices == 0) throw std::invalid_argument("vertices must be positive");
    if (p.multiplicity == 0) throw std::invalid_argument("multiplicity must be positive");
    if (!(p.heavy_density >= 0.0 && p.heavy_density <= 1.0)) {
        throw std::invalid_argument("heavy density must lie in [0, 1]");
    }
    if (!(p.loop_probability >= 0.0 && p.loop_probability <= 1.0)) {
        throw std::invalid_argument("loop probability must lie in [0, 1]");
    }
    if (!(p.alpha > p.beta) || p.beta < Rational(0)) {
        throw std::invalid_argument("weights must satisfy alpha > beta >= 0");
    }
    Rng rng(seed);
    if (p.repair_forbidden) {
        return Instance::create(p.vertices, p.alpha, p.beta, repair(p, sample_edges(p, rng)));
    }
    const std::size_t attempts = p.avoid_forbidden ? p.max_attempts : 1;
    for (std::size_t k = 0; k < attempts; ++k) {
        auto inst = Instance::create(p.vertices, p.alpha, p.beta, sample_edges(p, rng));
        if (!p.avoid_forbidden || !has_forbidden_structure(inst)) return inst;
    }
    throw GenerationError("rejection budget exhausted after " + std::to_string(attempts) +
                          " samples");
}

}  // namespace efxo
