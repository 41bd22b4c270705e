#include "efxo/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <thread>

namespace efxo {

BudgetExceeded::BudgetExceeded(std::uint64_t needed_, std::uint64_t budget_)
    : std::runtime_error("oracle budget exceeded: " + std::to_string(needed_) +
                         " representatives, budget " + std::to_string(budget_)),
      needed(needed_),
      budget(budget_) {}

SplitSpace::SplitSpace(const Instance& inst, std::span<const Constraint> constraints)
    : inst_(&inst), fixed_(inst.m()) {
    for (const auto& c : constraints) {
        if (c.edge >= inst.m()) {
            throw std::invalid_argument("constraint on unknown edge " + std::to_string(c.edge));
        }
        if (fixed_.owner(c.edge) && *fixed_.owner(c.edge) != c.owner) {
            throw std::invalid_argument("contradictory constraints on edge " +
                                        std::to_string(c.edge));
        }
        fixed_.assign(inst, c.edge, c.owner);
    }
    std::map<std::tuple<VertexId, VertexId, int>, std::size_t> index;
    for (const auto& e : inst.edges()) {
        if (fixed_.is_oriented(e.id)) continue;
        if (e.is_loop()) {
            fixed_.assign(inst, e.id, e.u);
            continue;
        }
        auto [low, high] = std::minmax(e.u, e.v);
        auto key = std::make_tuple(low, high, e.is_heavy() ? 0 : 1);
        auto [it, fresh] = index.try_emplace(key, pools_.size());
        if (fresh) pools_.push_back(Pool{low, high, e.cls, {}});
        pools_[it->second].free.push_back(e.id);
    }
    std::sort(pools_.begin(), pools_.end(), [](const Pool& a, const Pool& b) {
        return std::tie(a.low, a.high, a.cls) < std::tie(b.low, b.high, b.cls);
    });
    constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
    for (const auto& p : pools_) {
        std::uint64_t radix = p.free.size() + 1;
        size_ = size_ > kMax / radix ? kMax : size_ * radix;
    }
}

std::vector<std::size_t> SplitSpace::split_at(std::uint64_t index) const {
    std::vector<std::size_t> split(pools_.size());
    for (std::size_t k = 0; k < pools_.size(); ++k) {
        std::uint64_t radix = pools_[k].free.size() + 1;
        split[k] = static_cast<std::size_t>(index % radix);
        index /= radix;
    }
    return split;
}

PartialOrientation SplitSpace::expand(std::span<const std::size_t> split) const {
    PartialOrientation pi = fixed_;
    for (std::size_t k = 0; k < pools_.size(); ++k) {
        const auto& p = pools_[k];
        for (std::size_t t = 0; t < p.free.size(); ++t) {
            pi.assign(*inst_, p.free[t], t < split[k] ? p.low : p.high);
        }
    }
    return pi;
}

PartialOrientation SplitSpace::expand_index(std::uint64_t index) const {
    auto split = split_at(index);
    return expand(split);
}

namespace {

/// Integer EFX test over pool counts. Weights are scaled to integers by the
/// common denominator of alpha and beta.
class SplitEvaluator {
public:
    explicit SplitEvaluator(const SplitSpace& space) : space_(space) {
        const auto& inst = space.instance();
        std::int64_t den = std::lcm(inst.alpha().denominator(), inst.beta().denominator());
        heavy_w_ = inst.alpha().numerator() * (den / inst.alpha().denominator());
        light_w_ = inst.beta().numerator() * (den / inst.beta().denominator());

        std::map<std::pair<VertexId, VertexId>, std::size_t> pair_index;
        auto pair_of = [&](VertexId a, VertexId b) {
            auto key = std::minmax(a, b);
            auto [it, fresh] = pair_index.try_emplace(key, pairs_.size());
            if (fresh) pairs_.push_back(key);
            return it->second;
        };
        for (const auto& e : inst.edges()) {
            if (!e.is_loop()) pair_of(e.u, e.v);
        }
        base_.resize(inst.n(), pairs_.size());
        for (const auto& e : inst.edges()) {
            if (!space.fixed().is_oriented(e.id)) continue;
            VertexId owner = *space.fixed().owner(e.id);
            std::int64_t w = e.is_heavy() ? heavy_w_ : light_w_;
            base_.util[owner] += w;
            base_.count[owner] += 1;
            if (e.is_loop()) continue;
            std::size_t p = pair_of(e.u, e.v);
            int side = owner == pairs_[p].first ? 0 : 1;
            add_held(base_, p, side, e.is_heavy(), 1);
        }
        for (const auto& pool : space.pools()) pool_pair_.push_back(pair_of(pool.low, pool.high));
    }

    struct Tables {
        void resize(std::size_t n, std::size_t pairs) {
            util.assign(n, 0);
            count.assign(n, 0);
            value.assign(2 * pairs, 0);
            heavy.assign(2 * pairs, 0);
            light.assign(2 * pairs, 0);
        }
        std::vector<std::int64_t> util;
        std::vector<std::int64_t> count;
        std::vector<std::int64_t> value;
        std::vector<std::int64_t> heavy;
        std::vector<std::int64_t> light;
    };

    bool check(std::span<const std::size_t> split, Tables& t) const {
        t = base_;
        const auto& pools = space_.pools();
        for (std::size_t k = 0; k < pools.size(); ++k) {
            const auto& pool = pools[k];
            std::int64_t to_low = static_cast<std::int64_t>(split[k]);
            std::int64_t to_high = static_cast<std::int64_t>(pool.free.size()) - to_low;
            bool heavy = pool.cls == EdgeClass::Heavy;
            std::int64_t w = heavy ? heavy_w_ : light_w_;
            t.util[pool.low] += to_low * w;
            t.util[pool.high] += to_high * w;
            t.count[pool.low] += to_low;
            t.count[pool.high] += to_high;
            add_held(t, pool_pair_[k], 0, heavy, to_low);
            add_held(t, pool_pair_[k], 1, heavy, to_high);
        }
        for (std::size_t p = 0; p < pairs_.size(); ++p) {
            auto [a, b] = pairs_[p];
            if (strongly_envies(t, p, a, b, 1) || strongly_envies(t, p, b, a, 0)) return false;
        }
        return true;
    }

private:
    void add_held(Tables& t, std::size_t p, int side, bool heavy, std::int64_t k) const {
        std::size_t slot = 2 * p + static_cast<std::size_t>(side);
        t.value[slot] += k * (heavy ? heavy_w_ : light_w_);
        (heavy ? t.heavy : t.light)[slot] += k;
    }

    // Does i strongly envy j, where j is `side` of pair p?
    bool strongly_envies(const Tables& t, std::size_t p, VertexId i, VertexId j, int side) const {
        std::size_t slot = 2 * p + static_cast<std::size_t>(side);
        std::int64_t held = t.heavy[slot] + t.light[slot];
        if (held == 0) return false;
        std::int64_t seen = t.value[slot];
        if (t.util[i] >= seen) return false;
        std::int64_t loss = 0;
        if (t.count[j] == held) loss = t.light[slot] > 0 ? light_w_ : heavy_w_;
        return t.util[i] < seen - loss;
    }

    const SplitSpace& space_;
    std::int64_t heavy_w_ = 0;
    std::int64_t light_w_ = 0;
    std::vector<std::pair<VertexId, VertexId>> pairs_;
    std::vector<std::size_t> pool_pair_;
    Tables base_;
};

void advance(std::vector<std::size_t>& split, const std::vector<SplitSpace::Pool>& pools) {
    for (std::size_t k = 0; k < split.size(); ++k) {
        if (++split[k] <= pools[k].free.size()) return;
        split[k] = 0;
    }
}

unsigned thread_count(const OracleOptions& options, std::uint64_t size) {
    unsigned t = options.threads ? options.threads : std::thread::hardware_concurrency();
    t = std::clamp(t, 1u, 16u);
    if (size < 4096) t = 1;
    return t;
}

/// Runs `body(begin, end, thread_id)` over a partition of [0, size).
template <typename Body>
void parallel_ranges(std::uint64_t size, unsigned threads, Body body) {
    if (threads == 1) {
        body(0, size, 0u);
        return;
    }
    std::vector<std::thread> pool;
    std::uint64_t chunk = (size + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        std::uint64_t begin = std::min<std::uint64_t>(size, t * chunk);
        std::uint64_t end = std::min<std::uint64_t>(size, begin + chunk);
        pool.emplace_back([=] { body(begin, end, t); });
    }
    for (auto& th : pool) th.join();
}

SplitSpace checked_space(const Instance& inst, std::span<const Constraint> constraints,
                         const OracleOptions& options) {
    SplitSpace space(inst, constraints);
    if (space.size() > options.budget) throw BudgetExceeded(space.size(), options.budget);
    return space;
}

}  // namespace

std::uint64_t representative_count(const Instance& inst, std::span<const Constraint> constraints) {
    return SplitSpace(inst, constraints).size();
}

void enumerate_orientations(const Instance& inst, std::span<const Constraint> constraints,
                            const std::function<bool(const PartialOrientation&)>& visit) {
    SplitSpace space(inst, constraints);
    std::vector<std::size_t> split(space.pools().size(), 0);
    for (std::uint64_t idx = 0; idx < space.size(); ++idx) {
        if (!visit(space.expand(split))) return;
        advance(split, space.pools());
    }
}

std::optional<PartialOrientation> exists_efx_orientation(const Instance& inst,
                                                         std::span<const Constraint> constraints,
                                                         const OracleOptions& options) {
    auto space = checked_space(inst, constraints, options);
    SplitEvaluator eval(space);
    std::atomic<std::uint64_t> found{std::numeric_limits<std::uint64_t>::max()};
    parallel_ranges(space.size(), thread_count(options, space.size()),
                    [&](std::uint64_t begin, std::uint64_t end, unsigned) {
                        SplitEvaluator::Tables tables;
                        auto split = space.split_at(begin);
                        for (std::uint64_t idx = begin; idx < end; ++idx) {
                            if (idx >= found.load(std::memory_order_relaxed)) return;
                            if (eval.check(split, tables)) {
                                std::uint64_t cur = found.load();
                                while (idx < cur && !found.compare_exchange_weak(cur, idx)) {
                                }
                                return;
                            }
                            advance(split, space.pools());
                        }
                    });
    if (found.load() == std::numeric_limits<std::uint64_t>::max()) return std::nullopt;
    return space.expand_index(found.load());
}

std::vector<PartialOrientation> all_efx_orientations(const Instance& inst,
                                                     std::span<const Constraint> constraints,
                                                     const OracleOptions& options) {
    auto space = checked_space(inst, constraints, options);
    SplitEvaluator eval(space);
    unsigned threads = thread_count(options, space.size());
    std::vector<std::vector<std::uint64_t>> hits(threads);
    parallel_ranges(space.size(), threads,
                    [&](std::uint64_t begin, std::uint64_t end, unsigned t) {
                        SplitEvaluator::Tables tables;
                        auto split = space.split_at(begin);
                        for (std::uint64_t idx = begin; idx < end; ++idx) {
                            if (eval.check(split, tables)) hits[t].push_back(idx);
                            advance(split, space.pools());
                        }
                    });
    std::vector<PartialOrientation> out;
    for (const auto& h : hits) {
        for (std::uint64_t idx : h) out.push_back(space.expand_index(idx));
    }
    return out;
}

std::uint64_t count_efx_orientations(const Instance& inst, std::span<const Constraint> constraints,
                                     const OracleOptions& options) {
    auto space = checked_space(inst, constraints, options);
    SplitEvaluator eval(space);
    unsigned threads = thread_count(options, space.size());
    std::vector<std::uint64_t> counts(threads, 0);
    parallel_ranges(space.size(), threads,
                    [&](std::uint64_t begin, std::uint64_t end, unsigned t) {
                        SplitEvaluator::Tables tables;
                        auto split = space.split_at(begin);
                        for (std::uint64_t idx = begin; idx < end; ++idx) {
                            if (eval.check(split, tables)) ++counts[t];
                            advance(split, space.pools());
                        }
                    });
    return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

}  // namespace efxo
