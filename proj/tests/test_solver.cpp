#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <random>

#include "efxo/fairness.hpp"
#include "efxo/generator.hpp"
#include "efxo/oracle.hpp"
#include "efxo/solver.hpp"
#include "efxo/structure.hpp"
#include "support.hpp"

using namespace efxo;
using namespace efxo::testing;

namespace {

const auto H = EdgeClass::Heavy;
const auto L = EdgeClass::Light;

Instance make(std::size_t n, std::vector<EdgeSpec> e, Rational alpha = Rational(3),
              Rational beta = Rational(1)) {
    return new_instance(n, alpha, beta, e);
}

std::size_t count_owned(const Instance& inst, const PartialOrientation& pi, VertexId x, EdgeClass cls) {
    std::size_t c = 0;
    for (const auto& e : inst.edges()) c += e.cls == cls && pi.owned_by(e.id, x);
    return c;
}

const Oriented& oriented(const SolveOutcome& o) {
    REQUIRE(std::holds_alternative<Oriented>(o));
    return std::get<Oriented>(o);
}

}  // namespace

TEST_CASE("orient_type1 on two vertices with 2 heavy and 3 light") {
    auto inst = make(2, {{0, 1, H}, {0, 1, H}, {0, 1, L}, {0, 1, L}, {0, 1, L}});
    auto info = classify_heavy_component(inst, {0, 1});
    auto out = orient_type1(inst, info);
    CHECK(out.v == 0);
    CHECK(out.w == 1);
    CHECK(count_owned(inst, out.orientation, 0, H) == 1);
    CHECK(count_owned(inst, out.orientation, 1, H) == 1);
    CHECK(count_owned(inst, out.orientation, 0, L) == 1);
    CHECK(count_owned(inst, out.orientation, 1, L) == 1);
    std::size_t unoriented = 0;
    for (EdgeId e = 0; e < inst.m(); ++e) unoriented += !out.orientation.is_oriented(e);
    CHECK(unoriented == 1);
    CHECK(is_pef_pair(inst, out.orientation, 0, 1));
    CHECK(is_ef(inst, out.orientation));
}

TEST_CASE("orient_type1 without lights leaves no residue") {
    auto inst = make(2, {{0, 1, H}, {0, 1, H}});
    auto out = orient_type1(inst, classify_heavy_component(inst, {0, 1}));
    CHECK(out.orientation.is_complete());
}

TEST_CASE("orient_type1 orients tree edges away from the special pair") {
    auto inst = make(3, {{0, 1, H}, {0, 1, H}, {1, 2, H}});
    auto info = classify_heavy_component(inst, {0, 1, 2});
    auto out = orient_type1(inst, info);
    CHECK(out.orientation.owned_by(2, 2));
    for (VertexId x : {0, 1, 2}) {
        CHECK(utility(inst, out.orientation, x) >= inst.alpha());
    }
    CHECK(is_ef(inst, out.orientation));
    CHECK_THROWS_AS(orient_type2(inst, info), PipelineError);
}

TEST_CASE("orient_type2 gives every vertex exactly one heavy edge") {
    auto triangle = make(3, {{0, 1, H}, {1, 2, H}, {2, 0, H}});
    auto info = classify_heavy_component(triangle, {0, 1, 2});
    auto pi = orient_type2(triangle, info);
    for (VertexId x : {0, 1, 2}) CHECK(count_owned(triangle, pi, x, H) == 1);
    CHECK(is_ef(triangle, pi));
    CHECK_THROWS_AS(orient_type1(triangle, info), PipelineError);

    auto loop = make(1, {{0, 0, H}});
    auto pl = orient_type2(loop, classify_heavy_component(loop, {0}));
    CHECK(pl.owned_by(0, 0));
    CHECK(utility(loop, pl, 0) == Rational(3));

    auto odd = make(2, {{0, 1, H}, {0, 1, H}, {0, 1, H}});
    CHECK_THROWS_AS(orient_type2(odd, classify_heavy_component(odd, {0, 1})), PipelineError);
}

TEST_CASE("two-agent split examples") {
    std::vector<Rational> two{Rational(3), Rational(3)};
    auto s = two_agent_efx_split(two);
    CHECK(s.a.size() == 1);
    CHECK(s.b.size() == 1);

    std::vector<Rational> mixed{Rational(3), Rational(1), Rational(1)};
    s = two_agent_efx_split(mixed);
    CHECK(s.a == std::vector<std::size_t>{1, 2});
    CHECK(s.b == std::vector<std::size_t>{0});

    s = two_agent_efx_split(std::span<const Rational>{});
    CHECK(s.a.empty());
    CHECK(s.b.empty());
}

TEST_CASE("two-agent split is EFX for all {alpha, beta} lists up to 12") {
    for (auto [alpha, beta] : {std::pair{Rational(5), Rational(2)}, std::pair{Rational(3), Rational(0)},
                               std::pair{Rational(7, 2), Rational(3)}}) {
        for (std::size_t k = 0; k <= 12; ++k) {
            for (std::size_t h = 0; h <= k; ++h) {
                std::vector<Rational> values(h, alpha);
                values.resize(k, beta);
                auto s = two_agent_efx_split(values);
                std::vector<int> side(k, -1);
                Rational va(0), vb(0);
                for (auto i : s.a) { side[i] = 0; va += values[i]; }
                for (auto i : s.b) { side[i] = 1; vb += values[i]; }
                for (int x : side) CHECK(x >= 0);
                CHECK(vb >= va);
                CHECK(two_agent_efx(values, side));
            }
        }
    }
}

TEST_CASE("extend_pair examples") {
    // Both own a heavy edge elsewhere; three lights between them.
    auto inst = make(4, {{0, 2, H}, {1, 3, H}, {0, 1, L}, {0, 1, L}, {0, 1, L}, {2, 2, L}});
    PipelineState state{PartialOrientation(inst.m()), std::vector<char>(4, 1), {}, {}};
    state.orientation.assign(inst, 0, 0);
    state.orientation.assign(inst, 1, 1);
    extend_pair(inst, state, 0, 1);
    CHECK(count_owned(inst, state.orientation, 1, L) == 2);
    CHECK(count_owned(inst, state.orientation, 0, L) == 1);
    CHECK(utility(inst, state.orientation, 0) >= utility_of_bundle_to(inst, state.orientation, 0, 1));
    CHECK(utility(inst, state.orientation, 1) >= utility_of_bundle_to(inst, state.orientation, 1, 0));

    // One light already toward i, condition (2), one more light: it goes to j.
    auto path = make(3, {{0, 2, L}, {0, 1, L}, {0, 1, L}, {1, 2, L}});
    PipelineState s3{PartialOrientation(path.m()), std::vector<char>(3, 1), {}, {}};
    s3.orientation.assign(path, 0, 0);
    s3.orientation.assign(path, 3, 1);
    s3.orientation.assign(path, 1, 0);
    extend_pair(path, s3, 1, 0);
    CHECK(s3.orientation.owned_by(2, 1));
    CHECK(utility(path, s3.orientation, 0) >= utility_of_bundle_to(path, s3.orientation, 0, 1));
    CHECK(utility(path, s3.orientation, 1) >= utility_of_bundle_to(path, s3.orientation, 1, 0));

    // Two edges already oriented: a pipeline bug.
    auto both = make(2, {{0, 1, L}, {0, 1, L}, {0, 1, L}});
    PipelineState s4{PartialOrientation(both.m()), std::vector<char>(2, 1), {}, {}};
    s4.orientation.assign(both, 0, 0);
    s4.orientation.assign(both, 1, 1);
    CHECK_THROWS_AS(extend_pair(both, s4, 0, 1), PipelineError);

    // Neither side has any utility and a heavy edge is between them.
    auto bare = make(2, {{0, 1, H}, {0, 1, L}});
    PipelineState s5{PartialOrientation(bare.m()), std::vector<char>(2, 1), {}, {}};
    CHECK_THROWS_AS(extend_pair(bare, s5, 0, 1), PipelineError);
}

TEST_CASE("all-light orientation") {
    auto four = make(2, {{0, 1, L}, {0, 1, L}, {0, 1, L}, {0, 1, L}});
    auto pi = all_light_orientation(four);
    CHECK(count_owned(four, pi, 0, L) == 2);
    CHECK(is_ef(four, pi));

    auto three = make(2, {{0, 1, L}, {0, 1, L}, {0, 1, L}});
    pi = all_light_orientation(three);
    CHECK(count_owned(three, pi, 0, L) == 2);
    CHECK_FALSE(is_ef(three, pi));
    CHECK(is_efx(three, pi));

    CHECK_THROWS(all_light_orientation(make(2, {{0, 1, H}})));

    // Stars with k leaves: a per-class split alone hands every edge to the
    // centre, which the leaves strongly envy once k >= 2.
    for (std::size_t k = 1; k <= 6; ++k) {
        std::vector<EdgeSpec> star;
        for (VertexId leaf = 1; leaf <= k; ++leaf) star.push_back({0, leaf, L});
        auto inst = make(k + 1, star);
        auto p = all_light_orientation(inst);
        CHECK(p.is_complete());
        CHECK(naive_is_efx(inst, owners_of(p)));
        CHECK(exists_efx_orientation(inst, {}).has_value());
    }
}

TEST_CASE("all-light orientation is EFX on random light instances") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 500; ++trial) {
        GenParams p;
        p.vertices = 1 + rng() % 9;
        p.edges = rng() % 30;
        p.multiplicity = 1 + rng() % 5;
        p.heavy_density = 0.0;
        p.loop_probability = 0.2;
        p.beta = rng() % 3 == 0 ? Rational(0) : Rational(1);
        auto inst = gen_random_instance(p, rng());
        auto pi = all_light_orientation(inst);
        CHECK(pi.is_complete());
        CHECK(naive_is_efx(inst, owners_of(pi)));
    }
}

TEST_CASE("orient_all_but_matching examples") {
    auto pendant = make(4, {{0, 1, H}, {1, 2, H}, {2, 0, H}, {2, 3, L}});
    auto state = orient_all_but_matching(pendant);
    CHECK(state.matching.empty());
    CHECK(state.orientation.owned_by(3, 3));

    auto type1 = make(2, {{0, 1, H}, {0, 1, H}, {0, 1, L}, {0, 1, L}, {0, 1, L}});
    state = orient_all_but_matching(type1);
    REQUIRE(state.matching.size() == 1);
    CHECK_FALSE(type1.edge(state.matching[0]).is_heavy());
    REQUIRE(state.special_pairs.size() == 1);
    CHECK(state.special_pairs[0].v == 0);
    CHECK(state.special_pairs[0].w == 1);

    auto joined = make(6, {{0, 1, H}, {1, 2, H}, {2, 0, H}, {3, 4, H}, {4, 5, H}, {5, 3, H},
                           {0, 3, L}, {0, 3, L}});
    state = orient_all_but_matching(joined);
    CHECK(state.matching.empty());
    CHECK(is_ef(joined, state.orientation));

    CHECK_THROWS_AS(orient_all_but_matching(make(2, {{0, 1, H}})), PipelineError);
    CHECK_THROWS_AS(orient_all_but_matching(make(2, {{0, 1, L}})), PipelineError);
    CHECK_THROWS_AS(orient_all_but_matching(make(3, {{0, 1, H}, {0, 1, H}})), PipelineError);
}

TEST_CASE("finish_matching examples") {
    // Residual pair where v owns one outside light edge.
    auto inst = make(3, {{0, 1, H}, {0, 1, H}, {0, 1, L}, {0, 1, L}, {0, 1, L}, {0, 2, L}});
    auto state = orient_all_but_matching(inst);
    REQUIRE(state.matching.size() == 1);
    auto pi = finish_matching(inst, state);
    CHECK(pi.is_complete());
    CHECK(is_efx(inst, pi));
    EdgeId residue = state.matching[0];
    VertexId outside = state.orientation.owned_by(5, 0) ? 0 : 2;
    if (outside == 0) CHECK(pi.owned_by(residue, 1));

    // No outside edges: the residue goes to the higher index.
    auto bare = make(2, {{0, 1, H}, {0, 1, H}, {0, 1, L}});
    state = orient_all_but_matching(bare);
    pi = finish_matching(bare, state);
    CHECK(pi.owned_by(2, 1));
    CHECK(is_efx(bare, pi));

    // Empty matching: unchanged.
    auto tri = make(3, {{0, 1, H}, {1, 2, H}, {2, 0, H}});
    state = orient_all_but_matching(tri);
    CHECK(finish_matching(tri, state) == state.orientation);

    // Hypothesis violations.
    PipelineState broken{PartialOrientation(bare.m()), std::vector<char>(2, 1), {}, {}};
    CHECK_THROWS_AS(finish_matching(bare, broken), PipelineError);
}

TEST_CASE("solve examples") {
    auto loop_pair = make(2, {{0, 1, H}, {0, 0, L}, {1, 1, L}});
    auto out = solve(loop_pair);
    REQUIRE(std::holds_alternative<Refused>(out));
    CHECK(std::get<Refused>(out).reason.component == std::vector<VertexId>{0, 1});

    auto pair = make(2, {{0, 1, H}, {0, 1, H}});
    auto p_out = solve(pair);
    const auto& p = oriented(p_out);
    CHECK(count_owned(pair, p.orientation, 0, H) == 1);
    CHECK(is_ef(pair, p.orientation));

    auto tri = make(3, {{0, 1, H}, {1, 2, H}, {2, 0, H}});
    auto t_out = solve(tri);
    const auto& t = oriented(t_out);
    for (VertexId x : {0, 1, 2}) CHECK(count_owned(tri, t.orientation, x, H) == 1);

    auto loops = make(1, {{0, 0, L}, {0, 0, H}});
    CHECK(oriented(solve(loops)).orientation.is_complete());

    auto empty = make(3, {});
    CHECK(oriented(solve(empty)).orientation.size() == 0);

    // Disconnected: a Type2 triangle next to a light path.
    auto split = make(6, {{0, 1, H}, {1, 2, H}, {2, 0, H}, {3, 4, L}, {4, 5, L}, {5, 5, L}});
    auto s_out = solve(split);
    const auto& s = oriented(s_out);
    CHECK(s.orientation.is_complete());
    CHECK(is_efx(split, s.orientation));
}

TEST_CASE("solve is EFX on random tractable instances and agrees with the oracle") {
    std::mt19937_64 rng(41);
    std::size_t checked = 0;
    for (int trial = 0; trial < 600; ++trial) {
        GenParams p;
        p.vertices = 1 + rng() % 7;
        p.edges = rng() % 18;
        p.multiplicity = 1 + rng() % 4;
        p.heavy_density = 0.1 * static_cast<double>(rng() % 10);
        p.loop_probability = rng() % 2 ? 0.2 : 0.0;
        p.alpha = Rational(2 + rng() % 5, 1 + rng() % 2);
        p.beta = Rational(rng() % 2);
        if (!(p.alpha > p.beta)) continue;
        auto inst = gen_random_instance(p, rng());
        auto out = solve(inst);
        CHECK(std::holds_alternative<Refused>(out) == has_forbidden_structure(inst));
        if (const auto* ok = std::get_if<Oriented>(&out)) {
            CHECK(ok->orientation.is_complete());
            CHECK(naive_is_efx(inst, owners_of(ok->orientation)));
            if (representative_count(inst, {}) <= (1u << 16)) {
                CHECK(exists_efx_orientation(inst, {}).has_value());
                ++checked;
            }
        }
    }
    CHECK(checked > 100);
}

TEST_CASE("pipeline invariants hold on connected tractable instances") {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 400; ++trial) {
        GenParams p;
        p.vertices = 2 + rng() % 7;
        p.edges = p.vertices + rng() % 14;
        p.multiplicity = 1 + rng() % 4;
        p.heavy_density = 0.3 + 0.1 * static_cast<double>(rng() % 6);
        p.loop_probability = 0.1;
        p.repair_forbidden = true;
        auto inst = gen_random_instance(p, rng());
        auto infos = classify_all(inst);
        bool nontrivial = std::any_of(infos.begin(), infos.end(), [](const auto& i) { return !i.is_trivial(); });
        if (!nontrivial) continue;

        for (const auto& info : infos) {
            if (info.is_trivial()) continue;
            PartialOrientation part = std::holds_alternative<Type1>(info.classification)
                                          ? orient_type1(inst, info).orientation
                                          : orient_type2(inst, info);
            CHECK(is_ef(inst, part));
            for (VertexId x : info.vertices) CHECK(utility(inst, part, x) >= inst.alpha());
            // At most one oriented edge between non-special pairs.
            std::map<std::pair<VertexId, VertexId>, int> per_pair;
            for (const auto& e : inst.edges()) {
                if (part.is_oriented(e.id) && !e.is_loop()) ++per_pair[std::minmax(e.u, e.v)];
            }
            std::optional<std::pair<VertexId, VertexId>> sp;
            if (const auto* t1 = std::get_if<Type1>(&info.classification)) sp = std::minmax(t1->v, t1->w);
            for (const auto& [pair, count] : per_pair) {
                if (pair != sp) CHECK(count == 1);
            }
        }

        auto state = orient_all_but_matching(inst);
        CHECK(is_ef(inst, state.orientation));
        std::vector<int> touched(inst.n(), 0);
        for (EdgeId e : state.matching) {
            const auto& edge = inst.edge(e);
            CHECK_FALSE(edge.is_heavy());
            CHECK(++touched[edge.u] == 1);
            CHECK(++touched[edge.v] == 1);
            bool special = std::any_of(state.special_pairs.begin(), state.special_pairs.end(),
                                       [&](const SpecialPair& s) { return edge.joins(s.v, s.w); });
            CHECK(special);
            CHECK(is_pef_pair(inst, state.orientation, edge.u, edge.v));
        }
        for (VertexId x = 0; x < inst.n(); ++x) CHECK(utility(inst, state.orientation, x) >= inst.beta());
        auto pi = finish_matching(inst, state);
        CHECK(naive_is_efx(inst, owners_of(pi)));
    }
}

TEST_CASE("step counts grow polynomially") {
    std::vector<std::uint64_t> steps;
    for (std::size_t n : {40, 80, 160, 320}) {
        GenParams p;
        p.vertices = n;
        p.edges = 4 * n;
        p.multiplicity = 3;
        p.heavy_density = 0.5;
        p.repair_forbidden = true;
        auto inst = gen_random_instance(p, n);
        SolveStats stats;
        auto out = solve(inst, &stats);
        REQUIRE(std::holds_alternative<Oriented>(out));
        steps.push_back(stats.steps);
    }
    // Doubling the size must not more than roughly quadruple the work.
    for (std::size_t k = 1; k < steps.size(); ++k) CHECK(steps[k] < 6 * steps[k - 1]);
}
