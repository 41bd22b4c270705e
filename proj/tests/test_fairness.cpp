#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "efxo/fairness.hpp"
#include "efxo/reduction.hpp"
#include "support.hpp"

using namespace efxo;
using namespace efxo::testing;

namespace {

const auto H = EdgeClass::Heavy;
const auto L = EdgeClass::Light;

Instance loop_pair_q1() {
    std::vector<EdgeSpec> e{{0, 1, H}, {0, 0, L}, {1, 1, L}};
    return new_instance(2, Rational(2), Rational(1), e);
}

Instance random_instance(std::mt19937_64& rng) {
    std::size_t n = 1 + rng() % 5;
    std::vector<EdgeSpec> specs;
    std::size_t m = rng() % 10;
    for (std::size_t k = 0; k < m; ++k) specs.push_back({rng() % n, rng() % n, rng() % 2 ? H : L});
    Rational beta = rng() % 4 == 0 ? Rational(0) : Rational(1);
    return new_instance(n, Rational(3), beta, specs);
}

Owners random_owners(const Instance& inst, std::mt19937_64& rng) {
    Owners o;
    for (const auto& e : inst.edges()) o.push_back(rng() % 2 ? e.u : e.v);
    return o;
}

PartialOrientation to_pi(const Instance& inst, const Owners& o) {
    return PartialOrientation::from_owners(inst, std::vector<std::optional<VertexId>>(o.begin(), o.end()));
}

}  // namespace

TEST_CASE("Loop-pair envy at q=1") {
    auto inst = loop_pair_q1();
    auto pi = to_pi(inst, {0, 0, 1});
    CHECK(envies(inst, pi, 1, 0));
    CHECK_FALSE(envies(inst, pi, 0, 1));
    auto s = strongly_envies(inst, pi, 1, 0);
    CHECK(s.strongly_envies);
    REQUIRE(s.witness.has_value());
    CHECK(*s.witness == 1);
    CHECK_FALSE(is_efx(inst, pi));
    auto report = envy_report(inst, pi);
    CHECK(report.at(1, 0).strongly_envies);
    CHECK(report.at(1, 0).witness_edge == std::optional<EdgeId>(1));
    CHECK_THROWS(envies(inst, pi, 0, 0));
    CHECK_THROWS(strongly_envies(inst, pi, 1, 1));
}

TEST_CASE("empty orientation has no envy") {
    auto inst = loop_pair_q1();
    PartialOrientation pi(inst.m());
    CHECK(is_ef(inst, pi));
    CHECK(is_efx(inst, pi));
}

TEST_CASE("single-edge bundle cannot be strongly envied") {
    std::vector<EdgeSpec> e{{0, 1, H}};
    auto inst = new_instance(2, Rational(3), Rational(1), e);
    auto pi = to_pi(inst, {1});
    CHECK(envies(inst, pi, 0, 1));
    CHECK_FALSE(strongly_envies(inst, pi, 0, 1).strongly_envies);
}

TEST_CASE("NOT gadget clockwise orientation is EFX") {
    auto g = standalone_gadget(GadgetKind::Not, 2, Rational(3), Rational(1));
    Owners o{0, 5, 2, 3, 8, 7, 1, 4, 9, 6, 1, 3, 8, 6};
    CHECK(is_efx(g.instance, to_pi(g.instance, o)));
}

TEST_CASE("even split between isolated vertices is EF") {
    std::vector<EdgeSpec> e{{0, 1, L}, {0, 1, L}, {0, 1, H}, {0, 1, H}};
    auto inst = new_instance(2, Rational(3), Rational(1), e);
    CHECK(is_ef(inst, to_pi(inst, {0, 1, 0, 1})));
}

TEST_CASE("PEF examples") {
    std::vector<EdgeSpec> e{{0, 1, H}, {0, 1, H}, {0, 1, L}, {0, 1, L}, {0, 0, H}};
    auto inst = new_instance(2, Rational(3), Rational(1), e);
    CHECK(is_pef_pair(inst, to_pi(inst, {0, 1, 0, 1, 0}), 0, 1));
    CHECK_FALSE(is_pef_pair(inst, to_pi(inst, {0, 0, 1, 1, 0}), 0, 1));
    std::vector<EdgeSpec> f{{0, 1, H}, {0, 1, L}};
    auto inst2 = new_instance(2, Rational(3), Rational(1), f);
    CHECK_FALSE(is_pef_pair(inst2, to_pi(inst2, {0, 1}), 0, 1));
    CHECK_THROWS(is_pef_pair(inst2, to_pi(inst2, {0, 1}), 1, 1));
}

TEST_CASE("verifiers agree with definitional oracles") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 1000; ++trial) {
        auto inst = random_instance(rng);
        auto owners = random_owners(inst, rng);
        auto pi = to_pi(inst, owners);
        auto report = envy_report(inst, pi);
        for (VertexId i = 0; i < inst.n(); ++i) {
            for (VertexId j = 0; j < inst.n(); ++j) {
                if (i == j) continue;
                bool e = naive_value(inst, owners, i, i) < naive_value(inst, owners, i, j);
                bool s = naive_strong_envy(inst, owners, i, j);
                CHECK(envies(inst, pi, i, j) == e);
                auto se = strongly_envies(inst, pi, i, j);
                CHECK(se.strongly_envies == s);
                CHECK(report.at(i, j).envies == e);
                CHECK(report.at(i, j).strongly_envies == s);
                if (s) CHECK(e);
                CHECK(se.witness.has_value() == s);
                if (se.witness) {
                    // The witness is owned by j and removing it still leaves envy.
                    CHECK(owners[*se.witness] == j);
                    Rational removed = inst.edge(*se.witness).incident(i) ? inst.weight(*se.witness) : Rational(0);
                    CHECK(naive_value(inst, owners, i, i) < naive_value(inst, owners, i, j) - removed);
                }
            }
        }
        bool ef = naive_is_ef(inst, owners);
        bool efx = naive_is_efx(inst, owners);
        CHECK(is_ef(inst, pi) == ef);
        CHECK(is_efx(inst, pi) == efx);
        CHECK(report.is_ef() == ef);
        CHECK(report.is_efx() == efx);
        if (ef) CHECK(efx);
    }
}

TEST_CASE("granting an incident edge never creates envy by the receiver") {
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 300; ++trial) {
        auto inst = random_instance(rng);
        if (inst.m() == 0) continue;
        auto owners = random_owners(inst, rng);
        auto pi = to_pi(inst, owners);
        EdgeId e = rng() % inst.m();
        VertexId i = inst.edge(e).u;
        VertexId before_owner = *pi.owner(e);
        auto after = pi;
        after.assign(inst, e, i);
        for (VertexId j = 0; j < inst.n(); ++j) {
            if (j == i || j == before_owner) continue;
            if (!envies(inst, pi, i, j)) CHECK_FALSE(envies(inst, after, i, j));
        }
    }
}

TEST_CASE("PEF on every adjacent pair implies EF on two-vertex instances") {
    // Exhaustive over two-vertex instances with up to 5 between-edges.
    for (int m = 0; m <= 5; ++m) {
        for (int heavy_mask = 0; heavy_mask < (1 << m); ++heavy_mask) {
            std::vector<EdgeSpec> specs;
            for (int k = 0; k < m; ++k) specs.push_back({0, 1, (heavy_mask >> k & 1) ? H : L});
            auto inst = new_instance(2, Rational(3), Rational(1), specs);
            for (int own = 0; own < (1 << m); ++own) {
                Owners o;
                for (int k = 0; k < m; ++k) o.push_back(own >> k & 1);
                auto pi = to_pi(inst, o);
                if (is_pef_pair(inst, pi, 0, 1)) CHECK(is_ef(inst, pi));
            }
        }
    }
}
