#include <doctest.h>

#include <algorithm>
#include <vector>

#include "quasimet/almost_iso.hpp"
#include "quasimet/graph.hpp"
#include "quasimet/quasimetric.hpp"
#include "support/testutil.hpp"

using quasimet::AlmostIsometry;
using quasimet::QuasiMetric;
using quasimet::Rational;

namespace {

QuasiMetric<Rational> constant_two_point(const Rational& value) {
    std::vector<std::vector<Rational>> d{{Rational(0), value}, {value, Rational(0)}};
    auto r = QuasiMetric<Rational>::validate(d, {}, Rational(0));
    REQUIRE(r.ok());
    return *std::move(r.space);
}

// d'(x,y) = 1.3, d'(y,x) = 0.7: the unit two-point space shifted by
// f = (0, 3/10).
QuasiMetric<Rational> shifted_two_point() {
    std::vector<std::vector<Rational>> d{{Rational(0), Rational(13, 10)},
                                         {Rational(7, 10), Rational(0)}};
    auto r = QuasiMetric<Rational>::validate(d, {}, Rational(0));
    REQUIRE(r.ok());
    return *std::move(r.space);
}

const std::vector<int> kIdentity2{0, 1};

}  // namespace

TEST_CASE("check_almost_isometry on the two-point examples") {
    auto unit = constant_two_point(Rational(1));
    CHECK(quasimet::check_almost_isometry(unit, unit, kIdentity2));

    auto shifted = shifted_two_point();
    // T'(x,y,x) = 1.3 + 0.7 - 0 = 2 = T(x,y,x)
    CHECK(shifted.triangular(0, 1, 0) == Rational(2));
    CHECK(quasimet::check_almost_isometry(unit, shifted, kIdentity2));

    auto doubled = constant_two_point(Rational(2));
    CHECK_FALSE(quasimet::check_almost_isometry(unit, doubled, kIdentity2));

    testutil::Rng rng3{3};
    auto three = testutil::random_space(rng3, 3);
    CHECK_THROWS_AS(quasimet::check_almost_isometry(unit, three, kIdentity2),
                    std::invalid_argument);
}

TEST_CASE("recover_potential rebuilds the shift") {
    auto unit = constant_two_point(Rational(1));

    auto iso = quasimet::recover_potential(unit, unit, kIdentity2, 0);
    REQUIRE(iso.ok());
    CHECK(iso.almost_isometry->potential == std::vector<Rational>{Rational(0), Rational(0)});

    auto shifted = shifted_two_point();
    auto rec = quasimet::recover_potential(unit, shifted, kIdentity2, 0);
    REQUIRE(rec.ok());
    CHECK(rec.almost_isometry->potential ==
          std::vector<Rational>{Rational(0), Rational(3, 10)});
    CHECK(rec.almost_isometry->base_point == 0);

    auto doubled = constant_two_point(Rational(2));
    auto fail = quasimet::recover_potential(unit, doubled, kIdentity2, 0);
    REQUIRE_FALSE(fail.ok());
    CHECK(fail.failure->x == 0);
    CHECK(fail.failure->y == 1);
    CHECK(fail.failure->z == 0);
}

TEST_CASE("compose adds potentials and invert negates them") {
    auto unit = constant_two_point(Rational(1));
    auto shifted = shifted_two_point();  // shift 0.3 at y
    // Shift the shifted space once more by 0.2 at y: d'' = (1.5, 0.5).
    std::vector<std::vector<Rational>> d2{{Rational(0), Rational(3, 2)},
                                          {Rational(1, 2), Rational(0)}};
    auto twice = QuasiMetric<Rational>::validate(d2, {}, Rational(0));
    REQUIRE(twice.ok());

    auto a1 = *quasimet::recover_potential(unit, shifted, kIdentity2, 0).almost_isometry;
    auto a2 = *quasimet::recover_potential(shifted, *twice.space, kIdentity2, 0).almost_isometry;
    auto both = quasimet::compose(a1, a2);
    CHECK(both.potential == std::vector<Rational>{Rational(0), Rational(1, 2)});

    auto inv = quasimet::invert(a1);
    CHECK(inv.potential == std::vector<Rational>{Rational(0), Rational(-3, 10)});
    CHECK(quasimet::check_almost_isometry(shifted, unit, inv.map));

    // a composed with its inverse is the identity with zero potential.
    auto round = quasimet::compose(a1, inv);
    CHECK(round.map == kIdentity2);
    CHECK(round.potential == std::vector<Rational>{Rational(0), Rational(0)});

    // Composing with the identity changes nothing (up to the constant).
    auto id = *quasimet::recover_potential(shifted, shifted, kIdentity2, 0).almost_isometry;
    auto same = quasimet::compose(a1, id);
    CHECK(same.map == a1.map);
    CHECK(quasimet::same_up_to_constant<Rational>(same.potential, a1.potential, Rational(0)));

    auto dbl = quasimet::invert(inv);
    CHECK(dbl.map == a1.map);
    CHECK(quasimet::same_up_to_constant<Rational>(dbl.potential, a1.potential, Rational(0)));
}

TEST_CASE("is_isometry distinguishes shifts from isometries") {
    auto unit = constant_two_point(Rational(1));
    auto shifted = shifted_two_point();
    CHECK(quasimet::is_isometry(unit, unit, kIdentity2));
    CHECK_FALSE(quasimet::is_isometry(unit, shifted, kIdentity2));
    std::vector<int> swap{1, 0};
    CHECK(quasimet::is_isometry(unit, unit, swap));
}

TEST_CASE("extended group of the asymmetric two-point space is {id, swap}") {
    std::vector<std::vector<Rational>> d{{Rational(0), Rational(1)}, {Rational(2), Rational(0)}};
    auto r = QuasiMetric<Rational>::validate(d, {}, Rational(0));
    REQUIRE(r.ok());
    auto group = quasimet::enumerate_extended_group(*r.space);
    REQUIRE(group.size() == 2);
    CHECK(group[0].map == std::vector<int>{0, 1});
    CHECK(group[1].map == std::vector<int>{1, 0});
    // The swap is not an isometry, yet preserves T(x,y,x) = 3 = T(y,x,y).
    CHECK_FALSE(quasimet::is_isometry(*r.space, *r.space, group[1].map));
}

TEST_CASE("extended group is trivial when symmetrized distances differ") {
    std::vector<std::vector<Rational>> d{
        {Rational(0), Rational(8), Rational(16)},
        {Rational(10), Rational(0), Rational(12)},
        {Rational(18), Rational(14), Rational(0)}};
    auto r = QuasiMetric<Rational>::validate(d, {}, Rational(0));
    REQUIRE(r.ok());
    auto group = quasimet::enumerate_extended_group(*r.space);
    // Verified against the brute force over all six bijections.
    auto brute = testutil::brute_force_self_maps(*r.space, [&](const std::vector<int>& p) {
        return testutil::oracle_is_almost_isometry(*r.space, *r.space, p);
    });
    REQUIRE(brute.size() == 1);
    REQUIRE(group.size() == 1);
    CHECK(group[0].map == std::vector<int>{0, 1, 2});
}

TEST_CASE("search cap is enforced") {
    testutil::Rng rng{23};
    auto space = testutil::random_space(rng, 5);
    CHECK_THROWS_AS(quasimet::enumerate_extended_group(space, 4), quasimet::SearchCapExceeded);
    CHECK_NOTHROW(quasimet::enumerate_extended_group(space, 5));
}

TEST_CASE("detection agrees with the all-triples oracle for every base point") {
    testutil::Rng rng{29};
    for (int trial = 0; trial < 200; ++trial) {
        const int n = testutil::uniform_int(rng, 2, 6);
        auto s1 = testutil::random_space(rng, n);
        bool planted = trial % 2 == 0;
        QuasiMetric<Rational> s2 = s1;
        std::vector<int> map;
        if (planted) {
            auto plant = testutil::plant_almost_isometry(rng, s1);
            s2 = plant.target;
            map = plant.map;
        } else {
            s2 = testutil::random_space(rng, n);
            map = testutil::random_permutation(rng, n);
        }
        const bool expected = testutil::oracle_is_almost_isometry(s1, s2, map);
        if (planted) CHECK(expected);
        CHECK(quasimet::check_almost_isometry(s1, s2, map) == expected);
        for (int x0 = 0; x0 < n; ++x0) {
            CHECK(quasimet::recover_potential(s1, s2, map, x0).ok() == expected);
        }
    }
}

TEST_CASE("potentials from different base points differ by a constant") {
    testutil::Rng rng{31};
    for (int trial = 0; trial < 100; ++trial) {
        auto s1 = testutil::random_space(rng, testutil::uniform_int(rng, 2, 6));
        auto plant = testutil::plant_almost_isometry(rng, s1);
        auto a0 = quasimet::recover_potential(s1, plant.target, plant.map, 0);
        REQUIRE(a0.ok());
        for (int x0 = 1; x0 < s1.size(); ++x0) {
            auto ax = quasimet::recover_potential(s1, plant.target, plant.map, x0);
            REQUIRE(ax.ok());
            CHECK(quasimet::same_up_to_constant<Rational>(
                a0.almost_isometry->potential, ax.almost_isometry->potential, Rational(0)));
        }
        // And both agree with the planted potential up to the constant.
        CHECK(quasimet::same_up_to_constant<Rational>(a0.almost_isometry->potential,
                                                      plant.potential, Rational(0)));
    }
}

TEST_CASE("on symmetric spaces every almost isometry has zero potential") {
    testutil::Rng rng{37};
    for (int trial = 0; trial < 50; ++trial) {
        auto space = testutil::random_symmetric_space(rng, testutil::uniform_int(rng, 2, 5));
        auto group = quasimet::enumerate_extended_group(space);
        for (const auto& a : group) {
            CHECK(quasimet::is_isometry(space, space, a.map));
            for (const auto& f : a.potential) CHECK(f == Rational(0));
        }
    }
}

TEST_CASE("the extended group sits between Iso(d) and Iso(d-tilde)") {
    testutil::Rng rng{41};
    for (int trial = 0; trial < 60; ++trial) {
        auto space = testutil::random_space(rng, testutil::uniform_int(rng, 2, 5));
        auto tilde = space.symmetrized();
        auto group = quasimet::enumerate_extended_group(space);

        std::vector<std::vector<int>> group_maps;
        for (const auto& a : group) group_maps.push_back(a.map);

        auto iso_d = testutil::brute_force_self_maps(space, [&](const std::vector<int>& p) {
            return testutil::oracle_is_isometry(space, space, p);
        });
        auto iso_tilde = testutil::brute_force_self_maps(tilde, [&](const std::vector<int>& p) {
            return testutil::oracle_is_isometry(tilde, tilde, p);
        });
        for (const auto& p : iso_d) {
            CHECK(std::find(group_maps.begin(), group_maps.end(), p) != group_maps.end());
        }
        for (const auto& p : group_maps) {
            CHECK(std::find(iso_tilde.begin(), iso_tilde.end(), p) != iso_tilde.end());
        }
    }
}

TEST_CASE("group laws hold exactly in rational mode") {
    testutil::Rng rng{43};
    for (int trial = 0; trial < 20; ++trial) {
        auto space = testutil::random_space(rng, testutil::uniform_int(rng, 2, 4));
        auto group = quasimet::enumerate_extended_group(space);
        std::vector<std::vector<int>> maps;
        for (const auto& a : group) maps.push_back(a.map);

        for (const auto& a : group) {
            auto inv = quasimet::invert(a);
            CHECK(std::find(maps.begin(), maps.end(), inv.map) != maps.end());
            auto unit = quasimet::compose(a, inv);
            for (std::size_t i = 0; i < unit.map.size(); ++i) CHECK(unit.map[i] == (int)i);
            for (const auto& b : group) {
                auto ab = quasimet::compose(a, b);
                CHECK(std::find(maps.begin(), maps.end(), ab.map) != maps.end());
                CHECK(quasimet::check_almost_isometry(space, space, ab.map));
                for (const auto& c : group) {
                    auto left = quasimet::compose(quasimet::compose(a, b), c);
                    auto right = quasimet::compose(a, quasimet::compose(b, c));
                    CHECK(left.map == right.map);
                }
            }
        }
    }
}

TEST_CASE("almost isometries preserve minimizing chains") {
    // Induced spaces have nontrivial geodesics; shift one and map chains over.
    testutil::Rng rng{47};
    for (int trial = 0; trial < 30; ++trial) {
        auto graph = testutil::random_strongly_connected_graph(rng, 6, 8);
        auto table = quasimet::induced_quasimetric(graph);
        auto space = quasimet::to_quasimetric(table, {}, Rational(0), true);
        auto plant = testutil::plant_almost_isometry(rng, space);
        auto rec = quasimet::recover_potential(space, plant.target, plant.map, 0);
        REQUIRE(rec.ok());
        for (int i = 0; i < space.size(); ++i) {
            for (int j = 0; j < space.size(); ++j) {
                if (i == j) continue;
                auto chain = table.chain(i, j);
                REQUIRE(chain.has_value());
                REQUIRE(space.is_minimizing(*chain));
                auto image = quasimet::map_chain(*rec.almost_isometry, *chain);
                CHECK(plant.target.is_minimizing(image));
            }
        }
    }
}

TEST_CASE("float backend: detection under tolerance on T differences") {
    auto u = QuasiMetric<double>::validate({{0.0, 1.0}, {1.0, 0.0}}, {}, 1e-9);
    auto s = QuasiMetric<double>::validate({{0.0, 1.3}, {0.7, 0.0}}, {}, 1e-9);
    REQUIRE(u.ok());
    REQUIRE(s.ok());
    std::vector<int> id{0, 1};
    CHECK(quasimet::check_almost_isometry(*u.space, *s.space, id));
    auto rec = quasimet::recover_potential(*u.space, *s.space, id, 0);
    REQUIRE(rec.ok());
    CHECK(rec.almost_isometry->potential[1] == doctest::Approx(0.3));

    // A perturbation below tolerance is absorbed, one above is not.
    auto near = QuasiMetric<double>::validate({{0.0, 1.3 + 1e-12}, {0.7, 0.0}}, {}, 1e-9);
    REQUIRE(near.ok());
    CHECK(quasimet::check_almost_isometry(*u.space, *near.space, id));
    auto far = QuasiMetric<double>::validate({{0.0, 1.35}, {0.7, 0.0}}, {}, 1e-9);
    REQUIRE(far.ok());
    CHECK_FALSE(quasimet::check_almost_isometry(*u.space, *far.space, id));

    auto group = quasimet::enumerate_extended_group(*s.space);
    CHECK(group.size() == 2);  // swap preserves T here as well
}

TEST_CASE("directed cycle with a potential: all three inclusions are strict") {
    // Base 3-cycle: one step forward costs 1, the long way around costs 2.
    // Rotations are isometries; reflections are not even almost isometries.
    std::vector<std::vector<Rational>> cyc{
        {Rational(0), Rational(1), Rational(2)},
        {Rational(2), Rational(0), Rational(1)},
        {Rational(1), Rational(2), Rational(0)}};
    auto base = QuasiMetric<Rational>::validate(cyc, {}, Rational(0));
    REQUIRE(base.ok());
    auto base_group = quasimet::enumerate_extended_group(*base.space);
    REQUIRE(base_group.size() == 3);  // the rotations
    for (const auto& a : base_group) {
        CHECK(quasimet::is_isometry(*base.space, *base.space, a.map));
    }

    // Shift by a potential that no rotation preserves: the extended group
    // keeps all three rotations (T is shift-invariant) while Iso(d) shrinks
    // to the identity and Iso(d-tilde) stays the full symmetric group.
    std::vector<Rational> g{Rational(0), Rational(3, 10), Rational(0)};
    auto shifted = cyc;
    for (int x = 0; x < 3; ++x) {
        for (int y = 0; y < 3; ++y) {
            if (x != y) shifted[x][y] = cyc[x][y] + g[y] - g[x];
        }
    }
    auto validated = QuasiMetric<Rational>::validate(shifted, {}, Rational(0));
    REQUIRE(validated.ok());
    const auto& space = *validated.space;

    auto group = quasimet::enumerate_extended_group(space);
    auto brute = testutil::brute_force_self_maps(space, [&](const std::vector<int>& p) {
        return testutil::oracle_is_almost_isometry(space, space, p);
    });
    REQUIRE(group.size() == brute.size());
    for (std::size_t k = 0; k < group.size(); ++k) CHECK(group[k].map == brute[k]);
    CHECK(group.size() == 3);

    auto isometries = testutil::brute_force_self_maps(space, [&](const std::vector<int>& p) {
        return testutil::oracle_is_isometry(space, space, p);
    });
    CHECK(isometries.size() == 1);  // only the identity survives the shift

    auto tilde = space.symmetrized();
    auto tilde_iso = testutil::brute_force_self_maps(tilde, [&](const std::vector<int>& p) {
        return testutil::oracle_is_isometry(tilde, tilde, p);
    });
    CHECK(tilde_iso.size() == 6);  // d-tilde is constant, any bijection works

    // The nontrivial rotations carry nonconstant recovered potentials.
    bool saw_nonconstant = false;
    for (const auto& a : group) {
        for (const auto& v : a.potential) {
            if (!(v == Rational(0))) saw_nonconstant = true;
        }
    }
    CHECK(saw_nonconstant);
}
