#include <doctest.h>

#include <stdexcept>
#include <vector>

#include "quasimet/quasimetric.hpp"
#include "quasimet/rational.hpp"
#include "support/testutil.hpp"

using quasimet::BallKind;
using quasimet::QuasiMetric;
using quasimet::Rational;
using quasimet::ViolationKind;

namespace {

using Matrix = std::vector<std::vector<Rational>>;

// Three points with d(a,b)=1, d(b,a)=2, d(b,c)=1, d(c,b)=2, d(a,c)=2, d(c,a)=4.
Matrix three_point_matrix() {
    return {{Rational(0), Rational(1), Rational(2)},
            {Rational(2), Rational(0), Rational(1)},
            {Rational(4), Rational(2), Rational(0)}};
}

// Direct triple loop, the oracle the validator is checked against.
bool oracle_valid(const Matrix& d) {
    const int n = static_cast<int>(d.size());
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j && !(d[i][j] == Rational(0))) return false;
            if (i != j && !(d[i][j] > Rational(0))) return false;
            for (int k = 0; k < n; ++k) {
                if (d[i][j] + d[j][k] < d[i][k]) return false;
            }
        }
    }
    return true;
}

QuasiMetric<Rational> three_point_space() {
    auto r = QuasiMetric<Rational>::validate(three_point_matrix(), {"a", "b", "c"}, Rational(0));
    REQUIRE(r.ok());
    return *std::move(r.space);
}

// d(x,y) = 13/10, d(y,x) = 7/10.
QuasiMetric<Rational> two_point_space() {
    Matrix d{{Rational(0), Rational(13, 10)}, {Rational(7, 10), Rational(0)}};
    auto r = QuasiMetric<Rational>::validate(d, {"x", "y"}, Rational(0));
    REQUIRE(r.ok());
    return *std::move(r.space);
}

}  // namespace

TEST_CASE("validate accepts the one-point space and the three-point example") {
    auto degenerate = QuasiMetric<Rational>::validate({{Rational(0)}}, {}, Rational(0));
    CHECK(degenerate.ok());
    CHECK(degenerate.space->size() == 1);

    REQUIRE(oracle_valid(three_point_matrix()));
    auto r = QuasiMetric<Rational>::validate(three_point_matrix(), {}, Rational(0));
    CHECK(r.ok());
}

TEST_CASE("validate reports the violating triple when d(a,c) grows to 5") {
    auto d = three_point_matrix();
    d[0][2] = Rational(5);
    REQUIRE_FALSE(oracle_valid(d));

    auto r = QuasiMetric<Rational>::validate(d, {}, Rational(0));
    REQUIRE_FALSE(r.ok());
    bool found = false;
    for (const auto& v : r.violations) {
        if (v.kind == ViolationKind::Triangle && v.indices == std::vector<int>{0, 1, 2}) {
            found = true;
            CHECK(v.slack == Rational(-3));  // 1 + 1 - 5
        }
    }
    CHECK(found);
}

TEST_CASE("validate rejects malformed input outright") {
    CHECK_THROWS_AS(QuasiMetric<Rational>::validate({{Rational(0), Rational(1)}}, {}, Rational(0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(QuasiMetric<double>::validate({{0.0, std::nan("")}, {1.0, 0.0}}, {}, 1e-9),
                    std::invalid_argument);
    auto negative = QuasiMetric<Rational>::validate(
        {{Rational(0), Rational(-1)}, {Rational(1), Rational(0)}}, {}, Rational(0));
    REQUIRE_FALSE(negative.ok());
    CHECK(negative.violations.front().kind == ViolationKind::Positivity);
    auto zero_off = QuasiMetric<Rational>::validate(
        {{Rational(0), Rational(0)}, {Rational(1), Rational(0)}}, {}, Rational(0));
    CHECK_FALSE(zero_off.ok());
}

TEST_CASE("triangular function on the three-point example") {
    auto space = three_point_space();
    CHECK(space.triangular(0, 0, 0) == Rational(0));
    CHECK(space.triangular(0, 0, 2) == Rational(0));
    CHECK(space.triangular(0, 1, 2) == Rational(0));  // 1 + 1 - 2
    CHECK(space.triangular(2, 1, 0) == Rational(0));  // 2 + 2 - 4
    CHECK(space.triangular(1, 0, 2) == Rational(3));  // d(b,a)+d(a,c)-d(b,c) = 2+2-1
    CHECK_THROWS_AS(space.triangular(0, 1, 3), std::out_of_range);
}

TEST_CASE("symmetrize averages the two directions") {
    testutil::Rng rng{7};
    auto sym_in = testutil::random_symmetric_space(rng, 5);
    auto sym_out = sym_in.symmetrized();
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 5; ++j) CHECK(sym_out(i, j) == sym_in(i, j));
    }

    auto two = two_point_space();
    auto tilde = two.symmetrized();
    CHECK(tilde(0, 1) == Rational(1));
    CHECK(tilde(1, 0) == Rational(1));

    auto three = three_point_space().symmetrized();
    CHECK(three(0, 2) == Rational(3));  // (2 + 4) / 2
}

TEST_CASE("symmetrize is idempotent and symmetric on random spaces") {
    testutil::Rng rng{11};
    for (int trial = 0; trial < 30; ++trial) {
        auto space = testutil::random_space(rng, testutil::uniform_int(rng, 1, 6));
        auto s1 = space.symmetrized();
        auto s2 = s1.symmetrized();
        CHECK(s1.is_symmetric());
        for (int i = 0; i < space.size(); ++i) {
            for (int j = 0; j < space.size(); ++j) {
                CHECK(s1(i, j) == s2(i, j));
                CHECK(s1(i, j) == s1(j, i));
            }
        }
    }
}

TEST_CASE("balls use strict inequalities per kind") {
    auto two = two_point_space();
    CHECK(two.ball(0, Rational(10), BallKind::Forward).members == std::vector<int>{0, 1});
    CHECK(two.ball(0, Rational(10), BallKind::Backward).members == std::vector<int>{0, 1});
    CHECK(two.ball(0, Rational(10), BallKind::Symmetric).members == std::vector<int>{0, 1});
    // d(x,y) = 1.3 >= 1, d(y,x) = 0.7 < 1
    CHECK(two.ball(0, Rational(1), BallKind::Forward).members == std::vector<int>{0});
    CHECK(two.ball(0, Rational(1), BallKind::Backward).members == std::vector<int>{0, 1});
    CHECK(two.ball(0, Rational(13, 10), BallKind::Forward).members == std::vector<int>{0});
    CHECK_THROWS_AS(two.ball(0, Rational(0), BallKind::Forward), std::invalid_argument);
}

TEST_CASE("symmetric ball membership bounds the symmetrized distance") {
    testutil::Rng rng{13};
    for (int trial = 0; trial < 50; ++trial) {
        auto space = testutil::random_space(rng, testutil::uniform_int(rng, 2, 6));
        auto tilde = space.symmetrized();
        Rational r(testutil::uniform_int(rng, 1, 40), 20);
        auto ball = space.ball(0, r, BallKind::Symmetric);
        for (int y : ball.members) CHECK(tilde(0, y) < r);
    }
}

TEST_CASE("chain length sums consecutive distances") {
    auto three = three_point_space();
    std::vector<int> xy{0, 1};
    CHECK(three.chain_length(xy) == Rational(1));
    std::vector<int> abc{0, 1, 2};
    CHECK(three.chain_length(abc) == Rational(2));
    std::vector<int> cba{2, 1, 0};
    CHECK(three.chain_length(cba) == Rational(4));

    std::vector<int> tooshort{0};
    CHECK_THROWS_AS(three.chain_length(tooshort), std::invalid_argument);
    std::vector<int> repeated{0, 0, 1};
    CHECK_THROWS_AS(three.chain_length(repeated), std::invalid_argument);
}

TEST_CASE("minimizing chains per the triangular characterization") {
    auto three = three_point_space();
    std::vector<int> pair{0, 2};
    CHECK(three.is_minimizing(pair));
    std::vector<int> abc{0, 1, 2};
    CHECK(three.is_minimizing(abc));  // length 2 = d(a,c)
    std::vector<int> cba{2, 1, 0};
    CHECK(three.is_minimizing(cba));  // length 4 = d(c,a)
    std::vector<int> backtrack{0, 1, 0, 2};
    CHECK_FALSE(three.is_minimizing(backtrack));
}

TEST_CASE("triangular function is nonnegative and degenerately zero") {
    testutil::Rng rng{17};
    for (int trial = 0; trial < 40; ++trial) {
        auto space = testutil::random_space(rng, testutil::uniform_int(rng, 1, 6));
        const int n = space.size();
        for (int x = 0; x < n; ++x) {
            for (int y = 0; y < n; ++y) {
                CHECK(space.triangular(x, x, y) == Rational(0));
                CHECK(space.triangular(x, y, y) == Rational(0));
                for (int z = 0; z < n; ++z) {
                    CHECK(space.triangular(x, y, z) >= Rational(0));
                }
            }
        }
    }
}

TEST_CASE("both minimizing characterizations agree on random chains") {
    testutil::Rng rng{19};
    for (int trial = 0; trial < 300; ++trial) {
        auto space = testutil::random_space(rng, testutil::uniform_int(rng, 2, 6));
        const int n = space.size();
        std::vector<int> chain;
        int len = testutil::uniform_int(rng, 2, 5);
        for (int i = 0; i < len; ++i) {
            int next = testutil::uniform_int(rng, 0, n - 1);
            if (!chain.empty() && next == chain.back()) next = (next + 1) % n;
            chain.push_back(next);
        }
        // is_minimizing itself throws if the two characterizations split.
        bool minimizing = space.is_minimizing(chain);
        bool by_length = space.chain_length(chain) == space(chain.front(), chain.back());
        CHECK(minimizing == by_length);
    }
}

TEST_CASE("float-mode validation uses the tolerance on triangle slack") {
    std::vector<std::vector<double>> d{{0.0, 1.3}, {0.7, 0.0}};
    auto r = QuasiMetric<double>::validate(d, {}, 1e-9);
    REQUIRE(r.ok());
    CHECK((*r.space)(0, 1) == doctest::Approx(1.3));
    CHECK(r.space->symmetrized()(0, 1) == doctest::Approx(1.0));

    // A violation just beyond tolerance is caught, one inside is accepted.
    std::vector<std::vector<double>> tight{{0.0, 1.0, 2.0 + 1e-7}, {1.0, 0.0, 1.0},
                                           {2.0, 1.0, 0.0}};
    CHECK_FALSE(QuasiMetric<double>::validate(tight, {}, 1e-9).ok());
    CHECK(QuasiMetric<double>::validate(tight, {}, 1e-6).ok());
}
