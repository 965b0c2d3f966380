#include <catch2/catch_amalgamated.hpp>

#include "support/fixtures.hpp"
#include "support/oracle.hpp"

using namespace causalhier;

namespace {
const Intervention kEmpty{};

Hypothesis leaf(Intervention iv, std::map<std::string, int> event, Rational r) {
    return Hypothesis::constraint({std::move(iv), std::move(event), std::move(r)});
}
}  // namespace

TEST_CASE("margins shrink with n and are conservative") {
    Rational eps(1, 20);
    Rational m1 = hoeffding_margin(eps, 1, 1);
    Rational m10 = hoeffding_margin(eps, 1, 10);
    Rational m100 = hoeffding_margin(eps, 1, 100);
    CHECK(m1 > m10);
    CHECK(m10 > m100);
    CHECK(m1 > Rational(1, 2));  // at n = 1 a half-threshold test cannot fire
    // against the real value sqrt(ln(20)/2) = 1.2238...
    CHECK(m1 < Rational(13, 10));
}

TEST_CASE("a single-sample test at threshold one half never fires") {
    SubbasicConstraint c{kEmpty, {{"Y", 1}}, Rational(1, 2)};
    CHECK(exact_type1_bound(c, Rational(1, 20), 1, Rational(1, 2)) == Rational(0));
}

TEST_CASE("exact binomial tail at the boundary stays within epsilon") {
    SubbasicConstraint c{kEmpty, {{"Y", 1}}, Rational(1, 2)};
    Rational tail = exact_type1_bound(c, Rational(1, 20), 10, Rational(1, 2));
    CHECK(tail <= Rational(1, 20));
    // the margin puts the cut at count >= 9; cross-check the tail directly
    CHECK(tail == oracle::binom_tail(10, Rational(1, 2), 9));
    for (std::size_t n : {1u, 10u, 100u, 1000u}) {
        for (const Rational& eps : {Rational(1, 100), Rational(1, 20)}) {
            CHECK(exact_type1_bound(c, eps, n, Rational(1, 2)) <= eps);
        }
    }
}

TEST_CASE("a zero true value never fires a positive threshold") {
    SubbasicConstraint c{kEmpty, {{"Y", 1}}, Rational(1, 10)};
    CHECK(exact_type1_bound(c, Rational(1, 20), 100, Rational(0)) == Rational(0));
}

TEST_CASE("the hundred-sample half-threshold test fires above 62 hits") {
    // cut = 1/2 + sqrt(ln(20)/200) = 0.6223...
    BuiltTest t = make_test(leaf(kEmpty, {{"Y", 1}}, Rational(1, 2)), Rational(1, 20), 100);
    CHECK_FALSE(t.leaf_fires(t.hypothesis.leaf, 62));
    CHECK(t.leaf_fires(t.hypothesis.leaf, 63));
}

TEST_CASE("intersections split epsilon across the leaves") {
    Hypothesis h = Hypothesis::all_of(
        {leaf(kEmpty, {{"X", 0}}, Rational(0)), leaf(kEmpty, {{"Y", 1}}, Rational(0))});
    BuiltTest t = make_test(h, Rational(1, 20), 50);
    CHECK(t.leaf_count == 2);
    CHECK(t.margin == hoeffding_margin(Rational(1, 20), 2, 50));
    CHECK(t.margin > hoeffding_margin(Rational(1, 20), 1, 50));
}

TEST_CASE("a threshold of one can never fire") {
    BuiltTest t = make_test(leaf(kEmpty, {{"Y", 1}}, Rational(1)), Rational(1, 20), 10);
    CHECK_FALSE(t.leaf_fires(t.hypothesis.leaf, 10));
}

TEST_CASE("boolean combinations decide correctly") {
    Hypothesis h = Hypothesis::any_of(
        {leaf(kEmpty, {{"X", 0}}, Rational(1, 2)),
         Hypothesis::all_of(
             {leaf(kEmpty, {{"Y", 1}}, Rational(0)), leaf(kEmpty, {{"Y", 0}}, Rational(0))})});
    BuiltTest t = make_test(h, Rational(1, 20), 100);
    // leaves in order: X=0 over 1/2, Y=1 over 0, Y=0 over 0
    CHECK(t.decide({100, 0, 0}));
    CHECK_FALSE(t.decide({0, 100, 0}));
    CHECK(t.decide({0, 100, 100}));
}

TEST_CASE("power exceeds one minus epsilon past the explicit threshold") {
    Rational eps(1, 20);
    for (const Rational& gap : {Rational(1, 10), Rational(1, 4)}) {
        std::size_t n_star = power_threshold(eps, 1, gap);
        SubbasicConstraint c{kEmpty, {{"Y", 1}}, Rational(1, 4)};
        Rational fire = exact_type1_bound(c, eps, n_star, Rational(1, 4) + gap);
        CHECK(fire >= 1 - eps);
    }
}

TEST_CASE("hypothesis truth is evaluated exactly on the model") {
    ScmModel m = fixtures::y_good_pair();
    InterventionalFamily fam = interventional_family(m, {kEmpty});
    CHECK(hypothesis_holds(leaf(kEmpty, {{"X", 0}, {"Y", 0}}, Rational(1, 4)), fam));
    CHECK_FALSE(hypothesis_holds(leaf(kEmpty, {{"X", 0}, {"Y", 0}}, Rational(1, 2)), fam));
}

TEST_CASE("simulation is reproducible and converges on a true hypothesis") {
    ScmModel m = fixtures::y_good_pair();
    Hypothesis h = Hypothesis::all_of({leaf(Intervention{{{"X", 1}}}, {{"Y", 0}}, Rational(0)),
                                       leaf(Intervention{{{"X", 1}}}, {{"Y", 1}}, Rational(0)),
                                       leaf(kEmpty, {{"X", 0}, {"Y", 0}}, Rational(0)),
                                       leaf(kEmpty, {{"X", 0}, {"Y", 1}}, Rational(0))});
    TestConfig cfg;
    cfg.sample_sizes = {20, 400};
    cfg.trials = 60;
    cfg.seed = 7;
    SimReport a = simulate_verification(m, h, cfg);
    SimReport b = simulate_verification(m, h, cfg);
    CHECK(a.truth_satisfies);
    REQUIRE(a.rows.size() == 2);
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].rejections == b.rows[i].rejections);
        CHECK(a.rows[i].trials == 60);
    }
    CHECK(a.rows[1].rejections >= a.rows[0].rejections);
    CHECK(a.rows[1].frequency >= 0.95);
}

TEST_CASE("a boundary-value hypothesis keeps rejections below epsilon") {
    // P(Y=1) = 1/2 exactly, so 'P(Y=1) > 1/2' is false with zero slack
    ScmModel m = fixtures::xy_uniform();
    Hypothesis h = leaf(kEmpty, {{"Y", 1}}, Rational(1, 2));
    TestConfig cfg;
    cfg.sample_sizes = {10, 100, 1000};
    cfg.trials = 200;
    cfg.seed = 11;
    SimReport rep = simulate_verification(m, h, cfg);
    CHECK_FALSE(rep.truth_satisfies);
    for (const auto& row : rep.rows)
        CHECK(Rational(BigInt(row.rejections), BigInt(row.trials)) <= Rational(1, 20));
}

TEST_CASE("false hypotheses on a slack-rich model are still rarely rejected") {
    // the y-good fixture never shows X = 1, so this open claim is false
    ScmModel m = fixtures::y_good_pair();
    Hypothesis h = leaf(kEmpty, {{"X", 1}, {"Y", 1}}, Rational(0));
    TestConfig cfg;
    cfg.sample_sizes = {50, 500};
    cfg.trials = 120;
    cfg.seed = 19;
    SimReport rep = simulate_verification(m, h, cfg);
    CHECK_FALSE(rep.truth_satisfies);
    for (const auto& row : rep.rows) CHECK(row.rejections == 0);
}

TEST_CASE("hypothesis validation rejects degenerate input") {
    CHECK_THROWS_AS(validate_hypothesis(Hypothesis::all_of({})), Error);
    CHECK_THROWS_AS(validate_hypothesis(leaf(kEmpty, {}, Rational(1, 2))), Error);
    CHECK_THROWS_AS(validate_hypothesis(leaf(kEmpty, {{"Y", 1}}, Rational(3, 2))), Error);
    CHECK_THROWS_AS(make_test(leaf(kEmpty, {{"Y", 1}}, Rational(1, 2)), Rational(1, 20), 0),
                    Error);
    CHECK_THROWS_AS(make_test(leaf(kEmpty, {{"Y", 1}}, Rational(1, 2)), Rational(2), 10), Error);
}

TEST_CASE("decide over raw datasets matches count-based decisions") {
    ScmModel m = fixtures::xy_uniform();
    Hypothesis h = leaf(kEmpty, {{"Y", 1}}, Rational(0));
    BuiltTest t = make_test(h, Rational(1, 20), 4);
    std::map<std::string, std::vector<Valuation>> data;
    data[""] = {{0, 1}, {1, 1}, {0, 0}, {1, 0}};
    CHECK(t.decide_samples(m.variables, data) == t.decide({2}));
}
