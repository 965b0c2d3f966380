#include <catch2/catch_amalgamated.hpp>

#include "support/fixtures.hpp"
#include "support/oracle.hpp"

using namespace causalhier;

namespace {
const Intervention kEmpty{};
const Intervention kDoX0{{{"X", 0}}};
const Intervention kDoX1{{{"X", 1}}};

/// The y-good fixture's separated partner, built by hand with eps = 1/4:
/// the four units of the worked two-variable example.
ScmModel y_good_partner(const Rational& eps) {
    ScmModel m;
    m.variables = {"X", "Y"};
    m.parents = {{}, {0}};
    m.exo_names = {"U"};
    m.exo_ranges = {4};
    m.exo_parents = {{}, {0}};
    m.units.push_back({{0}, Rational(1, 2) - eps});  // (y, y)
    m.units.push_back({{1}, eps});                   // (y, y')
    m.units.push_back({{2}, Rational(1, 2) - eps});  // (y', y')
    m.units.push_back({{3}, eps});                   // (y', y)
    m.mechanisms.resize(2);
    m.mechanisms[0].values = {0};
    // index (x << 2) | u ; u0: always 1, u1: x, u2: always 0, u3: 1-x
    m.mechanisms[1].values = {1, 0, 0, 1, 1, 1, 0, 0};
    return m;
}
}  // namespace

TEST_CASE("probabilities of causation for the uniform-pair fixture") {
    CausationReport rep = probabilities_of_causation(fixtures::xy_uniform(), "X", "Y");
    CHECK(rep.pns == CausationValue::of(Rational(1, 2)));
    CHECK(rep.pns_converse == CausationValue::of(Rational(1, 2)));
    // P(x, y) = 1/4: necessity is defined and equals 1 here
    REQUIRE(rep.pn.defined);
    CHECK(rep.pn.value == Rational(1));
    REQUIRE(rep.ps.defined);
    CHECK(rep.ps.value == Rational(1));
}

TEST_CASE("the y-good fixture has zero PNS, its partner epsilon") {
    CHECK(probabilities_of_causation(fixtures::y_good_pair(), "X", "Y").pns ==
          CausationValue::of(Rational(0)));
    ScmModel prime = y_good_partner(Rational(1, 4));
    REQUIRE(validate_model(prime).ok());
    CHECK(probabilities_of_causation(prime, "X", "Y").pns ==
          CausationValue::of(Rational(1, 4)));
}

TEST_CASE("conditional quantities go undefined on zero conditioning mass") {
    // the fixture never shows X = 1 observationally
    CausationReport rep = probabilities_of_causation(fixtures::y_good_pair(), "X", "Y");
    CHECK_FALSE(rep.pn.defined);
    REQUIRE(rep.p_disable.defined);
    CHECK(rep.p_disable.value == Rational(0));
}

TEST_CASE("table and model entry points agree") {
    oracle::Rng rng(5001);
    for (int trial = 0; trial < 15; ++trial) {
        ScmModel m = oracle::random_model(rng, 2 + trial % 2);
        CounterfactualTable t = project_l3(m, {kEmpty, kDoX0, kDoX1});
        CausationReport a = probabilities_of_causation(m, "X", "Y");
        CausationReport b = causation_from_table(t, "X", "Y");
        CHECK(a.pns == b.pns);
        CHECK(a.pns_converse == b.pns_converse);
        CHECK(a.pn == b.pn);
        CHECK(a.ps == b.ps);
        CHECK(a.p_disable == b.p_disable);
        CHECK(a.p_enable == b.p_enable);
    }
}

TEST_CASE("causation values stay in the unit interval and PNS pair sums below one") {
    oracle::Rng rng(5002);
    for (int trial = 0; trial < 25; ++trial) {
        ScmModel m = oracle::random_model(rng, 2 + trial % 2);
        CausationReport rep = probabilities_of_causation(m, "X", "Y");
        for (const auto* v :
             {&rep.pns, &rep.pns_converse, &rep.pn, &rep.ps, &rep.p_disable, &rep.p_enable})
            if (v->defined) {
                CHECK(v->value >= 0);
                CHECK(v->value <= 1);
            }
        CHECK(rep.pns.value + rep.pns_converse.value <= 1);
    }
}

TEST_CASE("feasibility accepts the y-good fixture") {
    CHECK(check_feasible_2ve(fixtures::family_of(fixtures::y_good_pair())).feasible);
}

TEST_CASE("feasibility rejects uncertain intervened values") {
    TwoVarFamily fam = fixtures::family_of(fixtures::y_good_pair());
    fam.do_x1.cells.clear();
    fam.do_x1.cells[{0, 1}] = Rational(1, 2);  // X should be 1 under do(X:=1)
    fam.do_x1.cells[{1, 1}] = Rational(1, 2);
    FeasibilityReport rep = check_feasible_2ve(fam);
    REQUIRE_FALSE(rep.feasible);
    CHECK(rep.violations.front().find("not 1") != std::string::npos);
}

TEST_CASE("feasibility rejects dominated interventional cells") {
    TwoVarFamily fam = fixtures::family_of(fixtures::xy_uniform());
    // force P(Y=1 | do(X:=1)) = 1/4 below the observational joint 1/4? use 1/8
    fam.do_x1.cells.clear();
    fam.do_x1.cells[{1, 1}] = Rational(1, 8);
    fam.do_x1.cells[{1, 0}] = Rational(7, 8);
    FeasibilityReport rep = check_feasible_2ve(fam);
    REQUIRE_FALSE(rep.feasible);
    CHECK(rep.violations.front().find("below the observational joint") != std::string::npos);
}

TEST_CASE("model projections are always feasible") {
    oracle::Rng rng(5003);
    for (int trial = 0; trial < 25; ++trial) {
        ScmModel m = oracle::random_model(rng, 2 + trial % 2);
        CHECK(check_feasible_2ve(fixtures::family_of(m)).feasible);
    }
}

TEST_CASE("the y-good fixture has four margins of one half") {
    GoodnessReport rep = check_y_good(fixtures::family_of(fixtures::y_good_pair()));
    CHECK(rep.feasible);
    CHECK(rep.good);
    for (const auto& m : rep.margins) CHECK(m == Rational(1, 2));
    CHECK(rep.binding.empty());
}

TEST_CASE("deterministic families are never y-good") {
    GoodnessReport rep = check_y_good(fixtures::family_of(fixtures::deterministic_chain()));
    CHECK(rep.feasible);
    CHECK_FALSE(rep.good);
    CHECK_FALSE(rep.binding.empty());
}

TEST_CASE("a certain X observation binds every margin") {
    // x' never occurs, so all four quantities collapse to zero
    GoodnessReport rep = check_y_good(fixtures::family_of(fixtures::deterministic_chain()));
    CHECK(rep.binding == std::vector<int>{0, 1, 2, 3});
}

TEST_CASE("not good exactly when a margin binds") {
    oracle::Rng rng(5004);
    for (int trial = 0; trial < 40; ++trial) {
        TwoVarFamily fam = oracle::random_feasible_2ve(rng, 8);
        GoodnessReport rep = check_y_good(fam);
        REQUIRE(rep.feasible);
        CHECK(rep.good == rep.binding.empty());
        if (rep.feasible)
            for (const auto& m : rep.margins) CHECK(m >= 0);
    }
}

TEST_CASE("swapped roles evaluate the mirrored margins") {
    GoodnessReport rep = check_y_good(fixtures::family_of(fixtures::y_good_pair()), true);
    // with x and x' reversed, the fixture's observational X = 0 side is "x"
    CHECK_FALSE(rep.good);
}

TEST_CASE("realizing the y-good fixture family round-trips") {
    TwoVarFamily fam = fixtures::family_of(fixtures::y_good_pair());
    StandardFormModel sf = realize_2ve(fam);
    TwoVarFamily back = project_2ve(
        std_family(sf, {kEmpty, kDoX0, kDoX1}), "X", "Y");
    CHECK(back == fam);
}

TEST_CASE("realizing the uniform-pair fixture family round-trips") {
    TwoVarFamily fam = fixtures::family_of(fixtures::xy_uniform());
    StandardFormModel sf = realize_2ve(fam);
    CHECK(sf.atoms.size() <= 8);
    TwoVarFamily back = project_2ve(std_family(sf, {kEmpty, kDoX0, kDoX1}), "X", "Y");
    CHECK(back == fam);
}

TEST_CASE("realize rejects infeasible families with the violated constraint") {
    TwoVarFamily fam = fixtures::family_of(fixtures::xy_uniform());
    fam.do_x1.cells.clear();
    fam.do_x1.cells[{1, 1}] = Rational(1, 8);
    fam.do_x1.cells[{1, 0}] = Rational(7, 8);
    try {
        realize_2ve(fam);
        FAIL("expected rejection");
    } catch (const Error& e) {
        CHECK(e.code == ErrCode::Infeasible);
        CHECK(std::string(e.what()).find("below the observational joint") != std::string::npos);
    }
}

TEST_CASE("realize then project is the identity on random feasible families") {
    oracle::Rng rng(5005);
    for (int trial = 0; trial < 40; ++trial) {
        TwoVarFamily fam = oracle::random_feasible_2ve(rng);
        StandardFormModel sf = realize_2ve(fam);
        TwoVarFamily back = project_2ve(std_family(sf, {kEmpty, kDoX0, kDoX1}), "X", "Y");
        CHECK(back == fam);
    }
}
