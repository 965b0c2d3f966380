// Shared model fixtures used across the suite.
#ifndef CAUSALHIER_TESTS_FIXTURES_HPP
#define CAUSALHIER_TESTS_FIXTURES_HPP

#include "causalhier/causalhier.hpp"

namespace fixtures {

using namespace causalhier;

/// Two uniform binary noises; X copies U1 and Y matches X exactly when
/// U2 = 1. Observationally uniform, PNS = 1/2.
inline ScmModel xy_uniform() {
    ScmModel m;
    m.variables = {"X", "Y"};
    m.parents = {{}, {0}};
    m.exo_names = {"U1", "U2"};
    m.exo_ranges = {2, 2};
    m.exo_parents = {{0}, {1}};
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) m.units.push_back({{a, b}, Rational(1, 4)});
    m.mechanisms.resize(2);
    m.mechanisms[0].values = {0, 1};        // X = U1
    m.mechanisms[1].values = {1, 0, 0, 1};  // Y = U2 ? X : 1-X, index (X<<1)|U2
    return m;
}

/// X pinned to 0; Y ignores X and copies the coin: with probability 1/2 the
/// outcome is 1 under every intervention, else 0 under every intervention.
/// Y-good with all four margins 1/2; PNS = 0.
inline ScmModel y_good_pair() {
    ScmModel m;
    m.variables = {"X", "Y"};
    m.parents = {{}, {0}};
    m.exo_names = {"U"};
    m.exo_ranges = {2};
    m.exo_parents = {{}, {0}};
    m.units.push_back({{0}, Rational(1, 2)});
    m.units.push_back({{1}, Rational(1, 2)});
    m.mechanisms.resize(2);
    m.mechanisms[0].values = {0};           // X = 0 (= x')
    m.mechanisms[1].values = {1, 0, 1, 0};  // Y = 1-U, regardless of X
    return m;
}

/// Deterministic two-variable chain: X = 1, Y = X.
inline ScmModel deterministic_chain() {
    ScmModel m;
    m.variables = {"X", "Y"};
    m.parents = {{}, {0}};
    m.exo_names = {"U"};
    m.exo_ranges = {1};
    m.exo_parents = {{}, {}};
    m.units.push_back({{0}, Rational(1)});
    m.mechanisms.resize(2);
    m.mechanisms[0].values = {1};
    m.mechanisms[1].values = {0, 1};  // Y = X
    return m;
}

/// Three-variable chain X -> Z -> Y with noisy links; Y-good by construction
/// (checked in the tests that rely on it).
inline ScmModel noisy_chain3() {
    ScmModel m;
    m.variables = {"X", "Z", "Y"};
    m.parents = {{}, {0}, {1}};
    m.exo_names = {"U1", "U2", "U3"};
    m.exo_ranges = {2, 2, 2};
    m.exo_parents = {{0}, {1}, {2}};
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c) m.units.push_back({{a, b, c}, Rational(1, 8)});
    m.mechanisms.resize(3);
    m.mechanisms[0].values = {0, 1};        // X = U1
    m.mechanisms[1].values = {0, 1, 1, 1};  // Z = X or U2, index (X<<1)|U2
    m.mechanisms[2].values = {0, 1, 1, 0};  // Y = Z xor U3
    return m;
}

inline TwoVarFamily family_of(const ScmModel& m, const std::string& x = "X",
                              const std::string& y = "Y") {
    return project_2ve(
        interventional_family(
            m, {Intervention{}, Intervention{{{x, 0}}}, Intervention{{{x, 1}}}}),
        x, y);
}

}  // namespace fixtures

#endif
