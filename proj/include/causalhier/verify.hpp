#ifndef CAUSALHIER_VERIFY_HPP
#define CAUSALHIER_VERIFY_HPP

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "causalhier/hierarchy.hpp"
#include "causalhier/scm.hpp"

namespace causalhier {

/// One subbasic open constraint: the probability of a cylinder event under
/// one intervention exceeds a rational threshold.
struct SubbasicConstraint {
    Intervention intervention;
    std::map<std::string, int> event;
    Rational threshold;
};

/// Positive boolean combination of subbasic constraints.
struct Hypothesis {
    enum class Kind { Leaf, All, Any };
    Kind kind = Kind::Leaf;
    SubbasicConstraint leaf;
    std::vector<Hypothesis> children;

    static Hypothesis constraint(SubbasicConstraint c) {
        Hypothesis h;
        h.leaf = std::move(c);
        return h;
    }
    static Hypothesis all_of(std::vector<Hypothesis> cs) {
        Hypothesis h;
        h.kind = Kind::All;
        h.children = std::move(cs);
        return h;
    }
    static Hypothesis any_of(std::vector<Hypothesis> cs) {
        Hypothesis h;
        h.kind = Kind::Any;
        h.children = std::move(cs);
        return h;
    }
};

inline void collect_leaves(const Hypothesis& h, std::vector<const SubbasicConstraint*>& out) {
    if (h.kind == Hypothesis::Kind::Leaf)
        out.push_back(&h.leaf);
    else
        for (const auto& c : h.children) collect_leaves(c, out);
}

inline void validate_hypothesis(const Hypothesis& h) {
    std::vector<const SubbasicConstraint*> leaves;
    collect_leaves(h, leaves);
    if (leaves.empty()) throw Error(ErrCode::Input, "hypothesis has no constraints");
    for (const auto* c : leaves) {
        if (c->event.empty()) throw Error(ErrCode::Input, "hypothesis constraint with empty event");
        if (c->threshold < 0 || c->threshold > 1)
            throw Error(ErrCode::Input, "hypothesis threshold outside [0, 1]");
    }
}

/// Dyadic upper bound on the Hoeffding margin sqrt(ln(k/eps) / (2n)).
/// Rounding up keeps the type-1 guarantee while making every firing decision
/// an exact rational comparison.
inline Rational hoeffding_margin(const Rational& epsilon, std::size_t k, std::size_t n) {
    if (!(epsilon > 0) || !(epsilon < 1))
        throw Error(ErrCode::Input, "epsilon must lie in (0, 1)");
    long double ratio = static_cast<long double>(k) *
                        static_cast<long double>(denominator(epsilon).convert_to<double>()) /
                        static_cast<long double>(numerator(epsilon).convert_to<double>());
    long double c = sqrtl(logl(ratio) / (2.0L * static_cast<long double>(n)));
    long double scaled = ceill(c * 4294967296.0L) + 1.0L;
    return Rational(BigInt(static_cast<std::uint64_t>(scaled)), BigInt(1) << 32);
}

/// Sample size beyond which a constraint with the given true-value gap fires
/// with probability at least 1 - epsilon.
inline std::size_t power_threshold(const Rational& epsilon, std::size_t k, const Rational& gap) {
    double g = numerator(gap).convert_to<double>() / denominator(gap).convert_to<double>();
    double e = numerator(epsilon).convert_to<double>() / denominator(epsilon).convert_to<double>();
    return static_cast<std::size_t>(std::ceil(2.0 * std::log(static_cast<double>(k) / e) / (g * g)));
}

/// A decision function over n-sample datasets, one dataset per intervention
/// appearing in the hypothesis. A leaf fires when its empirical frequency
/// exceeds threshold + margin; the combination fires per the boolean shape.
/// If the true family violates the hypothesis, the firing probability is at
/// most epsilon (union bound across the k leaves).
struct BuiltTest {
    Hypothesis hypothesis;
    std::size_t n = 0;
    std::size_t leaf_count = 0;
    Rational margin;  // shared: every leaf runs at epsilon / k
    std::vector<Intervention> interventions;  // distinct, in first-appearance order

    bool leaf_fires(const SubbasicConstraint& c, std::size_t count) const {
        return Rational(BigInt(count), BigInt(n)) > c.threshold + margin;
    }
    bool decide_node(const Hypothesis& h, const std::vector<std::size_t>& counts,
                     std::size_t& next) const {
        if (h.kind == Hypothesis::Kind::Leaf) return leaf_fires(h.leaf, counts[next++]);
        bool acc = h.kind == Hypothesis::Kind::All;
        for (const auto& ch : h.children) {
            bool v = decide_node(ch, counts, next);
            acc = h.kind == Hypothesis::Kind::All ? (acc && v) : (acc || v);
        }
        return acc;
    }
    /// counts holds one event count per leaf, in leaf order.
    bool decide(const std::vector<std::size_t>& counts) const {
        std::size_t next = 0;
        return decide_node(hypothesis, counts, next);
    }
    /// Decision over raw per-intervention datasets of full valuations.
    bool decide_samples(const std::vector<std::string>& scope,
                        const std::map<std::string, std::vector<Valuation>>& datasets) const;
};

inline BuiltTest make_test(const Hypothesis& h, const Rational& epsilon, std::size_t n) {
    validate_hypothesis(h);
    if (n < 1) throw Error(ErrCode::Input, "sample size must be at least 1");
    BuiltTest t;
    t.hypothesis = h;
    t.n = n;
    std::vector<const SubbasicConstraint*> leaves;
    collect_leaves(h, leaves);
    t.leaf_count = leaves.size();
    t.margin = hoeffding_margin(epsilon, t.leaf_count, n);
    for (const auto* c : leaves) {
        bool seen = false;
        for (const auto& iv : t.interventions) seen = seen || iv == c->intervention;
        if (!seen) t.interventions.push_back(c->intervention);
    }
    return t;
}

inline bool BuiltTest::decide_samples(
    const std::vector<std::string>& scope,
    const std::map<std::string, std::vector<Valuation>>& datasets) const {
    std::vector<const SubbasicConstraint*> leaves;
    collect_leaves(hypothesis, leaves);
    std::vector<std::size_t> counts;
    for (const auto* c : leaves) {
        auto it = datasets.find(intervention_key(c->intervention, scope));
        if (it == datasets.end() || it->second.size() != n)
            throw Error(ErrCode::Input, "dataset missing or of wrong size for an intervention");
        std::size_t count = 0;
        for (const auto& sample : it->second) {
            bool ok = true;
            for (const auto& [name, want] : c->event) {
                auto vi = std::find(scope.begin(), scope.end(), name);
                if (vi == scope.end() ||
                    sample[static_cast<std::size_t>(vi - scope.begin())] != want) {
                    ok = false;
                    break;
                }
            }
            if (ok) ++count;
        }
        counts.push_back(count);
    }
    return decide(counts);
}

/// Exact firing probability of a single-constraint test when the true event
/// probability is `value`: the binomial tail above the decision threshold.
inline Rational exact_type1_bound(const SubbasicConstraint& c, const Rational& epsilon,
                                  std::size_t n, const Rational& value) {
    if (value < 0 || value > 1)
        throw Error(ErrCode::Input, "true value must lie in [0, 1]");
    Rational cut = c.threshold + hoeffding_margin(epsilon, 1, n);
    // smallest count with count/n > cut
    BigInt m_star = numerator(cut) * n / denominator(cut) + 1;
    if (m_star > n) return Rational(0);
    if (m_star < 0) m_star = 0;
    Rational p = value, q = 1 - value;
    Rational tail = 0;
    BigInt binom = 1;  // C(n, m) built incrementally
    Rational pm = 1;   // p^m
    std::vector<Rational> qpow(n + 1);
    qpow[0] = 1;
    for (std::size_t i = 1; i <= n; ++i) qpow[i] = qpow[i - 1] * q;
    for (std::size_t m = 0; m <= n; ++m) {
        if (BigInt(m) >= m_star) tail += Rational(binom) * pm * qpow[n - m];
        binom = binom * BigInt(n - m) / BigInt(m + 1);
        pm *= p;
    }
    return tail;
}

namespace detail {

struct SplitMix64 {
    std::uint64_t state;
    std::uint64_t next() {
        state += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
};

/// Substream seed derived from (seed, trial, intervention index) so serial
/// and parallel execution agree.
inline std::uint64_t substream(std::uint64_t seed, std::uint64_t trial, std::uint64_t alpha) {
    SplitMix64 g{seed ^ (0xC2B2AE3D27D4EB4Full * (trial + 1)) ^
                 (0x165667B19E3779F9ull * (alpha + 1))};
    return g.next();
}

/// Cumulative ladder for exact inversion of a finite distribution at 64-bit
/// granularity: a draw r lands in cell i when r/2^64 < cum_i first holds.
/// The cut ceil(cum_i * 2^64) makes that comparison a native integer one;
/// a cut of 2^64 itself (cum within 2^-64 of 1) accepts every draw.
struct Ladder {
    struct Cut {
        bool everything = false;
        std::uint64_t value = 0;
        bool accepts(std::uint64_t r) const { return everything || r < value; }
    };
    std::vector<Valuation> outcomes;
    std::vector<Cut> cuts;

    explicit Ladder(const DistTable& t) {
        Rational cum = 0;
        for (const auto& [val, p] : t.cells) {
            cum += p;
            outcomes.push_back(val);
            Rational scaled = cum * Rational(BigInt(1) << 64);
            BigInt cut = numerator(scaled) / denominator(scaled);
            if (cut * denominator(scaled) != numerator(scaled)) ++cut;
            if (cut >= (BigInt(1) << 64))
                cuts.push_back({true, 0});
            else
                cuts.push_back({false, cut.convert_to<std::uint64_t>()});
        }
    }
    const Valuation& draw(std::uint64_t r) const {
        for (std::size_t i = 0; i < cuts.size(); ++i)
            if (cuts[i].accepts(r)) return outcomes[i];
        return outcomes.back();
    }
};

}  // namespace detail

struct TestConfig {
    Rational epsilon{1, 20};
    std::vector<std::size_t> sample_sizes;
    std::size_t trials = 400;
    std::uint64_t seed = 0;
};

struct SimRow {
    std::size_t n = 0, trials = 0, rejections = 0;
    double frequency = 0.0;
};

struct SimReport {
    bool truth_satisfies = false;
    Rational epsilon;
    std::uint64_t seed = 0;
    std::vector<SimRow> rows;
};

/// Distinct interventions appearing in the hypothesis, first-appearance order.
inline std::vector<Intervention> hypothesis_interventions(const Hypothesis& h) {
    std::vector<const SubbasicConstraint*> leaves;
    collect_leaves(h, leaves);
    std::vector<Intervention> out;
    for (const auto* c : leaves) {
        bool seen = false;
        for (const auto& iv : out) seen = seen || iv == c->intervention;
        if (!seen) out.push_back(c->intervention);
    }
    return out;
}

inline bool hypothesis_holds(const Hypothesis& h, const InterventionalFamily& fam) {
    if (h.kind == Hypothesis::Kind::Leaf)
        return fam.at(h.leaf.intervention).prob(h.leaf.event) > h.leaf.threshold;
    bool acc = h.kind == Hypothesis::Kind::All;
    for (const auto& c : h.children) {
        bool v = hypothesis_holds(c, fam);
        acc = h.kind == Hypothesis::Kind::All ? (acc && v) : (acc || v);
    }
    return acc;
}

/// Monte-Carlo study of the test sequence on a known model: per sample size,
/// the fraction of independent trials in which the test fires. Deterministic
/// given the seed.
inline SimReport simulate_verification(const ScmModel& model, const Hypothesis& h,
                                       const TestConfig& cfg) {
    ValidationReport v = validate_model(model);
    if (!v.ok()) throw Error(ErrCode::Input, "simulate: invalid model: " + v.problems[0]);
    validate_hypothesis(h);
    std::vector<const SubbasicConstraint*> leaves;
    collect_leaves(h, leaves);

    SimReport rep;
    rep.epsilon = cfg.epsilon;
    rep.seed = cfg.seed;

    std::vector<Intervention> alphas = hypothesis_interventions(h);
    InterventionalFamily truth;
    truth.scope = model.variables;
    for (const auto& iv : alphas) truth.entries.emplace_back(iv, interventional(model, iv));
    rep.truth_satisfies = hypothesis_holds(h, truth);

    std::vector<detail::Ladder> ladders;
    for (const auto& [iv, table] : truth.entries) ladders.emplace_back(table);
    // leaf -> (intervention index, variable indices + wanted values)
    std::vector<std::size_t> leaf_alpha;
    std::vector<std::vector<std::pair<std::size_t, int>>> leaf_events;
    for (const auto* c : leaves) {
        for (std::size_t a = 0; a < alphas.size(); ++a)
            if (alphas[a] == c->intervention) leaf_alpha.push_back(a);
        std::vector<std::pair<std::size_t, int>> ev;
        for (const auto& [name, want] : c->event)
            ev.emplace_back(static_cast<std::size_t>(model.var_index(name)), want);
        leaf_events.push_back(std::move(ev));
    }

    for (std::size_t n : cfg.sample_sizes) {
        BuiltTest test = make_test(h, cfg.epsilon, n);
        SimRow row;
        row.n = n;
        row.trials = cfg.trials;
        for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
            std::vector<std::size_t> counts(leaves.size(), 0);
            for (std::size_t a = 0; a < alphas.size(); ++a) {
                detail::SplitMix64 rng{detail::substream(cfg.seed, trial, a)};
                for (std::size_t s = 0; s < n; ++s) {
                    const Valuation& sample = ladders[a].draw(rng.next());
                    for (std::size_t l = 0; l < leaves.size(); ++l) {
                        if (leaf_alpha[l] != a) continue;
                        bool ok = true;
                        for (const auto& [vi, want] : leaf_events[l])
                            if (sample[vi] != want) { ok = false; break; }
                        if (ok) ++counts[l];
                    }
                }
            }
            if (test.decide(counts)) ++row.rejections;
        }
        row.frequency = static_cast<double>(row.rejections) / static_cast<double>(row.trials);
        rep.rows.push_back(row);
    }
    return rep;
}

}  // namespace causalhier

#endif
