#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "slicemkt/market.hpp"
#include "slicemkt/queueing.hpp"
#include "slicemkt/stage1.hpp"

namespace slicemkt {

/// Money interval; empty when hi < lo.
struct Interval {
    double lo = 0.0;
    double hi = -1.0;

    bool empty() const { return !(lo <= hi); }
    double width() const { return empty() ? 0.0 : hi - lo; }
};

/// Lump-sum transfers that make the strategic agreement acceptable to both
/// sides: the NO needs m >= pi0 - pi1 to acquiesce, the VO can pay at most
/// pi2. Nonempty exactly when pi1 + pi2 > pi0 (up to the margin).
inline Interval lump_sum_range(double pi0, double pi1, double pi2) {
    return Interval{std::max(0.0, pi0 - pi1), pi2};
}

struct FeasibilityReport {
    double pi0_star = 0.0;
    double pi_m_star = 0.0;
    double pi1_star = 0.0;
    double pi2_star = 0.0;
    /// Headline flags: the strict, lump-sum-enabled conditions
    /// pi_m > pi0 and pi1 + pi2 > pi0, evaluated with `margin`.
    bool monopolistic_feasible = false;
    bool strategic_feasible = false;
    /// Weak acquiescence variants (>=, no transfer needed).
    bool monopolistic_acquiesce = false;
    bool strategic_acquiesce = false;
    bool vo_participates = false; ///< pi2 >= 0
    Interval lump_sum;            ///< strategic lump-sum window
    double n_total_monopolistic = 0.0;
    double n_total_strategic = 0.0;
    /// Numeric margin used for the strict comparisons (1e-6 * pi0).
    double margin = 0.0;
};

/// Solve the three scenarios on identical parameters and evaluate the
/// adoption conditions. Strict comparisons carry a margin of 1e-6 * pi0 so
/// optimizer noise cannot flip flags.
inline FeasibilityReport assess(const QueueConfig& q, const MarketParams& m) {
    q.validate();
    m.validate();
    const EquilibriumResult base = solve_baseline(q, m);
    const EquilibriumResult mono = solve_monopolistic(q, m);
    const EquilibriumResult strat = solve_strategic(q, m);

    FeasibilityReport r;
    r.pi0_star = base.profits.pi0;
    r.pi_m_star = mono.profits.pi_m;
    r.pi1_star = strat.profits.pi1;
    r.pi2_star = strat.profits.pi2;
    r.margin = 1e-6 * std::fabs(r.pi0_star);

    r.monopolistic_feasible = r.pi_m_star > r.pi0_star + r.margin;
    r.strategic_feasible = r.pi1_star + r.pi2_star > r.pi0_star + r.margin;
    r.monopolistic_acquiesce = r.pi_m_star >= r.pi0_star - r.margin;
    r.strategic_acquiesce = r.pi1_star >= r.pi0_star - r.margin;
    r.vo_participates = r.pi2_star >= -r.margin;
    r.lump_sum = lump_sum_range(r.pi0_star, r.pi1_star, r.pi2_star);
    r.n_total_monopolistic = mono.outcome.total();
    r.n_total_strategic = strat.outcome.total();
    return r;
}

struct TotalsComparison {
    double n_mono = 0.0;
    double n_strat = 0.0;
    bool strat_exceeds = false;
};

/// Total subscribers supported by each business model at identical
/// parameters.
inline TotalsComparison compare_total_subscribers(const QueueConfig& q,
                                                  const MarketParams& m) {
    q.validate();
    m.validate();
    const EquilibriumResult mono = solve_monopolistic(q, m);
    const EquilibriumResult strat = solve_strategic(q, m);
    TotalsComparison t;
    t.n_mono = mono.outcome.total();
    t.n_strat = strat.outcome.total();
    t.strat_exceeds = t.n_strat > t.n_mono;
    return t;
}

}  // namespace slicemkt
