// Acceptance suite: one integration check per numbered criterion, each
// printing a single [PASS]/[FAIL] line. Usage:
//   acceptance            run all criteria
//   acceptance <n> [...]  run selected criteria
// Exit code = number of failed criteria.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "slicemkt/feasibility.hpp"
#include "slicemkt/market.hpp"
#include "slicemkt/parallel.hpp"
#include "slicemkt/queueing.hpp"
#include "slicemkt/rng.hpp"
#include "slicemkt/simulate.hpp"
#include "slicemkt/stage1.hpp"
#include "slicemkt/wardrop.hpp"

using namespace slicemkt;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

QueueConfig queue(double gamma, double mu = 1.0, double lambda_d = 0.01) {
    QueueConfig q;
    q.mu = mu;
    q.lambda_d = lambda_d;
    q.gamma = gamma;
    return q;
}

MarketParams market(double a1, double a2, double delta = 0.0, double c = 1.0) {
    MarketParams m;
    m.c = c;
    m.alpha1 = a1;
    m.alpha2 = a2;
    m.delta = delta;
    return m;
}

struct StableDraw {
    QueueConfig q;
    Load load;
};

StableDraw draw_stable(detail::Rng& rng) {
    StableDraw d;
    const double mu = 0.5 + 1.5 * rng.next_unit();
    const double rho = 0.05 + 0.90 * rng.next_unit();
    const double gamma = rng.next_unit();
    const double split = rng.next_unit();
    const double users = 2.0 + 498.0 * rng.next_unit();
    d.q = queue(gamma, mu, rho * mu / users);
    d.load = Load{split * users, (1.0 - split) * users};
    return d;
}

// ---- 1. work conservation ------------------------------------------------
Outcome criterion1() {
    detail::Rng rng(1001ULL);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const StableDraw d = draw_stable(rng);
        const Delays t = delay_dps(d.q, d.load);
        const double l1 = d.q.lambda_d * d.load.n1;
        const double l2 = d.q.lambda_d * d.load.n2;
        const double lam = l1 + l2;
        const double rhs = lam / (d.q.mu - lam);
        worst = std::max(worst, std::fabs(l1 * t.t1 + l2 * t.t2 - rhs) / rhs);
    }
    Outcome o;
    o.pass = worst <= 1e-12;
    std::ostringstream os;
    os << "worst relative conservation error " << worst << " over 10000 stable draws";
    o.detail = os.str();
    return o;
}

// ---- 2. priority limits ----------------------------------------------------
Outcome criterion2() {
    detail::Rng rng(2002ULL);
    double worst0 = 0.0, worst_half = 0.0;
    for (int i = 0; i < 10000; ++i) {
        StableDraw d = draw_stable(rng);
        const double l1 = d.q.lambda_d * d.load.n1;
        const double l2 = d.q.lambda_d * d.load.n2;
        d.q.gamma = 0.0;
        worst0 = std::max(worst0,
                          std::fabs(delay_dps(d.q, d.load).t1 - 1.0 / (d.q.mu - l1)));
        d.q.gamma = 0.5;
        const Delays t = delay_dps(d.q, d.load);
        const double ps = 1.0 / (d.q.mu - l1 - l2);
        worst_half = std::max({worst_half, std::fabs(t.t1 - t.t2), std::fabs(t.t1 - ps),
                               std::fabs(t.t2 - ps)});
    }
    Outcome o;
    o.pass = worst0 <= 1e-12 && worst_half <= 1e-12;
    std::ostringstream os;
    os << "max |T1 - 1/(mu-l1)| at gamma=0: " << worst0
       << "; max deviation at gamma=1/2: " << worst_half;
    o.detail = os.str();
    return o;
}

// ---- 3. simulator oracle ---------------------------------------------------
Outcome criterion3() {
    const double gammas[] = {0.0, 0.1, 0.5, 0.9};
    int ci_hits = 0;
    double worst_rel = 0.0;
    bool rel_ok = true;
    std::ostringstream os;
    for (double g : gammas) {
        SimConfig cfg;
        cfg.queue = queue(g, 1.0, 0.3);
        cfg.load = Load{1.0, 1.0};
        cfg.measured_departures = 100000;
        cfg.warmup_departures = 10000;
        cfg.replications = 10;
        cfg.seed = 20260809ULL;
        const ValidationReport rep = validate_closed_form(cfg, 0.02);
        const bool in_ci = rep.t1.within_ci && rep.t2.within_ci;
        ci_hits += in_ci ? 1 : 0;
        worst_rel = std::max({worst_rel, rep.t1.rel_err, rep.t2.rel_err});
        rel_ok = rel_ok && rep.t1.rel_err <= 0.02 && rep.t2.rel_err <= 0.02;
        os << " g=" << g << " relT1=" << rep.t1.rel_err << " relT2=" << rep.t2.rel_err
           << (in_ci ? " [ci]" : " [out]");
    }
    Outcome o;
    o.pass = rel_ok && ci_hits >= 3;
    o.detail = "per-class rel err <= 2%, CI hits " + std::to_string(ci_hits) + "/4:" + os.str();
    return o;
}

// ---- 4. closed form vs fixed-point oracle ----------------------------------
Outcome criterion4() {
    detail::Rng rng(4004ULL);
    double worst_n = 0.0, worst_u = 0.0;
    int label_mismatch = 0;
    for (int i = 0; i < 1000; ++i) {
        double gamma = 0.05 + 0.85 * rng.next_unit();
        if (gamma > 0.45) gamma += 0.1;
        const double mu = 0.5 + 1.5 * rng.next_unit();
        const double users = 20.0 + 480.0 * rng.next_unit();
        const QueueConfig q = queue(gamma, mu, mu / users);
        const MarketParams m = market(0.2 + 0.8 * rng.next_unit(),
                                      0.2 + 0.8 * rng.next_unit(), 0.0,
                                      0.5 + 1.5 * rng.next_unit());
        const PricePair p{
            (0.05 + 1.20 * rng.next_unit()) * price_cap(m.c, mu, m.alpha1),
            (0.05 + 1.20 * rng.next_unit()) * price_cap(m.c, mu, m.alpha2)};
        const WardropOutcome closed = wardrop_duopoly(q, m, p);
        const WardropOutcome fixed = wardrop_oracle(q, m, p);
        if (closed.which != fixed.which) ++label_mismatch;
        const double scale = std::max({1.0, closed.n1, closed.n2, fixed.n1, fixed.n2});
        worst_n = std::max({worst_n, std::fabs(closed.n1 - fixed.n1) / scale,
                            std::fabs(closed.n2 - fixed.n2) / scale});
        if (closed.which == WardropCase::I)
            worst_u = std::max({worst_u, std::fabs(closed.u1), std::fabs(closed.u2)});
    }
    Outcome o;
    o.pass = label_mismatch == 0 && worst_n <= 1e-6 && worst_u <= 1e-9;
    std::ostringstream os;
    os << "1000 random points: label mismatches " << label_mismatch
       << ", worst relative count gap " << worst_n << ", worst |U| at coexistence "
       << worst_u;
    o.detail = os.str();
    return o;
}

// ---- 5. worked coexistence point -------------------------------------------
Outcome criterion5() {
    const QueueConfig q = queue(0.1);
    const MarketParams m = market(0.8, 0.8);
    const WardropOutcome w = wardrop_duopoly(q, m, PricePair{0.5, 0.25});
    const Delays d = delay_dps(q, Load{w.n1, w.n2});
    Outcome o;
    o.pass = w.which == WardropCase::I && std::fabs(w.n1 - 53.06) <= 1e-2 &&
             std::fabs(w.n2 - 14.49) <= 1e-2 && std::fabs(d.t1 - 2.3784) <= 1e-3 &&
             std::fabs(d.t2 - 5.6569) <= 1e-3 && std::fabs(w.u1) <= 1e-9 &&
             std::fabs(w.u2) <= 1e-9;
    std::ostringstream os;
    os << "case " << to_string(w.which) << ", n1=" << w.n1 << ", n2=" << w.n2
       << ", T1=" << d.t1 << ", T2=" << d.t2 << ", |U1|=" << std::fabs(w.u1)
       << ", |U2|=" << std::fabs(w.u2);
    o.detail = os.str();
    return o;
}

// ---- 6. baseline stage I ------------------------------------------------
Outcome criterion6() {
    double worst_dp = 0.0, worst_dpi = 0.0;
    for (double a : {0.2, 0.4, 0.6, 0.8, 1.0}) {
        const EquilibriumResult r = solve_baseline(queue(0.5), market(a, 0.6));
        worst_dp = std::max(worst_dp, r.diag.cross_check_dprice);
        worst_dpi = std::max(worst_dpi, r.diag.cross_check_dprofit / r.profits.pi0);
    }
    Outcome o;
    o.pass = worst_dp <= 1e-6 && worst_dpi <= 1e-8;
    std::ostringstream os;
    os << "numeric vs closed form over alpha1 in {0.2..1.0}: max |dp| = " << worst_dp
       << ", max |dPi|/Pi = " << worst_dpi;
    o.detail = os.str();
    return o;
}

// ---- 7. equal pricing at the symmetric point ---------------------------
Outcome criterion7() {
    const QueueConfig q = queue(0.5);
    const EquilibriumResult mono = solve_monopolistic(q, market(0.6, 0.6));
    const EquilibriumResult strat = solve_strategic(q, market(0.6, 0.6, 0.15));
    const double dm = std::fabs(mono.p1 - *mono.p2);
    const double ds = std::fabs(strat.p1 - *strat.p2);
    Outcome o;
    o.pass = dm <= 1e-4 && ds <= 1e-4;
    std::ostringstream os;
    os << "monopolistic |p1-p2| = " << dm << ", strategic |p1-p2| = " << ds;
    o.detail = os.str();
    return o;
}

// ---- 8. figure-shape reproduction ---------------------------------------
Outcome criterion8() {
    std::vector<double> gammas;
    for (int i = 0; i <= 50; ++i) gammas.push_back(i / 50.0);
    Outcome o;
    std::ostringstream os;

    // (a)+(c): monopolistic totals and profits over gamma for equal alphas.
    for (double a : {0.4, 0.6, 0.8}) {
        std::vector<double> totals(gammas.size()), profits(gammas.size());
        detail::parallel_for(gammas.size(), 0, [&](std::size_t i) {
            const EquilibriumResult r = solve_monopolistic(queue(gammas[i]), market(a, a));
            totals[i] = r.outcome.total();
            profits[i] = r.profits.pi_m;
        });
        const double edge = std::max(totals.front(), totals.back());
        double interior = 0.0;
        for (std::size_t i = 1; i + 1 < totals.size(); ++i)
            interior = std::max(interior, totals[i]);
        if (edge + 1e-6 < interior) {
            o.pass = false;
            os << " [a] alpha=" << a << ": interior total " << interior
               << " beats edge total " << edge << ";";
        }
        const std::size_t argmin =
            static_cast<std::size_t>(std::min_element(profits.begin(), profits.end()) -
                                     profits.begin());
        if (std::fabs(gammas[argmin] - 0.5) > 0.06) {
            o.pass = false;
            os << " [c] alpha=" << a << ": profit minimized at gamma=" << gammas[argmin]
               << ";";
        }
    }

    // (b): strategic total peaks at gamma = 1/2 for alpha = 0.6, delta = 0.15.
    std::vector<double> stotals(gammas.size());
    detail::parallel_for(gammas.size(), 0, [&](std::size_t i) {
        stotals[i] = solve_strategic(queue(gammas[i]), market(0.6, 0.6, 0.15))
                         .outcome.total();
    });
    const double at_half = stotals[25];
    for (std::size_t i = 0; i < stotals.size(); ++i) {
        if (stotals[i] > at_half + 1e-6) {
            o.pass = false;
            os << " [b] total at gamma=" << gammas[i] << " (" << stotals[i]
               << ") exceeds gamma=1/2 (" << at_half << ");";
            break;
        }
    }
    o.detail = o.pass ? "all three qualitative shapes hold on the gamma grid"
                      : os.str();
    return o;
}

// ---- 9. feasibility claims ------------------------------------------------
Outcome criterion9() {
    const std::vector<double> alpha2s{0.4, 0.6, 0.8};
    const std::vector<double> deltas{0.05, 0.10, 0.15, 0.20};
    std::vector<double> gammas;
    for (int i = 0; i <= 50; ++i) gammas.push_back(i / 50.0);

    const double pi0 = solve_baseline(queue(0.5), market(0.6, 0.6)).profits.pi0;
    const double margin = 1e-6 * pi0;

    Outcome o;
    std::ostringstream os;

    // Monopolistic profits per (alpha2, gamma). The strict comparison
    // Pi_m > Pi_0 is checked as stated. Note: it cannot hold everywhere in
    // this model. The monopolist can always replicate the baseline (price the
    // VO base out), so Pi_m* >= Pi_0* structurally; and wherever the optimum
    // IS that corner the two coincide exactly. That happens on a whole
    // mid-gamma band when alpha2 > alpha1 (the sensitive VO base is worth
    // nothing to the monopolist; confirmed by an independent dense-grid
    // search) and at the symmetric center gamma=1/2, alpha2=alpha1, where
    // Pi_m(p1,p2) = f(min(p1,p2)) <= Pi_0* identically. Exact ties are
    // reported separately from genuine below-baseline failures, which would
    // indicate an optimizer bug.
    std::vector<double> pim(alpha2s.size() * gammas.size());
    detail::parallel_for(pim.size(), 0, [&](std::size_t k) {
        const double a2 = alpha2s[k / gammas.size()];
        const double g = gammas[k % gammas.size()];
        pim[k] = solve_monopolistic(queue(g), market(0.6, a2)).profits.pi_m;
    });
    int strict_ties = 0;
    for (std::size_t k = 0; k < pim.size(); ++k) {
        if (pim[k] > pi0 + margin) continue;
        o.pass = false;
        if (std::fabs(pim[k] - pi0) <= margin) {
            ++strict_ties;
        } else {
            os << " Pi_m BELOW Pi_0 (optimizer bug) at alpha2="
               << alpha2s[k / gammas.size()] << " gamma=" << gammas[k % gammas.size()]
               << " (" << pim[k] << " vs " << pi0 << ");";
        }
    }
    if (strict_ties > 0)
        os << " strict Pi_m > Pi_0 fails at " << strict_ties << "/" << pim.size()
           << " points where the optimum coincides with the baseline corner"
              " (weak feasibility Pi_m >= Pi_0 holds there exactly);";

    // Strategic profits per (alpha2, delta, gamma). A grid point where no
    // pure-strategy profile survives the deviation audit supports no
    // equilibrium profits at all; the strategic model cannot beat the
    // baseline there, so its feasibility indicator is false and the
    // dominance comparison is vacuous. Such points are counted and reported.
    const std::size_t per_delta = gammas.size();
    const std::size_t per_a2 = deltas.size() * per_delta;
    std::vector<double> aggregate(alpha2s.size() * per_a2);
    std::vector<char> no_eq(aggregate.size(), 0);
    detail::parallel_for(aggregate.size(), 0, [&](std::size_t k) {
        const double a2 = alpha2s[k / per_a2];
        const double del = deltas[(k % per_a2) / per_delta];
        const double g = gammas[k % per_delta];
        try {
            const EquilibriumResult r = solve_strategic(queue(g), market(0.6, a2, del));
            aggregate[k] = r.profits.pi1 + r.profits.pi2;
        } catch (const NoEquilibriumFound&) {
            no_eq[k] = 1;
            aggregate[k] = -1e300;
        }
    });
    int no_eq_count = 0;
    std::ostringstream no_eq_where;
    for (std::size_t k = 0; k < aggregate.size(); ++k) {
        if (no_eq[k]) {
            ++no_eq_count;
            no_eq_where << " (alpha2=" << alpha2s[k / per_a2] << ", delta="
                        << deltas[(k % per_a2) / per_delta] << ", gamma="
                        << gammas[k % per_delta] << ")";
        }
    }

    double worst_gap = -1e300;
    for (std::size_t a = 0; a < alpha2s.size(); ++a) {
        for (std::size_t d = 0; d < deltas.size(); ++d) {
            // Dominance against the monopolist at the same (alpha2, gamma).
            for (std::size_t g = 0; g < gammas.size(); ++g) {
                if (no_eq[a * per_a2 + d * per_delta + g]) continue;
                const double agg = aggregate[a * per_a2 + d * per_delta + g];
                const double mono = pim[a * gammas.size() + g];
                worst_gap = std::max(worst_gap, agg - mono);
                if (agg > mono + 1e-6) {
                    o.pass = false;
                    os << " Pi1+Pi2 > Pi_m at alpha2=" << alpha2s[a] << " delta="
                       << deltas[d] << " gamma=" << gammas[g] << ";";
                }
            }
            // The feasible set over gamma must be a prefix plus a suffix.
            int transitions = 0;
            bool prev = aggregate[a * per_a2 + d * per_delta] > pi0 + margin;
            bool went_down = false;
            for (std::size_t g = 1; g < gammas.size(); ++g) {
                const bool cur = aggregate[a * per_a2 + d * per_delta + g] > pi0 + margin;
                if (cur != prev) {
                    ++transitions;
                    if (prev && !cur) went_down = true;
                    if (!prev && cur && !went_down) {
                        // rising before any fall would mean a hole at gamma=0
                        o.pass = false;
                        os << " feasibility set not [0,glow]+[ghigh,1] at alpha2="
                           << alpha2s[a] << " delta=" << deltas[d] << ";";
                    }
                    prev = cur;
                }
            }
            if (transitions > 2) {
                o.pass = false;
                os << " feasibility indicator flaps (" << transitions
                   << " transitions) at alpha2=" << alpha2s[a] << " delta=" << deltas[d]
                   << ";";
            }
        }
    }
    std::ostringstream head;
    head << "612 strategic + 153 monopolistic solves; max Pi1+Pi2 - Pi_m = " << worst_gap;
    if (no_eq_count > 0)
        head << "; " << no_eq_count
             << " point(s) admit no pure-strategy equilibrium (counted "
                "strategic-infeasible):"
             << no_eq_where.str();
    if (!os.str().empty()) head << ";" << os.str();
    o.detail = head.str();
    return o;
}

// ---- 10. Nash verification --------------------------------------------
Outcome criterion10() {
    struct Point {
        double gamma, a2, delta;
    };
    std::vector<Point> pts;
    for (double a2 : {0.4, 0.8})
        for (double del : {0.05, 0.20})
            for (int i = 0; i <= 10; ++i) pts.push_back({i / 10.0, a2, del});

    std::vector<std::string> faults(pts.size());
    detail::parallel_for(pts.size(), 0, [&](std::size_t k) {
        const QueueConfig q = queue(pts[k].gamma);
        const MarketParams m = market(0.6, pts[k].a2, pts[k].delta);
        EquilibriumResult r;
        try {
            r = solve_strategic(q, m);
        } catch (const Error& e) {
            faults[k] = std::string("solver: ") + e.what();
            return;
        }
        // Independent deviation audit on a fixed grid (not the solver's own
        // best-response machinery).
        const double cap1 = price_cap(m.c, q.mu, m.alpha1);
        const double cap2 = price_cap(m.c, q.mu, m.alpha2);
        const auto pi_of = [&](double p1, double p2) {
            const WardropOutcome w = wardrop_duopoly(q, m, PricePair{p1, p2});
            return profit_strategic(w.n1, p1, w.n2, p2, m.delta);
        };
        const StrategicProfits at = pi_of(r.p1, *r.p2);
        double worst = 0.0;
        const auto audit = [&](double p, bool is_p1) {
            const StrategicProfits dev = is_p1 ? pi_of(p, *r.p2) : pi_of(r.p1, p);
            const double gain = is_p1 ? dev.pi1 - at.pi1 : dev.pi2 - at.pi2;
            worst = std::max(worst, gain);
        };
        for (int i = 0; i <= 200; ++i) {
            audit(cap1 * i / 200.0, true);
            audit(cap2 * i / 200.0, false);
        }
        for (int i = 1; i <= 40; ++i) {
            const double off = 1e-2 * i / 40.0;
            audit(std::clamp(r.p1 + off * cap1, 0.0, cap1), true);
            audit(std::clamp(r.p1 - off * cap1, 0.0, cap1), true);
            audit(std::clamp(*r.p2 + off * cap2, 0.0, cap2), false);
            audit(std::clamp(*r.p2 - off * cap2, 0.0, cap2), false);
        }
        if (worst > 1e-6) {
            std::ostringstream fs;
            fs << "deviation gain " << worst << " at gamma=" << pts[k].gamma
               << " alpha2=" << pts[k].a2 << " delta=" << pts[k].delta;
            faults[k] = fs.str();
        }
    });
    Outcome o;
    std::ostringstream os;
    int bad = 0;
    for (const std::string& f : faults) {
        if (!f.empty()) {
            ++bad;
            if (bad <= 4) os << " " << f << ";";
        }
    }
    o.pass = bad == 0;
    o.detail = o.pass ? "44 strategic equilibria audited, no unilateral gain > 1e-6"
                      : os.str();
    return o;
}

const std::map<int, std::pair<const char*, std::function<Outcome()>>>& registry() {
    static const std::map<int, std::pair<const char*, std::function<Outcome()>>> reg{
        {1, {"work conservation across random stable loads", criterion1}},
        {2, {"strict-priority and symmetric delay limits", criterion2}},
        {3, {"simulator agrees with the closed forms", criterion3}},
        {4, {"closed-form equilibrium matches the fixed-point oracle", criterion4}},
        {5, {"worked coexistence point", criterion5}},
        {6, {"baseline optimum reproduced numerically", criterion6}},
        {7, {"equal pricing at the symmetric slice split", criterion7}},
        {8, {"equilibrium shapes across the gamma grid", criterion8}},
        {9, {"business-model feasibility conditions", criterion9}},
        {10, {"unilateral-deviation audit of strategic equilibria", criterion10}},
    };
    return reg;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> wanted;
    for (int i = 1; i < argc; ++i) {
        if (std::string(argv[i]) == "all") continue;
        wanted.push_back(std::atoi(argv[i]));
    }
    if (wanted.empty())
        for (const auto& [num, entry] : registry()) wanted.push_back(num);

    int failures = 0;
    for (int num : wanted) {
        const auto it = registry().find(num);
        if (it == registry().end()) {
            std::printf("[FAIL] criterion %d: unknown criterion\n", num);
            ++failures;
            continue;
        }
        Outcome o;
        try {
            o = it->second.second();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        std::printf("[%s] criterion %d: %s (%s)\n", o.pass ? "PASS" : "FAIL", num,
                    it->second.first, o.detail.c_str());
        std::fflush(stdout);
        if (!o.pass) ++failures;
    }
    return failures;
}
