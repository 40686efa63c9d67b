#pragma once

#include <cstdint>
#include <exception>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "slicemkt/csv.hpp"
#include "slicemkt/errors.hpp"
#include "slicemkt/feasibility.hpp"
#include "slicemkt/market.hpp"
#include "slicemkt/parallel.hpp"
#include "slicemkt/queueing.hpp"
#include "slicemkt/simulate.hpp"
#include "slicemkt/stage1.hpp"
#include "slicemkt/wardrop.hpp"

namespace slicemkt {

/// Parameter defaults shared by every batch run: c = 1 (price normalization),
/// mu = 1 packet/s, lambda_d = 0.01 packet/s (per-user rate two orders of
/// magnitude below capacity, so the fluid user model is justified).
inline std::pair<QueueConfig, MarketParams> defaults() {
    QueueConfig q;
    q.mu = 1.0;
    q.lambda_d = 0.01;
    q.gamma = 0.5;
    MarketParams m;
    m.c = 1.0;
    m.alpha1 = 0.6;
    m.alpha2 = 0.6;
    m.delta = 0.15;
    return {q, m};
}

enum class SweepKind { baseline, monopolistic, strategic, feasibility, regionmap, sim };

inline const char* to_string(SweepKind k) {
    switch (k) {
        case SweepKind::baseline: return "baseline";
        case SweepKind::monopolistic: return "monopolistic";
        case SweepKind::strategic: return "strategic";
        case SweepKind::feasibility: return "feasibility";
        case SweepKind::regionmap: return "regionmap";
        case SweepKind::sim: return "sim";
    }
    return "?";
}

struct SweepSpec {
    SweepKind kind = SweepKind::monopolistic;
    QueueConfig queue;   ///< mu, lambda_d fixed; gamma comes from `gammas`
    MarketParams market; ///< c fixed; alpha1/alpha2/delta come from the axes
    std::vector<double> alpha1s{0.6}; ///< swept by the baseline scenario only
    std::vector<double> gammas;
    std::vector<double> alpha2s;
    std::vector<double> deltas;
    std::vector<double> p1_grid; ///< regionmap
    std::vector<double> p2_grid;
    // sim scenario
    Load load;
    std::uint64_t departures = 100000;
    std::uint64_t warmup = 0; ///< 0 = default to 10% of `departures`
    int replications = 10;
    double sim_tol_rel = 0.02;
    std::uint64_t seed = 1;
    int threads = 0;
};

struct SweepOutcome {
    int rows = 0;
    int failures = 0;
    bool sim_pass = true; ///< sim scenario only
};

namespace detail {

inline std::string status_token(const std::exception_ptr& ep) {
    if (!ep) return "ok";
    try {
        std::rethrow_exception(ep);
    } catch (const NoEquilibriumFound&) {
        return "no_equilibrium";
    } catch (const UnstableLoad&) {
        return "unstable";
    } catch (const OptimizerFailure&) {
        return "solver_failure";
    } catch (const NoConvergence&) {
        return "solver_failure";
    } catch (const InvalidParams&) {
        return "invalid";
    } catch (const InvalidConfig&) {
        return "invalid";
    } catch (const std::exception&) {
        return "solver_failure";
    }
}

template <class Fn>
SweepOutcome emit_points(std::size_t n, int threads, std::ostream& os, Fn&& render) {
    std::vector<std::string> rows(n);
    std::vector<char> failed(n, 0);
    parallel_for(n, threads, [&](std::size_t i) {
        std::ostringstream line;
        failed[i] = render(i, line) ? 0 : 1;
        rows[i] = line.str();
    });
    SweepOutcome out;
    for (std::size_t i = 0; i < n; ++i) {
        os << rows[i];
        ++out.rows;
        out.failures += failed[i];
    }
    return out;
}

}  // namespace detail

/// Baseline sweep over alpha1. Header:
/// c,mu,lambda_d,alpha1,p1_star,n1_star,pi0_star,status
inline SweepOutcome sweep_baseline(const SweepSpec& spec, std::ostream& os) {
    os << "c,mu,lambda_d,alpha1,p1_star,n1_star,pi0_star,status\n";
    const std::vector<double>& axis = spec.alpha1s;
    return detail::emit_points(axis.size(), spec.threads, os, [&](std::size_t i, std::ostream& line) {
        MarketParams m = spec.market;
        m.alpha1 = axis[i];
        csv::Row row(line);
        row.field(m.c).field(spec.queue.mu).field(spec.queue.lambda_d).field(m.alpha1);
        try {
            const EquilibriumResult r = solve_baseline(spec.queue, m);
            row.field(r.p1).field(r.outcome.n1).field(r.profits.pi0).field("ok");
            row.end();
            return true;
        } catch (...) {
            const double nan = std::numeric_limits<double>::quiet_NaN();
            row.field(nan).field(nan).field(nan).field(
                detail::status_token(std::current_exception()));
            row.end();
            return false;
        }
    });
}

/// Monopolistic sweep over (alpha2 outer, gamma inner). Header:
/// c,mu,lambda_d,alpha1,gamma,alpha2,p1_star,p2_star,n1_star,n2_star,case,pi_m_star,status
inline SweepOutcome sweep_monopolistic(const SweepSpec& spec, std::ostream& os) {
    os << "c,mu,lambda_d,alpha1,gamma,alpha2,p1_star,p2_star,n1_star,n2_star,case,"
          "pi_m_star,status\n";
    const std::size_t n = spec.alpha2s.size() * spec.gammas.size();
    return detail::emit_points(n, spec.threads, os, [&](std::size_t i, std::ostream& line) {
        const double alpha2 = spec.alpha2s[i / spec.gammas.size()];
        const double gamma = spec.gammas[i % spec.gammas.size()];
        QueueConfig q = spec.queue;
        q.gamma = gamma;
        MarketParams m = spec.market;
        m.alpha1 = spec.alpha1s.front();
        m.alpha2 = alpha2;
        csv::Row row(line);
        row.field(m.c).field(q.mu).field(q.lambda_d).field(m.alpha1).field(gamma).field(alpha2);
        try {
            const EquilibriumResult r = solve_monopolistic(q, m);
            row.field(r.p1)
                .field(*r.p2)
                .field(r.outcome.n1)
                .field(r.outcome.n2)
                .field(to_string(r.outcome.which))
                .field(r.profits.pi_m)
                .field("ok");
            row.end();
            return true;
        } catch (...) {
            const double nan = std::numeric_limits<double>::quiet_NaN();
            row.field(nan).field(nan).field(nan).field(nan).field("IV").field(nan).field(
                detail::status_token(std::current_exception()));
            row.end();
            return false;
        }
    });
}

/// Strategic sweep over (alpha2, delta, gamma). Header:
/// c,mu,lambda_d,alpha1,gamma,alpha2,p1_star,p2_star,n1_star,n2_star,case,
/// delta,pi1_star,pi2_star,converged,pset_lo1,pset_hi1,pset_lo2,pset_hi2,status
inline SweepOutcome sweep_strategic(const SweepSpec& spec, std::ostream& os) {
    os << "c,mu,lambda_d,alpha1,gamma,alpha2,p1_star,p2_star,n1_star,n2_star,case,delta,"
          "pi1_star,pi2_star,converged,pset_lo1,pset_hi1,pset_lo2,pset_hi2,status\n";
    const std::size_t per_a2 = spec.deltas.size() * spec.gammas.size();
    const std::size_t n = spec.alpha2s.size() * per_a2;
    return detail::emit_points(n, spec.threads, os, [&](std::size_t i, std::ostream& line) {
        const double alpha2 = spec.alpha2s[i / per_a2];
        const double delta = spec.deltas[(i % per_a2) / spec.gammas.size()];
        const double gamma = spec.gammas[i % spec.gammas.size()];
        QueueConfig q = spec.queue;
        q.gamma = gamma;
        MarketParams m = spec.market;
        m.alpha1 = spec.alpha1s.front();
        m.alpha2 = alpha2;
        m.delta = delta;
        csv::Row row(line);
        row.field(m.c).field(q.mu).field(q.lambda_d).field(m.alpha1).field(gamma).field(alpha2);
        try {
            const EquilibriumResult r = solve_strategic(q, m);
            row.field(r.p1)
                .field(*r.p2)
                .field(r.outcome.n1)
                .field(r.outcome.n2)
                .field(to_string(r.outcome.which))
                .field(delta)
                .field(r.profits.pi1)
                .field(r.profits.pi2)
                .field(r.diag.converged)
                .field(r.diag.pset_lo1)
                .field(r.diag.pset_hi1)
                .field(r.diag.pset_lo2)
                .field(r.diag.pset_hi2)
                .field("ok");
            row.end();
            return true;
        } catch (...) {
            const double nan = std::numeric_limits<double>::quiet_NaN();
            row.field(nan).field(nan).field(nan).field(nan).field("IV").field(delta);
            row.field(nan).field(nan).field(false);
            for (int k = 0; k < 4; ++k) row.field(nan);
            row.field(detail::status_token(std::current_exception()));
            row.end();
            return false;
        }
    });
}

/// Feasibility sweep over (alpha2, delta, gamma). Header:
/// c,mu,lambda_d,alpha1,gamma,alpha2,delta,pi0_star,pi_m_star,pi1_star,pi2_star,
/// monopolistic_feasible,strategic_feasible,lump_lo,lump_hi,
/// n_total_monopolistic,n_total_strategic,strat_exceeds,status
inline SweepOutcome sweep_feasibility(const SweepSpec& spec, std::ostream& os) {
    os << "c,mu,lambda_d,alpha1,gamma,alpha2,delta,pi0_star,pi_m_star,pi1_star,pi2_star,"
          "monopolistic_feasible,strategic_feasible,lump_lo,lump_hi,"
          "n_total_monopolistic,n_total_strategic,strat_exceeds,status\n";
    const std::size_t per_a2 = spec.deltas.size() * spec.gammas.size();
    const std::size_t n = spec.alpha2s.size() * per_a2;
    return detail::emit_points(n, spec.threads, os, [&](std::size_t i, std::ostream& line) {
        const double alpha2 = spec.alpha2s[i / per_a2];
        const double delta = spec.deltas[(i % per_a2) / spec.gammas.size()];
        const double gamma = spec.gammas[i % spec.gammas.size()];
        QueueConfig q = spec.queue;
        q.gamma = gamma;
        MarketParams m = spec.market;
        m.alpha1 = spec.alpha1s.front();
        m.alpha2 = alpha2;
        m.delta = delta;
        csv::Row row(line);
        row.field(m.c).field(q.mu).field(q.lambda_d).field(m.alpha1).field(gamma).field(alpha2).field(delta);
        try {
            const FeasibilityReport r = assess(q, m);
            row.field(r.pi0_star)
                .field(r.pi_m_star)
                .field(r.pi1_star)
                .field(r.pi2_star)
                .field(r.monopolistic_feasible)
                .field(r.strategic_feasible)
                .field(r.lump_sum.lo)
                .field(r.lump_sum.hi)
                .field(r.n_total_monopolistic)
                .field(r.n_total_strategic)
                .field(r.n_total_strategic > r.n_total_monopolistic)
                .field("ok");
            row.end();
            return true;
        } catch (...) {
            const double nan = std::numeric_limits<double>::quiet_NaN();
            for (int k = 0; k < 4; ++k) row.field(nan);
            row.field(false).field(false).field(nan).field(nan).field(nan).field(nan).field(false);
            row.field(detail::status_token(std::current_exception()));
            row.end();
            return false;
        }
    });
}

/// Region map of the (p1, p2) plane. Header: p1,p2,case,n1,n2
inline SweepOutcome sweep_regionmap(const SweepSpec& spec, std::ostream& os) {
    os << "p1,p2,case,n1,n2\n";
    QueueConfig q = spec.queue;
    if (!spec.gammas.empty()) q.gamma = spec.gammas.front();
    MarketParams m = spec.market;
    m.alpha1 = spec.alpha1s.front();
    if (!spec.alpha2s.empty()) m.alpha2 = spec.alpha2s.front();
    const RegionMap map = region_map(q, m, spec.p1_grid, spec.p2_grid, spec.threads);
    SweepOutcome out;
    for (std::size_t i = 0; i < map.p1_grid.size(); ++i) {
        for (std::size_t j = 0; j < map.p2_grid.size(); ++j) {
            const WardropOutcome& w = map.at(i, j);
            csv::Row row(os);
            row.field(map.p1_grid[i])
                .field(map.p2_grid[j])
                .field(to_string(w.which))
                .field(w.n1)
                .field(w.n2);
            row.end();
            ++out.rows;
        }
    }
    return out;
}

/// Simulator validation run: one row per replication plus a summary row.
/// Header: replication,mean_T1,mean_T2,analytic_T1,analytic_T2,rel_err_T1,rel_err_T2
inline SweepOutcome sweep_sim(const SweepSpec& spec, std::ostream& os) {
    SimConfig cfg;
    cfg.queue = spec.queue;
    if (!spec.gammas.empty()) cfg.queue.gamma = spec.gammas.front();
    cfg.load = spec.load;
    cfg.measured_departures = spec.departures;
    cfg.warmup_departures = spec.warmup > 0 ? spec.warmup : spec.departures / 10;
    cfg.replications = spec.replications;
    cfg.seed = spec.seed;

    const ValidationReport rep = validate_closed_form(cfg, spec.sim_tol_rel, spec.threads);
    os << "replication,mean_T1,mean_T2,analytic_T1,analytic_T2,rel_err_T1,rel_err_T2\n";
    SweepOutcome out;
    const auto rel = [](double mean, double ref) {
        return std::isnan(mean) ? std::numeric_limits<double>::quiet_NaN()
                                : std::fabs(mean - ref) / ref;
    };
    for (std::size_t r = 0; r < rep.sim.replications.size(); ++r) {
        const ReplicationStats& st = rep.sim.replications[r];
        csv::Row row(os);
        row.field(static_cast<int>(r + 1))
            .field(st.mean_t1)
            .field(st.mean_t2)
            .field(rep.t1.analytic)
            .field(rep.t2.analytic)
            .field(rel(st.mean_t1, rep.t1.analytic))
            .field(rel(st.mean_t2, rep.t2.analytic));
        row.end();
        ++out.rows;
    }
    csv::Row row(os);
    row.field("summary")
        .field(rep.sim.mean_t1)
        .field(rep.sim.mean_t2)
        .field(rep.t1.analytic)
        .field(rep.t2.analytic)
        .field(rep.t1.rel_err)
        .field(rep.t2.rel_err);
    row.end();
    ++out.rows;
    out.sim_pass = rep.pass;
    return out;
}

namespace detail {

/// Every axis value must satisfy the parameter invariants before any solver
/// runs; a bad spec is a usage error, not a per-point solver failure.
inline void validate_axes(const SweepSpec& spec) {
    for (double a : spec.alpha1s) {
        MarketParams m = spec.market;
        m.alpha1 = a;
        m.validate();
    }
    for (double a : spec.alpha2s) {
        MarketParams m = spec.market;
        m.alpha2 = a;
        m.validate();
    }
    for (double d : spec.deltas) {
        MarketParams m = spec.market;
        m.delta = d;
        m.validate();
    }
    for (double g : spec.gammas) {
        QueueConfig q = spec.queue;
        q.gamma = g;
        q.validate();
    }
}

}  // namespace detail

/// Dispatch one batch run; rows are computed concurrently but written in
/// deterministic axis order, so identical (spec, seed) give byte-identical
/// output.
inline SweepOutcome run_sweep(const SweepSpec& spec, std::ostream& os) {
    spec.queue.validate();
    spec.market.validate();
    if (spec.alpha1s.empty()) throw InvalidConfig("sweep: alpha1 axis is empty");
    try {
        detail::validate_axes(spec);
    } catch (const InvalidParams& e) {
        throw InvalidConfig(std::string("sweep: ") + e.what());
    }
    switch (spec.kind) {
        case SweepKind::baseline:
            return sweep_baseline(spec, os);
        case SweepKind::monopolistic:
            if (spec.gammas.empty() || spec.alpha2s.empty())
                throw InvalidConfig("sweep: monopolistic needs gamma and alpha2 axes");
            return sweep_monopolistic(spec, os);
        case SweepKind::strategic:
            if (spec.gammas.empty() || spec.alpha2s.empty() || spec.deltas.empty())
                throw InvalidConfig("sweep: strategic needs gamma, alpha2 and delta axes");
            return sweep_strategic(spec, os);
        case SweepKind::feasibility:
            if (spec.gammas.empty() || spec.alpha2s.empty() || spec.deltas.empty())
                throw InvalidConfig("sweep: feasibility needs gamma, alpha2 and delta axes");
            return sweep_feasibility(spec, os);
        case SweepKind::regionmap:
            if (spec.p1_grid.empty() || spec.p2_grid.empty())
                throw InvalidConfig("sweep: regionmap needs price grids");
            return sweep_regionmap(spec, os);
        case SweepKind::sim:
            return sweep_sim(spec, os);
    }
    throw InvalidConfig("sweep: unknown scenario");
}

}  // namespace slicemkt
