#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "slicemkt/errors.hpp"
#include "slicemkt/parallel.hpp"
#include "slicemkt/queueing.hpp"
#include "slicemkt/rng.hpp"

namespace slicemkt {

struct SimConfig {
    QueueConfig queue;
    Load load;
    std::uint64_t warmup_departures = 0;   ///< discarded leading departures
    std::uint64_t measured_departures = 0; ///< counted departures (both classes)
    int replications = 10;
    std::uint64_t seed = 1;

    void validate() const {
        queue.validate();
        load.validate();
        if (measured_departures < 1)
            throw InvalidConfig("SimConfig: measured_departures must be >= 1");
        if (replications < 1)
            throw InvalidConfig("SimConfig: replications must be >= 1");
        if (!(queue.lambda_d * (load.n1 + load.n2) > 0.0))
            throw InvalidConfig("SimConfig: no traffic (both classes empty)");
        if (!check_stability(queue, load))
            throw UnstableLoad("SimConfig: offered load is not stable");
    }
};

struct ReplicationStats {
    double mean_t1 = std::numeric_limits<double>::quiet_NaN();
    double mean_t2 = std::numeric_limits<double>::quiet_NaN();
    std::uint64_t departures_t1 = 0;
    std::uint64_t departures_t2 = 0;
};

struct SimResult {
    double mean_t1 = std::numeric_limits<double>::quiet_NaN();
    double mean_t2 = std::numeric_limits<double>::quiet_NaN();
    double ci95_t1 = 0.0; ///< 95% normal-approximation half-width over replications
    double ci95_t2 = 0.0;
    std::uint64_t departures_t1 = 0;
    std::uint64_t departures_t2 = 0;
    std::vector<ReplicationStats> replications;
};

namespace detail {

inline ReplicationStats simulate_one_replication(const SimConfig& cfg, std::uint64_t rep) {
    Rng rng = Rng::for_stream(cfg.seed, rep);

    const double mu = cfg.queue.mu;
    const double x1 = 1.0 - cfg.queue.gamma;
    const double x2 = cfg.queue.gamma;
    const double lam1 = cfg.queue.lambda_d * cfg.load.n1;
    const double lam2 = cfg.queue.lambda_d * cfg.load.n2;
    const std::uint64_t target = cfg.warmup_departures + cfg.measured_departures;

    std::vector<double> arr1, arr2; // arrival epochs; order inside a class is irrelevant
    arr1.reserve(256);
    arr2.reserve(256);

    double now = 0.0;
    double sum1 = 0.0, sum2 = 0.0;
    std::uint64_t count1 = 0, count2 = 0;
    std::uint64_t departures = 0;

    while (departures < target) {
        const std::size_t k1 = arr1.size();
        const std::size_t k2 = arr2.size();
        const bool busy = (k1 + k2) > 0;
        const double total_rate = lam1 + lam2 + (busy ? mu : 0.0);
        now += rng.exponential(total_rate);

        const double pick = rng.next_unit() * total_rate;
        if (pick < lam1) {
            arr1.push_back(now);
        } else if (pick < lam1 + lam2) {
            arr2.push_back(now);
        } else {
            // Departure. With exponential service the per-class departure
            // rates are mu * k_i * x_i / W; they always sum to mu, which is
            // why a single mu-rate event with a weighted class draw is exact.
            const double w = static_cast<double>(k1) * x1 + static_cast<double>(k2) * x2;
            int cls;
            if (w > 0.0) {
                const double r1 = mu * static_cast<double>(k1) * x1 / w;
                const double r2 = mu * static_cast<double>(k2) * x2 / w;
                // Exponential-race correctness: the class weights cancel in
                // aggregate, so the total departure rate is exactly mu.
                if (std::fabs(r1 + r2 - mu) > 1e-12 * mu)
                    throw Error("simulate_dps: departure rates do not sum to mu");
                cls = (rng.next_unit() * mu < r1) ? 1 : 2;
            } else {
                // Only the zero-weight class is present; it gets the full
                // server (preemptive-priority limit).
                cls = k1 > 0 ? 1 : 2;
            }
            std::vector<double>& bucket = cls == 1 ? arr1 : arr2;
            std::size_t idx = static_cast<std::size_t>(rng.next_unit() *
                                                       static_cast<double>(bucket.size()));
            if (idx >= bucket.size()) idx = bucket.size() - 1;
            const double sojourn = now - bucket[idx];
            bucket[idx] = bucket.back();
            bucket.pop_back();
            ++departures;
            if (departures > cfg.warmup_departures) {
                if (cls == 1) {
                    sum1 += sojourn;
                    ++count1;
                } else {
                    sum2 += sojourn;
                    ++count2;
                }
            }
        }
    }

    ReplicationStats st;
    st.departures_t1 = count1;
    st.departures_t2 = count2;
    if (count1 > 0) st.mean_t1 = sum1 / static_cast<double>(count1);
    if (count2 > 0) st.mean_t2 = sum2 / static_cast<double>(count2);
    return st;
}

inline void mean_ci(const std::vector<double>& xs, double& mean, double& ci95) {
    mean = std::numeric_limits<double>::quiet_NaN();
    ci95 = 0.0;
    if (xs.empty()) return;
    double s = 0.0;
    for (double x : xs) s += x;
    mean = s / static_cast<double>(xs.size());
    if (xs.size() < 2) return;
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    ci95 = 1.96 * sd / std::sqrt(static_cast<double>(xs.size()));
}

}  // namespace detail

/// Event-driven simulation of the two-class M/M/1-DPS queue. Replications run
/// concurrently on independent counter-derived RNG streams and are merged in
/// replication order, so the result is bit-identical for a given
/// (config, seed) regardless of thread count.
inline SimResult simulate_dps(const SimConfig& cfg, int threads = 0) {
    cfg.validate();
    SimResult res;
    res.replications.resize(static_cast<std::size_t>(cfg.replications));
    detail::parallel_for(res.replications.size(), threads, [&](std::size_t r) {
        res.replications[r] = detail::simulate_one_replication(cfg, r);
    });

    std::vector<double> m1, m2;
    for (const ReplicationStats& st : res.replications) {
        if (st.departures_t1 > 0) m1.push_back(st.mean_t1);
        if (st.departures_t2 > 0) m2.push_back(st.mean_t2);
        res.departures_t1 += st.departures_t1;
        res.departures_t2 += st.departures_t2;
    }
    detail::mean_ci(m1, res.mean_t1, res.ci95_t1);
    detail::mean_ci(m2, res.mean_t2, res.ci95_t2);
    return res;
}

struct ClassValidation {
    double analytic = std::numeric_limits<double>::quiet_NaN();
    double simulated = std::numeric_limits<double>::quiet_NaN();
    double rel_err = std::numeric_limits<double>::quiet_NaN();
    double ci95 = 0.0;
    std::uint64_t departures = 0;
    bool within_ci = false;
    bool pass = true; ///< analytic inside the CI, or rel_err <= tol_rel
};

struct ValidationReport {
    ClassValidation t1;
    ClassValidation t2;
    bool pass = true;
    SimResult sim;
};

/// Run the simulator and compare per-class means against the closed forms.
inline ValidationReport validate_closed_form(const SimConfig& cfg, double tol_rel,
                                             int threads = 0) {
    cfg.validate();
    const Delays analytic = delay_dps(cfg.queue, cfg.load);
    ValidationReport rep;
    rep.sim = simulate_dps(cfg, threads);

    const auto check = [&](double ref, double mean, double ci, std::uint64_t count) {
        ClassValidation v;
        v.analytic = ref;
        v.departures = count;
        if (count == 0) return v; // no traffic: vacuously passes
        v.simulated = mean;
        v.ci95 = ci;
        v.rel_err = std::fabs(mean - ref) / ref;
        v.within_ci = std::fabs(mean - ref) <= ci;
        v.pass = v.within_ci || v.rel_err <= tol_rel;
        return v;
    };
    rep.t1 = check(analytic.t1, rep.sim.mean_t1, rep.sim.ci95_t1, rep.sim.departures_t1);
    rep.t2 = check(analytic.t2, rep.sim.mean_t2, rep.sim.ci95_t2, rep.sim.departures_t2);
    rep.pass = rep.t1.pass && rep.t2.pass;
    return rep;
}

}  // namespace slicemkt
