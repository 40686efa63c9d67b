#pragma once

#include <cmath>
#include <string>

#include "slicemkt/errors.hpp"

namespace slicemkt {

/// Guard margin for strict stability checks: loads are kept at or below
/// mu * (1 - kStabilityGuard) so delays stay finite when optimizers probe
/// prices right at the boundary.
inline constexpr double kStabilityGuard = 1e-9;

/// Shared network modeled as a two-class M/M/1-DPS queue.
/// Class 1 (the network operator's base) has weight 1 - gamma,
/// class 2 (the virtual operator's base) has weight gamma.
struct QueueConfig {
    double mu = 1.0;        ///< service rate, packets/s
    double lambda_d = 0.01; ///< per-subscriber packet rate, packets/s
    double gamma = 0.5;     ///< class-2 priority weight in [0, 1]

    void validate() const {
        if (!(mu > 0.0) || !std::isfinite(mu))
            throw InvalidParams("QueueConfig: mu must be finite and > 0");
        if (!(lambda_d > 0.0) || !std::isfinite(lambda_d))
            throw InvalidParams("QueueConfig: lambda_d must be finite and > 0");
        if (!(gamma >= 0.0 && gamma <= 1.0))
            throw InvalidParams("QueueConfig: gamma must lie in [0, 1]");
    }
};

/// Subscriber counts, treated as continuous (fluid limit).
struct Load {
    double n1 = 0.0;
    double n2 = 0.0;

    void validate() const {
        if (!(n1 >= 0.0) || !(n2 >= 0.0))
            throw InvalidParams("Load: subscriber counts must be >= 0");
    }
};

/// Mean packet system times for the two classes, seconds.
struct Delays {
    double t1 = 0.0;
    double t2 = 0.0;
};

/// True iff the offered load is strictly inside capacity:
/// lambda_d * (n1 + n2) < mu * (1 - margin).
inline bool check_stability(const QueueConfig& cfg, const Load& load, double margin = 0.0) {
    return cfg.lambda_d * (load.n1 + load.n2) < cfg.mu * (1.0 - margin);
}

/// Closed-form mean system times of the two-class M/M/1-DPS queue.
///
/// The shared factor 1/(mu - lambda) is evaluated once and reused for both
/// classes so the work-conservation identity
///   lambda1*T1 + lambda2*T2 = lambda/(mu - lambda)
/// holds to machine precision.
inline Delays delay_dps(const QueueConfig& cfg, const Load& load) {
    cfg.validate();
    load.validate();
    const double l1 = cfg.lambda_d * load.n1;
    const double l2 = cfg.lambda_d * load.n2;
    const double total = l1 + l2;
    if (!(total < cfg.mu))
        throw UnstableLoad("delay_dps: lambda >= mu (lambda=" + std::to_string(total) +
                           ", mu=" + std::to_string(cfg.mu) + ")");
    // Structured so that swapping classes and weights evaluates the mirrored
    // expressions bit-for-bit (additions commute, negations are exact): the
    // class-swap symmetry T1(g, n1, n2) = T2(1-g, n2, n1) holds exactly.
    const double x1 = 1.0 - cfg.gamma;
    const double x2 = cfg.gamma;
    const double inner = cfg.mu - (x1 * l1 + x2 * l2);
    if (!(inner > 0.0))
        throw DegenerateDenominator("delay_dps: inner denominator <= 0");
    const double common = 1.0 / (cfg.mu - total);
    const double corr = (x2 - x1) / inner;
    return Delays{common * (1.0 + l2 * corr), common * (1.0 - l1 * corr)};
}

/// Mean system time of the single-class M/M/1-PS baseline, 1/(mu - n1*lambda_d).
inline double delay_baseline_ps(const QueueConfig& cfg, double n1) {
    cfg.validate();
    if (!(n1 >= 0.0))
        throw InvalidParams("delay_baseline_ps: n1 must be >= 0");
    const double l1 = cfg.lambda_d * n1;
    if (!(l1 < cfg.mu))
        throw UnstableLoad("delay_baseline_ps: lambda1 >= mu");
    return 1.0 / (cfg.mu - l1);
}

}  // namespace slicemkt
