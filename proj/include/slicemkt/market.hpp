#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "slicemkt/errors.hpp"

namespace slicemkt {

/// Economic parameters of the two user bases.
///
/// alpha = 0 is rejected: a delay-insensitive base makes the subscription
/// equations degenerate, and no analyzed configuration uses it.
struct MarketParams {
    double c = 1.0;      ///< QoS-to-money conversion factor, > 0
    double alpha1 = 0.6; ///< delay sensitivity of the NO's base, (0, 1]
    double alpha2 = 0.6; ///< delay sensitivity of the VO's base, (0, 1]
    double delta = 0.0;  ///< per-VO-subscriber fee (strategic scenario), >= 0

    void validate() const {
        if (!(c > 0.0) || !std::isfinite(c))
            throw InvalidParams("MarketParams: c must be finite and > 0");
        if (!(alpha1 > 0.0 && alpha1 <= 1.0))
            throw InvalidParams("MarketParams: alpha1 must lie in (0, 1]");
        if (!(alpha2 > 0.0 && alpha2 <= 1.0))
            throw InvalidParams("MarketParams: alpha2 must lie in (0, 1]");
        if (!(delta >= 0.0) || !std::isfinite(delta))
            throw InvalidParams("MarketParams: delta must be finite and >= 0");
    }
};

struct PricePair {
    double p1 = 0.0;
    double p2 = 0.0;

    void validate() const {
        if (!(p1 >= 0.0) || !(p2 >= 0.0))
            throw InvalidParams("PricePair: prices must be >= 0");
    }
};

enum class Scenario { baseline, monopolistic, strategic };

inline const char* to_string(Scenario s) {
    switch (s) {
        case Scenario::baseline: return "baseline";
        case Scenario::monopolistic: return "monopolistic";
        case Scenario::strategic: return "strategic";
    }
    return "?";
}

/// Demand vanishes above c * mu^alpha: even an empty system is not worth it.
inline double price_cap(double c, double mu, double alpha) {
    return c * std::pow(mu, alpha);
}

/// Per-user utility c * T^(-alpha) - p; zero is the outside option.
inline double utility(double t, double alpha, double p, double c) {
    if (!(t > 0.0))
        throw DomainError("utility: delay must be > 0");
    return c * std::pow(t, -alpha) - p;
}

inline double profit_baseline(double n1, double p1) { return n1 * p1; }

inline double profit_monopolistic(double n1, double p1, double n2, double p2) {
    return n1 * p1 + n2 * p2;
}

struct StrategicProfits {
    double pi1 = 0.0; ///< NO: own subscription revenue plus per-subscriber fees
    double pi2 = 0.0; ///< VO: subscription revenue net of fees
};

inline StrategicProfits profit_strategic(double n1, double p1, double n2, double p2,
                                         double delta) {
    if (!(delta >= 0.0))
        throw InvalidParams("profit_strategic: delta must be >= 0");
    return StrategicProfits{n1 * p1 + n2 * delta, n2 * (p2 - delta)};
}

/// Scenario-tagged profit summary. Only the fields of the tagged scenario
/// are meaningful; the rest stay NaN.
struct ProfitReport {
    Scenario scenario = Scenario::baseline;
    double pi0 = std::numeric_limits<double>::quiet_NaN();
    double pi_m = std::numeric_limits<double>::quiet_NaN();
    double pi1 = std::numeric_limits<double>::quiet_NaN();
    double pi2 = std::numeric_limits<double>::quiet_NaN();

    static ProfitReport make_baseline(double n1, double p1) {
        ProfitReport r;
        r.scenario = Scenario::baseline;
        r.pi0 = profit_baseline(n1, p1);
        return r;
    }
    static ProfitReport make_monopolistic(double n1, double p1, double n2, double p2) {
        ProfitReport r;
        r.scenario = Scenario::monopolistic;
        r.pi_m = profit_monopolistic(n1, p1, n2, p2);
        return r;
    }
    static ProfitReport make_strategic(double n1, double p1, double n2, double p2,
                                       double delta) {
        ProfitReport r;
        r.scenario = Scenario::strategic;
        const StrategicProfits s = profit_strategic(n1, p1, n2, p2, delta);
        r.pi1 = s.pi1;
        r.pi2 = s.pi2;
        return r;
    }

    /// Operator-side total of whichever scenario is tagged.
    double total() const {
        switch (scenario) {
            case Scenario::baseline: return pi0;
            case Scenario::monopolistic: return pi_m;
            case Scenario::strategic: return pi1 + pi2;
        }
        return std::numeric_limits<double>::quiet_NaN();
    }
};

}  // namespace slicemkt
