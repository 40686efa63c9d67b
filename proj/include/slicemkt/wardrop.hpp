#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <string>
#include <vector>

#include "slicemkt/errors.hpp"
#include "slicemkt/market.hpp"
#include "slicemkt/optimize.hpp"
#include "slicemkt/parallel.hpp"
#include "slicemkt/queueing.hpp"

namespace slicemkt {

/// Subscription regimes: I = both bases active, II = only the NO's base,
/// III = only the VO's base, IV = neither.
enum class WardropCase { I = 1, II = 2, III = 3, IV = 4 };

inline const char* to_string(WardropCase c) {
    switch (c) {
        case WardropCase::I: return "I";
        case WardropCase::II: return "II";
        case WardropCase::III: return "III";
        case WardropCase::IV: return "IV";
    }
    return "?";
}

/// Stage-II users' subscription equilibrium.
struct WardropOutcome {
    WardropCase which = WardropCase::IV;
    double n1 = 0.0;
    double n2 = 0.0;
    double u1 = 0.0; ///< residual utility of a class-1 user at the returned point
    double u2 = 0.0;
    /// Set when the split between classes is indeterminate (gamma = 1/2 with
    /// both prices on the common indifference curve): only the total is
    /// pinned down and it is divided equally.
    bool degenerate_split = false;

    double total() const { return n1 + n2; }
};

/// Price thresholds separating the four regimes, at one price pair.
struct RegionBoundaries {
    double p1_hat = 0.0; ///< coexistence threshold for p1, given p2
    double p2_hat = 0.0; ///< coexistence threshold for p2, given p1
    double p1_cap = 0.0; ///< c * mu^alpha1
    double p2_cap = 0.0; ///< c * mu^alpha2
};

namespace detail {

/// (p/c)^(1/alpha): the service rate a user at price p must see to break
/// even. Equals 1/tau where tau is the break-even delay.
inline double break_even_rate(double p, double c, double alpha) {
    if (p <= 0.0) return 0.0;
    return std::pow(p / c, 1.0 / alpha);
}

/// Monotone kernel of both boundary formulas:
///   f(B) = B * (a*B + b*mu) / (a*mu + b*B),
/// with the B -> 0 limit resolved (mu when a = 0, else 0).
inline double boundary_kernel(double b_rate, double a, double b, double mu) {
    if (b_rate <= 0.0) return a == 0.0 ? mu : 0.0;
    return b_rate * (a * b_rate + b * mu) / (a * mu + b * b_rate);
}

inline double p2_hat_of_p1(const QueueConfig& q, const MarketParams& m, double p1) {
    const double b1 = break_even_rate(p1, m.c, m.alpha1);
    return m.c * std::pow(boundary_kernel(b1, 1.0 - q.gamma, q.gamma, q.mu), m.alpha2);
}

inline double p1_hat_of_p2(const QueueConfig& q, const MarketParams& m, double p2) {
    const double b2 = break_even_rate(p2, m.c, m.alpha2);
    return m.c * std::pow(boundary_kernel(b2, q.gamma, 1.0 - q.gamma, q.mu), m.alpha1);
}

/// Scale counts down, if needed, so the implied load stays strictly inside
/// capacity (free-service demand otherwise lands exactly on lambda = mu).
inline void clamp_stable(const QueueConfig& q, double& n1, double& n2) {
    n1 = std::max(n1, 0.0);
    n2 = std::max(n2, 0.0);
    const double total = n1 + n2;
    const double cap = q.mu * (1.0 - kStabilityGuard) / q.lambda_d;
    if (total > cap && total > 0.0) {
        const double shrink = cap / total;
        n1 *= shrink;
        n2 *= shrink;
    }
}

}  // namespace detail

/// Boundary prices and caps of the four-regime classification at `prices`.
inline RegionBoundaries region_boundaries(const QueueConfig& q, const MarketParams& m,
                                          const PricePair& prices) {
    q.validate();
    m.validate();
    prices.validate();
    RegionBoundaries rb;
    rb.p1_cap = price_cap(m.c, q.mu, m.alpha1);
    rb.p2_cap = price_cap(m.c, q.mu, m.alpha2);
    rb.p2_hat = detail::p2_hat_of_p1(q, m, prices.p1);
    rb.p1_hat = detail::p1_hat_of_p2(q, m, prices.p2);
    return rb;
}

/// Baseline equilibrium subscriber count at price p1 over the PS queue:
/// (mu - (p1/c)^(1/alpha1)) / lambda_d, zero above the cap, kept strictly
/// inside capacity at p1 = 0.
inline double wardrop_baseline(const QueueConfig& q, const MarketParams& m, double p1) {
    q.validate();
    m.validate();
    if (!(p1 >= 0.0)) throw InvalidParams("wardrop_baseline: p1 must be >= 0");
    if (p1 > price_cap(m.c, q.mu, m.alpha1)) return 0.0;
    double n1 = (q.mu - detail::break_even_rate(p1, m.c, m.alpha1)) / q.lambda_d;
    double n2 = 0.0;
    detail::clamp_stable(q, n1, n2);
    return n1;
}

namespace detail {

/// Duopoly equilibrium with the break-even rates precomputed (b1, b2).
/// Classification follows the price conditions of the four regimes with an
/// absolute boundary tolerance of 1e-12; ties resolve to the regime with more
/// active classes.
inline WardropOutcome wardrop_eval(const QueueConfig& q, const MarketParams& m, double p1,
                                   double p2, double b1, double b2) {
    constexpr double tol = 1e-12;
    const double cap1 = price_cap(m.c, q.mu, m.alpha1);
    const double cap2 = price_cap(m.c, q.mu, m.alpha2);
    const double p1_hat = p1_hat_of_p2(q, m, p2);
    const double p2_hat = p2_hat_of_p1(q, m, p1);

    WardropOutcome out;
    if (p1 <= p1_hat + tol && p2 <= p2_hat + tol) {
        out.which = WardropCase::I;
        if (b1 <= tol && b2 <= tol) {
            // Both services free: demand fills the queue; only the total is
            // determined.
            out.degenerate_split = true;
            double total = q.mu / q.lambda_d;
            out.n1 = 0.5 * total;
            out.n2 = 0.5 * total;
        } else {
            const double tau1 = 1.0 / b1;
            const double tau2 = 1.0 / b2;
            const double d1 = q.gamma * tau2 - (1.0 - q.gamma) * tau1;
            const double d2 = q.gamma * tau1 - (1.0 - q.gamma) * tau2;
            const double scale = q.gamma * tau2 + (1.0 - q.gamma) * tau1;
            if (std::fabs(d1) <= 1e-9 * scale && std::fabs(d2) <= 1e-9 * scale) {
                // gamma = 1/2 on the indifference curve: plain PS, split the
                // PS total equally.
                out.degenerate_split = true;
                const double total = (q.mu - 0.5 * (b1 + b2)) / q.lambda_d;
                out.n1 = 0.5 * total;
                out.n2 = 0.5 * total;
            } else {
                out.n1 = (1.0 / d1 - q.mu * tau2 / d2) / q.lambda_d;
                out.n2 = (q.mu * tau1 / d2 - 1.0 / d1) / q.lambda_d;
                if (!std::isfinite(out.n1) || !std::isfinite(out.n2)) {
                    // Both prices vanishingly small: capacity fill, split open.
                    out.degenerate_split = true;
                    out.n1 = 0.5 * q.mu / q.lambda_d;
                    out.n2 = out.n1;
                }
                // Boundary cells can leave -1e-16-style residues.
                const double noise = 1e-9 * q.mu / q.lambda_d;
                if (out.n1 < 0.0 && out.n1 > -noise) out.n1 = 0.0;
                if (out.n2 < 0.0 && out.n2 > -noise) out.n2 = 0.0;
            }
        }
    } else if (p1 <= cap1 + tol && p2 > p2_hat) {
        out.which = WardropCase::II;
        out.n1 = (q.mu - b1) / q.lambda_d;
        out.n2 = 0.0;
    } else if (p2 <= cap2 + tol && p1 > p1_hat) {
        out.which = WardropCase::III;
        out.n1 = 0.0;
        out.n2 = (q.mu - b2) / q.lambda_d;
    } else {
        out.which = WardropCase::IV;
        out.n1 = 0.0;
        out.n2 = 0.0;
    }
    clamp_stable(q, out.n1, out.n2);

    const Delays d = delay_dps(q, Load{out.n1, out.n2});
    out.u1 = utility(d.t1, m.alpha1, p1, m.c);
    out.u2 = utility(d.t2, m.alpha2, p2, m.c);
    return out;
}

}  // namespace detail

/// Stage-II equilibrium of the two-base subscription game at fixed prices.
inline WardropOutcome wardrop_duopoly(const QueueConfig& q, const MarketParams& m,
                                      const PricePair& prices) {
    q.validate();
    m.validate();
    prices.validate();
    const double b1 = detail::break_even_rate(prices.p1, m.c, m.alpha1);
    const double b2 = detail::break_even_rate(prices.p2, m.c, m.alpha2);
    return detail::wardrop_eval(q, m, prices.p1, prices.p2, b1, b2);
}

/// Options for the fixed-point oracle.
struct OracleOptions {
    double count_tol = 1e-11;  ///< convergence tolerance on counts, x (mu/lambda_d)
    int max_iterations = 5000;
    double damping = 0.5;
};

/// Independent stage-II solver: enforces the complementarity conditions
/// (U_i = 0 where n_i > 0, U_i <= 0 where n_i = 0) by damped alternating
/// bisection, using only delay_dps and utility. No closed forms.
inline WardropOutcome wardrop_oracle(const QueueConfig& q, const MarketParams& m,
                                     const PricePair& prices, OracleOptions opt = {}) {
    q.validate();
    m.validate();
    prices.validate();

    const double n_cap = q.mu * (1.0 - kStabilityGuard) / q.lambda_d;
    const double tol = opt.count_tol * n_cap;

    const auto u1_at = [&](double n1, double n2) {
        return utility(delay_dps(q, Load{n1, n2}).t1, m.alpha1, prices.p1, m.c);
    };
    const auto u2_at = [&](double n1, double n2) {
        return utility(delay_dps(q, Load{n1, n2}).t2, m.alpha2, prices.p2, m.c);
    };
    // Largest n1 >= 0 with U1(n1, n2) >= 0 (U1 falls in n1); analogous for n2.
    const auto solve_n1 = [&](double n2) {
        const double hi = n_cap - n2;
        if (hi <= 0.0) return 0.0;
        if (u1_at(0.0, n2) <= 0.0) return 0.0;
        if (u1_at(hi, n2) >= 0.0) return hi;
        double lo = 0.0, up = hi;
        for (int i = 0; i < 120 && up - lo > 1e-15 * n_cap; ++i) {
            const double mid = 0.5 * (lo + up);
            (u1_at(mid, n2) > 0.0 ? lo : up) = mid;
        }
        return 0.5 * (lo + up);
    };
    const auto solve_n2 = [&](double n1) {
        const double hi = n_cap - n1;
        if (hi <= 0.0) return 0.0;
        if (u2_at(n1, 0.0) <= 0.0) return 0.0;
        if (u2_at(n1, hi) >= 0.0) return hi;
        double lo = 0.0, up = hi;
        for (int i = 0; i < 120 && up - lo > 1e-15 * n_cap; ++i) {
            const double mid = 0.5 * (lo + up);
            (u2_at(n1, mid) > 0.0 ? lo : up) = mid;
        }
        return 0.5 * (lo + up);
    };

    // gamma = 1/2 on the indifference curve: only the total is determined.
    const double b1 = detail::break_even_rate(prices.p1, m.c, m.alpha1);
    const double b2 = detail::break_even_rate(prices.p2, m.c, m.alpha2);
    if (std::fabs(q.gamma - 0.5) <= 1e-12 &&
        std::fabs(b1 - b2) <= 1e-9 * std::max({b1, b2, 1e-300}) && b1 < q.mu) {
        double total = std::min((q.mu - b1) / q.lambda_d, n_cap);
        WardropOutcome out;
        out.which = WardropCase::I;
        out.degenerate_split = true;
        out.n1 = 0.5 * total;
        out.n2 = 0.5 * total;
        const Delays d = delay_dps(q, Load{out.n1, out.n2});
        out.u1 = utility(d.t1, m.alpha1, prices.p1, m.c);
        out.u2 = utility(d.t2, m.alpha2, prices.p2, m.c);
        return out;
    }

    // Composed map: guess n2, best-respond with n1, then with n2. Its
    // fixed-point residual is >= 0 at n2 = 0 and <= 0 at the stability cap,
    // so a sign bisection nails the equilibrium even where the damped
    // iteration would creep (thin coexistence band).
    const auto residual = [&](double n2_guess) {
        return solve_n2(solve_n1(n2_guess)) - n2_guess;
    };
    double lo = 0.0, hi = n_cap;
    double rlo = residual(lo);
    double n2 = lo;
    if (rlo <= 0.0) {
        n2 = lo;
    } else if (residual(hi) >= 0.0) {
        n2 = hi;
    } else {
        for (int i = 0; i < 90 && hi - lo > 1e-15 * n_cap; ++i) {
            const double mid = 0.5 * (lo + hi);
            if (residual(mid) > 0.0)
                lo = mid;
            else
                hi = mid;
        }
        n2 = 0.5 * (lo + hi);
    }
    double n1 = solve_n1(n2);

    // Damped alternating polish; also the convergence certificate.
    double move = std::numeric_limits<double>::infinity();
    int it = 0;
    for (; it < opt.max_iterations && move >= tol; ++it) {
        const double t1 = solve_n1(n2);
        const double new_n1 = n1 + opt.damping * (t1 - n1);
        const double t2 = solve_n2(new_n1);
        const double new_n2 = n2 + opt.damping * (t2 - n2);
        move = std::max(std::fabs(new_n1 - n1), std::fabs(new_n2 - n2));
        n1 = new_n1;
        n2 = new_n2;
    }
    if (move >= tol) {
        std::ostringstream os;
        os << "wardrop_oracle: no convergence after " << opt.max_iterations
           << " polish iterations (last move=" << move << ", n1=" << n1 << ", n2=" << n2
           << ", p1=" << prices.p1 << ", p2=" << prices.p2 << ", gamma=" << q.gamma << ")";
        throw NoConvergence(os.str());
    }
    // Land on the undamped point before reporting.
    n1 = solve_n1(n2);
    n2 = solve_n2(n1);
    n1 = solve_n1(n2);

    WardropOutcome out;
    out.n1 = n1;
    out.n2 = n2;
    const bool active1 = n1 > tol;
    const bool active2 = n2 > tol;
    out.which = active1 ? (active2 ? WardropCase::I : WardropCase::II)
                        : (active2 ? WardropCase::III : WardropCase::IV);
    if (!active1) out.n1 = 0.0;
    if (!active2) out.n2 = 0.0;
    const Delays d = delay_dps(q, Load{out.n1, out.n2});
    out.u1 = utility(d.t1, m.alpha1, prices.p1, m.c);
    out.u2 = utility(d.t2, m.alpha2, prices.p2, m.c);
    return out;
}

/// Per-cell classification of the (p1, p2) plane.
struct RegionMap {
    std::vector<double> p1_grid;
    std::vector<double> p2_grid;
    std::vector<WardropOutcome> cells; ///< row-major, p1 outer

    const WardropOutcome& at(std::size_t i1, std::size_t i2) const {
        return cells[i1 * p2_grid.size() + i2];
    }
};

/// Classify every grid cell; rows are computed concurrently and assembled in
/// deterministic order.
inline RegionMap region_map(const QueueConfig& q, const MarketParams& m,
                            std::vector<double> p1_grid, std::vector<double> p2_grid,
                            int threads = 0) {
    q.validate();
    m.validate();
    const auto strictly_increasing = [](const std::vector<double>& g) {
        for (std::size_t i = 0; i + 1 < g.size(); ++i)
            if (!(g[i] < g[i + 1])) return false;
        return !g.empty() && g.front() >= 0.0;
    };
    if (!strictly_increasing(p1_grid) || !strictly_increasing(p2_grid))
        throw InvalidParams("region_map: grids must be nonnegative and strictly increasing");

    RegionMap map;
    map.p1_grid = std::move(p1_grid);
    map.p2_grid = std::move(p2_grid);
    map.cells.resize(map.p1_grid.size() * map.p2_grid.size());

    std::vector<double> b2(map.p2_grid.size());
    for (std::size_t j = 0; j < map.p2_grid.size(); ++j)
        b2[j] = detail::break_even_rate(map.p2_grid[j], m.c, m.alpha2);

    detail::parallel_for(map.p1_grid.size(), threads, [&](std::size_t i) {
        const double p1 = map.p1_grid[i];
        const double b1 = detail::break_even_rate(p1, m.c, m.alpha1);
        for (std::size_t j = 0; j < map.p2_grid.size(); ++j)
            map.cells[i * map.p2_grid.size() + j] =
                detail::wardrop_eval(q, m, p1, map.p2_grid[j], b1, b2[j]);
    });
    return map;
}

}  // namespace slicemkt
