#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

namespace slicemkt::detail {

struct LinePoint {
    double x = 0.0;
    double value = 0.0;
};

/// Deterministic 1-D maximizer: dense scan, then golden-section refinement
/// around the best scanned bracket.
///
/// Ties are broken toward the smallest x: among every point evaluated, the
/// leftmost one whose value is within `tie_eps` of the maximum wins. On a
/// profile that rises to a plateau this converges to the left knee instead of
/// drifting into the flat part, which keeps flat best responses deterministic.
template <class F>
LinePoint maximize_on_segment(F&& f, double lo, double hi, int scan_points, double x_tol,
                              double tie_eps = -1.0) {
    if (!(hi > lo)) {
        const double x = lo;
        return LinePoint{x, f(x)};
    }
    if (scan_points < 3) scan_points = 3;

    std::vector<LinePoint> evals;
    evals.reserve(static_cast<std::size_t>(scan_points) + 96);

    int best_idx = 0;
    for (int i = 0; i < scan_points; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / (scan_points - 1);
        evals.push_back(LinePoint{x, f(x)});
        if (evals[static_cast<std::size_t>(i)].value > evals[static_cast<std::size_t>(best_idx)].value)
            best_idx = i;
    }
    if (tie_eps <= 0.0)
        tie_eps = 1e-12 * std::max(1.0, std::fabs(evals[static_cast<std::size_t>(best_idx)].value));

    double a = evals[static_cast<std::size_t>(std::max(0, best_idx - 1))].x;
    double b = evals[static_cast<std::size_t>(std::min(scan_points - 1, best_idx + 1))].x;

    // Golden-section with a left bias on near-ties so plateaus resolve to
    // their left edge.
    constexpr double invphi = 0.6180339887498949;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    evals.push_back(LinePoint{x1, f1});
    evals.push_back(LinePoint{x2, f2});
    int guard = 0;
    while (b - a > x_tol && ++guard < 200) {
        if (f1 >= f2 - tie_eps) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
            evals.push_back(LinePoint{x1, f1});
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
            evals.push_back(LinePoint{x2, f2});
        }
    }

    double vmax = evals.front().value;
    for (const LinePoint& e : evals) vmax = std::max(vmax, e.value);
    LinePoint best{hi, -std::numeric_limits<double>::infinity()};
    for (const LinePoint& e : evals) {
        if (e.value >= vmax - tie_eps && e.x < best.x) best = e;
    }
    return best;
}

/// Root of f(x) = target for increasing f on [lo, hi], by bisection.
/// Returns lo (hi) when the target lies below f(lo) (above f(hi)).
template <class F>
double bisect_increasing(F&& f, double target, double lo, double hi, int iters = 100) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo >= target) return lo;
    if (fhi <= target) return hi;
    for (int i = 0; i < iters && hi - lo > 0.0; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (f(mid) < target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace slicemkt::detail
