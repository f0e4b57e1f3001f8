#pragma once

#include <osc_transport/error.hpp>

#include <cmath>
#include <optional>
#include <string>
#include <utility>

namespace osc_transport::roots {

/// Plain bisection on a sign change. Converges to |hi - lo| <= tol; returns
/// the end with f >= 0 ("first point where the condition holds") when
/// f(lo) < 0 <= f(hi), otherwise the midpoint of the final bracket.
template <class F>
double bisect(F&& f, double lo, double hi, double tol, int max_iter = 400) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (!(std::signbit(flo) != std::signbit(fhi)))
        detail::fail(ErrorKind::BracketFailure,
                     "no sign change on [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    const bool rising = flo < 0.0;
    for (int i = 0; i < max_iter && hi - lo > tol; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == rising) lo = mid;
        else hi = mid;
    }
    return rising ? hi : lo;
}

/// First sub-interval of an n-point uniform scan of [lo, hi] on which f goes
/// from negative to non-negative. Non-finite samples break the chain.
template <class F>
std::optional<std::pair<double, double>> first_rise(F&& f, double lo, double hi, int n) {
    double prev_x = lo;
    double prev = f(lo);
    for (int i = 1; i <= n; ++i) {
        const double x = (i == n) ? hi : lo + (hi - lo) * static_cast<double>(i) / n;
        const double v = f(x);
        if (std::isfinite(prev) && std::isfinite(v) && prev < 0.0 && v >= 0.0)
            return std::make_pair(prev_x, x);
        prev_x = x;
        prev = v;
    }
    return std::nullopt;
}

} // namespace osc_transport::roots
