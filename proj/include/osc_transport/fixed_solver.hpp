// Time-optimal transport at fixed oscillator frequency.
//
// The optimum is the symmetric three-switch protocol
//   +a for t_f/2 - t1, -a for t1, +a for t1, -a for t_f/2 - t1
// with cos(Omega t1) = cos^2(Omega t_f / 4) and
//   d = a t_f^2 / 4 - 2 a t1^2.
#pragma once

#include <osc_transport/core.hpp>
#include <osc_transport/parallel.hpp>
#include <osc_transport/roots.hpp>

#include <cmath>
#include <vector>

namespace osc_transport {

struct FixedSolution {
    TransportParams params;
    double t_f = 0.0;
    double t1 = 0.0;
    bool resonant = false;
    Protocol protocol;
    double T_abs = 0.0;
    double omega_res = 0.0;
};

inline void validate(const TransportParams& p) {
    detail::require(std::isfinite(p.d) && p.d > 0.0, "d must be > 0");
    detail::require(std::isfinite(p.a_max) && p.a_max > 0.0, "a_max must be > 0");
    detail::require(std::isfinite(p.omega) && p.omega > 0.0, "omega must be > 0");
}

/// Minimal time without oscillator: bang-bang over half the distance each.
inline double t_abs(double d, double a_max) {
    detail::require(std::isfinite(d) && d > 0.0, "d must be > 0");
    detail::require(std::isfinite(a_max) && a_max > 0.0, "a_max must be > 0");
    return 2.0 * std::sqrt(d / a_max);
}

/// Lowest frequency for which T_abs is also optimal with the oscillator.
inline double omega_res(double d, double a_max) { return 4.0 * pi / t_abs(d, a_max); }

/// Equals arccos(cos^2(Omega t_f / 4)) / Omega on [0, pi/(2 Omega)]; the
/// half-angle form avoids the arccos cancellation near resonance.
inline double switch_offset(double t_f, double omega) {
    detail::require(std::isfinite(t_f) && t_f > 0.0, "t_f must be > 0");
    detail::require(std::isfinite(omega) && omega > 0.0, "omega must be > 0");
    const double s = std::abs(std::sin(0.25 * omega * t_f)) / std::sqrt(2.0);
    return 2.0 * std::asin(std::min(1.0, s)) / omega;
}

inline double distance_for_time(double t_f, double omega, double a_max) {
    detail::require(std::isfinite(a_max) && a_max > 0.0, "a_max must be > 0");
    const double t1 = switch_offset(t_f, omega);
    return 0.25 * a_max * t_f * t_f - 2.0 * a_max * t1 * t1;
}

/// Small-Omega form t_f ~ T_abs (c / pi^2)^(1/4) (Omega / Omega_res)^(-1/2).
/// c = 6 is the exact leading order; c = 5.3 is the empirical fit.
inline double asymptotic_tf(const TransportParams& params, double coefficient) {
    validate(params);
    detail::require(std::isfinite(coefficient) && coefficient > 0.0, "coefficient must be > 0");
    const double T = t_abs(params.d, params.a_max);
    const double ratio = params.omega / omega_res(params.d, params.a_max);
    return T * std::pow(coefficient / (pi * pi), 0.25) / std::sqrt(ratio);
}

/// True iff the optimal protocol drives the wagon backwards for a while,
/// i.e. t1 > t_f / 4. The threshold is where Omega t_f = 2 pi, which gives
/// Omega^2 < Omega_res^2 / 8.
inline bool goes_backwards(const TransportParams& params) {
    validate(params);
    const double wr = omega_res(params.d, params.a_max);
    return 8.0 * params.omega * params.omega < wr * wr;
}

namespace detail {

inline constexpr double resonance_tol = 1e-9;

/// n >= 1 with |x - 4 pi n| < tol, or 0.
inline long resonance_index(double omega_t) {
    const double n = std::round(omega_t / (4.0 * pi));
    if (n >= 1.0 && std::abs(omega_t - 4.0 * pi * n) < resonance_tol) return static_cast<long>(n);
    return 0;
}

inline Protocol fixed_protocol(double a_max, double omega, double t_f, double t1, bool resonant) {
    Protocol p{a_max, {}};
    if (resonant) {
        p.segments = {{0.5 * t_f, +1, omega}, {0.5 * t_f, -1, omega}};
    } else {
        p.segments = {{0.5 * t_f - t1, +1, omega},
                      {t1, -1, omega},
                      {t1, +1, omega},
                      {0.5 * t_f - t1, -1, omega}};
    }
    return p;
}

} // namespace detail

inline FixedSolution solve_fixed(const TransportParams& params) {
    validate(params);
    FixedSolution sol;
    sol.params = params;
    sol.T_abs = t_abs(params.d, params.a_max);
    sol.omega_res = omega_res(params.d, params.a_max);
    if (params.omega <= 1e-12 * sol.omega_res)
        detail::fail(ErrorKind::FrequencyTooSmall,
                     "omega <= 1e-12 * omega_res; t_f diverges as omega -> 0");

    const double T = sol.T_abs;
    auto f = [&](double t) { return distance_for_time(t, params.omega, params.a_max) - params.d; };

    double t_f = T;
    if (detail::resonance_index(params.omega * T) == 0 && f(T) < 0.0) {
        const double lo = T;
        double hi = std::max(1.01 * T, 1.2 * asymptotic_tf(params, 6.0));
        int doublings = 0;
        while (!(f(hi) > 0.0)) {
            if (++doublings > 200 || !std::isfinite(hi))
                detail::fail(ErrorKind::BracketFailure, "could not bracket t_f");
            hi *= 2.0;
        }
        t_f = roots::bisect(f, lo, hi, 1e-12 * T);
    }

    if (detail::resonance_index(params.omega * t_f) != 0) {
        sol.resonant = true;
        sol.t_f = T;
        sol.t1 = 0.0;
    } else {
        sol.t_f = t_f;
        sol.t1 = switch_offset(t_f, params.omega);
    }
    sol.protocol = detail::fixed_protocol(params.a_max, params.omega, sol.t_f, sol.t1, sol.resonant);
    return sol;
}

struct FixedSweepRow {
    double abscissa = 0.0;        ///< d [m] or Omega [rad/s]
    double scaled_abscissa = 0.0; ///< d / d_Omega or Omega / Omega_res
    double t_f = 0.0;
    double T_abs = 0.0;
    double t1 = 0.0;
    bool resonant = false;
};

/// d_Omega = 4 pi^2 a_max / Omega^2: the distance for which Omega is resonant.
inline double d_omega(double omega, double a_max) {
    detail::require(std::isfinite(omega) && omega > 0.0, "omega must be > 0");
    return 4.0 * pi * pi * a_max / (omega * omega);
}

inline FixedSweepRow make_row(const FixedSolution& s, double abscissa, double scaled) {
    return {abscissa, scaled, s.t_f, s.T_abs, s.t1, s.resonant};
}

inline std::vector<FixedSweepRow> sweep_distance(double omega, double a_max,
                                                 const std::vector<double>& d_grid,
                                                 unsigned jobs = 1) {
    const double dw = d_omega(omega, a_max);
    return parallel_map<FixedSweepRow>(d_grid.size(), jobs, [&](std::size_t i) {
        const double d = d_grid[i];
        return make_row(solve_fixed({d, a_max, omega}), d, d / dw);
    });
}

inline std::vector<FixedSweepRow> sweep_omega(double d, double a_max,
                                              const std::vector<double>& omega_grid,
                                              unsigned jobs = 1) {
    const double wr = omega_res(d, a_max);
    return parallel_map<FixedSweepRow>(omega_grid.size(), jobs, [&](std::size_t i) {
        const double w = omega_grid[i];
        return make_row(solve_fixed({d, a_max, w}), w, w / wr);
    });
}

} // namespace osc_transport
