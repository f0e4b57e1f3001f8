// Closed-form propagation of an oscillator riding on a wagon under
// piecewise-constant (bang-bang) acceleration.
//
// Equations of motion, with a = u * a_max and u in {-1, +1}:
//   x_h'' = -Omega^2 x_h - a      (oscillator, relative to the wagon)
//   x_w'' = a                      (wagon, lab frame)
//
// For Omega > 0 the point x_h + i v_h / Omega rotates clockwise by Omega * dt
// around the equilibrium -a / Omega^2. For Omega = 0 the mass is force-free in
// the lab frame and x_h follows constant-acceleration kinematics with -a.
#pragma once

#include <osc_transport/error.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <vector>

namespace osc_transport {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

struct PhaseState {
    double t = 0.0;
    double x_h = 0.0; ///< oscillator displacement relative to the wagon [m]
    double v_h = 0.0; ///< [m/s]
    double x_w = 0.0; ///< wagon position in the lab frame [m]
    double v_w = 0.0; ///< [m/s]

    bool finite() const {
        return std::isfinite(t) && std::isfinite(x_h) && std::isfinite(v_h) &&
               std::isfinite(x_w) && std::isfinite(v_w);
    }
};

/// One constant-control piece of a protocol. `u` multiplies the protocol's a_max.
struct Segment {
    double duration = 0.0;
    int u = +1;
    double omega = 0.0;
};

struct Protocol {
    double a_max = 1.0;
    std::vector<Segment> segments;

    double total_duration() const {
        double total = 0.0;
        for (const auto& s : segments) total += s.duration;
        return total;
    }
};

struct Trajectory {
    std::vector<PhaseState> samples;
    PhaseState final;
};

struct BoundaryReport {
    double residual_xh = 0.0;
    double residual_vh = 0.0;
    double residual_vw = 0.0;
    double residual_distance = 0.0;
    bool passed = false;

    double max_abs() const {
        return std::max({std::abs(residual_xh), std::abs(residual_vh), std::abs(residual_vw),
                         std::abs(residual_distance)});
    }
};

/// Physical fixed-frequency problem instance (SI units).
struct TransportParams {
    double d = 1.0;
    double a_max = 1.0;
    double omega = two_pi;
};

inline void validate(const Segment& seg) {
    detail::require(std::isfinite(seg.duration) && seg.duration >= 0.0,
                    "segment duration must be finite and >= 0");
    detail::require(seg.u == 1 || seg.u == -1, "segment u must be -1 or +1");
    detail::require(std::isfinite(seg.omega) && seg.omega >= 0.0,
                    "segment omega must be finite and >= 0");
}

inline void validate(const Protocol& protocol) {
    detail::require(std::isfinite(protocol.a_max) && protocol.a_max > 0.0, "a_max must be > 0");
    for (const auto& s : protocol.segments) validate(s);
}

namespace detail {

/// Advance by `dt` (any sign) under constant control. No validation.
inline PhaseState advance(const PhaseState& s, int u, double omega, double a_max, double dt) {
    const double a = u * a_max;
    PhaseState out;
    out.t = s.t + dt;
    out.x_w = s.x_w + s.v_w * dt + 0.5 * a * dt * dt;
    out.v_w = s.v_w + a * dt;
    if (omega == 0.0) {
        out.x_h = s.x_h + s.v_h * dt - 0.5 * a * dt * dt;
        out.v_h = s.v_h - a * dt;
        return out;
    }
    const double center = -a / (omega * omega);
    const double re = s.x_h - center;
    const double im = s.v_h / omega;
    const double c = std::cos(omega * dt);
    const double sn = std::sin(omega * dt);
    // multiply (re + i im) by exp(-i omega dt)
    out.x_h = center + re * c + im * sn;
    out.v_h = omega * (im * c - re * sn);
    return out;
}

} // namespace detail

/// Exact state after one segment.
inline PhaseState propagate_segment(const PhaseState& state, const Segment& seg, double a_max) {
    detail::require(state.finite(), "state must be finite");
    validate(seg);
    detail::require(std::isfinite(a_max) && a_max > 0.0, "a_max must be > 0");
    if (seg.duration == 0.0) return state;
    return detail::advance(state, seg.u, seg.omega, a_max, seg.duration);
}

/// Final state of the whole protocol.
inline PhaseState propagate(const Protocol& protocol, const PhaseState& initial = {}) {
    validate(protocol);
    detail::require(initial.finite(), "state must be finite");
    PhaseState s = initial;
    for (const auto& seg : protocol.segments)
        if (seg.duration > 0.0) s = detail::advance(s, seg.u, seg.omega, protocol.a_max, seg.duration);
    return s;
}

/// Samples every `sample_step` from the initial time plus every segment
/// boundary. Interior samples are propagated from the segment's start state,
/// so there is no accumulation along the grid.
inline Trajectory simulate(const Protocol& protocol, const PhaseState& initial, double sample_step) {
    detail::require(std::isfinite(sample_step) && sample_step > 0.0, "sample_step must be > 0");
    validate(protocol);
    detail::require(initial.finite(), "state must be finite");

    Trajectory traj;
    traj.samples.push_back(initial);
    PhaseState start = initial;
    const double t0 = initial.t;
    const double eps = 1e-9 * sample_step;
    for (const auto& seg : protocol.segments) {
        if (seg.duration == 0.0) continue;
        const double seg_t0 = start.t;
        const double seg_t1 = seg_t0 + seg.duration;
        auto k = static_cast<long long>(std::floor((seg_t0 - t0) / sample_step)) + 1;
        for (;; ++k) {
            const double t = t0 + static_cast<double>(k) * sample_step;
            if (t >= seg_t1 - eps) break;
            if (t <= seg_t0 + eps) continue;
            traj.samples.push_back(
                detail::advance(start, seg.u, seg.omega, protocol.a_max, t - seg_t0));
        }
        start = detail::advance(start, seg.u, seg.omega, protocol.a_max, seg.duration);
        traj.samples.push_back(start);
    }
    traj.final = start;
    return traj;
}

/// Residuals against the rest-to-rest target (0, 0, d, 0); the wagon is
/// assumed to start at x_w = 0.
inline BoundaryReport boundary_residual(const PhaseState& final, double d, double tol) {
    detail::require(std::isfinite(tol) && tol > 0.0, "tolerance must be > 0");
    detail::require(std::isfinite(d), "distance must be finite");
    BoundaryReport r;
    r.residual_xh = final.x_h;
    r.residual_vh = final.v_h;
    r.residual_vw = final.v_w;
    r.residual_distance = final.x_w - d;
    const double bound = tol * std::max(1.0, std::abs(d));
    r.passed = std::isfinite(r.max_abs()) && r.max_abs() <= bound;
    return r;
}

struct VelocityExtrema {
    double min_v_w = 0.0;
    double max_v_w = 0.0;
    bool goes_negative = false;
};

/// v_w is piecewise linear, so the extrema sit on segment boundaries. A
/// minimum within 1e-12 * a_max * T of zero counts as zero (floating-point
/// cancellation in symmetric protocols).
inline VelocityExtrema wagon_velocity_extrema(const Protocol& protocol) {
    validate(protocol);
    VelocityExtrema e;
    double v = 0.0;
    for (const auto& seg : protocol.segments) {
        v += seg.u * protocol.a_max * seg.duration;
        e.min_v_w = std::min(e.min_v_w, v);
        e.max_v_w = std::max(e.max_v_w, v);
    }
    const double noise = 1e-12 * protocol.a_max * protocol.total_duration();
    e.goes_negative = e.min_v_w < -noise;
    return e;
}

/// Unit change to d0 = d, Omega0 = sqrt(a_max / d). In these units the
/// distance is 1, a_max is 1, tau_abs = 2 and omega_res = 2 pi.
class Scaling {
public:
    Scaling(double length_unit, double a_max) : length_(length_unit), a_max_(a_max) {
        detail::require(std::isfinite(length_unit) && length_unit > 0.0, "d must be > 0");
        detail::require(std::isfinite(a_max) && a_max > 0.0, "a_max must be > 0");
        rate_ = std::sqrt(a_max / length_unit);
    }

    double length_unit() const { return length_; }
    double rate() const { return rate_; }
    double a_max() const { return a_max_; }

    double to_scaled_time(double t) const { return rate_ * t; }
    double from_scaled_time(double tau) const { return tau / rate_; }
    double to_scaled_frequency(double omega) const { return omega / rate_; }
    double from_scaled_frequency(double w) const { return w * rate_; }

    PhaseState to_scaled(const PhaseState& s) const {
        return {rate_ * s.t, s.x_h / length_, s.v_h / (length_ * rate_), s.x_w / length_,
                s.v_w / (length_ * rate_)};
    }
    PhaseState from_scaled(const PhaseState& s) const {
        return {s.t / rate_, s.x_h * length_, s.v_h * length_ * rate_, s.x_w * length_,
                s.v_w * length_ * rate_};
    }

    Protocol to_scaled(const Protocol& p) const {
        Protocol out{1.0, p.segments};
        for (auto& s : out.segments) {
            s.duration = to_scaled_time(s.duration);
            s.omega = to_scaled_frequency(s.omega);
        }
        return out;
    }
    /// Scaled protocols carry a_max = 1; the physical bound is restored here.
    Protocol from_scaled(const Protocol& p) const {
        Protocol out{a_max_, p.segments};
        for (auto& s : out.segments) {
            s.duration = from_scaled_time(s.duration);
            s.omega = from_scaled_frequency(s.omega);
        }
        return out;
    }

private:
    double length_;
    double a_max_;
    double rate_ = 1.0;
};

struct ScaledProblem {
    Scaling scaling;
    double omega; ///< scaled oscillator frequency
    static constexpr double distance = 1.0;
    static constexpr double tau_abs = 2.0;
    static constexpr double omega_res = two_pi;
};

inline ScaledProblem to_scaled(const TransportParams& params) {
    Scaling sc(params.d, params.a_max);
    detail::require(std::isfinite(params.omega) && params.omega >= 0.0, "omega must be >= 0");
    return {sc, sc.to_scaled_frequency(params.omega)};
}

inline TransportParams from_scaled(const ScaledProblem& problem) {
    return {problem.scaling.length_unit(), problem.scaling.a_max(),
            problem.scaling.from_scaled_frequency(problem.omega)};
}

/// Segments of `left` followed by their time mirror with u negated, i.e. the
/// antisymmetric-u, symmetric-omega completion about the end of `left`.
inline std::vector<Segment> mirror_complete(std::span<const Segment> left) {
    std::vector<Segment> out(left.begin(), left.end());
    for (auto it = left.rbegin(); it != left.rend(); ++it) out.push_back({it->duration, -it->u, it->omega});
    return out;
}

} // namespace osc_transport
