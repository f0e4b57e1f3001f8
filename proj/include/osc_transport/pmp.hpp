// Numerical Pontryagin certificate for emitted protocols.
//
// With state xi = (x_h, v_h, x_w, v_w) in units where a_max = 1, the control
// Hamiltonian is
//   H = -xi4 + p1 xi2 + p2 (-omega^2 xi1 - u) + p3 xi4 + p4 u
// so p2'' = -omega^2 p2, p1 = -p2', p3 = c3 and p4 = (1 - c3) tau + c4, with
// tau measured from the protocol midpoint. u maximises H: u = sign(p4 - p2).
// With a switchable frequency, omega_+ is chosen where p2 xi1 < 0 and
// omega_- where p2 xi1 > 0.
#pragma once

#include <osc_transport/core.hpp>
#include <osc_transport/fixed_solver.hpp>
#include <osc_transport/variable_solver.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

namespace osc_transport {

/// p2 on [tau_begin, tau_end] from its value and slope at tau_begin.
struct AdjointPiece {
    double tau_begin = 0.0;
    double tau_end = 0.0;
    double omega = 0.0;
    double p2 = 0.0;
    double dp2 = 0.0;
    /// p2 = A cos(omega (tau - tau_begin)) + B sin(omega (tau - tau_begin))
    double A() const { return p2; }
    double B() const { return omega == 0.0 ? dp2 : dp2 / omega; }
};

/// Costate constants in PMP units (tau = Omega0 t, a_max = 1).
/// The central piece is p2 = B sin(omega_c tau) with A = c4 = 0, B = -1.
struct AdjointSolution {
    double A = 0.0;
    double B = -1.0;
    double c3 = 0.0;
    double c4 = 0.0;
    double omega_center = 0.0;
    double half_time = 0.0;   ///< tau_f / 2; tau = t - half_time
    double tau1 = 0.0;
    bool trivial = false;     ///< p2 == 0 (T_abs region)
    std::vector<AdjointPiece> pieces;

    double p2(double tau) const;
    double dp2(double tau) const;
    double p4(double tau) const { return (1.0 - c3) * tau + c4; }
    double switching(double tau) const { return p4(tau) - p2(tau); }
};

inline double AdjointSolution::p2(double tau) const {
    if (trivial || pieces.empty()) return 0.0;
    auto it = std::find_if(pieces.begin(), pieces.end(), [&](const AdjointPiece& p) { return tau <= p.tau_end; });
    const AdjointPiece& p = it == pieces.end() ? pieces.back() : *it;
    const double s = tau - p.tau_begin;
    if (p.omega == 0.0) return p.p2 + p.dp2 * s;
    return p.p2 * std::cos(p.omega * s) + p.dp2 / p.omega * std::sin(p.omega * s);
}

inline double AdjointSolution::dp2(double tau) const {
    if (trivial || pieces.empty()) return 0.0;
    auto it = std::find_if(pieces.begin(), pieces.end(), [&](const AdjointPiece& p) { return tau <= p.tau_end; });
    const AdjointPiece& p = it == pieces.end() ? pieces.back() : *it;
    const double s = tau - p.tau_begin;
    if (p.omega == 0.0) return p.dp2;
    return -p.p2 * p.omega * std::sin(p.omega * s) + p.dp2 * std::cos(p.omega * s);
}

struct VerificationReport {
    int switching_sign_violations = 0;
    double max_switch_residual = 0.0; ///< |p4 - p2| at protocol u-switches
    double max_hamiltonian_deviation = 0.0;
    std::vector<double> omega_switch_residuals; ///< |p2 xi1| at each omega switch
    int omega_rule_violations = 0;
    bool passed = false;

    bool u_passed(double tol = 1e-8) const {
        return switching_sign_violations == 0 && max_switch_residual <= tol &&
               max_hamiltonian_deviation <= tol;
    }
    bool omega_passed(double tol = 1e-8) const {
        return omega_rule_violations == 0 &&
               std::all_of(omega_switch_residuals.begin(), omega_switch_residuals.end(),
                           [&](double r) { return r <= tol; });
    }
};

/// Fixed-frequency solution in PMP units: tau = Omega t, omega = 1.
inline Protocol pmp_protocol(const FixedSolution& s, const Protocol& protocol) {
    const double W = s.params.omega;
    Protocol out{1.0, protocol.segments};
    for (auto& seg : out.segments) {
        seg.duration *= W;
        seg.omega /= W;
    }
    return out;
}

inline Protocol pmp_protocol(const FixedSolution& s) { return pmp_protocol(s, s.protocol); }

namespace detail {

/// p2 continued through the omega schedule of `protocol`, outward from the
/// midpoint where p2 = -sin(omega_c tau).
inline std::vector<AdjointPiece> build_pieces(const Protocol& protocol, double half_time, double omega_c) {
    std::vector<AdjointPiece> pieces;
    double t = -half_time;
    for (const auto& seg : protocol.segments) {
        if (seg.duration <= 0.0) continue;
        pieces.push_back({t, t + seg.duration, seg.omega, 0.0, 0.0});
        t += seg.duration;
    }
    if (pieces.empty()) return pieces;
    const std::size_t n = pieces.size();
    // first piece starting at or after tau = 0
    std::size_t mid = 0;
    while (mid < n && pieces[mid].tau_begin < -1e-12 * std::max(1.0, half_time)) ++mid;
    // forward from 0: p2(0) = 0, p2'(0) = -omega_c
    PhaseState s{0.0, 0.0, -omega_c, 0.0, 0.0};
    double at = 0.0;
    for (std::size_t i = mid; i < n; ++i) {
        pieces[i].p2 = s.x_h;
        pieces[i].dp2 = s.v_h;
        if (i == mid) pieces[i].tau_begin = at; // snap rounding
        s = advance(s, 1, pieces[i].omega, 0.0, pieces[i].tau_end - pieces[i].tau_begin);
    }
    // backward from 0
    s = {0.0, 0.0, -omega_c, 0.0, 0.0};
    for (std::size_t i = mid; i-- > 0;) {
        if (i + 1 == mid) pieces[i].tau_end = at;
        s = advance(s, 1, pieces[i].omega, 0.0, pieces[i].tau_begin - pieces[i].tau_end);
        pieces[i].p2 = s.x_h;
        pieces[i].dp2 = s.v_h;
    }
    return pieces;
}

inline double c3_for(double tau1, double omega_c, bool resonant) {
    if (tau1 > 0.0) return 1.0 + std::sin(omega_c * tau1) / tau1;
    if (resonant) return 1.0 + omega_c; // limit tau1 -> 0
    fail(ErrorKind::InvalidArgument, "tau1 = 0 without resonance: no consistent adjoint");
}

} // namespace detail

/// Adjoint for a fixed-frequency solution (PMP units, omega = 1).
inline AdjointSolution fit_adjoint_fixed(const FixedSolution& s) {
    AdjointSolution adj;
    adj.omega_center = 1.0;
    adj.half_time = 0.5 * s.t_f * s.params.omega;
    adj.tau1 = s.t1 * s.params.omega;
    if (adj.tau1 == 0.0 && detail::resonance_index(s.params.omega * s.t_f) == 0 && !s.resonant)
        detail::fail(ErrorKind::InvalidArgument, "tau1 = 0 but omega t_f is not a multiple of 4 pi");
    adj.c3 = detail::c3_for(adj.tau1, 1.0, true);
    adj.pieces = detail::build_pieces(pmp_protocol(s), adj.half_time, 1.0);
    return adj;
}

/// Adjoint for a variable-frequency solution (scaled units). The T_abs
/// region uses the trivial p2 == 0 with c3 = 2 (single switch at tau = 0).
inline AdjointSolution fit_adjoint_variable(const VariableSolution& s) {
    AdjointSolution adj;
    adj.half_time = 0.5 * s.tau_f;
    adj.tau1 = s.tau1;
    if (s.region.region == Region::TAbsRegion) {
        adj.trivial = true;
        adj.B = 0.0;
        adj.c3 = 2.0;
        return adj;
    }
    // frequency of the segment that ends at the midpoint
    double t = 0.0;
    for (const auto& seg : s.protocol.segments) {
        t += seg.duration;
        if (t >= adj.half_time * (1.0 - 1e-12)) {
            adj.omega_center = seg.omega;
            break;
        }
    }
    adj.c3 = detail::c3_for(adj.tau1, adj.omega_center, s.region.region == Region::Resonant);
    adj.pieces = detail::build_pieces(s.protocol, adj.half_time, adj.omega_center);
    return adj;
}

namespace detail {

struct Probe {
    double tau;
    PhaseState state;
    int u;
    double omega;
};

/// Midpoints of the partition formed by a uniform grid of `grid` points,
/// the protocol's switch instants and `extra` instants, with exact states.
inline std::vector<Probe> probes(const Protocol& p, double half_time, int grid, const std::vector<double>& extra) {
    std::vector<double> cuts;
    const double T = p.total_duration();
    for (int i = 0; i <= grid; ++i) cuts.push_back(T * i / grid);
    double t = 0.0;
    for (const auto& seg : p.segments) {
        t += seg.duration;
        cuts.push_back(t);
    }
    for (double e : extra)
        if (e > 0.0 && e < T) cuts.push_back(e);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::vector<Probe> out;
    PhaseState start;
    std::size_t k = 0;
    double seg_begin = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (cuts[i + 1] - cuts[i] <= 1e-14 * std::max(1.0, T)) continue;
        const double m = 0.5 * (cuts[i] + cuts[i + 1]);
        while (k < p.segments.size() && m > seg_begin + p.segments[k].duration) {
            start = advance(start, p.segments[k].u, p.segments[k].omega, p.a_max, p.segments[k].duration);
            seg_begin += p.segments[k].duration;
            ++k;
        }
        if (k == p.segments.size()) break;
        const Segment& seg = p.segments[k];
        out.push_back({m - half_time, advance(start, seg.u, seg.omega, p.a_max, m - seg_begin), seg.u, seg.omega});
    }
    return out;
}

inline double hamiltonian(const AdjointSolution& adj, const Probe& q) {
    const double p2 = adj.p2(q.tau);
    const double p1 = -adj.dp2(q.tau);
    const PhaseState& x = q.state;
    return -x.v_w + p1 * x.v_h + p2 * (-q.omega * q.omega * x.x_h - q.u) + adj.c3 * x.v_w + adj.p4(q.tau) * q.u;
}

inline std::vector<double> adjoint_switches(const AdjointSolution& adj) {
    const double h = adj.half_time;
    return {h - adj.tau1, h, h + adj.tau1};
}

} // namespace detail

inline constexpr int pmp_grid_points = 10000;

/// sign(p4 - p2) against u on every partition cell, plus |p4 - p2| at each
/// u-switch of the protocol. `protocol` is in PMP units.
inline VerificationReport verify_switching(const Protocol& protocol, const AdjointSolution& adj) {
    VerificationReport r;
    for (const auto& q : detail::probes(protocol, adj.half_time, pmp_grid_points, detail::adjoint_switches(adj))) {
        const double s = adj.switching(q.tau);
        if (!(s * q.u > 0.0)) ++r.switching_sign_violations;
    }
    double t = 0.0;
    for (std::size_t i = 0; i + 1 < protocol.segments.size(); ++i) {
        t += protocol.segments[i].duration;
        if (protocol.segments[i].u != protocol.segments[i + 1].u)
            r.max_switch_residual = std::max(r.max_switch_residual, std::abs(adj.switching(t - adj.half_time)));
    }
    return r;
}

/// max |H(tau) - H(-tau_f/2)| over the probe cells.
inline double verify_hamiltonian_constant(const Protocol& protocol, const AdjointSolution& adj) {
    const auto qs = detail::probes(protocol, adj.half_time, pmp_grid_points, detail::adjoint_switches(adj));
    if (qs.empty()) return 0.0;
    const double h0 = detail::hamiltonian(adj, qs.front());
    double dev = 0.0;
    for (const auto& q : qs) dev = std::max(dev, std::abs(detail::hamiltonian(adj, q) - h0));
    return dev;
}

/// omega-rule checks: |p2 xi1| at every omega switch, and on every cell
/// omega_+ where p2 xi1 < 0, omega_- where p2 xi1 > 0. Vacuous when the
/// band is a single frequency or the adjoint is trivial.
inline void verify_omega_switching(const Protocol& protocol, const AdjointSolution& adj, const Band& band,
                                   VerificationReport& r) {
    r.omega_switch_residuals.clear();
    r.omega_rule_violations = 0;
    if (adj.trivial || band.omega_minus == band.omega_plus) return;
    PhaseState s;
    double t = 0.0;
    for (std::size_t i = 0; i + 1 < protocol.segments.size(); ++i) {
        const Segment& seg = protocol.segments[i];
        s = detail::advance(s, seg.u, seg.omega, protocol.a_max, seg.duration);
        t += seg.duration;
        if (seg.omega != protocol.segments[i + 1].omega)
            r.omega_switch_residuals.push_back(std::abs(adj.p2(t - adj.half_time) * s.x_h));
    }
    for (const auto& q : detail::probes(protocol, adj.half_time, pmp_grid_points, detail::adjoint_switches(adj))) {
        const double g = adj.p2(q.tau) * q.state.x_h;
        const double noise = 1e-12;
        if (q.omega == band.omega_plus && g > noise) ++r.omega_rule_violations;
        else if (q.omega == band.omega_minus && g < -noise) ++r.omega_rule_violations;
    }
}

inline VerificationReport finish(VerificationReport r, double tol) {
    r.passed = r.u_passed(tol) && r.omega_passed(tol);
    return r;
}

/// Full check of `protocol` (physical units) against the adjoint of `s`.
inline VerificationReport verify(const FixedSolution& s, const Protocol& protocol, double tol = 1e-8) {
    const AdjointSolution adj = fit_adjoint_fixed(s);
    const Protocol p = pmp_protocol(s, protocol);
    VerificationReport r = verify_switching(p, adj);
    r.max_hamiltonian_deviation = verify_hamiltonian_constant(p, adj);
    return finish(r, tol);
}

inline VerificationReport verify(const FixedSolution& s, double tol = 1e-8) { return verify(s, s.protocol, tol); }

/// Full check of a scaled `protocol` against the adjoint of `s`.
inline VerificationReport verify(const VariableSolution& s, const Protocol& protocol, double tol = 1e-8) {
    const AdjointSolution adj = fit_adjoint_variable(s);
    VerificationReport r = verify_switching(protocol, adj);
    r.max_hamiltonian_deviation = verify_hamiltonian_constant(protocol, adj);
    verify_omega_switching(protocol, adj, s.sub_band, r);
    return finish(r, tol);
}

inline VerificationReport verify(const VariableSolution& s, double tol = 1e-8) { return verify(s, s.protocol, tol); }

} // namespace osc_transport
