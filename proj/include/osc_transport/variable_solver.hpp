// Time-optimal transport when the oscillator frequency may be switched
// anywhere inside a band [omega_-, omega_+]. Everything here is in scaled
// units: distance 1, a_max 1, tau_abs = 2, omega_res = 2 pi.
//
// The optimum is symmetric about the midpoint tau = 0. The u-switch sits at
// -tau1, omega switches sit at zeros of p2, and the interval next to tau = 0
// always carries omega_+. Writing h = tau_f / 2, each omega sequence gives
// cos(omega_+ tau1) = rhs(h) on its own window of h, and the optimum solves
//   1 = h^2 - 2 tau1(h)^2.
#pragma once

#include <osc_transport/core.hpp>
#include <osc_transport/fixed_solver.hpp>
#include <osc_transport/parallel.hpp>
#include <osc_transport/roots.hpp>

#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace osc_transport {

struct Band {
    double omega_minus = 0.0;
    double omega_plus = 0.0;
};

enum class SequenceKind { SinglePlus, TwoInterval, ThreeInterval, FourInterval };

enum class Region { Resonant, SinglePlus, Interior, TAbsRegion };

struct RegionClass {
    Region region = Region::SinglePlus;
    SequenceKind sequence = SequenceKind::SinglePlus; ///< meaningful for Interior
};

struct VariableSolution {
    Band band;
    double tau_f = 0.0;
    double tau1 = 0.0;
    RegionClass region;
    SequenceKind sequence = SequenceKind::SinglePlus;
    Band sub_band; ///< equals band except in the T_abs region (and Resonant: (2 pi n, 2 pi n))
    Protocol protocol; ///< scaled, a_max = 1
};

inline const char* to_string(SequenceKind k) {
    switch (k) {
    case SequenceKind::SinglePlus: return "SinglePlus";
    case SequenceKind::TwoInterval: return "TwoInterval";
    case SequenceKind::ThreeInterval: return "ThreeInterval";
    case SequenceKind::FourInterval: return "FourInterval";
    }
    return "?";
}

inline const char* to_string(Region r) {
    switch (r) {
    case Region::Resonant: return "Resonant";
    case Region::SinglePlus: return "SinglePlus";
    case Region::Interior: return "Interior";
    case Region::TAbsRegion: return "TAbsRegion";
    }
    return "?";
}

/// "Interior:TwoInterval", "Resonant", ...
inline std::string to_string(const RegionClass& c) {
    std::string s = to_string(c.region);
    if (c.region == Region::Interior) s += std::string(":") + to_string(c.sequence);
    return s;
}

inline std::optional<SequenceKind> sequence_from_string(std::string_view s) {
    for (auto k : {SequenceKind::SinglePlus, SequenceKind::TwoInterval, SequenceKind::ThreeInterval,
                   SequenceKind::FourInterval})
        if (s == to_string(k)) return k;
    return std::nullopt;
}

inline void validate(const Band& b) {
    detail::require(std::isfinite(b.omega_minus) && std::isfinite(b.omega_plus),
                    "band limits must be finite");
    detail::require(b.omega_minus >= 0.0, "omega_minus must be >= 0");
    detail::require(b.omega_plus > 0.0, "omega_plus must be > 0");
    detail::require(b.omega_minus <= b.omega_plus, "omega_minus must be <= omega_plus");
}

namespace detail {

inline constexpr double inf = std::numeric_limits<double>::infinity();
/// 1 - rhs at tau_f = 2 below which tau_abs counts as reached (tau1 ~ sqrt(2 eps)).
inline constexpr double tabs_eps = 1e-10;
inline constexpr double root_tol = 1e-12;
inline constexpr int scan_points = 2000;

/// pi / omega, with pi / 0 = +inf.
inline double half_period(double omega) { return omega == 0.0 ? inf : pi / omega; }

inline double sq(double x) { return x * x; }

/// 1 - rhs of the tau1 equation, evaluated in closed form so that points
/// with rhs close to 1 keep full relative precision. rhs > 1 <=> eps < 0.
inline double tau1_eps(const Band& b, double h, SequenceKind kind) {
    const double wp = b.omega_plus;
    const double wm = b.omega_minus;
    switch (kind) {
    case SequenceKind::SinglePlus:
        return sq(std::sin(0.5 * wp * h));
    case SequenceKind::TwoInterval: {
        const double D = h - pi / wp;
        if (wm == 0.0) return 1.0 - 0.25 * sq(wp * D);
        return 1.0 - sq(wp / wm) * sq(std::sin(0.5 * wm * D));
    }
    case SequenceKind::ThreeInterval: {
        const double D = h - pi / wp - pi / wm;
        return 1.0 - sq(wp / wm) + sq(std::sin(0.5 * wp * D));
    }
    case SequenceKind::FourInterval: {
        const double D = h - 2.0 * pi / wp - pi / wm;
        const double r2 = sq(wp / wm);
        return 2.0 - r2 - r2 * sq(std::sin(0.5 * wm * D));
    }
    }
    return std::numeric_limits<double>::quiet_NaN();
}

/// arccos(1 - eps) / omega_+, via the half-angle form.
inline double tau1_from_eps(double eps, double wp) {
    return 2.0 * std::asin(std::sqrt(std::clamp(0.5 * eps, 0.0, 1.0))) / wp;
}

/// Case windows for the remaining bands: A has omega_+ < 2 pi, B has
/// 2 pi < omega_- <= omega_+ < 4 pi. Bands containing a resonance are
/// handled before this is consulted.
enum class Case { A, B };

inline Case band_case(const Band& b) {
    if (b.omega_plus < two_pi) return Case::A;
    if (b.omega_minus > two_pi && b.omega_plus < 2.0 * two_pi) return Case::B;
    fail(ErrorKind::UnsupportedWindow,
         "bands inside [2 pi n, 2 pi (n+1)] with n >= 2 are not supported (omega_- = " +
             std::to_string(b.omega_minus) + ")");
}

/// n >= 1 with 2 pi n inside the band, else 0.
inline long resonance_in(const Band& b) {
    const double n = std::max(1.0, std::ceil(b.omega_minus / two_pi - 1e-12));
    return two_pi * n <= b.omega_plus * (1.0 + 1e-12) ? static_cast<long>(n) : 0;
}

/// Sequence kind whose window holds h (windows are (lo, hi] and ordered).
inline SequenceKind kind_at(const Band& b, double h) {
    const double P = pi / b.omega_plus;
    const double M = half_period(b.omega_minus);
    if (h <= P) return SequenceKind::SinglePlus;
    if (h <= P + M) return SequenceKind::TwoInterval;
    if (h <= 2 * P + M) return SequenceKind::ThreeInterval;
    return SequenceKind::FourInterval;
}

/// 1 - rhs at tau_f = 2 for the sequence that applies there.
inline double tabs_eps_at(const Band& b) { return tau1_eps(b, 1.0, kind_at(b, 1.0)); }

struct InteriorRoot {
    SequenceKind kind;
    double h;
    double tau1;
};

inline std::optional<InteriorRoot> solve_kind(const Band& b, SequenceKind kind);

inline std::optional<InteriorRoot> solve_interior(const Band& b) {
    for (auto k : {SequenceKind::SinglePlus, SequenceKind::TwoInterval, SequenceKind::ThreeInterval,
                   SequenceKind::FourInterval})
        if (auto r = solve_kind(b, k)) return r;
    return std::nullopt;
}

} // namespace detail

/// Window (lo, hi] on tau_f / 2 in which `kind` is the applicable sequence.
inline std::pair<double, double> sequence_window(const Band& band, SequenceKind kind) {
    validate(band);
    const double P = pi / band.omega_plus;
    const double M = detail::half_period(band.omega_minus);
    switch (kind) {
    case SequenceKind::SinglePlus: return {0.0, P};
    case SequenceKind::TwoInterval: return {P, P + M};
    case SequenceKind::ThreeInterval: return {P + M, 2 * P + M};
    case SequenceKind::FourInterval: return {2 * P + M, 2 * P + 2 * M};
    }
    return {0.0, 0.0};
}

/// tau1 for a given tau_f and sequence, or nullopt when rhs > 1 (no switch
/// offset exists; the T_abs region indicator). SinglePlus is the fixed-omega_+
/// formula and accepts any tau_f; the other kinds require tau_f / 2 inside
/// their window.
inline std::optional<double> tau1_for_sequence(const Band& band, double tau_f, SequenceKind kind) {
    validate(band);
    detail::require(std::isfinite(tau_f) && tau_f > 0.0, "tau_f must be > 0");
    const double h = 0.5 * tau_f;
    if (kind != SequenceKind::SinglePlus) {
        const auto [lo, hi] = sequence_window(band, kind);
        // the band edges make adjacent windows meet exactly; allow rounding there
        const double slack = 1e-12 * std::max(1.0, h);
        if (!(h > lo - slack && h <= hi + slack))
            detail::fail(ErrorKind::InvalidArgument,
                         std::string("tau_f / 2 outside the ") + to_string(kind) + " window");
    }
    const double eps = detail::tau1_eps(band, h, kind);
    if (eps < 0.0) return std::nullopt;
    return detail::tau1_from_eps(eps, band.omega_plus);
}

/// tau_f at which the TwoInterval rhs reaches 1 (tau1 = 0):
/// tau_opt / 2 = pi/omega_+ + 2 asin(omega_- / omega_+) / omega_-.
inline double tau_opt(const Band& band) {
    validate(band);
    const double wp = band.omega_plus;
    const double wm = band.omega_minus;
    if (wm == 0.0) return (two_pi + 4.0) / wp;
    return 2.0 * (pi / wp + 2.0 * std::asin(wm / wp) / wm);
}

namespace detail {

inline std::optional<InteriorRoot> solve_kind(const Band& b, SequenceKind kind) {
    auto [lo, hi] = sequence_window(b, kind);
    // tau1 <= pi / (2 omega_+) bounds any root from above
    const double cap = std::sqrt(1.0 + 0.5 * sq(pi / b.omega_plus)) * (1.0 + 1e-9);
    lo = std::max(lo, 1.0);
    hi = std::min(hi, cap);
    if (!(hi > lo)) return std::nullopt;
    // rhs > 1 is treated as tau1 = 0; g is then h^2 - 1 > 0, never a root for h > 1
    auto g = [&](double h) {
        const double t1 = tau1_from_eps(std::max(0.0, tau1_eps(b, h, kind)), b.omega_plus);
        return h * h - 2.0 * t1 * t1 - 1.0;
    };
    const auto bracket = roots::first_rise(g, lo, hi, scan_points);
    if (!bracket) return std::nullopt;
    const double h = roots::bisect(g, bracket->first, bracket->second, root_tol);
    const double eps = tau1_eps(b, h, kind);
    if (eps < 0.0) return std::nullopt;
    return InteriorRoot{kind, h, tau1_from_eps(eps, b.omega_plus)};
}

} // namespace detail

inline RegionClass classify(const Band& band) {
    validate(band);
    if (detail::resonance_in(band) != 0) return {Region::Resonant, SequenceKind::SinglePlus};
    if (band.omega_plus <= pi / std::sqrt(2.0)) return {Region::SinglePlus, SequenceKind::SinglePlus};
    detail::band_case(band); // throws for unsupported windows
    if (detail::tabs_eps_at(band) <= detail::tabs_eps)
        return {Region::TAbsRegion, detail::kind_at(band, 1.0)};
    const auto root = detail::solve_interior(band);
    if (!root)
        detail::fail(ErrorKind::NoSolution, "no sequence window contains a solution for this band");
    return {Region::Interior, root->kind};
}

namespace detail {

/// Omega_+ admissible range for the boundary curve of `kind` at fixed
/// omega_-: the values for which `kind` applies at tau_f = 2.
inline std::pair<double, double> boundary_range(double wm, SequenceKind kind) {
    switch (kind) {
    case SequenceKind::TwoInterval:
        return {std::max(wm, pi), two_pi};
    case SequenceKind::ThreeInterval:
        return {wm, wm > pi ? std::min(2.0 * two_pi, two_pi * wm / (wm - pi)) : 2.0 * two_pi};
    case SequenceKind::FourInterval:
        return {wm > pi ? std::max(wm, two_pi * wm / (wm - pi)) : inf, 2.0 * two_pi};
    default:
        fail(ErrorKind::InvalidArgument, "boundary curves exist for Two/Three/FourInterval only");
    }
}

} // namespace detail

/// Smallest omega_+ at which tau_abs becomes reachable for this omega_-,
/// i.e. the first root of rhs(tau_f = 2) = 1 within the range where `kind`
/// applies at tau_f = 2.
inline double boundary_curve(double omega_minus, SequenceKind kind) {
    detail::require(std::isfinite(omega_minus) && omega_minus >= 0.0, "omega_minus must be >= 0");
    const auto [lo, hi] = detail::boundary_range(omega_minus, kind);
    if (!(hi >= lo))
        detail::fail(ErrorKind::NoSolution, std::string("no admissible omega_+ for ") + to_string(kind));
    auto eps = [&](double wp) { return detail::tau1_eps({omega_minus, wp}, 1.0, kind); };
    // eps decreasing through zero; flip sign to use first_rise
    auto f = [&](double wp) { return -eps(wp); };
    if (f(lo) >= 0.0) {
        if (f(lo) <= detail::tabs_eps) return lo;
        detail::fail(ErrorKind::NoSolution, "tau_abs already exceeded at the bottom of the range");
    }
    if (hi == lo) detail::fail(ErrorKind::NoSolution, "no boundary root");
    const auto bracket = roots::first_rise(f, lo, hi, detail::scan_points);
    if (!bracket) {
        if (std::abs(f(hi)) <= detail::tabs_eps) return hi;
        detail::fail(ErrorKind::NoSolution,
                     std::string("no boundary root for ") + to_string(kind) + " at omega_- = " +
                         std::to_string(omega_minus));
    }
    return roots::bisect(f, bracket->first, bracket->second, detail::root_tol);
}

/// Three/Four junction of the boundary curve in the second case window.
inline Band boundary_junction() { return {pi * (1.0 + std::sqrt(2.0)), pi * (2.0 + std::sqrt(2.0))}; }

/// Boundary curve with the sequence kind chosen from omega_-.
inline double boundary_curve(double omega_minus) {
    if (omega_minus <= two_pi) return boundary_curve(omega_minus, SequenceKind::TwoInterval);
    return boundary_curve(omega_minus, omega_minus <= boundary_junction().omega_minus
                                           ? SequenceKind::ThreeInterval
                                           : SequenceKind::FourInterval);
}

/// Separator between the Three- and FourInterval sequences in the second
/// case window: omega_+ at which the solved tau_f / 2 equals
/// 2 pi / omega_+ + pi / omega_-. Defined for omega_- from the boundary
/// junction to the diagonal point pi sqrt(8.5).
inline double separator_omega_plus(double omega_minus) {
    const double w_lo = boundary_junction().omega_minus;
    const double w_hi = pi * std::sqrt(8.5);
    detail::require(omega_minus >= w_lo * (1 - 1e-14) && omega_minus <= w_hi * (1 + 1e-14),
                    "omega_minus outside the separator range");
    auto f = [&](double wp) {
        const double h = two_pi / wp + pi / omega_minus;
        const double eps = 2.0 - detail::sq(wp / omega_minus);
        const double t1 = detail::tau1_from_eps(eps, wp);
        return h * h - 2.0 * t1 * t1 - 1.0;
    };
    const double lo = omega_minus;
    const double hi = std::min(std::sqrt(2.0) * omega_minus, 2.0 * two_pi);
    const double flo = f(lo), fhi = f(hi);
    if (std::abs(flo) < 1e-13) return lo;
    if (std::abs(fhi) < 1e-13) return hi;
    if ((flo < 0) == (fhi < 0)) detail::fail(ErrorKind::NoSolution, "separator not bracketed");
    return roots::bisect(f, lo, hi, detail::root_tol);
}

/// `samples` >= 2 points along the separator, endpoints included.
inline std::vector<Band> sequence_separator(int samples = 33) {
    detail::require(samples >= 2, "need at least two samples");
    const double a = boundary_junction().omega_minus;
    const double b = pi * std::sqrt(8.5);
    std::vector<Band> out;
    for (int i = 0; i < samples; ++i) {
        const double wm = (i == samples - 1) ? b : a + (b - a) * i / (samples - 1);
        double wp = separator_omega_plus(wm);
        if (i == 0) wp = boundary_junction().omega_plus;
        if (i == samples - 1) wp = b;
        out.push_back({wm, wp});
    }
    return out;
}

namespace detail {

inline SequenceKind boundary_kind(const Band& b) {
    if (band_case(b) == Case::A) return SequenceKind::TwoInterval;
    return b.omega_minus <= boundary_junction().omega_minus ? SequenceKind::ThreeInterval
                                                            : SequenceKind::FourInterval;
}

/// omega_- at which (omega_-, omega_+) sits on the boundary curve, found by
/// raising omega_- at fixed omega_+ until rhs(tau_f = 2) drops to 1.
inline double arc_far_end(const Band& b) {
    auto f = [&](double wm) { return tabs_eps_at({wm, b.omega_plus}); };
    if (f(b.omega_minus) > tabs_eps) fail(ErrorKind::InvalidArgument, "band is not in the T_abs region");
    double lo = b.omega_minus;
    const double hi = b.omega_plus;
    if (f(hi) <= 0.0) return hi;
    const auto bracket = roots::first_rise(f, lo, hi, scan_points);
    if (!bracket) return hi;
    return roots::bisect(f, bracket->first, bracket->second, root_tol);
}

} // namespace detail

/// Canonical sub-band achieving tau_abs: keep omega_-, lower omega_+ onto
/// the boundary curve. Resonant bands give the degenerate (2 pi n, 2 pi n).
inline Band arc_subband(const Band& band) {
    validate(band);
    if (const long n = detail::resonance_in(band)) return {two_pi * n, two_pi * n};
    const RegionClass c = classify(band);
    if (c.region != Region::TAbsRegion)
        detail::fail(ErrorKind::InvalidArgument, "arc_subband requires a T_abs-region band");
    double wp = boundary_curve(band.omega_minus, detail::boundary_kind(band));
    return {band.omega_minus, std::min(wp, band.omega_plus)};
}

/// `samples` >= 2 sub-bands along the arc of the boundary curve between the
/// canonical point and the point reached by raising omega_- at the original
/// omega_+. Every point yields tau_abs.
inline std::vector<Band> arc(const Band& band, int samples = 17) {
    detail::require(samples >= 2, "need at least two samples");
    const Band start = arc_subband(band);
    if (start.omega_minus == start.omega_plus) return {start};
    const double far = detail::arc_far_end(band);
    std::vector<Band> out{start};
    for (int i = 1; i < samples - 1; ++i) {
        const double wm = band.omega_minus + (far - band.omega_minus) * i / (samples - 1);
        const Band probe{wm, band.omega_plus};
        const double wp = boundary_curve(wm, detail::boundary_kind(probe));
        out.push_back({wm, std::min(std::max(wp, wm), band.omega_plus)});
    }
    out.push_back({far, band.omega_plus});
    return out;
}

namespace detail {

/// Left half (from -tau_f/2 up to the midpoint), zero durations dropped.
inline std::vector<Segment> left_half(const Band& b, SequenceKind kind, double h, double tau1) {
    const double wp = b.omega_plus, wm = b.omega_minus;
    const double P = pi / wp;
    std::vector<Segment> s;
    switch (kind) {
    case SequenceKind::SinglePlus:
        s = {{h - tau1, +1, wp}};
        break;
    case SequenceKind::TwoInterval:
        s = {{h - P, +1, wm}, {P - tau1, +1, wp}};
        break;
    case SequenceKind::ThreeInterval:
        s = {{h - P - pi / wm, +1, wp}, {pi / wm, +1, wm}, {P - tau1, +1, wp}};
        break;
    case SequenceKind::FourInterval:
        s = {{h - 2 * P - pi / wm, +1, wm}, {P, +1, wp}, {pi / wm, +1, wm}, {P - tau1, +1, wp}};
        break;
    }
    s.push_back({tau1, -1, wp});
    std::vector<Segment> out;
    for (auto& seg : s) {
        if (seg.duration < 0.0 && seg.duration > -1e-12) seg.duration = 0.0;
        require(seg.duration >= 0.0, "negative segment duration in sequence protocol");
        if (seg.duration > 0.0) out.push_back(seg);
    }
    return out;
}

inline Protocol symmetric_protocol(const Band& b, SequenceKind kind, double h, double tau1) {
    const auto left = left_half(b, kind, h, tau1);
    return {1.0, mirror_complete(left)};
}

} // namespace detail

inline VariableSolution solve_variable(const Band& band) {
    validate(band);
    VariableSolution sol;
    sol.band = band;
    sol.sub_band = band;

    if (const long n = detail::resonance_in(band)) {
        const double w = two_pi * n;
        sol.region = {Region::Resonant, SequenceKind::SinglePlus};
        sol.tau_f = 2.0;
        sol.tau1 = 0.0;
        sol.sub_band = {w, w};
        sol.protocol = {1.0, {{1.0, +1, w}, {1.0, -1, w}}};
        return sol;
    }

    sol.region = classify(band);
    switch (sol.region.region) {
    case Region::SinglePlus: {
        const FixedSolution f = solve_fixed({1.0, 1.0, band.omega_plus});
        sol.tau_f = f.t_f;
        sol.tau1 = f.t1;
        sol.protocol = f.protocol;
        break;
    }
    case Region::TAbsRegion: {
        sol.sub_band = arc_subband(band);
        sol.sequence = detail::kind_at(sol.sub_band, 1.0);
        sol.tau_f = 2.0;
        sol.tau1 = 0.0;
        sol.protocol = detail::symmetric_protocol(sol.sub_band, sol.sequence, 1.0, 0.0);
        break;
    }
    case Region::Interior: {
        const auto root = detail::solve_interior(band);
        sol.sequence = root->kind;
        sol.tau_f = 2.0 * root->h;
        sol.tau1 = root->tau1;
        sol.protocol = detail::symmetric_protocol(band, root->kind, root->h, root->tau1);
        break;
    }
    case Region::Resonant: break;
    }
    return sol;
}

/// Complex states eta_k = xi_1 + i xi_1' / omega at the end of each
/// right-half segment (the u-switch at tau1, then every omega switch, then
/// tau_f / 2), propagated forward from xi_1(0) = 0, xi_1'(0) = lambda. lambda
/// is chosen to minimise |eta_last|, so |eta_last| = 0 certifies the switch
/// offset independently of the closed-form rhs. For omega = 0 the convention
/// uses omega = 1.
struct EtaChain {
    std::vector<std::complex<double>> etas;
    double lambda = 0.0;

    double residual() const { return etas.empty() ? 0.0 : std::abs(etas.back()); }
};

inline EtaChain eta_chain(const Band& band, double tau_f, SequenceKind kind, double tau1) {
    validate(band);
    const double h = 0.5 * tau_f;
    const auto left = detail::left_half(band, kind, h, tau1);
    std::vector<Segment> right;
    for (auto it = left.rbegin(); it != left.rend(); ++it) right.push_back({it->duration, -it->u, it->omega});

    auto run = [&](double lambda) {
        std::vector<std::complex<double>> out;
        PhaseState s{0.0, 0.0, lambda, 0.0, 0.0};
        for (const auto& seg : right) {
            s = detail::advance(s, seg.u, seg.omega, 1.0, seg.duration);
            const double w = seg.omega == 0.0 ? 1.0 : seg.omega;
            out.emplace_back(s.x_h, s.v_h / w);
        }
        return out;
    };
    const auto e0 = run(0.0);
    const auto e1 = run(1.0);
    EtaChain chain;
    if (e0.empty()) return chain;
    const std::complex<double> k = e1.back() - e0.back();
    chain.lambda = std::norm(k) > 0.0 ? -std::real(std::conj(k) * e0.back()) / std::norm(k) : 0.0;
    chain.etas = run(chain.lambda);
    return chain;
}

struct SurfaceRow {
    double omega_minus = 0.0;
    double omega_plus = 0.0;
    double tau_f = 0.0;
    double tau1 = 0.0;
    RegionClass region;
    SequenceKind sequence = SequenceKind::SinglePlus;
};

/// All (omega_-, omega_+) pairs from the two grids with omega_- <= omega_+,
/// in grid order (omega_- outer).
inline std::vector<SurfaceRow> sweep_surface(const std::vector<double>& omega_minus_grid,
                                             const std::vector<double>& omega_plus_grid,
                                             unsigned jobs = 1) {
    std::vector<Band> cells;
    for (double wm : omega_minus_grid)
        for (double wp : omega_plus_grid)
            if (wm <= wp) cells.push_back({wm, wp});
    return parallel_map<SurfaceRow>(cells.size(), jobs, [&](std::size_t i) {
        const VariableSolution s = solve_variable(cells[i]);
        return SurfaceRow{cells[i].omega_minus, cells[i].omega_plus, s.tau_f, s.tau1, s.region, s.sequence};
    });
}

} // namespace osc_transport
