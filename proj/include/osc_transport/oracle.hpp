// Brute-force optimality checks that share no formula with the solvers.
//
// Fixed frequency: every alternating bang-bang pattern with up to
// max_switches switches. The last two segments are fixed in closed form by the
// wagon boundary conditions, so the free durations only have to zero the
// oscillator residual z = xi_1 + i xi_1' / omega (two real equations). The
// free durations are gridded, local minima of |z| seed a 2-D Newton shoot,
// and surplus dimensions are refined by compass search on the total time.
//
// Variable frequency: symmetric omega schedules with antisymmetric u, one
// u-switch per half placed anywhere. Closure then reduces to
// xi_1(midpoint) = 0 and the wagon fixes h = sqrt(1 + 2 tau1^2), so the
// oracle minimises the first root tau1 over freely placed omega switches.
//
// Everything runs in scaled units (distance 1, a_max 1).
#pragma once

#include <osc_transport/core.hpp>
#include <osc_transport/fixed_solver.hpp>
#include <osc_transport/parallel.hpp>
#include <osc_transport/roots.hpp>
#include <osc_transport/variable_solver.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace osc_transport {

struct SearchSpec {
    int max_switches = 4;          ///< u switches (fixed) / omega switches (variable)
    double grid_resolution = 1e-2; ///< scaled time
    int refine_iterations = 200;
    bool allow_asymmetric = true;  ///< fixed only; false restricts to the symmetric family
    std::vector<SequenceKind> omega_patterns = {SequenceKind::SinglePlus, SequenceKind::TwoInterval,
                                                SequenceKind::ThreeInterval,
                                                SequenceKind::FourInterval};
    bool oscillator = true;        ///< false drops the oscillator boundary conditions
    double horizon_cap = 64.0;     ///< scaled
    double max_evaluations = 4e6;  ///< per pattern; the grid is coarsened to fit
    unsigned jobs = 1;

    static SearchSpec variable_default() {
        SearchSpec s;
        s.max_switches = 6;
        return s;
    }
};

inline void validate(const SearchSpec& s) {
    detail::require(std::isfinite(s.grid_resolution) && s.grid_resolution > 0.0,
                    "grid_resolution must be > 0");
    detail::require(s.max_switches >= 1 && s.max_switches <= 6, "max_switches must be in [1, 6]");
    detail::require(s.refine_iterations >= 0, "refine_iterations must be >= 0");
    detail::require(std::isfinite(s.horizon_cap) && s.horizon_cap >= 2.0, "horizon_cap must be >= 2");
    detail::require(s.max_evaluations >= 1e3, "max_evaluations must be >= 1000");
}

struct PatternBest {
    std::string pattern;
    bool reversed = false; ///< variable: the interval next to the midpoint carries omega_-
    double t_f = std::numeric_limits<double>::infinity();
};

struct OracleResult {
    double best_t_f = std::numeric_limits<double>::infinity();
    Protocol best_protocol;
    std::string best_pattern;
    double analytic_t_f = 0.0;
    double margin = 0.0;          ///< best_t_f - analytic_t_f
    double relative_margin = 0.0; ///< margin / analytic_t_f
    double residual = 0.0;        ///< scaled boundary residual of best_protocol
    double horizon = 0.0;         ///< scaled
    double grid_step = 0.0;       ///< coarsest step actually used, scaled
    bool reversed_never_wins = true;
    std::vector<PatternBest> patterns;
};

namespace oracle_detail {

inline constexpr double inf = std::numeric_limits<double>::infinity();
inline constexpr double feasibility_tol = 1e-6;
inline constexpr double newton_tol = 1e-13;

struct Candidate {
    double T = inf;
    std::vector<double> times; ///< free parameters, for the deterministic tie-break
    std::vector<Segment> segments;
};

inline bool better(const Candidate& a, const Candidate& b) {
    if (a.T != b.T) return a.T < b.T;
    return a.times < b.times;
}

/// Uniform grid of n points covering [0, extent].
inline int grid_points(double extent, double step) {
    return std::max(2, static_cast<int>(std::ceil(extent / step - 1e-9)) + 1);
}

/// Step honouring both the requested resolution and the evaluation budget.
inline double grid_step(double extent, int dims, const SearchSpec& spec) {
    if (dims <= 0) return spec.grid_resolution;
    const double per_dim = std::floor(std::pow(spec.max_evaluations, 1.0 / dims));
    return std::max(spec.grid_resolution, extent / std::max(1.0, per_dim - 1.0));
}

/// Derivative-free pattern search: try +-delta on each coordinate, move on the
/// first improvement, halve delta after a full unsuccessful sweep.
template <class F>
std::vector<double> compass(F&& objective, std::vector<double> x, double delta, int iterations) {
    double best = objective(x);
    for (int it = 0; it < iterations && delta > 1e-11; ++it) {
        bool moved = false;
        for (std::size_t j = 0; j < x.size() && !moved; ++j)
            for (double sign : {-1.0, 1.0}) {
                auto y = x;
                y[j] = std::max(0.0, y[j] + sign * delta);
                if (y[j] == x[j]) continue;
                const double v = objective(y);
                if (v < best) {
                    best = v;
                    x = std::move(y);
                    moved = true;
                    break;
                }
            }
        if (!moved) delta *= 0.5;
    }
    return x;
}

// ---------------------------------------------------------------- fixed ----

struct FixedPattern {
    int first_u = +1;
    int segments = 2;
    double omega = 0.0;
    bool oscillator = true;

    int u(int i) const { return (i % 2 == 0) ? first_u : -first_u; }
    int free_dims() const { return segments - 2; }
    std::string name() const {
        std::string s;
        for (int i = 0; i < segments; ++i) s += u(i) > 0 ? '+' : '-';
        return s;
    }
};

struct Closure {
    bool ok = false;
    double a = 0.0, b = 0.0;
    std::complex<double> z;
    double T = 0.0;
};

/// Runs the free prefix, then closes the wagon with two opposite segments:
/// with sigma the sign of the first of them, its end speed w obeys
/// w^2 = sigma (1 - x) + v^2 / 2.
inline Closure close(const FixedPattern& P, const double* prefix) {
    Closure c;
    PhaseState s;
    const int p = P.free_dims();
    for (int i = 0; i < p; ++i) {
        if (prefix[i] < 0.0) return c;
        s = detail::advance(s, P.u(i), P.omega, 1.0, prefix[i]);
        c.T += prefix[i];
    }
    const int sigma = P.u(p);
    const double R = sigma * (1.0 - s.x_w) + 0.5 * s.v_w * s.v_w;
    if (!(R >= 0.0)) return c;
    const double r = std::sqrt(R);
    const double a = r - sigma * s.v_w;
    if (a < 0.0) return c;
    s = detail::advance(s, sigma, P.omega, 1.0, a);
    s = detail::advance(s, -sigma, P.omega, 1.0, r);
    c.ok = true;
    c.a = a;
    c.b = r;
    c.T += a + r;
    if (P.oscillator) c.z = {s.x_h, P.omega > 0.0 ? s.v_h / P.omega : s.v_h};
    return c;
}

inline Candidate make_candidate(const FixedPattern& P, const std::vector<double>& prefix) {
    const Closure c = close(P, prefix.data());
    Candidate cand;
    cand.T = c.T;
    cand.times = prefix;
    for (int i = 0; i < P.free_dims(); ++i) cand.segments.push_back({prefix[i], P.u(i), P.omega});
    cand.segments.push_back({c.a, P.u(P.free_dims()), P.omega});
    cand.segments.push_back({c.b, P.u(P.free_dims() + 1), P.omega});
    return cand;
}

/// Newton on the last two prefix entries with the others frozen.
inline bool newton2(const FixedPattern& P, std::vector<double>& x) {
    const std::size_t i0 = x.size() - 2, i1 = x.size() - 1;
    auto eval = [&](const std::vector<double>& y) { return close(P, y.data()); };
    Closure c = eval(x);
    if (!c.ok) return false;
    for (int it = 0; it < 60; ++it) {
        if (std::abs(c.z) <= newton_tol) return true;
        std::array<std::complex<double>, 2> J;
        for (int k = 0; k < 2; ++k) {
            const std::size_t i = k == 0 ? i0 : i1;
            const double h = 1e-7 * std::max(1.0, x[i]);
            auto xp = x, xm = x;
            xp[i] += h;
            xm[i] = std::max(0.0, xm[i] - h);
            const Closure cp = eval(xp), cm = eval(xm);
            if (!cp.ok || !cm.ok) return false;
            J[k] = (cp.z - cm.z) / (xp[i] - xm[i]);
        }
        const double det = J[0].real() * J[1].imag() - J[1].real() * J[0].imag();
        if (!(std::abs(det) > 1e-300)) return false;
        const double d0 = (c.z.real() * J[1].imag() - J[1].real() * c.z.imag()) / det;
        const double d1 = (J[0].real() * c.z.imag() - c.z.real() * J[0].imag()) / det;
        double step = 1.0;
        bool improved = false;
        for (int k = 0; k < 30; ++k, step *= 0.5) {
            auto y = x;
            y[i0] = std::max(0.0, y[i0] - step * d0);
            y[i1] = std::max(0.0, y[i1] - step * d1);
            const Closure cy = eval(y);
            if (cy.ok && std::abs(cy.z) < std::abs(c.z)) {
                x = std::move(y);
                c = cy;
                improved = true;
                break;
            }
        }
        if (!improved) break;
    }
    return std::abs(c.z) <= feasibility_tol;
}

struct FixedSearch {
    std::optional<Candidate> best;
    double step = 0.0;
};

/// Local minima of |z| over the 2-D grid of the last two free durations.
inline std::vector<std::vector<double>> seeds2(const FixedPattern& P, std::vector<double> outer,
                                               double horizon, double step) {
    double used = 0.0;
    for (double v : outer) used += v;
    const double extent = horizon - used;
    std::vector<std::vector<double>> out;
    if (extent < 0.0) return out;
    const int n = grid_points(extent, step);
    const double h = extent / (n - 1);
    std::vector<double> mag(static_cast<std::size_t>(n) * n, inf);
    auto x = outer;
    x.resize(outer.size() + 2);
    for (int i = 0; i < n; ++i)
        for (int j = 0; i + j < n; ++j) {
            x[outer.size()] = i * h;
            x[outer.size() + 1] = j * h;
            const Closure c = close(P, x.data());
            if (c.ok) mag[static_cast<std::size_t>(i) * n + j] = std::abs(c.z);
        }
    struct Seed {
        double m;
        int i, j;
    };
    std::vector<Seed> found;
    for (int i = 0; i < n; ++i)
        for (int j = 0; i + j < n; ++j) {
            const double m = mag[static_cast<std::size_t>(i) * n + j];
            if (!std::isfinite(m)) continue;
            bool minimum = true;
            for (int di = -1; di <= 1 && minimum; ++di)
                for (int dj = -1; dj <= 1; ++dj) {
                    const int a = i + di, b = j + dj;
                    if ((di == 0 && dj == 0) || a < 0 || b < 0 || a >= n || b >= n) continue;
                    if (mag[static_cast<std::size_t>(a) * n + b] < m) {
                        minimum = false;
                        break;
                    }
                }
            if (minimum) found.push_back({m, i, j});
        }
    std::sort(found.begin(), found.end(), [](const Seed& a, const Seed& b) {
        return a.m != b.m ? a.m < b.m : (a.i != b.i ? a.i < b.i : a.j < b.j);
    });
    if (found.size() > 64) found.resize(64);
    for (const auto& s : found) {
        auto y = outer;
        y.push_back(s.i * h);
        y.push_back(s.j * h);
        out.push_back(std::move(y));
    }
    return out;
}

inline void keep(std::optional<Candidate>& best, Candidate c) {
    if (!best || better(c, *best)) best = std::move(c);
}

inline FixedSearch search_pattern(const FixedPattern& P, double horizon, const SearchSpec& spec) {
    FixedSearch out;
    const int p = P.free_dims();
    out.step = grid_step(horizon, p, spec);
    auto feasible = [&](const std::vector<double>& x) {
        const Closure c = close(P, x.data());
        return c.ok && std::abs(c.z) <= feasibility_tol;
    };

    if (p == 0 || !P.oscillator) {
        // Without the oscillator every extra switch only wastes time.
        std::vector<double> x(static_cast<std::size_t>(p), 0.0);
        if (feasible(x)) keep(out.best, make_candidate(P, x));
        return out;
    }

    if (p == 1) {
        const int n = grid_points(horizon, out.step);
        const double h = horizon / (n - 1);
        std::vector<double> mag(n, inf);
        for (int i = 0; i < n; ++i) {
            const double x = i * h;
            const Closure c = close(P, &x);
            if (c.ok) mag[i] = std::abs(c.z);
        }
        for (int i = 0; i < n; ++i) {
            if (!std::isfinite(mag[i])) continue;
            if ((i > 0 && mag[i - 1] < mag[i]) || (i + 1 < n && mag[i + 1] < mag[i])) continue;
            // golden section on |z|
            double lo = std::max(0.0, (i - 1) * h), hi = std::min(horizon, (i + 1) * h);
            auto f = [&](double x) {
                const Closure c = close(P, &x);
                return c.ok ? std::abs(c.z) : inf;
            };
            const double g = 0.5 * (std::sqrt(5.0) - 1.0);
            double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
            double f1 = f(x1), f2 = f(x2);
            for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
                if (f1 <= f2) {
                    hi = x2, x2 = x1, f2 = f1, x1 = hi - g * (hi - lo), f1 = f(x1);
                } else {
                    lo = x1, x1 = x2, f1 = f2, x2 = lo + g * (hi - lo), f2 = f(x2);
                }
            }
            std::vector<double> x{0.5 * (lo + hi)};
            if (feasible(x)) keep(out.best, make_candidate(P, x));
        }
        return out;
    }

    // p >= 2: grid over the first p - 2 durations, Newton on the last two.
    const int q = p - 2;
    std::vector<std::vector<double>> outers{{}};
    if (q > 0) {
        const int n = grid_points(horizon, out.step);
        const double h = horizon / (n - 1);
        outers.clear();
        std::vector<int> idx(q, 0);
        for (;;) {
            std::vector<double> o(q);
            double used = 0.0;
            for (int k = 0; k < q; ++k) used += (o[k] = idx[k] * h);
            if (used <= horizon) outers.push_back(std::move(o));
            int k = q - 1;
            while (k >= 0 && ++idx[k] == n) idx[k--] = 0;
            if (k < 0) break;
        }
    }

    std::vector<std::vector<double>> solutions;
    for (const auto& o : outers)
        for (auto& s : seeds2(P, o, horizon, out.step))
            if (newton2(P, s)) solutions.push_back(std::move(s));

    std::vector<Candidate> cands;
    for (const auto& s : solutions) cands.push_back(make_candidate(P, s));
    std::sort(cands.begin(), cands.end(), better);
    if (cands.empty()) return out;

    if (q == 0) {
        out.best = cands.front();
        return out;
    }

    // Surplus dimensions: move along the solution manifold towards smaller T.
    const std::size_t refine = std::min<std::size_t>(cands.size(), 8);
    for (std::size_t r = 0; r < refine; ++r) {
        auto inner = cands[r].times;
        auto objective = [&](const std::vector<double>& o) {
            auto x = o;
            x.push_back(inner[q]);
            x.push_back(inner[q + 1]);
            if (!newton2(P, x)) return inf;
            const double T = close(P, x.data()).T;
            inner = x;
            return T;
        };
        const std::vector<double> start(cands[r].times.begin(), cands[r].times.begin() + q);
        const auto o = compass(objective, start, out.step, spec.refine_iterations);
        auto x = o;
        x.push_back(inner[q]);
        x.push_back(inner[q + 1]);
        // `inner` tracks the last successful shoot; re-shoot from the accepted outer point.
        if (newton2(P, x)) keep(out.best, make_candidate(P, x));
        keep(out.best, cands[r]);
    }
    return out;
}

// ------------------------------------------------------------- symmetric ---

/// Left half, outer to inner: interval k has frequency omegas[k]; u = +1
/// until tau1 before the midpoint, then -1.
struct SymmetricPattern {
    std::vector<double> omegas;
    std::string name;
    bool reversed = false;
    bool oscillator = true;
};

inline std::vector<Segment> symmetric_left(const SymmetricPattern& P, const std::vector<double>& L,
                                           double tau1) {
    std::vector<Segment> out;
    double h = 0.0;
    for (double l : L) h += l;
    const double ts = h - tau1;
    double t = 0.0;
    for (std::size_t k = 0; k < L.size(); ++k) {
        const double a = t, b = t + L[k];
        if (ts > a && ts < b) {
            out.push_back({ts - a, +1, P.omegas[k]});
            out.push_back({b - ts, -1, P.omegas[k]});
        } else {
            out.push_back({L[k], b <= ts ? +1 : -1, P.omegas[k]});
        }
        t = b;
    }
    return out;
}

inline double midpoint_xi1(const SymmetricPattern& P, const std::vector<double>& L, double tau1) {
    PhaseState s;
    for (const auto& seg : symmetric_left(P, L, tau1))
        if (seg.duration > 0.0) s = detail::advance(s, seg.u, seg.omega, 1.0, seg.duration);
    return P.oscillator ? s.x_h : 0.0;
}

/// Smallest tau1 closing the oscillator, given the inner interval lengths
/// (all but the outermost, which the wagon condition fixes).
inline std::optional<double> first_root(const SymmetricPattern& P, const std::vector<double>& inner,
                                        double half_horizon, double step) {
    double used = 0.0;
    for (double l : inner) used += l;
    const double lo = used > 1.0 ? std::sqrt(0.5 * (used * used - 1.0)) : 0.0;
    const double hi = half_horizon > 1.0 ? std::sqrt(0.5 * (half_horizon * half_horizon - 1.0)) : 0.0;
    if (lo > hi) return std::nullopt;
    auto lengths = [&](double tau1) {
        std::vector<double> L;
        L.push_back(std::max(0.0, std::sqrt(1.0 + 2.0 * tau1 * tau1) - used));
        L.insert(L.end(), inner.begin(), inner.end());
        return L;
    };
    auto f = [&](double tau1) { return midpoint_xi1(P, lengths(tau1), tau1); };
    double prev = f(lo);
    if (std::abs(prev) <= 1e-14) return lo;
    const int n = grid_points(hi - lo, step);
    double prev_x = lo;
    for (int i = 1; i < n; ++i) {
        const double x = lo + (hi - lo) * i / (n - 1);
        const double v = f(x);
        if (v == 0.0) return x;
        if (std::signbit(v) != std::signbit(prev)) return roots::bisect(f, prev_x, x, 1e-14);
        prev = v;
        prev_x = x;
    }
    return std::nullopt;
}

struct SymmetricSearch {
    std::optional<Candidate> best;
    double step = 0.0;
};

inline Candidate symmetric_candidate(const SymmetricPattern& P, const std::vector<double>& inner,
                                     double tau1) {
    double used = 0.0;
    for (double l : inner) used += l;
    std::vector<double> L{std::max(0.0, std::sqrt(1.0 + 2.0 * tau1 * tau1) - used)};
    L.insert(L.end(), inner.begin(), inner.end());
    Candidate c;
    const auto left = symmetric_left(P, L, tau1);
    c.segments = mirror_complete(left);
    c.T = 2.0 * std::sqrt(1.0 + 2.0 * tau1 * tau1);
    c.times = inner;
    c.times.push_back(tau1);
    return c;
}

inline SymmetricSearch search_symmetric(const SymmetricPattern& P, double horizon, const SearchSpec& spec) {
    SymmetricSearch out;
    const double half = 0.5 * horizon;
    const int q = static_cast<int>(P.omegas.size()) - 1;
    out.step = grid_step(half, q + 1, spec);
    const int n = grid_points(half, out.step);
    const double h = half / (n - 1);

    struct Hit {
        double tau1;
        std::vector<double> inner;
    };
    std::vector<Hit> hits;
    std::vector<int> idx(q, 0);
    for (;;) {
        std::vector<double> inner(q);
        double used = 0.0;
        for (int k = 0; k < q; ++k) used += (inner[k] = idx[k] * h);
        if (used <= half)
            if (auto r = first_root(P, inner, half, out.step)) hits.push_back({*r, std::move(inner)});
        int k = q - 1;
        while (k >= 0 && ++idx[k] == n) idx[k--] = 0;
        if (k < 0) break;
    }
    if (hits.empty()) return out;
    std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
        return a.tau1 != b.tau1 ? a.tau1 < b.tau1 : a.inner < b.inner;
    });

    const std::size_t refine = q == 0 ? 1 : std::min<std::size_t>(hits.size(), 8);
    for (std::size_t r = 0; r < refine; ++r) {
        std::vector<double> inner = hits[r].inner;
        if (q > 0) {
            auto objective = [&](const std::vector<double>& x) {
                double used = 0.0;
                for (double l : x) used += l;
                if (used > half) return inf;
                const auto root = first_root(P, x, half, out.step);
                return root ? *root : inf;
            };
            inner = compass(objective, inner, h, spec.refine_iterations);
        }
        if (auto root = first_root(P, inner, half, out.step))
            keep(out.best, symmetric_candidate(P, inner, *root));
        keep(out.best, symmetric_candidate(P, hits[r].inner, hits[r].tau1));
    }
    return out;
}

inline SymmetricPattern variable_pattern(const Band& b, SequenceKind kind, bool reversed) {
    const int m = static_cast<int>(kind) + 1;
    SymmetricPattern P;
    P.reversed = reversed;
    for (int k = 0; k < m; ++k) {
        // k counts inward; the innermost interval (k = m - 1) carries omega_+ unless reversed.
        const bool plus = ((m - 1 - k) % 2 == 0) != reversed;
        P.omegas.push_back(plus ? b.omega_plus : b.omega_minus);
        P.name += plus ? '+' : '-';
    }
    return P;
}

inline double scaled_residual(const std::vector<Segment>& segments) {
    const PhaseState s = propagate(Protocol{1.0, segments});
    return boundary_residual(s, 1.0, 1.0).max_abs();
}

template <class Run>
OracleResult run_with_horizon(Run&& run, const SearchSpec& spec) {
    double horizon = std::min(4.0, spec.horizon_cap);
    for (;;) {
        OracleResult r = run(horizon);
        if (std::isfinite(r.best_t_f) && r.best_t_f <= horizon) return r;
        if (std::isfinite(r.best_t_f) && r.best_t_f <= spec.horizon_cap) {
            // Any faster protocol has every duration below best_t_f.
            OracleResult again = run(r.best_t_f);
            return std::isfinite(again.best_t_f) && again.best_t_f <= r.best_t_f ? again : r;
        }
        if (horizon >= spec.horizon_cap)
            detail::fail(ErrorKind::Infeasible, "no feasible protocol within the time horizon");
        horizon = std::min(spec.horizon_cap, 2.0 * horizon);
    }
}

} // namespace oracle_detail

/// Exhaustive search over bang-bang protocols with at most max_switches
/// switches. analytic_t_f is solve_fixed's answer (T_abs without oscillator).
inline OracleResult search_fixed(const TransportParams& params, const SearchSpec& spec = {}) {
    using namespace oracle_detail;
    validate(params);
    validate(spec);
    const ScaledProblem sp = to_scaled(params);
    const double omega = sp.omega;

    auto run = [&](double horizon) {
        OracleResult res;
        res.horizon = horizon;
        std::vector<Candidate> bests;
        if (spec.allow_asymmetric) {
            std::vector<FixedPattern> patterns;
            for (int k = 1; k <= spec.max_switches; ++k)
                for (int first : {+1, -1}) patterns.push_back({first, k + 1, omega, spec.oscillator});
            const auto found = parallel_map<FixedSearch>(patterns.size(), spec.jobs, [&](std::size_t i) {
                return search_pattern(patterns[i], horizon, spec);
            });
            for (std::size_t i = 0; i < patterns.size(); ++i) {
                PatternBest pb{patterns[i].name(), false, inf};
                res.grid_step = std::max(res.grid_step, found[i].step);
                if (found[i].best) {
                    pb.t_f = sp.scaling.from_scaled_time(found[i].best->T);
                    bests.push_back(*found[i].best);
                    bests.back().times.insert(bests.back().times.begin(), static_cast<double>(i));
                }
                res.patterns.push_back(pb);
            }
        } else {
            SymmetricPattern P{{omega}, "+|-", false, spec.oscillator};
            const auto found = search_symmetric(P, horizon, spec);
            res.grid_step = found.step;
            res.patterns.push_back({P.name, false, inf});
            if (found.best) {
                res.patterns.back().t_f = sp.scaling.from_scaled_time(found.best->T);
                bests.push_back(*found.best);
            }
        }
        if (bests.empty()) return res;
        const Candidate& b = *std::min_element(bests.begin(), bests.end(), better);
        res.best_t_f = sp.scaling.from_scaled_time(b.T);
        res.residual = spec.oscillator ? scaled_residual(b.segments) : 0.0;
        res.best_protocol = sp.scaling.from_scaled(Protocol{1.0, b.segments});
        res.best_pattern = spec.allow_asymmetric
                               ? res.patterns[static_cast<std::size_t>(b.times.front())].pattern
                               : res.patterns.front().pattern;
        return res;
    };

    OracleResult res = run_with_horizon(run, spec);
    res.analytic_t_f = spec.oscillator ? solve_fixed(params).t_f : t_abs(params.d, params.a_max);
    res.margin = res.best_t_f - res.analytic_t_f;
    res.relative_margin = res.margin / res.analytic_t_f;
    return res;
}

/// Symmetric search over omega schedules built from the band edges, each
/// requested sequence in both orientations. Scaled units throughout.
inline OracleResult search_variable(const Band& band, const SearchSpec& spec = SearchSpec::variable_default()) {
    using namespace oracle_detail;
    validate(band);
    validate(spec);
    std::vector<SymmetricPattern> patterns;
    for (auto kind : spec.omega_patterns) {
        const int m = static_cast<int>(kind) + 1;
        if (2 * (m - 1) > spec.max_switches) continue;
        for (bool reversed : {false, true}) {
            auto P = variable_pattern(band, kind, reversed);
            P.oscillator = spec.oscillator;
            patterns.push_back(std::move(P));
        }
    }
    detail::require(!patterns.empty(), "no omega pattern fits within max_switches");

    auto run = [&](double horizon) {
        OracleResult res;
        res.horizon = horizon;
        const auto found = parallel_map<SymmetricSearch>(patterns.size(), spec.jobs, [&](std::size_t i) {
            return search_symmetric(patterns[i], horizon, spec);
        });
        std::vector<Candidate> bests;
        double best_forward = inf, best_reversed = inf;
        for (std::size_t i = 0; i < patterns.size(); ++i) {
            PatternBest pb{patterns[i].name, patterns[i].reversed, inf};
            res.grid_step = std::max(res.grid_step, found[i].step);
            if (found[i].best) {
                pb.t_f = found[i].best->T;
                bests.push_back(*found[i].best);
                bests.back().times.insert(bests.back().times.begin(), static_cast<double>(i));
                (patterns[i].reversed ? best_reversed : best_forward) =
                    std::min(patterns[i].reversed ? best_reversed : best_forward, pb.t_f);
            }
            res.patterns.push_back(pb);
        }
        if (bests.empty()) return res;
        const Candidate& b = *std::min_element(bests.begin(), bests.end(), better);
        res.best_t_f = b.T;
        res.best_pattern = patterns[static_cast<std::size_t>(b.times.front())].name;
        res.best_protocol = Protocol{1.0, b.segments};
        res.residual = spec.oscillator ? scaled_residual(b.segments) : 0.0;
        res.reversed_never_wins = !(best_reversed < best_forward * (1.0 - 1e-9));
        return res;
    };

    OracleResult res = run_with_horizon(run, spec);
    res.analytic_t_f = solve_variable(band).tau_f;
    res.margin = res.best_t_f - res.analytic_t_f;
    res.relative_margin = res.margin / res.analytic_t_f;
    return res;
}

// ------------------------------------------------------ falsification ---

/// Symmetric switch patterns the optimality proof rules out. Units: omega = 1
/// (time Omega t, distance in a_max / Omega^2).
enum class PatternFamily {
    SingleSwitch,       ///< left half +,-: the optimal family itself
    NegTwoSwitch,       ///< left half -,+,- with the last deceleration longer than pi/2
    NegThreeSwitch,     ///< left half +,-,+,- with the last deceleration longer than pi/2
    PosTwoSwitchShortGap ///< left half +,-,+ with the deceleration shorter than pi/2
};

inline const char* to_string(PatternFamily f) {
    switch (f) {
    case PatternFamily::SingleSwitch: return "SingleSwitch";
    case PatternFamily::NegTwoSwitch: return "NegTwoSwitch";
    case PatternFamily::NegThreeSwitch: return "NegThreeSwitch";
    case PatternFamily::PosTwoSwitchShortGap: return "PosTwoSwitchShortGap";
    }
    return "?";
}

struct FalsificationReport {
    PatternFamily family = PatternFamily::SingleSwitch;
    double tau_f = 0.0;             ///< omega = 1 units; unused for PosTwoSwitchShortGap
    double analytic_distance = 0.0; ///< optimal distance at tau_f
    bool feasible = false;          ///< some member closes the oscillator
    double max_distance = -std::numeric_limits<double>::infinity();
    double residual_floor = 0.0;    ///< PosTwoSwitchShortGap: min over members of the closure gap
    int samples = 0;
    bool excluded = false;          ///< infeasible, or strictly shorter than the optimum
};

namespace oracle_detail {

/// Left-half signs, outer to inner.
inline std::vector<int> family_signs(PatternFamily f) {
    switch (f) {
    case PatternFamily::SingleSwitch: return {+1, -1};
    case PatternFamily::NegTwoSwitch: return {-1, +1, -1};
    case PatternFamily::NegThreeSwitch: return {+1, -1, +1, -1};
    case PatternFamily::PosTwoSwitchShortGap: return {+1, -1, +1};
    }
    return {};
}

/// Run the left half ending at the midpoint; switches at distances
/// t[0] < t[1] < ... before it, the first segment starting at -h.
inline PhaseState run_left(const std::vector<int>& signs, const std::vector<double>& t, double h) {
    PhaseState s;
    double start = h;
    const std::size_t k = signs.size();
    for (std::size_t i = 0; i < k; ++i) {
        const double end = i + 1 < k ? t[k - 2 - i] : 0.0;
        s = detail::advance(s, signs[i], 1.0, 1.0, start - end);
        start = end;
    }
    return s;
}

/// Closed-form optimum (single switch) distance at tau_f for omega = 1.
inline double optimal_distance(double tau_f) {
    const double t1 = 2.0 * std::asin(std::abs(std::sin(0.25 * tau_f)) / std::sqrt(2.0));
    return 0.25 * tau_f * tau_f - 2.0 * t1 * t1;
}

} // namespace oracle_detail

/// Numerically tests an excluded switch family. Distance families: all
/// members with the oscillator closed at the given tau_f are found on a grid
/// (last switch by root scan) and their best distance is compared with the
/// optimum. PosTwoSwitchShortGap: tau_f is left free and the report gives the
/// smallest closure gap min_h |xi_1(0)| over the family's switch region.
inline FalsificationReport falsify_switch_patterns(double tau_f, PatternFamily family, int grid = 200) {
    using namespace oracle_detail;
    detail::require(grid >= 8, "grid must be >= 8");
    FalsificationReport rep;
    rep.family = family;
    rep.tau_f = tau_f;
    const auto signs = family_signs(family);

    if (family == PatternFamily::PosTwoSwitchShortGap) {
        // Switch region of the B > 0 geometry: t1 in (pi, 3pi/2), t2 - t1 in (0, pi/2), t2 < 2pi.
        rep.residual_floor = inf;
        for (int i = 1; i < grid; ++i) {
            const double t1 = pi + 0.5 * pi * i / grid;
            for (int j = 1; j < grid; ++j) {
                const double t2 = t1 + 0.5 * pi * j / grid;
                if (t2 >= 2.0 * pi) break;
                // xi_1(0) is sinusoidal in h: scan a full period, refine the minimum.
                auto gap = [&](double h) { return std::abs(run_left(signs, {t1, t2}, h).x_h); };
                const int n = 64;
                double best_h = t2, best = gap(t2);
                for (int k = 1; k <= n; ++k) {
                    const double h = t2 + two_pi * k / n;
                    const double g = gap(h);
                    if (g < best) best = g, best_h = h;
                }
                double lo = std::max(t2, best_h - two_pi / n), hi = best_h + two_pi / n;
                for (int it = 0; it < 100; ++it) {
                    const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
                    if (gap(m1) <= gap(m2)) hi = m2;
                    else lo = m1;
                }
                best = std::min(best, gap(0.5 * (lo + hi)));
                rep.residual_floor = std::min(rep.residual_floor, best);
                ++rep.samples;
            }
        }
        rep.feasible = rep.residual_floor <= feasibility_tol;
        rep.excluded = !rep.feasible;
        return rep;
    }

    detail::require(std::isfinite(tau_f) && tau_f > 0.0, "tau_f must be > 0");
    const double h = 0.5 * tau_f;
    rep.analytic_distance = optimal_distance(tau_f);
    const bool long_decel = family != PatternFamily::SingleSwitch;
    const std::size_t free = signs.size() - 2; // gridded switches; the outermost is root-scanned

    auto consider = [&](std::vector<double> t) {
        // t holds the inner switches; scan the outermost one for closures.
        const double lo = t.empty() ? 0.0 : t.back();
        auto f = [&](double s) {
            auto all = t;
            all.push_back(s);
            return run_left(signs, all, h).x_h;
        };
        const int n = 4 * grid;
        double prev_x = lo, prev = f(lo);
        for (int i = 1; i <= n; ++i) {
            const double x = lo + (h - lo) * i / n;
            const double v = f(x);
            if (std::signbit(v) != std::signbit(prev) || v == 0.0) {
                const double root = v == 0.0 ? x : roots::bisect(f, prev_x, x, 1e-14);
                auto all = t;
                all.push_back(root);
                const double dist = 2.0 * run_left(signs, all, h).x_w;
                rep.feasible = true;
                rep.max_distance = std::max(rep.max_distance, dist);
            }
            prev = v;
            prev_x = x;
            ++rep.samples;
        }
    };

    if (free == 0) {
        consider({});
    } else {
        std::vector<int> idx(free, 1);
        for (;;) {
            std::vector<double> t(free);
            bool ok = true;
            for (std::size_t k = 0; k < free; ++k) {
                t[k] = h * idx[k] / grid;
                if (k > 0 && t[k] <= t[k - 1]) ok = false;
            }
            if (long_decel && t[0] <= 0.5 * pi) ok = false;
            if (ok) consider(t);
            std::size_t k = free;
            while (k > 0 && ++idx[k - 1] == grid) idx[--k] = 1;
            if (k == 0) break;
        }
    }
    rep.excluded = !rep.feasible || rep.max_distance < rep.analytic_distance - 1e-9;
    return rep;
}

/// Same, at the optimal time of a physical instance.
inline FalsificationReport falsify_switch_patterns(const TransportParams& params, PatternFamily family,
                                                   int grid = 200) {
    const FixedSolution s = solve_fixed(params);
    return falsify_switch_patterns(params.omega * s.t_f, family, grid);
}

} // namespace osc_transport
