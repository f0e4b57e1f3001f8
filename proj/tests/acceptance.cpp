// Acceptance report: one PASS/FAIL line per criterion. Exits 1 when any
// criterion fails, so ctest shows red in that case.
//
// Random suites use fixed seeds and the samplers below; neither is tuned.
//   fixed:    d log-uniform [0.1, 10] m, a_max log-uniform [0.2, 5] m/s^2,
//             Omega / Omega_res uniform [0.05, 3]
//   variable: scaled band, omega_- uniform [0, 12], width uniform [0.05, 3];
//             bands the solver rejects (unsupported window) are redrawn and counted.

#include <osc_transport/osc_transport.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

using namespace osc_transport;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int id, bool pass, const std::string& what, const std::string& detail) {
    std::printf("%s %2d  %s: %s\n", pass ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

template <class... A>
std::string fmt(const char* f, A... a) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, a...);
    return buf;
}

struct FixedSampler {
    std::mt19937_64 rng;
    explicit FixedSampler(std::uint64_t seed) : rng(seed) {}
    TransportParams operator()() {
        std::uniform_real_distribution<double> logd(std::log(0.1), std::log(10.0));
        std::uniform_real_distribution<double> loga(std::log(0.2), std::log(5.0));
        std::uniform_real_distribution<double> ratio(0.05, 3.0);
        const double d = std::exp(logd(rng)), a = std::exp(loga(rng));
        return {d, a, ratio(rng) * omega_res(d, a)};
    }
};

struct BandSampler {
    std::mt19937_64 rng;
    int redrawn = 0;
    explicit BandSampler(std::uint64_t seed) : rng(seed) {}
    Band draw() {
        std::uniform_real_distribution<double> lo(0.0, 12.0), width(0.05, 3.0);
        const double wm = lo(rng);
        return {wm, wm + width(rng)};
    }
    std::pair<Band, VariableSolution> operator()() {
        for (;;) {
            const Band b = draw();
            try {
                return {b, solve_variable(b)};
            } catch (const TransportError& e) {
                if (e.kind() != ErrorKind::UnsupportedWindow) throw;
                ++redrawn;
            }
        }
    }
};

PhaseState state_at(const Protocol& p, double t) {
    PhaseState s;
    for (const auto& seg : p.segments) {
        const double dt = std::min(seg.duration, t - s.t);
        if (dt <= 0.0) break;
        s = detail::advance(s, seg.u, seg.omega, p.a_max, dt);
    }
    return s;
}

/// Max of |v_w(T/2 + s) - v_w(T/2 - s)| and |x_h(T/2 + s) + x_h(T/2 - s)|.
double symmetry_defect(const Protocol& scaled) {
    const double half = 0.5 * scaled.total_duration();
    double worst = 0.0;
    for (int k = 0; k <= 50; ++k) {
        const double s = half * k / 50.0;
        const PhaseState a = state_at(scaled, half + s), b = state_at(scaled, half - s);
        worst = std::max({worst, std::abs(a.v_w - b.v_w), std::abs(a.x_h + b.x_h)});
    }
    return worst;
}

/// Moves the first u-switch earlier by 10% of the preceding segment.
Protocol perturb_first_switch(Protocol p) {
    for (std::size_t k = 1; k < p.segments.size(); ++k) {
        if (p.segments[k].u == p.segments[k - 1].u) continue;
        const double dt = 0.1 * p.segments[k - 1].duration;
        p.segments[k - 1].duration -= dt;
        p.segments[k].duration += dt;
        break;
    }
    return p;
}

/// Bisection for the first omega_+ in (lo, hi) where pred flips from false to true.
double locate(const std::function<bool(double)>& pred, double lo, double hi) {
    for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        (pred(mid) ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

void criterion1() {
    const TransportParams p{2.82 * pi * pi, 1.0, 1.0};
    const auto t0 = Clock::now();
    const FixedSolution s = solve_fixed(p);
    const double secs = seconds_since(t0);
    const double et = std::abs(s.t_f / (3.41 * pi) - 1.0), e1 = std::abs(s.t1 / (0.205 * pi) - 1.0);
    report(1, et < 0.01 && e1 < 0.01 && secs < 1.0, "reference instance d = 2.82 pi^2, Omega = 1",
           fmt("t_f = %.6f (rel err %.2e), t1 = %.6f (rel err %.2e), %.1e s", s.t_f, et, s.t1, e1, secs));
}

void criterion2() {
    const FixedSolution s = solve_fixed({1.0, 1.0, two_pi});
    const BoundaryReport r = boundary_residual(propagate(s.protocol), 1.0, 1e-12);
    const bool pass = std::abs(s.t_f - 2.0) <= 1e-9 && s.t1 <= 1e-9 && r.passed;
    report(2, pass, "resonance d = 1, Omega = 2 pi",
           fmt("t_f = %.15g, t1 = %.3g, max residual %.2e", s.t_f, s.t1, r.max_abs()));
}

void criterion3() {
    const double omega = 1.0, a = 1.0, dw = d_omega(omega, a);
    bool pass = true;
    std::string detail;
    for (double x : {1.0, 4.0, 9.0, 0.5, 2.0, 6.0}) {
        const auto row = sweep_distance(omega, a, {x * dw}).front();
        const double q = row.t_f / row.T_abs;
        const bool coincident = x == 1.0 || x == 4.0 || x == 9.0;
        pass = pass && (coincident ? std::abs(q - 1.0) <= 1e-9 : q > 1.0);
        detail += fmt("%g:%.12g ", x, q);
    }
    report(3, pass, "t_f / T_abs at d / d_Omega", detail);
}

void criterion4() {
    const TransportParams lo{1.0, 1.0, 0.49 * two_pi}, hi{1.0, 1.0, 0.51 * two_pi};
    const bool flip = goes_backwards(lo) && !goes_backwards(hi);
    const double threshold = locate([](double r) { return !goes_backwards({1.0, 1.0, r * two_pi}); }, 0.01, 3.0);

    FixedSampler sample(4);
    int disagree = 0;
    for (int i = 0; i < 100; ++i) {
        const TransportParams p = sample();
        const FixedSolution s = solve_fixed(p);
        if (goes_backwards(p) != wagon_velocity_extrema(s.protocol).goes_negative) ++disagree;
    }
    report(4, flip && disagree == 0, "backwards criterion",
           fmt("flip inside (0.49, 0.51): %s (threshold Omega/Omega_res = %.6f); simulation disagreements %d/100",
               flip ? "yes" : "no", threshold, disagree));
}

void criterion5() {
    double worst = 0.0, at = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double r = 0.05 + (0.7 - 0.05) * i / 99.0;
        const TransportParams p{1.0, 1.0, r * two_pi};
        const double e = std::abs(asymptotic_tf(p, 5.3) / solve_fixed(p).t_f - 1.0);
        if (e > worst) worst = e, at = r;
    }
    report(5, worst < 0.02, "small-Omega asymptote, coefficient 5.3",
           fmt("max relative error %.4f at Omega/Omega_res = %.4f (limit 0.02)", worst, at));
}

void criterion6() {
    auto region = [](double wp) { return classify({0.0, wp}).region; };
    const double single = locate([&](double wp) { return region(wp) != Region::SinglePlus; }, 1.0, 3.0);
    const double onset = locate([&](double wp) { return region(wp) == Region::TAbsRegion; }, 3.0, 6.0);
    // continuity across the first boundary: the band solution meets the single-frequency one
    const double wp = pi / std::sqrt(2.0) * (1.0 + 1e-9);
    const double jump = std::abs(solve_variable({0.0, wp}).tau_f - solve_fixed({1.0, 1.0, wp}).t_f);
    const double e1 = std::abs(single - pi / std::sqrt(2.0)), e2 = std::abs(onset - (pi + 2.0));
    report(6, e1 <= 1e-9 && e2 <= 1e-9 && jump <= 1e-6, "omega_- = 0 thresholds",
           fmt("SinglePlus edge %.12f (err %.1e), T_abs onset %.12f (err %.1e), tau_f jump %.1e", single, e1,
               onset, e2, jump));
}

void criterion7() {
    double worst = 0.0;
    for (double wp : {0.5, 1.0, 2.0, 3.7, 5.0, 9.0}) {
        const double ref = 10.0 / 3.0 * pi / wp;
        worst = std::max(worst, std::abs(tau_opt({0.5 * wp, wp}) - ref) / ref);
    }
    const VariableSolution s = solve_variable({5.0 * pi / 6.0, 5.0 * pi / 3.0});
    const bool pass = worst <= 1e-12 && std::abs(s.tau_f - 2.0) <= 1e-9 && s.tau1 <= 1e-9;
    report(7, pass, "half-band example",
           fmt("tau_opt rel err %.1e; band (5pi/6, 5pi/3): tau_f = %.15g, tau1 = %.3g", worst, s.tau_f, s.tau1));
}

void criterion8() {
    const Band j = boundary_junction();
    const double diag = 0.25 * std::sqrt(34.0) * two_pi;
    const double e_j = std::max(std::abs(j.omega_minus - (0.5 + 0.5 * std::sqrt(2.0)) * two_pi),
                                std::abs(j.omega_plus - (1.0 + 0.5 * std::sqrt(2.0)) * two_pi));
    // the separator itself, solved at both ends
    const double e_start = std::abs(separator_omega_plus(j.omega_minus) - j.omega_plus);
    const double e_diag = std::abs(separator_omega_plus(diag) - diag);
    const auto sep = sequence_separator(33);
    bool monotone = true;
    for (std::size_t i = 1; i < sep.size(); ++i) monotone = monotone && sep[i].omega_plus < sep[i - 1].omega_plus;
    const bool pass = e_j <= 1e-6 && e_start <= 1e-6 && e_diag <= 1e-6 && monotone;
    report(8, pass, "sequence separator landmarks",
           fmt("junction err %.1e, separator at junction err %.1e, at diagonal err %.1e", e_j, e_start, e_diag));
}

void criterion9() {
    FixedSampler fixed(9);
    BandSampler bands(9);
    int sign = 0, accepted_perturbed = 0;
    double ham = 0.0;
    for (int i = 0; i < 100; ++i) {
        const TransportParams p = fixed();
        const FixedSolution s = solve_fixed(p);
        const VerificationReport r = verify(s);
        sign += r.switching_sign_violations;
        ham = std::max(ham, r.max_hamiltonian_deviation);

        const Protocol bad = perturb_first_switch(s.protocol);
        const bool closes = boundary_residual(propagate(bad), p.d, 1e-9).passed;
        if (closes && verify(s, bad).u_passed()) ++accepted_perturbed;
    }
    int omega_rule = 0;
    for (int i = 0; i < 100; ++i) {
        const auto [b, s] = bands();
        const VerificationReport r = verify(s);
        sign += r.switching_sign_violations;
        ham = std::max(ham, r.max_hamiltonian_deviation);
        if (!r.omega_passed()) ++omega_rule;

        const Protocol bad = perturb_first_switch(s.protocol);
        const bool closes = boundary_residual(propagate(bad), 1.0, 1e-9).passed;
        if (closes && verify(s, bad).u_passed()) ++accepted_perturbed;
    }
    report(9, sign == 0 && ham < 1e-8 && accepted_perturbed == 0, "PMP certificate, 100 fixed + 100 band",
           fmt("sign violations %d, max |H - H0| %.1e, perturbed accepted %d/200 "
               "(info: omega-rule failures %d/100, bands redrawn %d)",
               sign, ham, accepted_perturbed, omega_rule, bands.redrawn));
}

void criterion10() {
    FixedSampler fixed(10);
    BandSampler bands(10);
    double worst = INFINITY;
    std::string worst_at;
    const auto t0 = Clock::now();
    for (int i = 0; i < 20; ++i) {
        const TransportParams p = fixed();
        const OracleResult r = search_fixed(p);
        if (r.relative_margin < worst)
            worst = r.relative_margin, worst_at = fmt("fixed d=%.4g a=%.4g Omega=%.4g", p.d, p.a_max, p.omega);
    }
    for (int i = 0; i < 10; ++i) {
        const Band b = bands().first;
        const OracleResult r = search_variable(b);
        if (r.relative_margin < worst)
            worst = r.relative_margin, worst_at = fmt("band (%.4g, %.4g)", b.omega_minus, b.omega_plus);
    }
    const double secs = seconds_since(t0);
    report(10, worst >= -1e-3 && secs < 600.0, "oracle concordance, 20 fixed + 10 band",
           fmt("min relative margin %.2e at %s; %.1f s", worst, worst_at.c_str(), secs));
}

void criterion11() {
    FixedSampler fixed(11);
    BandSampler bands(11);
    int open = 0;
    double closure = 0.0, sym = 0.0;
    for (int i = 0; i < 500; ++i) {
        const TransportParams p = fixed();
        const FixedSolution s = solve_fixed(p);
        const BoundaryReport r = boundary_residual(propagate(s.protocol), p.d, 1e-9);
        if (!r.passed) ++open;
        closure = std::max(closure, r.max_abs() / std::max(1.0, p.d));
        sym = std::max(sym, symmetry_defect(Scaling(p.d, p.a_max).to_scaled(s.protocol)));
    }
    for (int i = 0; i < 500; ++i) {
        const auto [b, s] = bands();
        const BoundaryReport r = boundary_residual(propagate(s.protocol), 1.0, 1e-9);
        if (!r.passed) ++open;
        closure = std::max(closure, r.max_abs());
        sym = std::max(sym, symmetry_defect(s.protocol));
    }

    // nested pairs: a sub-band can only be slower
    std::mt19937_64 rng(111);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    BandSampler outer(112);
    int broken = 0, pairs = 0, skipped = 0;
    double worst = -INFINITY;
    while (pairs < 200) {
        const auto [b, s] = outer();
        const double w = b.omega_plus - b.omega_minus;
        const double lo = b.omega_minus + 0.5 * w * u01(rng);
        const Band inner{lo, lo + (b.omega_plus - lo) * (0.05 + 0.95 * u01(rng))};
        double tau_inner;
        try {
            tau_inner = solve_variable(inner).tau_f;
        } catch (const TransportError& e) {
            if (e.kind() != ErrorKind::UnsupportedWindow) throw;
            ++skipped;
            continue;
        }
        ++pairs;
        const double excess = (s.tau_f - tau_inner) / tau_inner;
        worst = std::max(worst, excess);
        if (excess > 1e-9) ++broken;
    }
    const bool pass = open == 0 && sym <= 1e-9 && broken == 0;
    report(11, pass, "properties: closure 1000, symmetry, 200 nested bands",
           fmt("open %d (max scaled residual %.1e), symmetry defect %.1e, monotonicity violations %d "
               "(max excess %.1e, inner redrawn %d)",
               open, closure, sym, broken, worst, skipped));
}

} // namespace

int main() {
    const std::vector<void (*)()> criteria = {criterion1, criterion2, criterion3, criterion4,
                                              criterion5, criterion6, criterion7, criterion8,
                                              criterion9, criterion10, criterion11};
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        try {
            criteria[i]();
        } catch (const std::exception& e) {
            report(static_cast<int>(i + 1), false, "exception", e.what());
        }
    }
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
