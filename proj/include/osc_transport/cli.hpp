// Command-line front end. Exit codes: 0 ok, 1 usage / parse / I/O,
// 2 infeasible or unsupported, 3 verification failure.
#pragma once

#include <osc_transport/io.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace osc_transport::cli {

enum ExitCode { Ok = 0, Usage = 1, Infeasible = 2, VerificationFailed = 3 };

inline int exit_code(ErrorKind k) {
    switch (k) {
    case ErrorKind::InvalidArgument:
    case ErrorKind::Parse: return Usage;
    default: return Infeasible;
    }
}

namespace detail_cli {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) osc_transport::detail::fail(ErrorKind::Parse, "cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Writes to `path`, or to `fallback` when the path is empty.
inline void emit(const std::string& path, const std::string& text, std::ostream& fallback) {
    if (path.empty()) {
        fallback << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) osc_transport::detail::fail(ErrorKind::Parse, "cannot write '" + path + "'");
    out << text;
}

inline std::vector<double> linspace(double from, double to, int n) {
    osc_transport::detail::require(n >= 1, "--points must be >= 1");
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out[i] = n == 1 ? from : from + (to - from) * i / (n - 1);
    return out;
}

struct ProblemFlags {
    double d = 1.0;
    double a_max = 1.0;
    std::optional<double> omega, omega_minus, omega_plus;

    void add(CLI::App* app) {
        app->add_option("--d", d, "transport distance [m]");
        app->add_option("--a-max", a_max, "acceleration bound [m/s^2]");
        app->add_option("--omega", omega, "fixed oscillator frequency [rad/s]");
        app->add_option("--omega-minus", omega_minus, "lower band limit [rad/s]");
        app->add_option("--omega-plus", omega_plus, "upper band limit [rad/s]");
    }

    io::Problem problem() const {
        osc_transport::detail::require(d > 0.0 && a_max > 0.0, "--d and --a-max must be > 0");
        io::Problem p{d, a_max};
        if (omega) {
            osc_transport::detail::require(!omega_minus && !omega_plus,
                                           "give either --omega or --omega-minus/--omega-plus");
            p.omega = *omega;
            return p;
        }
        osc_transport::detail::require(omega_minus && omega_plus,
                                       "give --omega, or both --omega-minus and --omega-plus");
        p.variable = true;
        p.omega_minus = *omega_minus;
        p.omega_plus = *omega_plus;
        return p;
    }
};

} // namespace detail_cli

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    using namespace detail_cli;
    CLI::App app{"Time-optimal transport of an oscillator on a wagon"};
    app.require_subcommand(1);

    // solve
    ProblemFlags solve_flags;
    std::string solve_out;
    double solve_tol = 1e-9;
    auto* solve = app.add_subcommand("solve", "optimal protocol for fixed Omega or a frequency band");
    solve_flags.add(solve);
    solve->add_option("--out", solve_out, "solution document (default: stdout)");
    solve->add_option("--tol", solve_tol, "boundary tolerance for the diagnostics");

    // simulate
    std::string sim_in, sim_out, sim_report;
    std::optional<double> sim_d, sim_step;
    double sim_tol = 1e-9;
    auto* simulate_cmd = app.add_subcommand("simulate", "exact trajectory of a protocol");
    simulate_cmd->add_option("--in", sim_in, "solution or protocol document")->required();
    simulate_cmd->add_option("--d", sim_d, "target distance (default: params.d of the document)");
    simulate_cmd->add_option("--step", sim_step, "sample step [s] (default: T / 1000)");
    simulate_cmd->add_option("--out", sim_out, "trajectory CSV (default: stdout)");
    simulate_cmd->add_option("--report", sim_report, "boundary report JSON (default: diagnostic stream)");
    simulate_cmd->add_option("--tol", sim_tol, "boundary tolerance");

    // verify
    std::string ver_in, ver_out;
    double ver_tol = 1e-8;
    auto* verify_cmd = app.add_subcommand("verify", "boundary and Pontryagin checks of a solution document");
    verify_cmd->add_option("--in", ver_in, "solution document")->required();
    verify_cmd->add_option("--out", ver_out, "report (default: stdout)");
    verify_cmd->add_option("--tol", ver_tol, "PMP tolerance");

    // oracle
    ProblemFlags oracle_flags;
    std::string oracle_out;
    std::optional<int> max_switches;
    SearchSpec spec;
    bool symmetric_only = false, no_oscillator = false;
    unsigned oracle_jobs = default_jobs();
    double oracle_tol = 1e-3;
    auto* oracle_cmd = app.add_subcommand("oracle", "brute-force search against the analytic optimum");
    oracle_flags.add(oracle_cmd);
    oracle_cmd->add_option("--max-switches", max_switches, "switch budget (default 4 fixed, 6 variable)");
    oracle_cmd->add_option("--grid", spec.grid_resolution, "grid resolution, scaled time");
    oracle_cmd->add_option("--refine", spec.refine_iterations, "refinement iterations");
    oracle_cmd->add_option("--max-evaluations", spec.max_evaluations, "grid budget per pattern");
    oracle_cmd->add_flag("--symmetric-only", symmetric_only, "fixed: symmetric protocols only");
    oracle_cmd->add_flag("--no-oscillator", no_oscillator, "drop the oscillator boundary conditions");
    oracle_cmd->add_option("--jobs", oracle_jobs, "worker threads (default: OSC_TRANSPORT_JOBS or 1)");
    oracle_cmd->add_option("--tol", oracle_tol, "accepted relative shortfall below the analytic time");
    oracle_cmd->add_option("--out", oracle_out, "oracle document (default: stdout)");

    // sweep
    int fig = 0;
    double sw_d = 1.0, sw_a = 1.0;
    std::optional<double> sw_omega, sw_from, sw_to, sw_minus_from, sw_minus_to;
    std::optional<int> sw_points, sw_minus_points;
    unsigned sw_jobs = default_jobs();
    std::string sw_out;
    auto* sweep = app.add_subcommand("sweep", "figure tables as CSV");
    sweep->add_option("--fig", fig, "3: t_f vs d; 4: t_f vs Omega; 9, 10, 11: band surfaces")
        ->required()
        ->check(CLI::IsMember({3, 4, 9, 10, 11}));
    sweep->add_option("--d", sw_d, "distance [m] (figs 4, 9-11)");
    sweep->add_option("--a-max", sw_a, "acceleration bound [m/s^2]");
    sweep->add_option("--omega", sw_omega, "fixed Omega for fig 3 [rad/s] (default 2 pi)");
    sweep->add_option("--from", sw_from, "first abscissa (fig 3: d/d_Omega, fig 4: Omega/Omega_res, else Omega_+)");
    sweep->add_option("--to", sw_to, "last abscissa");
    sweep->add_option("--points", sw_points, "abscissa count");
    sweep->add_option("--minus-from", sw_minus_from, "first Omega_- (figs 10, 11)");
    sweep->add_option("--minus-to", sw_minus_to, "last Omega_-");
    sweep->add_option("--minus-points", sw_minus_points, "Omega_- count");
    sweep->add_option("--jobs", sw_jobs, "worker threads (default: OSC_TRANSPORT_JOBS or 1)");
    sweep->add_option("--out", sw_out, "CSV (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? Ok : Usage;
    }

    try {
        if (*solve) {
            const io::Problem p = solve_flags.problem();
            emit(solve_out, io::to_text(io::solve_document(p, solve_tol)), out);
            return Ok;
        }

        if (*simulate_cmd) {
            const io::json doc = io::parse_text(read_file(sim_in));
            const Protocol protocol = io::protocol_from_json(doc);
            double d = 0.0;
            if (sim_d) d = *sim_d;
            else if (doc.is_object() && doc.contains("params")) d = io::problem_from_json(doc).d;
            else osc_transport::detail::fail(ErrorKind::InvalidArgument, "--d is required for a bare protocol");
            const double T = protocol.total_duration();
            const double step = sim_step ? *sim_step : (T > 0.0 ? T / 1000.0 : 1.0);
            const Trajectory traj = simulate(protocol, {}, step);
            std::ostringstream csv;
            io::write_trajectory_csv(csv, traj);
            emit(sim_out, csv.str(), out);
            const BoundaryReport rep = boundary_residual(traj.final, d, sim_tol);
            io::json r = {{"schema_version", io::schema_version}, {"residuals", io::to_json(rep)}};
            emit(sim_report, io::to_text(r), err);
            return rep.passed ? Ok : VerificationFailed;
        }

        if (*verify_cmd) {
            const io::json doc = io::parse_text(read_file(ver_in));
            const auto v = io::verify_document(doc, ver_tol);
            emit(ver_out, io::to_text(io::to_json(v)), out);
            return v.passed ? Ok : VerificationFailed;
        }

        if (*oracle_cmd) {
            const io::Problem p = oracle_flags.problem();
            if (p.variable) spec.max_switches = 6;
            if (max_switches) spec.max_switches = *max_switches;
            spec.allow_asymmetric = !symmetric_only;
            spec.oscillator = !no_oscillator;
            spec.jobs = oracle_jobs;
            OracleResult r;
            if (p.variable) {
                r = search_variable(p.scaled_band(), spec);
                // back to SI
                const Scaling sc = p.scaling();
                r.best_t_f = sc.from_scaled_time(r.best_t_f);
                r.analytic_t_f = sc.from_scaled_time(r.analytic_t_f);
                r.margin = sc.from_scaled_time(r.margin);
                for (auto& pb : r.patterns) pb.t_f = sc.from_scaled_time(pb.t_f);
                r.best_protocol = sc.from_scaled(r.best_protocol);
            } else {
                r = search_fixed({p.d, p.a_max, p.omega}, spec);
            }
            emit(oracle_out, io::to_text(io::to_json(p, r)), out);
            return r.relative_margin >= -oracle_tol ? Ok : VerificationFailed;
        }

        if (*sweep) {
            std::ostringstream csv;
            auto num = [](double v) { return io::format_number(v); };
            if (fig == 3 || fig == 4) {
                const auto grid = linspace(sw_from.value_or(fig == 3 ? 0.25 : 0.05),
                                           sw_to.value_or(fig == 3 ? 10.0 : 3.0), sw_points.value_or(40));
                std::vector<FixedSweepRow> rows;
                if (fig == 3) {
                    const double omega = sw_omega.value_or(two_pi);
                    const double dw = d_omega(omega, sw_a);
                    std::vector<double> d_grid;
                    for (double r : grid) d_grid.push_back(r * dw);
                    rows = sweep_distance(omega, sw_a, d_grid, sw_jobs);
                    io::write_csv_row(csv, {"d", "d_over_d_omega", "t_f", "T_abs", "t1", "region"});
                    for (std::size_t i = 0; i < rows.size(); ++i) rows[i].scaled_abscissa = grid[i];
                } else {
                    const double wr = omega_res(sw_d, sw_a);
                    std::vector<double> w_grid;
                    for (double r : grid) w_grid.push_back(r * wr);
                    rows = sweep_omega(sw_d, sw_a, w_grid, sw_jobs);
                    io::write_csv_row(csv, {"omega", "omega_over_omega_res", "t_f", "T_abs", "t1", "region"});
                    for (std::size_t i = 0; i < rows.size(); ++i) rows[i].scaled_abscissa = grid[i];
                }
                for (const auto& r : rows)
                    io::write_csv_row(csv, {num(r.abscissa), num(r.scaled_abscissa), num(r.t_f), num(r.T_abs),
                                            num(r.t1), r.resonant ? "Resonant" : "Fixed"});
            } else {
                // Grids in physical Omega; defaults cover the figure's window for d = a_max = 1.
                const Scaling sc(sw_d, sw_a);
                const double rate = sc.rate();
                std::vector<double> wp, wm;
                if (fig == 9) {
                    wp = linspace(sw_from.value_or(0.5 * rate), sw_to.value_or(6.0 * rate), sw_points.value_or(56));
                    wm = {0.0};
                } else {
                    // Each figure covers one resonance window: [0, 2 pi) or [2 pi, 4 pi).
                    const double lo = fig == 10 ? 0.0 : 1.02 * two_pi;
                    const double hi = fig == 10 ? 0.98 * two_pi : 1.98 * two_pi;
                    const double lo_plus = fig == 10 ? 0.2 : lo;
                    wp = linspace(sw_from.value_or(lo_plus * rate), sw_to.value_or(hi * rate), sw_points.value_or(32));
                    wm = linspace(sw_minus_from.value_or(lo * rate), sw_minus_to.value_or(hi * rate),
                                  sw_minus_points.value_or(32));
                }
                std::vector<double> swp, swm;
                for (double w : wp) swp.push_back(sc.to_scaled_frequency(w));
                for (double w : wm) swm.push_back(sc.to_scaled_frequency(w));
                const auto rows = sweep_surface(swm, swp, sw_jobs);
                io::write_csv_row(csv, {"omega_minus", "omega_plus", "t_f", "T_abs", "t1", "region"});
                const double T = t_abs(sw_d, sw_a);
                for (const auto& r : rows)
                    io::write_csv_row(csv, {num(sc.from_scaled_frequency(r.omega_minus)),
                                            num(sc.from_scaled_frequency(r.omega_plus)),
                                            num(sc.from_scaled_time(r.tau_f)), num(T),
                                            num(sc.from_scaled_time(r.tau1)), to_string(r.region)});
            }
            emit(sw_out, csv.str(), out);
            return Ok;
        }
    } catch (const TransportError& e) {
        err << "error: " << e.what() << '\n';
        return exit_code(e.kind());
    }
    return Usage;
}

} // namespace osc_transport::cli
