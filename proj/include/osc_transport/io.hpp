// Solution / protocol documents (JSON) and CSV tables for the CLI.
// Physical units everywhere except the "scaled" diagnostics block.
#pragma once

#include <osc_transport/core.hpp>
#include <osc_transport/fixed_solver.hpp>
#include <osc_transport/oracle.hpp>
#include <osc_transport/pmp.hpp>
#include <osc_transport/variable_solver.hpp>

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace osc_transport::io {

using json = nlohmann::ordered_json;

inline constexpr int schema_version = 1;

/// %.17g; non-finite values become null.
inline std::string format_number(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace detail_io {

inline void write(std::string& out, const json& j, int level) {
    const std::string pad(2 * (level + 1), ' '), close_pad(2 * level, ' ');
    switch (j.type()) {
    case json::value_t::object: {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        std::size_t i = 0;
        for (auto it = j.begin(); it != j.end(); ++it, ++i) {
            out += pad + json(it.key()).dump() + ": ";
            write(out, it.value(), level + 1);
            out += i + 1 < j.size() ? ",\n" : "\n";
        }
        out += close_pad + "}";
        return;
    }
    case json::value_t::array: {
        if (j.empty()) {
            out += "[]";
            return;
        }
        out += "[\n";
        for (std::size_t i = 0; i < j.size(); ++i) {
            out += pad;
            write(out, j[i], level + 1);
            out += i + 1 < j.size() ? ",\n" : "\n";
        }
        out += close_pad + "]";
        return;
    }
    case json::value_t::number_float: out += format_number(j.get<double>()); return;
    default: out += j.dump(); return;
    }
}

} // namespace detail_io

inline std::string to_text(const json& j) {
    std::string out;
    detail_io::write(out, j, 0);
    out += '\n';
    return out;
}

inline json parse_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        osc_transport::detail::fail(ErrorKind::Parse, e.what());
    }
}

// ------------------------------------------------------------ protocol ----

inline json to_json(const Protocol& p) {
    json segs = json::array();
    for (const auto& s : p.segments) segs.push_back({{"duration", s.duration}, {"u", s.u}, {"omega", s.omega}});
    return {{"a_max", p.a_max}, {"segments", segs}};
}

namespace detail_io {

inline double number(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key) || !j[key].is_number())
        osc_transport::detail::fail(ErrorKind::Parse, std::string("missing or non-numeric field '") + key + "'");
    return j[key].get<double>();
}

inline std::string text(const json& j, const char* key) {
    if (!j.contains(key) || j[key].is_null()) return {};
    if (!j[key].is_string())
        osc_transport::detail::fail(ErrorKind::Parse, std::string("field '") + key + "' must be a string");
    return j[key].get<std::string>();
}

} // namespace detail_io

/// Accepts a bare protocol {a_max, segments} or any document with a
/// "protocol" member.
inline Protocol protocol_from_json(const json& doc) {
    using detail_io::number;
    const json& j = doc.is_object() && doc.contains("protocol") ? doc["protocol"] : doc;
    Protocol p;
    p.a_max = number(j, "a_max");
    if (!j.contains("segments") || !j["segments"].is_array())
        osc_transport::detail::fail(ErrorKind::Parse, "missing 'segments' array");
    for (const auto& s : j["segments"]) {
        const double u = number(s, "u");
        if (u != 1.0 && u != -1.0) osc_transport::detail::fail(ErrorKind::Parse, "segment u must be -1 or +1");
        p.segments.push_back({number(s, "duration"), static_cast<int>(u), number(s, "omega")});
    }
    try {
        validate(p);
    } catch (const TransportError& e) {
        osc_transport::detail::fail(ErrorKind::Parse, e.what());
    }
    return p;
}

// -------------------------------------------------------------- problem ---

/// Physical problem: fixed Omega, or a band [Omega_-, Omega_+].
struct Problem {
    double d = 1.0;
    double a_max = 1.0;
    bool variable = false;
    double omega = 0.0;
    double omega_minus = 0.0;
    double omega_plus = 0.0;

    Scaling scaling() const { return Scaling(d, a_max); }
    Band scaled_band() const {
        const Scaling s = scaling();
        return {s.to_scaled_frequency(omega_minus), s.to_scaled_frequency(omega_plus)};
    }
};

inline json to_json(const Problem& p) {
    json j{{"d", p.d}, {"a_max", p.a_max}};
    if (p.variable) {
        j["omega_minus"] = p.omega_minus;
        j["omega_plus"] = p.omega_plus;
    } else {
        j["omega"] = p.omega;
    }
    return j;
}

inline Problem problem_from_json(const json& doc) {
    using detail_io::number;
    if (!doc.is_object() || !doc.contains("params"))
        osc_transport::detail::fail(ErrorKind::Parse, "missing 'params'");
    const json& j = doc["params"];
    Problem p;
    p.d = number(j, "d");
    p.a_max = number(j, "a_max");
    p.variable = j.contains("omega_minus");
    if (p.variable) {
        p.omega_minus = number(j, "omega_minus");
        p.omega_plus = number(j, "omega_plus");
    } else {
        p.omega = number(j, "omega");
    }
    return p;
}

inline json to_json(const BoundaryReport& r) {
    return {{"x_h", r.residual_xh},
            {"v_h", r.residual_vh},
            {"v_w", r.residual_vw},
            {"distance", r.residual_distance},
            {"passed", r.passed}};
}

inline json to_json(const VerificationReport& r) {
    return {{"passed", r.passed},
            {"switching_sign_violations", r.switching_sign_violations},
            {"max_switch_residual", r.max_switch_residual},
            {"max_hamiltonian_deviation", r.max_hamiltonian_deviation},
            {"omega_rule_violations", r.omega_rule_violations},
            {"omega_switch_residuals", r.omega_switch_residuals}};
}

// ------------------------------------------------------------- solutions --

/// Solve `p`, simulate the protocol and attach boundary and PMP diagnostics.
inline json solve_document(const Problem& p, double tol = 1e-9) {
    json doc{{"schema_version", schema_version}, {"params", to_json(p)}};
    const Scaling sc = p.scaling();
    if (!p.variable) {
        const FixedSolution s = solve_fixed({p.d, p.a_max, p.omega});
        doc["result"] = {{"t_f", s.t_f},       {"t1", s.t1},         {"region", s.resonant ? "Resonant" : "Fixed"},
                         {"sequence", nullptr}, {"resonant", s.resonant}, {"T_abs", s.T_abs}};
        doc["protocol"] = to_json(s.protocol);
        const auto boundary = boundary_residual(propagate(s.protocol), p.d, tol);
        doc["diagnostics"] = {{"residuals", to_json(boundary)},
                              {"pmp", to_json(verify(s))},
                              {"scaled",
                               {{"tau_f", sc.to_scaled_time(s.t_f)},
                                {"tau1", sc.to_scaled_time(s.t1)},
                                {"omega", sc.to_scaled_frequency(p.omega)}}}};
        return doc;
    }
    const VariableSolution s = solve_variable(p.scaled_band());
    const Protocol physical = sc.from_scaled(s.protocol);
    doc["result"] = {{"t_f", sc.from_scaled_time(s.tau_f)},
                     {"t1", sc.from_scaled_time(s.tau1)},
                     {"region", to_string(s.region.region)},
                     {"sequence", to_string(s.sequence)},
                     {"resonant", s.region.region == Region::Resonant},
                     {"T_abs", t_abs(p.d, p.a_max)},
                     {"sub_band",
                      {{"omega_minus", sc.from_scaled_frequency(s.sub_band.omega_minus)},
                       {"omega_plus", sc.from_scaled_frequency(s.sub_band.omega_plus)}}}};
    doc["protocol"] = to_json(physical);
    const auto boundary = boundary_residual(propagate(physical), p.d, tol);
    doc["diagnostics"] = {{"residuals", to_json(boundary)},
                          {"pmp", to_json(verify(s))},
                          {"scaled",
                           {{"tau_f", s.tau_f},
                            {"tau1", s.tau1},
                            {"omega_minus", s.band.omega_minus},
                            {"omega_plus", s.band.omega_plus}}}};
    return doc;
}

inline FixedSolution fixed_solution_from_document(const json& doc) {
    using detail_io::number;
    const Problem p = problem_from_json(doc);
    if (!doc.contains("result")) osc_transport::detail::fail(ErrorKind::Parse, "missing 'result'");
    const json& r = doc["result"];
    FixedSolution s;
    s.params = {p.d, p.a_max, p.omega};
    s.t_f = number(r, "t_f");
    s.t1 = number(r, "t1");
    s.resonant = r.contains("resonant") && r["resonant"].is_boolean() && r["resonant"].get<bool>();
    s.T_abs = t_abs(p.d, p.a_max);
    s.omega_res = omega_res(p.d, p.a_max);
    s.protocol = protocol_from_json(doc);
    return s;
}

/// Scaled VariableSolution rebuilt from a document; protocol scaled too.
inline VariableSolution variable_solution_from_document(const json& doc) {
    using detail_io::number;
    const Problem p = problem_from_json(doc);
    if (!doc.contains("result")) osc_transport::detail::fail(ErrorKind::Parse, "missing 'result'");
    const json& r = doc["result"];
    const Scaling sc = p.scaling();
    VariableSolution s;
    s.band = p.scaled_band();
    s.tau_f = sc.to_scaled_time(number(r, "t_f"));
    s.tau1 = sc.to_scaled_time(number(r, "t1"));
    const std::string region = detail_io::text(r, "region");
    bool known = false;
    for (auto reg : {Region::Resonant, Region::SinglePlus, Region::Interior, Region::TAbsRegion})
        if (region == to_string(reg)) s.region.region = reg, known = true;
    if (!known) osc_transport::detail::fail(ErrorKind::Parse, "unknown region '" + region + "'");
    const auto seq = sequence_from_string(detail_io::text(r, "sequence"));
    if (!seq) osc_transport::detail::fail(ErrorKind::Parse, "unknown sequence");
    s.sequence = *seq;
    s.region.sequence = *seq;
    s.sub_band = s.band;
    if (r.contains("sub_band"))
        s.sub_band = {sc.to_scaled_frequency(number(r["sub_band"], "omega_minus")),
                      sc.to_scaled_frequency(number(r["sub_band"], "omega_plus"))};
    s.protocol = sc.to_scaled(protocol_from_json(doc));
    return s;
}

struct VerifyOutcome {
    BoundaryReport boundary;
    VerificationReport pmp;
    bool passed = false;
};

/// Boundary closure plus the PMP certificate of the document's protocol.
inline VerifyOutcome verify_document(const json& doc, double tol = 1e-8) {
    const Problem p = problem_from_json(doc);
    VerifyOutcome v;
    const Protocol protocol = protocol_from_json(doc);
    v.boundary = boundary_residual(propagate(protocol), p.d, std::max(tol, 1e-9));
    if (p.variable) {
        const VariableSolution s = variable_solution_from_document(doc);
        v.pmp = verify(s, s.protocol, tol);
    } else {
        const FixedSolution s = fixed_solution_from_document(doc);
        v.pmp = verify(s, s.protocol, tol);
    }
    v.passed = v.boundary.passed && v.pmp.passed;
    return v;
}

inline json to_json(const VerifyOutcome& v) {
    return {{"schema_version", schema_version},
            {"passed", v.passed},
            {"residuals", to_json(v.boundary)},
            {"pmp", to_json(v.pmp)}};
}

inline json to_json(const Problem& p, const OracleResult& r) {
    json patterns = json::array();
    for (const auto& pb : r.patterns)
        patterns.push_back({{"pattern", pb.pattern}, {"reversed", pb.reversed}, {"t_f", pb.t_f}});
    return {{"schema_version", schema_version},
            {"params", to_json(p)},
            {"oracle",
             {{"best_t_f", r.best_t_f},
              {"analytic_t_f", r.analytic_t_f},
              {"margin", r.margin},
              {"relative_margin", r.relative_margin},
              {"best_pattern", r.best_pattern},
              {"residual", r.residual},
              {"horizon", r.horizon},
              {"grid_step", r.grid_step},
              {"reversed_never_wins", r.reversed_never_wins},
              {"patterns", patterns}}},
            {"protocol", to_json(r.best_protocol)}};
}

// ------------------------------------------------------------------ CSV ---

inline void write_csv_row(std::ostream& os, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
    os << '\n';
}

inline void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
    write_csv_row(os, {"t", "x_h", "v_h", "x_w", "v_w"});
    for (const auto& s : traj.samples)
        write_csv_row(os, {format_number(s.t), format_number(s.x_h), format_number(s.v_h), format_number(s.x_w),
                           format_number(s.v_w)});
}

} // namespace osc_transport::io
