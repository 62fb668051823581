#pragma once

#include <cstdio>
#include <filesystem>
#include <unistd.h>

#include <json.hpp>

#include "adreg/scenario.hpp"

// Trajectory CSV and summary JSON emission. Files are written to a
// temporary path and renamed, so concurrent writers never interleave.

namespace adreg {

inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::vector<std::string> csv_columns(const SystemModel& model) {
    StateLayout L(model);
    std::vector<std::string> cols{"t"};
    for (int i = 0; i < L.exo_dim; ++i) cols.push_back("w" + std::to_string(i + 1));
    for (int i = 0; i < L.n; ++i) cols.push_back("z" + std::to_string(i + 1));
    cols.push_back("x");
    for (int i = 0; i < L.d; ++i) cols.push_back("eta_" + std::to_string(i + 1));
    for (int i = 0; i < L.q; ++i) cols.push_back("theta_hat_" + std::to_string(i + 1));
    for (int i = 0; i < L.d; ++i) cols.push_back("xi_hat_" + std::to_string(i + 1));
    cols.push_back("sigma_hat");
    cols.push_back("u");
    cols.push_back("y_e");
    return cols;
}

namespace detail {
inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
    const auto tmp = path.parent_path() /
                     (path.filename().string() + ".tmp" + std::to_string(::getpid()));
    {
        std::ofstream f(tmp, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + tmp.string());
        f << content;
    }
    std::filesystem::rename(tmp, path);
}
}  // namespace detail

inline void write_trajectory_csv(const std::filesystem::path& path, const SystemModel& model,
                                 const Trajectory& traj) {
    StateLayout L(model);
    std::string out;
    const auto cols = csv_columns(model);
    for (size_t i = 0; i < cols.size(); ++i) {
        if (i) out += ',';
        out += cols[i];
    }
    out += '\n';
    for (size_t k = 0; k < traj.times.size(); ++k) {
        const Vec& s = traj.states[k];
        out += format_double(traj.times[k]);
        // skip the constant rho entry; columns start at w
        for (int i = 1; i < L.size(); ++i) {
            out += ',';
            out += format_double(s[i]);
        }
        out += ',';
        out += format_double(traj.controls[k]);
        out += ',';
        out += format_double(traj.outputs[k]);
        out += '\n';
    }
    detail::atomic_write(path, out);
}

inline nlohmann::json summary_json(const ScenarioFile& sc, const ResolvedScenario& rs,
                                   const ConvergenceReport& rep) {
    nlohmann::json j;
    j["model"] = sc.model;
    j["rho"] = sc.rho;
    j["final_output_error"] = rep.final_output_error;
    if (rep.output_settle_time)
        j["output_settle_time"] = *rep.output_settle_time;
    else
        j["output_settle_time"] = nullptr;
    j["final_param_error"] = rep.final_param_error;
    j["theta_hat_final"] = rep.theta_hat_final;
    j["sup_norms"] = rep.sup_norms;
    j["diverged"] = rep.diverged;
    j["stop_time"] = rep.stop_time;
    if (!rep.fault.empty()) j["fault"] = rep.fault;
    j["dt_used"] = rep.dt_used;
    j["steps"] = rep.steps;
    j["thresholds"] = {{"output_tol", sc.output_tol}, {"param_tol", sc.param_tol}};
    j["verdicts"] = {{"output_ok", !rep.diverged && rep.final_output_error < sc.output_tol},
                     {"param_ok", !rep.diverged && rep.final_param_error < sc.param_tol}};
    nlohmann::json resolved = nlohmann::json::object();
    for (const auto& [key, vals] : rs.resolved)
        resolved[key] = vals.size() == 1 ? nlohmann::json(vals[0]) : nlohmann::json(vals);
    j["resolved"] = resolved;
    return j;
}

inline void write_summary_json(const std::filesystem::path& path, const nlohmann::json& j) {
    detail::atomic_write(path, j.dump(2) + "\n");
}

inline std::string check_report_line(const CheckReport& rep) {
    std::string line = rep.passed ? "[PASS] " : "[FAIL] ";
    line += rep.name;
    line += " worst=" + format_double(rep.worst_value);
    line += " samples=" + std::to_string(rep.samples_used);
    if (rep.trivial) line += " (trivial)";
    if (!rep.note.empty()) line += " -- " + rep.note;
    return line;
}

inline void write_sweep_csv(const std::filesystem::path& path,
                            const std::vector<SweepRow>& rows) {
    if (rows.empty()) throw std::invalid_argument("write_sweep_csv: no rows");
    std::string out;
    for (const auto& [name, _] : rows[0].params) {
        out += name;
        out += ',';
    }
    out += "final_output_error,output_settle_time,final_param_error,diverged,stop_time,error\n";
    for (const auto& row : rows) {
        for (const auto& [_, value] : row.params) {
            out += format_double(value);
            out += ',';
        }
        if (row.error.empty()) {
            const auto& r = row.report;
            out += format_double(r.final_output_error);
            out += ',';
            out += r.output_settle_time ? format_double(*r.output_settle_time) : "";
            out += ',';
            out += format_double(r.final_param_error);
            out += ',';
            out += r.diverged ? "1" : "0";
            out += ',';
            out += format_double(r.stop_time);
            out += ",\n";
        } else {
            out += ",,,,,\"" + row.error + "\"\n";
        }
    }
    detail::atomic_write(path, out);
}

}  // namespace adreg
