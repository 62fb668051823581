#include <iostream>

#include <CLI11.hpp>

#include "adreg/adreg.hpp"

// Exit codes: 0 success, 2 configuration error, 3 runtime divergence.

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kDiverged = 3;

struct CommonOpts {
    std::string scenario_path;
    std::string out_dir;
    double dt_override = 0.0;
    double t_final_override = -1.0;
};

adreg::ResolvedScenario load_and_resolve(const CommonOpts& opts, adreg::ScenarioFile& sc) {
    sc = adreg::load_scenario(opts.scenario_path);
    if (opts.dt_override > 0.0) sc.dt = opts.dt_override;
    if (opts.t_final_override >= 0.0) sc.t_final = opts.t_final_override;
    return adreg::resolve_scenario(sc);
}

int cmd_run(const CommonOpts& opts) {
    adreg::ScenarioFile sc;
    adreg::ResolvedScenario rs;
    try {
        rs = load_and_resolve(opts, sc);
    } catch (const std::exception& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kConfigError;
    }
    try {
        std::filesystem::create_directories(opts.out_dir);
        auto [traj, rep] = adreg::run(*rs.model, rs.gains, rs.config);
        adreg::write_trajectory_csv(std::filesystem::path(opts.out_dir) / "trajectory.csv",
                                    *rs.model, traj);
        adreg::write_summary_json(std::filesystem::path(opts.out_dir) / "summary.json",
                                  adreg::summary_json(sc, rs, rep));
        std::cout << "final_output_error=" << adreg::format_double(rep.final_output_error)
                  << " final_param_error=" << adreg::format_double(rep.final_param_error)
                  << (rep.diverged ? " DIVERGED" : "") << "\n";
        if (rep.diverged) {
            std::cerr << "runtime divergence at t=" << rep.stop_time << ": " << rep.fault
                      << "\n";
            return kDiverged;
        }
        return kOk;
    } catch (const std::exception& e) {
        std::cerr << "runtime fault: " << e.what() << "\n";
        return kDiverged;
    }
}

int cmd_check(const CommonOpts& opts) {
    adreg::ScenarioFile sc;
    adreg::ResolvedScenario rs;
    try {
        rs = load_and_resolve(opts, sc);
    } catch (const std::exception& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kConfigError;
    }
    try {
        const adreg::SystemModel& model = *rs.model;
        const adreg::CompactSets& sets = model.default_sets;
        const adreg::Vec rho_grid = adreg::grid_axis(sets.P.lo[0], sets.P.hi[0], 3);
        const auto taus = adreg::attractor_tau_samples(model, rho_grid);

        std::vector<adreg::CheckReport> reports;
        reports.push_back(adreg::check_monotonicity(model, sets, taus));
        {
            std::vector<adreg::Vec> s_grid;
            for (double s : adreg::grid_axis(-sets.theta_halfwidth[0], sets.theta_halfwidth[0], 9))
                s_grid.push_back({s});
            reports.push_back(adreg::check_pe(model, taus, s_grid));
        }
        reports.push_back(adreg::check_attractor_bound(model, rho_grid));
        reports.push_back(adreg::check_b_lower_bound(model, sets));
        reports.push_back(adreg::check_immersion(model, rho_grid));

        bool all = true;
        for (const auto& r : reports) {
            std::cout << adreg::check_report_line(r) << "\n";
            all = all && r.passed;
        }
        return all ? kOk : 1;
    } catch (const std::exception& e) {
        std::cerr << "runtime fault: " << e.what() << "\n";
        return kDiverged;
    }
}

int cmd_sweep(const CommonOpts& opts, const std::string& param,
              const std::vector<double>& values) {
    adreg::ScenarioFile sc;
    adreg::ResolvedScenario rs;
    try {
        rs = load_and_resolve(opts, sc);
        if (values.empty()) throw adreg::ScenarioError("sweep needs at least one value");
        // reject unknown parameter names before any run
        adreg::RegulatorGains g = rs.gains;
        adreg::SimConfig c = rs.config;
        adreg::apply_sweep_param(param, values[0], g, c);
    } catch (const std::exception& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kConfigError;
    }
    try {
        std::filesystem::create_directories(opts.out_dir);
        std::vector<adreg::SweepAxis> axes{{param, values}};
        const auto rows = adreg::sweep(*rs.model, rs.gains, rs.config, axes);
        adreg::write_sweep_csv(std::filesystem::path(opts.out_dir) / "sweep.csv", rows);
        for (const auto& row : rows) {
            std::cout << param << "=" << adreg::format_double(row.params[0].second);
            if (!row.error.empty())
                std::cout << " error: " << row.error;
            else
                std::cout << " final_output_error="
                          << adreg::format_double(row.report.final_output_error)
                          << (row.report.diverged ? " DIVERGED" : "");
            std::cout << "\n";
        }
        return kOk;
    } catch (const std::exception& e) {
        std::cerr << "runtime fault: " << e.what() << "\n";
        return kDiverged;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"adaptive internal-model regulator simulator"};
    app.require_subcommand(1);

    CommonOpts opts;
    bool seedless = false;  // the tool is deterministic; flag documents it
    app.add_flag("--seedless", seedless, "deterministic mode (always on; no randomness)");

    auto* run = app.add_subcommand("run", "simulate a scenario, write trajectory.csv and summary.json");
    run->add_option("scenario", opts.scenario_path, "scenario file")->required();
    run->add_option("--out", opts.out_dir, "output directory")->required();
    run->add_option("--dt", opts.dt_override, "override integration step");
    run->add_option("--t-final", opts.t_final_override, "override horizon");

    auto* check = app.add_subcommand("check", "run assumption checkers for the scenario's model");
    check->add_option("scenario", opts.scenario_path, "scenario file")->required();

    std::string param;
    std::vector<double> values;
    auto* sweep = app.add_subcommand("sweep", "run a parameter sweep, write sweep.csv");
    sweep->add_option("scenario", opts.scenario_path, "scenario file")->required();
    sweep->add_option("--param", param, "parameter to sweep")->required();
    sweep->add_option("--values", values, "comma-separated values")->required()->delimiter(',');
    sweep->add_option("--out", opts.out_dir, "output directory")->required();
    sweep->add_option("--dt", opts.dt_override, "override integration step");
    sweep->add_option("--t-final", opts.t_final_override, "override horizon");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kConfigError;
    }

    if (run->parsed()) return cmd_run(opts);
    if (check->parsed()) return cmd_check(opts);
    return cmd_sweep(opts, param, values);
}
