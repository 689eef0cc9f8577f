// tethersim command-line front end: single runs, sweep experiments, the
// catenary solver, and the effective-defaults dump.
//
// Exit codes: 0 success, 1 configuration/validation error, 2 runtime
// instability, 64 usage error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tethersim/catenary.hpp"
#include "tethersim/engine.hpp"
#include "tethersim/scenario.hpp"
#include "tethersim/sweep.hpp"

namespace {

namespace fs = std::filesystem;
using namespace tethersim;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open scenario file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

scenario::Scenario load_scenario_file(const std::string& path) {
    const std::string stem = fs::path(path).stem().string();
    return scenario::load_scenario(read_file(path), stem.empty() ? "scenario" : stem);
}

std::vector<std::string> split_csv(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        while (!item.empty() && item.front() == ' ') item.erase(item.begin());
        while (!item.empty() && item.back() == ' ') item.pop_back();
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

int cmd_run(const std::string& file, long seed_override, bool seed_given,
            const std::string& out_override, const std::string& config_set) {
    scenario::Scenario s = load_scenario_file(file);
    if (seed_given) s.sim.seed = seed_override;
    if (!config_set.empty()) {
        try {
            auto [mode, sea] = control::configuration_set(config_set);
            s.controller.mode = mode;
            s.controller.label = config_set;
            s.sea = sea;
        } catch (const UnknownSet& e) {
            throw ValidationError(std::string("--config-set: ") + e.what());
        }
    }

    const engine::RunResult result = engine::run(s);

    fs::path out_dir = out_override.empty()
                           ? (s.outputs.dir.empty() ? fs::path("results") /
                                  (s.name + "-" + std::to_string(s.sim.seed))
                                                    : fs::path(s.outputs.dir))
                           : fs::path(out_override);
    scenario::write_run_outputs(result, out_dir);

    const scenario::RunMetrics& m = result.metrics;
    std::printf("run %s (seed %ld): %zu rows -> %s\n", s.name.c_str(), s.sim.seed,
                result.rows.size(), out_dir.string().c_str());
    std::printf("  asv err mean/max: %.6g / %.6g m\n", m.asv_mean_err, m.asv_max_err);
    std::printf("  auv err mean/max: %.6g / %.6g m\n", m.auv_mean_err, m.auv_max_err);
    std::printf("  combined err:     %.6g m\n", m.combined_err);
    std::printf("  link dev min/max: %.4g%% / %.4g%%\n", m.link_dev_min_pct,
                m.link_dev_max_pct);
    std::printf("  peak tension:     %.6g N\n", m.peak_tension);
    return 0;
}

int cmd_sweep(const std::string& file, const std::string& axis_name,
              const std::string& values_csv, int seed_count,
              const std::string& out_override) {
    scenario::Scenario base = load_scenario_file(file);

    scenario::SweepAxis axis;
    if (axis_name == "tether-length") axis = scenario::SweepAxis::TetherLength;
    else if (axis_name == "config-set") axis = scenario::SweepAxis::ConfigSet;
    else throw ValidationError("--axis: expected 'tether-length' or 'config-set'");

    const std::vector<std::string> values = split_csv(values_csv);
    if (values.empty()) throw ValidationError("--values: need a comma-separated list");
    if (seed_count < 1) throw ValidationError("--seeds: need at least 1");
    std::vector<long> seeds;
    for (long i = 1; i <= seed_count; ++i) seeds.push_back(i);

    const scenario::SweepResult result = scenario::run_sweep(base, axis, values, seeds);

    const fs::path out_dir = out_override.empty()
                                 ? fs::path("results") / (base.name + "-sweep-" + axis_name)
                                 : fs::path(out_override);
    fs::create_directories(out_dir);
    scenario::write_text_file(out_dir / "sweep_summary.csv",
                              scenario::sweep_summary_csv(result));

    std::printf("sweep %s over %s -> %s\n", base.name.c_str(), axis_name.c_str(),
                (out_dir / "sweep_summary.csv").string().c_str());
    std::printf("%-18s %6s %16s %14s %14s\n", "cell", "seeds", "median_combined",
                "median_asv", "median_auv");
    bool any_failed = false;
    for (const scenario::SweepCell& c : result.cells) {
        std::printf("%-18s %6d %16.6g %14.6g %14.6g\n", c.cell_id.c_str(), c.seed_count,
                    c.median_combined_err, c.median_asv_err, c.median_auv_err);
        for (const std::string& err : c.errors) {
            std::fprintf(stderr, "  [failed] %s: %s\n", c.cell_id.c_str(), err.c_str());
            any_failed = true;
        }
    }
    return any_failed ? 2 : 0;
}

int cmd_catenary(double dx, double dz, double len, int samples) {
    const catenary::CatenarySolution sol = catenary::solve({dx, dz, len});
    std::printf("a = %.12g\n", sol.a);
    std::printf("c = %.12g\n", sol.c);
    std::printf("residual_dz = %.3e\n", sol.residual_dz);
    std::printf("residual_len = %.3e\n", sol.residual_len);
    if (samples > 0) {
        std::printf("i,x,z,arc\n");
        const std::vector<Vec3> pts = catenary::sample_equal_arc(sol, samples);
        for (size_t i = 0; i < pts.size(); ++i)
            std::printf("%zu,%.9g,%.9g,%.9g\n", i, pts[i].x, pts[i].z,
                        len * static_cast<double>(i) / samples);
    }
    return 0;
}

int cmd_explain(const std::string& vehicle) {
    const std::string text = scenario::dump_scenario(scenario::load_scenario("", "defaults"));
    if (vehicle.empty()) {
        std::fputs(text.c_str(), stdout);
        return 0;
    }
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        if (line.rfind(vehicle + ".", 0) == 0) std::printf("%s\n", line.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tethersim: coupled surface/underwater vehicle and tether simulator"};
    app.require_subcommand(1);

    std::string run_file, run_out, run_config_set;
    long run_seed = 0;
    bool run_seed_given = false;
    CLI::App* run = app.add_subcommand("run", "run one scenario file");
    run->add_option("scenario", run_file, "scenario file")->required();
    run->add_option("--seed", run_seed, "override sim.seed")
        ->each([&](const std::string&) { run_seed_given = true; });
    run->add_option("--out", run_out, "output directory (default results/<name>-<seed>)");
    run->add_option("--config-set", run_config_set,
                    "apply a configuration set (set_1..set_4) before running");

    std::string sweep_file, sweep_axis, sweep_values, sweep_out;
    int sweep_seeds = 5;
    CLI::App* sweep = app.add_subcommand("sweep", "run a sweep experiment");
    sweep->add_option("scenario", sweep_file, "base scenario file")->required();
    sweep->add_option("--axis", sweep_axis, "tether-length | config-set")->required();
    sweep->add_option("--values", sweep_values, "comma-separated axis values")->required();
    sweep->add_option("--seeds", sweep_seeds, "seeds per cell (1..K, default 5)");
    sweep->add_option("--out", sweep_out, "output directory");

    double cat_dx = 0.0, cat_dz = 0.0, cat_len = 0.0;
    int cat_samples = 0;
    CLI::App* cat = app.add_subcommand("catenary", "solve one static catenary");
    cat->add_option("--dx", cat_dx, "horizontal distance D (m)")->required();
    cat->add_option("--dz", cat_dz, "vertical displacement z_auv - z_asv (m)")->required();
    cat->add_option("--len", cat_len, "cable length L (m)")->required();
    cat->add_option("--samples", cat_samples, "print N+1 equal-arc sample points");

    std::string explain_vehicle;
    CLI::App* explain = app.add_subcommand("explain-params", "dump effective defaults");
    explain->add_option("--vehicle", explain_vehicle, "asv | auv: filter to one vehicle")
        ->check(CLI::IsMember({"asv", "auv"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 64;
    }

    try {
        if (run->parsed())
            return cmd_run(run_file, run_seed, run_seed_given, run_out, run_config_set);
        if (sweep->parsed())
            return cmd_sweep(sweep_file, sweep_axis, sweep_values, sweep_seeds, sweep_out);
        if (cat->parsed()) return cmd_catenary(cat_dx, cat_dz, cat_len, cat_samples);
        if (explain->parsed()) return cmd_explain(explain_vehicle);
    } catch (const Unstable& e) {
        std::fprintf(stderr, "error: unstable simulation: %s\n", e.what());
        return 2;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 64;
}
